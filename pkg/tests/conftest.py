from __future__ import annotations

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ontohub import (
    Hub,
    ServiceConfig,
    create_app,
    load_corpus,
    parse_dataset,
    parse_turtle,
)

FIXTURES = Path(__file__).parent / "fixtures"

ONTOLOGY_PATH = FIXTURES / "sample_ontology.ttl"
DATASET_PATH = FIXTURES / "dataset.nt"
CORPUS_PATH = FIXTURES / "corpus.jsonl"
LINKS_PATH = FIXTURES / "links.jsonl"
FRAGMENT_PATH = FIXTURES / "fragment.ttl"


@pytest.fixture(scope="session")
def ontology():
    return parse_turtle(ONTOLOGY_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def dataset():
    return parse_dataset(DATASET_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(CORPUS_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def hub():
    return Hub(
        ServiceConfig(
            ontology_path=ONTOLOGY_PATH,
            corpus_path=CORPUS_PATH,
            links_path=LINKS_PATH,
        )
    )


@pytest.fixture(scope="session")
def client(hub):
    with TestClient(create_app(hub)) as c:
        yield c
