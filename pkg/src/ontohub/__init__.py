"""Toolkit for a bilingual professional mathematics ontology: parsing and
validation, inference-rule materialization, external-dataset alignment,
formula-occurrence search over an annotated corpus, taxonomy-submission
assessment, and an HTTP hub tying it together."""

from .assess import (
    AssessmentReport,
    EdgeCategory,
    Fragment,
    FragmentError,
    Group,
    GroupSummary,
    InvalidEdgeError,
    Scores,
    Submission,
    SubmissionFormatError,
    aggregate,
    categorize_edge,
    detect_fragment_roots,
    extract_fragment,
    format_assessment_table,
    fscore,
    load_submission,
    round2,
    score,
)
from .corpus import (
    Article,
    Corpus,
    CorpusError,
    CorpusLoadError,
    Formula,
    Segment,
    SegmentType,
    SymbolOccurrence,
    TextOccurrence,
    load_corpus,
    load_corpus_report,
)
from .interlink import (
    AlignmentConfig,
    AlignmentLink,
    ExternalDataset,
    ExternalResource,
    MatchMethod,
    ResourceLabel,
    align,
    category_scope,
    emit_closematch,
    normalize_label,
)
from .model import (
    Edge,
    Label,
    Ontology,
    OntologyClass,
    RelationKind,
    Stats,
    Taxonomy,
    UnknownClassError,
    Violation,
    ViolationCode,
    class_id_num,
    is_class_id,
    isa_cycle_groups,
    validate,
)
from .reasoner import (
    ASSERTED,
    Direction,
    IsaCycleError,
    MaterializedGraph,
    ReasonerConfig,
    Rule,
    materialize,
)
from .search import (
    HitDetails,
    Index,
    SearchHit,
    SearchQuery,
    Suggestion,
    SuggestionSource,
    UnknownFormulaError,
    build_index,
    build_index_report,
    hit_details,
    search,
    suggest,
)
from .service import Hub, ServiceConfig, Snapshot, build_snapshot, create_app
from .turtle import (
    ParseError,
    RdfParseError,
    ontology_fingerprint,
    parse_dataset,
    parse_dataset_report,
    parse_turtle,
    parse_turtle_report,
    serialize_materialized,
    serialize_turtle,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
