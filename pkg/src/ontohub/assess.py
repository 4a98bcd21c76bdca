"""Competence assessment against a gold sub-ontology.

A fragment (task tree + method tree + solves edges) serves as the gold
standard. Participant submissions assert isa and solves edges over the
fragment's classes; both sides are materialized (isa transitivity plus
solves inheritance, no inverse completion) and compared per relation
category with precision, recall, and F-score. Group summaries average
participant scores cell-wise, rounded half-up to two decimals.

Arithmetic runs on exact rationals internally; floats appear only in the
reported values, so scoring is deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .model import Edge, Ontology, RelationKind, UnknownClassError, class_id_num, is_class_id
from .reasoner import ReasonerConfig, Rule, materialize

_SCORING_RULES = frozenset({Rule.ISA_TRANSITIVITY, Rule.SOLVES_INHERITANCE})
_SCORED_KINDS = (RelationKind.ISA, RelationKind.SOLVES)


class Group(Enum):
    UNDERGRAD3 = "undergrad3"
    MASTER1 = "master1"
    MASTER2 = "master2"
    PHD = "phd"


class EdgeCategory(Enum):
    ISA_TASKS = "ISA_TASKS"
    ISA_METHODS = "ISA_METHODS"
    SOLVES = "SOLVES"


class FragmentError(ValueError):
    """A seed class cannot reach either fragment root."""


class InvalidEdgeError(ValueError):
    """An isa edge does not stay within one of the fragment's trees."""


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f_score: float


@dataclass(frozen=True)
class Fragment:
    """Gold sub-ontology restricted to isa and solves edges, with tree
    membership precomputed for edge categorization."""

    ontology: Ontology
    task_root: str
    method_root: str
    task_members: frozenset[str]
    method_members: frozenset[str]


@dataclass(frozen=True)
class Submission:
    participant_id: str
    group: Group
    edges: frozenset[Edge]


@dataclass(frozen=True)
class AssessmentReport:
    participant_id: str
    group: Group
    per_category: dict[EdgeCategory, Scores]
    total: Scores
    excluded_edge_count: int


@dataclass(frozen=True)
class GroupSummary:
    group: Group
    per_category: dict[EdgeCategory, Scores]
    total: Scores


def extract_fragment(
    ontology: Ontology, seed_ids: set[str], task_root: str, method_root: str
) -> Fragment:
    """Induced subgraph on the seeds keeping isa and solves edges only
    (solvedBy edges convert to their solves inverses).

    Raises :class:`UnknownClassError` for seeds missing from the ontology
    and :class:`FragmentError` when a seed reaches neither root via isa.
    """
    seeds = set(seed_ids)
    for root in (task_root, method_root):
        if root not in seeds:
            raise ValueError(f"root {root} must be part of the seed set")
    for seed in sorted(seeds, key=class_id_num):
        if seed not in ontology.classes:
            raise UnknownClassError(seed)

    frag = Ontology(method_root=method_root, problem_root=task_root)
    for seed in seeds:
        frag.add_class(ontology.classes[seed])
    for edge in ontology.edges:
        if edge.subject not in seeds or edge.object not in seeds:
            continue
        if edge.kind in _SCORED_KINDS:
            frag.add_edge(edge.subject, edge.kind, edge.object)
        elif edge.kind is RelationKind.SOLVED_BY:
            frag.add_edge(edge.object, RelationKind.SOLVES, edge.subject)

    task_members = _tree_members(frag, task_root)
    method_members = _tree_members(frag, method_root)
    stranded = sorted(seeds - (task_members | method_members), key=class_id_num)
    if stranded:
        raise FragmentError(
            "classes reach neither fragment root via isa: " + ", ".join(stranded)
        )
    return Fragment(frag, task_root, method_root, frozenset(task_members), frozenset(method_members))


def _tree_members(ontology: Ontology, root: str) -> set[str]:
    return ontology.descendants(root) | {root}


def categorize_edge(fragment: Fragment, edge: Edge) -> EdgeCategory:
    """SOLVES for solves edges; ISA_TASKS/ISA_METHODS for isa edges whose
    endpoints both sit in the corresponding tree (per the gold fragment's
    membership, also for submitted edges)."""
    if edge.kind is RelationKind.SOLVES:
        return EdgeCategory.SOLVES
    if edge.kind is not RelationKind.ISA:
        raise ValueError(f"only isa and solves edges are categorized, got {edge.kind.value}")
    if edge.subject in fragment.task_members and edge.object in fragment.task_members:
        return EdgeCategory.ISA_TASKS
    if edge.subject in fragment.method_members and edge.object in fragment.method_members:
        return EdgeCategory.ISA_METHODS
    raise InvalidEdgeError(
        f"isa edge {edge.subject} -> {edge.object} does not stay within one tree"
    )


def fscore(p: float | Fraction, r: float | Fraction) -> float:
    """Harmonic mean 2pr/(p+r), 0 when both are 0. Exact in rationals."""
    p_frac, r_frac = Fraction(p), Fraction(r)
    if not (0 <= p_frac <= 1 and 0 <= r_frac <= 1):
        raise ValueError(f"precision/recall must be within [0, 1], got {p}, {r}")
    if p_frac + r_frac == 0:
        return 0.0
    return float(2 * p_frac * r_frac / (p_frac + r_frac))


def round2(value: float | Fraction) -> float:
    """Round half-up to 2 decimals, exactly (no binary-float .xx5 traps)."""
    frac = Fraction(value)
    return float(math.floor(frac * 100 + Fraction(1, 2))) / 100.0


def _set_scores(s: set[Edge], g: set[Edge]) -> Scores:
    inter = len(s & g)
    p = Fraction(inter, len(s)) if s else Fraction(0)
    r = Fraction(inter, len(g)) if g else Fraction(0)
    f = Fraction(0) if p + r == 0 else 2 * p * r / (p + r)
    return Scores(float(p), float(r), float(f))


def score(
    fragment: Fragment, submission: Submission, materialize_submission: bool = True
) -> AssessmentReport:
    """Compare a submission against the materialized gold fragment.

    Invalid submission edges (an endpoint outside the fragment, a
    self-isa, or an isa crossing the two trees) are excluded from scoring
    and counted. Both sides are closed under isa transitivity and solves
    inheritance by default; the flag scores raw submission edges instead.
    A submission whose isa edges form a cycle cannot be materialized and
    raises the reasoner's cycle error.
    """
    excluded = 0
    clean: set[Edge] = set()
    for edge in submission.edges:
        if edge.kind not in _SCORED_KINDS:
            excluded += 1
            continue
        if (
            edge.subject not in fragment.ontology.classes
            or edge.object not in fragment.ontology.classes
        ):
            excluded += 1
            continue
        if edge.kind is RelationKind.ISA:
            if edge.subject == edge.object:
                excluded += 1
                continue
            try:
                categorize_edge(fragment, edge)
            except InvalidEdgeError:
                excluded += 1
                continue
        clean.add(edge)

    config = ReasonerConfig(enabled_rules=_SCORING_RULES)
    gold = {
        e for e in materialize(fragment.ontology, config).edges if e.kind in _SCORED_KINDS
    }
    if materialize_submission:
        sub_ontology = Ontology()
        for cls in fragment.ontology.classes.values():
            sub_ontology.add_class(cls)
        for edge in clean:
            sub_ontology.add_edge(edge.subject, edge.kind, edge.object)
        submitted = {e for e in materialize(sub_ontology, config).edges if e.kind in _SCORED_KINDS}
    else:
        submitted = clean

    gold_by_cat: dict[EdgeCategory, set[Edge]] = {c: set() for c in EdgeCategory}
    sub_by_cat: dict[EdgeCategory, set[Edge]] = {c: set() for c in EdgeCategory}
    for edge in gold:
        gold_by_cat[categorize_edge(fragment, edge)].add(edge)
    for edge in submitted:
        sub_by_cat[categorize_edge(fragment, edge)].add(edge)

    per_category = {
        category: _set_scores(sub_by_cat[category], gold_by_cat[category])
        for category in EdgeCategory
    }
    return AssessmentReport(
        participant_id=submission.participant_id,
        group=submission.group,
        per_category=per_category,
        total=_set_scores(submitted, gold),
        excluded_edge_count=excluded,
    )


def aggregate(reports: list[AssessmentReport]) -> list[GroupSummary]:
    """Cell-wise arithmetic means per group, rounded half-up to 2 decimals,
    in fixed group order. Groups without reports are omitted."""
    by_group: dict[Group, list[AssessmentReport]] = {}
    for report in reports:
        by_group.setdefault(report.group, []).append(report)

    summaries: list[GroupSummary] = []
    for group in Group:
        members = by_group.get(group)
        if not members:
            continue
        per_category = {
            category: _mean_scores([r.per_category[category] for r in members])
            for category in EdgeCategory
        }
        summaries.append(
            GroupSummary(group, per_category, _mean_scores([r.total for r in members]))
        )
    return summaries


def _mean_scores(cells: list[Scores]) -> Scores:
    n = len(cells)
    mean_p = sum(Fraction(c.precision) for c in cells) / n
    mean_r = sum(Fraction(c.recall) for c in cells) / n
    mean_f = sum(Fraction(c.f_score) for c in cells) / n
    return Scores(round2(mean_p), round2(mean_r), round2(mean_f))


# -- external formats ----------------------------------------------------------


class SubmissionFormatError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems[:3]) + (f" (+{len(problems) - 3} more)" if len(problems) > 3 else ""))


_EDGE_KIND_NAMES = {"isa": RelationKind.ISA, "solves": RelationKind.SOLVES}


def load_submission(data: bytes | str) -> Submission:
    """Parse a submission file: JSON object with participantId, group, and
    edges [{subject, kind: isa|solves, object}]."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    problems: list[str] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SubmissionFormatError([f"invalid JSON: {exc.msg}"]) from exc
    if not isinstance(raw, dict):
        raise SubmissionFormatError(["submission must be a JSON object"])

    participant = raw.get("participantId")
    if not isinstance(participant, str) or not participant:
        problems.append("participantId must be a non-empty string")
        participant = ""
    group_name = raw.get("group")
    group = None
    for candidate in Group:
        if candidate.value == group_name:
            group = candidate
    if group is None:
        expected = ", ".join(g.value for g in Group)
        problems.append(f"group must be one of {expected}, got {group_name!r}")

    edges: set[Edge] = set()
    raw_edges = raw.get("edges")
    if not isinstance(raw_edges, list):
        problems.append("edges must be a list")
        raw_edges = []
    for pos, item in enumerate(raw_edges):
        if not isinstance(item, dict):
            problems.append(f"edges[{pos}] must be an object")
            continue
        subject, kind_name, obj = item.get("subject"), item.get("kind"), item.get("object")
        kind = _EDGE_KIND_NAMES.get(kind_name)
        if kind is None:
            problems.append(f"edges[{pos}].kind must be 'isa' or 'solves', got {kind_name!r}")
            continue
        if not (isinstance(subject, str) and is_class_id(subject)):
            problems.append(f"edges[{pos}].subject must be a class id, got {subject!r}")
            continue
        if not (isinstance(obj, str) and is_class_id(obj)):
            problems.append(f"edges[{pos}].object must be a class id, got {obj!r}")
            continue
        edges.add(Edge(subject, kind, obj))

    if problems:
        raise SubmissionFormatError(problems)
    assert group is not None
    return Submission(participant, group, frozenset(edges))


def _scores_dict(scores: Scores) -> dict:
    return {"precision": scores.precision, "recall": scores.recall, "fScore": scores.f_score}


def report_to_dict(report: AssessmentReport) -> dict:
    return {
        "participantId": report.participant_id,
        "group": report.group.value,
        "perCategory": {
            category.value: _scores_dict(report.per_category[category])
            for category in EdgeCategory
        },
        "total": _scores_dict(report.total),
        "excludedEdgeCount": report.excluded_edge_count,
    }


def summary_to_dict(summary: GroupSummary) -> dict:
    return {
        "group": summary.group.value,
        "perCategory": {
            category.value: _scores_dict(summary.per_category[category])
            for category in EdgeCategory
        },
        "total": _scores_dict(summary.total),
    }


_TABLE_COLUMNS = [
    ("ISA Tasks", EdgeCategory.ISA_TASKS),
    ("ISA Methods", EdgeCategory.ISA_METHODS),
    ("P6 Solves", EdgeCategory.SOLVES),
    ("Total", None),
]


def format_assessment_table(summaries: list[GroupSummary]) -> str:
    """Fixed-width text table: one row per group, P/R/F per category."""
    header = f"{'Group':<12}" + "".join(f"{name:<18}" for name, _ in _TABLE_COLUMNS)
    sub = " " * 12 + "".join(f"{'P':<6}{'R':<6}{'F':<6}" for _ in _TABLE_COLUMNS)
    lines = [header.rstrip(), sub.rstrip()]
    for summary in summaries:
        row = f"{summary.group.value:<12}"
        for _, category in _TABLE_COLUMNS:
            cell = summary.total if category is None else summary.per_category[category]
            row += f"{round2(cell.precision):<6.2f}{round2(cell.recall):<6.2f}{round2(cell.f_score):<6.2f}"
        lines.append(row.rstrip())
    return "\n".join(lines)


def detect_fragment_roots(ontology: Ontology) -> tuple[str, str]:
    """Infer (task_root, method_root) from a standalone fragment file.

    Roots are the isa-maximal classes (no outgoing isa edge); the method
    root is the one reachable upward from solves subjects, the task root
    from solves objects. Raises ValueError when the shape is ambiguous."""
    has_parent = {e.subject for e in ontology.edges if e.kind is RelationKind.ISA}
    maximal = sorted(set(ontology.classes) - has_parent, key=class_id_num)
    if len(maximal) != 2:
        raise ValueError(
            f"expected exactly 2 isa-maximal classes to act as roots, found {len(maximal)}"
        )
    solves = [e for e in ontology.edges if e.kind is RelationKind.SOLVES]
    if not solves:
        raise ValueError("no solves edges; cannot tell the method tree from the task tree")

    def top_of(class_id: str) -> set[str]:
        return (ontology.ancestors(class_id) | {class_id}) & set(maximal)

    method_tops: set[str] = set()
    task_tops: set[str] = set()
    for edge in solves:
        method_tops |= top_of(edge.subject)
        task_tops |= top_of(edge.object)
    method_only = method_tops - task_tops
    task_only = task_tops - method_tops
    if len(method_only) == 1 and len(task_only) == 1:
        return next(iter(task_only)), next(iter(method_only))
    raise ValueError("solves edges do not separate the two trees; pass roots explicitly")
