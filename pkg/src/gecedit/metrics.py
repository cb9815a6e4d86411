"""Multi-reference evaluation: Exact Match and char-level span F0.5.

Hypotheses are compared edit-by-edit against every realized reference;
consecutive character edits of the same kind are merged into spans, spans
must match exactly (kind, source range, replacement), and the reference
giving the highest F0.5 (ties: higher precision) scores the sentence.
Corpus numbers micro-average the summed counts of each row's best
reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import ErrorType, Reference, apply_reference
from .errors import EmptyInput
from .minedit import COPY, DELETE, INSERT, MODIFY, edit_path

INSERT_KIND, DELETE_KIND, SUBSTITUTE_KIND = "insert", "delete", "substitute"


@dataclass(frozen=True)
class EditSpan:
    """Span-level edit on original indices; ``start == end`` for inserts."""

    kind: str
    start: int
    end: int
    replacement: str


@dataclass(frozen=True)
class EvalScores:
    precision: float
    recall: float
    f_half: float
    exact_match: int
    tp: int
    hyp_count: int
    ref_count: int


@dataclass(frozen=True)
class EvalRow:
    source: str
    hypothesis: str
    references: tuple[Reference, ...]
    error_types: frozenset[ErrorType] = frozenset()


@dataclass(frozen=True)
class CorpusReport:
    """Aggregate over rows; ``exact_match`` and P/R/F are fractions in [0,1]."""

    rows: int
    exact_match: float
    precision: float
    recall: float
    f_half: float
    tp: int
    hyp_count: int
    ref_count: int
    per_type: dict[str, float] = field(default_factory=dict)


def extract_edits(src: str, tgt: str) -> list[EditSpan]:
    """Char-level minimum-edit alignment merged into same-kind spans."""
    spans: list[EditSpan] = []
    i = j = 0
    kind = None
    start = end = 0
    repl: list[str] = []

    def flush():
        if kind is not None:
            spans.append(EditSpan(kind, start, end, "".join(repl)))

    for move in edit_path(src, tgt):
        if move == COPY:
            flush()
            kind = None
            i += 1
            j += 1
            continue
        move_kind = {MODIFY: SUBSTITUTE_KIND, DELETE: DELETE_KIND, INSERT: INSERT_KIND}[
            move
        ]
        if move_kind != kind:
            flush()
            kind, start, end, repl = move_kind, i, i, []
        if move == MODIFY:
            repl.append(tgt[j])
            i += 1
            j += 1
        elif move == DELETE:
            i += 1
        else:
            repl.append(tgt[j])
            j += 1
        end = i
    flush()
    return spans


def match_edits(hyp: list[EditSpan], ref: list[EditSpan]) -> tuple[int, int, int]:
    """Exact-equality true positives plus both span counts."""
    tp = len(set(hyp) & set(ref))
    return tp, len(hyp), len(ref)


def f_beta_half(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 1.25 * precision * recall / (0.25 * precision + recall)


def _rates(tp: int, hyp_count: int, ref_count: int) -> tuple[float, float]:
    precision = tp / hyp_count if hyp_count else (1.0 if ref_count == 0 else 0.0)
    recall = tp / ref_count if ref_count else (1.0 if hyp_count == 0 else 0.0)
    return precision, recall


def evaluate_instance(src: str, hyp: str, refs: list[Reference]) -> EvalScores:
    """Best-reference scores for one sentence."""
    if not refs:
        raise EmptyInput("at least one reference required")
    realized = [apply_reference(src, r) for r in refs]
    exact = int(any(hyp == target for target in realized))
    hyp_edits = extract_edits(src, hyp)
    best = None
    for target in realized:
        tp, hyp_count, ref_count = match_edits(hyp_edits, extract_edits(src, target))
        precision, recall = _rates(tp, hyp_count, ref_count)
        scores = EvalScores(
            precision=precision,
            recall=recall,
            f_half=f_beta_half(precision, recall),
            exact_match=exact,
            tp=tp,
            hyp_count=hyp_count,
            ref_count=ref_count,
        )
        if best is None or (scores.f_half, scores.precision) > (
            best.f_half,
            best.precision,
        ):
            best = scores
    return best


def evaluate_corpus(rows: list[EvalRow]) -> CorpusReport:
    """Micro-averaged corpus scores over each row's best reference."""
    if not rows:
        raise EmptyInput("no rows to evaluate")
    tp = hyp_count = ref_count = 0
    em_sum = 0
    type_em: dict[str, list[int]] = {}
    for row in rows:
        scores = evaluate_instance(row.source, row.hypothesis, list(row.references))
        tp += scores.tp
        hyp_count += scores.hyp_count
        ref_count += scores.ref_count
        em_sum += scores.exact_match
        for etype in row.error_types:
            type_em.setdefault(etype.value, []).append(scores.exact_match)
    precision, recall = _rates(tp, hyp_count, ref_count)
    return CorpusReport(
        rows=len(rows),
        exact_match=em_sum / len(rows),
        precision=precision,
        recall=recall,
        f_half=f_beta_half(precision, recall),
        tp=tp,
        hyp_count=hyp_count,
        ref_count=ref_count,
        per_type={k: sum(v) / len(v) for k, v in sorted(type_em.items())},
    )
