"""Machine-facing label codec for the Switch-Tagger-Generator pipeline.

Converts operation references into (and back from):

* pointer labels -- a permutation in next-character-index form,
* per-character compound tags K / D / I_t / M / MI_t with ordered fill
  characters for the masked slots,
* mask templates the generator fills left to right.

Also houses the neural-agnostic decode path: scaled dot-product attention
scoring and constrained beam search over a next-character score matrix.
Sentinels: for a sentence of length n, END = n in pointer labels; score
matrices use row/column n for BOS and n+1 for EOS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Reference, Switch, validate_reference
from .errors import (
    CycleOrOrphan,
    DegenerateMatrix,
    DimensionMismatch,
    FillCountMismatch,
    InsertionTooLong,
    InvalidPermutation,
    InvalidReference,
    LengthMismatch,
)

DEFAULT_T_MAX = 6
BEAM_EPS = 1e-12

KEEP, DELETE, INSERT, MOD, MOD_INSERT = "K", "D", "I", "M", "MI"


@dataclass(frozen=True)
class Tag:
    """One compound tag; ``t`` is the insertion count for I_t / MI_t."""

    kind: str
    t: int = 0

    def __post_init__(self):
        if self.kind not in (KEEP, DELETE, INSERT, MOD, MOD_INSERT):
            raise ValueError(f"unknown tag kind {self.kind!r}")
        if self.kind in (INSERT, MOD_INSERT) and self.t < 1:
            raise ValueError(f"{self.kind} requires t >= 1")
        if self.kind in (KEEP, DELETE, MOD) and self.t != 0:
            raise ValueError(f"{self.kind} carries no insertion count")

    @property
    def mask_count(self) -> int:
        """Slots this tag contributes to the template."""
        if self.kind == INSERT:
            return self.t
        if self.kind == MOD:
            return 1
        if self.kind == MOD_INSERT:
            return 1 + self.t
        return 0

    def __str__(self):
        if self.kind in (INSERT, MOD_INSERT):
            return f"{self.kind}_{self.t}"
        return self.kind


def parse_tag(text: str) -> Tag:
    kind, _, t = text.partition("_")
    return Tag(kind, int(t)) if t else Tag(kind)


@dataclass(frozen=True)
class TagSequence:
    """Per-character tags over the switched sentence plus ordered fills."""

    tags: tuple[Tag, ...]
    fills: str

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(self.tags))
        need = sum(tag.mask_count for tag in self.tags)
        if need != len(self.fills):
            raise FillCountMismatch(
                f"tags require {need} fill characters, got {len(self.fills)}"
            )


@dataclass(frozen=True)
class MaskTemplate:
    """Ordered literals and mask slots; slots are ``None`` entries."""

    parts: tuple[str | None, ...]

    @property
    def slot_count(self) -> int:
        return sum(1 for part in self.parts if part is None)


@dataclass(frozen=True)
class PointerLabels:
    """Next-character form of a permutation; END sentinel = n."""

    n: int
    first: int
    next: tuple[int, ...]


@dataclass(frozen=True)
class StgLabels:
    pointers: PointerLabels
    tags: TagSequence


def switch_to_pointers(n: int, switch: Switch | None) -> PointerLabels:
    """Permutation to pointer labels; identity when ``switch`` is absent."""
    order = switch.order if switch is not None else tuple(range(n))
    if sorted(order) != list(range(n)):
        raise InvalidPermutation(f"{order!r} is not a permutation of range({n})")
    nxt = [0] * n
    for here, there in zip(order, order[1:]):
        nxt[here] = there
    nxt[order[-1]] = n  # END
    return PointerLabels(n=n, first=order[0], next=tuple(nxt))


def pointers_to_permutation(p: PointerLabels) -> tuple[int, ...]:
    """Unique visiting order of valid pointer labels; inverse of the above."""
    order = []
    seen = set()
    idx = p.first
    while idx != p.n:
        if not 0 <= idx < p.n or idx in seen:
            raise CycleOrOrphan(f"pointer chain revisits or escapes at index {idx}")
        seen.add(idx)
        order.append(idx)
        idx = p.next[idx]
    if len(order) != p.n:
        raise CycleOrOrphan(
            f"pointer chain terminates after {len(order)} of {p.n} indices"
        )
    return tuple(order)


def encode_tags(
    switched: str,
    deletes: set[int],
    inserts: dict[int, str],
    modifies: list[tuple[int, int, str]],
    t_max: int = DEFAULT_T_MAX,
) -> TagSequence:
    """Compound tags for edits already mapped onto the switched sentence.

    ``inserts`` maps anchor position -> inserted characters; ``modifies``
    holds (start, span, label) triples. A k->m modify becomes k-1 M tags and
    a final MI when m > k, or m M tags and k-m D tags when m < k.
    """
    n = len(switched)
    kinds = [KEEP] * n
    counts = [0] * n
    # replacement characters per position, then insertions after it
    repl: dict[int, str] = {}
    for p in deletes:
        kinds[p] = DELETE
    for start, span, label in modifies:
        m = len(label)
        for offset in range(span):
            pos = start + offset
            if offset < min(span, m):
                kinds[pos] = MOD
                if offset == min(span, m) - 1 and m > span:
                    # surplus generated characters ride on the last span char
                    kinds[pos] = MOD_INSERT
                    counts[pos] = m - span
                    repl[pos] = label[offset:]
                else:
                    repl[pos] = label[offset]
            else:
                kinds[pos] = DELETE
    for pos, label in inserts.items():
        if kinds[pos] == MOD:
            kinds[pos] = MOD_INSERT
            counts[pos] = len(label)
            repl[pos] = repl[pos] + label
        elif kinds[pos] == MOD_INSERT:
            counts[pos] += len(label)
            repl[pos] = repl[pos] + label
        else:
            kinds[pos] = INSERT
            counts[pos] = len(label)
            repl[pos] = label
    for pos in range(n):
        if counts[pos] > t_max:
            raise InsertionTooLong(
                f"position {pos} needs t={counts[pos]} > t_max={t_max}"
            )
    tags = tuple(Tag(kinds[p], counts[p]) for p in range(n))
    fills = "".join(repl.get(p, "") for p in range(n))
    return TagSequence(tags=tags, fills=fills)


def build_mask_template(switched: str, tags: TagSequence | tuple[Tag, ...]) -> MaskTemplate:
    """Generator input: K keeps the literal, D drops it, masks open slots."""
    seq = tags.tags if isinstance(tags, TagSequence) else tuple(tags)
    if len(seq) != len(switched):
        raise LengthMismatch(f"{len(seq)} tags for {len(switched)} characters")
    parts: list[str | None] = []
    for ch, tag in zip(switched, seq):
        if tag.kind == KEEP:
            parts.append(ch)
        elif tag.kind == DELETE:
            pass
        elif tag.kind == INSERT:
            parts.append(ch)
            parts.extend([None] * tag.t)
        elif tag.kind == MOD:
            parts.append(None)
        else:  # MI_t
            parts.extend([None] * (1 + tag.t))
    return MaskTemplate(parts=tuple(parts))


def fill_template(template: MaskTemplate, fills: str) -> str:
    """Replace slots left to right with ``fills``."""
    if template.slot_count != len(fills):
        raise FillCountMismatch(
            f"template has {template.slot_count} slots, got {len(fills)} fills"
        )
    out = []
    it = iter(fills)
    for part in template.parts:
        out.append(next(it) if part is None else part)
    return "".join(out)


def encode_instance(s: str, r: Reference, t_max: int = DEFAULT_T_MAX) -> StgLabels:
    """Reference to STG labels: pointers plus tags on the switched sentence."""
    violations = validate_reference(s, r)
    if violations:
        raise InvalidReference(violations)
    n = len(s)
    pointers = switch_to_pointers(n, r.switch)
    order = r.switch.order if r.switch is not None else tuple(range(n))
    where = {orig: pos for pos, orig in enumerate(order)}
    switched = "".join(s[i] for i in order)
    deletes = {where[p] for p in r.deletes}
    inserts = {where[item.pos]: item.label for item in r.inserts}
    modifies = []
    for item in r.modifies:
        mapped = [where[item.pos + k] for k in range(item.span)]
        if mapped != list(range(mapped[0], mapped[0] + item.span)):
            raise InvalidReference(
                [f"modify span at {item.pos} is not contiguous after the switch"]
            )
        modifies.append((mapped[0], item.span, item.label))
    tags = encode_tags(switched, deletes, inserts, modifies, t_max=t_max)
    return StgLabels(pointers=pointers, tags=tags)


def decode_instance(s: str, labels: StgLabels) -> str:
    """Pipeline decode: reorder by pointers, build the template, fill it."""
    order = pointers_to_permutation(labels.pointers)
    switched = "".join(s[i] for i in order)
    template = build_mask_template(switched, labels.tags)
    return fill_template(template, labels.tags.fills)


def attention_scores(q, k) -> np.ndarray:
    """Row-normalized scaled dot-product scores: softmax(QK^T / sqrt(d))."""
    q = np.asarray(q, dtype=float)
    k = np.asarray(k, dtype=float)
    if q.ndim != 2 or k.ndim != 2 or q.shape != k.shape or q.shape[1] < 1:
        raise DimensionMismatch(f"incompatible shapes {q.shape} and {k.shape}")
    logits = q @ k.T / math.sqrt(q.shape[1])
    logits -= logits.max(axis=1, keepdims=True)
    weights = np.exp(logits)
    return weights / weights.sum(axis=1, keepdims=True)


def beam_decode_permutation(scores, beam_width: int = 5) -> tuple[int, ...]:
    """Best-scoring character order under visited-set-constrained beam search.

    ``scores`` is (n+2)x(n+2) with BOS row n and EOS column n+1; path score
    is the sum of log(score + eps) along BOS -> pi(0) -> ... -> EOS. Widths
    of at least n * 2**n disable pruning entirely (exhaustive mode), which
    guarantees the global optimum. Non-positive entries are floored at eps
    so every finite matrix decodes to a complete permutation.
    """
    a = np.asarray(scores, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 3:
        raise DimensionMismatch(f"expected (n+2)x(n+2) matrix, got {a.shape}")
    if not np.isfinite(a).all():
        raise DegenerateMatrix("score matrix contains non-finite entries")
    if beam_width < 1:
        raise ValueError("beam width must be >= 1")
    n = a.shape[0] - 2
    bos, eos = n, n + 1
    log_a = np.log(np.maximum(a, 0.0) + BEAM_EPS)
    exhaustive = beam_width >= n * 2**n

    beams: list[tuple[tuple[int, ...], float]] = [((), 0.0)]
    for _ in range(n):
        candidates = []
        for path, score in beams:
            last = path[-1] if path else bos
            used = set(path)
            for nxt in range(n):
                if nxt not in used:
                    candidates.append((path + (nxt,), score + log_a[last, nxt]))
        candidates.sort(key=lambda c: (-c[1], c[0]))
        beams = candidates if exhaustive else candidates[:beam_width]
    best = min(beams, key=lambda c: (-(c[1] + log_a[c[0][-1], eos]), c[0]))
    return best[0]
