"""Domain model for operation-oriented sentence correction.

A sentence is a plain ``str`` indexed by Unicode code point (0-based).
A :class:`Reference` bundles one complete way of correcting a sentence out
of four operation kinds:

* ``Switch`` -- a permutation of the original character indices,
* ``Delete`` -- positions to drop,
* ``Insert`` -- characters placed immediately *after* an anchor character,
* ``Modify`` -- a span of k characters replaced by a (possibly different
  length) label.

Delete/Insert/Modify positions always refer to *original* sentence indices.
Application is three-phase: edits are attached to their original index, the
switch permutation reorders the characters, and the attached edits are then
realized in output order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import InvalidReference


class ErrorType(enum.Enum):
    """Closed 7-member error taxonomy."""

    IWC = "IWC"  # incorrect word collocation
    CM = "CM"  # component missing
    CR = "CR"  # component redundancy
    SC = "SC"  # structure confusion
    IWO = "IWO"  # incorrect word order
    ILL = "ILL"  # illogical
    AM = "AM"  # ambiguity


@dataclass(frozen=True)
class Switch:
    """Permutation of the original character indices.

    ``order[k]`` is the original index of the k-th output character.
    """

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.order))


@dataclass(frozen=True)
class InsertItem:
    """Insert ``label`` immediately after the character at ``pos``."""

    pos: int
    label: str

    def __post_init__(self):
        if len(self.label) < 1:
            raise ValueError("insert label must be non-empty")

    @property
    def count(self) -> int:
        return len(self.label)


@dataclass(frozen=True)
class ModifyItem:
    """Replace the ``span`` characters starting at ``pos`` by ``label``."""

    pos: int
    span: int
    label: str

    def __post_init__(self):
        if self.span < 1:
            raise ValueError("modify span must be positive")
        if len(self.label) < 1:
            raise ValueError("modify label must be non-empty")


@dataclass(frozen=True)
class Reference:
    """One complete correction; the empty reference means "already correct"."""

    switch: Switch | None = None
    deletes: tuple[int, ...] = ()
    inserts: tuple[InsertItem, ...] = field(default=())
    modifies: tuple[ModifyItem, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "deletes", tuple(self.deletes))
        object.__setattr__(self, "inserts", tuple(self.inserts))
        object.__setattr__(self, "modifies", tuple(self.modifies))

    def is_empty(self) -> bool:
        return (
            self.switch is None
            and not self.deletes
            and not self.inserts
            and not self.modifies
        )


@dataclass(frozen=True)
class CorrectionInstance:
    """One corpus record: sentence plus its (possibly multiple) references."""

    id: str
    sentence: str
    error_flag: bool
    error_types: frozenset[ErrorType]
    references: tuple[Reference, ...]
    external: object = None

    def __post_init__(self):
        object.__setattr__(self, "error_types", frozenset(self.error_types))
        object.__setattr__(self, "references", tuple(self.references))


@dataclass(frozen=True)
class Violation:
    """One validation finding: which part of the reference broke which rule."""

    field_path: str
    reason: str

    def __str__(self):
        return f"{self.field_path}: {self.reason}"


def _edit_spans(r: Reference):
    """Original-index span [start, end) claimed by each non-switch item."""
    spans = []
    for i, p in enumerate(r.deletes):
        spans.append((p, p + 1, f"deletes[{i}]"))
    for i, item in enumerate(r.inserts):
        spans.append((item.pos, item.pos + 1, f"inserts[{i}]"))
    for i, item in enumerate(r.modifies):
        spans.append((item.pos, item.pos + item.span, f"modifies[{i}]"))
    return spans


def validate_reference(s: str, r: Reference) -> list[Violation]:
    """Check every reference invariant against ``s``; empty list means valid."""
    n = len(s)
    out = []
    if r.switch is not None:
        order = r.switch.order
        if sorted(order) != list(range(n)):
            if len(order) != n:
                out.append(Violation("switch.order", f"length {len(order)} != {n}"))
            else:
                out.append(Violation("switch.order", "not a permutation"))
    if list(r.deletes) != sorted(set(r.deletes)):
        out.append(Violation("deletes", "positions not strictly increasing"))
    for i, p in enumerate(r.deletes):
        if not 0 <= p < n:
            out.append(Violation(f"deletes[{i}]", f"index {p} out of range [0, {n})"))
    for i, item in enumerate(r.inserts):
        if not 0 <= item.pos < n:
            out.append(
                Violation(f"inserts[{i}].pos", f"index {item.pos} out of range [0, {n})")
            )
    for i, item in enumerate(r.modifies):
        if not 0 <= item.pos < n:
            out.append(
                Violation(f"modifies[{i}].pos", f"index {item.pos} out of range [0, {n})")
            )
        elif item.pos + item.span > n:
            out.append(
                Violation(
                    f"modifies[{i}]",
                    f"span [{item.pos}, {item.pos + item.span}) exceeds length {n}",
                )
            )
    # Overlap check only over items that passed their bounds checks.
    spans = [sp for sp in _edit_spans(r) if 0 <= sp[0] and sp[1] <= n]
    spans.sort()
    for (a0, a1, pa), (b0, b1, pb) in zip(spans, spans[1:]):
        if b0 < a1:
            out.append(Violation(pb, f"span overlaps {pa}"))
    return out


def apply_reference(s: str, r: Reference) -> str:
    """Apply ``r`` to ``s`` deterministically; raises on any invariant breach."""
    violations = validate_reference(s, r)
    if violations:
        raise InvalidReference(violations)
    n = len(s)
    order = r.switch.order if r.switch is not None else range(n)
    deleted = set(r.deletes)
    insert_after = {item.pos: item.label for item in r.inserts}
    replaced = {}  # span start -> label
    swallowed = set()  # span members after the start
    for item in r.modifies:
        replaced[item.pos] = item.label
        swallowed.update(range(item.pos + 1, item.pos + item.span))
    out = []
    for idx in order:
        if idx in deleted or idx in swallowed:
            pass
        elif idx in replaced:
            out.append(replaced[idx])
        else:
            out.append(s[idx])
        if idx in insert_after:
            out.append(insert_after[idx])
    return "".join(out)


def op_count(r: Reference) -> int:
    """Number of operations: non-identity switch + delete positions + items."""
    count = len(r.deletes) + len(r.inserts) + len(r.modifies)
    if r.switch is not None and not r.switch.is_identity():
        count += 1
    return count
