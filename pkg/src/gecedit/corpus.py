"""Parsing, validation, statistics and serialization for operation corpora.

Corpus file format (UTF-8 JSON): a top-level map from instance id to

.. code-block:: json

    {
      "sentence": "ABCDE",
      "error_flag": 1,
      "error_type": "IWO",
      "operation": [{"Switch": [0, 2, 1, 3, 4]}, {}],
      "external": null
    }

Per-reference operation grammar: ``Switch`` holds the output order of the
original character indices; ``Delete`` a list of indices; ``Insert`` and
``Modify`` lists of items ``{"pos": int, "tag": "INS_t" | "MOD_k",
"label": [chars]}``. ``INS_t`` inserts the t label characters after ``pos``;
``MOD_k`` replaces the k characters starting at ``pos`` with the label
(whose length may differ from k). ``error_type`` accepts a list or a
comma-separated string; ``error_flag`` accepts booleans or 0/1. An empty
object ``{}`` is the empty reference of an already-correct sentence.

Stats records schema (one JSON object): ``{sentences, erroneous, switch,
delete, insert, modify, type_pct{...}, len{min, max, mean}, ref_hist[...],
mean_refs}`` where ``ref_hist[k]`` counts erroneous sentences with k+1
references and ``mean_refs`` averages references over erroneous sentences.

STG label records (line-delimited JSON, one per sentence): ``{id, first,
next[], tags[], fills}`` with tag strings like ``"K"`` or ``"I_2"`` and the
END sentinel equal to the sentence length.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import (
    CorrectionInstance,
    ErrorType,
    InsertItem,
    ModifyItem,
    Reference,
    Switch,
    validate_reference,
)
from .errors import EmptyInput, SchemaError
from .stg import PointerLabels, StgLabels, TagSequence, parse_tag

_OP_KEYS = ("Switch", "Delete", "Insert", "Modify")


def _label_chars(raw, record_id, path):
    if isinstance(raw, str):
        return raw
    if isinstance(raw, list) and all(isinstance(x, str) for x in raw):
        return "".join(raw)
    raise SchemaError(record_id, path, "label must be a string or list of strings")


def _parse_items(raw, prefix, record_id, path):
    items = []
    if not isinstance(raw, list):
        raise SchemaError(record_id, path, "expected a list of items")
    for k, entry in enumerate(raw):
        here = f"{path}[{k}]"
        if not isinstance(entry, dict):
            raise SchemaError(record_id, here, "expected an object")
        for key in ("pos", "tag", "label"):
            if key not in entry:
                raise SchemaError(record_id, f"{here}.{key}", "missing field")
        pos, tag = entry["pos"], entry["tag"]
        if not isinstance(pos, int):
            raise SchemaError(record_id, f"{here}.pos", "expected an integer")
        if not (isinstance(tag, str) and tag.startswith(prefix + "_")):
            raise SchemaError(record_id, f"{here}.tag", f"expected {prefix}_<count>")
        try:
            count = int(tag[len(prefix) + 1 :])
        except ValueError:
            raise SchemaError(record_id, f"{here}.tag", f"bad count in {tag!r}") from None
        if count < 1:
            raise SchemaError(record_id, f"{here}.tag", "count must be >= 1")
        label = _label_chars(entry["label"], record_id, f"{here}.label")
        if not label:
            raise SchemaError(record_id, f"{here}.label", "label must be non-empty")
        items.append((pos, count, label))
    return items


def reference_from_json(obj, record_id="?", path="operation") -> Reference:
    """One ``operation`` array entry to a :class:`Reference`."""
    if not isinstance(obj, dict):
        raise SchemaError(record_id, path, "expected an object")
    unknown = set(obj) - set(_OP_KEYS)
    if unknown:
        raise SchemaError(record_id, path, f"unknown operation keys {sorted(unknown)}")
    switch = None
    if "Switch" in obj:
        order = obj["Switch"]
        if not (isinstance(order, list) and all(isinstance(i, int) for i in order)):
            raise SchemaError(record_id, f"{path}.Switch", "expected a list of integers")
        switch = Switch(tuple(order))
    deletes = ()
    if "Delete" in obj:
        positions = obj["Delete"]
        if not (isinstance(positions, list) and all(isinstance(i, int) for i in positions)):
            raise SchemaError(record_id, f"{path}.Delete", "expected a list of integers")
        deletes = tuple(sorted(positions))
    inserts = []
    if "Insert" in obj:
        for pos, count, label in _parse_items(
            obj["Insert"], "INS", record_id, f"{path}.Insert"
        ):
            if count != len(label):
                raise SchemaError(
                    record_id,
                    f"{path}.Insert",
                    f"INS_{count} tag with {len(label)} label characters",
                )
            inserts.append(InsertItem(pos=pos, label=label))
    modifies = []
    if "Modify" in obj:
        for pos, count, label in _parse_items(
            obj["Modify"], "MOD", record_id, f"{path}.Modify"
        ):
            modifies.append(ModifyItem(pos=pos, span=count, label=label))
    return Reference(
        switch=switch,
        deletes=deletes,
        inserts=tuple(inserts),
        modifies=tuple(modifies),
    )


def reference_to_json(r: Reference) -> dict:
    """Inverse of :func:`reference_from_json`; ``{}`` for the empty reference."""
    obj: dict = {}
    if r.switch is not None:
        obj["Switch"] = list(r.switch.order)
    if r.deletes:
        obj["Delete"] = list(r.deletes)
    if r.inserts:
        obj["Insert"] = [
            {"pos": item.pos, "tag": f"INS_{item.count}", "label": list(item.label)}
            for item in r.inserts
        ]
    if r.modifies:
        obj["Modify"] = [
            {"pos": item.pos, "tag": f"MOD_{item.span}", "label": list(item.label)}
            for item in r.modifies
        ]
    return obj


def _parse_error_types(raw, record_id):
    if raw is None:
        return frozenset()
    if isinstance(raw, str):
        names = [part.strip() for part in raw.split(",") if part.strip()]
    elif isinstance(raw, list):
        names = [str(part) for part in raw]
    else:
        raise SchemaError(record_id, "error_type", "expected string or list")
    try:
        return frozenset(ErrorType(name) for name in names)
    except ValueError as exc:
        raise SchemaError(record_id, "error_type", str(exc)) from None


def instance_from_json(record_id: str, record: dict) -> CorrectionInstance:
    if not isinstance(record, dict):
        raise SchemaError(record_id, "", "expected an object")
    for key in ("sentence", "error_flag", "operation"):
        if key not in record:
            raise SchemaError(record_id, key, "missing field")
    sentence = record["sentence"]
    if not (isinstance(sentence, str) and sentence):
        raise SchemaError(record_id, "sentence", "expected a non-empty string")
    flag = record["error_flag"]
    if flag not in (0, 1, True, False):
        raise SchemaError(record_id, "error_flag", "expected a boolean or 0/1")
    operations = record["operation"]
    if not (isinstance(operations, list) and operations):
        raise SchemaError(record_id, "operation", "expected a non-empty list")
    references = tuple(
        reference_from_json(entry, record_id, f"operation[{k}]")
        for k, entry in enumerate(operations)
    )
    return CorrectionInstance(
        id=record_id,
        sentence=sentence,
        error_flag=bool(flag),
        error_types=_parse_error_types(record.get("error_type"), record_id),
        references=references,
        external=record.get("external"),
    )


def _load_json(source):
    if isinstance(source, dict):
        return source
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return json.load(handle)
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        return json.load(source)
    raise TypeError(f"unsupported corpus source {type(source)!r}")


def parse_corpus(source) -> list[CorrectionInstance]:
    """Strict parse: raises :class:`SchemaError` on the first bad record."""
    data = _load_json(source)
    return [instance_from_json(rid, record) for rid, record in data.items()]


def parse_corpus_lenient(source) -> tuple[list[CorrectionInstance], list[SchemaError]]:
    """Per-record parse collecting failures instead of aborting."""
    data = _load_json(source)
    instances, failures = [], []
    for rid, record in data.items():
        try:
            instances.append(instance_from_json(rid, record))
        except SchemaError as exc:
            failures.append(exc)
    return instances, failures


def instance_to_json(instance: CorrectionInstance) -> dict:
    return {
        "sentence": instance.sentence,
        "error_flag": int(instance.error_flag),
        "error_type": sorted(t.value for t in instance.error_types),
        "operation": [reference_to_json(r) for r in instance.references],
        "external": instance.external,
    }


def serialize_corpus(instances: list[CorrectionInstance]) -> dict:
    return {instance.id: instance_to_json(instance) for instance in instances}


@dataclass(frozen=True)
class CorpusFinding:
    instance_id: str
    field_path: str
    reason: str

    def __str__(self):
        return f"{self.instance_id}: {self.field_path}: {self.reason}"


def validate_corpus(instances: list[CorrectionInstance]) -> list[CorpusFinding]:
    """Per-instance consistency report; empty means clean."""
    findings = []
    for instance in instances:
        any_nonempty = any(not r.is_empty() for r in instance.references)
        if instance.error_flag != any_nonempty:
            findings.append(
                CorpusFinding(
                    instance.id,
                    "error_flag",
                    f"error_flag={int(instance.error_flag)} but "
                    f"{'some' if any_nonempty else 'no'} non-empty references",
                )
            )
        if instance.error_flag and not instance.error_types:
            findings.append(
                CorpusFinding(instance.id, "error_type", "missing for erroneous sentence")
            )
        if not instance.error_flag and instance.error_types:
            findings.append(
                CorpusFinding(instance.id, "error_type", "present for correct sentence")
            )
        for k, reference in enumerate(instance.references):
            for violation in validate_reference(instance.sentence, reference):
                findings.append(
                    CorpusFinding(
                        instance.id,
                        f"operation[{k}].{violation.field_path}",
                        violation.reason,
                    )
                )
        if len(set(instance.references)) < len(instance.references):
            findings.append(
                CorpusFinding(instance.id, "operation", "duplicate references")
            )
    return findings


@dataclass(frozen=True)
class CorpusStats:
    sentences: int
    erroneous: int
    op_counts: dict[str, int]
    type_pct: dict[str, float]
    len_min: int
    len_max: int
    len_mean: float
    ref_hist: list[int]
    mean_refs: float

    def as_record(self) -> dict:
        return {
            "sentences": self.sentences,
            "erroneous": self.erroneous,
            **self.op_counts,
            "type_pct": self.type_pct,
            "len": {"min": self.len_min, "max": self.len_max, "mean": self.len_mean},
            "ref_hist": self.ref_hist,
            "mean_refs": self.mean_refs,
        }

    def as_text(self) -> str:
        lines = [
            f"sentences  {self.sentences}",
            f"erroneous  {self.erroneous}",
            "operations "
            + "  ".join(f"{k}={v}" for k, v in self.op_counts.items()),
            "types(%)   "
            + "  ".join(f"{k}={v:.2f}" for k, v in self.type_pct.items()),
            f"length     min={self.len_min} max={self.len_max} mean={self.len_mean:.2f}",
            "ref_hist   "
            + "  ".join(f"{k + 1}:{v}" for k, v in enumerate(self.ref_hist)),
            f"mean_refs  {self.mean_refs:.2f}",
        ]
        return "\n".join(lines)


def compute_stats(instances: list[CorrectionInstance], dedupe: bool = False) -> CorpusStats:
    """Corpus-level statistics.

    Operation counting convention: per reference, a present switch counts
    once, a non-empty delete group counts once, and each insert/modify item
    counts once. ``dedupe`` collapses duplicate references within an
    instance before counting.
    """
    if not instances:
        raise EmptyInput("no instances")
    ops = {"switch": 0, "delete": 0, "insert": 0, "modify": 0}
    type_counts: dict[str, int] = {t.value: 0 for t in ErrorType}
    lengths = []
    hist: dict[int, int] = {}
    erroneous = 0
    total_refs = 0
    for instance in instances:
        lengths.append(len(instance.sentence))
        references = list(instance.references)
        if dedupe:
            seen = set()
            references = [r for r in references if not (r in seen or seen.add(r))]
        nonempty = [r for r in references if not r.is_empty()]
        if instance.error_flag:
            erroneous += 1
            hist[len(nonempty)] = hist.get(len(nonempty), 0) + 1
            total_refs += len(nonempty)
        for etype in instance.error_types:
            type_counts[etype.value] += 1
        for reference in nonempty:
            if reference.switch is not None and not reference.switch.is_identity():
                ops["switch"] += 1
            if reference.deletes:
                ops["delete"] += 1
            ops["insert"] += len(reference.inserts)
            ops["modify"] += len(reference.modifies)
    total_types = sum(type_counts.values())
    type_pct = {
        name: (100.0 * count / total_types if total_types else 0.0)
        for name, count in type_counts.items()
    }
    max_refs = max(hist) if hist else 0
    return CorpusStats(
        sentences=len(instances),
        erroneous=erroneous,
        op_counts=ops,
        type_pct=type_pct,
        len_min=min(lengths),
        len_max=max(lengths),
        len_mean=sum(lengths) / len(lengths),
        ref_hist=[hist.get(k, 0) for k in range(1, max_refs + 1)],
        mean_refs=total_refs / erroneous if erroneous else 0.0,
    )


def stg_labels_to_record(instance_id: str, labels: StgLabels) -> dict:
    return {
        "id": instance_id,
        "first": labels.pointers.first,
        "next": list(labels.pointers.next),
        "tags": [str(tag) for tag in labels.tags.tags],
        "fills": labels.tags.fills,
    }


def stg_labels_from_record(record: dict) -> tuple[str, StgLabels]:
    pointers = PointerLabels(
        n=len(record["next"]), first=record["first"], next=tuple(record["next"])
    )
    tags = TagSequence(
        tags=tuple(parse_tag(t) for t in record["tags"]), fills=record["fills"]
    )
    return record["id"], StgLabels(pointers=pointers, tags=tags)
