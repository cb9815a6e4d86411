"""HTTP backend for the annotation workbench.

Workflow: each sentence becomes a task assigned on demand to 2-4 distinct
annotators (round-robin by current assignment count). Annotators submit up
to 5 references each; submissions are normalized to minimal form and
previewed as realized sentences. A diff view compares the realized-output
sets of all submissions -- agreement holds iff every annotator's set of
realized targets is identical -- and disagreeing tasks queue for an expert,
whose resolution (deduplicated by realized output) finalizes the task.
Resolved tasks export in the corpus JSON format and re-parse losslessly.

Endpoints (all under /v1, errors as ``{code, message, field_path}``):

* ``GET  /v1/tasks/next?annotator=ID`` -- assign and return the next task
* ``GET  /v1/tasks/{id}``              -- task state
* ``POST /v1/tasks/{id}/submissions``  -- ``{"annotator", "operations"}``
* ``GET  /v1/tasks/{id}/diff``         -- agreement diff (>=2 submissions)
* ``POST /v1/tasks/{id}/resolution``   -- ``{"expert", "operations"}``
* ``GET  /v1/export``                  -- resolved tasks as a corpus file
* ``GET  /v1/preview?src=...&ops=...`` -- stateless validate + preview

Persistence is an append-only ``events.jsonl`` in the data directory plus a
periodic ``snapshot.json``; startup loads the snapshot and replays the tail
of the log.
"""

from __future__ import annotations

import json
from pathlib import Path
from threading import Lock

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .core import CorrectionInstance, Reference, apply_reference, validate_reference
from .corpus import (
    parse_corpus,
    reference_from_json,
    reference_to_json,
    serialize_corpus,
)
from .errors import (
    GecEditError,
    InsufficientSubmissions,
    InvalidReference,
    NotAssigned,
    SchemaError,
    TooManyReferences,
)
from .minedit import normalize_reference

MAX_REFERENCES = 5
MIN_ANNOTATORS, MAX_ANNOTATORS = 2, 4
SNAPSHOT_EVERY = 100

OPEN, CONFLICTING, RESOLVED = "open", "conflicting", "resolved"


class Task:
    def __init__(self, instance: CorrectionInstance):
        self.instance = instance
        self.assigned: list[str] = []
        # annotator id -> list of normalized References
        self.submissions: dict[str, list[Reference]] = {}
        self.status = OPEN
        self.resolution: list[Reference] | None = None
        self.audit: list[dict] = []

    def to_json(self) -> dict:
        return {
            "id": self.instance.id,
            "sentence": self.instance.sentence,
            "error_flag": int(self.instance.error_flag),
            "error_type": sorted(t.value for t in self.instance.error_types),
            "assigned": list(self.assigned),
            "status": self.status,
            "submissions": {
                annotator: [reference_to_json(r) for r in refs]
                for annotator, refs in self.submissions.items()
            },
            "resolution": (
                [reference_to_json(r) for r in self.resolution]
                if self.resolution is not None
                else None
            ),
            "audit": list(self.audit),
        }


class AnnotationStore:
    """All task state plus the event log; every mutation is serialized."""

    def __init__(self, instances: list[CorrectionInstance], data_dir=None):
        self.tasks: dict[str, Task] = {i.id: Task(i) for i in instances}
        self.order = [i.id for i in instances]
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.lock = Lock()
        self.event_count = 0
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._recover()

    # -- persistence ------------------------------------------------------

    @property
    def _log_path(self):
        return self.data_dir / "events.jsonl"

    @property
    def _snapshot_path(self):
        return self.data_dir / "snapshot.json"

    def _recover(self):
        replay_from = 0
        if self._snapshot_path.exists():
            snapshot = json.loads(self._snapshot_path.read_text(encoding="utf-8"))
            replay_from = snapshot["event_count"]
            self._load_state(snapshot["tasks"])
            self.event_count = replay_from
        if self._log_path.exists():
            with open(self._log_path, encoding="utf-8") as handle:
                for k, line in enumerate(handle):
                    if k < replay_from or not line.strip():
                        continue
                    self._apply_event(json.loads(line))
                    self.event_count = k + 1

    def _load_state(self, state: dict):
        for task_id, record in state.items():
            task = self.tasks.get(task_id)
            if task is None:
                continue
            task.assigned = list(record["assigned"])
            task.status = record["status"]
            task.submissions = {
                annotator: [reference_from_json(o, task_id) for o in refs]
                for annotator, refs in record["submissions"].items()
            }
            task.resolution = (
                [reference_from_json(o, task_id) for o in record["resolution"]]
                if record["resolution"] is not None
                else None
            )
            task.audit = list(record["audit"])

    def _append_event(self, event: dict):
        if self.data_dir is None:
            self.event_count += 1
            return
        with open(self._log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(event, ensure_ascii=False) + "\n")
        self.event_count += 1
        if self.event_count % SNAPSHOT_EVERY == 0:
            self._write_snapshot()

    def _write_snapshot(self):
        snapshot = {
            "event_count": self.event_count,
            "tasks": {task_id: task.to_json() for task_id, task in self.tasks.items()},
        }
        for key in ("id", "sentence", "error_flag", "error_type"):
            for record in snapshot["tasks"].values():
                record.pop(key, None)
        tmp = self._snapshot_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(snapshot, ensure_ascii=False), encoding="utf-8")
        tmp.replace(self._snapshot_path)

    def _apply_event(self, event: dict):
        kind = event["event"]
        task = self.tasks[event["task"]]
        if kind == "assign":
            if event["annotator"] not in task.assigned:
                task.assigned.append(event["annotator"])
        elif kind == "submit":
            task.submissions[event["annotator"]] = [
                reference_from_json(o, task.instance.id) for o in event["operations"]
            ]
            task.status = event["status"]
        elif kind == "resolve":
            task.resolution = [
                reference_from_json(o, task.instance.id) for o in event["operations"]
            ]
            task.status = RESOLVED
            task.audit.append({"expert": event["expert"], "seq": event["seq"]})

    # -- domain operations ------------------------------------------------

    def next_task(self, annotator: str) -> Task | None:
        """Round-robin assignment keeping annotators distinct per task.

        Prefers tasks still short of the two-annotator minimum, then tasks
        with room up to four; never assigns the same annotator twice.
        """
        with self.lock:
            for threshold in (MIN_ANNOTATORS, MAX_ANNOTATORS):
                for task_id in self.order:
                    task = self.tasks[task_id]
                    if task.status == RESOLVED or annotator in task.assigned:
                        continue
                    if len(task.assigned) < threshold:
                        task.assigned.append(annotator)
                        self._append_event(
                            {"event": "assign", "task": task_id, "annotator": annotator}
                        )
                        return task
        return None

    def _check_references(self, sentence: str, raw_ops: list) -> list[Reference]:
        if not isinstance(raw_ops, list):
            raise SchemaError("?", "operations", "expected a list")
        if len(raw_ops) > MAX_REFERENCES:
            raise TooManyReferences(
                f"{len(raw_ops)} references submitted, maximum is {MAX_REFERENCES}"
            )
        references = []
        for k, obj in enumerate(raw_ops):
            reference = reference_from_json(obj, "?", f"operations[{k}]")
            violations = validate_reference(sentence, reference)
            if violations:
                raise InvalidReference(violations)
            references.append(normalize_reference(sentence, reference))
        return references

    def submit(self, task_id: str, annotator: str, raw_ops: list) -> dict:
        task = self.tasks[task_id]
        if annotator not in task.assigned:
            raise NotAssigned(f"annotator {annotator!r} is not assigned to {task_id}")
        references = self._check_references(task.instance.sentence, raw_ops)
        warnings = []
        for k, (obj, reference) in enumerate(zip(raw_ops, references)):
            if reference.is_empty() and obj:
                warnings.append(f"operations[{k}] is a no-op; stored as empty")
        with self.lock:
            task.submissions[annotator] = references
            task.status = self._status_after_submissions(task)
            self._append_event(
                {
                    "event": "submit",
                    "task": task_id,
                    "annotator": annotator,
                    "operations": [reference_to_json(r) for r in references],
                    "status": task.status,
                }
            )
        return {
            "operations": [reference_to_json(r) for r in references],
            "preview": [
                apply_reference(task.instance.sentence, r) for r in references
            ],
            "warnings": warnings,
            "status": task.status,
        }

    def _realized_sets(self, task: Task) -> dict[str, frozenset]:
        return {
            annotator: frozenset(
                apply_reference(task.instance.sentence, r) for r in refs
            )
            for annotator, refs in sorted(task.submissions.items())
        }

    def _status_after_submissions(self, task: Task) -> str:
        if task.status == RESOLVED:
            return RESOLVED
        if len(task.submissions) < 2:
            return OPEN
        sets = list(self._realized_sets(task).values())
        return OPEN if all(s == sets[0] for s in sets) else CONFLICTING

    def diff(self, task_id: str) -> dict:
        task = self.tasks[task_id]
        if len(task.submissions) < 2:
            raise InsufficientSubmissions(
                f"{len(task.submissions)} submission(s); need at least 2"
            )
        realized = self._realized_sets(task)
        annotators = sorted(realized)
        pairwise = [
            {
                "annotators": [a, b],
                "agree": realized[a] == realized[b],
                "only_first": sorted(realized[a] - realized[b]),
                "only_second": sorted(realized[b] - realized[a]),
            }
            for i, a in enumerate(annotators)
            for b in annotators[i + 1 :]
        ]
        agreement = all(entry["agree"] for entry in pairwise)
        return {
            "task": task_id,
            "agreement": agreement,
            "realized": {a: sorted(s) for a, s in realized.items()},
            "pairwise": pairwise,
        }

    def resolve(self, task_id: str, expert: str, raw_ops: list) -> Task:
        task = self.tasks[task_id]
        references = self._check_references(task.instance.sentence, raw_ops)
        if task.instance.error_flag and all(r.is_empty() for r in references):
            raise InvalidReference(
                ["resolution of an erroneous sentence needs a non-empty reference"]
            )
        # dedupe by realized output, keeping first occurrence
        seen, final = set(), []
        for reference in references:
            target = apply_reference(task.instance.sentence, reference)
            if target not in seen:
                seen.add(target)
                final.append(reference)
        with self.lock:
            task.resolution = final
            task.status = RESOLVED
            task.audit.append({"expert": expert, "seq": self.event_count})
            self._append_event(
                {
                    "event": "resolve",
                    "task": task_id,
                    "expert": expert,
                    "operations": [reference_to_json(r) for r in final],
                    "seq": self.event_count,
                }
            )
        return task

    def export(self, include_open: bool = False) -> dict:
        instances = []
        for task_id in self.order:
            task = self.tasks[task_id]
            if task.status == RESOLVED:
                references = tuple(task.resolution)
            elif include_open:
                references = task.instance.references
            else:
                continue
            base = task.instance
            instances.append(
                CorrectionInstance(
                    id=base.id,
                    sentence=base.sentence,
                    error_flag=base.error_flag,
                    error_types=base.error_types,
                    references=references if references else (Reference(),),
                    external=base.external,
                )
            )
        return serialize_corpus(instances)


def _error_response(status: int, code: str, message: str, field_path: str = ""):
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "field_path": field_path},
    )


_ERROR_STATUS = {
    "NotAssigned": 403,
    "TooManyReferences": 422,
    "InvalidReference": 422,
    "SchemaError": 422,
    "InsufficientSubmissions": 409,
}


def create_app(data_dir=None, instances=None) -> FastAPI:
    """Application factory.

    ``instances`` seeds tasks directly; otherwise ``data_dir/corpus.json``
    is parsed. State mutations append to ``data_dir/events.jsonl`` when a
    data directory is given.
    """
    if instances is None:
        if data_dir is None:
            raise ValueError("need instances or a data directory with corpus.json")
        instances = parse_corpus(Path(data_dir) / "corpus.json")
    store = AnnotationStore(instances, data_dir=data_dir)
    app = FastAPI(title="annotation workbench service")
    app.state.store = store

    @app.exception_handler(GecEditError)
    async def _domain_error(request: Request, exc: GecEditError):
        code = type(exc).__name__
        field_path = getattr(exc, "field_path", "")
        return _error_response(_ERROR_STATUS.get(code, 400), code, str(exc), field_path)

    def _get_task(task_id: str) -> Task:
        task = store.tasks.get(task_id)
        if task is None:
            raise KeyError(task_id)
        return task

    @app.exception_handler(KeyError)
    async def _not_found(request: Request, exc: KeyError):
        return _error_response(404, "NotFound", f"no task {exc.args[0]!r}", "id")

    @app.get("/v1/tasks/next")
    def tasks_next(annotator: str):
        task = store.next_task(annotator)
        if task is None:
            return _error_response(
                404, "NoTaskAvailable", "no open task for this annotator", ""
            )
        return task.to_json()

    @app.get("/v1/tasks/{task_id}")
    def get_task(task_id: str):
        return _get_task(task_id).to_json()

    @app.post("/v1/tasks/{task_id}/submissions")
    async def post_submission(task_id: str, request: Request):
        body = await request.json()
        _get_task(task_id)
        for key in ("annotator", "operations"):
            if key not in body:
                return _error_response(422, "SchemaError", "missing field", key)
        return store.submit(task_id, body["annotator"], body["operations"])

    @app.get("/v1/tasks/{task_id}/diff")
    def get_diff(task_id: str):
        _get_task(task_id)
        return store.diff(task_id)

    @app.post("/v1/tasks/{task_id}/resolution")
    async def post_resolution(task_id: str, request: Request):
        body = await request.json()
        _get_task(task_id)
        for key in ("expert", "operations"):
            if key not in body:
                return _error_response(422, "SchemaError", "missing field", key)
        task = store.resolve(task_id, body["expert"], body["operations"])
        return task.to_json()

    @app.get("/v1/export")
    def get_export(include_open: bool = False):
        return store.export(include_open=include_open)

    @app.get("/v1/preview")
    def get_preview(src: str, ops: str):
        try:
            raw = json.loads(ops)
        except json.JSONDecodeError as exc:
            return _error_response(422, "SchemaError", f"ops is not JSON: {exc}", "ops")
        if isinstance(raw, dict):
            raw = [raw]
        references = store._check_references(src, raw)
        return {
            "operations": [reference_to_json(r) for r in references],
            "preview": [apply_reference(src, r) for r in references],
        }

    return app
