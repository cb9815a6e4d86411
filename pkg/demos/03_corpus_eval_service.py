"""Corpus parsing, statistics, multi-reference evaluation, and the
annotation service — end to end on a tiny in-memory corpus.

Run with:  python3 demos/03_corpus_eval_service.py
"""

import json

from gecedit import EvalRow, apply_reference, evaluate_corpus
from gecedit.corpus import compute_stats, parse_corpus, serialize_corpus
from gecedit.service import AnnotationStore

CORPUS = {
    "demo-1": {
        "sentence": "ABCDE",
        "error_flag": 1,
        "error_type": "IWO",
        "operation": [{"Switch": [0, 2, 1, 3, 4]}],
        "external": None,
    },
    "demo-2": {
        "sentence": "ABCDE",
        "error_flag": 1,
        "error_type": "CR",
        "operation": [{"Delete": [3]}, {"Delete": [4]}],
        "external": None,
    },
    "demo-3": {
        "sentence": "FGHIJ",
        "error_flag": 0,
        "error_type": None,
        "operation": [{}],
        "external": None,
    },
}

instances = parse_corpus(CORPUS)
print(compute_stats(instances).as_text())

# --- evaluation: exact match + span-level F0.5, best reference wins --------

rows = [
    EvalRow("ABCDE", "ACBDE", instances[0].references, instances[0].error_types),
    EvalRow("ABCDE", "ABCD", instances[1].references, instances[1].error_types),
    EvalRow("FGHIJ", "FGHIJ", instances[2].references, instances[2].error_types),
]
report = evaluate_corpus(rows)
print(f"\nEM {100 * report.exact_match:.2f}  P {report.precision:.3f}  "
      f"R {report.recall:.3f}  F0.5 {report.f_half:.3f}")

# --- a complete annotation session against the store -----------------------

store = AnnotationStore(instances)  # in-memory; pass data_dir= to persist
task = store.next_task("alice")
store.next_task("bob")
print("\nassigned", task.instance.id, "to", task.assigned)

store.submit(task.instance.id, "alice", [{"Delete": [1]}])
store.submit(
    task.instance.id,
    "bob",
    # a verbose rewrite realizing a different target -> disagreement
    [{"Modify": [{"pos": 0, "tag": "MOD_5", "label": list("ACBDE")}]}],
)
diff = store.diff(task.instance.id)
print("agreement:", diff["agreement"], "->", json.dumps(diff["realized"]))

store.resolve(task.instance.id, "expert", [{"Switch": [0, 2, 1, 3, 4]}])
exported = store.export()
print("exported:", json.dumps(exported, ensure_ascii=False))
assert parse_corpus(exported)  # round-trips through the parser
print("resolved target:",
      apply_reference("ABCDE", parse_corpus(exported)[0].references[0]))
