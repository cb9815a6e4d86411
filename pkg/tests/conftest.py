import json

import pytest

# Small hand-built corpus exercising every operation kind, multi-reference
# instances, and an already-correct sentence.
SAMPLE_CORPUS = {
    "sent-001": {
        "sentence": "ABCDE",
        "error_flag": 1,
        "error_type": "IWO",
        "operation": [{"Switch": [0, 2, 1, 3, 4]}],
        "external": None,
    },
    "sent-002": {
        "sentence": "ABCDE",
        "error_flag": 1,
        "error_type": ["CR"],
        "operation": [{"Delete": [3]}],
        "external": {"note": "kept opaque"},
    },
    "sent-003": {
        "sentence": "ABCDE",
        "error_flag": 1,
        "error_type": "CM",
        "operation": [
            {"Insert": [{"pos": 1, "tag": "INS_1", "label": ["F"]}]},
            {"Insert": [{"pos": 1, "tag": "INS_2", "label": ["F", "G"]}]},
        ],
        "external": None,
    },
    "sent-004": {
        "sentence": "ABCDE",
        "error_flag": 1,
        "error_type": "IWC,SC",
        "operation": [{"Modify": [{"pos": 2, "tag": "MOD_1", "label": ["F"]}]}],
        "external": None,
    },
    "sent-005": {
        "sentence": "FGHIJ",
        "error_flag": 0,
        "error_type": None,
        "operation": [{}],
        "external": None,
    },
}


@pytest.fixture
def sample_corpus():
    return json.loads(json.dumps(SAMPLE_CORPUS))


@pytest.fixture
def corpus_file(tmp_path, sample_corpus):
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps(sample_corpus, ensure_ascii=False), encoding="utf-8")
    return path
