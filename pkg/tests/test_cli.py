import io
import json

import pytest

from gecedit.cli import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestDerive:
    def test_single_pair_prints_operation_json(self):
        code, out, _ = invoke("derive", "--src", "ABCDE", "--tgt", "ACBDE")
        assert code == 0
        assert out == '{"Switch":[0,2,1,3,4]}\n'

    def test_insert_output_format(self):
        code, out, _ = invoke("derive", "--src", "ABCDE", "--tgt", "ABFCDE")
        assert code == 0
        assert out == '{"Insert":[{"pos":1,"tag":"INS_1","label":["F"]}]}\n'

    def test_batch_preserves_input_order(self, tmp_path):
        batch = tmp_path / "pairs.tsv"
        batch.write_text("ABCDE\tACBDE\nABCDE\tABCE\n", encoding="utf-8")
        code, out, _ = invoke("derive", "--batch", str(batch))
        assert code == 0
        assert out.splitlines() == ['{"Switch":[0,2,1,3,4]}', '{"Delete":[3]}']

    def test_missing_arguments_is_usage_error(self):
        code, _, err = invoke("derive", "--src", "ABCDE")
        assert code == 2
        assert "derive" in err

    def test_output_is_byte_deterministic(self):
        first = invoke("derive", "--src", "AXXE", "--tgt", "AYYYE")
        second = invoke("derive", "--src", "AXXE", "--tgt", "AYYYE")
        assert first == second


class TestValidateAndStats:
    def test_validate_clean_corpus(self, corpus_file):
        code, out, _ = invoke("validate", str(corpus_file))
        assert code == 0
        assert "ok: 5 instances" in out

    def test_validate_reports_findings_with_exit_1(self, tmp_path, sample_corpus):
        sample_corpus["sent-002"]["operation"] = [{"Delete": [99]}]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(sample_corpus), encoding="utf-8")
        code, out, _ = invoke("validate", str(bad))
        assert code == 1
        assert "sent-002" in out

    def test_schema_error_exits_1(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"x": {"sentence": "", "error_flag": 0, "operation": [{}]}}')
        code, _, err = invoke("validate", str(bad))
        assert code == 1
        assert "sentence" in err

    def test_stats_records_format(self, corpus_file):
        code, out, _ = invoke("stats", str(corpus_file), "--format", "records")
        assert code == 0
        record = json.loads(out)
        assert record["sentences"] == 5
        assert set(record["len"]) == {"min", "max", "mean"}

    def test_stats_text_format(self, corpus_file):
        code, out, _ = invoke("stats", str(corpus_file))
        assert code == 0
        assert "sentences  5" in out


class TestNormalize:
    def test_minimizes_references(self, tmp_path):
        corpus = {
            "a": {
                "sentence": "ABCDE",
                "error_flag": 1,
                "error_type": "CR",
                # whole-sentence rewrite expressing a single deletion
                "operation": [
                    {"Modify": [{"pos": 0, "tag": "MOD_5", "label": list("ABCE")}]}
                ],
                "external": None,
            }
        }
        path = tmp_path / "c.json"
        path.write_text(json.dumps(corpus), encoding="utf-8")
        code, out, _ = invoke("normalize", str(path))
        assert code == 0
        assert json.loads(out)["a"]["operation"] == [{"Delete": [3]}]


class TestStgRoundTrip:
    def test_encode_then_decode_recovers_targets(self, tmp_path, corpus_file, sample_corpus):
        labels = tmp_path / "labels.jsonl"
        code, out, _ = invoke("encode-stg", str(corpus_file), "--out", str(labels))
        assert code == 0

        srcs = tmp_path / "src.txt"
        records = [json.loads(line) for line in labels.read_text().splitlines()]
        id_to_sentence = {k: v["sentence"] for k, v in sample_corpus.items()}
        srcs.write_text(
            "\n".join(id_to_sentence[r["id"].split("#")[0]] for r in records) + "\n"
        )
        code, out, _ = invoke("decode-stg", "--src", str(srcs), "--labels", str(labels))
        assert code == 0
        decoded = out.splitlines()
        assert decoded[0] == "ACBDE"
        assert decoded[1] == "ABCE"

    def test_encode_stdout_when_no_output_path(self, corpus_file):
        code, out, _ = invoke("encode-stg", str(corpus_file))
        assert code == 0
        first = json.loads(out.splitlines()[0])
        assert set(first) == {"id", "first", "next", "tags", "fills"}


class TestEval:
    def test_self_evaluation_reaches_full_scores(self, tmp_path, corpus_file, sample_corpus):
        from gecedit.core import apply_reference
        from gecedit.corpus import parse_corpus

        hyp = tmp_path / "hyp.tsv"
        lines = []
        for instance in parse_corpus(str(corpus_file)):
            realized = apply_reference(instance.sentence, instance.references[0])
            lines.append(f"{instance.id}\t{realized}")
        hyp.write_text("\n".join(lines) + "\n", encoding="utf-8")
        code, out, _ = invoke("eval", "--corpus", str(corpus_file), "--hyp", str(hyp))
        assert code == 0
        assert "EM         100.00" in out
        assert "F0.5       100.00" in out

    def test_unknown_id_is_domain_error(self, tmp_path, corpus_file):
        hyp = tmp_path / "hyp.tsv"
        hyp.write_text("nope\tABC\n", encoding="utf-8")
        code, _, err = invoke("eval", "--corpus", str(corpus_file), "--hyp", str(hyp))
        assert code == 1
        assert "nope" in err


def test_unknown_subcommand_is_usage_error():
    code, _, _ = invoke("frobnicate")
    assert code == 2


def test_unknown_flag_rejected(corpus_file):
    code, _, _ = invoke("stats", str(corpus_file), "--nope")
    assert code == 2
