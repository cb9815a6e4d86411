import json

import pytest

from gecedit.core import ErrorType, Reference, Switch
from gecedit.corpus import (
    compute_stats,
    instance_from_json,
    parse_corpus,
    parse_corpus_lenient,
    reference_from_json,
    reference_to_json,
    serialize_corpus,
    stg_labels_from_record,
    stg_labels_to_record,
    validate_corpus,
)
from gecedit.errors import EmptyInput, SchemaError
from gecedit.stg import encode_instance


class TestReferenceJson:
    def test_switch_round_trip(self):
        obj = {"Switch": [0, 2, 1, 3, 4]}
        assert reference_to_json(reference_from_json(obj)) == obj

    def test_insert_round_trip(self):
        obj = {"Insert": [{"pos": 1, "tag": "INS_2", "label": ["F", "G"]}]}
        assert reference_to_json(reference_from_json(obj)) == obj

    def test_modify_label_length_free_of_span(self):
        obj = {"Modify": [{"pos": 1, "tag": "MOD_2", "label": ["Y", "Y", "Y"]}]}
        r = reference_from_json(obj)
        assert (r.modifies[0].span, r.modifies[0].label) == (2, "YYY")

    def test_empty_object_is_empty_reference(self):
        assert reference_from_json({}).is_empty()
        assert reference_to_json(Reference()) == {}

    def test_insert_tag_count_must_match_label(self):
        obj = {"Insert": [{"pos": 1, "tag": "INS_1", "label": ["F", "G"]}]}
        with pytest.raises(SchemaError):
            reference_from_json(obj)

    def test_unknown_operation_key_rejected(self):
        with pytest.raises(SchemaError):
            reference_from_json({"Replace": []})

    def test_missing_item_field_names_the_path(self):
        obj = {"Insert": [{"pos": 1, "label": ["F"]}]}
        with pytest.raises(SchemaError) as exc:
            reference_from_json(obj, "rec-1")
        assert "tag" in exc.value.field_path


class TestParse:
    def test_parses_sample(self, corpus_file):
        instances = parse_corpus(corpus_file)
        assert len(instances) == 5
        by_id = {i.id: i for i in instances}
        assert by_id["sent-001"].references[0].switch == Switch((0, 2, 1, 3, 4))
        assert by_id["sent-004"].error_types == {ErrorType.IWC, ErrorType.SC}
        assert by_id["sent-005"].error_flag is False

    def test_external_field_round_trips(self, sample_corpus):
        instances = parse_corpus(sample_corpus)
        out = serialize_corpus(instances)
        assert out["sent-002"]["external"] == {"note": "kept opaque"}

    def test_serialization_round_trip(self, sample_corpus):
        instances = parse_corpus(sample_corpus)
        again = parse_corpus(serialize_corpus(instances))
        assert again == instances

    def test_strict_mode_raises_on_first_bad_record(self, sample_corpus):
        sample_corpus["sent-003"]["operation"] = "not-a-list"
        with pytest.raises(SchemaError):
            parse_corpus(sample_corpus)

    def test_lenient_mode_collects_failures(self, sample_corpus):
        sample_corpus["sent-003"]["operation"] = "not-a-list"
        instances, failures = parse_corpus_lenient(sample_corpus)
        assert len(instances) == 4
        assert [f.record_id for f in failures] == ["sent-003"]

    def test_sentence_must_be_non_empty(self):
        with pytest.raises(SchemaError):
            instance_from_json("x", {"sentence": "", "error_flag": 0, "operation": [{}]})

    def test_error_type_accepts_string_and_list(self):
        base = {"sentence": "AB", "error_flag": 1, "operation": [{"Delete": [0]}]}
        one = instance_from_json("x", {**base, "error_type": "CM,CR"})
        two = instance_from_json("x", {**base, "error_type": ["CM", "CR"]})
        assert one.error_types == two.error_types == {ErrorType.CM, ErrorType.CR}


class TestValidateCorpus:
    def test_clean_sample(self, sample_corpus):
        assert validate_corpus(parse_corpus(sample_corpus)) == []

    def test_flag_mismatch_reported(self, sample_corpus):
        sample_corpus["sent-005"]["error_flag"] = 1
        sample_corpus["sent-005"]["error_type"] = "AM"
        findings = validate_corpus(parse_corpus(sample_corpus))
        assert any(f.field_path == "error_flag" for f in findings)

    def test_out_of_range_operation_reported(self, sample_corpus):
        sample_corpus["sent-002"]["operation"] = [{"Delete": [99]}]
        findings = validate_corpus(parse_corpus(sample_corpus))
        assert any("deletes" in f.field_path for f in findings)


class TestStats:
    def test_field_values(self, sample_corpus):
        stats = compute_stats(parse_corpus(sample_corpus))
        record = stats.as_record()
        assert record["sentences"] == 5
        assert record["erroneous"] == 4
        assert record["switch"] == 1
        assert record["delete"] == 1
        assert record["insert"] == 2
        assert record["modify"] == 1
        assert record["len"] == {"min": 5, "max": 5, "mean": 5.0}
        assert record["ref_hist"] == [3, 1]
        assert sum(record["type_pct"].values()) == pytest.approx(100.0)

    def test_mean_refs_over_erroneous_sentences(self, sample_corpus):
        stats = compute_stats(parse_corpus(sample_corpus))
        assert stats.mean_refs == pytest.approx(5 / 4)

    def test_dedupe_drops_duplicate_references(self, sample_corpus):
        sample_corpus["sent-002"]["operation"] = [{"Delete": [3]}, {"Delete": [3]}]
        plain = compute_stats(parse_corpus(sample_corpus))
        deduped = compute_stats(parse_corpus(sample_corpus), dedupe=True)
        assert plain.op_counts["delete"] == 2
        assert deduped.op_counts["delete"] == 1

    def test_text_rendering_is_deterministic(self, sample_corpus):
        stats = compute_stats(parse_corpus(sample_corpus))
        assert stats.as_text() == stats.as_text()
        assert "sentences  5" in stats.as_text()

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyInput):
            compute_stats([])


class TestStgRecords:
    def test_label_record_round_trip(self):
        ref = Reference(switch=Switch((0, 2, 1, 3, 4)))
        labels = encode_instance("ABCDE", ref)
        record = json.loads(json.dumps(stg_labels_to_record("sent-001", labels)))
        rid, back = stg_labels_from_record(record)
        assert rid == "sent-001"
        assert back == labels

    def test_record_field_names(self):
        labels = encode_instance("AB", Reference(deletes=(1,)))
        record = stg_labels_to_record("x", labels)
        assert set(record) == {"id", "first", "next", "tags", "fills"}
        assert record["tags"] == ["K", "D"]
