import pytest

from gecedit.core import (
    InsertItem,
    ModifyItem,
    Reference,
    Switch,
    apply_reference,
    op_count,
    validate_reference,
)
from gecedit.errors import InvalidReference


class TestApply:
    def test_switch_reorders_characters(self):
        r = Reference(switch=Switch((0, 2, 1, 3, 4)))
        assert apply_reference("ABCDE", r) == "ACBDE"

    def test_delete_drops_position(self):
        assert apply_reference("ABCDE", Reference(deletes=(3,))) == "ABCE"

    def test_insert_places_label_after_anchor(self):
        r = Reference(inserts=(InsertItem(pos=1, label="F"),))
        assert apply_reference("ABCDE", r) == "ABFCDE"

    def test_modify_replaces_span(self):
        r = Reference(modifies=(ModifyItem(pos=2, span=1, label="F"),))
        assert apply_reference("ABCDE", r) == "ABFDE"

    def test_modify_span_may_shrink(self):
        r = Reference(modifies=(ModifyItem(pos=1, span=2, label="Y"),))
        assert apply_reference("AXXE", r) == "AYE"

    def test_combined_switch_and_delete_uses_original_indices(self):
        r = Reference(switch=Switch((0, 2, 1, 3, 4)), deletes=(1,))
        assert apply_reference("ABCDE", r) == "ACDE"

    def test_empty_reference_is_identity(self):
        assert apply_reference("ABCDE", Reference()) == "ABCDE"

    def test_switch_only_preserves_character_multiset(self):
        r = Reference(switch=Switch((4, 3, 2, 1, 0)))
        assert sorted(apply_reference("ABCDE", r)) == sorted("ABCDE")


class TestValidate:
    def test_valid_reference_has_no_violations(self):
        r = Reference(switch=Switch((1, 0)), inserts=(InsertItem(0, "X"),))
        assert validate_reference("AB", r) == []

    def test_non_permutation_switch(self):
        r = Reference(switch=Switch((0, 0, 1)))
        assert any("permutation" in str(v) for v in validate_reference("ABC", r))

    def test_wrong_length_switch(self):
        r = Reference(switch=Switch((0, 1)))
        assert validate_reference("ABC", r)

    def test_delete_out_of_range(self):
        assert validate_reference("AB", Reference(deletes=(5,)))

    def test_deletes_must_be_strictly_increasing(self):
        assert validate_reference("ABC", Reference(deletes=(2, 1)))
        assert validate_reference("ABC", Reference(deletes=(1, 1)))

    def test_modify_span_exceeding_sentence(self):
        r = Reference(modifies=(ModifyItem(pos=1, span=5, label="X"),))
        assert validate_reference("ABC", r)

    def test_overlapping_edits_rejected(self):
        r = Reference(
            deletes=(1,), modifies=(ModifyItem(pos=0, span=2, label="X"),)
        )
        violations = validate_reference("ABC", r)
        assert any("overlap" in str(v) for v in violations)

    def test_apply_raises_on_invalid(self):
        with pytest.raises(InvalidReference):
            apply_reference("AB", Reference(deletes=(9,)))


class TestOpCount:
    def test_counts_each_kind(self):
        r = Reference(
            switch=Switch((1, 0, 2)),
            deletes=(2,),
            inserts=(InsertItem(0, "X"),),
        )
        assert op_count(r) == 3

    def test_identity_switch_not_counted(self):
        assert op_count(Reference(switch=Switch((0, 1)))) == 0

    def test_empty_reference_counts_zero(self):
        assert op_count(Reference()) == 0


def test_items_reject_empty_labels_and_bad_spans():
    with pytest.raises(ValueError):
        InsertItem(pos=0, label="")
    with pytest.raises(ValueError):
        ModifyItem(pos=0, span=0, label="X")
    with pytest.raises(ValueError):
        ModifyItem(pos=0, span=1, label="")
