import itertools
import math

import numpy as np
import pytest

from gecedit.core import InsertItem, ModifyItem, Reference, Switch, apply_reference
from gecedit.errors import (
    CycleOrOrphan,
    DegenerateMatrix,
    DimensionMismatch,
    FillCountMismatch,
    InsertionTooLong,
    InvalidPermutation,
)
from gecedit.stg import (
    BEAM_EPS,
    PointerLabels,
    Tag,
    TagSequence,
    attention_scores,
    beam_decode_permutation,
    build_mask_template,
    decode_instance,
    encode_instance,
    fill_template,
    parse_tag,
    pointers_to_permutation,
    switch_to_pointers,
)


class TestPointers:
    def test_permutation_to_pointer_form(self):
        p = switch_to_pointers(3, Switch((2, 0, 1)))
        assert p.first == 2
        assert p.next == (1, 3, 0)  # END sentinel = n = 3

    def test_identity_when_no_switch(self):
        p = switch_to_pointers(3, None)
        assert (p.first, p.next) == (0, (1, 2, 3))

    def test_round_trip_all_permutations_n5(self):
        for perm in itertools.permutations(range(5)):
            p = switch_to_pointers(5, Switch(perm))
            assert pointers_to_permutation(p) == perm

    def test_rejects_non_permutation(self):
        with pytest.raises(InvalidPermutation):
            switch_to_pointers(3, Switch((0, 0, 1)))

    def test_cycle_detected(self):
        with pytest.raises(CycleOrOrphan):
            pointers_to_permutation(PointerLabels(n=3, first=0, next=(1, 0, 3)))

    def test_orphan_detected(self):
        # chain ends at END after visiting only two of three indices
        with pytest.raises(CycleOrOrphan):
            pointers_to_permutation(PointerLabels(n=3, first=0, next=(1, 3, 3)))


class TestTags:
    def test_tag_string_round_trip(self):
        for text in ("K", "D", "I_2", "M", "MI_3"):
            assert str(parse_tag(text)) == text

    def test_mask_counts(self):
        assert Tag("K").mask_count == 0
        assert Tag("D").mask_count == 0
        assert Tag("I", 2).mask_count == 2
        assert Tag("M").mask_count == 1
        assert Tag("MI", 3).mask_count == 4

    def test_fill_count_must_match(self):
        with pytest.raises(FillCountMismatch):
            TagSequence(tags=(Tag("M"),), fills="AB")

    def test_template_fill(self):
        tags = TagSequence(tags=(Tag("K"), Tag("M"), Tag("I", 1)), fills="XY")
        template = build_mask_template("ABC", tags)
        assert fill_template(template, tags.fills) == "AXCY"


class TestEncodeDecode:
    CASES = [
        ("ABCDE", Reference(switch=Switch((0, 2, 1, 3, 4)))),
        ("ABCDE", Reference(deletes=(3,))),
        ("ABCDE", Reference(inserts=(InsertItem(1, "F"),))),
        ("ABCDE", Reference(modifies=(ModifyItem(2, 1, "F"),))),
        ("ABCDE", Reference(switch=Switch((0, 2, 1, 3, 4)), deletes=(1,))),
        ("AXXE", Reference(modifies=(ModifyItem(1, 2, "YYY"),))),  # grows
        ("AXXXE", Reference(modifies=(ModifyItem(1, 3, "Y"),))),  # shrinks
        ("AB", Reference(modifies=(ModifyItem(0, 1, "ZA"),))),
        ("ABCDE", Reference()),
    ]

    @pytest.mark.parametrize("src,ref", CASES)
    def test_decode_matches_direct_application(self, src, ref):
        labels = encode_instance(src, ref)
        assert decode_instance(src, labels) == apply_reference(src, ref)

    def test_growing_modify_uses_combined_tag(self):
        labels = encode_instance("AXXE", Reference(modifies=(ModifyItem(1, 2, "YYY"),)))
        assert [str(t) for t in labels.tags.tags] == ["K", "M", "MI_1", "K"]
        assert labels.tags.fills == "YYY"

    def test_shrinking_modify_deletes_surplus(self):
        labels = encode_instance("AXXXE", Reference(modifies=(ModifyItem(1, 3, "Y"),)))
        assert [str(t) for t in labels.tags.tags] == ["K", "M", "D", "D", "K"]

    def test_insertion_longer_than_t_max_rejected(self):
        ref = Reference(inserts=(InsertItem(0, "ABCDEFG"),))
        with pytest.raises(InsertionTooLong):
            encode_instance("XY", ref, t_max=6)
        # the same insertion fits with a larger budget
        labels = encode_instance("XY", ref, t_max=7)
        assert decode_instance("XY", labels) == "XABCDEFGY"


class TestAttention:
    def test_unit_dimension_example(self):
        out = attention_scores([[1.0], [0.0]], [[1.0], [0.0]])
        expected = np.array([[0.7311, 0.2689], [0.5, 0.5]])
        assert np.allclose(out, expected, atol=1e-4)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(7)
        out = attention_scores(rng.normal(size=(4, 3)), rng.normal(size=(4, 3)))
        assert np.allclose(out.sum(axis=1), 1.0)

    def test_scaling_uses_sqrt_of_dimension(self):
        q = np.ones((1, 4))
        k = np.vstack([np.ones(4), np.zeros(4)])[:1]
        # single key: softmax is 1 regardless, so compare logits directly
        logits = (q @ q.T) / math.sqrt(4)
        assert logits[0, 0] == pytest.approx(2.0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DimensionMismatch):
            attention_scores([[1.0]], [[1.0], [2.0]])


def brute_force_best(scores):
    n = scores.shape[0] - 2
    log_a = np.log(np.maximum(scores, 0.0) + BEAM_EPS)
    best, best_score = None, -np.inf
    for perm in itertools.permutations(range(n)):
        score = log_a[n, perm[0]]
        for a, b in zip(perm, perm[1:]):
            score += log_a[a, b]
        score += log_a[perm[-1], n + 1]
        if score > best_score or (score == best_score and perm < best):
            best, best_score = perm, score
    return best, best_score


class TestBeamDecode:
    def test_returns_permutation(self):
        rng = np.random.default_rng(0)
        scores = rng.random((7, 7))
        perm = beam_decode_permutation(scores, beam_width=5)
        assert sorted(perm) == list(range(5))

    def test_exhaustive_width_matches_enumeration(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            n = int(rng.integers(2, 6))
            scores = rng.random((n + 2, n + 2))
            perm = beam_decode_permutation(scores, beam_width=n * 2**n)
            expected, _ = brute_force_best(scores)
            assert perm == expected

    def test_default_beam_never_beats_optimum(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            scores = rng.random((n + 2, n + 2))
            perm = beam_decode_permutation(scores, beam_width=5)
            log_a = np.log(np.maximum(scores, 0.0) + BEAM_EPS)
            score = log_a[n, perm[0]] + log_a[perm[-1], n + 1]
            score += sum(log_a[a, b] for a, b in zip(perm, perm[1:]))
            _, best_score = brute_force_best(scores)
            assert score <= best_score + 1e-9

    def test_non_finite_matrix_rejected(self):
        scores = np.full((4, 4), np.nan)
        with pytest.raises(DegenerateMatrix):
            beam_decode_permutation(scores)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            beam_decode_permutation(np.ones((3, 4)))

    def test_zero_scores_still_decode(self):
        perm = beam_decode_permutation(np.zeros((5, 5)))
        assert sorted(perm) == [0, 1, 2]
