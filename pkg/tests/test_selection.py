"""Selection strategies: spec examples, tie rules, and output invariants."""

import numpy as np
import pytest

from framesurprise import (
    BudgetError,
    FeatureSequence,
    InvalidConfigError,
    ResidualSeries,
    SelectionRequest,
    TaylorConfig,
    select_cosine_uniqueness,
    select_frame_difference,
    select_swift_local_max,
    select_swift_window_argmax,
    select_uniform,
    subsample_candidates,
)


def residuals(values):
    values = np.asarray(values, dtype=np.float64)
    order_used = np.minimum(np.arange(values.shape[0]) - 1, 3)
    return ResidualSeries(
        values=values, order_used=order_used, config=TaylorConfig(order=3)
    )


def check_invariants(result, budget, total):
    idx = result.indices
    assert idx.shape[0] == min(budget, total)
    assert np.all(np.diff(idx) > 0)
    assert idx.min() >= 0 and idx.max() < total
    assert result.scores.shape == idx.shape


class TestSwiftLocalMax:
    def test_unique_peak(self):
        res = select_swift_local_max(residuals([0, 0, 5, 0, 0]), SelectionRequest(budget=1))
        assert res.indices.tolist() == [2]

    def test_two_maxima_ranked(self):
        res = select_swift_local_max(
            residuals([1, 3, 2, 5, 4, 0]), SelectionRequest(budget=2, window=1)
        )
        assert res.indices.tolist() == [1, 3]
        assert res.scores.tolist() == [3.0, 5.0]

    def test_fill_rule_on_scarce_maxima(self):
        res = select_swift_local_max(
            residuals([0, 9, 0, 0, 8, 0]), SelectionRequest(budget=3, window=1)
        )
        assert res.indices.tolist() == [0, 1, 4]

    def test_plateau_credits_leftmost(self):
        res = select_swift_local_max(residuals([5, 5, 5, 5]), SelectionRequest(budget=1))
        assert res.indices.tolist() == [0]
        # separated plateaus are separate maxima
        res2 = select_swift_local_max(residuals([5, 0, 5, 0]), SelectionRequest(budget=2))
        assert res2.indices.tolist() == [0, 2]

    def test_wider_window_suppresses_nearby_peaks(self):
        vals = [0, 4, 0, 5, 0, 0, 0, 3, 0]
        near = select_swift_local_max(residuals(vals), SelectionRequest(budget=3, window=1))
        assert near.indices.tolist() == [1, 3, 7]
        wide = select_swift_local_max(residuals(vals), SelectionRequest(budget=2, window=2))
        # index 1 no longer qualifies (5 within two frames); maxima are 3 and 7
        assert wide.indices.tolist() == [3, 7]

    def test_budget_larger_than_frames(self):
        res = select_swift_local_max(residuals([1, 2]), SelectionRequest(budget=10))
        assert res.indices.tolist() == [0, 1]

    def test_rescaling_keeps_indices(self):
        rng = np.random.default_rng(2)
        vals = rng.standard_normal(40) ** 2  # non-negative, ties improbable
        base = select_swift_local_max(residuals(vals), SelectionRequest(budget=8))
        scaled = select_swift_local_max(residuals(vals * 37.5), SelectionRequest(budget=8))
        assert base.indices.tolist() == scaled.indices.tolist()


class TestSwiftWindowArgmax:
    def test_window_partition(self):
        res = select_swift_window_argmax(
            residuals([0, 1, 0, 0, 0, 0, 0, 2]), SelectionRequest(budget=2)
        )
        assert res.indices.tolist() == [1, 7]

    def test_all_zero_picks_window_starts(self):
        res = select_swift_window_argmax(residuals([0.0] * 8), SelectionRequest(budget=4))
        assert res.indices.tolist() == [0, 2, 4, 6]

    def test_one_index_per_window(self):
        rng = np.random.default_rng(6)
        vals = np.abs(rng.standard_normal(23))
        k = 7
        res = select_swift_window_argmax(residuals(vals), SelectionRequest(budget=k))
        edges = (np.arange(k + 1) * 23) // k
        for j in range(k):
            inside = (res.indices >= edges[j]) & (res.indices < edges[j + 1])
            assert inside.sum() == 1

    def test_budget_exceeding_frames_rejected(self):
        with pytest.raises(BudgetError):
            select_swift_window_argmax(residuals([1, 2]), SelectionRequest(budget=3))


class TestUniform:
    def test_examples(self):
        assert select_uniform(10, 5).indices.tolist() == [0, 2, 4, 6, 9]
        assert select_uniform(4, 8).indices.tolist() == [0, 1, 2, 3]
        idx = select_uniform(128, 32).indices
        assert idx[0] == 0 and idx[-1] == 127
        expected = [(j * 127) // 31 for j in range(32)]
        assert idx.tolist() == expected

    def test_identity_when_budget_is_total(self):
        assert select_uniform(9, 9).indices.tolist() == list(range(9))

    def test_single_frame_budget(self):
        assert select_uniform(50, 1).indices.tolist() == [0]

    def test_validation(self):
        with pytest.raises(InvalidConfigError):
            select_uniform(0, 3)
        with pytest.raises(InvalidConfigError):
            select_uniform(3, 0)


class TestFrameDifference:
    def test_constant_ties_break_low(self):
        seq = FeatureSequence(np.full((5, 3), 2.0))
        res = select_frame_difference(seq, SelectionRequest(budget=2, strategy="frame_difference"))
        assert res.indices.tolist() == [0, 1]

    def test_unique_jump(self):
        seq = FeatureSequence(np.array([0, 0, 10, 10], dtype=float)[:, None])
        res = select_frame_difference(seq, SelectionRequest(budget=1, strategy="frame_difference"))
        assert res.indices.tolist() == [2]

    def test_score_enumeration(self):
        seq = FeatureSequence(np.array([0, 5, 5, 12], dtype=float)[:, None])
        res = select_frame_difference(seq, SelectionRequest(budget=2, strategy="frame_difference"))
        assert res.indices.tolist() == [1, 3]
        assert res.scores.tolist() == [5.0, 7.0]


class TestCosineUniqueness:
    def test_duplicate_frames_lose(self):
        e1 = [1.0, 0.0]
        e2 = [0.0, 1.0]
        seq = FeatureSequence(np.array([e1, e1, e2]))
        res = select_cosine_uniqueness(seq, SelectionRequest(budget=1, strategy="cosine_uniqueness"))
        assert res.indices.tolist() == [2]

    def test_identical_frames_tie_to_low_index(self):
        seq = FeatureSequence(np.ones((4, 3)))
        res = select_cosine_uniqueness(seq, SelectionRequest(budget=2, strategy="cosine_uniqueness"))
        assert res.indices.tolist() == [0, 1]

    def test_all_tied_three_frame_case(self):
        s = 1 / np.sqrt(2)
        seq = FeatureSequence(np.array([[1, 0], [0, 1], [s, s]], dtype=float))
        res = select_cosine_uniqueness(seq, SelectionRequest(budget=1, strategy="cosine_uniqueness"))
        assert res.indices.tolist() == [0]

    def test_zero_frames_are_maximally_unique(self):
        seq = FeatureSequence(np.array([[1, 0], [1, 0], [0, 0]], dtype=float))
        res = select_cosine_uniqueness(seq, SelectionRequest(budget=1, strategy="cosine_uniqueness"))
        assert res.indices.tolist() == [2]


class TestSubsample:
    def test_spans_full_range(self):
        idx = subsample_candidates(1000, 128)
        assert idx.shape[0] == 128
        assert idx[0] == 0 and idx[-1] == 999
        assert np.array_equal(idx, (np.arange(128) * 999) // 127)

    def test_small_pool_keeps_everything(self):
        assert subsample_candidates(100, 128).tolist() == list(range(100))

    def test_identity(self):
        assert subsample_candidates(128, 128).tolist() == list(range(128))


class TestRequestValidation:
    def test_bad_request_fields(self):
        with pytest.raises(InvalidConfigError):
            SelectionRequest(budget=0)
        with pytest.raises(InvalidConfigError):
            SelectionRequest(budget=1, window=0)
        with pytest.raises(InvalidConfigError):
            SelectionRequest(budget=1, strategy="nope")


class TestInvariantsAcrossStrategies:
    def test_random_residual_series(self):
        rng = np.random.default_rng(14)
        for _ in range(60):
            t = int(rng.integers(1, 50))
            k = int(rng.integers(1, 40))
            vals = np.abs(rng.standard_normal(t))
            r = residuals(vals)
            check_invariants(
                select_swift_local_max(r, SelectionRequest(budget=k)), k, t
            )
            if k <= t:
                check_invariants(
                    select_swift_window_argmax(r, SelectionRequest(budget=k)), k, t
                )
            check_invariants(select_uniform(t, k), k, t)
            seq = FeatureSequence(rng.standard_normal((t, 4)))
            check_invariants(
                select_frame_difference(seq, SelectionRequest(budget=k)), k, t
            )
            check_invariants(
                select_cosine_uniqueness(seq, SelectionRequest(budget=k)), k, t
            )
