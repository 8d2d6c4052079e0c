"""Data-model validation, spatial pooling, and the synthetic generator."""

import numpy as np
import pytest

from framesurprise import (
    EmptyInputError,
    FeatureSequence,
    InvalidConfigError,
    InvalidDataError,
    PoolConfig,
    RegionSequence,
    SelectionRequest,
    ShapeError,
    SurpriseEvent,
    TaylorConfig,
    TokenGridSequence,
    flatten_to_features,
    gen_synthetic,
    pool_tokens,
    residual_series,
    select_swift_local_max,
)


def make_grid(t, g, d, seed=0):
    rng = np.random.default_rng(seed)
    return TokenGridSequence(data=rng.standard_normal((t, g * g, d)), grid_side=g)


class TestValidation:
    def test_feature_sequence_rejects_nan(self):
        data = np.ones((3, 2))
        data[1, 1] = np.nan
        with pytest.raises(InvalidDataError):
            FeatureSequence(data)

    def test_feature_sequence_rejects_empty(self):
        with pytest.raises(EmptyInputError):
            FeatureSequence(np.zeros((0, 4)))
        with pytest.raises(ShapeError):
            FeatureSequence(np.zeros((4, 0)))

    def test_token_grid_requires_matching_token_count(self):
        with pytest.raises(ShapeError):
            TokenGridSequence(data=np.zeros((2, 5, 3)), grid_side=2)

    def test_pool_config_rejects_zero(self):
        with pytest.raises(InvalidConfigError):
            PoolConfig(0)

    def test_region_sequence_requires_square_count(self):
        with pytest.raises(ShapeError):
            RegionSequence(data=np.zeros((2, 3, 4)), regions_per_side=2)


class TestPooling:
    def test_global_mean_s1(self):
        grid = make_grid(5, 14, 7)
        pooled = pool_tokens(grid, PoolConfig(1))
        assert pooled.data.shape == (5, 1, 7)
        # independent oracle: plain mean over the full token axis
        expected = grid.data.mean(axis=1, dtype=np.float64)
        rel = np.abs(pooled.data[:, 0, :] - expected) / np.maximum(1e-300, np.abs(expected))
        assert rel.max() < 1e-12

    def test_identity_s_equals_g(self):
        grid = make_grid(3, 14, 2)
        pooled = pool_tokens(grid, PoolConfig(14))
        assert pooled.data.shape == (3, 196, 2)
        np.testing.assert_array_equal(pooled.data, grid.data.astype(np.float64))

    def test_bucket_boundaries_g14_s4(self):
        # floor(b*14/4) gives edges [0, 3, 7, 10, 14]: bucket sizes 3,4,3,4
        grid = make_grid(2, 14, 1)
        pooled = pool_tokens(grid, PoolConfig(4))
        view = grid.data.reshape(2, 14, 14, 1)
        edges = [0, 3, 7, 10, 14]
        for a in range(4):
            for b in range(4):
                block = view[:, edges[a] : edges[a + 1], edges[b] : edges[b + 1], :]
                np.testing.assert_allclose(
                    pooled.data[:, a * 4 + b, :],
                    block.mean(axis=(1, 2)),
                    rtol=1e-12,
                )

    @pytest.mark.parametrize("g", [7, 14, 16])
    def test_partition_covers_every_token_once(self, g):
        for s in range(1, g + 1):
            edges = (np.arange(s + 1) * g) // s
            counts = np.zeros((g, g), dtype=int)
            for a in range(s):
                for b in range(s):
                    counts[edges[a] : edges[a + 1], edges[b] : edges[b + 1]] += 1
            assert counts.sum() == g * g
            assert np.all(counts == 1)

    def test_linearity(self):
        gx = make_grid(4, 7, 3, seed=1)
        gy = make_grid(4, 7, 3, seed=2)
        alpha, beta = 2.5, -1.25
        combo = TokenGridSequence(
            data=alpha * gx.data + beta * gy.data, grid_side=7
        )
        lhs = pool_tokens(combo, PoolConfig(3)).data
        rhs = alpha * pool_tokens(gx, PoolConfig(3)).data + beta * pool_tokens(
            gy, PoolConfig(3)
        ).data
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14)

    def test_invalid_pool_sizes(self):
        grid = make_grid(2, 4, 2)
        with pytest.raises(InvalidConfigError):
            pool_tokens(grid, PoolConfig(5))
        with pytest.raises(InvalidConfigError):
            pool_tokens(grid, PoolConfig(0))


class TestFlatten:
    def test_drops_singleton_axis(self):
        data = np.arange(6, dtype=float).reshape(3, 1, 2)
        flat = flatten_to_features(RegionSequence(data=data, regions_per_side=1))
        np.testing.assert_array_equal(flat.data, data[:, 0, :])

    def test_constant_grid_pools_to_constant_features(self):
        grid = TokenGridSequence(data=np.full((4, 9, 2), 3.5), grid_side=3)
        flat = flatten_to_features(pool_tokens(grid, PoolConfig(1)))
        np.testing.assert_allclose(flat.data, 3.5, rtol=1e-15)

    def test_multi_region_rejected(self):
        regions = RegionSequence(data=np.zeros((2, 4, 3)), regions_per_side=2)
        with pytest.raises(ShapeError):
            flatten_to_features(regions)


class TestSyntheticGenerator:
    def test_constant_with_step_example(self):
        for seed in (0, 1, 99):
            seq, truth = gen_synthetic(10, 1, 0, [SurpriseEvent(4, 5.0)], seed)
            base = seq.data[0, 0]
            np.testing.assert_allclose(seq.data[:4, 0], base, atol=1e-12)
            np.testing.assert_allclose(seq.data[4:, 0], base + 5.0, atol=1e-12)
            assert truth[0].frame_index == 4

    def test_step_magnitude_is_exact_l2(self):
        seq, _ = gen_synthetic(30, 6, 1, [SurpriseEvent(12, 7.5)], seed=3)
        base, _ = gen_synthetic(30, 6, 1, [], seed=3)
        jump = seq.data[12] - base.data[12]
        assert np.linalg.norm(jump) == pytest.approx(7.5, rel=1e-12)
        # persists unchanged afterwards
        np.testing.assert_allclose(
            seq.data[12:] - base.data[12:],
            np.broadcast_to(jump, seq.data[12:].shape),
            atol=1e-12,
        )

    def test_deterministic_across_runs(self):
        a, _ = gen_synthetic(40, 5, 2, [SurpriseEvent(10, 3.0), SurpriseEvent(25, 4.0)], 7)
        b, _ = gen_synthetic(40, 5, 2, [SurpriseEvent(10, 3.0), SurpriseEvent(25, 4.0)], 7)
        assert a.data.tobytes() == b.data.tobytes()

    def test_event_free_linear_base_scores_zero(self):
        seq, _ = gen_synthetic(32, 4, 1, [], seed=11)
        r = residual_series(seq, TaylorConfig(order=3))
        assert np.all(r.values[2:] < 1e-9)

    def test_event_validation(self):
        with pytest.raises(InvalidConfigError):
            gen_synthetic(10, 2, 1, [SurpriseEvent(0, 1.0)], 0)  # frame 0 not allowed
        with pytest.raises(InvalidConfigError):
            gen_synthetic(10, 2, 1, [SurpriseEvent(12, 1.0)], 0)  # out of range
        with pytest.raises(InvalidConfigError):
            gen_synthetic(20, 2, 1, [SurpriseEvent(8, 1.0), SurpriseEvent(5, 1.0)], 0)
        with pytest.raises(InvalidConfigError):  # gap below 2*(degree+1)
            gen_synthetic(20, 2, 1, [SurpriseEvent(5, 1.0), SurpriseEvent(7, 1.0)], 0)
        with pytest.raises(InvalidConfigError):
            gen_synthetic(10, 2, 4, [], 0)
        with pytest.raises(InvalidConfigError):
            SurpriseEvent(4, -2.0)

    def test_selector_recovers_injected_events(self):
        events = [SurpriseEvent(14, 10.0), SurpriseEvent(33, 10.0), SurpriseEvent(50, 10.0)]
        seq, truth = gen_synthetic(64, 8, 1, events, seed=21)
        r = residual_series(seq, TaylorConfig(order=3))
        sel = select_swift_local_max(r, SelectionRequest(budget=3))
        for ev in truth:
            assert min(abs(int(i) - ev.frame_index) for i in sel.indices) <= 3
