import io
import warnings

import numpy as np
import pytest

from graphsample.graph_core import build_ring_knn
from graphsample.recovery import (
    Method,
    RankDeficientWarning,
    linear_approx,
    mse,
    recover_designed,
    recover_least_squares,
    recover_random,
    write_result_csv,
)
from graphsample.sampler import SampleSet, sample_scored, sample_uniform, sampling_operator
from graphsample.signal_model import generate_blt_signal
from graphsample.spectral import sampling_scores, uniform_scores

from conftest import basis_of


@pytest.fixture(scope="module")
def ring32():
    return basis_of(build_ring_knn(32, 4))


@pytest.fixture(scope="module")
def ring16():
    return basis_of(build_ring_knn(16, 2))


def _bandlimited(basis, k, rng):
    return basis.v[:, :k] @ rng.normal(size=k)


class TestRandom:
    def test_single_draw_constant_signal(self, ring64):
        x = np.full(64, 2.5)
        s = sample_uniform(x, 1, 0.0, seed=0)
        r = recover_random(ring64, s, 1)
        np.testing.assert_allclose(r.xhat_star[0], 2.5 * np.sqrt(64), rtol=1e-12)
        np.testing.assert_allclose(r.x_star, x, rtol=1e-12)

    def test_closed_form(self, ring8, rng):
        x = rng.normal(size=8)
        s = SampleSet([3, 5, 3], x[[3, 5, 3]], np.full(3, 1 / 8), 0.0, 8)
        r = recover_random(ring8, s, 4)
        u = ring8.u
        expected = [(8 / 3) * (u[k, 3] * x[3] + u[k, 5] * x[5] + u[k, 3] * x[3]) for k in range(4)]
        np.testing.assert_allclose(r.xhat_star, expected + [0] * 4, atol=1e-12)
        assert r.method is Method.RANDOM and r.kappa == 4

    def test_synthesis_invariant(self, star64, rng):
        s = sample_uniform(rng.normal(size=64), 30, 0.1, seed=3)
        r = recover_random(star64, s, 12)
        np.testing.assert_allclose(r.x_star, star64.v @ r.xhat_star, atol=1e-10)
        assert np.all(r.xhat_star[12:] == 0)

    def test_full_band_consistency(self, rng):
        basis = basis_of(build_ring_knn(32, 4))
        x = rng.normal(size=32)
        est = np.array([recover_random(basis, sample_uniform(x, 400, 0.0, seed=t), 32).x_star
                        for t in range(200)])
        se = est.std(axis=0, ddof=1) / np.sqrt(200)
        assert np.all(np.abs(est.mean(axis=0) - x) <= 3.5 * se)

    def test_rejects_scored_samples(self, star4):
        s = sample_scored(np.ones(4), sampling_scores(star4, 1), 10, seed=0)
        with pytest.raises(ValueError, match="uniform"):
            recover_random(star4, s, 1)

    def test_empty(self, ring8):
        with pytest.raises(ValueError):
            recover_random(ring8, SampleSet([], [], [], 0.0, 8), 2)

    @pytest.mark.parametrize("kappa", [0, 9])
    def test_kappa_range(self, ring8, kappa):
        with pytest.raises(ValueError):
            recover_random(ring8, sample_uniform(np.ones(8), 3, seed=0), kappa)

    def test_wrong_n(self, ring8):
        with pytest.raises(ValueError):
            recover_random(ring8, sample_uniform(np.ones(9), 3, seed=0), 2)


class TestDesigned:
    def test_reduces_to_random(self, family64, rng):
        x = rng.normal(size=64)
        s = sample_uniform(x, 80, 0.1, seed=4)
        a = recover_random(family64, s, 10)
        b = recover_designed(family64, s, 10)
        np.testing.assert_allclose(b.xhat_star, a.xhat_star, rtol=1e-12, atol=1e-15)
        assert b.method is Method.DESIGNED

    def test_uniform_score_sampler_reduces_to_random(self, ring8, rng):
        x = rng.normal(size=8)
        s = sample_scored(x, uniform_scores(8), 20, 0.0, seed=1)
        np.testing.assert_allclose(recover_designed(ring8, s, 5).x_star,
                                   recover_random(ring8, s, 5).x_star, rtol=1e-12, atol=1e-15)

    def test_star4_exhaustive_expectation(self, star4):
        # one draw: four possible outcomes, weighted by their probabilities
        a, b = 1 / np.sqrt(2), 1 / np.sqrt(6)
        w = np.array([a, b, b, b]) / (a + 3 * b)
        for x in (np.full(4, 3.0), np.array([1.0, -2.0, 0.5, 4.0])):
            expectation = 0.0
            for i in range(4):
                s = SampleSet([i], [x[i]], [w[i]], 0.0, 4, kappa=1)
                expectation += w[i] * recover_designed(star4, s, 1).xhat_star[0]
            target = a * x[0] + b * (x[1] + x[2] + x[3])
            assert abs(expectation - target) <= 1e-12

    def test_star4_single_draw_outcomes(self, star4):
        a, b = 1 / np.sqrt(2), 1 / np.sqrt(6)
        w = np.array([a, b, b, b]) / (a + 3 * b)

        def one(i, x):
            return recover_designed(star4, SampleSet([i], [x[i]], [w[i]], 0.0, 4, kappa=1), 1).xhat_star[0]

        # U[0, i] / w_i is the same for every node, so a constant signal is recovered with zero variance
        const = np.full(4, 3.0)
        for i in range(4):
            assert one(i, const) == pytest.approx(3.0 * (a + 3 * b), rel=1e-12)
        # a non-constant signal makes hub and leaf draws disagree
        x = np.array([1.0, -2.0, 0.5, 4.0])
        assert abs(one(0, x) - one(1, x)) > 0.1

    def test_closed_form(self, star64, rng):
        x = rng.normal(size=64)
        sc = sampling_scores(star64, 6)
        s = sample_scored(x, sc, 5, 0.0, seed=2)
        expected = sum(star64.u[:6, i] * y / sc.scores[i] for i, y in zip(s.indices, s.measurements)) / 5
        np.testing.assert_allclose(recover_designed(star64, s, 6).xhat_star[:6], expected, rtol=1e-12)

    def test_kappa_mismatch(self, star64):
        s = sample_scored(np.ones(64), sampling_scores(star64, 10), 20, seed=0)
        with pytest.raises(ValueError, match="kappa=10"):
            recover_designed(star64, s, 12)

    @pytest.mark.parametrize("which", ["ring", "star"])
    def test_unbiased_monte_carlo(self, which, ring32, rng):
        from graphsample.graph_core import build_star

        basis = ring32 if which == "ring" else basis_of(build_star(32))
        x, _ = generate_blt_signal(basis, 10, 1.0, seed=1)
        target = linear_approx(basis, x, 8)
        sc = sampling_scores(basis, 8)
        trials = 3000
        est = np.array([recover_designed(basis, sample_scored(x, sc, 8, 0.1, seed=t), 8).x_star
                        for t in range(trials)])
        se = est.std(axis=0, ddof=1) / np.sqrt(trials)
        assert np.all(np.abs(est.mean(axis=0) - target) <= 4 * se)


class TestLinearApprox:
    def test_fixes_bandlimited(self, ring64, rng):
        x = _bandlimited(ring64, 10, rng)
        assert np.max(np.abs(linear_approx(ring64, x, 10) - x)) <= 1e-9

    def test_full_band_identity(self, star64, rng):
        x = rng.normal(size=64)
        np.testing.assert_allclose(linear_approx(star64, x, 64), x, atol=1e-12)

    def test_residual_matches_tail(self, ring64):
        x, xhat = generate_blt_signal(ring64, 10, 1.0, seed=0)
        tail = sum(float(v) ** 2 for v in xhat[10:])
        np.testing.assert_allclose(mse(x, linear_approx(ring64, x, 10)), tail, rtol=1e-9)


class TestLeastSquares:
    def test_exact_for_bandlimited(self, family64, rng):
        x = _bandlimited(family64, 5, rng)
        # every node once: rank K is guaranteed
        s = SampleSet(np.arange(64), x, np.full(64, 1 / 64), 0.0, 64)
        r = recover_least_squares(family64, s, 5)
        assert not r.rank_deficient
        assert np.max(np.abs(r.x_star - x)) <= 1e-8

    def test_exact_with_random_rows(self, ring64, rng):
        x = _bandlimited(ring64, 6, rng)
        s = sample_uniform(x, 40, 0.0, seed=5)
        r = recover_least_squares(ring64, s, 6)
        assert not r.rank_deficient
        assert np.max(np.abs(r.x_star - x)) <= 1e-8

    def test_biased_with_tail(self, ring16):
        x, _ = generate_blt_signal(ring16, 3, 1.0, seed=0)
        idx = np.array([0, 3, 5, 9, 12])
        s = SampleSet(idx, x[idx], np.full(5, 1 / 16), 0.0, 16)
        r = recover_least_squares(ring16, s, 3)
        gap = np.max(np.abs(r.xhat_star[:3] - ring16.u[:3] @ x))
        assert gap > 1e-6

    def test_full_sampling_k1_is_projection(self, ring64, rng):
        x = rng.normal(size=64)
        s = SampleSet(np.arange(64), x, np.full(64, 1 / 64), 0.0, 64)
        np.testing.assert_allclose(recover_least_squares(ring64, s, 1).x_star,
                                   linear_approx(ring64, x, 1), atol=1e-12)

    @pytest.mark.filterwarnings("ignore::graphsample.recovery.RankDeficientWarning")
    def test_matches_explicit_psi(self, star64, rng):
        x = rng.normal(size=64)
        s = sample_uniform(x, 30, 0.1, seed=6)
        psi = sampling_operator(s.indices, 64)
        vk = star64.v[:, :8]
        expected = vk @ np.linalg.pinv(psi @ vk, rcond=1e-10) @ s.measurements
        np.testing.assert_allclose(recover_least_squares(star64, s, 8).x_star, expected, atol=1e-10)

    def test_rank_deficient(self, ring64, rng):
        x = rng.normal(size=64)
        s = SampleSet([1, 1, 2], x[[1, 1, 2]], np.full(3, 1 / 64), 0.0, 64)
        with pytest.warns(RankDeficientWarning):
            r = recover_least_squares(ring64, s, 5)
        assert r.rank_deficient and r.method is Method.LEAST_SQUARES
        assert np.all(np.isfinite(r.x_star))

    def test_no_warning_when_full_rank(self, ring8):
        s = SampleSet(np.arange(8), np.ones(8), np.full(8, 1 / 8), 0.0, 8)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            recover_least_squares(ring8, s, 4)


class TestMse:
    def test_identical(self, rng):
        x = rng.normal(size=10)
        assert mse(x, x) == 0.0

    def test_unit_difference(self):
        assert mse(np.zeros(5), np.eye(5)[2]) == 1.0

    def test_summation_oracle(self, rng):
        a, b = rng.normal(size=50), rng.normal(size=50)
        oracle = sum((float(p) - float(q)) ** 2 for p, q in zip(a, b))
        assert mse(a, b) == pytest.approx(oracle, rel=1e-12)

    def test_shape(self):
        with pytest.raises(ValueError):
            mse(np.zeros(3), np.zeros(4))


def test_result_csv(ring8, rng):
    s = sample_uniform(rng.normal(size=8), 10, seed=0)
    r = recover_random(ring8, s, 3)
    buf = io.StringIO()
    write_result_csv(r, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "node,x_star,xhat_star" and len(lines) == 9
    assert float(lines[5].split(",")[2]) == 0.0
    np.testing.assert_array_equal([float(l.split(",")[1]) for l in lines[1:]], r.x_star)
