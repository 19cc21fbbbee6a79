"""Guaranteed Monte Carlo: Hoeffding sizing, two-stage mean, cubature."""

import math

import mpmath
import numpy as np
import pytest

from certint import (
    Budget,
    CheckStatus,
    ConfigurationError,
    EvaluationError,
    Hyperbox,
    McParams,
    Measure,
    RngStream,
    ToleranceSpec,
    cub_mc,
    hoeffding_n,
    kurtosis_bound,
    mean_mc,
    mean_mc_ber,
    two_stage_n,
)


class TestHoeffding:
    def test_constructed_log_value(self):
        # alpha chosen so ln(2/alpha) = 2 exactly
        assert hoeffding_n(0.1, 2.0 / math.e**2) == 100

    def test_documented_default(self):
        assert hoeffding_n(1e-2, 0.01) == 26492

    def test_loose(self):
        assert hoeffding_n(1.0, 0.5) == 1

    def test_against_high_precision_oracle(self):
        mpmath.mp.dps = 60
        for abstol in (1e-3, 3e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0):
            for alpha in (1e-4, 1e-3, 0.01, 0.05, 0.1, 0.5):
                want = int(mpmath.ceil(mpmath.log(2 / mpmath.mpf(alpha))
                                       / (2 * mpmath.mpf(abstol)**2)))
                assert hoeffding_n(abstol, alpha) == want

    def test_rejects_bad_inputs(self):
        with pytest.raises(ConfigurationError):
            hoeffding_n(0.0, 0.01)
        with pytest.raises(ConfigurationError):
            hoeffding_n(0.1, 1.5)


class TestTwoStageN:
    def test_degenerate_variance(self):
        assert two_stage_n(0.0, 1.2, 1e-2, 0.005, 20.0) == 30

    def test_chebyshev_ceiling(self):
        # uniform variance 1/12; huge kurtosis bound disables Berry-Esseen
        n = two_stage_n(1 / 12, 1.2, 1e-2, 0.005, 1e12)
        assert n <= 240_000
        assert n == 240_000  # Chebyshev branch exactly

    def test_doubling_tolfun_quarters_n(self):
        n1 = two_stage_n(1 / 12, 1.2, 1e-2, 0.005, 1e12)
        n2 = two_stage_n(1 / 12, 1.2, 2e-2, 0.005, 1e12)
        assert n1 >= 4 * n2

    def test_berry_esseen_can_beat_chebyshev(self):
        n_be = two_stage_n(1 / 12, 1.2, 1e-3, 0.005, 25.0)
        n_cheb = math.ceil(1.44 / 12 / (0.005 * 1e-6))
        assert n_be < n_cheb

    def test_monotone_in_variance(self):
        lo = two_stage_n(0.05, 1.2, 1e-2, 0.01, 25.0)
        hi = two_stage_n(0.10, 1.2, 1e-2, 0.01, 25.0)
        assert hi >= lo


def test_kurtosis_bound_monotone_in_fudge():
    vals = [kurtosis_bound(10_000, 0.025, f) for f in (1.1, 1.2, 1.5, 2.0)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def _bernoulli(p):
    return lambda n, gen: (gen.random(n) < p).astype(float)


class TestMeanMcBer:
    def test_constant_one(self):
        p_hat, diag = mean_mc_ber(lambda n, gen: np.ones(n), abstol=0.05,
                                  alpha=0.05, rng=RngStream(1))
        assert p_hat == 1.0
        assert diag.exit_flags == 0

    def test_paper_configuration(self):
        p_hat, diag = mean_mc_ber(_bernoulli(1 / 9), abstol=1e-2, alpha=0.05,
                                  rng=RngStream(3))
        assert abs(p_hat - 1 / 9) <= 1e-2
        assert diag.n_evals == hoeffding_n(1e-2, 0.05)

    def test_budget_exit(self):
        p_hat, diag = mean_mc_ber(_bernoulli(0.5), abstol=1e-4, alpha=0.01,
                                  nmax=10_000, rng=RngStream(4))
        assert diag.exit_flags == 1
        assert diag.n_evals == 10_000
        assert 0.4 < p_hat < 0.6

    def test_rejects_nonbinary(self):
        with pytest.raises(EvaluationError):
            mean_mc_ber(lambda n, gen: gen.random(n), abstol=0.1,
                        rng=RngStream(5))


class TestMeanMc:
    def test_u_squared(self):
        params = McParams(tol=ToleranceSpec(1e-3, 0.0), alpha=0.05)
        tmu, diag = mean_mc(lambda n, g: g.random(n)**2, params, RngStream(1))
        assert abs(tmu - 1 / 3) <= 1e-3
        assert diag.exit_flags == 0
        assert diag.extra["flag"] == int(CheckStatus.CHECKED_BY_MEAN_MC)

    def test_exp_uniform(self):
        params = McParams(tol=ToleranceSpec(1e-3, 0.0))
        tmu, diag = mean_mc(lambda n, g: np.exp(g.random(n)), params,
                            RngStream(2))
        assert abs(tmu - (math.e - 1)) <= 1e-3

    def test_pure_relative(self):
        params = McParams(tol=ToleranceSpec(0.0, 1e-2), alpha=0.05)
        tmu, diag = mean_mc(lambda n, g: np.cos(g.random(n)), params,
                            RngStream(3))
        assert abs(tmu - math.sin(1.0)) <= 1e-2 * math.sin(1.0)

    def test_trace_invariants(self):
        params = McParams(tol=ToleranceSpec(1e-3, 0.0), alpha=0.05)
        tmu, diag = mean_mc(lambda n, g: g.random(n)**2, params, RngStream(9))
        x = diag.extra
        assert x["ntot"] == params.n_sig + sum(x["n"])
        tols = x["tol"]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(tols, tols[1:]))
        assert x["ntot"] <= params.budget.nbudget
        assert diag.errest <= 1e-3  # exit 0 implies final width under tolfun

    def test_seed_reproducibility(self):
        params = McParams(tol=ToleranceSpec(1e-3, 0.0), alpha=0.05)
        y = lambda n, g: g.random(n)**2
        t1, d1 = mean_mc(y, params, RngStream(77))
        t2, d2 = mean_mc(y, params, RngStream(77))
        assert t1 == t2
        assert d1.extra["hmu"] == d2.extra["hmu"]
        assert d1.extra["n"] == d2.extra["n"]

    def test_constant_variable(self):
        params = McParams(tol=ToleranceSpec(1e-6, 0.0))
        tmu, diag = mean_mc(lambda n, g: np.full(n, 2.5), params, RngStream(1))
        assert tmu == 2.5
        assert diag.iterations == 1

    def test_budget_exhaustion(self):
        params = McParams(tol=ToleranceSpec(1e-6, 0.0),
                          budget=Budget(nbudget=50_000))
        tmu, diag = mean_mc(lambda n, g: g.random(n), params, RngStream(6))
        assert diag.exit_flags & 1
        assert diag.extra["ntot"] <= 50_000


class TestHyperbox:
    def test_codes(self):
        assert Hyperbox([0.0], [1.0]).validate() == 0
        assert Hyperbox([np.nan], [1.0]).validate() == 10
        assert Hyperbox.from_rows([[0, 1], [1, 2], [2, 3]]).validate() == 11
        assert Hyperbox([0.0], [0.0]).validate() == 12
        assert Hyperbox([0.0], [np.inf]).validate() == 13
        assert Hyperbox([0.0], [1.0], Measure.NORMAL).validate() == 14
        assert Hyperbox([-np.inf], [np.inf], Measure.NORMAL).validate() == 0

    def test_volume(self):
        assert Hyperbox([0.0, 0.0], [2.0, 3.0]).volume() == 6.0


class TestCubMc:
    def test_unit_integrand_gives_volume(self):
        box = Hyperbox([0.0, 1.0], [0.5, 4.0])
        params = McParams(tol=ToleranceSpec(1e-2, 0.0))
        q, diag = cub_mc(lambda x: np.ones(x.shape[0]), box, params,
                         RngStream(1))
        assert q == pytest.approx(box.volume(), abs=1e-12)

    def test_sin_interval(self):
        truth = math.cos(1.0) - math.cos(2.0)
        params = McParams(tol=ToleranceSpec(1e-3, 1e-2))
        q, diag = cub_mc(lambda x: np.sin(x[:, 0]), Hyperbox([1.0], [2.0]),
                         params, RngStream(2))
        assert abs(q - truth) <= max(1e-3, 1e-2 * truth)
        assert diag.extra["flag"] == int(CheckStatus.CHECKED_BY_CUB_MC)

    def test_normal_measure(self):
        params = McParams(tol=ToleranceSpec(0.0, 1e-2))
        box = Hyperbox([-math.inf] * 2, [math.inf] * 2, Measure.NORMAL)
        q, _ = cub_mc(lambda x: np.exp(-x[:, 0]**2 - x[:, 1]**2), box,
                      params, RngStream(3))
        assert abs(q - 1 / 3) <= 1e-2 / 3

    def test_invalid_box_returns_code(self):
        for box, code in [
            (Hyperbox([0.0], [np.inf]), 13),
            (Hyperbox([1.0], [1.0]), 12),
            (Hyperbox([0.0], [1.0], Measure.NORMAL), 14),
            (Hyperbox([np.nan], [1.0]), 10),
        ]:
            q, diag = cub_mc(lambda x: x[:, 0], box, McParams(), RngStream(1))
            assert math.isnan(q)
            assert diag.exit_flags == code
