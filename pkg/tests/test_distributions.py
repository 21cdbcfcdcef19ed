"""Closed-form distribution machinery against independent quadrature and
sampling oracles."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from qweibull import (
    BurrIIIParams,
    DomainError,
    UniformParams,
    WeibullParams,
    burr3_cdf,
    burr3_pdf,
    burr3_sample,
    hazard,
    mgf,
    quadratic_entropy,
    raw_moment,
    reliability,
    residual_life_moment,
    shannon_entropy,
    shape_analysis,
    truncated_moment,
    tsallis_entropy,
    uniform_sample,
    weibull_cdf,
    weibull_pdf,
    weibull_quantile,
    weibull_sample,
    weighted_log2_moment,
    weighted_log_moment,
    weighted_moment,
)
from qweibull.distributions import EULER_GAMMA

from oracles import expectation_quad, weibull_support_quad

ALPHA_GRID = (0.5, 1.0, 2.0, 4.0, 10.0)
BETA_GRID = (0.5, 1.0, 2.0, 8.0)


class TestParams:
    @pytest.mark.parametrize("a,b", [(0, 1), (-1, 1), (1, 0), (np.nan, 1), (1, np.inf)])
    def test_invalid_weibull(self, a, b):
        with pytest.raises(DomainError):
            WeibullParams(a, b)

    def test_invalid_uniform_and_burr(self):
        with pytest.raises(DomainError):
            UniformParams(2, 2)
        with pytest.raises(DomainError):
            BurrIIIParams(0, 1)


class TestPdf:
    def test_exponential_case(self):
        assert weibull_pdf(2.0, WeibullParams(1, 2)) == pytest.approx(0.5 * math.exp(-1), rel=1e-12)

    def test_value_at_zero_by_shape(self):
        assert weibull_pdf(0.0, WeibullParams(1, 4)) == 0.25
        assert weibull_pdf(0.0, WeibullParams(0.5, 1)) == math.inf
        assert weibull_pdf(0.0, WeibullParams(2, 1)) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            weibull_pdf(-0.1, WeibullParams(1, 1))

    def test_formula_and_normalization(self):
        theta = WeibullParams(4, 2)
        expected = (4 / 2) * (1.5 / 2) ** 3 * math.exp(-((1.5 / 2) ** 4))
        assert weibull_pdf(1.5, theta) == pytest.approx(expected, rel=1e-14)
        assert weibull_support_quad(lambda x: weibull_pdf(x, theta), theta) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("a", ALPHA_GRID)
    @pytest.mark.parametrize("b", BETA_GRID)
    def test_normalization_grid(self, a, b):
        theta = WeibullParams(a, b)
        total = weibull_support_quad(lambda x: weibull_pdf(x, theta), theta)
        assert total == pytest.approx(1.0, abs=1e-8)


class TestCdfQuantile:
    def test_cdf_values(self):
        assert weibull_cdf(0.0, WeibullParams(2, 3)) == 0.0
        for a in (0.7, 1.0, 3.0):
            assert weibull_cdf(5.0, WeibullParams(a, 5)) == pytest.approx(1 - math.exp(-1), rel=1e-12)
        assert weibull_cdf(3.0, WeibullParams(2, 1)) == pytest.approx(1 - math.exp(-9), rel=1e-12)

    def test_cdf_matches_pdf_quadrature(self):
        theta = WeibullParams(2, 1)
        num = weibull_support_quad(lambda x: weibull_pdf(x, theta) * (x <= 3.0), theta)
        assert weibull_cdf(3.0, theta) == pytest.approx(num, abs=1e-7)

    def test_quantile_closed_forms(self):
        assert weibull_quantile(1 - math.exp(-1), WeibullParams(3, 5)) == pytest.approx(5.0, rel=1e-12)
        assert weibull_quantile(0.5, WeibullParams(1, 1)) == pytest.approx(math.log(2), rel=1e-12)
        assert weibull_quantile(0.9, WeibullParams(4, 2)) == pytest.approx(
            2 * math.log(10) ** 0.25, rel=1e-12
        )

    def test_quantile_by_bisection(self):
        theta = WeibullParams(4, 2)
        target = 0.9
        lo, hi = 0.0, 100.0
        for _ in range(80):
            mid = (lo + hi) / 2
            if weibull_cdf(mid, theta) < target:
                lo = mid
            else:
                hi = mid
        assert weibull_quantile(0.9, theta) == pytest.approx((lo + hi) / 2, abs=1e-10)

    @pytest.mark.parametrize("a,b", [(0.5, 1.0), (1.0, 2.0), (4.0, 2.0), (10.0, 0.5)])
    def test_roundtrip_and_monotone(self, a, b):
        theta = WeibullParams(a, b)
        u = np.linspace(0.001, 0.999, 101)
        x = weibull_quantile(u, theta)
        assert np.all(np.diff(x) > 0)
        npt.assert_allclose(weibull_cdf(x, theta), u, atol=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            weibull_quantile(0.0, WeibullParams(1, 1))
        with pytest.raises(DomainError):
            weibull_quantile(1.0, WeibullParams(1, 1))


class TestSampling:
    def test_empty(self):
        assert len(weibull_sample(WeibullParams(1, 2), 0, np.random.default_rng(0))) == 0
        assert len(uniform_sample(UniformParams(0, 1), 0, np.random.default_rng(0))) == 0

    def test_lln_mean(self):
        n = 100_000
        x = weibull_sample(WeibullParams(1, 2), n, np.random.default_rng(42))
        sd = math.sqrt(raw_moment(2, WeibullParams(1, 2)) - 4.0)
        assert abs(x.mean() - 2.0) < 3 * sd / math.sqrt(n)

    def test_ks_self_consistency_over_seeds(self):
        theta = WeibullParams(4, 2)
        n = 2000
        hits = 0
        seeds = 40
        for s in range(seeds):
            x = np.sort(weibull_sample(theta, n, np.random.default_rng(s)))
            f = weibull_cdf(x, theta)
            i = np.arange(1, n + 1)
            d = max(np.max(i / n - f), np.max(f - (i - 1) / n))
            hits += d < 1.36 / math.sqrt(n)
        assert hits >= 0.95 * seeds - 2  # 1.36/sqrt(n) is the 5% critical value

    def test_uniform_range_and_mean(self):
        rng = np.random.default_rng(7)
        x = uniform_sample(UniformParams(5, 10), 1000, rng)
        assert x.min() >= 5 and x.max() <= 10
        y = uniform_sample(UniformParams(0, 1), 100_000, np.random.default_rng(3))
        assert abs(y.mean() - 0.5) < 3 / math.sqrt(12 * 100_000)


class TestBurrIII:
    def test_median_inversion(self):
        for c, k in [(2.0, 20.0), (1.5, 3.0)]:
            med = (2 ** (1 / k) - 1) ** (-1 / c)
            assert burr3_cdf(med, BurrIIIParams(c, k)) == pytest.approx(0.5, rel=1e-12)

    def test_pdf_normalization(self):
        from scipy.integrate import quad

        p = BurrIIIParams(2, 20)
        total = quad(lambda x: burr3_pdf(x, p), 0, np.inf, limit=400)[0]
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_single_peak(self):
        # numeric derivative changes sign exactly once on a dense grid
        p = BurrIIIParams(2, 20)
        xs = np.linspace(0.5, 30, 4000)
        d = np.diff(burr3_pdf(xs, p))
        changes = np.sum(np.diff(np.sign(d[d != 0])) != 0)
        assert changes == 1

    def test_sampling_matches_cdf(self):
        p = BurrIIIParams(2, 20)
        x = np.sort(burr3_sample(p, 4000, np.random.default_rng(5)))
        f = burr3_cdf(x, p)
        i = np.arange(1, len(x) + 1)
        d = max(np.max(i / len(x) - f), np.max(f - (i - 1) / len(x)))
        assert d < 1.63 / math.sqrt(len(x))  # 1% critical value

    def test_domain(self):
        with pytest.raises(DomainError):
            burr3_pdf(0.0, BurrIIIParams(2, 20))


class TestReliabilityHazard:
    def test_reliability_values(self):
        theta = WeibullParams(3, 5)
        assert reliability(0.0, theta) == 1.0
        assert reliability(5.0, theta) == pytest.approx(math.exp(-1), rel=1e-12)
        assert reliability(2.0, theta) == pytest.approx(math.exp(-0.064), rel=1e-12)
        assert reliability(2.0, theta) == pytest.approx(1 - weibull_cdf(2.0, theta), rel=1e-12)

    def test_hazard_values(self):
        assert hazard(3.7, WeibullParams(1, 4)) == 0.25
        for a in (0.8, 1.0, 2.5):
            th = WeibullParams(a, 3)
            assert hazard(3.0, th) == pytest.approx(a / 3, rel=1e-12)
        assert hazard(2.0, WeibullParams(3, 1)) == pytest.approx(12.0, rel=1e-12)

    def test_hazard_is_pdf_over_reliability(self):
        for a, b in [(0.5, 1), (1, 2), (4, 2)]:
            theta = WeibullParams(a, b)
            for t in (0.3, 1.0, 2.7):
                assert hazard(t, theta) == pytest.approx(
                    weibull_pdf(t, theta) / reliability(t, theta), rel=1e-12
                )

    def test_hazard_monotonicity(self):
        ts = np.linspace(0.1, 5, 50)
        assert np.all(np.diff(hazard(ts, WeibullParams(2, 1))) > 0)
        assert np.all(np.diff(hazard(ts, WeibullParams(0.5, 1))) < 0)

    def test_hazard_domain(self):
        with pytest.raises(DomainError):
            hazard(0.0, WeibullParams(0.5, 1))
        with pytest.raises(DomainError):
            hazard(-1.0, WeibullParams(2, 1))


class TestShapeAnalysis:
    def test_alpha_two_inflections(self):
        # lower inflection at 0; the upper solves (x/beta)^2 = 3/2
        sa = shape_analysis(WeibullParams(2, 1))
        assert sa.inflection_lower == 0.0
        assert sa.inflection_upper == pytest.approx(math.sqrt(1.5), rel=1e-12)
        assert not sa.monotone_decreasing

    def test_no_mode_below_one(self):
        sa = shape_analysis(WeibullParams(0.5, 3))
        assert sa.mode is None and sa.monotone_decreasing

    def test_mode_matches_numeric_argmax(self):
        theta = WeibullParams(4, 2)
        sa = shape_analysis(theta)
        assert sa.mode == pytest.approx(2 * (3 / 4) ** 0.25, rel=1e-12)
        # golden-section argmax oracle
        lo, hi = 0.0, 6.0
        invphi = (math.sqrt(5) - 1) / 2
        while hi - lo > 1e-10:
            m1 = hi - invphi * (hi - lo)
            m2 = lo + invphi * (hi - lo)
            if weibull_pdf(m1, theta) < weibull_pdf(m2, theta):
                lo = m1
            else:
                hi = m2
        assert sa.mode == pytest.approx((lo + hi) / 2, abs=1e-6)

    @pytest.mark.parametrize("a", [1.5, 2.0, 4.0, 10.0])
    def test_second_derivative_sign_change_at_inflections(self, a):
        theta = WeibullParams(a, 2)
        sa = shape_analysis(theta)

        def f2(x, h=1e-5):
            return (weibull_pdf(x + h, theta) - 2 * weibull_pdf(x, theta) + weibull_pdf(x - h, theta)) / h**2

        points = [p for p in (sa.inflection_lower, sa.inflection_upper) if p is not None and p > 0]
        assert sa.inflection_upper is not None
        if 1 < a < 2:
            assert sa.inflection_lower is None
        for p in points:
            assert f2(p - 1e-3) * f2(p + 1e-3) < 0

    def test_mode_argmax_on_alpha_grid(self):
        for a in (1.5, 2.0, 4.0, 10.0):
            theta = WeibullParams(a, 1.7)
            sa = shape_analysis(theta)
            xs = np.linspace(1e-6, 6, 200_001)
            grid_argmax = xs[np.argmax(weibull_pdf(xs, theta))]
            assert abs(sa.mode - grid_argmax) < 1e-4


class TestTruncatedAndResidualMoments:
    def test_s_zero_is_reliability(self):
        theta = WeibullParams(2.5, 1.3)
        for t in (0.0, 0.5, 2.0):
            assert truncated_moment(0, t, theta) == pytest.approx(reliability(t, theta), rel=1e-12)

    def test_exponential_mean(self):
        assert truncated_moment(1, 0.0, WeibullParams(1, 2)) == pytest.approx(2.0, rel=1e-12)

    @pytest.mark.parametrize("s,t,a,b", [(2, 1, 2, 1), (1, 0.5, 4, 2), (1.5, 2.0, 0.8, 1.5)])
    def test_against_quadrature(self, s, t, a, b):
        theta = WeibullParams(a, b)
        num = expectation_quad(lambda x: (x >= t) * x**s, theta)
        assert truncated_moment(s, t, theta) == pytest.approx(num, abs=1e-8)

    def test_residual_life_trivial(self):
        assert residual_life_moment(1, 0.0, WeibullParams(1, 1)) == pytest.approx(1.0, rel=1e-12)
        # order 1, t -> 0 recovers the plain mean
        theta = WeibullParams(3, 2)
        assert residual_life_moment(1, 0.0, theta) == pytest.approx(raw_moment(1, theta), rel=1e-12)

    @pytest.mark.parametrize("order,t,a,b", [(2, 0.5, 2, 1), (1, 1.0, 1, 1), (3, 0.7, 1.5, 2)])
    def test_residual_life_against_quadrature(self, order, t, a, b):
        theta = WeibullParams(a, b)
        num = expectation_quad(lambda x: (x >= t) * (x - t) ** order, theta) / reliability(t, theta)
        assert residual_life_moment(order, t, theta) == pytest.approx(num, abs=1e-8)

    def test_residual_life_binomial_identity_at_zero(self):
        theta = WeibullParams(2, 1.5)
        for order in (1, 2, 3):
            assert residual_life_moment(order, 0.0, theta) == pytest.approx(
                raw_moment(order, theta), rel=1e-10
            )

    def test_large_truncation_is_stable(self):
        # exp((t/beta)^alpha) alone would overflow here
        theta = WeibullParams(2, 1)
        val = residual_life_moment(1, 30.0, theta)
        assert np.isfinite(val) and 0 < val < 1


class TestWeightedMoments:
    def test_trivial_values(self):
        assert weighted_moment(1, 1, WeibullParams(1, 2)) == pytest.approx(2.0, rel=1e-12)
        assert weighted_moment(0, 2, WeibullParams(1, 1)) == pytest.approx(0.5, rel=1e-12)

    def test_log_moment_exponential(self):
        assert weighted_log_moment(0, 1, WeibullParams(1, 1)) == pytest.approx(-EULER_GAMMA, rel=1e-12)
        assert weighted_log_moment(1, 1, WeibullParams(1, 1)) == pytest.approx(1 - EULER_GAMMA, rel=1e-12)

    def test_log2_moment_exponential(self):
        assert weighted_log2_moment(0, 1, WeibullParams(1, 1)) == pytest.approx(
            EULER_GAMMA**2 + math.pi**2 / 6, rel=1e-12
        )

    def test_log2_moment_r1_form(self):
        from scipy.special import digamma, polygamma

        theta = WeibullParams(2, 1)
        g = 1 + 1 / 2
        expected = theta.beta * math.gamma(g) * (
            (digamma(g) ** 2 + polygamma(1, g)) / 4
        )
        assert weighted_log2_moment(1, 1, theta) == pytest.approx(float(expected), rel=1e-12)

    @pytest.mark.parametrize(
        "s,r,a,b",
        [
            (1.3, 1.7, 2.5, 3.0),
            (2.0, 1.5, 3.0, 2.0),
            (1.0, 2.0, 2.0, 1.5),
            (0.7, 1.0, 1.3, 2.2),
            (0.0, 1.2, 0.6, 1.0),
            (2.0, 0.5, 1.5, 0.8),
            (1.0, 3.0, 4.0, 2.0),
            (0.5, 2.5, 0.9, 5.0),
        ],
    )
    def test_all_three_tools_against_quadrature(self, s, r, a, b):
        theta = WeibullParams(a, b)
        for fn, wfn in [
            (weighted_moment, lambda x: x**s),
            (weighted_log_moment, lambda x: x**s * np.log(x)),
            (weighted_log2_moment, lambda x: x**s * np.log(x) ** 2),
        ]:
            num = expectation_quad(wfn, theta, density_power=r)
            assert fn(s, r, theta) == pytest.approx(num, rel=1e-7, abs=1e-12)

    def test_divergent_domain(self):
        with pytest.raises(DomainError):
            weighted_moment(-2.0, 1.0, WeibullParams(1, 1))
        with pytest.raises(DomainError):
            weighted_moment(1.0, -0.5, WeibullParams(2, 1))
        with pytest.raises(DomainError):
            raw_moment(-1.5, WeibullParams(1, 1))


class TestEntropies:
    def test_tsallis_trivial(self):
        assert tsallis_entropy(2.0, WeibullParams(1, 1)) == pytest.approx(0.5, rel=1e-12)

    def test_tsallis_matches_quadrature(self):
        theta = WeibullParams(3, 2)
        q = 1.5
        num = (1 - expectation_quad(lambda x: 1.0, theta, density_power=q)) / (q - 1)
        assert tsallis_entropy(q, theta) == pytest.approx(num, abs=1e-8)

    def test_tsallis_to_shannon_limit(self):
        theta = WeibullParams(2, 1.5)
        h = shannon_entropy(theta)
        errs = [abs(tsallis_entropy(1 + 10.0**-k, theta) - h) for k in (4, 5, 6)]
        assert errs[0] < 1e-3 and errs[2] < 1e-4
        assert errs[2] < errs[1] < errs[0]
        assert tsallis_entropy(1 - 1e-6, theta) == pytest.approx(h, abs=1e-4)

    def test_tsallis_domain(self):
        with pytest.raises(DomainError):
            tsallis_entropy(1.0, WeibullParams(1, 1))
        with pytest.raises(DomainError):
            tsallis_entropy(3.0, WeibullParams(0.5, 1))  # q(alpha-1) = -1.5

    def test_quadratic(self):
        assert quadratic_entropy(WeibullParams(1, 1)) == pytest.approx(math.log(2), rel=1e-12)
        assert quadratic_entropy(WeibullParams(1, 5)) == pytest.approx(math.log(5) + math.log(2), rel=1e-12)
        theta = WeibullParams(2, 1)
        num = -math.log(expectation_quad(lambda x: 1.0, theta, density_power=2))
        assert quadratic_entropy(theta) == pytest.approx(num, abs=1e-8)
        with pytest.raises(DomainError):
            quadratic_entropy(WeibullParams(0.5, 1))

    def test_shannon(self):
        assert shannon_entropy(WeibullParams(1, 1)) == pytest.approx(1.0, rel=1e-12)
        assert shannon_entropy(WeibullParams(1, 2)) == pytest.approx(1 + math.log(2), rel=1e-12)
        theta = WeibullParams(4, 2)
        num = -expectation_quad(lambda x: np.log(weibull_pdf(x, theta)), theta)
        assert shannon_entropy(theta) == pytest.approx(num, abs=1e-8)


class TestMgf:
    def test_trivial(self):
        assert mgf(0.0, WeibullParams(2, 1)) == 1.0
        assert mgf(0.5, WeibullParams(1, 1)) == pytest.approx(2.0, rel=1e-12)

    def test_series_against_quadrature(self):
        theta = WeibullParams(2, 1)
        num = expectation_quad(lambda x: np.exp(x), theta)
        assert mgf(1.0, theta, terms=60) == pytest.approx(num, abs=1e-8)

    def test_negative_argument(self):
        theta = WeibullParams(3, 2)
        num = expectation_quad(lambda x: np.exp(-0.7 * x), theta)
        assert mgf(-0.7, theta, terms=60) == pytest.approx(num, abs=1e-8)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            mgf(1.0, WeibullParams(0.9, 1))
        with pytest.raises(DomainError):
            mgf(1.0, WeibullParams(1, 1))
        with pytest.raises(DomainError):
            mgf(5.0, WeibullParams(1.1, 2), terms=5)  # remainder bound too large
