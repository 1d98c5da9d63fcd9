"""Information criteria and EDF statistic tests.

Closed forms pin the n=1 plain statistics; a probability-integral
simulation under a known true model checks that the plain statistics
calibrate against the standard 5% critical values; the modified variant
is pinned by frozen flood-study values computed once and kept as a
regression anchor.
"""

import math

import numpy as np
import pytest

from oddsgamma import DataError, gof_report, info_criteria
from oddsgamma.expgamma import OEGammaDist
from oddsgamma.gof import GofReport, anderson_darling, cramer_von_mises


class TestInfoCriteria:
    def test_lockstep_formulas(self):
        ll, k, n = -249.515, 3, 72
        aic, aicc, bic, hqic = info_criteria(ll, k, n)
        assert aic == pytest.approx(2 * k - 2 * ll, abs=1e-12)
        assert aicc == pytest.approx(aic + 2 * k * (k + 1) / (n - k - 1), abs=1e-12)
        assert bic == pytest.approx(k * math.log(n) - 2 * ll, abs=1e-12)
        assert hqic == pytest.approx(2 * k * math.log(math.log(n)) - 2 * ll, abs=1e-12)

    def test_frozen_point(self):
        aic, aicc, bic, hqic = info_criteria(0.0, 1, 100)
        assert aic == 2.0
        assert aicc == pytest.approx(2.0408163265306123, abs=1e-15)
        assert bic == pytest.approx(4.605170185988092, abs=1e-15)
        assert hqic == pytest.approx(3.0543592516158022, abs=1e-15)

    def test_zero_parameters_have_no_penalty(self):
        aic, aicc, bic, hqic = info_criteria(-10.0, 0, 50)
        assert aic == aicc == bic == hqic == 20.0

    def test_aicc_needs_enough_points(self):
        with pytest.raises(ValueError, match=r"AICc undefined for n <= k \+ 1 \(n=4, k=3\)"):
            info_criteria(-1.0, 3, 4)

    def test_hqic_needs_three_points(self):
        with pytest.raises(ValueError, match=r"HQIC undefined for n < 3 \(n=2\)"):
            info_criteria(-1.0, 0, 2)

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError, match="parameter count must be >= 0"):
            info_criteria(-1.0, -2, 10)


class TestPlainStatistics:
    def test_single_point_closed_forms(self):
        # n=1, u=1/2: A2 = -1 - (ln u + ln(1-u)) = 2 ln 2 - 1, W2 = 1/12
        assert anderson_darling([0.5]) == pytest.approx(2 * math.log(2) - 1, abs=1e-15)
        assert cramer_von_mises([0.5]) == pytest.approx(1.0 / 12.0, abs=1e-15)

    def test_order_invariance(self):
        rng = np.random.default_rng(21)
        u = rng.uniform(0.01, 0.99, size=40)
        shuffled = rng.permutation(u)
        assert anderson_darling(u) == anderson_darling(shuffled)
        assert cramer_von_mises(u) == cramer_von_mises(shuffled)

    def test_perfect_grid_minimizes_w2(self):
        # the plain W2 lower bound 1/(12n) is attained on the midpoint grid
        n = 25
        grid = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
        assert cramer_von_mises(grid) == pytest.approx(1.0 / (12.0 * n), abs=1e-15)

    def test_extreme_values_inflate_a2(self):
        # one point at 1e-12 adds about -ln(1e-12)/n ~ 1.4 to A2
        good = anderson_darling(np.linspace(0.05, 0.95, 20))
        bad = anderson_darling(np.concatenate(
            [np.linspace(0.05, 0.95, 19), [1e-12]]))
        assert bad > good + 1.0

    def test_clamp_warning_below_log_floor(self):
        with pytest.warns(RuntimeWarning, match="clamped before taking logs"):
            anderson_darling([1e-320, 0.5, 0.9])


class TestValidation:
    def test_empty_rejected(self):
        with pytest.raises(DataError, match="at least one probability value"):
            anderson_darling([])

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, np.nan, np.inf])
    def test_out_of_open_interval_rejected(self, bad):
        with pytest.raises(DataError, match="probability value out of \\(0,1\\) at index 1"):
            cramer_von_mises([0.5, bad, 0.7])

    def test_modified_needs_two_values(self):
        with pytest.raises(DataError, match="requires at least 2 values"):
            anderson_darling([0.5], modified=True)

    def test_modified_rejects_degenerate_values(self):
        with pytest.raises(DataError, match="zero variance after transform"):
            cramer_von_mises([0.3, 0.3, 0.3], modified=True)


class TestModifiedVariant:
    def test_standardization_absorbs_location_scale(self):
        # values compressed into (0.2, 0.8) blow the plain statistic up,
        # while the normal-transform standardization mostly removes the
        # location/scale distortion before scoring
        rng = np.random.default_rng(33)
        u = rng.uniform(0.0, 1.0, size=200)
        shifted = u * 0.6 + 0.2
        a_plain = anderson_darling(shifted)
        a_mod = anderson_darling(shifted, modified=True)
        assert a_plain > 5.0
        assert a_mod < a_plain / 3.0

    def test_multipliers_applied(self):
        # at large n the modified statistic approaches the plain statistic
        # of the standardized values; at small n the multiplier shows up
        u = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
        n = u.size
        a_mod = anderson_darling(u, modified=True)
        w_mod = cramer_von_mises(u, modified=True)
        assert a_mod > 0.0 and w_mod > 0.0
        # recompute the plain forms of the standardized values directly
        from scipy import special
        y = special.ndtri(u)
        z = np.sort(special.ndtr((y - y.mean()) / y.std(ddof=1)))
        coeff = 2.0 * np.arange(1, n + 1) - 1.0
        a_plain = -n - np.sum(coeff * (np.log(z) + np.log(1 - z[::-1]))) / n
        w_plain = np.sum((z - coeff / (2 * n)) ** 2) + 1 / (12 * n)
        assert a_mod == pytest.approx(a_plain * (1 + 0.75 / n + 2.25 / n ** 2), rel=1e-12)
        assert w_mod == pytest.approx(w_plain * (1 + 0.5 / n), rel=1e-12)


class TestGofReport:
    FROZEN = {
        "m1": (0.75185869, 0.13061260),
        "m2": (0.45145970, 0.07568377),
        "m6": (0.78544220, 0.13798966),
    }

    @pytest.mark.parametrize("alias", ["m1", "m2", "m6"])
    def test_flood_statistics_frozen(self, fits, alias):
        _, rep, _ = fits[alias]
        a_ref, w_ref = self.FROZEN[alias]
        assert isinstance(rep, GofReport)
        assert rep.a_squared == pytest.approx(a_ref, abs=5e-6)
        assert rep.w_squared == pytest.approx(w_ref, abs=5e-6)
        assert rep.n == 72

    def test_criteria_consistent_with_info_criteria(self, fits):
        res, rep, _ = fits["m2"]
        aic, aicc, bic, hqic = info_criteria(res.loglik, rep.k, rep.n)
        assert (rep.aic, rep.aicc, rep.bic, rep.hqic) == (aic, aicc, bic, hqic)

    def test_reported_k_is_model_k(self, fits):
        assert fits["m1"][1].k == 3  # displayed parameters, not optimized ones
        assert fits["m6"][1].k == 2

    def test_empty_data_rejected(self, fits):
        from oddsgamma import get_model
        with pytest.raises(DataError, match="gof_report requires at least one"):
            gof_report(get_model("m2"), np.array([]), (1.0, 1.0, 1.0), -1.0)


class TestCalibration:
    def test_plain_statistics_under_the_true_model(self):
        # PIT values of samples from the true law are uniform, so the
        # plain statistics should stay below the 5% simple-hypothesis
        # critical values in at least ~95% of replications
        dist = OEGammaDist(0.131, 0.179, 0.539)
        a_pass = w_pass = 0
        reps = 100
        for i in range(reps):
            x = dist.sample(500, np.random.default_rng(5000 + i))
            u = np.clip(dist.cdf(np.sort(x)), 1e-15, 1 - 1e-15)
            if anderson_darling(u) < 2.492:
                a_pass += 1
            if cramer_von_mises(u) < 0.461:
                w_pass += 1
        assert a_pass >= 90
        assert w_pass >= 90
