"""Optimizer tests on models with closed-form maximum-likelihood answers.

A unit-variance location toy (no analytic score, so the finite-difference
gradient path runs) and an exponential-rate toy (analytic score path)
both have textbook MLEs and observed-information standard errors, which
pins the optimizer and the error machinery independently of the real
models. The flood-data fits from the session fixture double as
integration checks.
"""

import numpy as np
import pytest

from oddsgamma import DataError, FitError, get_model, mle_fit
from oddsgamma.fit import FitOptions, FitResult, negative_log_lik, standard_errors
from oddsgamma.models import FittableModel


def _location_model():
    # unit-variance normal location family, constant term dropped;
    # information is exactly n, so SE = 1/sqrt(n)
    return FittableModel(
        name="location-toy",
        k=1,
        param_names=("mu",),
        param_positivity=(True,),
        log_pdf=lambda x, t: -0.5 * (np.asarray(x, dtype=float) - float(t[0])) ** 2,
        cdf=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
        initial_guess=lambda d: np.array([1.0]),
    )


def _exp_rate_model():
    def log_pdf(x, t):
        lam = float(t[0])
        return np.log(lam) - lam * np.asarray(x, dtype=float)

    def score(data, t):
        lam = float(t[0])
        x = np.asarray(data, dtype=float)
        n = x.size
        s = float(np.sum(x))
        return n * np.log(lam) - lam * s, np.array([n / lam - s])

    return FittableModel(
        name="exp-rate-toy",
        k=1,
        param_names=("lam",),
        param_positivity=(True,),
        log_pdf=log_pdf,
        cdf=lambda x, t: -np.expm1(-float(t[0]) * np.asarray(x, dtype=float)),
        initial_guess=lambda d: np.array([1.0]),
        analytic_score=score,
    )


def _flat_coordinate_model():
    # second parameter never enters the likelihood, so the observed
    # information is singular by construction
    def log_pdf(x, t):
        lam = float(t[0])
        return np.log(lam) - lam * np.asarray(x, dtype=float)

    return FittableModel(
        name="flat-toy",
        k=2,
        param_names=("lam", "unused"),
        param_positivity=(True, True),
        log_pdf=log_pdf,
        cdf=lambda x, t: -np.expm1(-float(t[0]) * np.asarray(x, dtype=float)),
        initial_guess=lambda d: np.array([1.0, 1.0]),
    )


class TestLocationToy:
    def test_mle_is_sample_mean(self):
        rng = np.random.default_rng(101)
        data = rng.normal(2.5, 1.0, size=400)
        res = mle_fit(_location_model(), data)
        assert res.converged
        assert res.theta_hat[0] == pytest.approx(float(np.mean(data)), rel=1e-8)

    def test_standard_error_is_inverse_root_n(self):
        rng = np.random.default_rng(102)
        data = rng.normal(3.0, 1.0, size=250)
        res = mle_fit(_location_model(), data)
        assert res.std_errors[0] == pytest.approx(1.0 / np.sqrt(250.0), rel=1e-6)
        assert res.warnings == ()


class TestExpRateToy:
    def test_mle_is_inverse_mean(self):
        rng = np.random.default_rng(7)
        data = rng.exponential(scale=2.0, size=10_000)
        res = mle_fit(_exp_rate_model(), data)
        lam_hat = 1.0 / float(np.mean(data))
        assert res.converged
        # the gradient stopping rule scales with |loglik| ~ 1.7e4 here,
        # which pins the rate to about 1e-6 relative
        assert res.theta_hat[0] == pytest.approx(lam_hat, rel=1e-6)
        assert res.loglik == pytest.approx(
            10_000 * (np.log(lam_hat) - 1.0), rel=1e-12)

    def test_standard_error_closed_form(self):
        # observed information n/lam^2 gives SE = lam_hat / sqrt(n)
        rng = np.random.default_rng(8)
        data = rng.exponential(scale=0.4, size=10_000)
        res = mle_fit(_exp_rate_model(), data)
        assert res.std_errors[0] == pytest.approx(
            res.theta_hat[0] / np.sqrt(10_000.0), rel=1e-5)

    def test_deterministic_reruns(self):
        rng = np.random.default_rng(9)
        data = rng.exponential(scale=1.0, size=500)
        first = mle_fit(_exp_rate_model(), data)
        second = mle_fit(_exp_rate_model(), data)
        assert first == second  # frozen dataclass, field-by-field equality

    def test_single_start_suffices_here(self):
        rng = np.random.default_rng(10)
        data = rng.exponential(scale=1.0, size=300)
        full = mle_fit(_exp_rate_model(), data)
        one = mle_fit(_exp_rate_model(), data, FitOptions(n_starts=1))
        assert one.theta_hat[0] == pytest.approx(full.theta_hat[0], rel=1e-9)


class TestDegenerateInformation:
    def test_flat_coordinate_yields_pseudo_inverse_warnings(self):
        rng = np.random.default_rng(3)
        data = rng.exponential(scale=0.5, size=200)
        res = mle_fit(_flat_coordinate_model(), data)
        lam_hat = 1.0 / float(np.mean(data))
        assert res.theta_hat[0] == pytest.approx(lam_hat, rel=1e-7)
        assert res.std_errors[0] == pytest.approx(lam_hat / np.sqrt(200.0), rel=1e-4)
        # the flat coordinate carries no information at all
        assert res.std_errors[1] == 0.0
        assert (
            "observed information is not positive definite; "
            "standard errors use a pseudo-inverse"
        ) in res.warnings
        assert "non-positive variance estimate on at least one coordinate" in res.warnings


class TestFloodFits:
    @pytest.mark.parametrize("alias", ["m1", "m2", "m6"])
    def test_converged_without_warnings(self, fits, alias):
        res, _, _ = fits[alias]
        assert isinstance(res, FitResult)
        assert res.converged
        assert res.warnings == ()
        assert res.grad_sup_norm <= 1e-6 * max(1.0, abs(res.loglik))
        assert res.iterations >= 1

    def test_proposed_model_standard_errors(self, fits):
        res, _, _ = fits["m2"]
        expected = (0.05324121027, 0.06972092217, 0.2507762461)
        for got, ref in zip(res.std_errors, expected):
            assert got == pytest.approx(ref, rel=1e-3)

    def test_refit_is_bit_identical(self, fits, flood_values):
        res, _, _ = fits["m2"]
        again = mle_fit(get_model("m2"), flood_values)
        assert again.theta_hat == res.theta_hat
        assert again.loglik == res.loglik


class TestNegativeLogLik:
    def test_matches_log_pdf_sum(self, flood_values):
        model = get_model("m6")
        theta = (0.9, 0.086)
        nll = negative_log_lik(model, flood_values, theta)
        assert nll == pytest.approx(
            -float(np.sum(model.log_pdf(flood_values, theta))), rel=1e-14)

    def test_rejections_are_inf(self, flood_values):
        model = get_model("m6")
        assert negative_log_lik(model, flood_values, (np.nan, 1.0)) == np.inf
        assert negative_log_lik(model, flood_values, (-1.0, 1.0)) == np.inf
        assert negative_log_lik(model, flood_values, (0.0, 1.0)) == np.inf

    def test_empty_data_rejected(self):
        with pytest.raises(DataError, match="at least one observation"):
            negative_log_lik(get_model("m6"), [], (1.0, 1.0))


class TestFailureModes:
    def test_all_starts_bad_raises_fit_error(self):
        broken = FittableModel(
            name="always-nan",
            k=1,
            param_names=("a",),
            param_positivity=(True,),
            log_pdf=lambda x, t: np.full(np.asarray(x).shape, np.nan),
            cdf=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
            initial_guess=lambda d: np.array([1.0]),
        )
        with pytest.raises(FitError) as err:
            mle_fit(broken, np.array([1.0, 2.0]))
        msg = str(err.value)
        assert msg.startswith("no start produced a finite likelihood for model always-nan")
        assert "start 0 at [1.0] was not finite" in msg
        assert "start 4" in msg

    def test_empty_data_rejected(self):
        with pytest.raises(DataError, match="mle_fit requires at least one observation"):
            mle_fit(get_model("m2"), np.array([]))
        with pytest.raises(DataError, match="standard_errors requires at least one"):
            standard_errors(get_model("m2"), np.array([]), (1.0, 1.0, 1.0))
