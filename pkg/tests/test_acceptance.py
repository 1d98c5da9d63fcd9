"""Release gate: ten numbered end-to-end checks.

Each test drives the public API the way a user would (flood-study
fits, distribution calculus on a parameter grid, seeded sampling,
score verification, series honesty, quadrature vs Monte Carlo) and
records one PASS/FAIL line that pytest prints after the run. Every
tolerance is stated inline next to the value it guards.
"""

import time

import numpy as np
from scipy import special, stats

from oddsgamma import info_criteria, wheaton
from oddsgamma.expgamma import OEGammaDist, oe_loglik_and_score
from oddsgamma.family import SeriesControl

# shared parameter grid for the calculus checks; spans shapes below,
# at, and above 1 and includes the flood-study fit point
GRID_ALPHAS = (0.131, 0.5, 1.0, 2.0, 5.0)
GRID_BETAS = (0.05, 0.179, 0.5, 1.0, 3.0)
GRID_LAMBDAS = (0.1, 0.539, 1.0, 2.0, 4.0)

ROUND_TRIP_PS = (0.001, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999)

KS_SETTINGS = (
    (0.131, 0.179, 0.539), (0.6, 0.05, 1.0), (1.0, 1.0, 1.0),
    (2.0, 1.0, 1.0), (1.5, 0.2, 0.5), (3.2, 2.5, 0.8),
    (0.25, 0.6, 2.0), (5.0, 0.3, 0.25), (0.9, 1.4, 1.7), (7.5, 2.2, 0.1),
)

MC_SETTINGS = (
    (2.0, 1.0, 1.0), (0.131, 0.179, 0.539), (1.0, 1.0, 1.0),
    (0.6, 0.05, 1.0), (3.2, 2.5, 0.8),
)

# series honesty matrix: moment orders crossed with parameter settings
# that cover fast convergence, slow growth, and outright divergence
SERIES_ORDERS = (1, 2, 6)
SERIES_SETTINGS = (
    (0.6, 0.05, 1.0), (2.0, 1.0, 1.0), (0.131, 0.179, 0.539), (1.5, 0.2, 0.5),
)
SERIES_CONTROL = SeriesControl(k_max=60, j_max=20_000, tail_tol=1e-6)


def _check(errors, ok, message):
    if not ok:
        errors.append(message)


def test_criterion_01_proposed_model_flood_fit(fits, record):
    res, rep, seconds = fits["m2"]
    errors = []
    for name, got, want in zip(("alpha", "beta", "lambda"), res.theta_hat,
                               (0.131, 0.179, 0.539)):
        _check(errors, abs(got - want) <= 0.02,
               f"{name}={got:.6f} not within 0.02 of {want}")
    for name, got, want, tol in (
        ("AIC", rep.aic, 505.030, 0.5),
        ("AICc", rep.aicc, 505.383, 0.5),
        ("BIC", rep.bic, 511.860, 0.5),
        ("HQIC", rep.hqic, 507.749, 0.5),
        ("A2", rep.a_squared, 0.4516, 0.01),
        ("W2", rep.w_squared, 0.0757, 0.003),
    ):
        _check(errors, abs(got - want) <= tol,
               f"{name}={got:.6f} not within {tol} of {want}")
    _check(errors, seconds <= 10.0, f"fit took {seconds:.1f}s > 10s")
    record(1, "proposed-model flood fit reproduces the reference row", errors)


def test_criterion_02_weibull_flood_fit(fits, record):
    res, rep, _ = fits["m6"]
    errors = []
    _check(errors, abs(res.theta_hat[0] - 0.901) <= 0.01,
           f"shape={res.theta_hat[0]:.6f} not within 0.01 of 0.901")
    for name, got, want, tol in (
        ("AIC", rep.aic, 506.997, 0.5),
        ("BIC", rep.bic, 511.551, 0.5),
        ("A2", rep.a_squared, 0.7855, 0.01),
        ("W2", rep.w_squared, 0.1380, 0.003),
    ):
        _check(errors, abs(got - want) <= tol,
               f"{name}={got:.6f} not within {tol} of {want}")
    record(2, "Weibull flood fit reproduces the reference row", errors)


def test_criterion_03_gamma_competitor_flood_fit(fits, record):
    res, rep, _ = fits["m1"]
    errors = []
    _check(errors, abs(res.loglik - (-251.34)) <= 0.05,
           f"loglik={res.loglik:.6f} not within 0.05 of -251.34")
    _check(errors, abs(rep.aic - 508.689) <= 0.5,
           f"AIC={rep.aic:.6f} not within 0.5 of 508.689")
    _check(errors, rep.k == 3, f"reported k={rep.k} != 3")
    record(3, "gamma-competitor flood fit reproduces the reference row", errors)


def test_criterion_04_criteria_formula_lockstep(record):
    aic, aicc, bic, hqic = info_criteria(-249.515, 3, 72)
    errors = []
    for name, got, want in (
        ("AIC", aic, 505.030), ("AICc", aicc, 505.383),
        ("BIC", bic, 511.860), ("HQIC", hqic, 507.749),
    ):
        _check(errors, abs(got - want) <= 0.01,
               f"{name}={got:.6f} not within 0.01 of {want}")
    record(4, "criteria formulas reproduce all four reference values", errors)


def test_criterion_05_model_ranking(fits, record):
    reports = {name: rep for name, (_, rep, _) in fits.items()}
    errors = []
    for metric in ("aic", "aicc", "hqic", "a_squared", "w_squared"):
        winner = min(reports, key=lambda nm: getattr(reports[nm], metric))
        _check(errors, winner == "m2", f"{metric} minimized by {winner}, not m2")
    bic_winner = min(reports, key=lambda nm: reports[nm].bic)
    _check(errors, bic_winner == "m6", f"bic minimized by {bic_winner}, not m6")
    record(5, "proposed model wins every criterion except BIC (Weibull)", errors)


def test_criterion_06_distribution_calculus_grid(record):
    errors = []
    for a in GRID_ALPHAS:
        for b in GRID_BETAS:
            for lam in GRID_LAMBDAS:
                d = OEGammaDist(a, b, lam)
                label = f"({a},{b},{lam})"
                for p in ROUND_TRIP_PS:
                    gap = abs(d.cdf(d.quantile(p)) - p)
                    _check(errors, gap <= 1e-9,
                           f"round trip {label} p={p}: gap {gap:.2e}")
                for q in (0.25, 0.75):
                    x = d.quantile(q)
                    h = 5e-6 * max(x, 1.0)
                    fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h)
                    pdf = d.pdf(x)
                    _check(errors, abs(pdf - fd) <= 1e-5 * pdf,
                           f"pdf-vs-cdf-slope {label} q={q}")
                for q in (0.5, 0.9):
                    x = d.quantile(q)
                    lhs = d.hazard(x) * (1.0 - d.cdf(x))
                    _check(errors, abs(lhs - d.pdf(x)) <= 1e-9 * d.pdf(x),
                           f"hazard identity {label} q={q}")
                if a == 1.0:
                    for q in (0.3, 0.7):
                        x = d.quantile(q)
                        w = 1.0 / np.expm1(lam * x)
                        cdf_closed = np.exp(-b * w)
                        pdf_closed = b * lam * w * (1.0 + w) * cdf_closed
                        _check(errors,
                               abs(d.cdf(x) - cdf_closed) <= 1e-12 * cdf_closed,
                               f"alpha=1 cdf closed form {label}")
                        _check(errors,
                               abs(d.pdf(x) - pdf_closed) <= 1e-12 * pdf_closed,
                               f"alpha=1 pdf closed form {label}")
                norm = d.moment_quadrature(0)
                _check(errors, abs(norm - 1.0) <= 1e-8,
                       f"normalization {label}: {norm!r}")
    record(6, "calculus identities hold across the 5x5x5 parameter grid", errors)


def test_criterion_07_seeded_sampling_ks(record):
    errors = []
    t0 = time.perf_counter()
    for i, theta in enumerate(KS_SETTINGS):
        d = OEGammaDist(*theta)
        draws = d.sample(100_000, np.random.default_rng(42 + i))
        pvalue = stats.kstest(draws, d.cdf).pvalue
        _check(errors, pvalue > 0.01,
               f"KS p={pvalue:.4f} <= 0.01 at {theta}")
    elapsed = time.perf_counter() - t0
    _check(errors, elapsed <= 30.0, f"sampling checks took {elapsed:.1f}s > 30s")
    record(7, "seeded 1e5-draw KS tests pass at the 0.01 level", errors)


def _fd_score(data, theta, h=1e-6):
    theta = np.asarray(theta, dtype=float)
    out = np.empty(3)
    for i in range(3):
        step = h * max(1.0, abs(theta[i]))
        up = theta.copy(); up[i] += step
        dn = theta.copy(); dn[i] -= step
        out[i] = (oe_loglik_and_score(data, *up)[0]
                  - oe_loglik_and_score(data, *dn)[0]) / (2.0 * step)
    return out


def _typo_score(data, theta):
    """Gradient with the two reference-text slips: the alpha and lambda
    components use n where the sum of the observations belongs."""
    a, b, lam = theta
    x = np.asarray(data, dtype=float)
    n = x.size
    w = 1.0 / np.expm1(lam * x)
    d_a = (n * np.log(b) - n * special.psi(a) - lam * n
           - float(np.sum(np.log(-np.expm1(-lam * x)))))
    d_b = n * a / b - float(np.sum(w))
    d_l = (n / lam - a * n - (a + 1.0) * float(np.sum(x * w))
           + b * float(np.sum(x * w * (1.0 + w))))
    return np.array([d_a, d_b, d_l])


def test_criterion_08_analytic_score_verified(flood_values, record):
    errors = []
    rng = np.random.default_rng(8128)
    for _ in range(50):
        theta = np.array([rng.uniform(0.1, 3.0), rng.uniform(0.05, 2.0),
                          rng.uniform(0.05, 2.0)])
        _, grad = oe_loglik_and_score(flood_values, *theta)
        fd = _fd_score(flood_values, theta)
        scale = max(1.0, float(np.max(np.abs(grad))))
        rel = float(np.max(np.abs(grad - fd))) / scale
        _check(errors, rel <= 1e-6,
               f"analytic score off by rel {rel:.2e} at {theta.round(4).tolist()}")
        typo = _typo_score(flood_values, theta)
        rel_a = abs(typo[0] - fd[0]) / scale
        rel_l = abs(typo[2] - fd[2]) / scale
        _check(errors, rel_a > 1e-5,
               f"alpha typo variant not detected at {theta.round(4).tolist()}")
        _check(errors, rel_l > 1e-5,
               f"lambda typo variant not detected at {theta.round(4).tolist()}")
    record(8, "analytic score matches finite differences; typo variants fail",
           errors)


def test_criterion_09_series_honesty(record):
    errors = []
    converged_cells = 0
    for theta in SERIES_SETTINGS:
        d = OEGammaDist(*theta)
        for m in SERIES_ORDERS:
            result = d.moment_series(m, SERIES_CONTROL)
            reference = d.moment_quadrature(m)
            cell = f"m={m} at {theta}"
            if result.converged:
                converged_cells += 1
                gap = abs(result.value - reference)
                _check(errors, gap <= max(1e-6, 1e-4 * abs(reference)),
                       f"{cell}: converged but off by {gap:.2e} (ref {reference:.6g})")
            else:
                _check(errors, bool(result.diagnostic),
                       f"{cell}: not converged yet no diagnostic")
    _check(errors, converged_cells >= 1, "no cell converged at all")
    record(9, "every series cell either converges to quadrature or says why not",
           errors)


def test_criterion_10_moments_match_monte_carlo(record):
    errors = []
    n_batches, batch = 100, 10_000
    for si, theta in enumerate(MC_SETTINGS):
        d = OEGammaDist(*theta)
        draws = d.sample(n_batches * batch, np.random.default_rng(9000 + si))
        blocks = draws.reshape(n_batches, batch)
        per_batch = np.empty((n_batches, 4))
        for bi, xb in enumerate(blocks):
            mu = xb.mean()
            c = xb - mu
            m2 = np.mean(c * c)
            per_batch[bi] = (mu, xb.var(ddof=1),
                             np.mean(c ** 3) / m2 ** 1.5,
                             np.mean(c ** 4) / m2 ** 2)
        mc = per_batch.mean(axis=0)
        se = per_batch.std(axis=0, ddof=1) / np.sqrt(n_batches)
        m1 = d.moment_quadrature(1)
        quad = np.array([
            m1,
            d.moment_quadrature(2) - m1 * m1,
            d.general_coefficient(3),
            d.general_coefficient(4),
        ])
        z = np.abs(quad - mc) / se
        for name, zi in zip(("mean", "variance", "skewness", "kurtosis"), z):
            _check(errors, zi <= 3.0,
                   f"{name} at {theta}: {zi:.2f} standard errors from Monte Carlo")
    record(10, "quadrature moments sit within 3 SE of seeded Monte Carlo", errors)
