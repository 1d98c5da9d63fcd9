"""The (1-G)/G gamma family over an arbitrary base distribution.

A GammaRatioDist feeds the survival odds w(x) = (1 - G1(x))/G1(x) of a
base distribution through the upper tail of a Gamma(alpha, rate beta):
H(x) = Q(alpha, beta * w(x)). Closed forms cover cdf/pdf/hazard/quantile
and exact sampling; expectations (moments, mgf, cf, entropy) are
computed by adaptive quadrature in probability space with divergence
detection. The family's double-series expansions are exposed as formal
evaluators that report their own convergence honestly; quadrature is
authoritative whenever the two disagree.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .base import BaseDistribution
from .errors import DivergenceError, NumericalError
from .quadrature import windowed_quad
from .specfun import (
    DEFAULT_POLICY,
    _inv_reg_lower_gamma_vec,
    _inv_reg_upper_gamma_vec,
    inv_reg_lower_gamma,
    inv_reg_upper_gamma,
    log_gamma,
)

__all__ = ["GammaRatioDist", "SeriesControl", "SeriesResult"]

_TINY = np.finfo(float).tiny
_QUAD_TOL = 0.5e-10  # per half-axis; the two halves add to 1e-10


@dataclass(frozen=True)
class SeriesControl:
    """Truncation and honesty knobs for the formal series evaluators.

    k_max and j_max are term counts: shells k = 0..k_max-1 with inner
    terms j = 0..j_max-1 are eligible. tail_tol is the relative size at
    which trailing terms count as negligible; divergence_ratio is the
    shell-over-shell growth factor that fires the divergence flag.
    """

    k_max: int = 60
    j_max: int = 200
    tail_tol: float = 1e-10
    divergence_ratio: float = 10.0

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError(f"k_max must be at least 1, got {self.k_max}")
        if self.j_max < 1:
            raise ValueError(f"j_max must be at least 1, got {self.j_max}")
        if not self.tail_tol > 0.0:
            raise ValueError(f"tail_tol must be positive, got {self.tail_tol}")
        if not self.divergence_ratio > 1.0:
            raise ValueError(
                f"divergence_ratio must exceed 1, got {self.divergence_ratio}"
            )


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a truncated series evaluation.

    value is the partial sum reached (complex for the characteristic
    function; nan when a term could not be evaluated at all). converged
    is True only when the last retained shell fell below tail_tol
    relative to the partial sum and no divergence flag fired. diagnostic
    explains any failure; a converged result may still carry a note when
    an independent cross-check disagrees with the summed value.
    """

    value: float
    terms_used: tuple
    converged: bool
    diagnostic: str = ""


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _restore(arr, scalar):
    return float(arr) if scalar else arr


def _gamma_variates(rng, alpha, n):
    """n Gamma(alpha, 1) draws from a numpy Generator.

    Squeeze-rejection sampler (Marsaglia-Tsang): d = a - 1/3,
    c = 1/sqrt(9d), accept d*(1+c*z)^3 when ln u < z^2/2 + d - d*v
    + d*ln v. Shapes below 1 are boosted through Gamma(alpha+1) times
    an independent uniform to the power 1/alpha.
    """
    if n == 0:
        return np.empty(0)
    boost = None
    a = alpha
    if alpha < 1.0:
        with np.errstate(under="ignore"):
            boost = rng.random(n) ** (1.0 / alpha)
        a = alpha + 1.0
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        z = rng.standard_normal(todo.size)
        v = (1.0 + c * z) ** 3
        u = rng.random(todo.size)
        with np.errstate(divide="ignore", invalid="ignore"):
            accept = (v > 0.0) & (np.log(u) < 0.5 * z * z + d - d * v + d * np.log(v))
        out[todo[accept]] = d * v[accept]
        todo = todo[~accept]
    if boost is not None:
        with np.errstate(under="ignore"):
            out *= boost
    return out


def _sum_shells(inner, ctrl):
    """Drive the outer k-sum of a double series.

    inner(k) -> (shell value, j terms used, inner tail met, note);
    a non-empty note aborts the evaluation (a term was not evaluable).
    """
    total = 0.0
    j_widest = 0
    k_used = 0
    inner_all_ok = True
    prev_mag = None
    converged = False
    for k in range(ctrl.k_max):
        val, j_used, inner_ok, note = inner(k)
        j_widest = max(j_widest, j_used)
        if note:
            return SeriesResult(math.nan, (k, j_widest), False, note)
        total += val
        k_used = k + 1
        inner_all_ok = inner_all_ok and inner_ok
        mag = abs(val)
        if not math.isfinite(mag):
            return SeriesResult(
                total, (k_used, j_widest), False,
                f"shell k={k} is not finite; the expansion overflowed",
            )
        scale = max(abs(total), _TINY)
        if (
            prev_mag is not None
            and prev_mag > ctrl.tail_tol * scale
            and mag > ctrl.divergence_ratio * prev_mag
        ):
            return SeriesResult(
                total, (k_used, j_widest), False,
                f"shell k={k} grew {mag / prev_mag:.3g}x over shell k={k - 1}; "
                "the expansion is formal at these parameters",
            )
        if k >= 1 and mag <= ctrl.tail_tol * scale:
            converged = True
            break
        prev_mag = mag
    if not converged:
        return SeriesResult(
            total, (k_used, j_widest), False,
            f"k_max={ctrl.k_max} shells consumed before the tail criterion was met",
        )
    if not inner_all_ok:
        return SeriesResult(
            total, (k_used, j_widest), False,
            f"an inner sum hit j_max={ctrl.j_max} before its tail criterion",
        )
    return SeriesResult(total, (k_used, j_widest), True, "")


def _validate_order(m, who):
    if isinstance(m, float) and not m.is_integer():
        raise ValueError(f"{who} requires integer order, got {m}")
    m = int(m)
    if m < 0:
        raise ValueError(f"{who} requires order >= 0, got {m}")
    return m


def _recombine_central(parts, m):
    """Binomial recombination of series raw moments into a central one.

    parts[i] is the SeriesResult for the raw moment of order i,
    i = 0..m. Convergence requires every component to have converged.
    """
    mu = parts[1].value if m >= 1 else 0.0
    value = math.fsum(
        math.comb(m, r) * (-mu) ** r * parts[m - r].value for r in range(m + 1)
    )
    k_used = max(p.terms_used[0] for p in parts)
    j_used = max(p.terms_used[1] for p in parts)
    bad = next((p for p in parts if not p.converged), None)
    if bad is not None:
        return SeriesResult(
            value, (k_used, j_used), False,
            f"a component raw-moment series did not converge: {bad.diagnostic}",
        )
    return SeriesResult(value, (k_used, j_used), True, "")


@dataclass(frozen=True)
class GammaRatioDist:
    """Gamma(alpha, rate beta) pushed through the survival odds of base."""

    alpha: float
    beta: float
    base: BaseDistribution

    def __post_init__(self):
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha}")
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")

    @property
    def support(self):
        return self.base.support

    # ---------------- pointwise maps ----------------

    def odds(self, x):
        """Survival odds w(x) = (1 - G1(x))/G1(x) of the base.

        Evaluated as sf/cdf so neither tail loses precision to the
        subtraction 1 - G1. Returns +inf where G1(x) = 0; the cdf/pdf
        consume that as the limiting case, callers should too.
        """
        x_arr, scalar = _as_float_array(x)
        c = np.asarray(self.base.cdf(x_arr), dtype=float)
        s = np.asarray(self.base.sf(x_arr), dtype=float)
        w = np.where(c > 0.0, s / np.maximum(c, _TINY), np.inf)
        return _restore(w, scalar)

    def cdf(self, x):
        """H(x) = Q(alpha, beta * w(x)); 0 below the support, 1 at its top."""
        x_arr, scalar = _as_float_array(x)
        w = np.asarray(self.odds(x_arr), dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            val = special.gammaincc(self.alpha, self.beta * w)
        return _restore(val, scalar)

    def log_pdf(self, x):
        """Log density assembled term by term, never forming the density.

        ln h = ln g1 - 2 ln G1 + alpha ln beta - ln Gamma(alpha)
             + (alpha - 1) ln w - beta w, with G1 clamped away from 0 so
        the support edges land on the correct -inf limit.
        """
        x_arr, scalar = _as_float_array(x)
        lo, hi = self.base.support
        with np.errstate(
            divide="ignore", over="ignore", under="ignore", invalid="ignore"
        ):
            c = np.maximum(np.asarray(self.base.cdf(x_arr), dtype=float), _TINY)
            s = np.asarray(self.base.sf(x_arr), dtype=float)
            ln_c = np.log(c)
            out = (
                np.asarray(self.base.log_pdf(x_arr), dtype=float)
                - 2.0 * ln_c
                + self.alpha * math.log(self.beta)
                - log_gamma(self.alpha)
                - self.beta * (s / c)
            )
            if self.alpha != 1.0:
                # skipped at alpha=1 where it is 0 * ln w, possibly 0 * inf
                out = out + (self.alpha - 1.0) * (np.log(s) - ln_c)
                if self.alpha < 1.0:
                    # past the numeric top of the support sf underflows to 0
                    # and (alpha-1) ln w would flip the limit to +inf
                    out = np.where(s > 0.0, out, -np.inf)
            inside = (x_arr > lo) & (x_arr < hi)
            out = np.where(inside, out, -np.inf)
        return _restore(out, scalar)

    def pdf(self, x):
        x_arr, scalar = _as_float_array(x)
        with np.errstate(over="ignore", under="ignore"):
            val = np.exp(self.log_pdf(x_arr))
        return _restore(val, scalar)

    def hazard(self, x):
        """h(x) / (1 - H(x)) with the survival computed as P(alpha, beta w).

        The lower regularized gamma is the numerically dominant branch
        near the upper end of the support, where 1 - H underflows first.
        """
        x_arr, scalar = _as_float_array(x)
        lo, hi = self.base.support
        if not np.all((x_arr > lo) & (x_arr < hi)):
            raise ValueError("hazard requires x strictly inside the support")
        w = np.asarray(self.odds(x_arr), dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            surv = special.gammainc(self.alpha, self.beta * w)
        if np.any(surv < 1e-300):
            raise NumericalError(
                "hazard overflow: 1 - cdf fell below 1e-300 "
                f"(smallest survival {np.min(surv):.3g})"
            )
        with np.errstate(over="ignore", under="ignore"):
            val = np.exp(self.log_pdf(x_arr)) / surv
        return _restore(val, scalar)

    # ---------------- inverses and sampling ----------------

    def _x_from_w(self, w):
        """Map odds values back to the base scale on the accurate side."""
        w = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.empty(w.shape)
        big = w > 1.0
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            if np.any(big):
                out[big] = self.base.quantile(1.0 / (1.0 + w[big]))
            small = ~big
            if np.any(small):
                out[small] = self.base.isf(w[small] / (1.0 + w[small]))
        return out

    def quantile(self, p):
        """Inverse cdf; |cdf(quantile(p)) - p| <= 1e-9 on (0, 1).

        p <= 1/2 inverts the upper regularized gamma directly; p > 1/2
        routes through the lower inverse on s = 1 - p, which keeps
        relative accuracy where Q is flat.
        """
        p = float(p)
        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile requires 0 < p < 1, got {p}")
        if p <= 0.5:
            g = inv_reg_upper_gamma(self.alpha, p, DEFAULT_POLICY)
        else:
            g = inv_reg_lower_gamma(self.alpha, 1.0 - p, DEFAULT_POLICY)
        return float(self._x_from_w(g / self.beta)[0])

    def quantile_sf(self, s):
        """x with 1 - cdf(x) = s; the tail-accurate companion of quantile."""
        s = float(s)
        if not 0.0 < s < 1.0:
            raise ValueError(f"quantile_sf requires 0 < s < 1, got {s}")
        if s <= 0.5:
            g = inv_reg_lower_gamma(self.alpha, s, DEFAULT_POLICY)
        else:
            g = inv_reg_upper_gamma(self.alpha, 1.0 - s, DEFAULT_POLICY)
        return float(self._x_from_w(g / self.beta)[0])

    def _x_of_u(self, u):
        """Vectorized quantile for cdf-space integration, u in (0, 1/2]."""
        g = _inv_reg_upper_gamma_vec(self.alpha, np.asarray(u, dtype=float))
        return self._x_from_w(g / self.beta)

    def _x_of_s(self, s):
        """Vectorized survival quantile for tail integration, s in (0, 1/2]."""
        g = _inv_reg_lower_gamma_vec(self.alpha, np.asarray(s, dtype=float))
        return self._x_from_w(g / self.beta)

    def sample(self, n, rng):
        """n independent draws, exact in law: X = w^{-1}(T), T ~ Gamma.

        rng is a numpy Generator or an integer seed. T with shape alpha
        and rate beta has P(T >= w(x)) = Q(alpha, beta w(x)) = H(x), so
        mapping T back through the odds inverts the construction without
        any quantile iteration.
        """
        n = int(n)
        if n < 0:
            raise ValueError(f"sample requires n >= 0, got {n}")
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        t = _gamma_variates(rng, self.alpha, n) / self.beta
        return self._x_from_w(np.maximum(t, _TINY))

    # ---------------- quadrature expectations ----------------

    def _expect(self, f, what):
        """E f(X) in probability space, split at the median.

        The head integrates f(H^{-1}(u)) du on (0, 1/2], the tail
        f(sf^{-1}(s)) ds on (0, 1/2], each with expanding windows toward
        its singular endpoint so non-integrable expectations raise
        instead of returning a truncation artifact.
        """

        def head(u):
            return f(self._x_of_u(u))

        def tail(s):
            return f(self._x_of_s(s))

        h = windowed_quad(head, 0.0, 0.5, "lower", abs_tol=_QUAD_TOL)
        t = windowed_quad(tail, 0.0, 0.5, "lower", abs_tol=_QUAD_TOL)
        if h.diverged or t.diverged:
            raise DivergenceError(f"{what}: {t.detail or h.detail}")
        return h.value + t.value

    def tau(self, m, eta, r):
        """Integral of x^m g1(x)^eta G1(x)^r dG1 over the support.

        The building block of the family's moment expansions. Evaluated
        in u = G1(x) with windowed adaptive quadrature at both ends,
        absolute tolerance 1e-10; detected non-integrability raises a
        DivergenceError naming (m, eta, r).
        """
        m = _validate_order(m, "tau")
        eta = float(eta)
        r = float(r)
        base = self.base

        def integrand(x, u):
            with np.errstate(
                divide="ignore", over="ignore", under="ignore", invalid="ignore"
            ):
                val = x**m if m else 1.0
                expo = 0.0
                if eta != 0.0:
                    expo = eta * np.asarray(base.log_pdf(x), dtype=float)
                if r != 0.0:
                    expo = expo + r * np.log(u)
                if eta != 0.0 or r != 0.0:
                    val = val * np.exp(expo)
            return val

        def head(u):
            return integrand(base.quantile(u), u)

        def tail(s):
            return integrand(base.isf(s), 1.0 - s)

        h = windowed_quad(head, 0.0, 0.5, "lower", abs_tol=_QUAD_TOL)
        t = windowed_quad(tail, 0.0, 0.5, "lower", abs_tol=_QUAD_TOL)
        if h.diverged or t.diverged:
            raise DivergenceError(
                f"tau(m={m}, eta={eta:.6g}, r={r:.6g}) is not integrable: "
                f"{h.detail or t.detail}"
            )
        return h.value + t.value

    def moment_quadrature(self, m):
        """Raw moment E X^m by adaptive quadrature; the authoritative path."""
        m = _validate_order(m, "moment_quadrature")
        return self._expect(lambda x: x**m, f"moment of order {m} does not exist")

    def central_moment_quadrature(self, m):
        """Central moment via binomial recombination of quadrature raw moments.

        The zeroth raw moment is 1 by normalization and is substituted
        exactly, which makes the m = 1 result vanish identically.
        """
        m = _validate_order(m, "central_moment_quadrature")
        if m == 0:
            return 1.0
        mus = [1.0] + [self.moment_quadrature(i) for i in range(1, m + 1)]
        mu = mus[1]
        return math.fsum(
            math.comb(m, r) * (-mu) ** r * mus[m - r] for r in range(m + 1)
        )

    def general_coefficient(self, m):
        """Standardized moment mu'_m / (mu'_2)^(m/2); 3 is skewness, 4 kurtosis."""
        m = _validate_order(m, "general_coefficient")
        var = self.central_moment_quadrature(2)
        if not var > 0.0:
            raise NumericalError(
                f"general_coefficient: degenerate distribution, variance {var:.3g}"
            )
        return self.central_moment_quadrature(m) / var ** (0.5 * m)

    def mgf(self, t):
        """E e^{tX} by quadrature; mgf(0) = 1 exactly.

        When the base advertises an exponential tail rate the domain
        t < alpha * tail_rate is enforced analytically; otherwise the
        windowed integration detects divergence adaptively.
        """
        t = float(t)
        if t == 0.0:
            return 1.0
        rate = self.base.tail_rate
        if rate is not None and t >= self.alpha * rate:
            raise DivergenceError(
                f"mgf undefined for t >= alpha * tail_rate = {self.alpha * rate:.6g}, "
                f"got t = {t:.6g}"
            )

        def f(x):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(t * x)

        return self._expect(f, f"mgf({t:.6g}) integral diverges")

    def cf(self, t):
        """Characteristic function as the pair (E cos tX, E sin tX)."""
        t = float(t)
        if t == 0.0:
            return (1.0, 0.0)
        re = self._expect(lambda x: np.cos(t * x), f"cf({t:.6g}) real part")
        im = self._expect(lambda x: np.sin(t * x), f"cf({t:.6g}) imaginary part")
        return (re, im)

    def renyi_entropy(self, eta):
        """Entropy of order eta: log(integral of h^eta) / (1 - eta).

        The integral is E h^{eta-1}(X), computed in probability space.
        eta must be positive and different from 1 (the Shannon limit is
        out of scope).
        """
        eta = float(eta)
        if not eta > 0.0 or eta == 1.0:
            raise ValueError(f"renyi_entropy requires eta > 0, eta != 1, got {eta}")
        p = eta - 1.0

        def f(x):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(p * self.log_pdf(x))

        try:
            integral = self._expect(f, f"renyi_entropy(eta={eta:.6g})")
        except DivergenceError as exc:
            raise DivergenceError(
                f"renyi entropy undefined for eta={eta:.6g}: "
                "the integral of h^eta diverges"
            ) from exc
        if not integral > 0.0:
            raise NumericalError(
                f"renyi_entropy(eta={eta:.6g}): integral evaluated to {integral:.3g}"
            )
        return math.log(integral) / (1.0 - eta)

    # ---------------- formal series evaluators ----------------

    def _tau_inner(self, k, ctrl, m, eta, r_of_j, log_pref_extra=0.0, eta_pow=None):
        """One k-shell of a tau-based double sum, term by term in j.

        Terms are sign * exp(log prefactor) * binom * tau. A tau that is
        not integrable aborts the whole evaluation via the note channel.
        """
        s_binom = (
            eta_pow * (self.alpha - 1.0) + k if eta_pow is not None else self.alpha + k - 1.0
        )
        sign_k = -1.0 if k % 2 else 1.0
        with np.errstate(over="ignore"):
            pref = sign_k * float(np.exp(log_pref_extra))
        partial = 0.0
        small_run = 0
        binom = 1.0  # running C(s_binom, j)
        for j in range(ctrl.j_max):
            if j > 0:
                binom *= (s_binom - (j - 1)) / j
            r = r_of_j(j)
            try:
                tau_val = self.tau(m, eta, r)
            except DivergenceError:
                return (
                    0.0,
                    j + 1,
                    False,
                    f"term (k={k}, j={j}) needs tau(m={m}, eta={eta:.6g}, "
                    f"r={r:.6g}), which is not integrable; the printed "
                    "expansion is formal at these parameters",
                )
            term = pref * ((-1.0) ** j) * binom * tau_val
            partial += term
            if abs(term) <= ctrl.tail_tol * max(abs(partial), _TINY):
                small_run += 1
                if small_run >= 2 and j >= 1:
                    return partial, j + 1, True, None
            else:
                small_run = 0
        return partial, ctrl.j_max, False, None

    def moment_series(self, m, ctrl=None):
        """Formal double-sum expansion of the raw moment of order m.

        Mirrors the tau-based expansion term for term; the quadrature
        path is authoritative. converged=False results carry a
        diagnostic (shell growth, non-integrable tau, or truncation).
        """
        m = _validate_order(m, "moment_series")
        ctrl = ctrl or DEFAULT_CONTROL
        a, b = self.alpha, self.beta

        def inner(k):
            log_pref = (a + k) * math.log(b) - log_gamma(k + 1.0) - log_gamma(a)
            return self._tau_inner(
                k, ctrl, m, 0.0, lambda j: j - a - k - 1.0, log_pref_extra=log_pref
            )

        return _sum_shells(inner, ctrl)

    def central_moment_series(self, m, ctrl=None):
        """Binomial recombination of series raw moments (all-series path)."""
        m = _validate_order(m, "central_moment_series")
        ctrl = ctrl or DEFAULT_CONTROL
        parts = [self.moment_series(i, ctrl) for i in range(m + 1)]
        return _recombine_central(parts, m)

    def mgf_series(self, t, ctrl=None):
        """Formal triple-sum mgf: sum over orders of t^m/m! times the
        moment expansion. Inherits every component's honesty flags."""
        t = float(t)
        ctrl = ctrl or DEFAULT_CONTROL
        rate = self.base.tail_rate
        if rate is not None and t >= self.alpha * rate:
            raise DivergenceError(
                f"mgf undefined for t >= alpha * tail_rate = {self.alpha * rate:.6g}, "
                f"got t = {t:.6g}"
            )
        return self._exp_series(t, ctrl, complex_arg=False)

    def cf_series(self, t, ctrl=None):
        """Formal triple-sum characteristic function; value is complex."""
        return self._exp_series(float(t), ctrl or DEFAULT_CONTROL, complex_arg=True)

    def _exp_series(self, t, ctrl, complex_arg):
        factor = 1j * t if complex_arg else t
        total = 0.0j if complex_arg else 0.0
        fac = 1.0 + 0.0j if complex_arg else 1.0  # factor^m / m!
        k_used = 0
        j_used = 0
        small_run = 0
        components_ok = True
        first_bad = ""
        m_used = 0
        for m in range(171):
            if m > 0:
                fac *= factor / m
            part = self.moment_series(m, ctrl)
            if math.isnan(part.value):
                return SeriesResult(
                    math.nan, (part.terms_used[0], part.terms_used[1]), False,
                    f"order-{m} component failed: {part.diagnostic}",
                )
            if not part.converged and components_ok:
                components_ok = False
                first_bad = f"order-{m} component: {part.diagnostic}"
            term = fac * part.value
            total += term
            m_used = m + 1
            k_used = max(k_used, part.terms_used[0])
            j_used = max(j_used, part.terms_used[1])
            if abs(term) <= ctrl.tail_tol * max(abs(total), _TINY):
                small_run += 1
                if small_run >= 3 and m >= 1:
                    break
            else:
                small_run = 0
        else:
            return SeriesResult(
                total, (k_used, j_used), False,
                f"exponential series cap reached after {m_used} orders",
            )
        if not components_ok:
            return SeriesResult(total, (k_used, j_used), False, first_bad)
        return SeriesResult(total, (k_used, j_used), True, "")

    def renyi_series(self, eta, ctrl=None):
        """Formal expansion of the order-eta entropy via tau functionals.

        The result's value is the transformed entropy log(S)/(1 - eta),
        nan when the inner sum is not positive or not evaluable.
        """
        eta = float(eta)
        if not eta > 0.0 or eta == 1.0:
            raise ValueError(f"renyi_series requires eta > 0, eta != 1, got {eta}")
        ctrl = ctrl or DEFAULT_CONTROL
        a, b = self.alpha, self.beta

        def inner(k):
            log_pref = (
                k * math.log(eta)
                + (eta * a + k) * math.log(b)
                - log_gamma(k + 1.0)
                - eta * log_gamma(a)
            )
            return self._tau_inner(
                k, ctrl, 0, eta - 1.0,
                lambda j: j - eta * (a + 1.0) - k,
                log_pref_extra=log_pref,
                eta_pow=eta,
            )

        raw = _sum_shells(inner, ctrl)
        if math.isnan(raw.value) or raw.value <= 0.0:
            diag = raw.diagnostic or (
                f"inner sum evaluated to {raw.value:.6g}, not a positive number"
            )
            return SeriesResult(math.nan, raw.terms_used, False, diag)
        value = math.log(raw.value) / (1.0 - eta)
        return SeriesResult(value, raw.terms_used, raw.converged, raw.diagnostic)

    def cdf_series(self, x, ctrl=None):
        """Formal power-in-G1 expansion of the cdf; diagnostic path only.

        Term-by-term integration of the density expansion fixes H only
        up to its integration constant: at the upper support end every
        k-shell's inner sum telescopes to B(-s-1, s+1) = 0, so where the
        expansion converges it sums to cdf(x) - 1, not cdf(x). The value
        is reported as summed; callers compare against cdf(x) - 1.

        Refuses integer alpha, where the coefficient 1/(j - alpha - k)
        hits a pole; the Q-based cdf is always the production route.
        """
        if float(self.alpha).is_integer():
            raise ValueError(
                "cdf_series is undefined at integer alpha (pole at j = alpha + k); "
                "use cdf"
            )
        ctrl = ctrl or DEFAULT_CONTROL
        a, b = self.alpha, self.beta
        g = float(self.base.cdf(x))
        if not 0.0 < g < 1.0:
            raise ValueError(
                f"cdf_series requires x strictly inside the support, got G1 = {g}"
            )
        ln_g = math.log(g)

        def inner(k):
            log_pref = (a + k) * math.log(b) - log_gamma(k + 1.0) - log_gamma(a)
            sign_k = -1.0 if k % 2 else 1.0
            partial = 0.0
            small_run = 0
            binom = 1.0
            s_binom = a + k - 1.0
            for j in range(ctrl.j_max):
                if j > 0:
                    binom *= (s_binom - (j - 1)) / j
                expo = j - a - k
                with np.errstate(over="ignore"):
                    term = (
                        sign_k
                        * ((-1.0) ** j)
                        * binom
                        / expo
                        * float(np.exp(log_pref + expo * ln_g))
                    )
                partial += term
                if abs(term) <= ctrl.tail_tol * max(abs(partial), _TINY):
                    small_run += 1
                    if small_run >= 2 and j >= 1:
                        return partial, j + 1, True, None
                else:
                    small_run = 0
            return partial, ctrl.j_max, False, None

        return _sum_shells(inner, ctrl)
