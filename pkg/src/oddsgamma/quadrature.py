"""Adaptive Gauss-Legendre quadrature on finite intervals.

Two layers: adaptive_quad refines panels by bisection until a
width-proportional share of the absolute tolerance is met, and
windowed_quad wraps it with an expanding-window Cauchy check toward a
singular endpoint so non-integrable integrands are detected instead of
silently mis-summed.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["adaptive_quad", "windowed_quad", "WindowedResult"]

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)

# Expanding-window radii are (b - a) * 10^-d for these d; the Cauchy
# check inspects the last window increments.
_WINDOW_DEPTHS = range(2, 13)


def _panel(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return half * float(np.sum(_WEIGHTS * np.asarray(f(mid + half * _NODES), dtype=float)))


def adaptive_quad(f, a, b, abs_tol=1e-10, max_levels=60, max_panels=None):
    """Integrate f over (a, b) by adaptive 15-point Gauss-Legendre.

    An interval is accepted when bisecting it moves the estimate by at
    most its width-proportional share of abs_tol, or when it has been
    bisected max_levels times. f must accept numpy arrays. Endpoints are
    never evaluated, so integrable endpoint singularities are fine.

    max_panels, when given, bounds the number of panel evaluations; on
    exhaustion the remaining intervals keep their current estimates. An
    integrand whose own rounding noise exceeds the tolerance can
    otherwise force refinement all the way to floating-point resolution.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("adaptive_quad requires finite endpoints")
    if not b > a:
        if b == a:
            return 0.0
        raise ValueError(f"adaptive_quad requires b >= a, got ({a}, {b})")
    budget = float("inf") if max_panels is None else int(max_panels)
    used = 1
    inv_width = 1.0 / (b - a)
    total = 0.0
    stack = [(a, b, _panel(f, a, b), 0)]
    while stack:
        lo, hi, est, level = stack.pop()
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # interval at floating-point resolution
            total += est
            continue
        if used >= budget:
            total += est
            continue
        left = _panel(f, lo, mid)
        right = _panel(f, mid, hi)
        used += 2
        better = left + right
        err = abs(better - est)
        # second clause: stop chasing roundoff when the integrand is large
        if err <= abs_tol * (hi - lo) * inv_width or err <= 1e-13 * abs(better) or level >= max_levels:
            total += better
        else:
            stack.append((lo, mid, left, level + 1))
            stack.append((mid, hi, right, level + 1))
    return total


@dataclass(frozen=True)
class WindowedResult:
    value: float
    diverged: bool
    detail: str


def windowed_quad(f, a, b, singular_end, abs_tol=1e-10, max_levels=60):
    """Integrate f over (a, b) with a possible singularity at one endpoint.

    The neighbourhood of singular_end ("lower" or "upper") is peeled off
    in windows at radii (b - a) * 10^-d, d = 2..12. The window increments
    of an integrable singularity shrink; if the two innermost increments
    fail to shrink while still being non-negligible, the integral is
    declared divergent and no value is trusted. Otherwise the remaining
    sliver next to the endpoint is integrated adaptively (its panels
    never touch the endpoint itself).
    """
    if singular_end not in ("lower", "upper"):
        raise ValueError("singular_end must be 'lower' or 'upper'")
    width = b - a
    if not width > 0.0:
        return WindowedResult(0.0, False, "")

    def cut(d):
        r = width * 10.0 ** (-d)
        return b - r if singular_end == "upper" else a + r

    # per-window work bound: integrands evaluated this close to an
    # endpoint can carry cancellation noise above the tolerance, and the
    # Cauchy verdict only needs the increments' order of magnitude
    panel_budget = 20_000

    pieces = []
    prev = a if singular_end == "upper" else b
    for d in _WINDOW_DEPTHS:
        edge = cut(d)
        lo, hi = (prev, edge) if singular_end == "upper" else (edge, prev)
        pieces.append(
            adaptive_quad(f, lo, hi, abs_tol=abs_tol, max_levels=max_levels,
                          max_panels=panel_budget)
        )
        prev = edge

    increments = [abs(p) for p in pieces[1:]]
    running = sum(pieces)
    scale = max(abs(running), 1.0)
    floor = max(abs_tol, 1e-14 * scale)
    last, second, third = increments[-1], increments[-2], increments[-3]
    if not np.isfinite(running):
        return WindowedResult(running, True, "non-finite window increment")
    if last > floor and last >= 0.95 * second and second >= 0.95 * third:
        return WindowedResult(
            running,
            True,
            f"window increments near the {singular_end} endpoint fail the "
            f"Cauchy criterion (last three: {third:.3e}, {second:.3e}, {last:.3e})",
        )

    lo, hi = (prev, b) if singular_end == "upper" else (a, prev)
    # pull the singular endpoint in by one ulp: panel nodes this close
    # can otherwise round exactly onto the singularity
    if singular_end == "upper":
        hi = float(np.nextafter(hi, lo))
    else:
        lo = float(np.nextafter(lo, hi))
    closing = (
        adaptive_quad(f, lo, hi, abs_tol=abs_tol, max_levels=max_levels,
                      max_panels=panel_budget)
        if hi > lo
        else 0.0
    )
    value = running + closing
    if not np.isfinite(value):
        return WindowedResult(value, True, "non-finite endpoint sliver")
    return WindowedResult(value, False, "")
