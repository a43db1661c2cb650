"""Double-exponential (tanh-sinh / exp-sinh) quadrature.

All routines take vectorized integrands f(x: ndarray) -> ndarray and refine
by halving the step until the requested relative target is met or the
refinement budget is exhausted. Node tables are cached per level.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate as _scipy_integrate
from scipy import special as _sp_special

from .precision import CertifiedValue, WorkingPrecision, compensated_dot

# abscissa cutoff: weights below ~1e-300 contribute nothing in double precision
_T_MAX = 6.1


@lru_cache(maxsize=32)
def _tanh_sinh_nodes(level: int):
    """Nodes/weights for x = tanh((pi/2) sinh t) on (-1, 1), step 2^-level."""
    h = 2.0 ** (-level)
    k = np.arange(-int(_T_MAX / h), int(_T_MAX / h) + 1)
    t = k * h
    u = 0.5 * np.pi * np.sinh(t)
    x = np.tanh(u)
    w = h * 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    keep = w > 1e-300
    # 1-x but computed stably: 1 - tanh(u) = 2 e^{-2u}/(1+e^{-2u})
    one_minus_x = 2.0 * np.exp(-2.0 * u) / (1.0 + np.exp(-2.0 * u))
    return x[keep], w[keep], one_minus_x[keep]


@lru_cache(maxsize=32)
def _exp_sinh_nodes(level: int):
    """Nodes/weights for x = exp((pi/2) sinh t) on (0, inf), step 2^-level."""
    h = 2.0 ** (-level)
    k = np.arange(-int(_T_MAX / h), int(_T_MAX / h) + 1)
    t = k * h
    u = 0.5 * np.pi * np.sinh(t)
    # keep x within the double range with headroom for the integrand
    keep = np.abs(u) < 690.0
    u = u[keep]
    t = t[keep]
    x = np.exp(u)
    w = h * 0.5 * np.pi * np.cosh(t) * x
    return x, w


def integrate_finite(f, a: float, b: float,
                     prec: WorkingPrecision = WorkingPrecision(),
                     min_level: int = 5, scale: float = 0.0) -> CertifiedValue:
    """Integral of f over (a, b); endpoint singularities are fine.

    `scale` widens the convergence test for integrals that are small
    corrections to a larger quantity: refinement stops once the step-to-
    step change falls below relative_target times max(|value|, scale).
    """
    if not (b > a):
        raise ValueError("need b > a")
    half = 0.5 * (b - a)
    prev = None
    value = 0.0
    err = math.inf
    for level in range(min_level, min_level + prec.max_refinement_steps):
        x, w, omx = _tanh_sinh_nodes(level)
        # evaluate at a + half*(1+x) = b - half*(1-x); the nodes are
        # symmetric, so reversing the stable 1-x array gives a stable 1+x
        opx = omx[::-1]
        pts = np.where(x <= 0.0, a + half * opx, b - half * omx)
        vals = np.asarray(f(pts), dtype=float)
        good = np.isfinite(vals)
        value = half * compensated_dot(vals[good], w[good])
        if prev is not None:
            err = abs(value - prev)
            if err <= prec.relative_target * max(abs(value), scale, 1e-300):
                return CertifiedValue(value, err)
        prev = value
    return CertifiedValue(value, err if math.isfinite(err) else abs(value))


@lru_cache(maxsize=16)
def _legendre_nodes(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre_ab(f, a: float, b: float, n: int = 64) -> CertifiedValue:
    """int_a^b f(x) dx for analytic f; error vs the (2/3)n rule."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x, w = _legendre_nodes(n)
    value = half * compensated_dot(np.asarray(f(mid + half * x), dtype=float), w)
    x2, w2 = _legendre_nodes(max(2 * n // 3, 4))
    coarse = half * compensated_dot(np.asarray(f(mid + half * x2), dtype=float), w2)
    return CertifiedValue(value, abs(value - coarse))


@lru_cache(maxsize=64)
def _jacobi_nodes_01(n: int, beta: float):
    """Nodes/weights on (0, 1) absorbing the weight y^beta, beta > -1."""
    xi, w = _sp_special.roots_jacobi(n, 0.0, beta)
    # map y = (1+xi)/2: int_0^1 y^beta f(y) dy = 2^(-beta-1) sum w_i f(y_i)
    return 0.5 * (xi + 1.0), w * 2.0 ** (-beta - 1.0)


def gauss_jacobi_01(f, beta: float, n: int = 48) -> CertifiedValue:
    """int_0^1 y^beta f(y) dy for smooth f; the weight handles the endpoint.

    Exact for polynomial f up to degree 2n-1, so no node ever needs to
    approach y = 0; the error estimate compares against the (2/3)n rule.
    """
    y, w = _jacobi_nodes_01(n, beta)
    value = compensated_dot(np.asarray(f(y), dtype=float), w)
    y2, w2 = _jacobi_nodes_01(max(2 * n // 3, 4), beta)
    coarse = compensated_dot(np.asarray(f(y2), dtype=float), w2)
    return CertifiedValue(value, abs(value - coarse))


def integrate_to_inf(f, a: float = 0.0,
                     prec: WorkingPrecision = WorkingPrecision(),
                     min_level: int = 5) -> CertifiedValue:
    """Integral of f over (a, inf) for integrands decaying at infinity."""
    prev = None
    value = 0.0
    err = math.inf
    for level in range(min_level, min_level + prec.max_refinement_steps):
        x, w = _exp_sinh_nodes(level)
        vals = np.asarray(f(a + x), dtype=float)
        good = np.isfinite(vals)
        value = compensated_dot(vals[good], w[good])
        if prev is not None:
            err = abs(value - prev)
            if err <= prec.relative_target * max(abs(value), 1e-300):
                return CertifiedValue(value, err)
        prev = value
    return CertifiedValue(value, err if math.isfinite(err) else abs(value))


def integrate_log_to_inf(log_f, a: float = 0.0,
                         prec: WorkingPrecision = WorkingPrecision(),
                         min_level: int = 6) -> tuple[float, float]:
    """log of integral of exp(log_f) over (a, inf), for positive integrands.

    Returns (log_value, rel_err_estimate). Evaluation is shift-stable: the
    maximum of log_f + log w is subtracted before exponentiating, so the
    result is correct even when the integral itself under/overflows.
    """
    prev = None
    log_value = -math.inf
    err = math.inf
    for level in range(min_level, min_level + prec.max_refinement_steps):
        x, w = _exp_sinh_nodes(level)
        lv = np.asarray(log_f(a + x), dtype=float) + np.log(w)
        lv = lv[np.isfinite(lv)]
        if lv.size == 0:
            continue
        m = lv.max()
        log_value = m + math.log(math.fsum(np.exp(lv - m).tolist()))
        if prev is not None:
            err = abs(log_value - prev)
            if err <= prec.relative_target:
                return log_value, err
        prev = log_value
    return log_value, err


def adaptive_quad(f, a: float, b: float,
                  prec: WorkingPrecision = WorkingPrecision()) -> CertifiedValue:
    """Gauss-Kronrod fallback for well-behaved integrands (scipy plumbing)."""
    value, abserr = _scipy_integrate.quad(
        f, a, b, epsabs=0.0, epsrel=prec.relative_target, limit=400)
    return CertifiedValue(value, abserr)
