"""Gauss 2F1 and generalized 3F2 evaluation, identity residual checks, and
the incomplete-Beta-type tail integral in its two closed forms.

The 2F1 evaluator covers z < 1 by a fixed transformation ladder:
power series for |z| <= 1/2, the Pfaff transformation for z < 0, and the
connection formula at z = 1 for z in (1/2, 1). The connection formula
degenerates when a+b-c is near an integer; an Aitken-accelerated direct
series is the fallback there.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from .precision import WorkingPrecision
from .quadrature import integrate_finite

MAX_TERMS = 100_000
DEGENERATE_MARGIN = 0.05


def _series_2f1(a: float, b: float, c: float, z: float, target: float) -> float:
    """sum_n (a)_n (b)_n / ((c)_n n!) z^n, stopping on two small terms."""
    term = 1.0
    total = 1.0
    small = 0
    for n in range(MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (1.0 + n)) * z
        total += term
        if abs(term) < target * max(abs(total), 1e-300):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise RuntimeError("2F1 series did not converge in 1e5 terms")


def _aitken_series_2f1(a: float, b: float, c: float, z: float,
                       target: float) -> float:
    """Direct series near z=1 accelerated by iterated Aitken's delta^2."""
    partials = []
    term = 1.0
    total = 1.0
    partials.append(total)
    for n in range(20_000):
        term *= (a + n) * (b + n) / ((c + n) * (1.0 + n)) * z
        total += term
        partials.append(total)
        if abs(term) < 1e-3 * target * max(abs(total), 1e-300) and n > 8:
            break
    s = np.array(partials, dtype=float)
    for _ in range(6):
        if s.size < 3:
            break
        d1 = s[1:-1] - s[:-2]
        d2 = s[2:] - 2.0 * s[1:-1] + s[:-2]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = s[:-2] - d1 * d1 / d2
        t = t[np.isfinite(t)]
        if t.size == 0:
            break
        s = t
    return float(s[-1])


def gauss_value_at_1(a: float, b: float, c: float) -> float:
    """2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))."""
    if c - a - b <= 0:
        raise ValueError("2F1 at z=1 needs c-a-b > 0")
    sign = (sp.gammasgn(c) * sp.gammasgn(c - a - b)
            * sp.gammasgn(c - a) * sp.gammasgn(c - b))
    lg = (sp.gammaln(c) + sp.gammaln(c - a - b)
          - sp.gammaln(c - a) - sp.gammaln(c - b))
    return sign * math.exp(lg)


def gauss_2f1(a: float, b: float, c: float, z: float,
              prec: WorkingPrecision = WorkingPrecision()) -> float:
    """2F1(a, b; c; z) for real parameters and z < 1 (or z = 1 convergent)."""
    if c <= 0 and c == round(c):
        raise ValueError("c is a nonpositive integer")
    target = prec.relative_target
    if z == 0.0:
        return 1.0
    if z == 1.0:
        return gauss_value_at_1(a, b, c)
    if z > 1.0:
        raise ValueError("need z <= 1")
    if abs(z) <= 0.5:
        return _series_2f1(a, b, c, z, target)
    if z < 0.0:
        # Pfaff: F(a,b;c;z) = (1-z)^{-b} F(c-a, b; c; z/(z-1)), w in (0,1)
        w = z / (z - 1.0)
        return (1.0 - z) ** (-b) * gauss_2f1(c - a, b, c, w, prec)
    # z in (1/2, 1): connection at z=1
    d = c - a - b
    if abs(d - round(d)) < DEGENERATE_MARGIN:
        return _aitken_series_2f1(a, b, c, z, target)
    sign1 = sp.gammasgn(c) * sp.gammasgn(d) * sp.gammasgn(c - a) * sp.gammasgn(c - b)
    lg1 = sp.gammaln(c) + sp.gammaln(d) - sp.gammaln(c - a) - sp.gammaln(c - b)
    sign2 = sp.gammasgn(c) * sp.gammasgn(-d) * sp.gammasgn(a) * sp.gammasgn(b)
    lg2 = sp.gammaln(c) + sp.gammaln(-d) - sp.gammaln(a) - sp.gammaln(b)
    om = 1.0 - z
    t1 = sign1 * math.exp(lg1) * _series_2f1(a, b, 1.0 - d, om, target)
    t2 = sign2 * math.exp(lg2) * om ** d * _series_2f1(c - a, c - b, 1.0 + d, om, target)
    return t1 + t2


def generalized_3f2(a1: float, a2: float, a3: float,
                    b1: float, b2: float, z: float,
                    prec: WorkingPrecision = WorkingPrecision()) -> float:
    """3F2(a1,a2,a3; b1,b2; z) by direct series, |z| < 1."""
    if abs(z) >= 1.0:
        raise ValueError("3F2 series needs |z| < 1")
    for b in (b1, b2):
        if b <= 0 and b == round(b):
            raise ValueError("lower parameter is a nonpositive integer")
    term = 1.0
    total = 1.0
    small = 0
    for n in range(MAX_TERMS):
        term *= (a1 + n) * (a2 + n) * (a3 + n) \
            / ((b1 + n) * (b2 + n) * (1.0 + n)) * z
        total += term
        if abs(term) < prec.relative_target * max(abs(total), 1e-300):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise RuntimeError("3F2 series did not converge in 1e5 terms")


def identity_residuals(a: float, b: float, c: float, z: float,
                       prec: WorkingPrecision = WorkingPrecision()) -> dict:
    """Relative residuals of the 2F1/3F2 identities at one parameter point.

    Returns a dict with keys: pfaff, linear, contiguous, extract1,
    extract2, extract1_3f2, extract2_3f2. Each value is
    |lhs - rhs| / max(1, |lhs|, |rhs|). The linear residual is skipped
    (set to 0) when a+b-c is within the degeneracy margin of an integer,
    where the connection formula itself is singular.
    """
    F = lambda aa, bb, cc, zz: gauss_2f1(aa, bb, cc, zz, prec)
    out = {}

    def rel(lhs, rhs):
        return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))

    # Pfaff
    lhs = F(a, b, c, z)
    rhs = (1.0 - z) ** (-b) * F(c - a, b, c, z / (z - 1.0))
    out["pfaff"] = rel(lhs, rhs)

    # connection at z=1 (only meaningful for 0 < z < 1, nondegenerate)
    d = c - a - b
    if 0.0 < z < 1.0 and abs(d - round(d)) >= DEGENERATE_MARGIN:
        sign1 = sp.gammasgn(c) * sp.gammasgn(d) * sp.gammasgn(c - a) * sp.gammasgn(c - b)
        lg1 = sp.gammaln(c) + sp.gammaln(d) - sp.gammaln(c - a) - sp.gammaln(c - b)
        sign2 = sp.gammasgn(c) * sp.gammasgn(-d) * sp.gammasgn(a) * sp.gammasgn(b)
        lg2 = sp.gammaln(c) + sp.gammaln(-d) - sp.gammaln(a) - sp.gammaln(b)
        rhs = sign1 * math.exp(lg1) * F(a, b, 1.0 - d, 1.0 - z) \
            + sign2 * math.exp(lg2) * (1.0 - z) ** d * F(c - a, c - b, 1.0 + d, 1.0 - z)
        out["linear"] = rel(lhs, rhs)
    else:
        out["linear"] = 0.0

    # contiguous three-term relation
    lhs3 = (a - 1.0 + (b + 1.0 - c) * z) * F(a, b, c, z) \
        + (c - a) * F(a - 1.0, b, c, z) \
        - (c - 1.0) * (1.0 - z) * F(a, b, c - 1.0, z)
    out["contiguous"] = abs(lhs3) / max(1.0, abs(F(a, b, c, z)))

    # leading-term extractions for unit numerator parameter
    g = F(a, 1.0, c, z)
    out["extract1"] = rel(g, 1.0 + (a / c) * z * F(a + 1.0, 1.0, c + 1.0, z))
    out["extract2"] = rel(
        g, 1.0 + (a / c) * z
        + (a * (a + 1.0) / (c * (c + 1.0))) * z * z * F(a + 2.0, 1.0, c + 2.0, z))

    # same mechanism one level up
    if abs(z) < 1.0:
        h = generalized_3f2(a, b, 1.0, c, c + 0.5, z, prec)
        out["extract1_3f2"] = rel(
            h, 1.0 + (a * b / (c * (c + 0.5))) * z
            * generalized_3f2(a + 1.0, b + 1.0, 1.0, c + 1.0, c + 1.5, z, prec))
        h2 = 1.0 + (a * b / (c * (c + 0.5))) * z \
            + (a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0) * (c + 0.5) * (c + 1.5))) \
            * z * z * generalized_3f2(a + 2.0, b + 2.0, 1.0, c + 2.0, c + 2.5, z, prec)
        out["extract2_3f2"] = rel(h, h2)
    else:
        out["extract1_3f2"] = 0.0
        out["extract2_3f2"] = 0.0
    return out


def tail_integral(mu: float, nu: float, u: float,
                  prec: WorkingPrecision = WorkingPrecision()):
    """int_0^u y^{mu-1} (1+y)^{-nu} dy by two closed forms and quadrature.

    Closed forms:
      (u^{mu-nu}/(mu-nu)) 2F1(nu, nu-mu; nu-mu+1; -1/u)
          + Gamma(mu)Gamma(nu-mu)/Gamma(nu)
      (1/mu) u^mu (1+u)^{-nu} 2F1(nu, 1; mu+1; u/(1+u))
    Returns (value, spread) with value from the second form (always a
    positive-term series) and spread the max pairwise discrepancy.
    """
    if mu <= 0 or u <= 0:
        raise ValueError("need mu > 0 and u > 0")
    if nu <= mu or (nu - mu) == round(nu - mu):
        # first closed form needs nu > mu and nu-mu off the integers
        raise ValueError("need nu > mu with nu - mu not an integer")
    form_a = (u ** (mu - nu) / (mu - nu)) * gauss_2f1(nu, nu - mu, nu - mu + 1.0, -1.0 / u, prec) \
        + math.exp(sp.gammaln(mu) + sp.gammaln(nu - mu) - sp.gammaln(nu))
    form_b = (u ** mu / mu) * (1.0 + u) ** (-nu) \
        * gauss_2f1(nu, 1.0, mu + 1.0, u / (1.0 + u), prec)

    def integrand(y):
        y = np.asarray(y, dtype=float)
        return y ** (mu - 1.0) * (1.0 + y) ** (-nu)

    quad = integrate_finite(integrand, 0.0, u, prec).value
    spread = max(abs(form_a - form_b), abs(form_a - quad), abs(form_b - quad))
    return form_b, spread
