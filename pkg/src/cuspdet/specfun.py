"""Special functions: gamma family, Hurwitz zeta with s-derivatives,
exponential integral, modified Bessel K of real and imaginary order, the
uniform large-order expansion of log K with a certified remainder, and the
exact rational polynomial sequences the expansions are built from.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special as sp

from .precision import CertifiedValue, WorkingPrecision
from .quadrature import _exp_sinh_nodes, integrate_finite, integrate_to_inf

EULER_GAMMA = 0.5772156649015328606


# ----------------------------------------------------------------------
# gamma family (scipy delegates; complex-capable)

def gamma_digamma(x):
    """(Gamma(x), log Gamma(x), psi(x)); accepts real or complex x."""
    if isinstance(x, complex):
        lg = sp.loggamma(x)
        return cmath.exp(lg), lg, sp.digamma(x)
    g = sp.gamma(x)
    lg = sp.gammaln(x) if x > 0 else sp.loggamma(complex(x)).real
    return g, lg, sp.digamma(x)


# ----------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin, with derivatives in s.
#
# Terms are evaluated as Taylor triples (f, f', f''/2) in s so one code
# path yields the value, the s-derivative, and (at s=1) the Laurent data.

_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42),
              Fraction(-1, 30), Fraction(5, 66), Fraction(-691, 2730),
              Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
              Fraction(-174611, 330), Fraction(854513, 138),
              Fraction(-236364091, 2730)]


def _jmul(a, b):
    return (a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[1] * b[1] + a[2] * b[0])


def _jpow_neg(base: float, s0: float):
    # Taylor triple of base^{-s} at s = s0
    L = math.log(base)
    v = base ** (-s0)
    return (v, -L * v, 0.5 * L * L * v)


def _poch_jet(s0: float, m: int):
    # Taylor triple of (s)_m = s(s+1)...(s+m-1) at s0
    out = (1.0, 0.0, 0.0)
    for i in range(m):
        out = _jmul(out, (s0 + i, 1.0, 0.0))
    return out


def _hurwitz_jet(s0: float, q: float):
    """Taylor triple of zeta_H(s, q) at s0 != 1.

    At s0 == 1 the returned triple is the triple of the REGULAR part
    zeta_H(s,q) - 1/(s-1), i.e. (-psi(q), -gamma_1-ish, ...).
    """
    if q <= 0.0:
        raise ValueError("Hurwitz zeta needs q > 0")
    # keeping M small limits cancellation against the tail terms at s < 1
    M = max(2, int(math.ceil(12.0 - q)), int(math.ceil(abs(s0) + 4)))
    acc0, acc1, acc2 = [], [], []
    for n in range(M):
        j = _jpow_neg(n + q, s0)
        acc0.append(j[0])
        acc1.append(j[1])
        acc2.append(j[2])
    P = M + q
    L = math.log(P)
    if s0 == 1.0:
        # (P^{1-s})/(s-1) = 1/(s-1) - L + (L^2/2)(s-1) - (L^3/6)(s-1)^2 + ..
        tail = (-L, 0.5 * L * L, -L ** 3 / 6.0)
    else:
        e = 1.0 / (s0 - 1.0)
        v = P ** (1.0 - s0)
        tail = _jmul((v, -L * v, 0.5 * L * L * v), (e, -e * e, e ** 3))
    half = _jpow_neg(P, s0)
    acc0 += [tail[0], 0.5 * half[0]]
    acc1 += [tail[1], 0.5 * half[1]]
    acc2 += [tail[2], 0.5 * half[2]]
    for j, b2j in enumerate(_BERNOULLI, start=1):
        coeff = float(b2j) / math.factorial(2 * j)
        term = _jmul(_poch_jet(s0, 2 * j - 1), _jpow_neg(P, s0 + 2 * j - 1))
        acc0.append(coeff * term[0])
        acc1.append(coeff * term[1])
        acc2.append(coeff * term[2])
    return (math.fsum(acc0), math.fsum(acc1), math.fsum(acc2))


def hurwitz_zeta(s: float, q: float) -> float:
    """zeta_H(s, q); at s=1 the Laurent finite part -psi(q)."""
    return _hurwitz_jet(s, q)[0]


def hurwitz_zeta_ds(s: float, q: float) -> float:
    """d/ds zeta_H(s, q); at s=1 the finite part of the derivative."""
    return _hurwitz_jet(s, q)[1]


def zeta_functions(s: float, q: float = 1.0):
    """(zeta(s), zeta'(s), zeta_H(s,q), d/ds zeta_H(s,q)).

    At the pole s=1 all four entries are Laurent finite parts: zeta(s)
    has finite part gamma, zeta_H(s,q) has finite part -psi(q).
    """
    jr = _hurwitz_jet(s, 1.0)
    jh = _hurwitz_jet(s, q) if q != 1.0 else jr
    return jr[0], jr[1], jh[0], jh[1]


# ----------------------------------------------------------------------
# exponential integral E1, plain and scaled

def exp_integral_E1(x: float) -> float:
    """E1(x) for x > 0."""
    return exp_integral_E1_scaled(x) * math.exp(-x)


def exp_integral_E1_scaled(x: float) -> float:
    """e^x E1(x); stable for all x > 0 (no underflow at large x)."""
    if x <= 0.0:
        raise ValueError("E1 needs x > 0")
    if x < 1.0:
        # power series for E1, then rescale
        s = -EULER_GAMMA - math.log(x)
        term = 1.0
        for m in range(1, 40):
            term *= -x / m
            s -= term / m
            if abs(term) < 1e-18 * max(abs(s), 1e-4):
                break
        return s * math.exp(x)
    # continued fraction e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...))))
    # evaluated by the modified Lentz algorithm
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for n in range(1, 300):
        a = -(n * n)
        b += 2.0
        d = b + a * d
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h


# ----------------------------------------------------------------------
# modified Bessel K, real order: stable log-scale quadrature of
#   K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt

def _log_cosh(y: np.ndarray) -> np.ndarray:
    ay = np.abs(y)
    return ay + np.log1p(np.exp(-2.0 * ay)) - math.log(2.0)


def _log_K_quadrature(nu: float, x: float,
                      prec: WorkingPrecision = WorkingPrecision()):
    """(log K_nu(x), log of int e^{-x cosh t} t sinh(nu t) dt), shared nodes.

    The second value is -inf when nu == 0. Both integrals are positive, so
    a shared max-shift keeps the ratio (the order-derivative) fully stable.
    """
    nu = abs(nu)
    prev = None
    out = (-math.inf, -math.inf)
    for level in range(6, 6 + prec.max_refinement_steps):
        t, w = _exp_sinh_nodes(level)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            base = -x * np.cosh(t) + np.log(w)
            ld = base + _log_cosh(nu * t)
            good = np.isfinite(ld)
            m = ld[good].max()
            den = math.fsum(np.exp(ld[good] - m).tolist())
            log_den = m + math.log(den)
            if nu > 0.0:
                # log sinh(y) = y + log1p(-e^{-2y}) - log 2 for y > 0
                y = nu * t
                ln = base + np.log(t) + y + np.log1p(-np.exp(-2.0 * y)) \
                    - math.log(2.0)
                good = np.isfinite(ln)
                num = math.fsum(np.exp(ln[good] - m).tolist())
                log_num = m + math.log(num) if num > 0 else -math.inf
            else:
                log_num = -math.inf
        out = (log_den, log_num)
        if prev is not None and abs(out[0] - prev[0]) < prec.relative_target \
                and (nu == 0.0 or abs(out[1] - prev[1]) < prec.relative_target):
            return out
        prev = out
    return out


def log_bessel_K_real_order(nu: float, x: float,
                            prec: WorkingPrecision = WorkingPrecision()) -> float:
    """log K_nu(x) for x > 0, any real nu; stable at large nu and x."""
    if x <= 0.0:
        raise ValueError("need x > 0")
    return _log_K_quadrature(nu, x, prec)[0]


def bessel_K_real_order(nu: float, x: float,
                        prec: WorkingPrecision = WorkingPrecision()) -> float:
    """K_nu(x) for x > 0 (underflows to 0 below exp(-745))."""
    lk = log_bessel_K_real_order(nu, x, prec)
    return math.exp(lk) if lk > -745.0 else 0.0


def dlog_bessel_K_dorder(nu: float, x: float,
                         prec: WorkingPrecision = WorkingPrecision()) -> float:
    """d/dnu log K_nu(x), by differentiation under the integral sign."""
    if x <= 0.0:
        raise ValueError("need x > 0")
    if nu == 0.0:
        return 0.0
    log_den, log_num = _log_K_quadrature(abs(nu), x, prec)
    val = math.exp(log_num - log_den)
    return val if nu > 0 else -val


# ----------------------------------------------------------------------
# modified Bessel K, imaginary order.
#
# Production route: the power series of I_{i nu}(x),
#   I_{i nu}(x) = (x/2)^{i nu}/Gamma(1+i nu) * S,
#   S = sum_m (x^2/4)^m / (m! prod_{l=1}^m (l + i nu)),
# and K_{i nu}(x) = -pi Im I_{i nu}(x) / sinh(pi nu)
#                 = -sqrt(pi/(nu sinh(pi nu))) |S| sin(Phi),
#   Phi = nu log(x/2) - arg Gamma(1+i nu) + arg S.
# Significance loss grows like eps * e^x, so the route is guarded to
# x <= SERIES_X_MAX. The damped-oscillatory cosine integral is kept as an
# independent (less accurate at large nu) route for cross-checks.

SERIES_X_MAX = 30.0


def _imag_series(nu: float, x: float):
    """(S, dS/dnu, sum |terms|) for the order-i*nu I-series at argument x."""
    z = 0.25 * x * x
    c = 1.0 + 0.0j
    d = 0.0 + 0.0j
    S = c
    dS = d
    absum = 1.0
    for m in range(1, 600):
        denom = m + 1j * nu
        d = (d + c * (-1j / denom)) * (z / (m * denom))
        c = c * (z / (m * denom))
        S += c
        dS += d
        absum += abs(c)
        if abs(c) < 1e-20 * max(abs(S), 1e-280) and m > x:
            break
    return S, dS, absum


def bessel_K_imag_order(nu: float, x: float) -> float:
    """K_{i nu}(x), real-valued.

    Hybrid: the power-series route in the oscillatory zone nu >= 0.75 x
    (where its significance loss e^{x - pi nu/2} is controlled) and the
    damped integral in the monotone zone nu < 0.75 x (where the integral's
    loss e^{pi nu/2 - x} is controlled). The zones overlap; both are
    accurate near the seam.
    """
    if x <= 0.0:
        raise ValueError("need x > 0")
    if abs(nu) < 1e-8:
        return bessel_K_real_order(0.0, x)
    nu = abs(nu)
    if nu < 0.75 * x:
        return bessel_K_imag_order_integral(nu, x)
    if x > SERIES_X_MAX:
        raise ValueError(f"series route unreliable for x > {SERIES_X_MAX}")
    S, _, _ = _imag_series(nu, x)
    phi = nu * math.log(0.5 * x) - sp.loggamma(1.0 + 1j * nu).imag \
        + cmath.phase(S)
    return -_imag_envelope(nu) * abs(S) * math.sin(phi)


def _imag_envelope(nu: float) -> float:
    # sqrt(pi/(nu sinh(pi nu))), in log form to dodge sinh overflow
    if nu > 25.0:
        log_env = 0.5 * (math.log(math.pi / nu)
                         - (math.pi * nu + math.log1p(-math.exp(-2 * math.pi * nu))
                            - math.log(2.0)))
        return math.exp(log_env)
    return math.sqrt(math.pi / (nu * math.sinh(math.pi * nu)))


PHASE_X_MAX = 100.0


def bessel_K_imag_order_phase(nu: float, x: float):
    """(Phi, dPhi/dnu, envelope, |S|, noise) with K = -env |S| sin(Phi).

    The phase route drives root finding: zeros of K in nu are Phi = j pi,
    and |dK/dnu| at a root equals env * |S| * |dPhi/dnu|.  noise is the
    envelope-relative rounding level eps * sum|terms| / |S|; sin(Phi)
    cannot be trusted below it.  The series loses digits as x grows
    (about e^{0.3 x} of them past x ~ 50), so the cap keeps noise under
    roughly 1e-8; within nu >= 0.75 x that loss estimate is sound.
    """
    if not (0.0 < x <= PHASE_X_MAX):
        raise ValueError(f"phase route needs 0 < x <= {PHASE_X_MAX}")
    nu = abs(nu)
    S, dS, absum = _imag_series(nu, x)
    ratio = dS / S
    phi = nu * math.log(0.5 * x) - sp.loggamma(1.0 + 1j * nu).imag \
        + cmath.phase(S)
    # d/dnu arg Gamma(1+i nu) = Re psi(1+i nu)
    dphi = math.log(0.5 * x) - sp.digamma(1.0 + 1j * nu).real + ratio.imag
    noise = 2.3e-16 * absum / abs(S)
    return phi, dphi, _imag_envelope(nu), abs(S), noise


def bessel_K_imag_order_integral(nu: float, x: float,
                                 prec: WorkingPrecision = WorkingPrecision()) -> float:
    """K_{i nu}(x) by the damped-oscillatory integral (independent route).

    Absolute error ~ eps * e^{-x}; relative error grows like
    eps * e^{pi nu/2 - x}, so this is the cross-check route, not the
    production one.
    """
    if x <= 0.0:
        raise ValueError("need x > 0")
    prev = None
    value = 0.0
    for level in range(7, 7 + prec.max_refinement_steps):
        t, w = _exp_sinh_nodes(level)
        with np.errstate(over="ignore"):
            keep = x * np.cosh(t) < 700.0
            t, w = t[keep], w[keep]
            vals = np.exp(-x * np.cosh(t)) * np.cos(nu * t)
        value = float(np.dot(vals, w))
        if prev is not None and abs(value - prev) <= \
                prec.relative_target * max(abs(value), 1e-300) + 1e-305:
            return value
        prev = value
    return value


# ----------------------------------------------------------------------
# exact rational polynomial sequences
#
# Polynomials are tuples of Fractions, low degree first.

def _p_trim(a):
    n = len(a)
    while n > 1 and a[n - 1] == 0:
        n -= 1
    return tuple(a[:n])


def _p_add(a, b):
    n = max(len(a), len(b))
    return _p_trim(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                         for i in range(n)))


def _p_scale(a, c):
    return tuple(c * x for x in a)


def _p_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _p_diff(a):
    return tuple(i * a[i] for i in range(1, len(a))) or (Fraction(0),)


def _p_int0(a):
    # antiderivative vanishing at 0
    return _p_trim((Fraction(0),) + tuple(a[i] / (i + 1) for i in range(len(a))))


def _p_eval(a, x: float) -> float:
    v = 0.0
    for c in reversed(a):
        v = v * x + float(c)
    return v


@lru_cache(maxsize=8)
def _U_polys(n: int):
    """Olver polynomials U_0..U_n as exact rational tuples (in t)."""
    U = [(Fraction(1),)]
    half = Fraction(1, 2)
    eighth = Fraction(1, 8)
    t2_1mt2 = (Fraction(0), Fraction(0), Fraction(1), Fraction(0), Fraction(-1))
    one_m5w2 = (Fraction(1), Fraction(0), Fraction(-5))
    for _ in range(n):
        uk = U[-1]
        part1 = _p_scale(_p_mul(t2_1mt2, _p_diff(uk)), half)
        part2 = _p_scale(_p_int0(_p_mul(one_m5w2, uk)), eighth)
        U.append(_p_add(part1, part2))
    return U


@lru_cache(maxsize=8)
def _A_polys(n: int):
    """Large-argument coefficients A_0..A_n as exact rational tuples (in nu).

    K_nu(z) = sqrt(pi/2z) e^{-z} [ sum_k A_k(nu)/z^k + remainder ],
    A_k(nu) = prod_{j=1}^k (4 nu^2 - (2j-1)^2) / (8^k k!).
    """
    A = [(Fraction(1),)]
    prod = (Fraction(1),)
    for k in range(1, n + 1):
        factor = (Fraction(-(2 * k - 1) ** 2), Fraction(0), Fraction(4))
        prod = _p_mul(prod, factor)
        A.append(_p_scale(prod, Fraction(1, 8 ** k * math.factorial(k))))
    return A


def asymptotic_polynomials(n: int):
    """(U_0..U_n, A_0..A_n, p, xi, total variation of U_1 on [0,1]).

    U_k and A_k are exact rational coefficient tuples (low degree first).
    p(z) = 1/sqrt(1+z^2); xi(z) = sqrt(1+z^2) + log(z/(1+sqrt(1+z^2))).
    The variation is computed by quadrature of |U_1'|.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    U = _U_polys(n)
    A = _A_polys(n)

    def p(z):
        return 1.0 / np.sqrt(1.0 + np.asarray(z, dtype=float) ** 2)

    def xi(z):
        z = np.asarray(z, dtype=float)
        r = np.sqrt(1.0 + z * z)
        return r + np.log(z / (1.0 + r))

    u1d = _p_diff(U[1])
    var = integrate_finite(lambda t: np.abs(_p_eval_vec(u1d, t)), 0.0, 1.0).value
    return U, A, p, xi, var


def _p_eval_vec(a, x):
    x = np.asarray(x, dtype=float)
    v = np.zeros_like(x)
    for c in reversed(a):
        v = v * x + float(c)
    return v


@lru_cache(maxsize=4)
def log_uniform_coeffs(mmax: int):
    """L_2..L_mmax with log K_nu(nu z) = (2-term expansion) + sum L_m(p)/nu^m.

    From the formal log of the uniform series 1 + sum_k (-1)^k U_k(p)/nu^k:
    L_1 = -U_1, L_2 = U_2 - U_1^2/2, etc. Returned exact, starting at m=2.
    """
    U = _U_polys(mmax)
    # power series coefficients of log(1 + w), w = sum_{k>=1} (-1)^k U_k x^k,
    # computed degree by degree in the formal variable x = 1/nu
    w = [None] + [(_p_scale(U[k], Fraction((-1) ** k))) for k in range(1, mmax + 1)]
    L = [None, w[1]]
    # L_m = w_m - (1/m) sum_{i=1}^{m-1} i * L_i * w_{m-i}  (log-series recurrence)
    for m in range(2, mmax + 1):
        acc = w[m]
        for i in range(1, m):
            acc = _p_add(acc, _p_scale(_p_mul(L[i], w[m - i]), Fraction(-i, m)))
        L.append(acc)
    return tuple(L[2:])


@lru_cache(maxsize=4)
def dlog_K_large_x_coeffs(pmax: int):
    """d_1..d_pmax with d/dt log K_t(u) ~ sum_p d_p(t)/u^p for u >> t^2.

    Exact rational polynomials in t, from the termwise t-derivative of the
    log of the large-argument series: d_1 = t, d_2 = -t/2,
    d_3 = t(13-4t^2)/24, ...
    """
    A = _A_polys(pmax)
    # log-series coefficients of log(1 + sum_k A_k x^k), then d/dt
    L = [None]
    for m in range(1, pmax + 1):
        acc = A[m]
        for i in range(1, m):
            acc = _p_add(acc, _p_scale(_p_mul(L[i], A[m - i]), Fraction(-i, m)))
        L.append(acc)
    return tuple(_p_diff(Lm) for Lm in L[1:])


@lru_cache(maxsize=4)
def log_K_large_x_coeffs(pmax: int):
    """l_1..l_pmax with log K_t(u) = -u + log sqrt(pi/2u) + sum_p l_p(t)/u^p."""
    A = _A_polys(pmax)
    L = [None]
    for m in range(1, pmax + 1):
        acc = A[m]
        for i in range(1, m):
            acc = _p_add(acc, _p_scale(_p_mul(L[i], A[m - i]), Fraction(-i, m)))
        L.append(acc)
    return tuple(L[1:])


# ----------------------------------------------------------------------
# uniform large-order expansion of log K with certified remainder

UNIFORM_A0 = 25.0
UNIFORM_B0 = 25.0
# calibrated on dense grids along both validity edges (nu = A0, and
# nu*z = B0), times a 2x safety factor; see tests for the recalibration
UNIFORM_C = 0.125


def uniform_log_K_expansion(nu: float, z: float) -> float:
    """The 2-term uniform expansion of log K_nu(nu z) (no remainder)."""
    r = math.hypot(nu, nu * z)  # sqrt(nu^2 + u^2) with u = nu z
    u = nu * z
    # -nu xi(z) = nu arcsinh(nu/u) - sqrt(nu^2+u^2)
    val = 0.5 * math.log(math.pi / (2.0 * nu)) \
        + nu * math.asinh(nu / u) - r - 0.25 * math.log(1.0 + z * z)
    p = nu / r
    val -= (3.0 * p - 5.0 * p ** 3) / (24.0 * nu)
    return val


def uniform_log_K_certified(nu: float, z: float) -> CertifiedValue:
    """log K_nu(nu z) with a certified absolute error bound.

    Valid for nu >= 25 or nu*z >= 25; raises otherwise. The bound is
    C * min(1/(nu z)^2, 1/nu^2) with C calibrated at the validity edges.
    """
    if nu <= 0.0 or z <= 0.0:
        raise ValueError("need nu > 0 and z > 0")
    if nu < UNIFORM_A0 and nu * z < UNIFORM_B0:
        raise ValueError("outside validity region: need nu >= 25 or nu*z >= 25")
    bound = UNIFORM_C / max(nu * nu, (nu * z) ** 2)
    return CertifiedValue(uniform_log_K_expansion(nu, z), bound)


def eta2_remainder(nu: float, z: float,
                   prec: WorkingPrecision = WorkingPrecision()) -> float:
    """log K_nu(nu z) minus the 2-term uniform expansion (computed, not bounded)."""
    return log_bessel_K_real_order(nu, nu * z, prec) - uniform_log_K_expansion(nu, z)


# ----------------------------------------------------------------------
# Bose-weighted arctangent integral

def bose_arctan_integral(c: float,
                         prec: WorkingPrecision = WorkingPrecision()) -> float:
    """int_0^inf arctan(t/c) / (e^{2 pi t} - 1) dt for c > 0.

    The integrand tends to 1/(2 pi c) at t=0; evaluated in the regularized
    form arctan(t/c) * g(t) with g(t) = 1/(e^{2 pi t} - 1) handled by expm1.
    """
    if c <= 0.0:
        raise ValueError("need c > 0")

    def f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            return np.arctan(t / c) / np.expm1(2.0 * math.pi * t)

    return integrate_to_inf(f, 0.0, prec).value
