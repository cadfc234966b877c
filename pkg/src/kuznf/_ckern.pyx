# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the hot kernels.

Mirrors kuznf._pkern step for step (same quadrature parameters, same Gauss
node tables imported from kuznf.quadrature) so the two backends agree to
rounding error; the test suite asserts this.
"""

import numpy as np

from .quadrature import GL24_W, GL24_X, GL200_W, GL200_X

from libc.math cimport M_PI, asinh, cos, cosh, exp, fabs, log, sin, sinh, sqrt

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex ccos(double complex)
    double complex csin(double complex)
    double complex ccosh(double complex)
    double complex clog(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cdef double[::1] _G200X = np.ascontiguousarray(GL200_X)
cdef double[::1] _G200W = np.ascontiguousarray(GL200_W)
cdef double[::1] _G24X = np.ascontiguousarray(GL24_X)
cdef double[::1] _G24W = np.ascontiguousarray(GL24_W)

DEF LANCZOS_G = 7.0

cdef double[9] _LANCZOS
_LANCZOS[0] = 0.99999999999980993
_LANCZOS[1] = 676.5203681218851
_LANCZOS[2] = -1259.1392167224028
_LANCZOS[3] = 771.32342877765313
_LANCZOS[4] = -176.61502916214059
_LANCZOS[5] = 12.507343278686905
_LANCZOS[6] = -0.13857109526572012
_LANCZOS[7] = 9.9843695780195716e-6
_LANCZOS[8] = 1.5056327351493116e-7


cdef double complex _gamma_pos(double complex z) nogil:
    # Lanczos approximation, requires Re z >= 0.5
    cdef double complex zz = z - 1.0
    cdef double complex acc = _LANCZOS[0]
    cdef int i
    for i in range(1, 9):
        acc = acc + _LANCZOS[i] / (zz + i)
    cdef double complex t = zz + LANCZOS_G + 0.5
    return sqrt(2.0 * M_PI) * cexp((zz + 0.5) * clog(t) - t) * acc


cdef double complex crgamma(double complex z) nogil:
    cdef double zr, nearest
    if creal(z) < 0.5:
        # exact zero at the nonpositive-integer poles (the float reflection
        # would leave ~1e-16 residue that large prefactors amplify)
        zr = creal(z)
        nearest = round_d(zr)
        if fabs(cimag(z)) < 1e-14 and nearest <= 0.0 \
                and fabs(zr - nearest) < 1e-14:
            return 0.0
        return csin(M_PI * z) * _gamma_pos(1.0 - z) / M_PI
    return 1.0 / _gamma_pos(z)


cdef inline double round_d(double x) nogil:
    cdef long n = <long>x
    if x >= 0:
        return <double>(n + 1) if x - n > 0.5 else <double>n
    return <double>(n - 1) if n - x > 0.5 else <double>n


def rgamma(double complex z):
    """Reciprocal gamma 1/Gamma(z), entire (Lanczos + reflection)."""
    return crgamma(z)


# --- series ---------------------------------------------------------------------


cdef int _series_kmax(double qmax) nogil:
    return 24 + <int>(4.0 * sqrt(qmax if qmax > 0.0 else 0.0))


cdef (double complex, double) _alt_series(double complex mu, double complex q,
                                          int sign) nogil:
    """sum_k sign^k q^k / (k! Gamma(mu+k+1)); returns (sum, amplification).

    The reciprocal gamma runs on the recurrence rg_{k+1} = rg_k/(mu+k+1),
    entered only past any nonpositive-integer pole of the argument so that
    negative integer orders are handled exactly (rgamma there is 0).
    """
    cdef int kmax = _series_kmax(cabs(q))
    cdef int k_safe = 0
    if creal(mu) < -0.5:
        k_safe = <int>(-creal(mu)) + 2
    cdef double complex pow_term = 1.0
    cdef double complex rg = crgamma(mu + 1.0)
    cdef double complex term = rg
    cdef double complex total = term
    cdef double biggest = cabs(term)
    cdef int k
    for k in range(1, kmax + 1):
        pow_term = pow_term * q / k
        if sign < 0:
            pow_term = -pow_term
        if k <= k_safe:
            rg = crgamma(mu + 1.0 + k)
        else:
            rg = rg / (mu + k)
        term = pow_term * rg
        total = total + term
        if cabs(term) > biggest:
            biggest = cabs(term)
    cdef double denom = cabs(total)
    if denom < 1e-300:
        denom = 1e-300
    return total, biggest / denom


def j_star(double complex nu, double complex z):
    """Even entire function equal to J_nu(z) (z/2)^(-nu) for z > 0."""
    cdef double complex s
    cdef double amp
    s, amp = _alt_series(nu, z * z / 4.0, -1)
    return complex(s)


def j_star_nus(double complex[::1] nus, double complex z):
    out = np.empty(nus.shape[0], dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    cdef double amp
    cdef double complex s
    for i in range(nus.shape[0]):
        s, amp = _alt_series(nus[i], z * z / 4.0, -1)
        ov[i] = s
    return out


# --- K-Bessel -------------------------------------------------------------------


cdef (double, double) _trap_params_k(double a, double b, double x) nogil:
    """Identical to kuznf.quadrature.trapezoid_params_k."""
    cdef double d = 1.3 / sqrt(x if x > 1.0 else 1.0)
    if d > 1.1:
        d = 1.1
    cdef double h = 2.0 * M_PI * d / (42.0 + 0.5 * x * d * d + b * d + 1.6 * b)
    cdef double tstar = asinh(a / x) if a > 0.0 else 0.0
    cdef double g_star = x * cosh(tstar) - a * tstar
    cdef double t_trunc = tstar
    while x * cosh(t_trunc) - a * t_trunc < g_star + 46.0:
        t_trunc += 0.5
        if t_trunc > 500.0:
            break
    return h, t_trunc + 0.5


cdef (double complex, double) _kbessel_one(double complex mu, double x) nogil:
    cdef double a = fabs(creal(mu))
    cdef double b = fabs(cimag(mu))
    cdef double h, t_max
    h, t_max = _trap_params_k(a, b, x)
    cdef double complex val = 0.5 * exp(-x)
    cdef double complex total = val
    cdef double mass = cabs(val)
    cdef double t = h
    while t <= t_max:
        val = cexp(-x * cosh(t)) * ccosh(mu * t)
        total = total + val
        mass += cabs(val)
        t += h
    total = total * h
    mass *= h
    cdef double denom = cabs(total)
    if denom < 1e-300:
        denom = 1e-300
    return total, 3e-16 * mass / denom


def bessel_k(double complex mu, double x):
    cdef double complex v
    cdef double e
    v, e = _kbessel_one(mu, x)
    return complex(v), e


def bessel_k_xs(double complex mu, double[::1] xs):
    vals = np.empty(xs.shape[0], dtype=np.complex128)
    errs = np.empty(xs.shape[0], dtype=np.float64)
    cdef double complex[::1] vv = vals
    cdef double[::1] ee = errs
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        vv[i], ee[i] = _kbessel_one(mu, xs[i])
    return vals, errs


# --- I and J Bessel ---------------------------------------------------------------


cdef (double, int) _decay_panels(double x, double a, bint sinh_kernel) nogil:
    """Identical to kuznf.quadrature.decay_panel_count."""
    cdef double width = 8.0 / x
    if width > 1.0:
        width = 1.0
    if width < 0.1:
        width = 0.1
    cdef double t = width
    cdef int count = 1
    cdef double decay
    cdef int i
    for i in range(400):
        decay = x * (sinh(t) if sinh_kernel else (cosh(t) - 1.0)) - a * t
        if decay > 48.0:
            break
        t += width
        count += 1
    return width, count


cdef (double complex, double) _series_ij(double complex mu, double x, int sign) nogil:
    cdef double complex s
    cdef double amp
    s, amp = _alt_series(mu, x * x / 4.0, sign)
    return cexp(mu * log(x / 2.0)) * s, amp * 3e-16


cdef (double complex, double) _integral_i(double complex mu, double x) nogil:
    cdef double complex first = 0.0
    cdef double th, wt
    cdef Py_ssize_t k
    for k in range(200):
        th = 0.5 * M_PI * (_G200X[k] + 1.0)
        wt = 0.5 * M_PI * _G200W[k]
        first = first + wt * exp(x * cos(th)) * ccos(mu * th)
    first = first / M_PI
    cdef double a = fabs(creal(mu))
    cdef double width
    cdef int count
    width, count = _decay_panels(x, a, 0)
    cdef double complex second = 0.0
    cdef double lo, half, t
    cdef int p
    for p in range(count):
        lo = p * width
        half = 0.5 * width
        for k in range(24):
            t = lo + half * (_G24X[k] + 1.0)
            second = second + half * _G24W[k] * cexp(-x * cosh(t) - mu * t)
    cdef double complex val = first - csin(mu * M_PI) * second / M_PI
    cdef double amp = exp(fabs(cimag(mu)) * M_PI) * (exp(x) + cabs(second))
    cdef double denom = cabs(val)
    if denom < 1e-300:
        denom = 1e-300
    return val, 3e-16 * amp / denom


cdef (double complex, double) _integral_j(double complex mu, double x) nogil:
    cdef double complex first = 0.0
    cdef double th, wt
    cdef Py_ssize_t k
    for k in range(200):
        th = 0.5 * M_PI * (_G200X[k] + 1.0)
        wt = 0.5 * M_PI * _G200W[k]
        first = first + wt * ccos(x * sin(th) - mu * th)
    first = first / M_PI
    cdef double a = fabs(creal(mu))
    cdef double width
    cdef int count
    width, count = _decay_panels(x, a, 1)
    cdef double complex second = 0.0
    cdef double lo, half, t
    cdef int p
    for p in range(count):
        lo = p * width
        half = 0.5 * width
        for k in range(24):
            t = lo + half * (_G24X[k] + 1.0)
            second = second + half * _G24W[k] * cexp(-x * sinh(t) - mu * t)
    cdef double complex val = first - csin(mu * M_PI) * second / M_PI
    cdef double amp = exp(fabs(cimag(mu)) * M_PI) * (1.0 + cabs(csin(mu * M_PI) * second / M_PI))
    cdef double denom = cabs(val)
    if denom < 1e-300:
        denom = 1e-300
    return val, 3e-16 * amp / denom


cdef (double complex, double) _branchy(double complex mu, double x, int sign) nogil:
    cdef double complex v, v2
    cdef double e, e2
    v, e = _series_ij(mu, x, sign)
    if x <= 8.0 or e <= 1e-11:
        return v, e
    if sign > 0:
        v2, e2 = _integral_i(mu, x)
    else:
        v2, e2 = _integral_j(mu, x)
    if e2 < e:
        return v2, e2
    return v, e


def bessel_i(double complex mu, double x):
    cdef double complex v
    cdef double e
    v, e = _branchy(mu, x, 1)
    return complex(v), e


def bessel_j(double complex mu, double x):
    cdef double complex v
    cdef double e
    v, e = _branchy(mu, x, -1)
    return complex(v), e


def bessel_i_xs(double complex mu, double[::1] xs):
    vals = np.empty(xs.shape[0], dtype=np.complex128)
    errs = np.empty(xs.shape[0], dtype=np.float64)
    cdef double complex[::1] vv = vals
    cdef double[::1] ee = errs
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        vv[i], ee[i] = _branchy(mu, xs[i], 1)
    return vals, errs


def bessel_j_xs(double complex mu, double[::1] xs):
    vals = np.empty(xs.shape[0], dtype=np.complex128)
    errs = np.empty(xs.shape[0], dtype=np.float64)
    cdef double complex[::1] vv = vals
    cdef double[::1] ee = errs
    cdef Py_ssize_t i
    for i in range(xs.shape[0]):
        vv[i], ee[i] = _branchy(mu, xs[i], -1)
    return vals, errs


def bessel_j_mus(double complex[::1] mus, double x):
    vals = np.empty(mus.shape[0], dtype=np.complex128)
    errs = np.empty(mus.shape[0], dtype=np.float64)
    cdef double complex[::1] vv = vals
    cdef double[::1] ee = errs
    cdef Py_ssize_t i
    for i in range(mus.shape[0]):
        vv[i], ee[i] = _branchy(mus[i], x, -1)
    return vals, errs


# --- classical Kloosterman sums ----------------------------------------------------


cdef long _inv_mod(long a, long c) nogil:
    cdef long r0 = a % c, r1 = c
    cdef long s0 = 1, s1 = 0
    cdef long q, tmp
    if r0 < 0:
        r0 += c
    while r1 != 0:
        q = r0 / r1
        tmp = r0 - q * r1; r0 = r1; r1 = tmp
        tmp = s0 - q * s1; s0 = s1; s1 = tmp
    if r0 != 1:
        return -1
    s0 %= c
    if s0 < 0:
        s0 += c
    return s0


def classical_kloosterman(long m, long n, long c):
    """S(m,n;c) = sum over x mod c, gcd(x,c)=1, of e((m x + n xbar)/c)."""
    if c < 1:
        raise ValueError("modulus must be a positive integer")
    if c == 1:
        return 1.0 + 0.0j
    cdef double re = 0.0, im = 0.0
    cdef long x, xi, mm = m % c, nn = n % c
    cdef double ang
    cdef double w = 2.0 * M_PI / c
    if mm < 0:
        mm += c
    if nn < 0:
        nn += c
    for x in range(1, c):
        xi = _inv_mod(x, c)
        if xi < 0:
            continue
        ang = w * ((mm * x + nn * xi) % c)
        re += cos(ang)
        im += sin(ang)
    return re + 1j * im
