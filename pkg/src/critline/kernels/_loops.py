"""Scalar-loop kernels.

Written in the subset of Python that numba compiles in nopython mode. The
package applies ``njit`` to these at import time when the numba backend is
active; otherwise the vectorised counterparts in ``_vector`` are used.
"""
import cmath
import math

import numpy as np

# Relative size below which a series term is considered negligible.
SERIES_EPS = 1e-17
SERIES_MAX_TERMS = 400


def cexpm1(w):
    """exp(w) - 1 without cancellation for small |w|."""
    a = w.real
    b = w.imag
    s = math.sin(0.5 * b)
    re = math.expm1(a) * math.cos(b) - 2.0 * s * s
    im = math.exp(a) * math.sin(b)
    return complex(re, im)


def neumaier_sum(terms):
    """Compensated sum of a complex array (Neumaier's variant of Kahan)."""
    sr = 0.0
    si = 0.0
    cr = 0.0
    ci = 0.0
    for i in range(terms.shape[0]):
        tr = terms[i].real
        ti = terms[i].imag
        t = sr + tr
        if abs(sr) >= abs(tr):
            cr += (sr - t) + tr
        else:
            cr += (tr - t) + sr
        sr = t
        t = si + ti
        if abs(si) >= abs(ti):
            ci += (si - t) + ti
        else:
            ci += (ti - t) + si
        si = t
    return complex(sr + cr, si + ci)


def dirichlet_sum(z, n_lo, n_hi):
    """sum_{n=n_lo}^{n_hi} n^(-z), compensated."""
    sr = 0.0
    si = 0.0
    cr = 0.0
    ci = 0.0
    for n in range(n_lo, n_hi + 1):
        v = cmath.exp(-z * math.log(n))
        tr = v.real
        ti = v.imag
        t = sr + tr
        if abs(sr) >= abs(tr):
            cr += (sr - t) + tr
        else:
            cr += (tr - t) + sr
        sr = t
        t = si + ti
        if abs(si) >= abs(ti):
            ci += (si - t) + ti
        else:
            ci += (ti - t) + si
        si = t
    return complex(sr + cr, si + ci)


def _term_closed(n, z, k):
    # J_1 in cancellation-free form, then k-1 steps of the integration-by-parts
    # recurrence J_j = (j J_{j-1} - (n+1)^(1-z-j)) / (z+j-1).
    L = math.log1p(1.0 / n)
    a = cmath.exp((1.0 - z) * math.log(n))
    j1 = a * (cexpm1((1.0 - z) * L) / (1.0 - z) + cexpm1(-z * L) / z)
    log_np1 = math.log(n + 1.0)
    for j in range(2, k + 1):
        j1 = (j * j1 - cmath.exp((1.0 - z - j) * log_np1)) / (z + (j - 1))
    return j1


def series_coefficients(z, k, h_max):
    """Coefficients of J_k(n) n^(z+k) as a power series in h = 1/n.

    c_m = (-1)^m (z+k)_m / (m! (k+m+1)). Enough terms are returned for
    |c_m| h^m to fall below SERIES_EPS |c_0| at the largest h used.
    """
    w = z + k
    c = np.empty(SERIES_MAX_TERMS, dtype=np.complex128)
    b = complex(1.0, 0.0)
    c[0] = b / (k + 1.0)
    lim = SERIES_EPS * abs(c[0])
    hp = 1.0
    count = SERIES_MAX_TERMS
    for m in range(1, SERIES_MAX_TERMS):
        b = -b * (w + (m - 1)) / m
        c[m] = b / (k + m + 1.0)
        hp *= h_max
        if abs(c[m]) * hp < lim:
            count = m + 1
            break
    return c[:count]


def integral_sum(z, k, n_lo, n_hi, n_switch):
    """sum_{n=n_lo}^{n_hi} of int_0^1 t^k (n+t)^(-z-k) dt, compensated.

    Terms with n < n_switch use the closed form and recurrence; larger n use
    the convergent expansion in 1/n, which avoids the cancellation the closed
    form suffers once n >> |z|.
    """
    sr = 0.0
    si = 0.0
    cr = 0.0
    ci = 0.0
    first_series = max(n_lo, n_switch)
    c = series_coefficients(z, k, 1.0 / first_series)
    m_used = c.shape[0]
    lim = SERIES_EPS * abs(c[0])
    w = z + k
    for n in range(n_lo, n_hi + 1):
        if n < n_switch:
            v = _term_closed(float(n), z, k)
        else:
            h = 1.0 / n
            # n only grows, so the number of significant terms only shrinks
            while m_used > 1 and abs(c[m_used - 1]) * h ** (m_used - 1) < lim:
                m_used -= 1
            acc = c[m_used - 1]
            for m in range(m_used - 2, -1, -1):
                acc = acc * h + c[m]
            v = cmath.exp(-w * math.log(n)) * acc
        tr = v.real
        ti = v.imag
        t = sr + tr
        if abs(sr) >= abs(tr):
            cr += (sr - t) + tr
        else:
            cr += (tr - t) + sr
        sr = t
        t = si + ti
        if abs(si) >= abs(ti):
            ci += (si - t) + ti
        else:
            ci += (ti - t) + si
        si = t
    return complex(sr + cr, si + ci)


def mobius_sieve(n_max):
    """Moebius function mu(0..n_max) by a linear sieve (mu[0] = 0)."""
    mu = np.zeros(n_max + 1, dtype=np.int8)
    if n_max >= 1:
        mu[1] = 1
    composite = np.zeros(n_max + 1, dtype=np.bool_)
    primes = np.empty(n_max // 2 + 2, dtype=np.int64)
    n_primes = 0
    for i in range(2, n_max + 1):
        if not composite[i]:
            primes[n_primes] = i
            n_primes += 1
            mu[i] = -1
        for j in range(n_primes):
            p = primes[j]
            if i * p > n_max:
                break
            composite[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


def sigma_sieve(n_max):
    """Divisor sums sigma(0..n_max) from a smallest-prime-factor sieve."""
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for i in range(2, n_max + 1):
        if spf[i] == 0:
            for j in range(i, n_max + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    sigma = np.zeros(n_max + 1, dtype=np.int64)
    if n_max >= 1:
        sigma[1] = 1
    # sigma(n) = sigma(m) * (p^(a+1) - 1)/(p - 1) where n = p^a m, p = spf(n)
    for n in range(2, n_max + 1):
        p = spf[n]
        m = n
        pk = 1
        s = 1
        while m % p == 0:
            m //= p
            pk *= p
            s += pk
        sigma[n] = sigma[m] * s
    return sigma


def harmonic_numbers(n_max):
    """H_0..H_n_max accumulated with compensation."""
    h = np.zeros(n_max + 1, dtype=np.float64)
    s = 0.0
    c = 0.0
    for k in range(1, n_max + 1):
        x = 1.0 / k
        t = s + x
        if abs(s) >= x:
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        h[k] = s + c
    return h


_INT_GUARD = 2**31 - 1


def bareiss_det(a):
    """Fraction-free determinant of an int64 matrix (modified in place).

    Returns (det, ok). ok is False when an intermediate entry left the range
    in which the next product is guaranteed not to overflow; the caller then
    has to redo the computation with unbounded integers.
    """
    n = a.shape[0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            piv = -1
            for r in range(k + 1, n):
                if a[r, k] != 0:
                    piv = r
                    break
            if piv < 0:
                return 0, True
            for c in range(k, n):
                tmp = a[k, c]
                a[k, c] = a[piv, c]
                a[piv, c] = tmp
            sign = -sign
        p = a[k, k]
        if abs(p) > _INT_GUARD or abs(prev) > _INT_GUARD:
            return 0, False
        for i in range(k + 1, n):
            aik = a[i, k]
            if aik == 0 and p == prev:
                # (p a_ij - 0) / prev == a_ij: row unchanged
                continue
            if abs(aik) > _INT_GUARD:
                return 0, False
            for j in range(k + 1, n):
                aij = a[i, j]
                akj = a[k, j]
                if abs(aij) > _INT_GUARD or abs(akj) > _INT_GUARD:
                    return 0, False
                a[i, j] = (p * aij - aik * akj) // prev
            a[i, k] = 0
        prev = p
    return sign * a[n - 1, n - 1], True
