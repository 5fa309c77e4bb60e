"""Pure-numpy kernels with the same signatures as ``_loops``.

Sums are taken blockwise: numpy's pairwise summation inside a block, exactly
rounded ``math.fsum`` across block partials.
"""
import math

import numpy as np

from ._loops import series_coefficients

BLOCK = 1 << 16


def _fsum_complex(parts):
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _cexpm1(w):
    a = w.real
    b = w.imag
    s = np.sin(0.5 * b)
    return (np.expm1(a) * np.cos(b) - 2.0 * s * s) + 1j * (np.exp(a) * np.sin(b))


def neumaier_sum(terms):
    terms = np.asarray(terms, dtype=np.complex128)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def dirichlet_sum(z, n_lo, n_hi):
    parts = []
    for lo in range(n_lo, n_hi + 1, BLOCK):
        n = np.arange(lo, min(lo + BLOCK, n_hi + 1), dtype=np.float64)
        parts.append(np.exp(-z * np.log(n)).sum())
    return _fsum_complex(parts)


def _terms_closed(n, z, k):
    L = np.log1p(1.0 / n)
    a = np.exp((1.0 - z) * np.log(n))
    j = a * (_cexpm1((1.0 - z) * L) / (1.0 - z) + _cexpm1(-z * L) / z)
    log_np1 = np.log(n + 1.0)
    for jj in range(2, k + 1):
        j = (jj * j - np.exp((1.0 - z - jj) * log_np1)) / (z + (jj - 1))
    return j


def _terms_series(n, z, k):
    # coefficients depend only on z and k; truncate for the smallest n of the block
    c = series_coefficients(z, k, 1.0 / n[0])
    h = 1.0 / n
    acc = np.full(n.shape, c[-1], dtype=np.complex128)
    for m in range(c.size - 2, -1, -1):
        acc = acc * h + c[m]
    return np.exp(-(z + k) * np.log(n)) * acc


def integral_sum(z, k, n_lo, n_hi, n_switch):
    parts = []
    split = max(n_lo, min(n_switch, n_hi + 1))
    if split > n_lo:
        n = np.arange(n_lo, split, dtype=np.float64)
        parts.append(_terms_closed(n, z, k).sum())
    for lo in range(split, n_hi + 1, BLOCK):
        n = np.arange(lo, min(lo + BLOCK, n_hi + 1), dtype=np.float64)
        parts.append(_terms_series(n, z, k).sum())
    return _fsum_complex(parts)


def mobius_sieve(n_max):
    mu = np.ones(n_max + 1, dtype=np.int8)
    mu[0] = 0
    if n_max < 2:
        return mu
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n_max) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    for p in np.flatnonzero(is_prime):
        mu[p::p] *= -1
        if p * p <= n_max:
            mu[p * p :: p * p] = 0
    return mu


def sigma_sieve(n_max):
    # additive divisor sieve; exact in int64 for the supported range
    sigma = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        sigma[d::d] += d
    return sigma


def harmonic_numbers(n_max):
    h = np.zeros(n_max + 1, dtype=np.float64)
    if n_max >= 1:
        # cumsum error grows like n*eps; correct blockwise with fsum anchors
        recip = 1.0 / np.arange(1, n_max + 1, dtype=np.float64)
        base = 0.0
        for lo in range(0, n_max, BLOCK):
            block = recip[lo : lo + BLOCK]
            h[lo + 1 : lo + 1 + block.size] = base + np.cumsum(block)
            # running anchor: one rounding per block instead of one per term
            base = math.fsum(np.append(block, base))
            h[lo + block.size] = base
    return h


_INT_GUARD = 2**31 - 1


def bareiss_det(a):
    n = a.shape[0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            nz = np.flatnonzero(a[k + 1 :, k])
            if nz.size == 0:
                return 0, True
            piv = k + 1 + nz[0]
            a[[k, piv], k:] = a[[piv, k], k:]
            sign = -sign
        p = a[k, k]
        block = a[k:, k:]
        if np.abs(block).max() > _INT_GUARD or abs(prev) > _INT_GUARD:
            return 0, False
        rows = k + 1 + np.flatnonzero(a[k + 1 :, k]) if p == prev else np.arange(k + 1, n)
        if rows.size:
            # rows with a zero in the pivot column are unchanged when p == prev
            col = a[rows, k : k + 1]
            row = a[k : k + 1, k + 1 :]
            a[rows, k + 1 :] = (p * a[rows, k + 1 :] - col * row) // prev
        a[k + 1 :, k] = 0
        prev = p
    return int(sign * a[n - 1, n - 1]), True
