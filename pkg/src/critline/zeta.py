"""Evaluation of zeta(z) by four independent routes.

DIRECT      Dirichlet series with Euler-Maclaurin end corrections, Re z >= 1.5.
EQ1         1 + 1/(z-1) - z S(z), where S(z) = sum_n int_0^1 t dt/(n+t)^(z+1).
LEVELK      the depth-K continuation obtained by repeated integration by parts,
            valid for Re z > 1 - K.
ETA_ORACLE  alternating series with Euler's transformation; shares no code
            with the other three and serves as the cross-check.

All series terms come from the backend kernels in ``critline.kernels``.
"""
import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .errors import (
    DegenerateClosedForm,
    EtaDenominatorSmall,
    PoleProximity,
    TailTooLarge,
    WrongRegion,
)
from .numerics import as_point, integrate_01, log_gamma

EPS = np.finfo(float).eps
EULER_GAMMA = 0.5772156649015329
DIRECT_MIN_RE = 1.5
MAX_K = 12


@dataclass(frozen=True)
class PrecisionParams:
    """Truncation length N, continuation depth K, exclusion radius, target error."""

    N: int = 100_000
    K: int = 6
    pole_radius: float = 1e-6
    tol: float = 1e-8

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if int(self.K) != self.K or not 1 <= self.K <= MAX_K:
            raise ValueError(f"K must be an integer in [1, {MAX_K}], got {self.K!r}")
        if not 0 < self.pole_radius <= 0.1:
            raise ValueError(f"pole_radius must lie in (0, 0.1], got {self.pole_radius!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "K", int(self.K))


class Engine(str, enum.Enum):
    DIRECT = "DIRECT"
    EQ1 = "EQ1"
    LEVELK = "LEVELK"
    ETA_ORACLE = "ETA_ORACLE"


@dataclass(frozen=True)
class EvalResult:
    value: complex
    err_bound: float
    engine: Engine
    params: PrecisionParams
    diagnostics: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class SeriesSum:
    """S(z) truncated at N, with the tail estimate already added to ``value``."""

    value: complex
    partial: complex
    tail_estimate: complex
    tail_bound: float  # bound on |S(z) - value|, closed-form rounding included
    raw_tail_bound: float  # the same when no tail estimate is added


def rounding_allowance(z: complex) -> float:
    """Heuristic floating-point error budget for one engine evaluation.

    Independent of N so that err_bound stays monotone under refinement.
    """
    return 64.0 * EPS * (1.0 + abs(z)) * (1.0 + 1.0 / max(abs(z.real), 0.05))


def _rising(z: complex, j: int) -> complex:
    out = complex(1.0)
    for i in range(j):
        out *= z + i
    return out


def _n_switch(z: complex, k: int) -> int:
    # below this n the closed form is used, above it the 1/n expansion; for
    # n > |z+k| + 1 the expansion's terms (z+k)_m/m! n^-m decrease from the start
    return int(abs(z + k)) + 2


def _closed_rounding(z: complex, k: int, n_last: int) -> float:
    """Bound on the rounding error of the closed-form terms n = 1..n_last.

    The error of J_1 (a few ulps of its two parts) is carried through the
    recurrence, which multiplies it by j/|z+j-1| at step j. For Re z < 0 the
    amplification is large, since J_1 grows like n^(1-x) while J_k decays.
    """
    if n_last < 1:
        return 0.0
    n = np.arange(1, n_last + 1, dtype=float)
    L = np.log1p(1.0 / n)
    a = np.exp((1.0 - z.real) * np.log(n))
    def em1_bound(w):
        # |e^w - 1| <= min(e^Re(w) + 1, |w| e^|w|)
        return np.minimum(np.exp(w.real) + 1.0, np.abs(w) * np.exp(np.minimum(np.abs(w), 700.0)))

    part = em1_bound((1.0 - z) * L) / abs(1.0 - z) + em1_bound(-z * L) / abs(z)
    e = 4.0 * EPS * a * (1.0 + part)
    log_np1 = np.log(n + 1.0)
    for j in range(2, k + 1):
        e = (j * e + 2.0 * EPS * np.exp((1.0 - z.real - j) * log_np1)) / abs(z + (j - 1))
    return float(e.sum())


def _is_degenerate(z: complex, k: int, radius: float) -> bool:
    return abs(1.0 - z) < radius or any(abs(z + j) < radius for j in range(k))


def _raw_integrand(n: int, z: complex, k: int):
    def f(t):
        return t**k * np.exp(-(z + k) * np.log(n + t))

    return f


def _quadrature_terms(z: complex, k: int, n_lo: int, n_hi: int) -> complex:
    parts = [integrate_01(_raw_integrand(n, z, k)) for n in range(n_lo, n_hi + 1)]
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def integral_term(n: int, z, k: int = 1, pole_radius: float = 1e-6) -> complex:
    """int_0^1 t^k dt / (n+t)^(z+k) from its closed form.

    When one of the closed form's denominators (1-z, z, ..., z+k-1) is within
    ``pole_radius`` of zero a DegenerateClosedForm warning is issued and the
    integral is done by quadrature instead.
    """
    z = as_point(z)
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    nsw = _n_switch(z, k)
    if n < nsw and _is_degenerate(z, k, pole_radius):
        warnings.warn(DegenerateClosedForm(f"closed form degenerate at z={z}, k={k}"), stacklevel=2)
        return integrate_01(_raw_integrand(n, z, k))
    return complex(kernels.active.integral_sum(z, k, n, n, nsw))


def _integral_partial(z: complex, k: int, N: int, radius: float):
    """(sum_{n=1}^N J_k(n), rounding bound of the closed-form part)."""
    nsw = _n_switch(z, k)
    if _is_degenerate(z, k, radius):
        warnings.warn(DegenerateClosedForm(f"closed form degenerate at z={z}, k={k}"), stacklevel=3)
        head = _quadrature_terms(z, k, 1, min(N, nsw - 1))
        tail = complex(kernels.active.integral_sum(z, k, nsw, N, nsw)) if N >= nsw else 0j
        return head + tail, 0.0
    return complex(kernels.active.integral_sum(z, k, 1, N, nsw)), _closed_rounding(z, k, min(N, nsw - 1))


def _tail(z: complex, k: int, N: int):
    """Estimate and bound for sum_{n>N} int_0^1 t^k (n+t)^(-z-k) dt.

    This tail equals int_M^inf {u}^k u^(-z-k) du with M = N+1. For k = 1 the
    Euler-Maclaurin expansion is carried to the B4 term, leaving a remainder
    controlled by sup|P4| = 1/720; for k >= 2 only the mean of {u}^k is used
    and the zero-mean rest is bounded after one integration by parts.
    Returns (estimate, bound_after_estimate, bound_without_estimate).
    """
    M = float(N + 1)
    x = z.real
    logM = math.log(M)

    def mpow(w):
        return cmath.exp(-w * logM)

    raw = math.exp(-(x + (k - 1)) * logM) / ((k + 1) * (x + (k - 1)))
    if k == 1:
        est = mpow(z) / (2 * z) - mpow(z + 1) / 12 + (z + 1) * (z + 2) * mpow(z + 3) / 720
        bound = abs((z + 1) * (z + 2) * (z + 3)) / 720 * math.exp(-(x + 3) * logM) / (x + 3)
    else:
        est = mpow(z + k - 1) / ((k + 1) * (z + k - 1))
        bound = abs(z + k) * math.exp(-(x + k) * logM) / ((k + 1) * (x + k))
    return est, bound, raw


def telescoped_partial(z, N: int) -> complex:
    """z * sum_{n=1}^N I_n(z) in closed form, without any integral terms.

    The k = 1 terms telescope: z S_N = z ((N+1)^(1-z) - 1)/(1-z)
    + (N+1)^(1-z) - sum_{m=1}^{N+1} m^(-z).
    """
    z = as_point(z)
    if z == 0 or z == 1:
        raise ValueError(f"identity undefined at z = {z}")
    top = cmath.exp((1.0 - z) * math.log(N + 1.0))
    return z * (top - 1.0) / (1.0 - z) + top - complex(kernels.active.dirichlet_sum(z, 1, N + 1))


def _check_poles(z: complex, radius: float, zero_too: bool = True):
    if abs(z - 1.0) < radius:
        raise PoleProximity(f"|z-1| = {abs(z - 1.0):.3g} < pole_radius {radius:g}")
    if zero_too and abs(z) < radius:
        raise PoleProximity(f"|z| = {abs(z):.3g} < pole_radius {radius:g}")


def s_sum(z, p: PrecisionParams = PrecisionParams(), tail_correction: bool = True) -> SeriesSum:
    """S(z) = sum_{n>=1} int_0^1 t dt/(n+t)^(z+1), truncated at p.N.

    With ``tail_correction`` the asymptotic estimate of the discarded tail is
    added; without it ``value`` is the bare partial sum. A TailTooLarge warning
    is issued when the applicable bound exceeds p.tol.
    """
    z = as_point(z)
    if z.real <= 0:
        raise WrongRegion(f"S(z) needs Re z > 0, got {z}")
    _check_poles(z, p.pole_radius)
    partial, rnd = _integral_partial(z, 1, p.N, p.pole_radius)
    est, bound, raw = _tail(z, 1, p.N)
    if not tail_correction:
        est, bound = 0j, raw
    if bound > p.tol:
        warnings.warn(TailTooLarge(f"tail bound {bound:.3g} exceeds tol {p.tol:g} at z={z}"), stacklevel=2)
    return SeriesSum(partial + est, partial, est, bound + rnd, raw + rnd)


def zeta_direct(z, p: PrecisionParams = PrecisionParams()) -> EvalResult:
    """Dirichlet series to N plus Euler-Maclaurin corrections through B4."""
    z = as_point(z)
    if z.real < DIRECT_MIN_RE:
        raise WrongRegion(f"direct summation needs Re z >= {DIRECT_MIN_RE}, got {z}")
    N = p.N
    x = z.real
    logN = math.log(N)
    npow = lambda w: cmath.exp(-w * logN)  # noqa: E731
    head = complex(kernels.active.dirichlet_sum(z, 1, N))
    corr = (
        N * npow(z) / (z - 1)
        - npow(z) / 2
        + z * npow(z + 1) / 12
        - _rising(z, 3) * npow(z + 3) / 720
    )
    trunc = abs(_rising(z, 4)) / 720 * math.exp(-(x + 3) * logN) / (x + 3)
    rnd = rounding_allowance(z)
    return EvalResult(head + corr, trunc + rnd, Engine.DIRECT, p, {"truncation": trunc, "rounding": rnd})


def zeta_eq1(z, p: PrecisionParams = PrecisionParams()) -> EvalResult:
    """zeta(z) = 1 + 1/(z-1) - z S(z) for Re z > 0."""
    z = as_point(z)
    if z.real <= 0:
        raise WrongRegion(f"EQ1 needs Re z > 0, got {z}")
    _check_poles(z, p.pole_radius)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailTooLarge)
        s = s_sum(z, p)
    value = 1.0 + 1.0 / (z - 1.0) - z * s.value
    trunc = abs(z) * s.tail_bound
    rnd = rounding_allowance(z)
    return EvalResult(value, trunc + rnd, Engine.EQ1, p, {"truncation": trunc, "rounding": rnd, "S": s.value})


def _residue_product(w: complex) -> complex:
    # (w-1) zeta(w) for |w-1| below the exclusion radius
    return 1.0 + EULER_GAMMA * (w - 1.0)


def _levelk(z: complex, K: int, p: PrecisionParams, memo: dict):
    """(value, truncation bound, recursive bound) of the depth-K continuation."""
    if K == 1:
        r = zeta_eq1(z, p)
        return r.value, r.diagnostics["truncation"], 0.0
    value = 1.0 + 1.0 / (z - 1.0)
    recursive = 0.0
    fact = 1.0
    for j in range(1, K):
        fact *= j + 1  # (j+1)!
        w = z + j
        if abs(w - 1.0) < p.pole_radius:
            # (z)_j zeta(w) -> (z)_{j-1} (w-1) zeta(w): the pole cancels
            value -= (_rising(z, j - 1) * _residue_product(w) - _rising(z, j)) / fact
            recursive += abs(_rising(z, j - 1)) * abs(w - 1.0) ** 2 / fact
            continue
        zw, ew = _inner_zeta(w, K - j, p, memo)
        coef = _rising(z, j) / fact
        value -= coef * (zw - 1.0)
        recursive += abs(coef) * ew
    coef = _rising(z, K) / math.factorial(K)
    trunc = 0.0
    if coef != 0:
        partial, rnd = _integral_partial(z, K, p.N, p.pole_radius)
        est, bound, _ = _tail(z, K, p.N)
        value -= coef * (partial + est)
        trunc = abs(coef) * (bound + rnd)
    return value, trunc, recursive


def _inner_zeta(w: complex, depth: int, p: PrecisionParams, memo: dict):
    if w in memo:
        return memo[w]
    if w.real >= DIRECT_MIN_RE:
        r = zeta_direct(w, p)
        out = (r.value, r.err_bound)
    else:
        v, t, rec = _levelk(w, depth, p, memo)
        out = (v, t + rec + rounding_allowance(w))
    memo[w] = out
    return out


def zeta_levelk(z, p: PrecisionParams = PrecisionParams()) -> EvalResult:
    """Depth-K continuation, recursing on zeta(z+j) down to the direct engine."""
    z = as_point(z)
    K = p.K
    if z.real <= 1 - K:
        raise WrongRegion(f"depth {K} continuation needs Re z > {1 - K}, got {z}")
    _check_poles(z, p.pole_radius, zero_too=False)
    value, trunc, recursive = _levelk(z, K, p, {})
    rnd = rounding_allowance(z)
    diag = {"truncation": trunc, "recursive": recursive, "rounding": rnd}
    return EvalResult(value, trunc + recursive + rnd, Engine.LEVELK, p, diag)


ETA_LEVELS = 48


def zeta_eta_oracle(z, p: PrecisionParams = PrecisionParams()) -> EvalResult:
    """zeta(z) = eta(z) / (1 - 2^(1-z)) with eta summed by Euler's transformation.

    The alternating series is summed directly to M ~ 2|z| terms; the partial
    sums that follow are then averaged pairwise ETA_LEVELS times. Only
    ``p.pole_radius`` is consulted from the params.
    """
    z = as_point(z)
    if z.real <= 0:
        raise WrongRegion(f"eta oracle needs Re z > 0, got {z}")
    _check_poles(z, p.pole_radius, zero_too=False)
    den = 1.0 - cmath.exp((1.0 - z) * math.log(2.0))
    if abs(den) <= 1e-3:
        raise EtaDenominatorSmall(f"|1 - 2^(1-z)| = {abs(den):.3g} at z={z}")
    M = max(64, int(2.0 * abs(z)) + 32)
    n = np.arange(1, M + ETA_LEVELS + 1, dtype=np.float64)
    terms = np.exp(-z * np.log(n))
    terms[1::2] *= -1.0
    head = complex(math.fsum(terms[:M].real), math.fsum(terms[:M].imag))
    sums = head + np.concatenate(([0.0], np.cumsum(terms[M:])))
    prev = sums
    while sums.size > 1:
        prev = sums
        sums = 0.5 * (sums[:-1] + sums[1:])
    eta = complex(sums[0])
    accel = abs(prev[0] - prev[-1]) if prev.size > 1 else 0.0
    rnd = rounding_allowance(z)
    err = (accel + rnd) / abs(den)
    return EvalResult(eta / den, err, Engine.ETA_ORACLE, p, {"acceleration": accel, "rounding": rnd, "terms": int(n.size)})


ENGINES = {
    Engine.DIRECT: zeta_direct,
    Engine.EQ1: zeta_eq1,
    Engine.LEVELK: zeta_levelk,
    Engine.ETA_ORACLE: zeta_eta_oracle,
}


def zeta(z, p: PrecisionParams = PrecisionParams()) -> EvalResult:
    """Route z to an engine: DIRECT for Re z >= 1.5, EQ1 or LEVELK below."""
    z = as_point(z)
    if abs(z - 1.0) < p.pole_radius:
        raise PoleProximity(f"|z-1| = {abs(z - 1.0):.3g} < pole_radius {p.pole_radius:g}")
    if z.real >= DIRECT_MIN_RE:
        return zeta_direct(z, p)
    if z.real > 0:
        return zeta_eq1(z, p) if p.K == 1 else zeta_levelk(z, p)
    need = math.ceil(1.0 - z.real) + 1
    if need > MAX_K:
        raise WrongRegion(f"Re z = {z.real:g} needs continuation depth {need} > {MAX_K}")
    return zeta_levelk(z, replace(p, K=max(p.K, need)))


def evaluate(z, p: PrecisionParams = PrecisionParams(), engine=None) -> EvalResult:
    """Dispatcher, or a named engine when ``engine`` is given."""
    if engine is None:
        return zeta(z, p)
    return ENGINES[Engine(engine)](z, p)


def functional_equation_residual(z, p: PrecisionParams = PrecisionParams()) -> float:
    """|zeta(z) - 2 (2 pi)^(z-1) Gamma(1-z) zeta(1-z) sin(pi z / 2)| for -1 < Re z < 1."""
    z = as_point(z)
    if not -1.0 < z.real < 1.0:
        raise WrongRegion(f"functional-equation check needs -1 < Re z < 1, got {z}")
    _check_poles(z, p.pole_radius)
    lhs = zeta(z, p).value
    zr = zeta(1.0 - z, p).value
    log_pref = math.log(2.0) + (z - 1.0) * math.log(2.0 * math.pi) + log_gamma(1.0 - z)
    rhs = cmath.exp(log_pref) * zr * cmath.sin(0.5 * math.pi * z)
    return abs(lhs - rhs)
