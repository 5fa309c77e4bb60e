"""Redheffer, Lagarias and Nyman-Beurling criteria, and principal-character L."""
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import zeta as _zeta
from .errors import AlphaOutOfRange, DimensionTooLarge, SingularGram
from .numerics import as_point, cpow_posbase, integrate_01
from .zeta import EvalResult, PrecisionParams

REDHEFFER_CAP = 2000
LAGARIAS_CAP = 10**7
NB_RIDGE = 1e-12


@dataclass
class CriterionReport:
    criterion: str
    range_tested: tuple
    passed: bool
    margins: dict
    extremal_items: list
    wall_time: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "range_tested": list(self.range_tested),
            "pass": bool(self.passed),
            "margins": self.margins,
            "extremal_items": self.extremal_items,
            "wall_time": self.wall_time,
            **self.details,
        }


# --- Redheffer ---------------------------------------------------------------


def redheffer_matrix(n: int) -> np.ndarray:
    """A(n): entry (i, j) is 1 iff j = 1 or i divides j (1-based)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = np.zeros((n, n), dtype=np.int64)
    a[:, 0] = 1
    for i in range(1, n + 1):
        a[i - 1, i - 1 :: i] = 1
    return a


def _bareiss_exact(rows) -> int:
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            if aik == 0 and p == prev:
                continue
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (p * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = p
    return sign * a[n - 1][n - 1]


def redheffer_det(n: int) -> int:
    """Exact det A(n) by fraction-free elimination.

    Runs in int64 with an overflow guard; on overflow the elimination is
    redone with Python integers.
    """
    if n > REDHEFFER_CAP:
        raise DimensionTooLarge(f"n = {n} exceeds the cap {REDHEFFER_CAP}")
    a = redheffer_matrix(n)
    det, ok = kernels.active.bareiss_det(a.copy())
    if ok:
        return int(det)
    return _bareiss_exact(a.tolist())


def mertens_sieve(n_max: int) -> np.ndarray:
    """M(0..n_max), M(0) = 0."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return np.cumsum(kernels.active.mobius_sieve(n_max), dtype=np.int64)


def redheffer_check(n_max: int) -> CriterionReport:
    """det A(n) against the sieve M(n) for every n <= n_max."""
    t0 = time.perf_counter()
    m = mertens_sieve(n_max)
    bad = []
    for n in range(1, n_max + 1):
        d = redheffer_det(n)
        if d != int(m[n]):
            bad.append({"n": n, "det": d, "mertens": int(m[n])})
    return CriterionReport(
        "redheffer",
        (1, n_max),
        not bad,
        {"mismatches": len(bad)},
        bad[:10],
        time.perf_counter() - t0,
        {"det": redheffer_det(n_max), "mertens": int(m[n_max])},
    )


def redheffer_growth(n_max: int, eps: float) -> CriterionReport:
    """Empirical C(eps) = max |M(n)| / n^(1/2+eps) over n <= n_max.

    Informational: the growth bound is asymptotic. ``C_from_2`` leaves out
    n = 1, where M(1) = 1 pins C >= 1 for every eps.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    t0 = time.perf_counter()
    m = mertens_sieve(n_max)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    ratio = np.abs(m[1:]) / n ** (0.5 + eps)
    i = int(np.argmax(ratio))
    c_tail = float(ratio[1:].max()) if n_max >= 2 else 0.0
    i_tail = int(np.argmax(ratio[1:])) + 2 if n_max >= 2 else None
    return CriterionReport(
        "redheffer_growth",
        (1, n_max),
        True,
        {"C": float(ratio[i]), "C_from_2": c_tail},
        [{"n": i + 1, "M": int(m[i + 1])}] + ([{"n": i_tail, "M": int(m[i_tail])}] if i_tail else []),
        time.perf_counter() - t0,
        {"eps": eps, "max_abs_M": int(np.abs(m[1:]).max())},
    )


# --- Lagarias ------------------------------------------------------------------


def lagarias_margins(n_max: int):
    """(sigma, H, margin) arrays indexed 1..n_max (index 0 unused)."""
    if not 1 <= n_max <= LAGARIAS_CAP:
        raise ValueError(f"n_max must lie in [1, {LAGARIAS_CAP}], got {n_max}")
    k = kernels.active
    sigma = k.sigma_sieve(n_max)
    h = k.harmonic_numbers(n_max)
    margin = np.full(n_max + 1, np.nan)
    hh = h[1:]
    margin[1:] = hh + np.exp(hh) * np.log(hh) - sigma[1:]
    return sigma, h, margin


def lagarias_check(n_max: int) -> CriterionReport:
    t0 = time.perf_counter()
    sigma, h, margin = lagarias_margins(n_max)
    m = margin[1:]
    negative = np.flatnonzero(m < 0) + 1
    # H_n + e^H ln H - sigma(n) is a difference of magnitude ~sigma(n); treat
    # values within rounding of zero as equality
    scale = 8.0 * np.finfo(float).eps * np.maximum(sigma[1:], 1)
    equal = np.flatnonzero(np.abs(m) <= scale) + 1
    order = np.argsort(m, kind="stable")[:10]
    extremal = [{"n": int(i + 1), "sigma": int(sigma[i + 1]), "margin": float(m[i])} for i in order]
    passed = negative.size == 0 and equal.tolist() == [1]
    pos = m[1:]
    j = int(np.argmin(pos)) + 2 if n_max >= 2 else None
    return CriterionReport(
        "lagarias",
        (1, n_max),
        passed,
        {"min": float(m.min()), "min_positive": float(pos.min()) if j else None, "argmin_positive": j},
        extremal,
        time.perf_counter() - t0,
        {"equality_count": int(equal.size), "equality_at": equal[:10].tolist(), "violations": negative[:10].tolist()},
    )


# --- Nyman-Beurling ------------------------------------------------------------


def n_alpha(alpha: float, t):
    """N_alpha(t) = {alpha/t} - alpha {1/t}."""
    t = np.asarray(t, dtype=float)
    u = alpha / t
    v = 1.0 / t
    return (u - np.floor(u)) - alpha * (v - np.floor(v))


def _validate_alphas(alphas):
    a = [float(x) for x in alphas]
    if not a:
        raise AlphaOutOfRange("alpha list is empty")
    for x in a:
        if not 0.0 < x < 1.0:
            raise AlphaOutOfRange(f"alpha = {x} is outside (0, 1)")
    if len(set(a)) != len(a):
        raise AlphaOutOfRange("alphas must be distinct")
    return a


def _breakpoints(alphas, t_min, cap):
    pts = [t_min]
    m = np.arange(1, cap + 1, dtype=float)
    pts.append(1.0 / m)
    for a in alphas:
        mm = np.arange(1, int(math.ceil(a / t_min)) + 1, dtype=float)
        pts.append(a / mm)
    bp = np.unique(np.concatenate([np.atleast_1d(np.asarray(x, dtype=float)) for x in pts]))
    return bp[(bp >= t_min) & (bp < 1.0)]


@dataclass(frozen=True)
class NBFit:
    distance: float
    coefficients: np.ndarray
    gram: np.ndarray
    moments: np.ndarray
    t_min: float
    bias_bound: float


def nyman_beurling_fit(alphas, quad_breakpoint_cap: int = 1000) -> NBFit:
    """Least-squares distance from 1 to span{N_alpha} in L^2(t_min, 1)."""
    a = _validate_alphas(alphas)
    if quad_breakpoint_cap < 2:
        raise ValueError("quad_breakpoint_cap must be >= 2")
    t_min = 1.0 / quad_breakpoint_cap
    bp = _breakpoints(a, t_min, quad_breakpoint_cap)

    def restricted(fn):
        def f(t):
            return np.where(t > t_min, fn(np.maximum(t, t_min)), 0.0)

        return f

    k = len(a)
    gram = np.empty((k, k))
    b = np.empty(k)
    for i in range(k):
        b[i] = integrate_01(restricted(lambda t, ai=a[i]: n_alpha(ai, t)), bp).real
        for j in range(i, k):
            gram[i, j] = gram[j, i] = integrate_01(
                restricted(lambda t, ai=a[i], aj=a[j]: n_alpha(ai, t) * n_alpha(aj, t)), bp
            ).real
    try:
        c = np.linalg.solve(gram + NB_RIDGE * np.eye(k), b)
    except np.linalg.LinAlgError as e:
        raise SingularGram(str(e)) from e
    if not np.all(np.isfinite(c)):
        raise SingularGram("non-finite coefficients")
    d2 = (1.0 - t_min) - float(b @ c)
    # |N_alpha| <= 1 + alpha < 2, so the residual function is bounded by 1 + 2 sum |c|
    bias = t_min * (1.0 + 2.0 * float(np.abs(c).sum())) ** 2
    return NBFit(math.sqrt(max(d2, 0.0)), c, gram, b, t_min, bias)


def nyman_beurling_residual(alphas, quad_breakpoint_cap: int = 1000) -> float:
    return nyman_beurling_fit(alphas, quad_breakpoint_cap).distance


def default_alphas(k: int):
    """The first k of 1/2, 1/3, 1/4, ... (a nested family)."""
    return [1.0 / (j + 2) for j in range(k)]


def nyman_beurling_report(sizes, quad_breakpoint_cap: int = 1000) -> CriterionReport:
    """Distances over the nested sets default_alphas(s) for s in sizes."""
    t0 = time.perf_counter()
    sizes = sorted(set(int(s) for s in sizes))
    fits = [nyman_beurling_fit(default_alphas(s), quad_breakpoint_cap) for s in sizes]
    d = [f.distance for f in fits]
    steps = [d[i] - d[i + 1] for i in range(len(d) - 1)]
    # projections onto nested subspaces; allow for the ridge and quadrature error
    monotone = all(s >= -1e-9 for s in steps)
    passed = monotone and all(x > 0 for x in d)
    return CriterionReport(
        "nyman_beurling",
        (min(sizes), max(sizes)),
        passed,
        {"min_distance": min(d), "min_decrease": min(steps) if steps else None},
        [{"size": s, "distance": f.distance, "bias_bound": f.bias_bound} for s, f in zip(sizes, fits)],
        time.perf_counter() - t0,
        {"t_min": fits[0].t_min},
    )


# --- principal character L-function ---------------------------------------------


def prime_factors(k: int):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def euler_factor(s, k: int) -> complex:
    s = as_point(s)
    f = complex(1.0)
    for q in prime_factors(k):
        f *= 1.0 - cpow_posbase(float(q), -s)
    return f


def l_principal(s, k: int, p: PrecisionParams = PrecisionParams()) -> EvalResult:
    """L(s, chi_1 mod k) = zeta(s) prod_{q | k} (1 - q^-s)."""
    s = as_point(s)
    f = euler_factor(s, k)
    z = _zeta.zeta(s, p)
    err = z.err_bound * abs(f) + 4.0 * np.finfo(float).eps * abs(z.value * f)
    diag = dict(z.diagnostics, primes=prime_factors(k), euler_factor=f)
    return EvalResult(z.value * f, err, z.engine, z.params, diag)


def lfunction_report(s, k: int, p: PrecisionParams = PrecisionParams()) -> CriterionReport:
    """L(s, chi_1) from the dispatcher against the eta oracle (Re s > 0)."""
    t0 = time.perf_counter()
    s = as_point(s)
    main = l_principal(s, k, p)
    details = {"re": s.real, "im": s.imag, "k": k, "L_re": main.value.real, "L_im": main.value.imag,
               "abs_L": abs(main.value), "err_bound": main.err_bound, "engine": main.engine.value}
    margins, passed = {}, True
    if s.real > 0:
        ref = _zeta.zeta_eta_oracle(s, p)
        f = euler_factor(s, k)
        gap = abs(main.value - ref.value * f)
        allow = main.err_bound + ref.err_bound * abs(f) + 1e-12 * max(1.0, abs(main.value))
        margins = {"engine_gap": gap, "allowance": allow}
        passed = gap <= allow
    return CriterionReport("lfunction", (k, k), passed, margins, [], time.perf_counter() - t0, details)
