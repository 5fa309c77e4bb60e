"""Critical-line zeros: grid scan, golden-section refinement, verification.

Scanning uses cheap precision (K = 1, short truncation with the tail
correction, about 1e-11 on the line for y < 100); refinement and
verification use the caller's params.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import zeta as _zeta
from .characterization import characterization_residual
from .errors import NotAZero, VerificationFailed
from .numerics import log_gamma
from .zeta import Engine, PrecisionParams

CANDIDATE_THRESHOLD = 1e-2  # on g = |zeta|^2
RECT_ZERO_THRESHOLD = 1e-3  # on |zeta|
REFINE_WIDTH = 1e-9
REFLECT_THRESHOLD = 1e-3
MAX_SCAN_STEP = 0.25
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def scan_params(p: PrecisionParams) -> PrecisionParams:
    return replace(p, N=min(p.N, 2000), K=1)


def default_threads() -> int:
    env = os.environ.get("CRITLINE_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"CRITLINE_THREADS must be >= 1, got {env!r}")
        return n
    return os.cpu_count() or 1


def pmap(fn, items, threads=1):
    """Ordered map, fanned out over a thread pool when threads > 1."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


@dataclass(frozen=True)
class ZeroRecord:
    y: float
    abs_zeta: float
    char_residual: float
    reflect_residual: float
    iterations: int
    engine: str
    params: PrecisionParams = field(default_factory=PrecisionParams)

    @property
    def rho(self) -> complex:
        return complex(0.5, self.y)


@dataclass(frozen=True)
class ScanReport:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    dx: float
    dy: float
    minima: list  # (x, y, |zeta|)
    off_line_violations: list  # (x, y, |zeta|)
    grid: dict = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "y_min": self.y_min,
            "y_max": self.y_max,
            "dx": self.dx,
            "dy": self.dy,
            "minima": [list(m) for m in self.minima],
            "off_line_violations": [list(m) for m in self.off_line_violations],
        }


def grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """lo, lo+step, ... up to hi inclusive (tolerant of rounding)."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if hi < lo:
        return np.empty(0)
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def line_abs(ys, p: PrecisionParams, threads: int = 1) -> np.ndarray:
    return np.array(pmap(lambda y: abs(_zeta.zeta(complex(0.5, y), p).value), ys, threads))


def scan_line(y_min, y_max, step=0.05, p: PrecisionParams = PrecisionParams(), threshold=CANDIDATE_THRESHOLD, threads=1):
    """Brackets (y-, y0, y+) around local minima of |zeta(1/2+iy)|^2 below threshold."""
    if not 0 <= y_min < y_max:
        raise ValueError(f"need 0 <= y_min < y_max, got {y_min}, {y_max}")
    if not 0 < step <= MAX_SCAN_STEP:
        raise ValueError(f"step must lie in (0, {MAX_SCAN_STEP}], got {step}")
    ys = grid_axis(y_min, y_max, step)
    g = line_abs(ys, scan_params(p), threads) ** 2
    out = []
    for i in range(1, ys.size - 1):
        if g[i] < g[i - 1] and g[i] < g[i + 1] and g[i] < threshold:
            out.append((float(ys[i - 1]), float(ys[i]), float(ys[i + 1])))
    return out


def _line_residuals(y: float, p: PrecisionParams):
    rho = complex(0.5, y)
    c = characterization_residual(rho, p)
    pk = replace(p, K=max(p.K, 2))
    reflect = abs(_zeta.zeta_levelk(1.0 - rho, pk).value)
    return c, reflect


def acceptance_envelope(y: float) -> float:
    rho = complex(0.5, y)
    return max(1.0, abs(rho) / abs(rho - 1.0))


def refine_zero(bracket, p: PrecisionParams = PrecisionParams()) -> ZeroRecord:
    """Golden-section minimisation of |zeta(1/2+iy)|^2 inside the bracket."""
    lo, _, hi = bracket
    if not lo < hi:
        raise ValueError(f"bad bracket {bracket}")

    def g(y):
        r = _zeta.zeta(complex(0.5, y), p)
        return abs(r.value), r.engine

    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c)[0], g(d)[0]
    iterations = 0
    while b - a >= REFINE_WIDTH:
        iterations += 1
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)[0]
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)[0]
    y = c if gc < gd else d
    abs_zeta, engine = g(y)
    limit = math.sqrt(p.tol)
    if abs_zeta >= limit:
        raise NotAZero(f"|zeta(1/2+{y!r}i)| = {abs_zeta:.3g} >= {limit:.3g}")
    char, reflect = _line_residuals(y, p)
    char_res = abs(char.residual)
    if char_res >= 10.0 * limit * acceptance_envelope(y):
        raise NotAZero(f"char_residual {char_res:.3g} too large at y={y!r}")
    return ZeroRecord(y, abs_zeta, char_res, reflect, iterations, Engine(engine).value, p)


def find_zeros(y_min, y_max, step=0.05, p: PrecisionParams = PrecisionParams(), threads=1):
    """Scan and refine; brackets whose minimum is not a zero are dropped."""
    brackets = scan_line(y_min, y_max, step, p, threads=threads)

    def one(br):
        try:
            return refine_zero(br, p)
        except NotAZero:
            return None

    recs = [r for r in pmap(one, brackets, threads) if r is not None]
    return sorted(recs, key=lambda r: r.y)


@dataclass(frozen=True)
class VerifyReport:
    y: float
    passed: bool
    abs_zeta: float
    char_residual: float
    reflect_residual: float
    engine: str
    failing: tuple = ()


def _cross_engine(engine: str) -> Engine:
    # the eta oracle shares no code with the integral-series engines
    return Engine.LEVELK if engine == Engine.ETA_ORACLE.value else Engine.ETA_ORACLE


def verify_record(r: ZeroRecord, p: PrecisionParams = None, strict: bool = True) -> VerifyReport:
    """Recompute a record's residuals with a different engine and check them.

    Raises VerificationFailed naming the first failing quantity when
    ``strict``; otherwise returns a report with ``passed`` false.
    """
    p = p or r.params
    rho = r.rho
    eng = _cross_engine(r.engine)
    pe = replace(p, K=max(p.K, 2))
    abs_zeta = abs(_zeta.evaluate(rho, pe, eng).value)
    char = abs(characterization_residual(rho, p, eng).residual)
    reflect = abs(_zeta.evaluate(1.0 - rho, pe, eng).value)
    limit = math.sqrt(p.tol)
    failing = []
    if not abs_zeta < limit:
        failing.append("abs_zeta")
    if not char < 10.0 * limit * acceptance_envelope(r.y):
        failing.append("char_residual")
    if not reflect < REFLECT_THRESHOLD or not r.reflect_residual < REFLECT_THRESHOLD:
        failing.append("reflect_residual")
    rep = VerifyReport(r.y, not failing, abs_zeta, char, reflect, eng.value, tuple(failing))
    if failing and strict:
        raise VerificationFailed(f"record y={r.y!r} failed on {failing[0]}", quantity=failing[0])
    return rep


def scan_rectangle(
    x_min,
    x_max,
    y_min,
    y_max,
    dx,
    dy,
    p: PrecisionParams = PrecisionParams(),
    threads=1,
    with_residual=False,
    zero_threshold=RECT_ZERO_THRESHOLD,
    candidate_threshold=CANDIDATE_THRESHOLD,
) -> ScanReport:
    """|zeta| on an x-major grid; small values off the line are violations.

    A grid point is flagged when |zeta| < zero_threshold, or when it is a
    strict local minimum of the grid with |zeta|^2 < candidate_threshold.
    Flagged points within dx of Re z = 1/2 are minima; the rest are listed
    in off_line_violations. The caller's params are used as given.
    """
    if not 0 < x_min <= x_max < 1:
        raise ValueError(f"need 0 < x_min <= x_max < 1, got {x_min}, {x_max}")
    xs = grid_axis(x_min, x_max, dx)
    ys = grid_axis(y_min, y_max, dy)
    pts = [complex(x, y) for x in xs for y in ys]

    def one(z):
        if with_residual:
            c = characterization_residual(z, p)
            return abs(c.zeta_value), abs(c.residual)
        return abs(_zeta.zeta(z, p).value), math.nan

    vals = np.array(pmap(one, pts, threads), dtype=float).reshape(xs.size, ys.size, 2)
    a = vals[..., 0]
    flagged = a < zero_threshold
    if a.size:
        pad = np.pad(a, 1, constant_values=np.inf)
        nb = [pad[1 + i : 1 + i + a.shape[0], 1 + j : 1 + j + a.shape[1]] for i in (-1, 0, 1) for j in (-1, 0, 1) if i or j]
        local_min = np.all([a < v for v in nb], axis=0)
        flagged |= local_min & (a * a < candidate_threshold)
    minima, violations = [], []
    for i, j in zip(*np.nonzero(flagged)):
        item = (float(xs[i]), float(ys[j]), float(a[i, j]))
        (minima if abs(xs[i] - 0.5) <= dx + 1e-12 else violations).append(item)
    grid = {"x": xs, "y": ys, "abs_zeta": a, "char_residual": vals[..., 1]}
    return ScanReport(float(x_min), float(x_max), float(y_min), float(y_max), float(dx), float(dy), minima, violations, grid)


# Independent oracle: Hardy's Z on the line from the eta engine, by bisection.


def riemann_siegel_theta(t: float) -> float:
    return log_gamma(complex(0.25, 0.5 * t)).imag - 0.5 * t * math.log(math.pi)


def hardy_z(t: float) -> float:
    """Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t."""
    z = _zeta.zeta_eta_oracle(complex(0.5, t)).value
    w = complex(math.cos(riemann_siegel_theta(t)), math.sin(riemann_siegel_theta(t))) * z
    return w.real


def oracle_zeros(y_min, y_max, step=0.05, tol=1e-10):
    """Ordinates of sign changes of Z on (y_min, y_max], bisected to tol."""
    ys = grid_axis(y_min, y_max, step)
    zs = [hardy_z(y) for y in ys]
    out = []
    for k in range(len(ys) - 1):
        if zs[k] == 0.0:
            out.append(float(ys[k]))
            continue
        if zs[k] * zs[k + 1] < 0:
            a, b, za = float(ys[k]), float(ys[k + 1]), zs[k]
            while b - a > tol:
                m = 0.5 * (a + b)
                zm = hardy_z(m)
                if zm == 0.0:
                    a = b = m
                    break
                if (zm < 0) == (za < 0):
                    a, za = m, zm
                else:
                    b = m
            out.append(0.5 * (a + b))
    return out
