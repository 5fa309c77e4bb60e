"""Scalar building blocks shared by every engine.

Points of the complex plane are plain Python ``complex`` values; ``as_point``
is the single gate that rejects NaN and infinities.
"""
import cmath
import enum
import math
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import NoConvergence, PoleOfGamma

ComplexPoint = complex

LOG_2PI = math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)


def as_point(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite point {z!r}")
    return z


def point(re: float, im: float = 0.0) -> complex:
    return as_point(complex(re, im))


def on_line(y: float) -> complex:
    """The point 1/2 + iy of the critical line."""
    return point(0.5, y)


class RegionLabel(enum.Enum):
    CRITICAL_LINE = "CRITICAL_LINE"
    B1 = "B1"
    B2 = "B2"
    CLOSED_STRIP_BOUNDARY = "CLOSED_STRIP_BOUNDARY"
    OUTSIDE_STRIP = "OUTSIDE_STRIP"
    POLE = "POLE"
    ZERO_POINT = "ZERO_POINT"


def classify_region(z) -> RegionLabel:
    """Label a point by exact comparison of its real part.

    Callers wanting a tolerance around the critical line apply it themselves.
    """
    z = as_point(z)
    x = z.real
    if z == 1:
        return RegionLabel.POLE
    if z == 0:
        return RegionLabel.ZERO_POINT
    if x == 0.5:
        return RegionLabel.CRITICAL_LINE
    if 0.0 < x < 0.5:
        return RegionLabel.B1
    if 0.5 < x < 1.0:
        return RegionLabel.B2
    if x == 0.0 or x == 1.0:
        return RegionLabel.CLOSED_STRIP_BOUNDARY
    return RegionLabel.OUTSIDE_STRIP


def cpow_posbase(b: float, z) -> complex:
    """b**z = exp(z log b) for real b > 0, using the real logarithm of b."""
    if not b > 0:
        raise ValueError(f"base must be positive, got {b!r}")
    z = as_point(z)
    lb = math.log(b)
    mag = math.exp(z.real * lb)
    ang = z.imag * lb
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def kahan_sum(terms: Iterable) -> complex:
    """Compensated sum of complex terms."""
    arr = np.asarray(list(terms) if not isinstance(terms, np.ndarray) else terms, dtype=np.complex128)
    if arr.size == 0:
        return 0j
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite term in sum")
    return complex(kernels.active.neumaier_sum(arr.ravel()))


# Lanczos approximation, g = 7, 9 coefficients (~1e-15 relative for Re z >= 1/2).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _log_gamma_lanczos(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        x += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _log_sin_pi(z: complex) -> complex:
    # some logarithm of sin(pi z); the caller fixes the branch
    w = math.pi * z
    if abs(w.imag) < 30.0:
        return cmath.log(cmath.sin(w))
    if w.imag > 0:
        # sin w = (i/2) e^{-iw} (1 - e^{2iw})
        return cmath.log(0.5j) - 1j * w + cmath.log(1.0 - cmath.exp(2j * w))
    return cmath.log(-0.5j) + 1j * w + cmath.log(1.0 - cmath.exp(-2j * w))


def log_gamma(z) -> complex:
    """log Gamma(z) on the branch that is real on the positive axis.

    Lanczos for Re z >= 1/2, the reflection formula below that. The reflected
    value's imaginary part is moved onto the analytic branch by comparing it
    with the phase accumulated along the upward recurrence.
    """
    z = as_point(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleOfGamma(f"Gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _log_gamma_lanczos(z)
    val = LOG_PI - _log_sin_pi(z) - _log_gamma_lanczos(1.0 - z)
    m = math.ceil(0.5 - z.real)
    phase = _log_gamma_lanczos(z + m).imag - sum(cmath.phase(z + k) for k in range(m))
    turns = round((phase - val.imag) / (2.0 * math.pi))
    return complex(val.real, val.imag + 2.0 * math.pi * turns)


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


_GL_LOW = np.polynomial.legendre.leggauss(10)
_GL_HIGH = np.polynomial.legendre.leggauss(20)
QUAD_TOL = 1e-13
QUAD_MAX_DEPTH = 40


def _gl_panels(f, a, b, rule):
    x, w = rule
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = mid[:, None] + half[:, None] * x[None, :]
    vals = np.broadcast_to(np.asarray(f(t.ravel())), (t.size,)).reshape(t.shape)
    return half * (vals @ w)


def integrate_01(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float] = (),
    tol: float = QUAD_TOL,
    max_depth: int = QUAD_MAX_DEPTH,
) -> complex:
    """Integral of f over (0, 1) by adaptive Gauss-Legendre panels.

    ``f`` must accept a 1-d array of abscissae. Panels start at the supplied
    breakpoints (discontinuities of f); each is accepted when its 10- and
    20-point rules agree to its share of ``tol`` and bisected otherwise.
    """
    edges = np.unique(np.concatenate(([0.0], np.asarray(breakpoints, dtype=float), [1.0])))
    edges = edges[(edges >= 0.0) & (edges <= 1.0)]
    a, b = edges[:-1], edges[1:]
    depth = 0
    accepted_re = []
    accepted_im = []
    while a.size:
        hi = _gl_panels(f, a, b, _GL_HIGH)
        lo = _gl_panels(f, a, b, _GL_LOW)
        err = np.abs(hi - lo)
        ok = err <= np.maximum(tol * (b - a), 64 * np.finfo(float).eps * np.abs(hi))
        accepted_re.extend(np.real(hi[ok]).tolist())
        accepted_im.extend(np.imag(hi[ok]).tolist())
        if ok.all():
            break
        depth += 1
        if depth > max_depth:
            raise NoConvergence(f"quadrature did not converge within {max_depth} bisections")
        a, b = a[~ok], b[~ok]
        m = 0.5 * (a + b)
        a, b = np.concatenate((a, m)), np.concatenate((m, b))
    re = math.fsum(accepted_re)
    im = math.fsum(accepted_im)
    return complex(re, im)
