"""Zero characterization through the integral series S(z).

The continuation formula rearranges to
R(z) := (z-1) S(z) - 1 = -(z-1) zeta(z) / z, so R and zeta vanish together
away from z = 0, 1. The functions here compute R from S directly and compare
it with zeta from the dispatcher; the comparison is the package's main
self-consistency check.
"""
import warnings
from dataclasses import dataclass
from numbers import Number

from . import zeta as _zeta
from .errors import TailTooLarge
from .numerics import as_point
from .zeta import PrecisionParams, integral_term, s_sum


@dataclass(frozen=True)
class CharacterizationResult:
    z: complex
    s_value: complex
    residual: complex
    zeta_value: complex
    identity_gap: float
    gap_bound: float  # combined engine error bounds, scaled onto the gap


def characterization_residual(z, p: PrecisionParams = PrecisionParams(), engine=None) -> CharacterizationResult:
    z = as_point(z)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailTooLarge)
        s = s_sum(z, p)
    residual = (z - 1.0) * s.value - 1.0
    zr = _zeta.evaluate(z, p, engine)
    gap = abs(residual + (z - 1.0) * zr.value / z)
    bound = abs(z - 1.0) * (s.tail_bound + _zeta.rounding_allowance(z)) + abs(z - 1.0) / abs(z) * zr.err_bound
    return CharacterizationResult(z, s.value, residual, zr.value, gap, bound)


@dataclass(frozen=True)
class Lemma1Report:
    z: complex
    antecedent_gap: float  # |z S(z) - 1|
    antecedent: bool
    conclusion_gap: float  # |(z-1) zeta(z) - 1|
    conclusion_tol: float
    holds: bool


def lemma1_check(z, p: PrecisionParams = PrecisionParams()) -> Lemma1Report:
    """Check z S(z) = 1  =>  (z-1) zeta(z) = 1 at one point.

    The antecedent is taken as true when |z S - 1| < p.tol; the conclusion is
    then required to hold to the same tolerance scaled by |z-1|, plus the
    engine error bound. A false antecedent makes the implication hold.
    """
    c = characterization_residual(z, p)
    z = c.z
    ante_gap = abs(z * c.s_value - 1.0)
    antecedent = ante_gap < p.tol
    concl_gap = abs((z - 1.0) * c.zeta_value - 1.0)
    concl_tol = abs(z - 1.0) * (p.tol + c.gap_bound + c.identity_gap)
    holds = (not antecedent) or concl_gap < concl_tol
    return Lemma1Report(z, ante_gap, antecedent, concl_gap, concl_tol, holds)


def lemma2_alpha(z) -> complex:
    """The unique alpha with alpha z (z-1) = 1."""
    z = as_point(z)
    if z == 0 or z == 1:
        raise ValueError(f"alpha is undefined at z = {z}")
    return 1.0 / (z * (z - 1.0))


def critical_line_indicator(x, y=None):
    """Im(z (z-1)) = y (2x - 1).

    Pass a complex z, or the real and imaginary parts separately; exact
    number types such as Fraction give an exact result.
    """
    if y is None:
        z = as_point(x)
        x, y = z.real, z.imag
    if not isinstance(x, Number) or not isinstance(y, Number):
        raise TypeError("x and y must be numbers")
    if y == 0:
        raise ValueError("the indicator needs Im z != 0")
    return y * (2 * x - 1)


def approx_quality(n: int, z, pole_radius: float = 1e-6):
    """How well 1/(n(n+1)) approximates int_0^1 t dt/(n+t)^(z+1).

    Returns (|I_n(z) - 1/(n(n+1))|, |I_n(z)| n (n+1)).
    """
    z = as_point(z)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val = integral_term(n, z, 1, pole_radius)
    ref = 1.0 / (n * (n + 1.0))
    return abs(val - ref), abs(val) * n * (n + 1.0)
