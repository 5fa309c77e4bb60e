import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critline.characterization import (
    approx_quality,
    characterization_residual,
    critical_line_indicator,
    lemma1_check,
    lemma2_alpha,
)
from critline.zeta import Engine, PrecisionParams

RHO1 = complex(0.5, 14.134725141758096)
# a solution of z S(z) = 1 for the default params, found by Newton's method
ANTECEDENT_POINT = complex(0.47940300622351717, 14.047516382821584)

# int_0^1 t dt / (n + t)^(z + 1), arbitrary-precision reference, frozen
I_REF = {
    (1, 1 + 0j): 0.19314718055994531,
    (10, 0.5 + 0j): 0.014365831592554824,
    (100, 0.5 + 14j): -8.010022746275028e-05 - 0.00048825285494467387j,
    (1000, 0.5 + 14j): -1.2366430509200698e-05 - 9.826973096937144e-06j,
    (10_000, 0.5 + 14j): -4.950305407500545e-07 + 6.99624449061541e-08j,
}


def test_residual_at_two():
    c = characterization_residual(2)
    assert abs(c.residual + math.pi**2 / 12) < 1e-10
    assert c.identity_gap < 1e-10


def test_residual_at_two_against_independent_engine():
    c = characterization_residual(2, engine=Engine.DIRECT)
    assert c.identity_gap < 1e-10


def test_residual_at_half():
    c = characterization_residual(0.5)
    assert abs(abs(c.residual) - 1.4603545088095868) < 1e-9


def test_residual_vanishes_at_first_zero():
    c = characterization_residual(RHO1, PrecisionParams(N=10**6))
    assert abs(c.residual) < 1e-3
    assert abs(c.zeta_value) < 1e-8


@pytest.mark.parametrize("x", np.linspace(0.05, 0.95, 7))
@pytest.mark.parametrize("y", [-20.0, -3.0, 0.7, 9.0, 33.0])
def test_identity_gap_against_eta(x, y):
    c = characterization_residual(complex(x, y), engine=Engine.ETA_ORACLE)
    assert c.identity_gap < 1e-8
    assert c.identity_gap <= c.gap_bound + 1e-12


def test_lemma1_false_antecedent_holds_vacuously():
    rep = lemma1_check(2)
    assert not rep.antecedent and rep.holds
    assert abs(rep.antecedent_gap - (math.pi**2 / 6 - 1)) < 1e-9


def test_lemma1_true_antecedent():
    rep = lemma1_check(ANTECEDENT_POINT)
    assert rep.antecedent
    assert rep.holds
    assert rep.conclusion_gap < 1e-10


def test_zeros_violate_the_lemma1_antecedent():
    # at a zero z S = z / (z - 1), so |z S - 1| = 1 / |z - 1|
    for y in (14.134725141758096, 21.022039638785646, 25.010857580183075):
        z = complex(0.5, y)
        rep = lemma1_check(z)
        assert not rep.antecedent
        assert rep.antecedent_gap > 1 / abs(z - 1) - 1e-6
        assert rep.antecedent_gap > 0.03


def test_lemma2_examples():
    assert lemma2_alpha(2) == 0.5
    assert abs(lemma2_alpha(0.5 + 1j) - 1 / (-1.25)) < 1e-16
    for bad in (0, 1):
        with pytest.raises(ValueError):
            lemma2_alpha(bad)


def test_lemma2_defining_relation_random():
    rng = np.random.default_rng(11)
    for x, y in rng.uniform(-5, 5, size=(1000, 2)):
        z = complex(x, y)
        a = lemma2_alpha(z)
        assert abs(a * z * (z - 1) - 1) < 1e-14


@settings(max_examples=300)
@given(st.floats(1e-3, 1e3))
def test_lemma2_alpha_real_on_line(y):
    z = complex(0.5, y)
    a = lemma2_alpha(z)
    assert abs(a.imag) <= 1e-14 * abs(a)


@settings(max_examples=300)
@given(st.floats(0.01, 0.99).filter(lambda x: abs(x - 0.5) > 1e-6), st.floats(0.1, 100))
def test_lemma2_alpha_not_real_off_line(x, y):
    a = lemma2_alpha(complex(x, y))
    assert abs(a.imag) > 1e-14 * abs(a)


def test_indicator_examples():
    assert critical_line_indicator(0.5 + 3j) == 0
    assert critical_line_indicator(0.25 + 2j) == -1.0
    assert critical_line_indicator(0.75, -2.0) == -1.0
    z = 0.3 + 4j
    assert abs(critical_line_indicator(z) - (z * (z - 1)).imag) < 1e-14
    with pytest.raises(ValueError):
        critical_line_indicator(0.5 + 0j)
    with pytest.raises(TypeError):
        critical_line_indicator("0.5", 1)


@settings(max_examples=1000)
@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=10**6),
    st.fractions(min_value=-50, max_value=50, max_denominator=10**6).filter(lambda f: f != 0),
)
def test_indicator_exact_on_rationals(x, y):
    v = critical_line_indicator(x, y)
    assert isinstance(v, Fraction)
    assert (v == 0) == (x == Fraction(1, 2))
    assert v == (complex_frac_mul(x, y)[1])


def complex_frac_mul(x, y):
    # z (z - 1) with z = x + iy in exact arithmetic
    re = x * (x - 1) - y * y
    im = y * (x - 1) + x * y
    return re, im


@pytest.mark.parametrize("key", list(I_REF), ids=str)
def test_approx_quality_against_reference(key):
    n, z = key
    ref = I_REF[key]
    diff, ratio = approx_quality(n, z)
    want = abs(ref - 1 / (n * (n + 1)))
    assert abs(diff - want) <= 1e-10 * want + 1e-18
    assert abs(ratio - abs(ref) * n * (n + 1)) <= 1e-10 * ratio


def test_approx_quality_ratio_bounded_on_real_axis():
    # for real z, I_n ~ n^-(z+1) / 2, so the ratio is n^(1-z) / 2: bounded at z = 1
    for n in (100, 10**4):
        _, r = approx_quality(n, 1.0)
        assert abs(r - 0.5) < 1 / n


def test_approx_quality_ratio_grows_like_sqrt_n():
    ratios = [approx_quality(n, 0.5 + 14j)[1] for n in (100, 1000, 10_000)]
    for n, r in zip((100, 1000, 10_000), ratios):
        assert 0.5 <= r / (0.5 * math.sqrt(n)) <= 2.0
    assert ratios[0] < ratios[1] < ratios[2]

