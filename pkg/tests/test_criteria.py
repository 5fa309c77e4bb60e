import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critline import kernels
from critline.criteria import (
    LAGARIAS_CAP,
    REDHEFFER_CAP,
    _bareiss_exact,
    default_alphas,
    euler_factor,
    l_principal,
    lagarias_check,
    lagarias_margins,
    lfunction_report,
    mertens_sieve,
    n_alpha,
    nyman_beurling_fit,
    nyman_beurling_report,
    nyman_beurling_residual,
    prime_factors,
    redheffer_check,
    redheffer_det,
    redheffer_growth,
    redheffer_matrix,
)
from critline.errors import AlphaOutOfRange, DimensionTooLarge

MERTENS_1_12 = [1, 0, -1, -1, -2, -1, -2, -2, -2, -1, -2, -2]


def naive_mertens(n):
    def mu(k):
        out, d = 1, 2
        while d * d <= k:
            if k % d == 0:
                k //= d
                if k % d == 0:
                    return 0
                out = -out
            d += 1
        return -out if k > 1 else out

    return sum(mu(k) for k in range(1, n + 1))


def test_redheffer_matrix_small():
    a = redheffer_matrix(4)
    assert a.tolist() == [[1, 1, 1, 1], [1, 1, 0, 1], [1, 0, 1, 0], [1, 0, 0, 1]]
    with pytest.raises(ValueError):
        redheffer_matrix(0)


def test_redheffer_det_examples(backend):
    assert [redheffer_det(n) for n in range(1, 13)] == MERTENS_1_12


def test_redheffer_det_matches_fraction_elimination():
    a = redheffer_matrix(9).tolist()
    m = [[Fraction(v) for v in row] for row in a]
    det = Fraction(1)
    for k in range(9):
        piv = next(i for i in range(k, 9) if m[i][k] != 0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, 9):
            f = m[i][k] / m[k][k]
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    assert det == redheffer_det(9) == _bareiss_exact(a)


def test_redheffer_det_cap():
    with pytest.raises(DimensionTooLarge):
        redheffer_det(REDHEFFER_CAP + 1)


def test_mertens_sieve_values(backend):
    m = mertens_sieve(10_000)
    assert m[0] == 0
    assert m[1:13].tolist() == MERTENS_1_12
    assert (int(m[100]), int(m[1000]), int(m[10_000])) == (1, 2, -23)
    for n in (37, 250, 999):
        assert m[n] == naive_mertens(n)


def test_redheffer_check_small(backend):
    rep = redheffer_check(60)
    assert rep.passed and rep.margins["mismatches"] == 0
    d = rep.to_dict()
    assert d["det"] == d["mertens"] == naive_mertens(60)


def test_redheffer_growth():
    rep = redheffer_growth(10_000, 0.25)
    assert rep.margins["C"] == 1.0  # M(1) = 1 fixes C >= 1
    assert abs(rep.margins["C_from_2"] - 0.5981395124884882) < 1e-12
    assert rep.details["max_abs_M"] == 43
    with pytest.raises(ValueError):
        redheffer_growth(10, 0)


def test_lagarias_margins_examples(backend):
    _, h, m = lagarias_margins(12)
    assert h[1] == 1.0
    assert m[1] == 0.0
    assert abs(m[2] - 0.31716854341180234) < 1e-12
    assert abs(m[6] - 0.8341787195062587) < 1e-12
    assert abs(m[12] - 0.321837259645406) < 1e-12


def test_lagarias_check(backend):
    rep = lagarias_check(10_000)
    assert rep.passed
    assert rep.details["equality_at"] == [1]
    assert rep.margins["argmin_positive"] == 2
    assert [e["n"] for e in rep.extremal_items[:4]] == [1, 2, 12, 6]


@pytest.mark.parametrize("n", [0, LAGARIAS_CAP + 1])
def test_lagarias_range(n):
    with pytest.raises(ValueError):
        lagarias_margins(n)


def test_n_alpha_examples():
    assert n_alpha(0.5, [0.3, 0.7, 0.2, 1.0]).tolist() == pytest.approx([0.5, 0.5, 0.5, 0.5], abs=1e-15)
    assert abs(n_alpha(0.5, 0.4)) < 1e-15
    assert abs(n_alpha(1 / 3, 0.6) - (5 / 9 - 2 / 3 / 3)) < 1e-15


@settings(max_examples=300)
@given(st.floats(0.01, 0.99), st.floats(1e-3, 1.0))
def test_n_alpha_bounded(a, t):
    v = float(n_alpha(a, t))
    assert -a - 1e-12 <= v < 1.0 + 1e-12


def test_n_alpha_piecewise_reconstruction():
    # the 1/t parts cancel, so N_alpha is constant between breakpoints and the
    # moments of a single alpha are finite sums
    a, t_min = 0.5, 1e-2
    fit = nyman_beurling_fit([a], quad_breakpoint_cap=100)
    bp = sorted({t_min, 1.0} | {1 / m for m in range(1, 101)} | {a / m for m in range(1, 51)})
    bp = [b for b in bp if t_min <= b <= 1.0]
    exact_b, exact_g = 0.0, 0.0
    for lo, hi in zip(bp, bp[1:]):
        mid = 0.5 * (lo + hi)
        k1, k2 = math.floor(a / mid), math.floor(1 / mid)
        c = -k1 + a * k2
        exact_b += c * (hi - lo)
        exact_g += c * c * (hi - lo)
    assert abs(fit.moments[0] - exact_b) < 1e-12
    assert abs(fit.gram[0, 0] - exact_g) < 1e-12


def test_nyman_beurling_single_alpha():
    f = nyman_beurling_fit([0.5])
    assert abs(f.distance - 0.5534912550747119) < 1e-9
    assert f.coefficients.shape == (1,)
    assert f.bias_bound > 0


def test_nyman_beurling_monotone_nested():
    rep = nyman_beurling_report([1, 2, 4, 8, 16])
    d = [e["distance"] for e in rep.extremal_items]
    assert rep.passed
    assert all(x > 0 for x in d)
    assert all(x >= y - 1e-9 for x, y in zip(d, d[1:]))
    assert d[0] > d[-1]


@pytest.mark.parametrize("alphas", [[], [0.0], [1.0], [0.5, 0.5], [-0.2]])
def test_nyman_beurling_bad_alphas(alphas):
    with pytest.raises(AlphaOutOfRange):
        nyman_beurling_residual(alphas)


def test_default_alphas_nested():
    assert default_alphas(3) == [0.5, 1 / 3, 0.25]
    assert default_alphas(8)[:4] == default_alphas(4)


def test_prime_factors():
    assert prime_factors(1) == []
    assert prime_factors(12) == [2, 3]
    assert prime_factors(97) == [97]
    with pytest.raises(ValueError):
        prime_factors(0)


def test_l_principal_examples():
    assert abs(l_principal(2, 1).value - math.pi**2 / 6) < 1e-12
    assert abs(l_principal(2, 2).value - math.pi**2 / 8) < 1e-12
    assert abs(l_principal(2, 6).value - math.pi**2 / 9) < 1e-12
    assert abs(euler_factor(1j, 1) - 1) == 0


@pytest.mark.parametrize("k", [3, 4, 10])
def test_l_principal_vanishes_at_zeta_zeros(k):
    r = l_principal(complex(0.5, 14.134725141758096), k)
    assert abs(r.value) < 1e-9


def test_lfunction_report_against_eta():
    rep = lfunction_report(complex(0.3, 5), 12)
    assert rep.passed
    assert rep.margins["engine_gap"] <= rep.margins["allowance"]
    assert abs(rep.details["abs_L"] - 0.9175703824977388) < 1e-10


def test_kernel_backends_agree_on_sieves():
    if kernels.NUMBA is None:
        pytest.skip("numba unavailable")
    n = 5000
    for name in ("mobius_sieve", "sigma_sieve"):
        assert np.array_equal(getattr(kernels.NUMBA, name)(n), getattr(kernels.NUMPY, name)(n))
