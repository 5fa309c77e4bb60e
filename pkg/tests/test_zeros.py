import math
from dataclasses import replace

import numpy as np
import pytest

from critline import zeta as Z
from critline.errors import NotAZero, VerificationFailed
from critline.zeros import (
    ZeroRecord,
    default_threads,
    find_zeros,
    grid_axis,
    hardy_z,
    oracle_zeros,
    pmap,
    refine_zero,
    riemann_siegel_theta,
    scan_line,
    scan_rectangle,
    verify_record,
)
from critline.zeta import PrecisionParams

# re-derived in-repo: sign changes of Hardy's Z from the eta engine, bisected
ORACLE_BELOW_50 = [
    14.134725141758096,
    21.022039638785646,
    25.010857580183075,
    30.42487612585537,
    32.93506158771925,
    37.586178158829,
    40.91871901215055,
    43.32707328093238,
    48.00515088117682,
    49.773832477675754,
]
CHEAP = PrecisionParams(N=2000, K=1)


@pytest.fixture(scope="module")
def zeros_10_30():
    return find_zeros(10, 30)


def test_grid_axis_inclusive():
    assert grid_axis(0, 1, 0.25).tolist() == [0, 0.25, 0.5, 0.75, 1.0]
    assert grid_axis(2, 50, 0.02).size == 2401
    assert grid_axis(1, 0, 0.1).size == 0
    with pytest.raises(ValueError):
        grid_axis(0, 1, 0)


def test_scan_line_examples():
    assert scan_line(0, 10) == []
    assert scan_line(0, 1, 0.1) == []
    br = scan_line(10, 30)
    assert len(br) == 3
    for (lo, mid, hi), y in zip(br, ORACLE_BELOW_50):
        assert lo < y < hi
        assert lo < mid < hi


@pytest.mark.parametrize("args", [(5, 5), (10, 3), (-1, 10), (0, 10, 0.3), (0, 10, 0.0)])
def test_scan_line_rejects_bad_ranges(args):
    with pytest.raises(ValueError):
        scan_line(*args)


def test_refine_and_oracle_agree(zeros_10_30):
    assert [round(r.y, 6) for r in zeros_10_30] == [14.134725, 21.02204, 25.010858]
    for r, y in zip(zeros_10_30, ORACLE_BELOW_50):
        assert abs(r.y - y) < 1e-8
        assert r.abs_zeta < math.sqrt(r.params.tol)
        assert r.char_residual < 1e-3
        assert r.reflect_residual < 1e-3
        assert r.iterations == 39


def test_refine_rejects_non_zero():
    with pytest.raises(NotAZero):
        refine_zero((4.9, 5.0, 5.1))
    with pytest.raises(ValueError):
        refine_zero((5.0, 5.0, 5.0))


def test_conjugate_zero(zeros_10_30):
    for r in zeros_10_30:
        v = abs(Z.zeta(complex(0.5, -r.y), r.params).value)
        assert abs(v - r.abs_zeta) < 1e-12


def test_verify_record_passes_and_uses_cross_engine(zeros_10_30):
    rep = verify_record(zeros_10_30[0])
    assert rep.passed and rep.failing == ()
    assert rep.engine == "ETA_ORACLE"
    eta_rec = replace(zeros_10_30[0], engine="ETA_ORACLE")
    assert verify_record(eta_rec).engine == "LEVELK"


def test_verify_record_detects_perturbation(zeros_10_30):
    r = zeros_10_30[0]
    bad = replace(r, y=r.y + 1e-3)
    with pytest.raises(VerificationFailed) as ei:
        verify_record(bad)
    assert ei.value.quantity == "abs_zeta"
    assert verify_record(bad, strict=False).failing[0] == "abs_zeta"
    assert verify_record(replace(r, y=r.y + 1e-12)).passed


def test_verify_record_flags_stored_reflect_residual(zeros_10_30):
    bad = replace(zeros_10_30[1], reflect_residual=0.5)
    rep = verify_record(bad, strict=False)
    assert rep.failing == ("reflect_residual",)


def test_oracle_counts():
    ys = oracle_zeros(0, 50)
    assert len([y for y in ys if y < 30]) == 3
    assert len(ys) == 10
    for a, b in zip(ys, ORACLE_BELOW_50):
        assert abs(a - b) < 1e-9


def test_hardy_z_is_real_valued_function():
    # theta is odd and Z is even
    for t in (3.0, 17.5, 40.0):
        assert abs(riemann_siegel_theta(-t) + riemann_siegel_theta(t)) < 1e-12
        assert abs(hardy_z(t) - hardy_z(-t)) < 1e-10
        z = Z.zeta_eta_oracle(complex(0.5, t)).value
        assert abs(abs(hardy_z(t)) - abs(z)) < 1e-10


def test_find_zeros_count_below_50():
    rs = find_zeros(0, 50, p=PrecisionParams(N=20_000, K=6))
    assert len(rs) == 10
    for r, y in zip(rs, ORACLE_BELOW_50):
        assert abs(r.y - y) < 1e-7


def test_rectangle_single_zero():
    rep = scan_rectangle(0.3, 0.7, 13.5, 14.5, 0.05, 0.05, CHEAP)
    assert rep.off_line_violations == []
    assert len(rep.minima) == 1
    x, y, a = rep.minima[0]
    assert x == 0.5 and abs(y - 14.15) < 1e-12
    assert rep.grid["abs_zeta"].shape == (9, 21)


def test_rectangle_without_zero():
    rep = scan_rectangle(0.1, 0.9, 2, 10, 0.1, 0.1, CHEAP)
    assert rep.minima == [] and rep.off_line_violations == []


def test_rectangle_flags_off_line_points():
    # a loose threshold makes the off-line neighbourhood of a zero count
    rep = scan_rectangle(0.3, 0.7, 13.9, 14.3, 0.1, 0.1, CHEAP, zero_threshold=0.5)
    assert rep.off_line_violations
    assert all(abs(x - 0.5) > 0.1 for x, _, _ in rep.off_line_violations)


def test_rectangle_with_residual_column():
    rep = scan_rectangle(0.4, 0.6, 14.0, 14.2, 0.1, 0.1, CHEAP, with_residual=True)
    g = rep.grid
    assert np.all(np.isfinite(g["char_residual"]))
    z = complex(0.5, 14.1)
    want = abs(z - 1) * g["abs_zeta"][1, 1] / abs(z)
    assert abs(g["char_residual"][1, 1] - want) < 1e-8


def test_rectangle_degenerate_is_single_point():
    rep = scan_rectangle(0.5, 0.5, 14.1, 14.1, 0.1, 0.1, CHEAP)
    assert rep.grid["abs_zeta"].shape == (1, 1)


@pytest.mark.parametrize("xr", [(0.0, 0.5), (0.5, 1.0), (0.7, 0.6)])
def test_rectangle_rejects_outside_open_strip(xr):
    with pytest.raises(ValueError):
        scan_rectangle(*xr, 1, 2, 0.1, 0.1, CHEAP)


def test_rectangle_deterministic_and_thread_independent():
    args = (0.2, 0.8, 20.5, 21.5, 0.1, 0.05, CHEAP)
    a = scan_rectangle(*args, threads=1)
    b = scan_rectangle(*args, threads=1)
    c = scan_rectangle(*args, threads=4)
    assert a == b == c
    assert np.array_equal(a.grid["abs_zeta"], c.grid["abs_zeta"])


def test_find_zeros_thread_independent():
    a = find_zeros(10, 22, p=CHEAP, threads=1)
    b = find_zeros(10, 22, p=CHEAP, threads=3)
    assert a == b and len(a) == 2


def test_pmap_preserves_order():
    assert pmap(lambda x: x * x, range(50), threads=4) == [x * x for x in range(50)]


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("CRITLINE_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("CRITLINE_THREADS", "0")
    with pytest.raises(ValueError):
        default_threads()
    monkeypatch.delenv("CRITLINE_THREADS")
    assert default_threads() >= 1


def test_zero_record_rho():
    r = ZeroRecord(14.0, 0.0, 0.0, 0.0, 0, "LEVELK")
    assert r.rho == complex(0.5, 14.0)
