"""critline command-line interface.

Exit codes: 0 ok, 2 usage, 3 compute error, 4 verification failure.
"""
import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import criteria, io, zeros
from . import zeta as _zeta
from .errors import CritlineError
from .zeta import Engine, PrecisionParams

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    precision: PrecisionParams
    threads: int
    paths: dict


def _finite(s):
    v = float(s)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"{s!r} is not a finite number")
    return v


def _positive(s):
    v = _finite(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"{s!r} must be positive")
    return v


def _add_precision(sp, N=None, K=None):
    d = PrecisionParams()
    sp.add_argument("--N", type=int, default=N or d.N, help="truncation length")
    sp.add_argument("--K", type=int, default=K or d.K, help="continuation depth")
    sp.add_argument("--tol", type=_positive, default=d.tol)
    sp.add_argument("--pole-radius", type=_positive, default=d.pole_radius)
    sp.add_argument("--threads", type=int, default=None, help="worker threads (CRITLINE_THREADS overrides)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="critline", description="Zeta evaluation, critical-line zeros and RH criteria.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate zeta at one point")
    sp.add_argument("--re", type=_finite, required=True)
    sp.add_argument("--im", type=_finite, required=True)
    sp.add_argument("--engine", choices=[e.value for e in Engine], default=None)
    _add_precision(sp)

    sp = sub.add_parser("zeros", help="find, verify and cache critical-line zeros")
    sp.add_argument("--ymin", type=_finite, required=True)
    sp.add_argument("--ymax", type=_finite, required=True)
    sp.add_argument("--step", type=_positive, default=0.05)
    sp.add_argument("--out", required=True)
    _add_precision(sp)

    sp = sub.add_parser("scan", help="rectangle scan, CSV grid plus JSON report")
    sp.add_argument("--xmin", type=_finite, required=True)
    sp.add_argument("--xmax", type=_finite, required=True)
    sp.add_argument("--ymin", type=_finite, required=True)
    sp.add_argument("--ymax", type=_finite, required=True)
    sp.add_argument("--dx", type=_positive, default=0.02)
    sp.add_argument("--dy", type=_positive, default=0.02)
    sp.add_argument("--out", required=True)
    _add_precision(sp, N=2000, K=1)

    sp = sub.add_parser("verify", help="re-verify cached zeros or the functional equation")
    sp.add_argument("--zeros", dest="zeros_path", default=None)
    sp.add_argument("--grid", action="store_true", help="functional-equation grid mode")
    sp.add_argument("--re-min", type=_finite, default=-0.9)
    sp.add_argument("--re-max", type=_finite, default=0.9)
    sp.add_argument("--im-min", type=_finite, default=1.0)
    sp.add_argument("--im-max", type=_finite, default=30.0)
    sp.add_argument("--n-re", type=int, default=7)
    sp.add_argument("--n-im", type=int, default=7)
    sp.add_argument("--fe-threshold", type=_positive, default=1e-6)
    _add_precision(sp)

    sp = sub.add_parser("criteria", help="RH-equivalent criteria")
    csub = sp.add_subparsers(dest="criterion", required=True)
    c = csub.add_parser("redheffer")
    c.add_argument("--n", type=int, required=True, help="check det A(m) = M(m) for m <= n")
    c.add_argument("--eps", type=_positive, default=None, help="also report the empirical C(eps)")
    c.add_argument("--growth-n", type=int, default=None, help="range of the C(eps) fit (default --n)")
    c = csub.add_parser("lagarias")
    c.add_argument("--max-n", type=int, required=True)
    c = csub.add_parser("nyman-beurling")
    c.add_argument("--alphas", required=True, help="a count k (uses 1/2..1/(k+1)) or a comma list of values")
    c.add_argument("--cap", type=int, default=1000, help="breakpoint cap; t_min = 1/cap")
    c = csub.add_parser("lfunction")
    c.add_argument("--re", type=_finite, required=True)
    c.add_argument("--im", type=_finite, required=True)
    c.add_argument("--k", type=int, required=True)
    _add_precision(c)

    sp = sub.add_parser("report", help="summarise a zero cache")
    sp.add_argument("--zeros", dest="zeros_path", required=True)
    return ap


def _precision(a) -> PrecisionParams:
    try:
        return PrecisionParams(N=a.N, K=a.K, pole_radius=a.pole_radius, tol=a.tol)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _threads(a) -> int:
    try:
        t = zeros.default_threads()
    except ValueError as e:
        raise UsageError(str(e)) from e
    if not os.environ.get("CRITLINE_THREADS") and getattr(a, "threads", None) is not None:
        t = a.threads
    if t < 1:
        raise UsageError(f"thread count must be >= 1, got {t}")
    return t


def _emit(obj, out):
    out.write(json.dumps(obj, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def cmd_eval(a, out):
    p = _precision(a)
    r = _zeta.evaluate(complex(a.re, a.im), p, a.engine)
    _emit({"re": a.re, "im": a.im, "zeta_re": r.value.real, "zeta_im": r.value.imag, "err_bound": r.err_bound,
           "engine": r.engine.value, "N": r.params.N, "K": r.params.K}, out)
    return EXIT_OK


def cmd_zeros(a, out):
    p = _precision(a)
    if not a.ymin < a.ymax:
        raise UsageError("--ymin must be below --ymax")
    if a.ymin < 0:
        raise UsageError("--ymin must be >= 0")
    if a.step > zeros.MAX_SCAN_STEP:
        raise UsageError(f"--step must be <= {zeros.MAX_SCAN_STEP}")
    cfg = RunConfig("zeros", p, _threads(a), {"out": Path(a.out)})
    found = zeros.find_zeros(a.ymin, a.ymax, a.step, p, cfg.threads)
    reports = zeros.pmap(lambda r: zeros.verify_record(r, p, strict=False), found, cfg.threads)
    good = [r for r, v in zip(found, reports) if v.passed]
    _, appended = io.update_cache(cfg.paths["out"], good)
    for v in reports:
        if not v.passed:
            sys.stderr.write(f"VERIFICATION_FAILED y={v.y!r} on {','.join(v.failing)}\n")
    out.write(f"found={len(found)} verified={len(good)} appended={len(appended)} range=[{a.ymin:g},{a.ymax:g}]\n")
    return EXIT_OK if len(good) == len(found) else EXIT_VERIFY


def cmd_scan(a, out):
    p = _precision(a)
    if not 0 < a.xmin <= a.xmax < 1:
        raise UsageError("need 0 < xmin <= xmax < 1")
    if a.ymax < a.ymin:
        raise UsageError("--ymin must not exceed --ymax")
    cfg = RunConfig("scan", p, _threads(a), {"out": Path(a.out)})
    if a.xmin == a.xmax or a.ymin == a.ymax:
        # a zero-area rectangle has no grid
        io.write_grid_csv(cfg.paths["out"], None)
        rep = zeros.ScanReport(a.xmin, a.xmax, a.ymin, a.ymax, a.dx, a.dy, [], [])
    else:
        rep = zeros.scan_rectangle(a.xmin, a.xmax, a.ymin, a.ymax, a.dx, a.dy, p, cfg.threads, with_residual=True)
        io.write_grid_csv(cfg.paths["out"], rep.grid)
    d = rep.to_dict()
    if not d["off_line_violations"]:
        del d["off_line_violations"]
    _emit(d, out)
    return EXIT_OK


def cmd_verify(a, out):
    if a.zeros_path is None and not a.grid:
        raise UsageError("give --zeros PATH and/or --grid")
    p = _precision(a)
    threads = _threads(a)
    failed = []
    if a.zeros_path is not None:
        path = Path(a.zeros_path)
        if not path.exists():
            raise UsageError(f"no such cache: {path}")
        recs = io.read_cache(path)
        reps = zeros.pmap(lambda r: zeros.verify_record(r, strict=False), recs, threads)
        for v in reps:
            out.write(f"zero y={v.y!r} abs_zeta={v.abs_zeta:.3e} char_residual={v.char_residual:.3e} "
                      f"reflect_residual={v.reflect_residual:.3e} {'ok' if v.passed else 'FAIL ' + ','.join(v.failing)}\n")
            if not v.passed:
                failed.append(f"y={v.y!r}")
    if a.grid:
        if not -1 < a.re_min <= a.re_max < 1:
            raise UsageError("need -1 < re-min <= re-max < 1")
        pts = [complex(x, y) for x in np.linspace(a.re_min, a.re_max, a.n_re) for y in np.linspace(a.im_min, a.im_max, a.n_im)]
        res = zeros.pmap(lambda z: _zeta.functional_equation_residual(z, p), pts, threads)
        for z, r in zip(pts, res):
            ok = r < a.fe_threshold
            out.write(f"fe z={z.real:.6g}{z.imag:+.6g}i residual={r:.3e} {'ok' if ok else 'FAIL'}\n")
            if not ok:
                failed.append(f"z={z}")
        out.write(f"fe max_residual={max(res):.3e}\n")
    if failed:
        out.write("FAIL " + " ".join(failed) + "\n")
        return EXIT_VERIFY
    out.write("PASS\n")
    return EXIT_OK


def _parse_alphas(s):
    s = s.strip()
    if "," not in s and s.isdigit():
        return criteria.default_alphas(int(s))
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError as e:
        raise UsageError(f"bad --alphas {s!r}") from e


def cmd_criteria(a, out):
    if a.criterion == "redheffer":
        if a.n < 1:
            raise UsageError("--n must be >= 1")
        rep = criteria.redheffer_check(a.n)
        d = rep.to_dict()
        if a.eps is not None:
            d["growth"] = criteria.redheffer_growth(a.growth_n or a.n, a.eps).to_dict()
    elif a.criterion == "lagarias":
        if not 1 <= a.max_n <= criteria.LAGARIAS_CAP:
            raise UsageError(f"--max-n must lie in [1, {criteria.LAGARIAS_CAP}]")
        rep = criteria.lagarias_check(a.max_n)
        d = rep.to_dict()
    elif a.criterion == "nyman-beurling":
        alphas = _parse_alphas(a.alphas)
        fit = criteria.nyman_beurling_fit(alphas, a.cap)
        rep = criteria.CriterionReport("nyman_beurling", (len(alphas), len(alphas)), fit.distance > 0,
                                       {"distance": fit.distance}, [], 0.0,
                                       {"alphas": alphas, "t_min": fit.t_min, "bias_bound": fit.bias_bound,
                                        "coefficients": fit.coefficients})
        d = rep.to_dict()
    else:
        if a.k < 1:
            raise UsageError("--k must be >= 1")
        rep = criteria.lfunction_report(complex(a.re, a.im), a.k, _precision(a))
        d = rep.to_dict()
    _emit(d, out)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_report(a, out):
    path = Path(a.zeros_path)
    if not path.exists():
        raise UsageError(f"no such cache: {path}")
    recs = io.read_cache(path)
    ys = [r.y for r in recs]
    _emit({"count": len(recs), "y_min": min(ys, default=None), "y_max": max(ys, default=None),
           "max_abs_zeta": max((r.abs_zeta for r in recs), default=None),
           "max_char_residual": max((r.char_residual for r in recs), default=None),
           "max_reflect_residual": max((r.reflect_residual for r in recs), default=None),
           "ordinates": ys}, out)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "zeros": cmd_zeros, "scan": cmd_scan, "verify": cmd_verify,
            "criteria": cmd_criteria, "report": cmd_report}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return COMMANDS[a.command](a, out)
    except UsageError as e:
        sys.stderr.write(f"critline {a.command}: error: {e}\n")
        return EXIT_USAGE
    except CritlineError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_COMPUTE
    except (ValueError, OverflowError, ZeroDivisionError, FloatingPointError) as e:
        sys.stderr.write(f"COMPUTE_ERROR: {e}\n")
        return EXIT_COMPUTE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
