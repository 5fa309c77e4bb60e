"""Zero cache (JSON lines) and grid CSV.

Floats are written with ``repr``, the shortest string that round-trips the
double exactly.
"""
import csv
import json
import os
import tempfile
from pathlib import Path

from .zeros import ZeroRecord
from .zeta import PrecisionParams

CACHE_KEYS = ("y", "abs_zeta", "char_residual", "reflect_residual", "iterations", "engine", "N", "K")
CSV_HEADER = ("x", "y", "abs_zeta", "char_residual")
DEDUP_TOL = 1e-9


def record_to_dict(r: ZeroRecord) -> dict:
    return {
        "y": r.y,
        "abs_zeta": r.abs_zeta,
        "char_residual": r.char_residual,
        "reflect_residual": r.reflect_residual,
        "iterations": r.iterations,
        "engine": r.engine,
        "N": r.params.N,
        "K": r.params.K,
        "pole_radius": r.params.pole_radius,
        "tol": r.params.tol,
    }


def record_to_json(r: ZeroRecord) -> str:
    return json.dumps(record_to_dict(r), separators=(",", ":"))


def record_from_json(line: str) -> ZeroRecord:
    d = json.loads(line)
    missing = [k for k in CACHE_KEYS if k not in d]
    if missing:
        raise ValueError(f"cache record lacks {missing}")
    extra = {k: d[k] for k in ("pole_radius", "tol") if k in d}
    p = PrecisionParams(N=int(d["N"]), K=int(d["K"]), **extra)
    return ZeroRecord(
        float(d["y"]),
        float(d["abs_zeta"]),
        float(d["char_residual"]),
        float(d["reflect_residual"]),
        int(d["iterations"]),
        str(d["engine"]),
        p,
    )


def read_cache(path) -> list:
    path = Path(path)
    if not path.exists():
        return []
    with path.open(encoding="utf-8") as fh:
        return [record_from_json(line) for line in fh if line.strip()]


def merge_records(existing, new, tol=DEDUP_TOL):
    """Sorted union; a new record within tol of a kept one is dropped.

    Returns (merged, appended) where appended lists the new records kept.
    """
    merged = sorted(existing, key=lambda r: r.y)
    appended = []
    for r in sorted(new, key=lambda r: r.y):
        if any(abs(r.y - q.y) <= tol for q in merged):
            continue
        merged.append(r)
        appended.append(r)
    merged.sort(key=lambda r: r.y)
    return merged, appended


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_cache(path, records):
    records = sorted(records, key=lambda r: r.y)
    _atomic_write(Path(path), "".join(record_to_json(r) + "\n" for r in records))


def update_cache(path, new):
    """Merge new records into the cache file; rewrites only if something was added."""
    existing = read_cache(path)
    merged, appended = merge_records(existing, new)
    if appended or not Path(path).exists():
        write_cache(path, merged)
    return merged, appended


def write_grid_csv(path, grid):
    """Rows x-major then y, from a ScanReport grid (None writes the header only)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        if grid is None:
            return
        for i, x in enumerate(grid["x"]):
            for j, y in enumerate(grid["y"]):
                w.writerow([repr(float(x)), repr(float(y)), repr(float(grid["abs_zeta"][i, j])), repr(float(grid["char_residual"][i, j]))])
