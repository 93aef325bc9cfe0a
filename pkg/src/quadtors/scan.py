"""Sweeps of y^2 = x^3 + a over ranges of quadratic fields."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from .arith import QuadField, squarefree_kernel
from .curve import Curve
from .errors import InputError, QuadtorsError
from .torsion import classify_family, torsion_subgroup

COLUMNS = ("a", "d", "n1", "n2", "group_label", "shortlist_ok", "elapsed_ms", "error")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ScanConfig:
    a_values: tuple[int, ...]
    d_min: int
    d_max: int
    parallelism: int = 1
    output: Optional[str] = None
    fmt: str = "csv"
    timing: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a_values", tuple(sorted(set(self.a_values))))
        if not self.a_values:
            raise InputError("a_values must be nonempty")
        if self.d_min > self.d_max:
            raise InputError(f"d_min {self.d_min} exceeds d_max {self.d_max}")
        if self.parallelism < 1:
            raise InputError("parallelism must be positive")
        if self.fmt not in FORMATS:
            raise InputError(f"unknown format {self.fmt!r}; expected csv or json")

    def fields(self) -> list[int]:
        return [d for d in range(self.d_min, self.d_max + 1) if is_field_seed(d)]


@dataclass(frozen=True)
class ScanRecord:
    a: int
    d: int
    n1: Optional[int] = None
    n2: Optional[int] = None
    group_label: str = ""
    shortlist_ok: Optional[bool] = None  # None when a is not a nonzero square
    elapsed_ms: int = 0
    error: str = ""


def is_field_seed(d: int) -> bool:
    return d not in (0, 1) and squarefree_kernel(d) == d


def _is_square(a: int) -> bool:
    return a > 0 and math.isqrt(a) ** 2 == a


def scan_one(a: int, d: int, timing: bool = True) -> ScanRecord:
    start = time.perf_counter()
    K = QuadField(d)
    try:
        g = torsion_subgroup(Curve.short(0, a), K)
    except QuadtorsError as exc:
        return ScanRecord(a, d, error=str(exc), elapsed_ms=_ms(start, timing))
    ok = (g.n1, g.n2) in classify_family(a, K) if _is_square(a) else None
    return ScanRecord(a, d, g.n1, g.n2, g.label, ok, _ms(start, timing))


def _ms(start: float, timing: bool) -> int:
    return round((time.perf_counter() - start) * 1000) if timing else 0


def _task(args) -> ScanRecord:
    return scan_one(*args)


def scan(config: ScanConfig) -> list[ScanRecord]:
    """One record per (a, d), sorted by (a, d) whatever the execution order."""
    tasks = [(a, d, config.timing) for a in config.a_values for d in config.fields()]
    if config.parallelism == 1 or len(tasks) < 2:
        records = [_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (8 * config.parallelism))
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            records = list(pool.map(_task, tasks, chunksize=chunk))
    return sorted(records, key=lambda r: (r.a, r.d))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def report(records: Sequence[ScanRecord], fmt: str = "csv") -> str:
    rows = sorted(records, key=lambda r: (r.a, r.d))
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=1) + "\n"
    if fmt != "csv":
        raise InputError(f"unknown format {fmt!r}; expected csv or json")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow([_cell(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def summary(records: Sequence[ScanRecord]) -> dict:
    groups = Counter(r.group_label for r in records if not r.error)
    return {
        "records": len(records),
        "errors": sum(1 for r in records if r.error),
        "shortlist_violations": sum(1 for r in records if r.shortlist_ok is False),
        "groups": dict(sorted(groups.items())),
    }


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".summary.json")


def write_outputs(records: Sequence[ScanRecord], config: ScanConfig) -> Optional[Path]:
    """Write the primary report to ``config.output`` and the histogram beside it."""
    if config.output is None:
        return None
    out = Path(config.output)
    out.write_text(report(records, config.fmt))
    sidecar_path(out).write_text(json.dumps(summary(records), indent=1) + "\n")
    return out


_CONFIG_KEYS = {"a_values", "d_min", "d_max", "parallelism", "output", "format", "timing"}


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; returns keyword arguments for ScanConfig."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or key not in _CONFIG_KEYS:
            raise InputError(f"config line {lineno}: expected one of {sorted(_CONFIG_KEYS)} = value")
        raw[key] = value
    try:
        out = {}
        if "a_values" in raw:
            out["a_values"] = tuple(int(v) for v in raw["a_values"].replace(",", " ").split())
        for key in ("d_min", "d_max", "parallelism"):
            if key in raw:
                out[key] = int(raw[key])
    except ValueError as exc:
        raise InputError(f"bad config value: {exc}") from None
    if "output" in raw:
        out["output"] = raw["output"]
    if "format" in raw:
        out["fmt"] = raw["format"]
    if "timing" in raw:
        flag = raw["timing"].lower()
        if flag not in ("true", "false", "yes", "no", "1", "0"):
            raise InputError(f"timing must be a boolean, got {raw['timing']!r}")
        out["timing"] = flag in ("true", "yes", "1")
    return out
