"""Read TOP500-style benchmark snapshots and derive per-record alpha values.

Input is a UTF-8 CSV with a header row. Mandatory columns::

    name, epoch, workload, cores_total, cores_used, rpeak_flops, rmax_flops

Optional columns are ``clock_hz`` and ``perf_ratio``. ``epoch`` is
``YYYY-MM``; ``workload`` is one of HPL, HPCG, HPL-AI, FP0 (any case), other
labels are kept verbatim.

``rpeak_flops`` is the peak of the partition that actually ran the
benchmark. For HPCG runs on a fraction of the machine, the derived
``corrected_efficiency`` rescales the efficiency to the full core count:
``(rmax / rpeak) * (cores_total / cores_used)``.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import (
    DegenerateInstanceError,
    InconsistentMeasurementError,
    IntegrityError,
    SnapshotParseError,
)
from .model import AlphaEstimate, alpha_from_efficiency
from .precision import DualPrecisionMeasurement

MANDATORY_COLUMNS = ("name", "epoch", "workload", "cores_total", "cores_used", "rpeak_flops", "rmax_flops")
OPTIONAL_COLUMNS = ("clock_hz", "perf_ratio")

HPL, HPCG, HPL_AI, FP0 = "HPL", "HPCG", "HPL-AI", "FP0"
_KNOWN_WORKLOADS = {"HPL": HPL, "HPCG": HPCG, "HPL-AI": HPL_AI, "HPL_AI": HPL_AI, "FP0": FP0}

_EPOCH_RE = re.compile(r"^(\d{4})-(\d{1,2})$")


def normalize_workload(text: str) -> str:
    return _KNOWN_WORKLOADS.get(text.strip().upper(), text.strip())


@dataclass(frozen=True, order=True)
class Epoch:
    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be 1..12, got {self.month}")

    @classmethod
    def parse(cls, text: str) -> Epoch:
        m = _EPOCH_RE.match(text.strip())
        if not m:
            raise ValueError(f"epoch {text!r} is not YYYY-MM")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"{self.year:04d}-{self.month:02d}"


@dataclass(frozen=True)
class SystemSnapshot:
    name: str
    epoch: Epoch
    workload: str
    cores_total: int
    cores_used: int
    r_peak: float
    r_max: float
    clock_hz: float | None = None
    perf_ratio: float | None = None

    def __post_init__(self):
        label = f"{self.name} {self.epoch} {self.workload}"
        if not (0 < self.r_max <= self.r_peak):
            raise IntegrityError(f"{label}: need 0 < rmax <= rpeak, got rmax={self.r_max:g}, rpeak={self.r_peak:g}")
        if not (1 <= self.cores_used <= self.cores_total):
            raise IntegrityError(
                f"{label}: need 1 <= cores_used <= cores_total, got {self.cores_used} / {self.cores_total}"
            )

    @property
    def efficiency(self) -> float:
        return self.r_max / self.r_peak

    @property
    def p_single(self) -> float:
        return self.r_peak / self.cores_used


@dataclass(frozen=True)
class DerivedRecord:
    snapshot: SystemSnapshot
    efficiency: float
    alpha: AlphaEstimate | None
    corrected_efficiency: float | None = None
    notes: tuple[str, ...] = ()


def _field(row, header, col, line, convert):
    idx = header.index(col)
    raw = row[idx].strip() if idx < len(row) else ""
    if raw == "":
        raise SnapshotParseError(f"missing value for {col!r}", line, idx + 1)
    try:
        return convert(raw)
    except ValueError as exc:
        raise SnapshotParseError(f"bad value {raw!r} for {col!r}: {exc}", line, idx + 1) from None


def _optional(row, header, col, line):
    if col not in header:
        return None
    idx = header.index(col)
    raw = row[idx].strip() if idx < len(row) else ""
    if raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise SnapshotParseError(f"bad value {raw!r} for {col!r}", line, idx + 1) from None


def _count(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError("not a whole number")
    return int(value)


def parse_snapshots(stream: TextIO | str, dialect: str | type[csv.Dialect] = "excel") -> list[SystemSnapshot]:
    """Parse every data row of ``stream`` into a :class:`SystemSnapshot`.

    Blank lines are skipped. Errors carry the 1-based line (and column when
    known) of the offending row.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream, dialect, strict=True)
    try:
        header = next(reader)
    except StopIteration:
        raise SnapshotParseError("empty input, expected a header row", 1) from None
    except csv.Error as exc:
        raise SnapshotParseError(str(exc), reader.line_num) from None
    header = [h.strip().lower() for h in header]
    missing = [c for c in MANDATORY_COLUMNS if c not in header]
    if missing:
        raise SnapshotParseError(f"header lacks mandatory columns: {', '.join(missing)}", 1)

    out = []
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise SnapshotParseError(str(exc), reader.line_num) from None
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        fields = dict(
            name=_field(row, header, "name", line, str),
            epoch=_field(row, header, "epoch", line, Epoch.parse),
            workload=_field(row, header, "workload", line, normalize_workload),
            cores_total=_field(row, header, "cores_total", line, _count),
            cores_used=_field(row, header, "cores_used", line, _count),
            r_peak=_field(row, header, "rpeak_flops", line, float),
            r_max=_field(row, header, "rmax_flops", line, float),
            clock_hz=_optional(row, header, "clock_hz", line),
            perf_ratio=_optional(row, header, "perf_ratio", line),
        )
        try:
            out.append(SystemSnapshot(**fields))
        except IntegrityError as exc:
            raise IntegrityError(f"line {line}: {exc}") from None
    return out


def _num(x):
    if x is None:
        return ""
    return repr(x)


def serialize_snapshots(snapshots: Iterable[SystemSnapshot]) -> str:
    """Write snapshots back to the input CSV schema; lossless for parsed data."""
    snapshots = list(snapshots)
    columns = list(MANDATORY_COLUMNS)
    for col, attr in (("clock_hz", "clock_hz"), ("perf_ratio", "perf_ratio")):
        if any(getattr(s, attr) is not None for s in snapshots):
            columns.append(col)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for s in snapshots:
        row = [s.name, str(s.epoch), s.workload, s.cores_total, s.cores_used, _num(s.r_peak), _num(s.r_max)]
        if "clock_hz" in columns:
            row.append(_num(s.clock_hz))
        if "perf_ratio" in columns:
            row.append(_num(s.perf_ratio))
        writer.writerow(row)
    return buf.getvalue()


def derive(snapshot: SystemSnapshot) -> DerivedRecord:
    eff = snapshot.efficiency
    notes = []
    try:
        alpha = alpha_from_efficiency(eff, snapshot.cores_used)
    except (DegenerateInstanceError, InconsistentMeasurementError) as exc:
        alpha = None
        notes.append(str(exc))
    corrected = None
    if snapshot.workload == HPCG and snapshot.cores_used < snapshot.cores_total:
        corrected = eff / (snapshot.cores_used / snapshot.cores_total)
        notes.append("rpeak read as the peak of the partition used; corrected_efficiency scales to all cores")
    return DerivedRecord(snapshot, eff, alpha, corrected, tuple(notes))


@dataclass(frozen=True)
class WorkloadPair:
    name: str
    epoch: Epoch
    measurement: DualPrecisionMeasurement
    ratio_source: str  # "input" or "computed"


@dataclass
class Pairing:
    pairs: list[WorkloadPair] = field(default_factory=list)
    unmatched: list[str] = field(default_factory=list)


def pair_workloads(records: Iterable[DerivedRecord]) -> Pairing:
    """Match HPL and HPL-AI records of the same machine and list edition.

    ``perf_ratio`` is taken from the HPL-AI row when present, otherwise it
    is the ratio of delivered performances ``rmax(HPL-AI) / rmax(HPL)``.
    """
    hpl, hpl_ai = {}, {}
    for rec in records:
        key = (rec.snapshot.name, rec.snapshot.epoch)
        if rec.snapshot.workload == HPL:
            hpl[key] = rec
        elif rec.snapshot.workload == HPL_AI:
            hpl_ai[key] = rec

    result = Pairing()
    for key in sorted(set(hpl) | set(hpl_ai), key=lambda k: (k[0], k[1])):
        label = f"{key[0]} {key[1]}"
        if key not in hpl:
            result.unmatched.append(f"{label}: HPL-AI record without HPL counterpart")
            continue
        if key not in hpl_ai:
            result.unmatched.append(f"{label}: HPL record without HPL-AI counterpart")
            continue
        r64, r16 = hpl[key], hpl_ai[key]
        if r16.snapshot.perf_ratio is not None:
            ratio, source = r16.snapshot.perf_ratio, "input"
        else:
            ratio, source = r16.snapshot.r_max / r64.snapshot.r_max, "computed"
        try:
            m = DualPrecisionMeasurement(r64.efficiency, r16.efficiency, r64.snapshot.cores_used, ratio)
        except ValueError as exc:
            result.unmatched.append(f"{label}: {exc}")
            continue
        result.pairs.append(WorkloadPair(key[0], key[1], m, source))
    return result
