"""Extrapolate payload performance from a measured alpha.

Everything here is extrapolation from a single snapshot: the first-order
curves assume alpha stays fixed as the machine grows, which is optimistic at
large unit counts. Second-order curves add a looping term that grows with
the unit count and makes the payload curve turn over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ingest import DerivedRecord, SystemSnapshot, derive
from .model import (
    AlphaEstimate,
    SystemConfig,
    efficiency,
    efficiency_from_oma,
    payload_performance,
)
from .simulator import Looping, LoopingForm

HPL_HPCG_BAND = (200.0, 500.0)

EXTRAPOLATION_CAVEAT = (
    "extrapolated from one snapshot with alpha held fixed; "
    "treat as an optimistic upper estimate"
)


@dataclass(frozen=True)
class PredictionCurve:
    alpha: AlphaEstimate
    p_single: float
    n: np.ndarray
    nominal: np.ndarray
    payload: np.ndarray
    efficiency: np.ndarray
    looping: Looping | None = None

    @property
    def order(self) -> str:
        return "FirstOrder" if self.looping is None else "SecondOrder"

    def argmax(self) -> int:
        """Unit count with the highest payload on this curve."""
        return int(self.n[int(np.argmax(self.payload))])

    def rows(self) -> list[dict]:
        return [
            {"n": int(n), "nominal_flops": float(nom), "payload_flops": float(p), "efficiency": float(e)}
            for n, nom, p, e in zip(self.n, self.nominal, self.payload, self.efficiency)
        ]


@dataclass(frozen=True)
class SurfaceGrid:
    """Efficiency over unit counts (columns) and sequential fractions (rows)."""

    n_axis: np.ndarray
    one_minus_alpha_axis: np.ndarray
    values: np.ndarray  # shape (len(one_minus_alpha_axis), len(n_axis))

    def rows(self) -> list[dict]:
        return [
            {"n": int(n), "one_minus_alpha": float(oma), "efficiency": float(self.values[i, j])}
            for i, oma in enumerate(self.one_minus_alpha_axis)
            for j, n in enumerate(self.n_axis)
        ]


def log_axis(lo: float, hi: float, points: int, integer: bool = False) -> np.ndarray:
    """Log-spaced axis from ``lo`` to ``hi``; integer axes are rounded and deduplicated."""
    if not (0 < lo <= hi) or points < 1:
        raise ValueError("need 0 < lo <= hi and points >= 1")
    axis = np.geomspace(lo, hi, points) if points > 1 else np.array([float(lo)])
    if integer:
        axis = np.unique(np.round(axis).astype(np.int64))
    return axis


def _check_ascending(n_values) -> np.ndarray:
    n = np.asarray(n_values)
    if n.ndim != 1 or n.size == 0:
        raise ValueError("n_values must be a non-empty 1-D sequence")
    if np.any(n < 1):
        raise ValueError("unit counts must be >= 1")
    if np.any(np.diff(n) <= 0):
        raise ValueError("n_values must be strictly ascending")
    return n


def curve(alpha: AlphaEstimate, p_single: float, n_values: Sequence[int],
          looping: Looping | None = None) -> PredictionCurve:
    """Payload and efficiency over ``n_values``.

    Without ``looping`` this is the first-order law with a fixed alpha.
    With it, the sequential fraction at ``n`` units becomes
    ``(1 - alpha) + looping.growth(n)``.
    """
    n = _check_ascending(n_values)
    nf = n.astype(float)
    oma = alpha.one_minus_alpha
    if looping is not None and looping.form is not LoopingForm.CONSTANT:
        oma = oma + looping.growth(nf)
    eff = efficiency_from_oma(oma, nf)
    return PredictionCurve(alpha, p_single, n, nf * p_single, eff * nf * p_single, eff, looping)


def surface(n_axis: Iterable[float], one_minus_alpha_axis: Iterable[float]) -> SurfaceGrid:
    n = np.asarray(list(n_axis), dtype=float)
    oma = np.asarray(list(one_minus_alpha_axis), dtype=float)
    if n.size == 0 or oma.size == 0:
        raise ValueError("axes must not be empty")
    if np.any(n < 1) or np.any(oma < 0) or np.any(oma > 1):
        raise ValueError("n must be >= 1 and 1-alpha must lie in [0, 1]")
    values = efficiency_from_oma(oma[:, None], n[None, :])
    return SurfaceGrid(n, oma, values)


def gain_ratio(alpha_hpl: AlphaEstimate, alpha_hpcg: AlphaEstimate, n: int) -> float:
    """How many times more efficient the HPL-type workload is at ``n`` units."""
    return efficiency(alpha_hpl, n) / efficiency(alpha_hpcg, n)


def in_hpl_hpcg_band(ratio: float, band: tuple[float, float] = HPL_HPCG_BAND) -> bool:
    return band[0] <= ratio <= band[1]


@dataclass(frozen=True)
class ValidationReport:
    name: str
    prior_epoch: str
    later_epoch: str
    n_prior: int
    n_later: int
    predicted_efficiency: float
    predicted_payload: float
    measured_payload: float
    relative_error: float
    extrapolation: bool = True
    warnings: tuple[str, ...] = field(default_factory=tuple)


def validate_successor(prior: DerivedRecord, later: SystemSnapshot, rtol: float = 1e-9) -> ValidationReport:
    """Predict ``later``'s delivered performance from ``prior``'s alpha.

    The prediction runs the first-order law at the later unit count with
    the later per-unit peak. A changed per-unit peak means the hardware
    changed between stages, which the law cannot account for; it is
    reported as a warning rather than refused.
    """
    if prior.alpha is None:
        raise ValueError(f"prior record {prior.snapshot.name} {prior.snapshot.epoch} has no alpha")
    cfg = SystemConfig(later.cores_used, later.p_single)
    predicted = payload_performance(cfg, prior.alpha)
    warnings = [EXTRAPOLATION_CAVEAT]
    if not math.isclose(prior.snapshot.p_single, later.p_single, rel_tol=rtol):
        warnings.append(
            f"per-unit peak changed from {prior.snapshot.p_single:.4g} to {later.p_single:.4g} flop/s "
            "(hardware change); prediction is not like-for-like"
        )
    if prior.snapshot.workload != later.workload:
        warnings.append(f"workload changed from {prior.snapshot.workload} to {later.workload}")
    if prior.snapshot.name != later.name:
        warnings.append(f"machine name changed from {prior.snapshot.name} to {later.name}")
    return ValidationReport(
        name=later.name,
        prior_epoch=str(prior.snapshot.epoch),
        later_epoch=str(later.epoch),
        n_prior=prior.snapshot.cores_used,
        n_later=later.cores_used,
        predicted_efficiency=efficiency(prior.alpha, later.cores_used),
        predicted_payload=predicted,
        measured_payload=later.r_max,
        relative_error=(predicted - later.r_max) / later.r_max,
        warnings=tuple(warnings),
    )


def validate_history(snapshots: Iterable[SystemSnapshot]) -> list[ValidationReport]:
    """Validate every stage of each machine/workload lineage against its predecessor."""
    lineages: dict[tuple[str, str], list[SystemSnapshot]] = {}
    for s in snapshots:
        lineages.setdefault((s.name, s.workload), []).append(s)
    reports = []
    for key in sorted(lineages):
        stages = sorted(lineages[key], key=lambda s: s.epoch)
        for before, after in zip(stages, stages[1:]):
            prior = derive(before)
            if prior.alpha is None or after.cores_used < 2:
                continue
            reports.append(validate_successor(prior, after))
    return reports
