"""Closed-form Amdahl relations: speedup, efficiency, alpha inversion, payload.

All interesting supercomputer configurations sit within 1e-13..1e-5 of
alpha = 1, so the sequential fraction ``one_minus_alpha`` is the stored
quantity and alpha is derived from it. The formulas are rearranged so that
``N*(1-alpha) + alpha`` is evaluated as ``1 + (N-1)*(1-alpha)``, which never
subtracts two numbers close to one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateInstanceError,
    InconsistentMeasurementError,
    OverSubscribedContributionsError,
)


class AlphaSource(enum.Enum):
    FROM_EFFICIENCY = "FromEfficiency"
    FROM_SPEEDUP = "FromSpeedup"
    FROM_CONTRIBUTIONS = "FromContributions"
    ASSUMED = "Assumed"


@dataclass(frozen=True)
class AlphaEstimate:
    """Effective parallelism, stored as its sequential complement.

    ``one_minus_alpha`` is the primary value; ``alpha`` is computed on access
    so the pair always sums to exactly one.
    """

    one_minus_alpha: float
    source: AlphaSource = AlphaSource.ASSUMED

    def __post_init__(self):
        oma = float(self.one_minus_alpha)
        if not (0.0 <= oma <= 1.0) or math.isnan(oma):
            raise ValueError(f"one_minus_alpha must lie in [0, 1], got {oma!r}")
        object.__setattr__(self, "one_minus_alpha", oma)

    @classmethod
    def from_alpha(cls, alpha: float, source: AlphaSource = AlphaSource.ASSUMED) -> AlphaEstimate:
        return cls(1.0 - float(alpha), source)

    @property
    def alpha(self) -> float:
        return 1.0 - self.one_minus_alpha

    @property
    def max_gain(self) -> float:
        """Upper limit of the speedup, 1/(1-alpha); infinite for alpha = 1."""
        if self.one_minus_alpha == 0.0:
            return math.inf
        return 1.0 / self.one_minus_alpha


@dataclass(frozen=True)
class SystemConfig:
    n: int
    p_single: float
    clock_hz: float = 1.0e9

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not self.p_single > 0:
            raise ValueError(f"p_single must be positive, got {self.p_single}")
        if not self.clock_hz > 0:
            raise ValueError(f"clock_hz must be positive, got {self.clock_hz}")

    @property
    def nominal(self) -> float:
        return self.n * self.p_single


class ContributionLabel(enum.Enum):
    NET = "Net"
    COMPUTE = "Compute"
    OS = "OS"
    SW = "SW"
    ADDRESSING = "Addressing"
    PROPAGATION = "Propagation"
    OTHER = "Other"


@dataclass(frozen=True)
class ContributionSet:
    """Named sequential-fraction contributions that add up to a total.

    Entries keep their insertion order; each label may appear once.
    """

    entries: tuple[tuple[ContributionLabel, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        entries = tuple((ContributionLabel(label), float(value)) for label, value in self.entries)
        seen = set()
        for label, value in entries:
            if label in seen:
                raise ValueError(f"duplicate contribution label {label.value}")
            seen.add(label)
            if not value >= 0:
                raise ValueError(f"contribution {label.value} must be >= 0, got {value}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, **values: float) -> ContributionSet:
        """Build from keyword arguments, e.g. ``ContributionSet.of(Net=1e-7)``."""
        return cls(tuple((ContributionLabel(k), v) for k, v in values.items()))

    def total(self) -> float:
        return math.fsum(v for _, v in self.entries)

    def __getitem__(self, label) -> float:
        label = ContributionLabel(label)
        for key, value in self.entries:
            if key is label:
                return value
        raise KeyError(label.value)

    def __len__(self):
        return len(self.entries)


def efficiency_from_oma(one_minus_alpha, n):
    """Array-friendly efficiency ``1 / (1 + (n-1)*(1-alpha))``."""
    return 1.0 / (1.0 + (np.asarray(n, dtype=float) - 1.0) * np.asarray(one_minus_alpha, dtype=float))


def efficiency(alpha: AlphaEstimate, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 1.0 / (1.0 + (n - 1) * alpha.one_minus_alpha)


def speedup(alpha: AlphaEstimate, n: int) -> float:
    """Amdahl speedup ``N / (N*(1-alpha) + alpha)``, computed as ``N * efficiency``."""
    return n * efficiency(alpha, n)


def _check_instance(n):
    if n < 2:
        raise DegenerateInstanceError(f"alpha is undefined for n={n} (need at least 2 units)")


def alpha_from_speedup(s: float, n: int) -> AlphaEstimate:
    _check_instance(n)
    if not (1.0 <= s <= n):
        raise InconsistentMeasurementError(f"speedup {s} is outside [1, {n}]")
    # 1 - N/(N-1) * (S-1)/S, rearranged to avoid cancellation near alpha = 1
    oma = (n - s) / (s * (n - 1))
    return AlphaEstimate(min(max(oma, 0.0), 1.0), AlphaSource.FROM_SPEEDUP)


def alpha_from_efficiency(e: float, n: int) -> AlphaEstimate:
    _check_instance(n)
    if not (1.0 / n <= e <= 1.0):
        raise InconsistentMeasurementError(
            f"efficiency {e} is outside [1/{n}, 1]; not reachable for any alpha"
        )
    # 1 - (E*N - 1)/(E*(N-1)) == (1 - E)/(E*(N-1))
    oma = (1.0 - e) / (e * (n - 1))
    return AlphaEstimate(min(max(oma, 0.0), 1.0), AlphaSource.FROM_EFFICIENCY)


def payload_performance(cfg: SystemConfig, alpha: AlphaEstimate) -> float:
    """Delivered performance ``N * P_single / (N*(1-alpha) + alpha)`` in flop/s."""
    return efficiency(alpha, cfg.n) * cfg.n * cfg.p_single


def saturation_performance(p_single: float, alpha: AlphaEstimate) -> float:
    """Limit of :func:`payload_performance` as N grows without bound."""
    if alpha.one_minus_alpha == 0.0:
        return math.inf
    return p_single / alpha.one_minus_alpha


def combine(contribs: ContributionSet) -> AlphaEstimate:
    total = contribs.total()
    if total >= 1.0:
        raise OverSubscribedContributionsError(
            f"contributions sum to {total:g}; the sequential fraction must stay below 1"
        )
    return AlphaEstimate(total, AlphaSource.FROM_CONTRIBUTIONS)


def payload_performance_split(cfg: SystemConfig, contribs: ContributionSet) -> float:
    """Payload performance with the sequential fraction given as separate parts.

    The parts are summed into one ``1 - alpha_total``; the constant term of the
    denominator is taken as ``alpha_total`` so a single part reduces exactly
    to :func:`payload_performance`.
    """
    return payload_performance(cfg, combine(contribs))

