"""Limiting-factor estimates for the sequential fraction.

Each calculator assumes its contribution is the only sequential work done
during a measurement window and returns the resulting lower bound on
``1 - alpha`` (equivalently, an upper bound on the achievable gain). Bounds
are relative to the window length: a longer benchmark run gives a smaller
bound for the same absolute overhead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable

from .errors import InvalidClusteringError, OutOfModelRangeError
from .model import ContributionLabel, ContributionSet

SPEED_OF_LIGHT = 2.998e8  # m/s, vacuum; cable refractive index ignored

# Reference figures quoted for the HPL run on Sunway TaihuLight.
HPL_RUNTIME_S = 13_298.0
HPL_CLOCK_HZ = 1.45e9

# Quoted OS-level limit on a zero-sized machine. It does not follow from
# os_bound() on the HPL window (that gives ~2e-9); kept as a reference value.
QUOTED_OS_LIMIT = 5e-8

FAR_MEMORY_FACTOR = 100.0
CACHED_ACCESS_FACTOR = 5.0
CONTEXT_SWITCH_CYCLES = 20_000


class BoundKind(enum.Enum):
    CLOCK_QUANTUM = "ClockQuantum"
    PROPAGATION = "Propagation"
    ADDRESSING = "Addressing"
    OS_CONTEXT_SWITCH = "OsContextSwitch"
    INSTRUCTION_ACCESS = "InstructionAccess"


_LABELS = {
    BoundKind.CLOCK_QUANTUM: ContributionLabel.OTHER,
    BoundKind.PROPAGATION: ContributionLabel.PROPAGATION,
    BoundKind.ADDRESSING: ContributionLabel.ADDRESSING,
    BoundKind.OS_CONTEXT_SWITCH: ContributionLabel.OS,
    BoundKind.INSTRUCTION_ACCESS: ContributionLabel.COMPUTE,
}


@dataclass(frozen=True)
class MeasurementWindow:
    duration_s: float
    clock_hz: float

    def __post_init__(self):
        if not self.duration_s > 0:
            raise ValueError(f"duration_s must be positive, got {self.duration_s}")
        if not self.clock_hz > 0:
            raise ValueError(f"clock_hz must be positive, got {self.clock_hz}")
        if self.total_cycles < 1:
            raise ValueError("measurement window is shorter than one clock cycle")

    @property
    def total_cycles(self) -> float:
        return self.duration_s * self.clock_hz

    @classmethod
    def hpl_reference(cls) -> MeasurementWindow:
        return cls(HPL_RUNTIME_S, HPL_CLOCK_HZ)


@dataclass(frozen=True)
class BoundResult:
    kind: BoundKind
    sequential_cycles: int
    window: MeasurementWindow
    access_factor: float = 1.0

    @property
    def one_minus_alpha_bound(self) -> float:
        return self.sequential_cycles / self.window.total_cycles

    @property
    def max_gain(self) -> float:
        if self.sequential_cycles == 0:
            return math.inf
        return self.window.total_cycles / self.sequential_cycles


def _cycles(seconds: float, clock_hz: float) -> int:
    # a started clock period is a whole period
    return max(1, math.ceil(seconds * clock_hz))


def clock_quantum_bound(w: MeasurementWindow) -> BoundResult:
    """One fork plus one join, each taking a single clock period."""
    return BoundResult(BoundKind.CLOCK_QUANTUM, 2, w)


def round_trip_seconds(distance_m: float) -> float:
    return 2.0 * distance_m / SPEED_OF_LIGHT


def propagation_bound(distance_m: float, w: MeasurementWindow) -> BoundResult:
    """Signal round trip across ``distance_m`` of cable, counted in cycles of ``w``."""
    if not distance_m > 0:
        raise ValueError(f"distance_m must be positive, got {distance_m}")
    return BoundResult(BoundKind.PROPAGATION, _cycles(round_trip_seconds(distance_m), w.clock_hz), w)


def addressing_bound(n: int, cluster_factor: float, w: MeasurementWindow) -> BoundResult:
    """Sequentially addressing ``n`` units, reduced by clustering.

    ``cluster_factor`` is how many units one addressing step reaches
    (1 means every core is addressed individually).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if cluster_factor < 1:
        raise InvalidClusteringError(f"cluster_factor must be >= 1, got {cluster_factor}")
    if cluster_factor > n:
        raise InvalidClusteringError(f"cluster_factor {cluster_factor} exceeds the unit count {n}")
    return BoundResult(BoundKind.ADDRESSING, math.ceil(n / cluster_factor), w)


def os_bound(context_switch_cycles: int, w: MeasurementWindow) -> BoundResult:
    if context_switch_cycles < 0:
        raise ValueError("context_switch_cycles must be >= 0")
    return BoundResult(BoundKind.OS_CONTEXT_SWITCH, 2 * int(context_switch_cycles), w)


def access_scaling(bound: BoundResult, access_factor: float) -> BoundResult:
    """Scale a bound for instructions that take ``access_factor`` cycles to fetch."""
    if not (1.0 <= access_factor <= 100.0):
        raise OutOfModelRangeError(f"access_factor {access_factor} is outside [1, 100]")
    if access_factor == 1.0:
        return bound
    cycles = math.ceil(bound.sequential_cycles * access_factor)
    return replace(bound, sequential_cycles=cycles, access_factor=bound.access_factor * access_factor)


def instruction_access_bound(w: MeasurementWindow, access_factor: float) -> BoundResult:
    scaled = access_scaling(clock_quantum_bound(w), access_factor)
    return replace(scaled, kind=BoundKind.INSTRUCTION_ACCESS)


def to_contributions(bounds: Iterable[BoundResult]) -> ContributionSet:
    """Fold bounds that share one window into a :class:`ContributionSet`.

    Bounds of the same kind are merged by adding their cycle counts.
    """
    bounds = list(bounds)
    if not bounds:
        return ContributionSet()
    window = bounds[0].window
    if any(b.window != window for b in bounds):
        raise ValueError("bounds must share a measurement window to be combined")
    cycles: dict[ContributionLabel, int] = {}
    for b in bounds:
        label = _LABELS[b.kind]
        cycles[label] = cycles.get(label, 0) + b.sequential_cycles
    return ContributionSet(tuple((label, c / window.total_cycles) for label, c in cycles.items()))
