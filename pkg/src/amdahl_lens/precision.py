"""Split measured sequential times into housekeeping and operand-length parts.

A 64-bit and a 16-bit run of the same benchmark give two sequential times.
Housekeeping time ``f0`` is assumed independent of operand length, while the
data-manipulation time scales with it: ``f16`` for 16-bit operands and
``length_ratio * f16`` (default 4) for 64-bit ones. Two summing models are
supported and must be chosen explicitly:

``SERIAL``
    ``time16 = f0 + f16`` and ``time64 = f0 + 4*f16``.
``TIME_AWARE``
    the parts add in quadrature, ``time16**2 = f0**2 + f16**2`` and
    ``time64**2 = f0**2 + (4*f16)**2``.

Both are solvable with non-negative parts exactly when
``time16 <= time64 <= 4*time16``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvertedTimesError, NegativeHousekeepingError
from .model import AlphaEstimate, alpha_from_efficiency


class SummingModel(enum.Enum):
    SERIAL = "serial"
    TIME_AWARE = "timeaware"


@dataclass(frozen=True)
class DualPrecisionMeasurement:
    eff64: float
    eff16: float
    n: int
    perf_ratio: float

    def __post_init__(self):
        for name in ("eff64", "eff16"):
            value = getattr(self, name)
            if not (0.0 < value <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        if not (1.0 <= self.perf_ratio <= 4.0):
            raise ValueError(f"perf_ratio must lie in [1, 4], got {self.perf_ratio}")


@dataclass(frozen=True)
class DecompositionResult:
    time64: float
    time16: float
    f0: float
    f16: float
    model: SummingModel
    length_ratio: float = 4.0


def times_from_measurement(m: DualPrecisionMeasurement) -> tuple[float, float]:
    """Sequential times of both runs on the time scale of the 64-bit run.

    The 16-bit run finishes ``perf_ratio`` times sooner, so its sequential
    fraction is divided by that ratio to express it per 64-bit window.
    """
    oma64 = alpha_from_efficiency(m.eff64, m.n).one_minus_alpha
    oma16 = alpha_from_efficiency(m.eff16, m.n).one_minus_alpha
    return oma64, oma16 / m.perf_ratio


def _check_band(time16, time64, length_ratio):
    if time16 < 0 or time64 < 0:
        raise ValueError("times must be non-negative")
    if time64 < time16:
        raise InvertedTimesError(f"time64 ({time64:g}) is below time16 ({time16:g})")
    if time64 > length_ratio * time16:
        raise NegativeHousekeepingError(
            f"time64 ({time64:g}) exceeds {length_ratio:g} * time16 ({time16:g}); "
            "housekeeping would be negative"
        )


def decompose_serial(time16: float, time64: float, length_ratio: float = 4.0) -> DecompositionResult:
    _check_band(time16, time64, length_ratio)
    f16 = (time64 - time16) / (length_ratio - 1.0)
    f0 = max(time16 - f16, 0.0)
    return DecompositionResult(time64, time16, f0, f16, SummingModel.SERIAL, length_ratio)


def decompose_timeaware(time16: float, time64: float, length_ratio: float = 4.0) -> DecompositionResult:
    _check_band(time16, time64, length_ratio)
    # factored differences keep precision when time64 ~ time16
    f16_sq = (time64 - time16) * (time64 + time16) / (length_ratio**2 - 1.0)
    f16 = math.sqrt(f16_sq)
    f0 = math.sqrt(max((time16 - f16) * (time16 + f16), 0.0))
    return DecompositionResult(time64, time16, f0, f16, SummingModel.TIME_AWARE, length_ratio)


def decompose(time16: float, time64: float, model: SummingModel | str, length_ratio: float = 4.0):
    model = SummingModel(model)
    if model is SummingModel.SERIAL:
        return decompose_serial(time16, time64, length_ratio)
    return decompose_timeaware(time16, time64, length_ratio)


def compose(f0: float, f16: float, model: SummingModel | str, length_ratio: float = 4.0) -> tuple[float, float]:
    """Inverse of :func:`decompose`: rebuild ``(time16, time64)`` from the parts."""
    model = SummingModel(model)
    if model is SummingModel.SERIAL:
        return f0 + f16, f0 + length_ratio * f16
    return math.hypot(f0, f16), math.hypot(f0, length_ratio * f16)


def expected_perf_ratio(d: DecompositionResult) -> float:
    """Ratio time64/time16 rebuilt from the parts; equals ``length_ratio`` iff f0 = 0."""
    time16, time64 = compose(d.f0, d.f16, d.model, d.length_ratio)
    return time64 / time16


def fp0_alpha(e_ops: float, nominal: float, n: int) -> AlphaEstimate:
    """Effective parallelism of a run that does no floating work at all.

    The achieved operation rate over the nominal rate plays the role of an
    efficiency and is inverted like any other.
    """
    if not (0.0 < e_ops <= nominal):
        raise ValueError(f"need 0 < e_ops <= nominal, got e_ops={e_ops}, nominal={nominal}")
    return alpha_from_efficiency(e_ops / nominal, n)
