"""Deterministic fork-join timeline of a parallelized sequential computation.

One coordinator starts ``n`` workers one after another, each worker runs
its payload, and the coordinator then collects the results one after
another. Between iterations the coordinator may do extra sequential work,
and an iteration can be held open until a fixed period has elapsed (as a
simulation synchronised to a 1 ms integration step would be).

Dispatch and join never overlap payload on the coordinator, so the
simulated overhead is a conservative first-order figure. Time is counted in
whole clock cycles; event times are rounded up.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import InconsistentMeasurementError
from .model import AlphaEstimate, alpha_from_speedup


class LoopingForm(enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class Looping:
    """How per-unit coordination cost grows with the number of units.

    ``growth(n)`` is 0, ``lam * n`` or ``lam * log2(n)``. The simulator
    multiplies the dispatch cost by ``1 + growth(n)``; second-order
    prediction curves add ``growth(n)`` to ``1 - alpha``.
    """

    form: LoopingForm = LoopingForm.CONSTANT
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "form", LoopingForm(self.form))
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")

    @classmethod
    def constant(cls) -> Looping:
        return cls()

    @classmethod
    def linear(cls, lam: float) -> Looping:
        return cls(LoopingForm.LINEAR, lam)

    @classmethod
    def log(cls, lam: float) -> Looping:
        return cls(LoopingForm.LOG, lam)

    def growth(self, n):
        n = np.asarray(n, dtype=float)
        if self.form is LoopingForm.LINEAR:
            out = self.lam * n
        elif self.form is LoopingForm.LOG:
            out = self.lam * np.log2(n)
        else:
            out = np.zeros_like(n)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SimConfig:
    n: int
    dispatch_cycles: float = 1
    join_cycles: float = 1
    payload_cycles: float = 1000
    iterations: int = 1
    per_iteration_seq_cycles: float = 0
    period_floor_cycles: float = 0
    looping: Looping = field(default_factory=Looping)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        for name in ("dispatch_cycles", "join_cycles", "payload_cycles",
                     "per_iteration_seq_cycles", "period_floor_cycles"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def effective_dispatch(self) -> float:
        return self.dispatch_cycles * (1.0 + self.looping.growth(self.n))


@dataclass(frozen=True)
class SimOutcome:
    n: int
    iteration_cycles: int
    total_cycles: int
    reference_cycles: int
    speedup: float
    alpha_eff: AlphaEstimate | None
    payload_fraction: float
    overhead_fraction: float
    idle_fraction: float
    degenerate: str | None = None

    @property
    def payload_rate(self) -> float:
        """Payload cycles completed per wall-clock cycle (single-unit performance = 1)."""
        return self.payload_fraction * self.n


@dataclass(frozen=True)
class Timeline:
    """Per-worker event times (cycles) of one iteration, worker ``i`` at index ``i-1``."""

    dispatch_end: np.ndarray
    finish: np.ndarray
    join_start: np.ndarray
    join_end: np.ndarray
    iteration_cycles: int


def _ceil_multiples(step: float, count: int) -> np.ndarray:
    """``ceil(i * step)`` for ``i = 0..count``, exact when ``step`` is integral."""
    idx = np.arange(count + 1, dtype=np.int64)
    if float(step).is_integer():
        return idx * int(step)
    return np.ceil(idx * float(step)).astype(np.int64)


def timeline(cfg: SimConfig) -> Timeline:
    marks = _ceil_multiples(cfg.effective_dispatch, cfg.n)
    payload = math.ceil(cfg.payload_cycles)
    finish = marks[1:] + payload
    last = int(finish[-1])
    join_marks = last + _ceil_multiples(cfg.join_cycles, cfg.n)
    seq_end = int(join_marks[-1]) + math.ceil(cfg.per_iteration_seq_cycles)
    wall = max(seq_end, math.ceil(cfg.period_floor_cycles))
    return Timeline(marks[1:], finish, join_marks[:-1], join_marks[1:], wall)


def _accounting(cfg: SimConfig, tl: Timeline) -> tuple[int, int, int, int]:
    dispatch_start = np.concatenate(([0], tl.dispatch_end[:-1]))
    # each worker's iteration: wait, dispatch, payload, wait, join, wait
    overhead = (tl.dispatch_end - dispatch_start) + (tl.join_end - tl.join_start)
    idle = dispatch_start + (tl.join_start - tl.finish) + (tl.iteration_cycles - tl.join_end)
    its = cfg.iterations
    return (
        cfg.n * tl.iteration_cycles * its,
        math.ceil(cfg.payload_cycles) * cfg.n * its,
        int(overhead.sum()) * its,
        int(idle.sum()) * its,
    )


def conservation_terms(cfg: SimConfig) -> tuple[int, int, int, int]:
    """``(n * total, payload, overhead, idle)`` cycle totals, each counted separately."""
    return _accounting(cfg, timeline(cfg))


def simulate(cfg: SimConfig) -> SimOutcome:
    tl = timeline(cfg)
    n = cfg.n
    busy, payload, overhead, idle = _accounting(cfg, tl)
    total = tl.iteration_cycles * cfg.iterations
    reference = (n * math.ceil(cfg.payload_cycles) + math.ceil(cfg.per_iteration_seq_cycles)) * cfg.iterations
    s = reference / total if total else 1.0

    alpha, degenerate = None, None
    if n < 2:
        degenerate = "alpha is undefined for a single unit"
    else:
        try:
            alpha = alpha_from_speedup(s, n)
        except InconsistentMeasurementError as exc:
            degenerate = str(exc)

    return SimOutcome(
        n=n,
        iteration_cycles=tl.iteration_cycles,
        total_cycles=total,
        reference_cycles=reference,
        speedup=s,
        alpha_eff=alpha,
        payload_fraction=payload / busy if busy else 0.0,
        overhead_fraction=overhead / busy if busy else 0.0,
        idle_fraction=idle / busy if busy else 0.0,
        degenerate=degenerate,
    )


def sweep_n(cfg_template: SimConfig, n_values: Sequence[int]) -> list[tuple[int, SimOutcome]]:
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise ValueError("n_values must not be empty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly ascending")
    return [(n, simulate(replace(cfg_template, n=n))) for n in n_values]


def argmax_payload(sweep: Sequence[tuple[int, SimOutcome]]) -> int:
    """Unit count with the highest payload rate; the first one on ties."""
    rates = [out.payload_rate for _, out in sweep]
    return sweep[int(np.argmax(rates))][0]


def hpl_preset(n: int = 100_000) -> SimConfig:
    """Single long run with minimal coordination."""
    return SimConfig(n=n, dispatch_cycles=1, join_cycles=1, payload_cycles=1_000_000_000)


def hpcg_preset(n: int = 100_000) -> SimConfig:
    """Many short iterations; the coordinator recomputes parameters in between."""
    return SimConfig(n=n, dispatch_cycles=1, join_cycles=1, payload_cycles=1_000_000,
                     iterations=100, per_iteration_seq_cycles=10_000)


BIOLOGY_PERIOD_S = 1e-3


def brain_preset(n: int = 100_000, clock_hz: float = 1e9) -> SimConfig:
    """Iterations pinned to a 1 ms integration step (1e6 cycles at 1 GHz).

    Each simulated step does little payload per unit, so the fixed period,
    not the dispatch overhead, limits the gain.
    """
    return SimConfig(n=n, dispatch_cycles=1, join_cycles=1, payload_cycles=1000,
                     iterations=1000, period_floor_cycles=round(BIOLOGY_PERIOD_S * clock_hz))
