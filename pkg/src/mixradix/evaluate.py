"""Expected-probability-of-success metrics and T1-ratio sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .gateset import DEFAULT_LIBRARY, SWAP_KINDS, CoherenceParams, GateLibrary, Kind
from .schedule import ScheduledCircuit

CATEGORIES = (
    "single_qubit", "single_ququart", "internal_cx", "cx2", "partial_cx_qubit_ququart",
    "partial_cx_ququart_ququart", "swap2", "partial_swap", "swap4", "enc_dec",
)

_CATEGORY = {
    Kind.X: "single_qubit",
    Kind.X0: "single_ququart", Kind.X1: "single_ququart", Kind.X01: "single_ququart",
    Kind.SWAPin: "single_ququart",
    Kind.CX0: "internal_cx", Kind.CX1: "internal_cx",
    Kind.CX2: "cx2",
    Kind.CX0q: "partial_cx_qubit_ququart", Kind.CX1q: "partial_cx_qubit_ququart",
    Kind.CXq0: "partial_cx_qubit_ququart", Kind.CXq1: "partial_cx_qubit_ququart",
    Kind.CX00: "partial_cx_ququart_ququart", Kind.CX01: "partial_cx_ququart_ququart",
    Kind.CX10: "partial_cx_ququart_ququart", Kind.CX11: "partial_cx_ququart_ququart",
    Kind.SWAP2: "swap2",
    Kind.SWAPq0: "partial_swap", Kind.SWAPq1: "partial_swap",
    Kind.SWAP00: "partial_swap", Kind.SWAP01: "partial_swap", Kind.SWAP11: "partial_swap",
    Kind.SWAP4: "swap4",
    Kind.ENC: "enc_dec", Kind.DEC: "enc_dec",
}


def category(kind: Kind) -> str:
    return _CATEGORY[kind]


@dataclass
class EpsReport:
    gate_eps: float
    coherence_eps: float
    total_eps: float
    duration_ns: float
    gate_counts: dict[str, int]
    swap_count: int
    internal_cx_count: int
    log_gate_eps: float = 0.0
    log_coherence_eps: float = 0.0


def log_gate_eps(s: ScheduledCircuit, library: GateLibrary = DEFAULT_LIBRARY) -> float:
    return math.fsum(math.log(library.fidelity(o.kind)) for o in s.ops)


def gate_eps(s: ScheduledCircuit, library: GateLibrary = DEFAULT_LIBRARY) -> float:
    return math.exp(log_gate_eps(s, library))


def log_coherence_eps(s: ScheduledCircuit, coh: CoherenceParams) -> float:
    total_us = s.total_duration * 1e-3
    acc = []
    for u in s.unit_timeline:
        t_qd = s.ququart_time(u) * 1e-3
        t_qb = total_us - t_qd
        acc.append(-t_qb / coh.t1_qubit - t_qd / coh.t1_ququart)
    return math.fsum(acc)


def coherence_eps(s: ScheduledCircuit, coh: CoherenceParams) -> float:
    return math.exp(log_coherence_eps(s, coh))


def gate_distribution(s: ScheduledCircuit) -> dict[str, int]:
    counts = {c: 0 for c in CATEGORIES}
    for o in s.ops:
        counts[category(o.kind)] += 1
    return counts


def evaluate(s: ScheduledCircuit, coh: CoherenceParams | None = None,
             library: GateLibrary = DEFAULT_LIBRARY) -> EpsReport:
    coh = coh or CoherenceParams()
    lg = log_gate_eps(s, library)
    lc = log_coherence_eps(s, coh)
    return EpsReport(
        gate_eps=math.exp(lg),
        coherence_eps=math.exp(lc),
        total_eps=math.exp(lg + lc),
        duration_ns=s.total_duration,
        gate_counts=gate_distribution(s),
        swap_count=sum(1 for o in s.ops if o.kind in SWAP_KINDS),
        internal_cx_count=sum(1 for o in s.ops if o.kind in (Kind.CX0, Kind.CX1)),
        log_gate_eps=lg,
        log_coherence_eps=lc,
    )


@dataclass
class SweepResult:
    ratios: list[float]
    total_eps: dict[str, list[float]]
    baseline: list[float]
    crossover_ratio: dict[str, float | None] = field(default_factory=dict)


def t1_sweep(schedules: dict[str, ScheduledCircuit], baseline: ScheduledCircuit, ratios,
             t1_qubit: float = 163.5, library: GateLibrary = DEFAULT_LIBRARY) -> SweepResult:
    """Total EPS per ququart/qubit T1 ratio with gate EPS held fixed."""
    ratios = sorted(ratios)
    if any(not (1 / 3 - 1e-9 <= r <= 1 + 1e-9) for r in ratios):
        raise ValueError("ratios must lie in [1/3, 1]")

    def curve(s):
        lg = log_gate_eps(s, library)
        return [math.exp(lg + log_coherence_eps(s, CoherenceParams.from_ratio(t1_qubit, r))) for r in ratios]

    base = curve(baseline)
    out = SweepResult(ratios, {}, base)
    for name, s in schedules.items():
        vals = curve(s)
        out.total_eps[name] = vals
        out.crossover_ratio[name] = next((r for r, v, b in zip(ratios, vals, base) if v >= b), None)
    return out
