"""ASAP list scheduling with per-unit exclusivity and single-qubit merging."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arch import SlotId
from .gateset import DEFAULT_LIBRARY, GateLibrary, Kind
from .mapper import Mapping
from .router import Layout, PhysicalOp


@dataclass(frozen=True)
class ScheduledOp:
    op: PhysicalOp
    start: float
    duration: float

    @property
    def end(self) -> float:
        return self.start + self.duration

    @property
    def kind(self) -> Kind:
        return self.op.kind


@dataclass
class ScheduledCircuit:
    ops: list[ScheduledOp]
    unit_timeline: dict[int, list[tuple[float, float, str]]]
    total_duration: float
    initial: Mapping
    final: Mapping
    preds: list[list[int]] = field(default_factory=list)

    def ququart_time(self, unit: int) -> float:
        return sum(e - s for s, e, state in self.unit_timeline[unit] if state == "ququart")


def _dependencies(ops: list[PhysicalOp]) -> list[list[int]]:
    last: dict[SlotId, int] = {}
    preds = []
    for i, op in enumerate(ops):
        ps = set()
        for s in op.touched_slots():
            if s in last:
                ps.add(last[s])
        preds.append(sorted(ps))
        for s in op.touched_slots():
            last[s] = i
    return preds


def schedule(ops: list[PhysicalOp], m0: Mapping, library: GateLibrary = DEFAULT_LIBRARY,
             merge: bool = True) -> ScheduledCircuit:
    n = len(ops)
    preds = _dependencies(ops)
    succs: list[list[int]] = [[] for _ in range(n)]
    for i, ps in enumerate(preds):
        for p in ps:
            succs[p].append(i)
    dur = [library.duration(op.kind) for op in ops]
    # longest remaining chain including the op itself
    prio = [0.0] * n
    for i in reversed(range(n)):
        prio[i] = dur[i] + max((prio[j] for j in succs[i]), default=0.0)

    waiting = [len(ps) for ps in preds]
    ready = {i for i in range(n) if waiting[i] == 0}
    end = [0.0] * n
    done = [False] * n
    unit_free: dict[int, float] = {}
    placed: list[tuple[float, int, PhysicalOp, float, list[int]]] = []

    def data_ready(i):
        return max((end[p] for p in preds[i]), default=0.0)

    def est(i):
        return max([data_ready(i)] + [unit_free.get(u, 0.0) for u in ops[i].units])

    def finish(i, e):
        end[i] = e
        done[i] = True
        ready.discard(i)
        for j in succs[i]:
            waiting[j] -= 1
            if waiting[j] == 0:
                ready.add(j)

    while ready:
        i = min(ready, key=lambda k: (est(k), -prio[k], k))
        t = est(i)
        op = ops[i]
        partner = None
        if merge and op.kind in (Kind.X0, Kind.X1):
            other = 1 - op.slots[0].slot
            u = op.slots[0].unit
            for j in sorted(ready):
                oj = ops[j]
                if j != i and oj.kind in (Kind.X0, Kind.X1) and oj.slots[0] == SlotId(u, other) \
                        and data_ready(j) <= t:
                    partner = j
                    break
        if partner is None:
            e = t + dur[i]
            placed.append((t, i, op, dur[i], [i]))
            for u in op.units:
                unit_free[u] = e
            finish(i, e)
        else:
            a, b = (i, partner) if op.slots[0].slot == 0 else (partner, i)
            u = op.slots[0].unit
            merged = PhysicalOp(Kind.X01, (SlotId(u, 0), SlotId(u, 1)), "program",
                                ops[a].gates + ops[b].gates, ops[a].qubits + ops[b].qubits)
            d = library.duration(Kind.X01)
            e = t + d
            placed.append((t, min(a, b), merged, d, [a, b]))
            unit_free[u] = e
            finish(a, e)
            finish(b, e)
    if not all(done):
        raise AssertionError("cyclic dependency among physical ops")

    placed.sort(key=lambda r: (r[0], r[1]))
    sched_ops = [ScheduledOp(op, t, d) for t, _, op, d, _ in placed]
    owner = {}
    for k, (_, _, _, _, members) in enumerate(placed):
        for mbr in members:
            owner[mbr] = k
    sched_preds = []
    for k, (_, _, _, _, members) in enumerate(placed):
        ps = {owner[p] for mbr in members for p in preds[mbr]} - {k}
        sched_preds.append(sorted(ps))
    total = max((s.end for s in sched_ops), default=0.0)
    timeline, final = _timeline(sched_ops, m0, total)
    return ScheduledCircuit(sched_ops, timeline, total, m0, final, sched_preds)


def _timeline(sched_ops: list[ScheduledOp], m0: Mapping, total: float):
    layout = Layout(m0)
    active = {u for u in range(m0.num_units) if layout.occ[u] > 0}
    # ququart-state intervals per unit
    since: dict[int, float] = {u: 0.0 for u in range(m0.num_units) if layout.occ[u] == 2}
    spans: dict[int, list[tuple[float, float]]] = {}
    for s in sched_ops:
        before = {u: layout.occ[u] for u in s.op.units}
        layout.apply(s.op)
        for u in s.op.units:
            after = layout.occ[u]
            if after > 0:
                active.add(u)
            if before[u] < 2 <= after:
                since[u] = s.start
            elif before[u] == 2 and after < 2:
                spans.setdefault(u, []).append((since.pop(u), s.end))
    for u, t0 in since.items():
        spans.setdefault(u, []).append((t0, total))
    timeline = {}
    for u in sorted(active):
        segs, t = [], 0.0
        for a, b in sorted(spans.get(u, [])):
            if a > t:
                segs.append((t, a, "qubit"))
            segs.append((a, b, "ququart"))
            t = b
        if t < total or not segs:
            segs.append((t, total, "qubit"))
        timeline[u] = segs
    return timeline, layout.mapping()
