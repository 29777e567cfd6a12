"""Occupancy-aware gate classification and SWAP-insertion routing."""

from __future__ import annotations

import copy
import math
from collections import deque
from dataclasses import dataclass, field

from .arch import (ClassificationError, DistanceOracle, SlotGraph, SlotId, classify_pair,
                   operand_radices, slot_class)
from .circuit import Circuit, Gate, dependency_predecessors
from .gateset import Kind
from .mapper import Mapping


class RoutingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PhysicalOp:
    """One physical gate.

    ``slots`` follow the operand classes of ``kind``; unit-wide kinds (SWAP4, ENC,
    DEC) list slot 0 of each unit, ENC/DEC as (ququart unit, ancilla unit).
    ``gates`` carries the logical gates a program op realizes.
    """

    kind: Kind
    slots: tuple[SlotId, ...]
    origin: str = "program"
    gates: tuple[Gate, ...] = ()
    qubits: tuple[int, ...] = ()

    @property
    def units(self) -> tuple[int, ...]:
        out = []
        for s in self.slots:
            if s.unit not in out:
                out.append(s.unit)
        return tuple(out)

    @property
    def unit_wide(self) -> bool:
        return self.kind in (Kind.SWAP4, Kind.ENC, Kind.DEC)

    def touched_slots(self) -> tuple[SlotId, ...]:
        if self.unit_wide:
            return tuple(SlotId(u, k) for u in self.units for k in (0, 1))
        return self.slots


@dataclass
class RoutingPolicy:
    lookahead: int = 20
    lookahead_weight: float = 0.5
    through_penalty: float = 2.0
    livelock_factor: int = 3
    allow_swap4: bool = True
    max_swaps_per_gate: int = 2000


class Layout:
    """Mutable logical <-> slot bookkeeping used while routing."""

    def __init__(self, m: Mapping):
        self.num_units = m.num_units
        self.pos: list[SlotId] = list(m.slots)
        self.at: dict[SlotId, int] = {s: q for q, s in enumerate(self.pos)}
        self.occ: list[int] = list(m.occupancy())

    def mapping(self) -> Mapping:
        return Mapping(tuple(self.pos), self.num_units)

    def cls(self, s: SlotId) -> str:
        return slot_class(self.occ, s)

    def _exchange(self, a: SlotId, b: SlotId):
        qa, qb = self.at.pop(a, None), self.at.pop(b, None)
        if qa is not None:
            self.at[b] = qa
            self.pos[qa] = b
        if qb is not None:
            self.at[a] = qb
            self.pos[qb] = a

    def _recount(self, *units):
        for u in units:
            self.occ[u] = sum(1 for k in (0, 1) if SlotId(u, k) in self.at)

    def apply(self, op: PhysicalOp):
        k = op.kind
        if k == Kind.SWAP4:
            u, v = op.units
            for s in (0, 1):
                self._exchange(SlotId(u, s), SlotId(v, s))
            self._recount(u, v)
        elif k == Kind.DEC:
            u, r = op.units
            self._exchange(SlotId(u, 1), SlotId(r, 0))
            self._recount(u, r)
        elif k == Kind.ENC:
            u, r = op.units
            self._exchange(SlotId(r, 0), SlotId(u, 1))
            self._recount(u, r)
        elif k in (Kind.SWAPin, Kind.SWAP2, Kind.SWAPq0, Kind.SWAPq1, Kind.SWAP00,
                   Kind.SWAP01, Kind.SWAP11):
            if op.origin == "program":
                # a logical SWAP changes the data, not where the logical qubits live
                return
            a, b = op.slots
            self._exchange(a, b)
            self._recount(a.unit, b.unit)

    def involved(self, slots) -> tuple[int, ...]:
        return tuple(self.at[s] for s in slots if s in self.at)


def classify_two_qubit(occ, control: SlotId, target: SlotId, logical: str) -> Kind:
    """Physical kind realizing a logical CX/SWAP between two occupied slots."""
    same = control.unit == target.unit
    kind, _ = classify_pair(slot_class(occ, control), slot_class(occ, target), same, logical.lower())
    return kind


def single_qubit_kind(occ, s: SlotId) -> Kind:
    if occ[s.unit] == 2:
        return Kind.X0 if s.slot == 0 else Kind.X1
    return Kind.X


def two_qubit_op(layout: Layout, gate: Gate, origin: str = "program") -> PhysicalOp:
    a, b = (layout.pos[q] for q in gate.qubits)
    same = a.unit == b.unit
    kind, swapped = classify_pair(layout.cls(a), layout.cls(b), same, gate.name)
    slots = (b, a) if swapped else (a, b)
    return PhysicalOp(kind, slots, origin, (gate,), layout.involved(slots))


def swap_op(layout: Layout, x: SlotId, y: SlotId, origin: str = "routing") -> PhysicalOp:
    """Physical SWAP moving the content of ``x`` onto ``y``. Raises when forbidden."""
    cx, cy = layout.cls(x), layout.cls(y)
    if "void" in (cx, cy):
        raise ClassificationError("swap touches an unusable slot")
    if x.unit == y.unit:
        slots = (SlotId(x.unit, 0), SlotId(x.unit, 1))
        return PhysicalOp(Kind.SWAPin, slots, origin, (), layout.involved(slots))
    if cx == "empty" and cy == "empty":
        raise ClassificationError("swap between two empty units")
    if cx == "empty":
        x, y, cx, cy = y, x, cy, cx
    if cy == "empty":
        if cx == "q":
            return PhysicalOp(Kind.SWAP2, (x, y), origin, (), layout.involved((x, y)))
        slots = (SlotId(x.unit, 0), SlotId(y.unit, 0))
        return PhysicalOp(Kind.SWAP4, slots, origin, (), layout.involved(
            [SlotId(u, k) for u in (x.unit, y.unit) for k in (0, 1)]))
    kind, swapped = classify_pair(cx, cy, False, "swap")
    slots = (y, x) if swapped else (x, y)
    return PhysicalOp(kind, slots, origin, (), layout.involved(slots))


def swap4_op(layout: Layout, u: int, v: int, origin: str = "routing") -> PhysicalOp:
    slots = (SlotId(u, 0), SlotId(v, 0))
    return PhysicalOp(Kind.SWAP4, slots, origin, (), layout.involved(
        [SlotId(w, k) for w in (u, v) for k in (0, 1)]))


def executable(layout: Layout, gate: Gate, sg: SlotGraph) -> bool:
    if not gate.is_two_qubit:
        return True
    a, b = (layout.pos[q] for q in gate.qubits)
    return a.unit == b.unit or sg.topology.linked(a.unit, b.unit)


@dataclass
class RoutedCircuit:
    ops: list[PhysicalOp]
    initial: Mapping
    final: Mapping
    swaps: int = 0
    fallbacks: int = 0
    trace: list = field(default_factory=list)


def _op_cost(oracle: DistanceOracle, layout: Layout, op: PhysicalOp) -> float:
    if op.kind == Kind.SWAP4:
        return oracle.kind_cost(Kind.SWAP4, ("ququart", "ququart"))
    same = len(op.units) == 1
    classes = tuple(layout.cls(s) for s in op.slots)
    return oracle.kind_cost(op.kind, operand_radices(op.kind, same, classes))


class _Trial:
    """Cheap what-if view of a layout after one SWAP."""

    def __init__(self, layout: Layout, op: PhysicalOp):
        self.layout = layout
        self.moves: dict[int, SlotId] = {}
        occ = list(layout.occ)
        if op.kind == Kind.SWAP4:
            u, v = op.units
            for k in (0, 1):
                self._swap(SlotId(u, k), SlotId(v, k))
            occ[u], occ[v] = occ[v], occ[u]
        else:
            a, b = op.slots
            self._swap(a, b)
            if a.unit != b.unit:
                qa, qb = layout.at.get(a), layout.at.get(b)
                if (qa is None) != (qb is None):
                    occ[a.unit] += 1 if qa is None else -1
                    occ[b.unit] += 1 if qb is None else -1
        self.occ = tuple(occ)

    def _swap(self, a, b):
        qa, qb = self.layout.at.get(a), self.layout.at.get(b)
        if qa is not None:
            self.moves[qa] = b
        if qb is not None:
            self.moves[qb] = a

    def pos(self, q):
        return self.moves.get(q, self.layout.pos[q])


def route(c: Circuit, m: Mapping, sg: SlotGraph, policy: RoutingPolicy | None = None,
          oracle: DistanceOracle | None = None) -> RoutedCircuit:
    """SWAP-insertion routing over the dependency front layer with lookahead."""
    policy = policy or RoutingPolicy()
    oracle = oracle or DistanceOracle(sg)
    if len(m) != c.num_qubits:
        raise RoutingError("mapping does not cover every logical qubit")
    layout = Layout(m)
    preds = dependency_predecessors(c)
    succs: list[list[int]] = [[] for _ in c.gates]
    indeg = [len(p) for p in preds]
    for i, p in enumerate(preds):
        for j in p:
            succs[j].append(i)
    front = deque(i for i in range(len(c.gates)) if indeg[i] == 0)
    ops: list[PhysicalOp] = []
    result = RoutedCircuit(ops, m, m)
    V = sg.topology.num_units

    def retire(i):
        for j in succs[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                front.append(j)

    def emit_gate(i):
        g = c.gates[i]
        if g.is_two_qubit:
            op = two_qubit_op(layout, g)
        else:
            s = layout.pos[g.qubits[0]]
            op = PhysicalOp(single_qubit_kind(layout.occ, s), (s,), "program", (g,), g.qubits)
        ops.append(op)
        layout.apply(op)

    def emit_swap(op):
        ops.append(op)
        layout.apply(op)
        result.swaps += 1

    def lookahead_gates(blocked):
        out, seen = [], set(blocked)
        q = deque(blocked)
        while q and len(out) < policy.lookahead:
            i = q.popleft()
            for j in succs[i]:
                if j not in seen:
                    seen.add(j)
                    q.append(j)
                    if c.gates[j].is_two_qubit:
                        out.append(j)
                        if len(out) >= policy.lookahead:
                            break
        return out

    def gate_dist(occ, posf, i):
        a, b = (posf(q) for q in c.gates[i].qubits)
        return oracle.distance(occ, a, b)

    last_swap = None
    while front:
        progressed = True
        while progressed:
            progressed = False
            for _ in range(len(front)):
                i = front.popleft()
                if executable(layout, c.gates[i], sg):
                    emit_gate(i)
                    retire(i)
                    progressed = True
                else:
                    front.append(i)
        if not front:
            break
        blocked = sorted(front)
        ext = lookahead_gates(blocked)
        base_posf = lambda q: layout.pos[q]  # noqa: E731
        occ0 = tuple(layout.occ)
        best_front = sum(gate_dist(occ0, base_posf, i) for i in blocked)
        stall = 0
        inserted = 0
        while not any(executable(layout, c.gates[i], sg) for i in blocked):
            if stall >= policy.livelock_factor * V:
                _fallback(layout, c, blocked, oracle, sg, emit_swap)
                result.fallbacks += 1
                break
            cand = _candidate_swaps(layout, c, blocked, sg, policy)
            if not cand:
                raise RoutingError("no legal SWAP available")
            best_key, best_op, best_fs = None, None, None
            for idx, op in enumerate(cand):
                key_id = (op.kind, op.slots)
                if key_id == last_swap and len(cand) > 1:
                    continue
                trial = _Trial(layout, op)
                fs = sum(gate_dist(trial.occ, trial.pos, i) for i in blocked)
                es = sum(gate_dist(trial.occ, trial.pos, i) for i in ext)
                mult = policy.through_penalty if op.kind in (Kind.SWAP00, Kind.SWAP01, Kind.SWAP11, Kind.SWAP4) else 1.0
                score = mult * _op_cost(oracle, layout, op) + fs + policy.lookahead_weight * es
                key = (score, idx)
                if best_key is None or key < best_key:
                    best_key, best_op, best_fs = key, op, fs
            emit_swap(best_op)
            last_swap = (best_op.kind, best_op.slots)
            inserted += 1
            if inserted > policy.max_swaps_per_gate:
                raise RoutingError("routing did not converge")
            if best_fs < best_front - 1e-12:
                best_front, stall = best_fs, 0
            else:
                stall += 1
    result.final = layout.mapping()
    return result


def _candidate_swaps(layout: Layout, c: Circuit, blocked, sg: SlotGraph, policy: RoutingPolicy):
    out, seen = [], set()
    for i in blocked:
        for q in c.gates[i].qubits:
            p = layout.pos[q]
            for y in sg.neighbors(p):
                try:
                    op = swap_op(layout, p, y)
                except ClassificationError:
                    continue
                if op.kind == Kind.SWAP4 and not policy.allow_swap4:
                    continue
                key = (op.kind, op.slots) if op.kind != Kind.SWAP4 else (op.kind, frozenset(op.units))
                if key not in seen:
                    seen.add(key)
                    out.append(op)
    return out


def _fallback(layout, c, blocked, oracle, sg, emit_swap):
    """Walk the farthest-apart front gate's control along its cheapest path."""
    far = max(blocked, key=lambda i: (oracle.distance(tuple(layout.occ), *(layout.pos[q] for q in c.gates[i].qubits)), -i))
    qa, qb = c.gates[far].qubits
    for _ in range(4 * len(sg.nodes)):
        if executable(layout, c.gates[far], sg):
            return
        path = oracle.path(tuple(layout.occ), layout.pos[qa], layout.pos[qb])
        if len(path) < 2:
            raise RoutingError("no route between front-gate operands")
        emit_swap(swap_op(layout, path[0], path[1]))
    raise RoutingError("fallback routing did not converge")


# --- full-ququart baseline -------------------------------------------------------------

def route_fq(c: Circuit, m: Mapping, sg: SlotGraph) -> RoutedCircuit:
    """Routing for the fully-encoded baseline.

    Pairs stay encoded except around an operation leaving the pair: the pair is
    decoded into an empty neighbour, the gate runs on bare qubits and the pair is
    re-encoded. Ququarts move only by whole-unit SWAP4.
    """
    topo = sg.topology
    layout = Layout(m)
    ops: list[PhysicalOp] = []
    result = RoutedCircuit(ops, m, m)

    def emit(op):
        ops.append(op)
        layout.apply(op)
        if op.kind in (Kind.SWAP4, Kind.SWAP2):
            result.swaps += 1

    def move_unit(u, v):
        """Exchange the contents of linked units u and v."""
        if layout.occ[u] == 2 or layout.occ[v] == 2:
            emit(swap4_op(layout, u, v))
        elif layout.occ[u] or layout.occ[v]:
            src, dst = (u, v) if layout.occ[u] else (v, u)
            emit(PhysicalOp(Kind.SWAP2, (SlotId(src, 0), SlotId(dst, 0)), "routing", (),
                            layout.involved((SlotId(src, 0),))))

    def bring_adjacent(u_q, w_q):
        """Move the unit of qubit u_q next to the unit of w_q."""
        for _ in range(topo.num_units * 2):
            u, w = layout.pos[u_q].unit, layout.pos[w_q].unit
            if u == w or topo.linked(u, w):
                return
            path = topo.shortest_path(u, w)
            move_unit(u, path[1])
        raise RoutingError("could not bring units together")

    def ensure_empty_neighbor(u, forbidden):
        for v in topo.neighbors(u):
            if layout.occ[v] == 0 and v not in forbidden:
                return v
        # pull the nearest empty unit next to u without crossing protected units
        best = None
        protected = set(forbidden) | {u}
        for v in topo.neighbors(u):
            if v in protected:
                continue
            for e in range(topo.num_units):
                if layout.occ[e] != 0 or e in protected:
                    continue
                p = topo.shortest_path(e, v, avoid=protected)
                if p is not None and (best is None or (len(p), e, v) < (len(best), best[0], best[-1])):
                    best = p
        if best is None:
            raise RoutingError(f"no empty unit can reach unit {u} for decoding")
        for a, b in zip(best, best[1:]):
            move_unit(a, b)
        return best[-1]

    def move_to(q, dst, avoid=frozenset()):
        src = layout.pos[q].unit
        if src == dst:
            return
        path = topo.shortest_path(src, dst, avoid=avoid)
        if path is None:
            raise RoutingError("no path to meeting site")
        for x, y in zip(path, path[1:]):
            move_unit(x, y)

    def meeting_sites(a, b):
        da = topo.bfs_distances(layout.pos[a].unit)
        db = topo.bfs_distances(layout.pos[b].unit)
        sites = [(x, y) for x in range(topo.num_units) for y in topo.neighbors(x)]
        return sorted(sites, key=lambda p: (da[p[0]] + db[p[1]], p))

    def cross_gate(g, site):
        a, b = g.qubits
        if site is None:
            bring_adjacent(a, b)
        else:
            move_to(a, site[0])
            move_to(b, site[1], avoid={site[0]})
        ua, ub = layout.pos[a].unit, layout.pos[b].unit
        if not topo.linked(ua, ub):
            raise RoutingError("operands not adjacent")
        decoded = []
        for q, u, other in ((a, ua, ub), (b, ub, ua)):
            if layout.occ[u] != 2:
                continue
            r = ensure_empty_neighbor(u, {other} | {d[1] for d in decoded})
            if layout.pos[q].slot == 1:
                emit(swap_op(layout, SlotId(u, 0), SlotId(u, 1), origin="encode"))
            slots = (SlotId(u, 0), SlotId(r, 0))
            emit(PhysicalOp(Kind.DEC, slots, "encode", (), layout.involved([SlotId(u, 0), SlotId(u, 1)])))
            decoded.append((u, r))
        if layout.pos[a].unit != ua or layout.pos[b].unit != ub or not topo.linked(ua, ub):
            raise RoutingError("decode ancilla search displaced an operand")
        emit(two_qubit_op(layout, g))
        for u, r in decoded:
            slots = (SlotId(u, 0), SlotId(r, 0))
            op = PhysicalOp(Kind.ENC, slots, "encode", (), layout.involved([SlotId(u, 0), SlotId(r, 0)]))
            emit(op)

    for g in c.gates:
        if not g.is_two_qubit:
            s = layout.pos[g.qubits[0]]
            op = PhysicalOp(single_qubit_kind(layout.occ, s), (s,), "program", (g,), g.qubits)
            emit(op)
            continue
        a, b = g.qubits
        if layout.pos[a].unit == layout.pos[b].unit:
            emit(two_qubit_op(layout, g))
            continue
        ok = False
        for site in [None] + meeting_sites(a, b):
            saved = (copy.deepcopy(layout.__dict__), len(ops), result.swaps)
            try:
                cross_gate(g, site)
                ok = True
                break
            except RoutingError:
                layout.__dict__.update(saved[0])
                del ops[saved[1]:]
                result.swaps = saved[2]
        if not ok:
            raise RoutingError(f"no decode arrangement found for {g}")
    result.final = layout.mapping()
    return result
