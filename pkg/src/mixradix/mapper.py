"""Interaction graphs and greedy placement onto the slot graph."""

from __future__ import annotations

from dataclasses import dataclass

from .arch import DistanceOracle, PhysicalTopology, SlotGraph, SlotId
from .circuit import Circuit, asap_layers


class CapacityError(ValueError):
    pass


class InteractionGraph:
    """Weighted undirected graph over logical qubits.

    Nodes are ints for single qubits and sorted tuples for collapsed pairs.
    """

    def __init__(self, nodes=(), weights=None):
        self.adj: dict = {v: {} for v in nodes}
        for (a, b), w in (weights or {}).items():
            self.add_weight(a, b, w)

    @property
    def nodes(self) -> list:
        return list(self.adj)

    def add_weight(self, a, b, w: float):
        self.adj.setdefault(a, {})
        self.adj.setdefault(b, {})
        self.adj[a][b] = self.adj[a].get(b, 0.0) + w
        self.adj[b][a] = self.adj[b].get(a, 0.0) + w

    def weight(self, a, b) -> float:
        return self.adj.get(a, {}).get(b, 0.0)

    def neighbors(self, v):
        return self.adj[v].keys()

    def edges(self) -> list[tuple]:
        seen = []
        order = {v: i for i, v in enumerate(self.adj)}
        for a, nbrs in self.adj.items():
            for b, w in nbrs.items():
                if order[a] < order[b]:
                    seen.append((a, b, w))
        return seen

    def num_edges(self) -> int:
        return len(self.edges())

    def total(self) -> float:
        return sum(w for _, _, w in self.edges())

    def average_weight(self) -> float | None:
        e = self.edges()
        return sum(w for *_, w in e) / len(e) if e else None

    def copy(self) -> InteractionGraph:
        g = InteractionGraph()
        g.adj = {v: dict(n) for v, n in self.adj.items()}
        return g

    def scaled(self, factor: float) -> InteractionGraph:
        g = InteractionGraph()
        g.adj = {v: {u: w * factor for u, w in n.items()} for v, n in self.adj.items()}
        return g


def interaction_graph(c: Circuit) -> InteractionGraph:
    g = InteractionGraph(range(c.num_qubits))
    layers = asap_layers(c)
    for gate, s in zip(c.gates, layers):
        if gate.is_two_qubit:
            i, j = gate.qubits
            g.add_weight(i, j, 1.0 / s)
    return g


def total_weight(g: InteractionGraph, i) -> float:
    return sum(g.adj[i].values())


def center_unit(t: PhysicalTopology) -> int:
    best, best_ecc = 0, None
    for u in range(t.num_units):
        ecc = max(t.bfs_distances(u).values())
        if best_ecc is None or ecc < best_ecc:
            best, best_ecc = u, ecc
    return best


@dataclass(frozen=True)
class Mapping:
    """Logical qubit -> slot assignment."""

    slots: tuple[SlotId, ...]
    num_units: int

    def __post_init__(self):
        if len(set(self.slots)) != len(self.slots):
            raise ValueError("two logical qubits share a slot")
        occ = self.occupancy()
        for s in self.slots:
            if s.slot == 1 and SlotId(s.unit, 0) not in self.slots:
                raise ValueError(f"slot 1 of unit {s.unit} used while slot 0 is free")
        if any(c > 2 for c in occ):
            raise ValueError("unit over capacity")

    def __getitem__(self, q: int) -> SlotId:
        return self.slots[q]

    def __len__(self) -> int:
        return len(self.slots)

    def occupancy(self) -> tuple[int, ...]:
        occ = [0] * self.num_units
        for s in self.slots:
            occ[s.unit] += 1
        return tuple(occ)

    def pairs(self) -> list[tuple[int, int]]:
        """Co-resident logical pairs as (slot-0 qubit, slot-1 qubit)."""
        inv = {s: q for q, s in enumerate(self.slots)}
        out = []
        for q, s in enumerate(self.slots):
            if s.slot == 1:
                out.append((inv[SlotId(s.unit, 0)], q))
        return sorted(out)

    def to_json(self) -> list[list[int]]:
        return [[s.unit, s.slot] for s in self.slots]


def eqm_map(g: InteractionGraph, sg: SlotGraph, mode: str = "mixed_radix", plan=None,
            oracle: DistanceOracle | None = None, radius: int = 2) -> Mapping:
    """Greedy weight-driven placement.

    ``mode`` is ``mixed_radix`` (slot 1 may open on any half-filled unit),
    ``qubit_only`` (slot 0 only) or ``plan`` (only the ordered pairs of ``plan``
    share a unit, host in slot 0).
    """
    topo = sg.topology
    oracle = oracle or DistanceOracle(sg)
    qubits = sorted(v for v in g.nodes if isinstance(v, int))
    n = len(qubits)
    pairs = [tuple(p) for p in (plan or ())]
    if mode != "plan" and pairs:
        raise ValueError("a plan is only meaningful in plan mode")
    paired = {q for p in pairs for q in p}
    if len(paired) != 2 * len(pairs):
        raise ValueError("plan pairs must be disjoint")
    groups = [p for p in pairs] + [(q,) for q in qubits if q not in paired]
    units_needed = len(groups) if mode != "mixed_radix" else (n + 1) // 2
    if units_needed > topo.num_units:
        raise CapacityError(f"{n} qubits need {units_needed} units, topology has {topo.num_units}")

    W = {q: total_weight(g, q) for q in qubits}
    group_of = {q: grp for grp in groups for q in grp}
    center = center_unit(topo)
    center_dist = topo.bfs_distances(center)

    pos: dict[int, SlotId] = {}
    occ = [0] * topo.num_units

    def place(grp, unit_slots):
        for q, s in zip(grp, unit_slots):
            pos[q] = s
            occ[s.unit] += 1

    if n == 0:
        return Mapping((), topo.num_units)
    first = max(qubits, key=lambda q: (W[q], -q))
    grp = group_of[first]
    if len(grp) == 2:
        place(grp, [SlotId(center, 0), SlotId(center, 1)])
    else:
        place(grp, [SlotId(center, 0)])
    remaining = [grp2 for grp2 in groups if grp2 is not grp]

    while remaining:
        def attach(grp2):
            return sum(g.weight(q, j) for q in grp2 for j in pos)
        grp = max(remaining, key=lambda gr: (attach(gr), sum(W[q] for q in gr), -min(gr)))
        remaining.remove(grp)
        cands = _candidates(grp, mode, occ, topo, radius, pos)
        best_key, best = None, None
        for cand in cands:
            hyp = list(occ)
            for s in cand:
                hyp[s.unit] += 1
            hyp = tuple(hyp)
            score = 0.0
            for q, s in zip(grp, cand):
                for j, pj in pos.items():
                    w = g.weight(q, j)
                    if w:
                        score += w / oracle.distance(hyp, s, pj)
            key = (-score, center_dist[cand[0].unit], cand[0].unit, cand[0].slot)
            if best_key is None or key < best_key:
                best_key, best = key, cand
        place(grp, best)
    return Mapping(tuple(pos[q] for q in qubits), topo.num_units)


def _candidates(grp, mode, occ, topo, radius, pos):
    used = {s.unit for s in pos.values()}
    near = set()
    for u in used:
        near.update(v for v, d in topo.bfs_distances(u).items() if d <= radius)

    def options(units):
        out = []
        for u in sorted(units):
            if len(grp) == 2:
                if occ[u] == 0:
                    out.append((SlotId(u, 0), SlotId(u, 1)))
            elif occ[u] == 0:
                out.append((SlotId(u, 0),))
            elif occ[u] == 1 and mode == "mixed_radix":
                out.append((SlotId(u, 1),))
        return out

    cands = options(near)
    return cands or options(range(topo.num_units))


def mapping_from_pos(pos: dict[int, SlotId], num_units: int) -> Mapping:
    return Mapping(tuple(pos[q] for q in sorted(pos)), num_units)
