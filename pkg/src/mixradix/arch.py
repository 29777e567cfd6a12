"""Physical topologies, the expanded slot graph and success-weighted slot distances."""

from __future__ import annotations

import heapq
import math
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple

from .gateset import DEFAULT_LIBRARY, CoherenceParams, GateLibrary, Kind, log_gate_success


class SlotId(NamedTuple):
    unit: int
    slot: int


@dataclass(frozen=True)
class PhysicalTopology:
    num_units: int
    links: frozenset = field(default_factory=frozenset)
    name: str = "custom"

    def __post_init__(self):
        norm = set()
        for link in self.links:
            u, v = tuple(link)
            if u == v:
                raise ValueError(f"self-link on unit {u}")
            if not (0 <= u < self.num_units and 0 <= v < self.num_units):
                raise ValueError(f"link {(u, v)} out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "links", frozenset(norm))
        adj: list[list[int]] = [[] for _ in range(self.num_units)]
        for u, v in sorted(norm):
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        if self.num_units and len(self.bfs_distances(0)) != self.num_units:
            raise ValueError("topology is disconnected")

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def linked(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def bfs_distances(self, src: int) -> dict[int, int]:
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for v in self._adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        return dist

    def shortest_path(self, src: int, dst: int, avoid=frozenset()) -> list[int] | None:
        prev = {src: None}
        q = deque([src])
        while q:
            u = q.popleft()
            if u == dst:
                break
            for v in self._adj[u]:
                if v not in prev and (v not in avoid or v == dst):
                    prev[v] = u
                    q.append(v)
        if dst not in prev:
            return None
        path = [dst]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]


def grid_topology(n: int) -> PhysicalTopology:
    if n < 1:
        raise ValueError("grid needs n >= 1")
    cols = math.ceil(math.sqrt(n))
    links = set()
    for u in range(n):
        r, c = divmod(u, cols)
        if c + 1 < cols and u + 1 < n:
            links.add((u, u + 1))
        if u + cols < n:
            links.add((u, u + cols))
    return PhysicalTopology(n, frozenset(links), name=f"grid{n}")


def ring_topology(n: int) -> PhysicalTopology:
    if n < 1:
        raise ValueError("ring needs n >= 1")
    links = {(i, (i + 1) % n) for i in range(n)} if n > 2 else ({(0, 1)} if n == 2 else set())
    return PhysicalTopology(n, frozenset(links), name=f"ring{n}")


def line_topology(n: int) -> PhysicalTopology:
    return PhysicalTopology(n, frozenset((i, i + 1) for i in range(n - 1)), name=f"line{n}")


def parse_topology(text: str, name: str = "custom") -> PhysicalTopology:
    n = None
    links = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "units" and len(tok) == 2:
                n = int(tok[1])
            elif tok[0] == "link" and len(tok) == 3:
                links.add((int(tok[1]), int(tok[2])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise ValueError("missing 'units' header")
    return PhysicalTopology(n, frozenset(links), name=name)


def heavy_hex_topology() -> PhysicalTopology:
    text = resources.files("mixradix").joinpath("data/heavy_hex_65.txt").read_text()
    return parse_topology(text, name="heavy_hex65")


def build_topology(kind: str, n: int | str | None = None) -> PhysicalTopology:
    if kind == "grid":
        return grid_topology(int(n))
    if kind == "ring":
        return ring_topology(int(n))
    if kind == "line":
        return line_topology(int(n))
    if kind == "heavy_hex":
        if n not in (None, 65):
            raise ValueError("heavy_hex topology is fixed at 65 units")
        return heavy_hex_topology()
    if kind == "file":
        with open(n) as fh:
            return parse_topology(fh.read(), name=str(n))
    raise ValueError(f"unknown topology kind {kind!r}")


@dataclass(frozen=True)
class SlotGraph:
    topology: PhysicalTopology
    nodes: tuple[SlotId, ...]
    edges: frozenset

    def neighbors(self, s: SlotId) -> list[SlotId]:
        u, k = s
        out = [SlotId(u, 1 - k)]
        for v in self.topology.neighbors(u):
            out += [SlotId(v, 0), SlotId(v, 1)]
        return out

    def degree(self, s: SlotId) -> int:
        return 2 * self.topology.degree(s.unit) + 1


def expand_slot_graph(t: PhysicalTopology) -> SlotGraph:
    nodes = tuple(SlotId(u, k) for u in range(t.num_units) for k in (0, 1))
    edges = {frozenset((SlotId(u, 0), SlotId(u, 1))) for u in range(t.num_units)}
    for u, v in t.links:
        for a in (0, 1):
            for b in (0, 1):
                edges.add(frozenset((SlotId(u, a), SlotId(v, b))))
    return SlotGraph(t, nodes, frozenset(edges))


# --- occupancy-aware classification -------------------------------------------------

def slot_class(occ, s: SlotId) -> str:
    """'q' bare qubit, '0'/'1' encoded slot, 'empty' free unit, 'void' unusable slot 1."""
    count = occ[s.unit]
    if count == 2:
        return str(s.slot)
    if s.slot == 1:
        return "void"
    return "q" if count == 1 else "empty"


def _moving(cls: str) -> str:
    return "q" if cls == "empty" else cls


class ClassificationError(ValueError):
    pass


def classify_pair(cls_a: str, cls_b: str, same_unit: bool, logical: str):
    """Kind and operand order for a logical CX (a controls b) or SWAP from slot classes.

    Returns ``(kind, swapped)`` where ``swapped`` says the operands must be emitted
    as (b, a) to match the kind's operand classes.
    """
    if "void" in (cls_a, cls_b):
        raise ClassificationError("operand sits on an unusable slot")
    a, b = _moving(cls_a), _moving(cls_b)
    if same_unit:
        if a == "q" or b == "q":
            raise ClassificationError("internal gate on a unit that is not a ququart")
        if logical == "cx":
            return (Kind.CX0, False) if a == "0" else (Kind.CX1, False)
        return Kind.SWAPin, a == "1"
    if logical == "cx":
        if a == "q" and b == "q":
            return Kind.CX2, False
        return Kind("CX" + a + b), False
    if a == "q" and b == "q":
        return Kind.SWAP2, False
    if a != "q" and b == "q":
        return Kind("SWAPq" + a), True
    if a == "q":
        return Kind("SWAPq" + b), False
    lo, hi = sorted((a, b))
    return Kind("SWAP" + lo + hi), a > b


def operand_radices(kind: Kind, same_unit: bool, classes=()) -> tuple[str, ...]:
    if same_unit:
        return ("ququart",)
    if kind == Kind.SWAP4:
        return ("ququart", "ququart")
    return tuple("qubit" if _moving(c) == "q" else "ququart" for c in classes)


class DistanceOracle:
    """Caches per-occupancy single-source SWAP costs on the slot graph.

    Costs are negative log success probabilities. Occupancy is a tuple of
    per-unit qubit counts; the cache is keyed on it, so a changed occupancy
    is a cache miss rather than a stale hit.
    """

    def __init__(self, sg: SlotGraph, library: GateLibrary = DEFAULT_LIBRARY,
                 coh: CoherenceParams | None = None, max_snapshots: int = 256):
        self.sg = sg
        self.topology = sg.topology
        self.library = library
        self.coh = coh or CoherenceParams()
        self._cost_cache: dict = {}
        self._cache: OrderedDict = OrderedDict()
        self.max_snapshots = max_snapshots

    def kind_cost(self, kind: Kind, radices: tuple[str, ...]) -> float:
        key = (kind, radices)
        c = self._cost_cache.get(key)
        if c is None:
            c = -log_gate_success(self.library[kind], radices, self.coh)
            self._cost_cache[key] = c
        return c

    def hop_cost(self, occ, x: SlotId, y: SlotId) -> float:
        """SWAP cost of moving the qubit at ``x`` onto ``y``; inf when forbidden."""
        cx, cy = slot_class(occ, x), slot_class(occ, y)
        if cy == "void" or cx == "void":
            return math.inf
        same = x.unit == y.unit
        if same:
            return self.kind_cost(Kind.SWAPin, ("ququart",))
        mx = _moving(cx)
        if cy == "empty":
            if mx == "q":
                return self.kind_cost(Kind.SWAP2, ("qubit", "qubit"))
            return self.kind_cost(Kind.SWAP4, ("ququart", "ququart"))
        kind, _ = classify_pair(mx, cy, False, "swap")
        return self.kind_cost(kind, operand_radices(kind, False, (mx, cy)))

    def cx_cost(self, occ, p: SlotId, b: SlotId) -> float:
        """Cheaper orientation of a CX between the qubit at ``p`` and the one at ``b``."""
        cp, cb = slot_class(occ, p), slot_class(occ, b)
        if "void" in (cp, cb):
            return math.inf
        same = p.unit == b.unit
        if not same and not self.topology.linked(p.unit, b.unit):
            return math.inf
        best = math.inf
        for x, y in ((cp, cb), (cb, cp)):
            try:
                kind, _ = classify_pair(x, y, same, "cx")
            except ClassificationError:
                return math.inf
            best = min(best, self.kind_cost(kind, operand_radices(kind, same, (x, y))))
        return best

    def _snapshot(self, occ):
        occ = tuple(occ)
        snap = self._cache.get(occ)
        if snap is None:
            snap = {}
            self._cache[occ] = snap
            if len(self._cache) > self.max_snapshots:
                self._cache.popitem(last=False)
        else:
            self._cache.move_to_end(occ)
        return snap

    def swap_costs(self, occ, src: SlotId):
        """Dijkstra from ``src``: returns (cost, predecessor) maps over slots."""
        occ = tuple(occ)
        snap = self._snapshot(occ)
        hit = snap.get(src)
        if hit is not None:
            return hit
        dist = {src: 0.0}
        prev = {src: None}
        heap = [(0.0, src)]
        done = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            for y in self.sg.neighbors(x):
                if y in done:
                    continue
                c = self.hop_cost(occ, x, y)
                if c == math.inf:
                    continue
                nd = d + c
                if nd < dist.get(y, math.inf):
                    dist[y] = nd
                    prev[y] = x
                    heapq.heappush(heap, (nd, y))
        snap[src] = (dist, prev)
        return dist, prev

    def distance(self, occ, a: SlotId, b: SlotId) -> float:
        if a == b:
            raise ValueError("distance needs distinct slots")
        dist, _ = self.swap_costs(occ, a)
        best = math.inf
        for p in self.sg.neighbors(b):
            d = dist.get(p)
            if d is None:
                continue
            best = min(best, d + self.cx_cost(occ, p, b))
        return best

    def path(self, occ, a: SlotId, b: SlotId) -> list[SlotId]:
        """Slots visited by the qubit at ``a`` on the cheapest route to interact with ``b``."""
        dist, prev = self.swap_costs(occ, a)
        best, end = math.inf, None
        for p in self.sg.neighbors(b):
            d = dist.get(p)
            if d is None:
                continue
            c = d + self.cx_cost(occ, p, b)
            if c < best:
                best, end = c, p
        if end is None:
            return []
        out = [end]
        while prev[out[-1]] is not None:
            out.append(prev[out[-1]])
        return out[::-1]

    def clear(self):
        self._cache.clear()


def slot_distance(g: SlotGraph, occ, a: SlotId, b: SlotId,
                  library: GateLibrary = DEFAULT_LIBRARY,
                  coh: CoherenceParams | None = None) -> float:
    return DistanceOracle(g, library, coh).distance(occ, a, b)
