"""Benchmark circuit generators: Cuccaro adder, CNU, BV, QRAM and graph QAOA."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .circuit import Circuit, Gate

PI = math.pi


@dataclass(frozen=True)
class Graph:
    num_nodes: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"self-loop on {u}")
            if not (0 <= u < self.num_nodes and 0 <= v < self.num_nodes):
                raise ValueError(f"edge {(u, v)} out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def toffoli_gates(c1: int, c2: int, t: int) -> list[Gate]:
    """Six-CX Toffoli with T gates written as RZ(+-pi/4)."""
    t_, tdg = PI / 4, -PI / 4
    return [
        Gate("h", (t,)),
        Gate("cx", (c2, t)),
        Gate("rz", (t,), tdg),
        Gate("cx", (c1, t)),
        Gate("rz", (t,), t_),
        Gate("cx", (c2, t)),
        Gate("rz", (t,), tdg),
        Gate("cx", (c1, t)),
        Gate("rz", (c2,), t_),
        Gate("rz", (t,), t_),
        Gate("h", (t,)),
        Gate("cx", (c1, c2)),
        Gate("rz", (c1,), t_),
        Gate("rz", (c2,), tdg),
        Gate("cx", (c1, c2)),
    ]


def lower_toffolis(c: Circuit) -> Circuit:
    out: list[Gate] = []
    for g in c.gates:
        if g.name == "ccx":
            out.extend(toffoli_gates(*g.qubits))
        else:
            out.append(g)
    return Circuit(c.num_qubits, tuple(out))


def cuccaro(size: int) -> Circuit:
    """Ripple-carry adder on ``size`` qubits; odd sizes drop the carry-out."""
    if size < 3:
        raise ValueError("cuccaro needs size >= 3")
    k = (size - 1) // 2
    has_cout = size % 2 == 0
    cin = 0
    b = [1 + 2 * i for i in range(k)]
    a = [2 + 2 * i for i in range(k)]
    g: list[Gate] = []

    def maj(x, y, z):
        g.extend([Gate("cx", (z, y)), Gate("cx", (z, x)), Gate("ccx", (x, y, z))])

    def uma(x, y, z):
        g.extend([Gate("ccx", (x, y, z)), Gate("cx", (z, x)), Gate("cx", (x, y))])

    carry = [cin] + a[:-1]
    for i in range(k):
        maj(carry[i], b[i], a[i])
    if has_cout:
        g.append(Gate("cx", (a[-1], size - 1)))
    for i in reversed(range(k)):
        uma(carry[i], b[i], a[i])
    return Circuit(size, tuple(g))


def cnu(size: int) -> Circuit:
    """V-chain multi-controlled X over ceil(size/2) controls.

    Qubits: controls 0..c-1, target c, ancillas c+1..2c-2.
    """
    if size < 3:
        raise ValueError("cnu needs size >= 3")
    c = math.ceil(size / 2)
    ctrl = list(range(c))
    target = c
    anc = list(range(c + 1, 2 * c - 1))
    n = 2 * c - 1
    if c == 2:
        return Circuit(n, (Gate("ccx", (0, 1, target)),))
    compute = [Gate("ccx", (ctrl[0], ctrl[1], anc[0]))]
    for i in range(2, c - 1):
        compute.append(Gate("ccx", (ctrl[i], anc[i - 2], anc[i - 1])))
    top = Gate("ccx", (ctrl[c - 1], anc[c - 3], target))
    return Circuit(n, tuple(compute + [top] + compute[::-1]))


def bernstein_vazirani(size: int, seed: int = 0) -> Circuit:
    if size < 3:
        raise ValueError("bv needs size >= 3")
    rng = random.Random(seed)
    n_data = size - 1
    t = n_data
    secret = [rng.random() < 0.5 for _ in range(n_data)]
    if not any(secret):
        secret[rng.randrange(n_data)] = True
    g = [Gate("x", (t,))]
    g += [Gate("h", (q,)) for q in range(size)]
    g += [Gate("cx", (q, t)) for q in range(n_data) if secret[q]]
    g += [Gate("h", (q,)) for q in range(size)]
    return Circuit(size, tuple(g))


def qram(size: int, seed: int = 0) -> Circuit:
    """Bucket-brigade style lookup: address bits fan a one-hot token out over
    2^k router cells through controlled swaps, cells copy data onto the bus,
    then the fan-out is undone. Leftover qubits widen the bus."""
    if size < 4:
        raise ValueError("qram needs size >= 4")
    k = 1
    while (k + 1) + 2 ** (k + 1) + 1 <= size:
        k += 1
    cells = list(range(k, k + 2 ** k))
    bus = list(range(k + 2 ** k, size))
    rng = random.Random(seed)
    data = [[rng.random() < 0.5 for _ in bus] for _ in cells]
    for row in data:
        if not any(row):
            row[rng.randrange(len(bus))] = True

    fan: list[Gate] = [Gate("x", (cells[0],))]
    for j in range(k):
        for i in range(2 ** j):
            c, t1, t2 = j, cells[i], cells[i + 2 ** j]
            fan += [Gate("cx", (t2, t1)), Gate("ccx", (c, t1, t2)), Gate("cx", (t2, t1))]
    body = [Gate("cx", (cells[i], bus[b])) for i in range(len(cells)) for b in range(len(bus)) if data[i][b]]
    return Circuit(size, tuple(fan + body + fan[::-1]))


def gen_graph(kind: str, *, rows: int = 0, cols: int = 0, depth: int = 0,
              n: int = 0, density: float = 0.3, seed: int = 0) -> Graph:
    if kind in ("cylinder", "torus"):
        if rows < 3 or cols < 2 or (kind == "torus" and cols < 3):
            raise ValueError(f"invalid {kind} dimensions {rows}x{cols}")
        edges = set()
        idx = lambda r, c: r * cols + c  # noqa: E731
        for r in range(rows):
            for c in range(cols):
                # rows always wrap; columns wrap only on the torus
                edges.add((idx(r, c), idx((r + 1) % rows, c)))
                if c + 1 < cols:
                    edges.add((idx(r, c), idx(r, c + 1)))
                elif kind == "torus":
                    edges.add((idx(r, c), idx(r, 0)))
        return Graph(rows * cols, frozenset(edges))
    if kind == "welded-tree":
        if depth < 1:
            raise ValueError("welded tree depth must be >= 1")
        per_tree = 2 ** (depth + 1) - 1
        edges = set()
        for off in (0, per_tree):
            for i in range(1, per_tree):
                edges.add((off + (i - 1) // 2, off + i))
        first_leaf = 2 ** depth - 1
        left = [first_leaf + i for i in range(2 ** depth)]
        right = [per_tree + first_leaf + i for i in range(2 ** depth)]
        rng = random.Random(seed)
        rng.shuffle(left)
        rng.shuffle(right)
        # alternating cycle through the leaves of both trees
        m = len(left)
        for i in range(m):
            edges.add((left[i], right[i]))
            if m > 1:
                edges.add((right[i], left[(i + 1) % m]))
        return Graph(2 * per_tree, frozenset(edges))
    if kind == "random":
        if n < 2 or not 0 <= density <= 1:
            raise ValueError("random graph needs n >= 2 and density in [0, 1]")
        rng = random.Random(seed)
        edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density}
        return Graph(n, frozenset(edges))
    raise ValueError(f"unknown graph kind {kind!r}")


def gen_qaoa(g: Graph, seed: int = 0) -> Circuit:
    edges = g.sorted_edges()
    random.Random(seed).shuffle(edges)
    gates = []
    for u, v in edges:
        gates += [Gate("cx", (u, v)), Gate("z", (v,)), Gate("cx", (u, v))]
    return Circuit(g.num_nodes, tuple(gates))


def qaoa_graph_for_size(kind: str, size: int, seed: int = 0) -> Graph:
    """Pick graph parameters whose node count is as close to ``size`` as the family allows."""
    if kind == "random":
        return gen_graph("random", n=size, density=0.3, seed=seed)
    if kind in ("cylinder", "torus"):
        rows = max(3, int(math.isqrt(size)))
        cols = max(3 if kind == "torus" else 2, size // rows)
        return gen_graph(kind, rows=rows, cols=cols)
    if kind == "welded-tree":
        depth = 1
        while 2 * (2 ** (depth + 2) - 1) <= size:
            depth += 1
        return gen_graph("welded-tree", depth=depth, seed=seed)
    raise ValueError(f"unknown graph kind {kind!r}")


BENCHMARKS = ("cuccaro", "cnu", "bv", "qram", "qaoa-random", "qaoa-cylinder", "qaoa-torus", "qaoa-welded-tree")


def gen_benchmark(kind: str, size: int, seed: int = 0) -> Circuit:
    """Generate a benchmark with all Toffolis lowered to CX + single-qubit gates."""
    if kind == "cuccaro":
        c = cuccaro(size)
    elif kind == "cnu":
        c = cnu(size)
    elif kind == "bv":
        c = bernstein_vazirani(size, seed)
    elif kind == "qram":
        c = qram(size, seed)
    elif kind.startswith("qaoa-"):
        c = gen_qaoa(qaoa_graph_for_size(kind[5:], size, seed), seed)
    else:
        raise ValueError(f"unknown benchmark {kind!r}")
    return lower_toffolis(c)


def parse_graph(text: str) -> Graph:
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "nodes" and len(tok) == 2:
                n = int(tok[1])
            elif tok[0] == "edge" and len(tok) == 3:
                edges.add((int(tok[1]), int(tok[2])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise ValueError("missing 'nodes' header")
    return Graph(n, frozenset(edges))


def emit_graph(g: Graph) -> str:
    return "\n".join([f"nodes {g.num_nodes}"] + [f"edge {u} {v}" for u, v in g.sorted_edges()])
