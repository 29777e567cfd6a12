import math

import pytest
from hypothesis import given, settings, strategies as st

from mixradix.arch import (ClassificationError, DistanceOracle, PhysicalTopology, SlotId, build_topology,
                           classify_pair, expand_slot_graph, grid_topology, heavy_hex_topology, parse_topology,
                           ring_topology, slot_class)
from mixradix.gateset import DURATIONS_NS, CoherenceParams, Kind

T1Q, T1D = 163.5, 163.5 / 3


def ref_cost(kind: str, radices) -> float:
    """-log success straight from the table values, independent of the library code."""
    single = kind in ("X", "X0", "X1", "X01", "CX0", "CX1", "SWAPin")
    f = 0.999 if single else 0.99
    t = DURATIONS_NS[Kind(kind)] * 1e-3
    return -math.log(f) + sum(t / (T1Q if r == "qubit" else T1D) for r in radices)


def rad(c):
    return "qubit" if c in ("q", "empty") else "ququart"


def ref_hop(occ, x, y) -> float:
    cx, cy = slot_class(occ, x), slot_class(occ, y)
    if "void" in (cx, cy):
        return math.inf
    if x.unit == y.unit:
        return ref_cost("SWAPin", ["ququart"])
    mx = "q" if cx == "empty" else cx
    if cy == "empty":
        return ref_cost("SWAP2", ["qubit", "qubit"]) if mx == "q" else ref_cost("SWAP4", ["ququart"] * 2)
    pair = {
        ("q", "q"): "SWAP2", ("q", "0"): "SWAPq0", ("0", "q"): "SWAPq0", ("q", "1"): "SWAPq1",
        ("1", "q"): "SWAPq1", ("0", "0"): "SWAP00", ("0", "1"): "SWAP01", ("1", "0"): "SWAP01",
        ("1", "1"): "SWAP11",
    }[(mx, cy)]
    return ref_cost(pair, [rad(mx), rad(cy)])


def ref_cx(occ, topo, p, b) -> float:
    cp, cb = slot_class(occ, p), slot_class(occ, b)
    if "void" in (cp, cb):
        return math.inf
    if p.unit == b.unit:
        if "q" in (cp, cb) or "empty" in (cp, cb):
            return math.inf
        return min(ref_cost("CX0", ["ququart"]), ref_cost("CX1", ["ququart"]))
    if not topo.linked(p.unit, b.unit):
        return math.inf
    a, c = ("q" if cp == "empty" else cp), ("q" if cb == "empty" else cb)
    names = []
    for x, y in ((a, c), (c, a)):
        names.append("CX2" if x == y == "q" else "CX" + x + y)
    return min(ref_cost(k, [rad(a), rad(c)]) for k in names)


def ref_distance(sg, occ, a, b) -> float:
    nodes = list(sg.nodes)
    d = {(x, y): (0.0 if x == y else math.inf) for x in nodes for y in nodes}
    for x in nodes:
        for y in sg.neighbors(x):
            d[x, y] = min(d[x, y], ref_hop(occ, x, y))
    for k in nodes:
        for i in nodes:
            dik = d[i, k]
            if dik == math.inf:
                continue
            for j in nodes:
                if dik + d[k, j] < d[i, j]:
                    d[i, j] = dik + d[k, j]
    return min(d[a, p] + ref_cx(occ, sg.topology, p, b) for p in sg.neighbors(b))


@pytest.mark.parametrize("topo", [grid_topology(n) for n in (4, 9, 16, 25)] + [ring_topology(65),
                                                                                heavy_hex_topology()])
def test_slot_graph_size_law(topo):
    sg = expand_slot_graph(topo)
    V, E = topo.num_units, len(topo.links)
    assert len(sg.nodes) == 2 * V
    assert len(sg.edges) == 4 * E + V
    for s in sg.nodes:
        assert sg.degree(s) == 2 * topo.degree(s.unit) + 1
        assert len(sg.neighbors(s)) == sg.degree(s)
        assert sum(1 for e in sg.edges if s in e) == sg.degree(s)


def test_heavy_hex_shape():
    t = heavy_hex_topology()
    assert t.num_units == 65 and len(t.links) == 72
    assert max(t.degree(u) for u in range(65)) == 3
    assert build_topology("heavy_hex") == t


def test_grid_trimming_and_connectivity():
    for n in range(1, 30):
        t = grid_topology(n)
        assert t.num_units == n
        assert len(t.bfs_distances(0)) == n
    assert grid_topology(9).links == frozenset({(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (0, 3), (1, 4),
                                                (2, 5), (3, 6), (4, 7), (5, 8)})


def test_topology_validation():
    with pytest.raises(ValueError):
        PhysicalTopology(3, frozenset({(0, 1)}))
    with pytest.raises(ValueError):
        parse_topology("link 0 1")
    with pytest.raises(ValueError):
        build_topology("heavy_hex", 10)
    t = parse_topology("units 3\nlink 0 1\nlink 1 2 # tail")
    assert t.shortest_path(0, 2) == [0, 1, 2]
    assert t.shortest_path(0, 2, avoid={1}) is None


def test_slot_classes():
    occ = (2, 1, 0)
    assert slot_class(occ, SlotId(0, 0)) == "0"
    assert slot_class(occ, SlotId(0, 1)) == "1"
    assert slot_class(occ, SlotId(1, 0)) == "q"
    assert slot_class(occ, SlotId(1, 1)) == "void"
    assert slot_class(occ, SlotId(2, 0)) == "empty"
    assert slot_class(occ, SlotId(2, 1)) == "void"


@pytest.mark.parametrize("a, b, same, logical, kind, swapped", [
    ("q", "q", False, "cx", Kind.CX2, False),
    ("0", "q", False, "cx", Kind.CX0q, False),
    ("q", "1", False, "cx", Kind.CXq1, False),
    ("1", "0", False, "cx", Kind.CX10, False),
    ("0", "1", True, "cx", Kind.CX0, False),
    ("1", "0", True, "cx", Kind.CX1, False),
    ("1", "0", True, "swap", Kind.SWAPin, True),
    ("q", "q", False, "swap", Kind.SWAP2, False),
    ("1", "q", False, "swap", Kind.SWAPq1, True),
    ("q", "0", False, "swap", Kind.SWAPq0, False),
    ("1", "0", False, "swap", Kind.SWAP01, True),
    ("1", "1", False, "swap", Kind.SWAP11, False),
    ("empty", "q", False, "swap", Kind.SWAP2, False),
])
def test_classify_pair(a, b, same, logical, kind, swapped):
    assert classify_pair(a, b, same, logical) == (kind, swapped)


def test_classify_rejects_void_and_bare_internal():
    with pytest.raises(ClassificationError):
        classify_pair("void", "q", False, "cx")
    with pytest.raises(ClassificationError):
        classify_pair("q", "0", True, "cx")


def test_adjacent_bare_distance_is_one_cx2():
    sg = expand_slot_graph(grid_topology(4))
    o = DistanceOracle(sg)
    occ = (1, 1, 0, 0)
    assert o.distance(occ, SlotId(0, 0), SlotId(1, 0)) == pytest.approx(ref_cost("CX2", ["qubit"] * 2), rel=1e-12)


def test_internal_pair_distance_is_internal_cx():
    sg = expand_slot_graph(grid_topology(4))
    o = DistanceOracle(sg)
    assert o.distance((2, 0, 0, 0), SlotId(0, 0), SlotId(0, 1)) == pytest.approx(ref_cost("CX0", ["ququart"]))


@st.composite
def occupancies(draw, n):
    return tuple(draw(st.lists(st.sampled_from([0, 1, 2]), min_size=n, max_size=n)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 6, 9]), st.data())
def test_distance_matches_floyd_warshall_reference(n, data):
    topo = grid_topology(n)
    sg = expand_slot_graph(topo)
    occ = data.draw(occupancies(n))
    filled = [s for s in sg.nodes if slot_class(occ, s) in ("q", "0", "1")]
    if len(filled) < 2:
        return
    a, b = data.draw(st.permutations(filled))[:2]
    o = DistanceOracle(sg)
    got = o.distance(occ, a, b)
    want = ref_distance(sg, occ, a, b)
    assert got == pytest.approx(want, rel=1e-12) or got == want == math.inf
    # cached second query agrees
    assert o.distance(occ, a, b) == got


def test_cache_is_keyed_by_occupancy():
    sg = expand_slot_graph(grid_topology(4))
    o = DistanceOracle(sg)
    a, b = SlotId(0, 0), SlotId(3, 0)
    d1 = o.distance((1, 0, 0, 1), a, b)
    d2 = o.distance((1, 2, 2, 1), a, b)
    assert d1 != d2
    assert o.distance((1, 0, 0, 1), a, b) == d1
    path = o.path((1, 0, 0, 1), a, b)
    assert path[0] == a and path[-1].unit in topo_neighbors(sg, b.unit) | {b.unit}


def topo_neighbors(sg, u):
    return set(sg.topology.neighbors(u))


def test_ququart_t1_ratio_changes_costs():
    sg = expand_slot_graph(grid_topology(4))
    slow = DistanceOracle(sg, coh=CoherenceParams.from_ratio(163.5, 1.0))
    fast = DistanceOracle(sg)
    occ = (2, 1, 0, 0)
    assert slow.distance(occ, SlotId(0, 1), SlotId(1, 0)) < fast.distance(occ, SlotId(0, 1), SlotId(1, 0))
