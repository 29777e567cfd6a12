import itertools

import numpy as np
import pytest

from conftest import bits_to_index, classical_output
from mixradix.benchmarks import (BENCHMARKS, Graph, bernstein_vazirani, cnu, cuccaro, emit_graph, gen_benchmark,
                                 gen_graph, gen_qaoa, lower_toffolis, parse_graph, qram, toffoli_gates)
from mixradix.circuit import Circuit, Gate
from mixradix.verify import simulate_logical


def test_toffoli_lowering_matches_ccx_unitary():
    lowered = Circuit(3, tuple(toffoli_gates(0, 1, 2)))
    direct = Circuit(3, (Gate("ccx", (0, 1, 2)),))
    assert sum(g.name == "cx" for g in lowered.gates) == 6
    for x in range(8):
        a = simulate_logical(lowered, x)
        b = simulate_logical(direct, x)
        k = int(np.argmax(np.abs(b)))
        assert np.allclose(a, b * (a[k] / b[k]), atol=1e-12)
        assert abs(abs(a[k] / b[k]) - 1) < 1e-12
    # global phase is the same across inputs, so the unitaries agree exactly
    phases = {np.round(simulate_logical(lowered, x)[int(np.argmax(np.abs(simulate_logical(direct, x))))], 9)
              for x in range(8)}
    assert len(phases) == 1


@pytest.mark.parametrize("size", [4, 5, 6, 7, 8])
def test_cuccaro_adds(size):
    c = lower_toffolis(cuccaro(size))
    k = (size - 1) // 2
    has_cout = size % 2 == 0
    for a, b, cin in itertools.product(range(2 ** k), range(2 ** k), (0, 1)):
        bits = [0] * size
        bits[0] = cin
        for i in range(k):
            bits[1 + 2 * i] = (b >> i) & 1
            bits[2 + 2 * i] = (a >> i) & 1
        out = classical_output(c, bits)
        total = a + b + cin
        got = sum(out[1 + 2 * i] << i for i in range(k))
        assert got == total % (2 ** k)
        assert [out[2 + 2 * i] for i in range(k)] == [(a >> i) & 1 for i in range(k)]
        assert out[0] == cin
        if has_cout:
            assert out[-1] == total >> k


@pytest.mark.parametrize("size, n", [(5, 5), (6, 5), (7, 7), (8, 7), (15, 15)])
def test_cnu_qubit_count(size, n):
    assert cnu(size).num_qubits == n


@pytest.mark.parametrize("size", [5, 7, 8])
def test_cnu_is_multicontrolled_x_with_clean_ancillas(size):
    raw = cnu(size)
    c = lower_toffolis(raw)
    n = c.num_qubits
    nc = (n + 1) // 2
    for ctrl in itertools.product((0, 1), repeat=nc):
        for t in (0, 1):
            bits = list(ctrl) + [t] + [0] * (n - nc - 1)
            out = classical_output(c, bits)
            assert out[:nc] == list(ctrl)
            assert out[nc] == t ^ int(all(ctrl))
            assert out[nc + 1:] == [0] * (n - nc - 1)


@pytest.mark.parametrize("seed", range(4))
def test_bv_reveals_secret(seed):
    c = bernstein_vazirani(6, seed)
    secret = [0] * 5
    for g in c.gates:
        if g.name == "cx":
            secret[g.qubits[0]] = 1
    assert any(secret)
    out = classical_output(c, [0] * 6)
    assert out[:5] == secret


def test_qram_reads_addressed_cell():
    c = lower_toffolis(qram(8, seed=3))
    # 8 qubits: 2 address bits, 4 cells, 2 bus qubits
    k, cells, bus = 2, list(range(2, 6)), [6, 7]
    data = {}
    for g in qram(8, seed=3).gates:
        if g.name == "cx" and g.qubits[1] in bus:
            data.setdefault(g.qubits[0], set()).add(g.qubits[1])
    assert set(data) == set(cells)
    for addr in range(2 ** k):
        bits = [(addr >> j) & 1 for j in range(k)] + [0] * 6
        out = classical_output(c, bits)
        cell = cells[addr]
        assert out[:k] == bits[:k]
        assert out[2:6] == [0, 0, 0, 0]
        assert [out[b] for b in bus] == [int(b in data[cell]) for b in bus]


@pytest.mark.parametrize("rows, cols", [(3, 2), (3, 3), (4, 5)])
def test_cylinder_and_torus_edge_counts(rows, cols):
    cyl = gen_graph("cylinder", rows=rows, cols=cols)
    assert len(cyl.edges) == rows * cols + rows * (cols - 1)
    if cols >= 3:
        tor = gen_graph("torus", rows=rows, cols=cols)
        assert len(tor.edges) == 2 * rows * cols
        assert all(tor.degree(v) == 4 for v in range(rows * cols))


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_welded_tree_structure(depth):
    g = gen_graph("welded-tree", depth=depth, seed=5)
    per_tree = 2 ** (depth + 1) - 1
    leaves = 2 ** depth
    assert g.num_nodes == 2 * per_tree
    weld = 2 * leaves if leaves > 1 else 1
    assert len(g.edges) == 2 * (per_tree - 1) + weld
    # welded leaves have degree 3 (parent + two weld edges) once there are >= 2 leaves
    if leaves > 1:
        first_leaf = 2 ** depth - 1
        for off in (0, per_tree):
            for i in range(leaves):
                assert g.degree(off + first_leaf + i) == 3


def test_random_graph_is_seeded():
    assert gen_graph("random", n=10, seed=1) == gen_graph("random", n=10, seed=1)
    assert gen_graph("random", n=10, seed=1) != gen_graph("random", n=10, seed=2)


def test_qaoa_uses_each_edge_once():
    g = gen_graph("cylinder", rows=3, cols=2)
    c = gen_qaoa(g, seed=0)
    cx = [tuple(sorted(gt.qubits)) for gt in c.gates if gt.name == "cx"]
    assert len(cx) == 2 * len(g.edges)
    assert set(cx) == set(g.edges)


def test_graph_text_round_trip():
    g = gen_graph("random", n=7, seed=4)
    assert parse_graph(emit_graph(g)) == g
    with pytest.raises(ValueError):
        parse_graph("edge 0 1")
    with pytest.raises(ValueError):
        Graph(2, frozenset({(0, 0)}))


@pytest.mark.parametrize("kind", BENCHMARKS)
def test_generators_are_deterministic_and_lowered(kind):
    a = gen_benchmark(kind, 8, seed=2)
    b = gen_benchmark(kind, 8, seed=2)
    assert a == b
    assert all(g.name != "ccx" for g in a.gates)
    assert a.num_qubits >= 5
