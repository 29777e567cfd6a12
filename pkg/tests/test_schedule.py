import random

import pytest
from hypothesis import given, settings, strategies as st

from mixradix.arch import SlotId, expand_slot_graph, grid_topology, line_topology
from mixradix.circuit import Circuit, Gate, parse_circuit
from mixradix.gateset import DEFAULT_LIBRARY, Kind
from mixradix.mapper import Mapping, eqm_map, interaction_graph
from mixradix.router import PhysicalOp, route
from mixradix.schedule import schedule
from test_circuit import circuits


def random_circuit(rng: random.Random, n: int, m: int) -> Circuit:
    gates = []
    for _ in range(m):
        r = rng.random()
        if r < 0.45:
            gates.append(Gate(rng.choice(["x", "h", "z"]), (rng.randrange(n),)))
        else:
            a, b = rng.sample(range(n), 2)
            gates.append(Gate("cx" if r < 0.9 else "swap", (a, b)))
    return Circuit(n, tuple(gates))


def assert_no_unit_overlap(s):
    per_unit = {}
    for o in s.ops:
        for u in o.op.units:
            per_unit.setdefault(u, []).append((o.start, o.end))
    for spans in per_unit.values():
        spans.sort()
        for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
            assert a1 <= b0 + 1e-9


def longest_path(s):
    """Makespan recomputed from the ops alone: data edges via shared slots plus unit order."""
    order = sorted(range(len(s.ops)), key=lambda k: (s.ops[k].start, k))
    finish = {}
    last_slot, last_unit = {}, {}
    for k in order:
        o = s.ops[k]
        ready = 0.0
        for sl in o.op.touched_slots():
            if sl in last_slot:
                ready = max(ready, finish[last_slot[sl]])
        for u in o.op.units:
            if u in last_unit:
                ready = max(ready, finish[last_unit[u]])
        finish[k] = ready + o.duration
        for sl in o.op.touched_slots():
            last_slot[sl] = k
        for u in o.op.units:
            last_unit[u] = k
    return max(finish.values(), default=0.0), finish


def data_critical_path(c: Circuit, ops):
    """Pure dependency critical path over the routed op list (no resource edges)."""
    last, fin = {}, []
    for op in ops:
        ready = max((fin[last[sl]] for sl in op.touched_slots() if sl in last), default=0.0)
        fin.append(ready + DEFAULT_LIBRARY.duration(op.kind))
        for sl in op.touched_slots():
            last[sl] = len(fin) - 1
    return max(fin, default=0.0)


def test_two_hundred_random_circuits():
    rng = random.Random(2024)
    for trial in range(200):
        n = rng.randint(2, 20)
        c = random_circuit(rng, n, rng.randint(1, 40))
        mode = "qubit_only" if trial % 2 else "mixed_radix"
        sg = expand_slot_graph(grid_topology(n))
        m = eqm_map(interaction_graph(c), sg, mode)
        r = route(c, m, sg)
        s = schedule(r.ops, m)
        assert_no_unit_overlap(s)
        makespan, finish = longest_path(s)
        assert s.total_duration == pytest.approx(makespan, abs=1e-9)
        for k, o in enumerate(s.ops):
            # ASAP: no op starts later than its resource/data constraints force
            assert o.end == pytest.approx(finish[k], abs=1e-9)
        if mode == "qubit_only":
            assert s.total_duration == pytest.approx(data_critical_path(c, r.ops), abs=1e-9)


def test_simultaneous_single_qubit_gates_merge():
    c = parse_circuit("qubits 2\nh 0\nh 1\ncx 0 1")
    m = Mapping((SlotId(0, 0), SlotId(0, 1)), 1)
    ops = [PhysicalOp(Kind.X0, (SlotId(0, 0),), "program", (c.gates[0],), (0,)),
           PhysicalOp(Kind.X1, (SlotId(0, 1),), "program", (c.gates[1],), (1,)),
           PhysicalOp(Kind.CX0, (SlotId(0, 0), SlotId(0, 1)), "program", (c.gates[2],), (0, 1))]
    s = schedule(ops, m)
    assert [o.kind for o in s.ops] == [Kind.X01, Kind.CX0]
    assert s.ops[0].duration == 86
    assert s.total_duration == 86 + 83
    unmerged = schedule(ops, m, merge=False)
    assert unmerged.total_duration == 87 + 66 + 83


def test_merge_needs_both_ready_at_once():
    c = parse_circuit("qubits 2\nh 0\ncx 0 1\nh 1")
    sg = expand_slot_graph(line_topology(1))
    m = Mapping((SlotId(0, 0), SlotId(0, 1)), 1)
    r = route(c, m, sg)
    s = schedule(r.ops, m)
    assert Kind.X01 not in [o.kind for o in s.ops]
    assert s.total_duration == 87 + 83 + 66


def test_parallel_bare_gates_overlap():
    c = parse_circuit("qubits 4\ncx 0 1\ncx 2 3")
    sg = expand_slot_graph(line_topology(4))
    m = Mapping(tuple(SlotId(i, 0) for i in range(4)), 4)
    s = schedule(route(c, m, sg).ops, m)
    assert s.total_duration == 251
    assert all(o.start == 0 for o in s.ops)


def test_ququart_timeline():
    m = Mapping((SlotId(0, 0), SlotId(0, 1), SlotId(1, 0)), 2)
    ops = [PhysicalOp(Kind.CX0, (SlotId(0, 0), SlotId(0, 1)), "program", (Gate("cx", (0, 1)),), (0, 1)),
           PhysicalOp(Kind.X, (SlotId(1, 0),), "program", (Gate("x", (2,)),), (2,))]
    s = schedule(ops, m)
    assert s.total_duration == 83
    assert s.unit_timeline[0] == [(0.0, 83.0, "ququart")]
    assert s.unit_timeline[1] == [(0.0, 83.0, "qubit")]
    assert s.ququart_time(0) == 83 and s.ququart_time(1) == 0


@settings(max_examples=60, deadline=None)
@given(circuits(max_qubits=6, max_gates=25))
def test_schedule_properties_hypothesis(c):
    sg = expand_slot_graph(grid_topology(c.num_qubits))
    m = eqm_map(interaction_graph(c), sg, "mixed_radix")
    s = schedule(route(c, m, sg).ops, m)
    assert_no_unit_overlap(s)
    assert s.total_duration == pytest.approx(longest_path(s)[0], abs=1e-9)
    for u, segs in s.unit_timeline.items():
        assert segs[0][0] == 0.0 and segs[-1][1] == pytest.approx(s.total_duration)
        for (a0, a1, _), (b0, b1, _) in zip(segs, segs[1:]):
            assert a1 == pytest.approx(b0)
