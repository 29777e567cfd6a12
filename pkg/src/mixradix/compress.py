"""Choosing which logical pairs to compress into a single ququart."""

from __future__ import annotations

import itertools
from collections import deque

from .arch import SlotId
from .circuit import Circuit, asap_layers
from .mapper import CapacityError, InteractionGraph, Mapping, center_unit, eqm_map, interaction_graph
from .pipeline import (CompileResult, CompressionPlan, Context, StrategyConfig, compile_plan,
                       compile_with_mapping)


# --- graph helpers ---------------------------------------------------------------------

def min_cycle_through(g: InteractionGraph, v) -> list | None:
    """Shortest simple cycle containing ``v``, as a node list starting at ``v``.

    BFS from ``v`` labelling every node with the first-hop neighbour (branch) it
    was reached by; an edge joining two different branches, or a branch back to
    ``v``'s other neighbour, closes a cycle through ``v``.
    """
    if v not in g.adj:
        raise KeyError(v)
    parent = {v: None}
    branch = {v: None}
    depth = {v: 0}
    queue = deque()
    for u in sorted(g.neighbors(v), key=_node_key):
        parent[u], branch[u], depth[u] = v, u, 1
        queue.append(u)
    best = None
    while queue:
        x = queue.popleft()
        if best is not None and 2 * depth[x] + 1 > best[0]:
            break
        for y in sorted(g.neighbors(x), key=_node_key):
            if y == v or y == parent[x]:
                continue
            if y not in depth:
                parent[y], branch[y], depth[y] = x, branch[x], depth[x] + 1
                queue.append(y)
            elif branch[y] != branch[x]:
                length = depth[x] + depth[y] + 1
                if best is None or length < best[0]:
                    best = (length, x, y)
    if best is None:
        return None
    _, x, y = best

    def up(z):
        out = []
        while z is not None and z != v:
            out.append(z)
            z = parent[z]
        return out

    return [v] + up(x)[::-1] + up(y)


def collapse_pair(g: InteractionGraph, a, b) -> InteractionGraph:
    """Replace ``a`` and ``b`` by one node ``(a, b)`` carrying their summed external weights."""
    if a == b:
        raise ValueError("cannot collapse a node with itself")
    for x in (a, b):
        if x not in g.adj:
            raise KeyError(x)
    merged = (a, b)
    out = InteractionGraph([n for n in g.nodes if n not in (a, b)] + [merged])
    for x, y, w in g.edges():
        x2 = merged if x in (a, b) else x
        y2 = merged if y in (a, b) else y
        if x2 != y2:
            out.add_weight(x2, y2, w)
    return out


def _node_key(n):
    return (0, n, ()) if isinstance(n, int) else (1, min(_flat(n)), tuple(_flat(n)))


def _flat(n) -> list[int]:
    return [n] if isinstance(n, int) else [q for x in n for q in _flat(x)]


def _ordered(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


# --- RB: ring (cycle) based ------------------------------------------------------------

def simultaneity(c: Circuit) -> dict[frozenset, int]:
    """Number of ASAP layers in which both qubits of a pair are busy in different gates."""
    layers = asap_layers(c)
    by_layer: dict[int, list] = {}
    for gate, layer in zip(c.gates, layers):
        by_layer.setdefault(layer, []).append(gate.qubits)
    out: dict[frozenset, int] = {}
    for groups in by_layer.values():
        seen = set()
        for g1, g2 in itertools.combinations(groups, 2):
            for a in g1:
                for b in g2:
                    if a != b:
                        seen.add(frozenset((a, b)))
        for p in seen:
            out[p] = out.get(p, 0) + 1
    return out


def rb_cycles(g: InteractionGraph, bound: float = 2.0) -> list[list]:
    """Per-vertex minimum cycles, dropping those longer than ``bound`` x the shortest."""
    found = {}
    for v in sorted(g.nodes, key=_node_key):
        cyc = min_cycle_through(g, v)
        if cyc is not None:
            found.setdefault(frozenset(cyc), cyc)
    if not found:
        return []
    shortest = min(len(c) for c in found.values())
    return [c for c in found.values() if len(c) <= bound * shortest]


def rb_candidates(g: InteractionGraph, cycles: list[list]) -> list[tuple[int, int]]:
    cands = set()
    for cyc in cycles:
        members = set(cyc)
        free = sorted(x for x in cyc if isinstance(x, int))
        if len(free) < 2:
            continue
        external = {x: sum(1 for y in g.neighbors(x) if y not in members) for x in free}
        pivot = min(free, key=lambda x: (external[x], x))
        for u in free:
            if u != pivot:
                cands.add(_ordered(pivot, u))
    return sorted(cands)


def rb_score(g: InteractionGraph, pair, cycles, simult, order) -> tuple:
    a, b = pair
    stats = {
        "weight": g.weight(a, b),
        "shared_neighbors": len(set(g.neighbors(a)) & set(g.neighbors(b))),
        "cycles": sum(1 for cyc in cycles if a in cyc and b in cyc),
        "neg_simultaneity": -simult.get(frozenset(pair), 0),
        # fewer distinct neighbours after collapsing keeps the graph closer to a line
        "neg_merged_degree": -len((set(g.neighbors(a)) | set(g.neighbors(b))) - {a, b}),
    }
    return tuple(stats[k] for k in order)


def strategy_rb(g: InteractionGraph, c: Circuit | None = None, cfg: StrategyConfig | None = None,
                trace: list | None = None) -> CompressionPlan:
    cfg = cfg or StrategyConfig(strategy="rb")
    simult = simultaneity(c) if c is not None else {}
    pairs = []
    while True:
        cycles = rb_cycles(g, cfg.rb_cycle_bound)
        cands = rb_candidates(g, cycles)
        if not cands:
            break
        scored = [(rb_score(g, p, cycles, simult, cfg.rb_order), p) for p in cands]
        best = max(scored, key=lambda t: (t[0], tuple(-x for x in t[1])))
        pair = best[1]
        if trace is not None:
            trace.append((pair, best[0]))
        pairs.append(pair)
        g = collapse_pair(g, *pair)
    return CompressionPlan(tuple(pairs), "rb")


# --- AWE: average weight per edge ------------------------------------------------------

def strategy_awe(g: InteractionGraph, trace: list | None = None) -> CompressionPlan:
    pairs = []
    while True:
        avg = g.average_weight()
        if avg is None:
            break
        total, n_edges = g.total(), g.num_edges()
        free = sorted(x for x in g.nodes if isinstance(x, int))
        best = None
        for a, b in itertools.combinations(free, 2):
            na, nb = set(g.neighbors(a)), set(g.neighbors(b))
            w_ab = g.weight(a, b)
            edges_after = n_edges - (1 if b in na else 0) - len(na & nb)
            if edges_after == 0:
                continue
            new_avg = (total - w_ab) / edges_after
            if best is None or new_avg > best[0]:
                best = (new_avg, (a, b))
        # relative slack guards against float noise when averages tie exactly
        if best is None or best[0] <= avg * (1 + 1e-12):
            break
        if trace is not None:
            trace.append((best[1], best[0]))
        pairs.append(best[1])
        g = collapse_pair(g, *best[1])
    return CompressionPlan(tuple(pairs), "awe")


# --- PP: post-placement estimate -------------------------------------------------------

def strategy_pp(c: Circuit, ctx: Context, g: InteractionGraph | None = None,
                trace: list | None = None) -> CompressionPlan:
    g = g or interaction_graph(c)
    oracle = ctx.oracle
    m = eqm_map(g, ctx.sg, "qubit_only", oracle=oracle)
    plan: list[tuple[int, int]] = []
    edges = [(a, b, w) for a, b, w in g.edges() if isinstance(a, int) and isinstance(b, int)]
    incident: dict[int, list] = {}
    for e in edges:
        incident.setdefault(e[0], []).append(e)
        incident.setdefault(e[1], []).append(e)

    def cost(occ, pos, es):
        return sum(w * oracle.distance(occ, pos[a], pos[b]) for a, b, w in es)

    while True:
        occ = m.occupancy()
        pos = dict(enumerate(m.slots))
        paired = {q for p in plan for q in p}
        free = [q for q in range(c.num_qubits) if q not in paired]
        best = None
        for host, mover in itertools.permutations(free, 2):
            es = {e for e in incident.get(host, []) + incident.get(mover, [])}
            if not es:
                continue
            es = sorted(es)
            before = cost(occ, pos, es)
            hyp = list(occ)
            hyp[pos[mover].unit] -= 1
            hyp[pos[host].unit] += 1
            hyp_pos = dict(pos)
            hyp_pos[mover] = SlotId(pos[host].unit, 1)
            after = cost(tuple(hyp), hyp_pos, es)
            gain = before - after
            key = (gain, -min(host, mover), -max(host, mover), -host)
            if best is None or key > best[0]:
                best = (key, (host, mover))
        if best is None or best[0][0] <= 1e-12:
            break
        plan.append(best[1])
        if trace is not None:
            trace.append((best[1], best[0][0]))
        m = eqm_map(g, ctx.sg, "plan", plan, oracle=oracle)
    return CompressionPlan(tuple(plan), "pp")


# --- EC: exhaustive recompilation ------------------------------------------------------

def critical_path(r: CompileResult) -> list[int]:
    """Indices of scheduled ops on one longest chain (data and unit-order edges)."""
    s = r.schedule
    ops = s.ops
    if not ops:
        return []
    prev_on_unit: list[list[int]] = [[] for _ in ops]
    last: dict[int, int] = {}
    for k, o in enumerate(ops):
        for u in o.op.units:
            if u in last:
                prev_on_unit[k].append(last[u])
            last[u] = k
    k = max(range(len(ops)), key=lambda i: (ops[i].end, -i))
    path = [k]
    while True:
        o = ops[k]
        cands = set(s.preds[k]) | set(prev_on_unit[k])
        tight = [p for p in cands if abs(ops[p].end - o.start) < 1e-9]
        if not tight:
            break
        k = max(tight)
        path.append(k)
    return path[::-1]


def priority_groups(r: CompileResult, num_qubits: int) -> dict[int, int]:
    """1: qubits of program gates on the critical path; 2: qubits of communication ops
    on it; 3: everyone else."""
    grp = {q: 3 for q in range(num_qubits)}
    path = [r.schedule.ops[k].op for k in critical_path(r)]
    for op in path:
        if op.origin != "program":
            for q in op.qubits:
                grp[q] = min(grp[q], 2)
    for op in path:
        if op.origin == "program":
            for q in op.qubits:
                grp[q] = 1
    return grp


def strategy_ec(c: Circuit, ctx: Context, cfg: StrategyConfig | None = None,
                evaluate_many=None) -> CompileResult:
    """Greedy recompile-and-compare. ``evaluate_many`` may map a list of plans to
    results concurrently; acceptance is order-independent."""
    cfg = cfg or StrategyConfig(strategy="ec")
    g = interaction_graph(c)
    n = c.num_qubits
    run = evaluate_many or (lambda plans: [compile_plan(c, p, ctx, g, "ec") for p in plans])
    best = run([CompressionPlan((), "ec")])[0]
    budget = cfg.ec_budget - 1
    trace = [best.objective(cfg.objective)]
    truncated = False
    units = ctx.topology.num_units
    while not truncated:
        pairs = list(best.plan.pairs)
        paired = {q for p in pairs for q in p}
        free = [q for q in range(n) if q not in paired]
        cands = [p for p in itertools.combinations(free, 2) if n - len(pairs) - 1 <= units]
        if cfg.ec_mode == "critical_path_ordered":
            grp = priority_groups(best, n)
            tiers = [[p for p in cands if min(grp[p[0]], grp[p[1]]) == t] for t in (1, 2, 3)]
        else:
            tiers = [cands]
        accepted = None
        for tier in tiers:
            if not tier:
                continue
            if len(tier) > budget:
                tier = tier[:budget]
                truncated = True
            budget -= len(tier)
            results = run([CompressionPlan(tuple(pairs + [p]), "ec") for p in tier])
            cur = best.objective(cfg.objective)
            top = None
            for p, res in zip(tier, results):
                val = res.objective(cfg.objective)
                if val > cur and (top is None or val > top[0]):
                    top = (val, p, res)
            if top is not None:
                accepted = top
                break
            if truncated:
                break
        if accepted is None:
            break
        best = accepted[2]
        trace.append(accepted[0])
    best.strategy = "ec"
    best.truncated = truncated
    best.trace = trace
    return best


# --- FQ baseline -----------------------------------------------------------------------

def greedy_matching(g: InteractionGraph, n: int) -> list[tuple[int, int]]:
    """Heaviest edge first; leftover qubits are paired in index order."""
    used, pairs = set(), []
    for a, b, w in sorted(g.edges(), key=lambda e: (-e[2], _ordered(e[0], e[1]))):
        if a in used or b in used:
            continue
        pairs.append(_ordered(a, b))
        used |= {a, b}
    rest = [q for q in range(n) if q not in used]
    for i in range(0, len(rest) - 1, 2):
        pairs.append((rest[i], rest[i + 1]))
    return sorted(pairs)


def fq_map(g: InteractionGraph, ctx: Context, pairs: list[tuple[int, int]], n: int) -> Mapping:
    """Place encoded pairs so that each keeps a reserved empty neighbour for decoding."""
    topo = ctx.topology
    paired = {q for p in pairs for q in p}
    groups = [tuple(p) for p in pairs] + [(q,) for q in range(n) if q not in paired]
    need = len(groups) + len(pairs)
    if need > topo.num_units:
        raise CapacityError(f"fully encoded layout needs {need} units, topology has {topo.num_units}")
    center = center_unit(topo)
    cdist = topo.bfs_distances(center)
    hops = {u: topo.bfs_distances(u) for u in range(topo.num_units)}
    unit_of: dict[int, int] = {}
    taken: set[int] = set()
    reserved: set[int] = set()

    def attach(grp):
        return sum(g.weight(q, j) for q in grp for j in unit_of)

    order = []
    remaining = list(groups)
    while remaining:
        grp = max(remaining, key=lambda gr: (attach(gr), sum(g.weight(q, j) for q in gr for j in range(n)),
                                             len(gr), -min(gr)))
        remaining.remove(grp)
        order.append(grp)
        free = [u for u in range(topo.num_units) if u not in taken and u not in reserved]

        def spare(u):
            return [v for v in topo.neighbors(u) if v not in taken and v not in reserved]

        opts = [u for u in free if len(grp) == 1 or spare(u)] or free
        if not opts:
            raise CapacityError("no unit left for placement")

        def score(u):
            s = 0.0
            for q in grp:
                for j, uj in unit_of.items():
                    w = g.weight(q, j)
                    if w:
                        s += w / max(1, hops[u][uj])
            return s

        if not unit_of:
            u = center if center in opts else min(opts, key=lambda x: (cdist[x], x))
        else:
            u = min(opts, key=lambda x: (-score(x), cdist[x], x))
        taken.add(u)
        for q in grp:
            unit_of[q] = u
        if len(grp) == 2:
            sp = spare(u)
            if sp:
                reserved.add(min(sp, key=lambda v: (cdist[v], v)))
    pos = {}
    for grp in order:
        for i, q in enumerate(grp):
            pos[q] = SlotId(unit_of[q], i)
    return Mapping(tuple(pos[q] for q in range(n)), topo.num_units)


def baseline_fq(c: Circuit, ctx: Context) -> CompileResult:
    g = interaction_graph(c)
    pairs = greedy_matching(g, c.num_qubits)
    m = fq_map(g, ctx, pairs, c.num_qubits)
    plan = CompressionPlan(tuple(pairs), "fq")
    return compile_with_mapping(c, m, ctx, "fq", plan, fq=True)
