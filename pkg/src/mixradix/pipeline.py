"""map -> route -> schedule -> evaluate, for a fixed mapping or compression plan."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arch import DistanceOracle, PhysicalTopology, SlotGraph, expand_slot_graph
from .circuit import Circuit
from .evaluate import EpsReport, evaluate
from .gateset import DEFAULT_LIBRARY, CoherenceParams, GateLibrary
from .mapper import InteractionGraph, Mapping, eqm_map, interaction_graph
from .router import RoutedCircuit, RoutingPolicy, route, route_fq
from .schedule import ScheduledCircuit, schedule

STRATEGIES = ("qubit_only", "fq", "ec", "eqm", "rb", "awe", "pp")


@dataclass(frozen=True)
class CompressionPlan:
    """Disjoint logical pairs to co-locate; each pair is (slot-0 host, slot-1 partner)."""

    pairs: tuple[tuple[int, int], ...] = ()
    strategy_tag: str = ""

    def __post_init__(self):
        pairs = tuple(tuple(int(q) for q in p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen = set()
        for p in pairs:
            if len(p) != 2 or p[0] == p[1]:
                raise ValueError(f"bad pair {p}")
            if seen & set(p):
                raise ValueError("plan pairs must be disjoint")
            seen |= set(p)

    def validate(self, num_qubits: int):
        for p in self.pairs:
            if any(not 0 <= q < num_qubits for q in p):
                raise ValueError(f"pair {p} out of range for {num_qubits} qubits")

    def unordered(self) -> set[frozenset]:
        return {frozenset(p) for p in self.pairs}

    def as_lists(self) -> list[list[int]]:
        return sorted(sorted(p) for p in self.pairs)


@dataclass
class StrategyConfig:
    strategy: str = "eqm"
    ec_mode: str = "critical_path_ordered"
    objective: str = "gate_eps"
    ec_budget: int = 5000
    rb_order: tuple[str, ...] = ("neg_merged_degree", "weight", "shared_neighbors", "cycles",
                                 "neg_simultaneity")
    rb_cycle_bound: float = 2.0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.ec_mode not in ("critical_path_ordered", "unordered"):
            raise ValueError(f"unknown ec_mode {self.ec_mode!r}")
        if self.objective not in ("gate_eps", "total_eps"):
            raise ValueError(f"unknown objective {self.objective!r}")
        self.rb_order = tuple(self.rb_order)


@dataclass
class Context:
    """Everything a compile needs besides the circuit."""

    sg: SlotGraph
    library: GateLibrary = DEFAULT_LIBRARY
    coh: CoherenceParams = field(default_factory=CoherenceParams)
    policy: RoutingPolicy = field(default_factory=RoutingPolicy)
    oracle: DistanceOracle | None = None

    def __post_init__(self):
        if self.oracle is None:
            self.oracle = DistanceOracle(self.sg, self.library, self.coh)

    @classmethod
    def for_topology(cls, topo: PhysicalTopology, **kw) -> Context:
        return cls(expand_slot_graph(topo), **kw)

    @property
    def topology(self) -> PhysicalTopology:
        return self.sg.topology


@dataclass
class CompileResult:
    strategy: str
    plan: CompressionPlan
    routed: RoutedCircuit
    schedule: ScheduledCircuit
    report: EpsReport
    truncated: bool = False
    trace: list = field(default_factory=list)

    @property
    def initial(self) -> Mapping:
        return self.routed.initial

    @property
    def final(self) -> Mapping:
        return self.routed.final

    def objective(self, name: str) -> float:
        r = self.report
        return r.log_gate_eps if name == "gate_eps" else r.log_gate_eps + r.log_coherence_eps


def compile_with_mapping(c: Circuit, m: Mapping, ctx: Context, strategy: str = "",
                         plan: CompressionPlan | None = None, fq: bool = False) -> CompileResult:
    routed = route_fq(c, m, ctx.sg) if fq else route(c, m, ctx.sg, ctx.policy, ctx.oracle)
    sched = schedule(routed.ops, m, ctx.library)
    report = evaluate(sched, ctx.coh, ctx.library)
    plan = plan if plan is not None else CompressionPlan(tuple(m.pairs()), strategy)
    return CompileResult(strategy, plan, routed, sched, report)


def compile_plan(c: Circuit, plan: CompressionPlan, ctx: Context, g: InteractionGraph | None = None,
                 strategy: str = "") -> CompileResult:
    plan.validate(c.num_qubits)
    g = g or interaction_graph(c)
    m = eqm_map(g, ctx.sg, "plan", plan.pairs, oracle=ctx.oracle)
    return compile_with_mapping(c, m, ctx, strategy or plan.strategy_tag, plan)


def compile_circuit(c: Circuit, ctx: Context, cfg: StrategyConfig | str = "eqm") -> CompileResult:
    from . import compress

    if isinstance(cfg, str):
        cfg = StrategyConfig(strategy=cfg)
    s = cfg.strategy
    g = interaction_graph(c)
    if s == "qubit_only":
        m = eqm_map(g, ctx.sg, "qubit_only", oracle=ctx.oracle)
        return compile_with_mapping(c, m, ctx, s, CompressionPlan((), s))
    if s == "eqm":
        m = eqm_map(g, ctx.sg, "mixed_radix", oracle=ctx.oracle)
        return compile_with_mapping(c, m, ctx, s)
    if s == "rb":
        plan = compress.strategy_rb(g, c, cfg)
    elif s == "awe":
        plan = compress.strategy_awe(g)
    elif s == "pp":
        plan = compress.strategy_pp(c, ctx, g)
    elif s == "ec":
        return compress.strategy_ec(c, ctx, cfg)
    elif s == "fq":
        return compress.baseline_fq(c, ctx)
    else:
        raise ValueError(f"unknown strategy {s!r}")
    return compile_plan(c, plan, ctx, g, s)
