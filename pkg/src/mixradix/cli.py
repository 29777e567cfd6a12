"""Command-line driver: single compiles, size sweeps and T1-ratio sweeps."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields

from .arch import build_topology, parse_topology
from .benchmarks import BENCHMARKS, gen_benchmark, gen_qaoa, lower_toffolis, parse_graph
from .circuit import Circuit, CircuitParseError, parse_circuit
from .evaluate import log_coherence_eps, t1_sweep
from .gateset import T1_QUBIT_US, CoherenceParams, DEFAULT_LIBRARY, GateLibrary
from .mapper import CapacityError
from .pipeline import STRATEGIES, CompileResult, Context, StrategyConfig, compile_circuit
from .router import RoutingError, RoutingPolicy
from .verify import SimulationCapError, check_equivalence

EXIT_OK, EXIT_USAGE, EXIT_COMPILE, EXIT_VERIFY = 0, 1, 2, 3

CSV_COLUMNS = (
    "benchmark", "size", "num_qubits", "arch", "num_units", "strategy", "seed", "t1_qubit_us",
    "t1_ratio", "gate_eps", "coherence_eps", "total_eps", "duration_ns", "swap_count",
    "internal_cx_count", "compression_pairs", "crossover_ratio", "verified",
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    benchmark: str | None = None
    circuit: str | None = None
    size: int | None = None
    graph: str | None = None
    arch: str = "grid"
    arch_file: str | None = None
    arch_size: int | None = None
    strategies: tuple[str, ...] = ("eqm",)
    seed: int = 0
    t1_qubit_us: float = T1_QUBIT_US
    t1_ratio: float = 1 / 3
    sweep_sizes: tuple[int, int] | None = None
    sweep_ratio: tuple[float, float, float] | None = None
    verify: bool = False
    out: str | None = None
    format: str = "json"
    gate_overrides: str | None = None
    strategy_options: dict = field(default_factory=dict)
    policy_options: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.benchmark is None) == (self.circuit is None and self.graph is None):
            raise UsageError("give exactly one of --benchmark, --circuit or --graph")
        if self.circuit is not None and self.graph is not None:
            raise UsageError("give exactly one of --benchmark, --circuit or --graph")
        if self.benchmark is not None and self.benchmark not in BENCHMARKS:
            raise UsageError(f"unknown benchmark {self.benchmark!r}")
        if self.benchmark is not None and self.size is None and self.sweep_sizes is None:
            raise UsageError("--benchmark needs --size or --sweep-sizes")
        if self.sweep_sizes is not None and self.benchmark is None:
            raise UsageError("--sweep-sizes needs --benchmark")
        if not 0 < self.t1_ratio <= 1:
            raise UsageError("--t1-ratio must lie in (0, 1]")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise UsageError(f"unknown strategy {s!r}")


# --- canonical output ------------------------------------------------------------------

def _canon(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    return str(x)


def canonical_json(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, indent=2) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return ";".join(f"{a}-{b}" for a, b in v)
    return str(v)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_csv_cell(r.get(k)) for k in CSV_COLUMNS])
    return buf.getvalue()


# --- running ---------------------------------------------------------------------------

def load_circuit(cfg: RunConfig, size: int | None) -> Circuit:
    if cfg.benchmark is not None:
        return gen_benchmark(cfg.benchmark, size, cfg.seed)
    if cfg.graph is not None:
        with open(cfg.graph) as fh:
            return gen_qaoa(parse_graph(fh.read()), cfg.seed)
    with open(cfg.circuit) as fh:
        return lower_toffolis(parse_circuit(fh.read()))


def load_topology(cfg: RunConfig, num_qubits: int):
    if cfg.arch_file is not None:
        with open(cfg.arch_file) as fh:
            return parse_topology(fh.read(), name=cfg.arch_file)
    if cfg.arch == "heavy_hex":
        return build_topology("heavy_hex")
    return build_topology(cfg.arch, cfg.arch_size or max(1, num_qubits))


def load_library(cfg: RunConfig) -> GateLibrary:
    if cfg.gate_overrides is None:
        return DEFAULT_LIBRARY
    with open(cfg.gate_overrides) as fh:
        return GateLibrary.from_override_text(fh.read())


def compile_one(cfg: RunConfig, c: Circuit, strategy: str, library: GateLibrary) -> tuple:
    topo = load_topology(cfg, c.num_qubits)
    coh = CoherenceParams.from_ratio(cfg.t1_qubit_us, cfg.t1_ratio)
    policy = RoutingPolicy(**cfg.policy_options)
    ctx = Context.for_topology(topo, library=library, coh=coh, policy=policy)
    scfg = StrategyConfig(strategy=strategy, **cfg.strategy_options)
    return compile_circuit(c, ctx, scfg), topo


def report_row(cfg: RunConfig, c: Circuit, size, strategy: str, res: CompileResult, topo) -> dict:
    r = res.report
    return {
        "benchmark": cfg.benchmark or cfg.circuit or cfg.graph,
        "size": size,
        "num_qubits": c.num_qubits,
        "arch": topo.name,
        "num_units": topo.num_units,
        "strategy": strategy,
        "seed": cfg.seed,
        "t1_qubit_us": cfg.t1_qubit_us,
        "t1_ratio": cfg.t1_ratio,
        "gate_eps": r.gate_eps,
        "coherence_eps": r.coherence_eps,
        "total_eps": r.total_eps,
        "duration_ns": r.duration_ns,
        "gate_counts": dict(r.gate_counts),
        "swap_count": r.swap_count,
        "internal_cx_count": r.internal_cx_count,
        "compression_pairs": res.plan.as_lists(),
        "initial_mapping": res.initial.to_json(),
        "final_mapping": res.final.to_json(),
        "ec_truncated": res.truncated,
    }


def verify_row(row: dict, c: Circuit, res: CompileResult, seed: int) -> bool:
    try:
        eq = check_equivalence(c, res.routed, res.initial, res.final, seed=seed)
    except SimulationCapError:
        row["verified"] = "skipped"
        return True
    row["verified"] = eq.equivalent
    row["max_deviation"] = eq.max_deviation
    return eq.equivalent


def run(cfg: RunConfig) -> tuple[list[dict], bool]:
    """All requested cells in deterministic order; second value is False on a failed verification."""
    library = load_library(cfg)
    sizes = [cfg.size] if cfg.sweep_sizes is None else list(range(cfg.sweep_sizes[0], cfg.sweep_sizes[1] + 1))
    rows, ok = [], True
    for size in sizes:
        c = load_circuit(cfg, size)
        results = {}
        for strategy in cfg.strategies:
            try:
                res, topo = compile_one(cfg, c, strategy, library)
            except (CapacityError, RoutingError, ValueError) as e:
                raise CompileFailure(f"size={size} strategy={strategy}: {e}") from e
            results[strategy] = (res, topo)
            if cfg.sweep_ratio is None:
                row = report_row(cfg, c, size, strategy, res, topo)
                if cfg.verify:
                    ok &= verify_row(row, c, res, cfg.seed)
                rows.append(row)
        if cfg.sweep_ratio is not None:
            rows.extend(ratio_rows(cfg, c, size, results, library))
    return rows, ok


class CompileFailure(Exception):
    pass


def _ratio_range(a: float, b: float, step: float) -> list[float]:
    n = int(math.floor((b - a) / step + 1e-9))
    out = [a + k * step for k in range(n + 1)]
    if b - out[-1] > 1e-9:
        out.append(b)
    return out


def ratio_rows(cfg: RunConfig, c: Circuit, size, results: dict, library: GateLibrary) -> list[dict]:
    ratios = _ratio_range(*cfg.sweep_ratio)
    if "qubit_only" in results:
        base = results["qubit_only"][0]
    else:
        base, _ = compile_one(cfg, c, "qubit_only", library)
    sw = t1_sweep({s: r.schedule for s, (r, _) in results.items()}, base.schedule, ratios,
                  cfg.t1_qubit_us, library)
    rows = []
    for k, ratio in enumerate(sw.ratios):
        for s, (res, topo) in results.items():
            row = report_row(cfg, c, size, s, res, topo)
            row["t1_ratio"] = ratio
            coh = CoherenceParams.from_ratio(cfg.t1_qubit_us, ratio)
            row["coherence_eps"] = math.exp(log_coherence_eps(res.schedule, coh))
            row["total_eps"] = sw.total_eps[s][k]
            row["crossover_ratio"] = sw.crossover_ratio[s]
            rows.append(row)
    return rows


# --- argument parsing ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError("empty size range")
    return lo, hi


def _ratio_spec(text: str) -> tuple[float, float, float]:
    try:
        rng, step = text.split(":")
        a, b = rng.split("..")
        lo, hi, st = float(a), float(b), float(step)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b:step, got {text!r}")
    if st <= 0 or lo > hi:
        raise argparse.ArgumentTypeError("empty ratio range")
    return lo, hi, st


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mixradix", description=__doc__)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--benchmark", choices=BENCHMARKS)
    src.add_argument("--circuit", help="circuit file in the line-oriented text format")
    src.add_argument("--graph", help="edge-list graph file; compiles its QAOA circuit")
    p.add_argument("--size", type=int)
    p.add_argument("--arch", choices=("grid", "heavy_hex", "ring"), default="grid")
    p.add_argument("--arch-file")
    p.add_argument("--arch-size", type=int, help="unit count for grid/ring (default: qubit count)")
    p.add_argument("--strategy", default="eqm",
                   help="one of %s, or a comma-separated list" % ",".join(STRATEGIES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t1-qubit-us", type=float, default=T1_QUBIT_US)
    p.add_argument("--t1-ratio", type=float, default=1 / 3)
    p.add_argument("--sweep-sizes", type=_int_range)
    p.add_argument("--sweep-ratio", type=_ratio_spec)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--gate-overrides")
    p.add_argument("--config", help="JSON file with strategy/routing options")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {}
    if ns.config:
        with open(ns.config) as fh:
            extra = json.load(fh)
    strat_keys = {f.name for f in fields(StrategyConfig)} - {"strategy"}
    pol_keys = {f.name for f in fields(RoutingPolicy)}
    unknown = set(extra) - strat_keys - pol_keys
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    return RunConfig(
        benchmark=ns.benchmark, circuit=ns.circuit, size=ns.size, graph=ns.graph, arch=ns.arch,
        arch_file=ns.arch_file, arch_size=ns.arch_size,
        strategies=tuple(s.strip() for s in ns.strategy.split(",") if s.strip()),
        seed=ns.seed, t1_qubit_us=ns.t1_qubit_us, t1_ratio=ns.t1_ratio,
        sweep_sizes=ns.sweep_sizes, sweep_ratio=ns.sweep_ratio, verify=ns.verify, out=ns.out,
        format=ns.format, gate_overrides=ns.gate_overrides,
        strategy_options={k: v for k, v in extra.items() if k in strat_keys},
        policy_options={k: v for k, v in extra.items() if k in pol_keys},
    )


def render(cfg: RunConfig, rows: list[dict]) -> str:
    if cfg.format == "csv":
        return rows_to_csv(rows)
    single = cfg.sweep_sizes is None and cfg.sweep_ratio is None and len(rows) == 1
    return canonical_json(rows[0] if single else {"rows": rows})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(ns)
    except (UsageError, OSError, json.JSONDecodeError) as e:
        print(f"mixradix: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rows, ok = run(cfg)
    except (CompileFailure, CircuitParseError, OSError, ValueError) as e:
        print(f"mixradix: compile error: {e}", file=sys.stderr)
        return EXIT_COMPILE
    text = render(cfg, rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not ok:
        print("mixradix: verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
