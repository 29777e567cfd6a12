"""Total EPS versus ququart/qubit T1 ratio, with crossover against qubit-only.

    python3 scripts/t1_sweep.py --benchmark cuccaro --size 25
"""

import argparse
import sys

from mixradix.arch import grid_topology
from mixradix.benchmarks import BENCHMARKS, gen_benchmark
from mixradix.evaluate import t1_sweep
from mixradix.pipeline import Context, compile_circuit


def main(argv=None) -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--benchmark", choices=BENCHMARKS, default="cuccaro")
    p.add_argument("--size", type=int, default=25)
    p.add_argument("--strategies", default="eqm,rb,awe,pp")
    p.add_argument("--steps", type=int, default=10)
    a = p.parse_args(argv)
    c = gen_benchmark(a.benchmark, a.size)
    ctx = Context.for_topology(grid_topology(c.num_qubits))
    base = compile_circuit(c, ctx, "qubit_only")
    res = {s: compile_circuit(c, ctx, s) for s in a.strategies.split(",")}
    ratios = [1 / 3 + k * (2 / 3) / a.steps for k in range(a.steps + 1)]
    sw = t1_sweep({s: r.schedule for s, r in res.items()}, base.schedule, ratios)
    names = list(res)
    print("ratio\tqubit_only\t" + "\t".join(names))
    for k, r in enumerate(sw.ratios):
        print(f"{r:.3f}\t{sw.baseline[k]:.4g}\t" + "\t".join(f"{sw.total_eps[s][k]:.4g}" for s in names))
    for s in names:
        print(f"crossover {s}: {sw.crossover_ratio[s]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
