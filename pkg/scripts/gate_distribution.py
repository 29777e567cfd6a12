"""Physical gate counts by category for each strategy on one benchmark.

    python3 scripts/gate_distribution.py --benchmark cnu --size 12
"""

import argparse
import sys

from mixradix.arch import grid_topology
from mixradix.benchmarks import BENCHMARKS, gen_benchmark
from mixradix.evaluate import CATEGORIES
from mixradix.pipeline import Context, compile_circuit


def main(argv=None) -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--benchmark", choices=BENCHMARKS, default="cnu")
    p.add_argument("--size", type=int, default=12)
    p.add_argument("--strategies", default="qubit_only,fq,eqm,rb,awe,pp")
    a = p.parse_args(argv)
    c = gen_benchmark(a.benchmark, a.size)
    ctx = Context.for_topology(grid_topology(c.num_qubits))
    names = a.strategies.split(",")
    counts = {s: compile_circuit(c, ctx, s).report.gate_counts for s in names}
    width = max(len(k) for k in CATEGORIES)
    print(" " * width + "".join(f"{s:>12}" for s in names))
    for k in CATEGORIES:
        print(f"{k:<{width}}" + "".join(f"{counts[s][k]:>12}" for s in names))
    return 0


if __name__ == "__main__":
    sys.exit(main())
