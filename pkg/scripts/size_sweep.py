"""Gate EPS relative to qubit-only across benchmark sizes on minimal grids.

    python3 scripts/size_sweep.py --benchmark cuccaro --sizes 5..20 --strategies fq,eqm,rb,awe,pp
"""

import argparse
import csv
import sys

from mixradix.arch import grid_topology
from mixradix.benchmarks import BENCHMARKS, gen_benchmark
from mixradix.pipeline import Context, compile_circuit


def main(argv=None) -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--benchmark", choices=BENCHMARKS, default="cuccaro")
    p.add_argument("--sizes", default="5..15")
    p.add_argument("--strategies", default="fq,eqm,rb,awe,pp")
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    lo, hi = map(int, a.sizes.split(".."))
    strategies = a.strategies.split(",")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["size", "num_qubits", "strategy", "gate_eps", "ratio_to_qubit_only", "pairs"])
    for size in range(lo, hi + 1):
        c = gen_benchmark(a.benchmark, size, a.seed)
        ctx = Context.for_topology(grid_topology(c.num_qubits))
        base = compile_circuit(c, ctx, "qubit_only").report.gate_eps
        for s in strategies:
            res = compile_circuit(c, ctx, s)
            eps = res.report.gate_eps
            w.writerow([size, c.num_qubits, s, f"{eps:.6g}", f"{eps / base:.4f}", len(res.plan.pairs)])
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
