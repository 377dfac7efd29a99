"""Compare the compiled and pure-Python exact-cover kernels.

    python benchmarks/bench_kernel.py [--repeat 3]

Workloads: the bare search on prebuilt problems (every solution of the
built-in sets on every target), coverage of the four built-in sets over the 20 targets, counting
all TANGRAM solutions on every target, and the first 2000 candidates of the
seven-piece search.  Node counts are printed to show both kernels did the
same work.
"""
import argparse
import time

from chie import kernel
from chie.pieces import BUILTINS, builtin
from chie.search import SearchBudget, search_piece_sets
from chie.solver import Problem, count_solutions, coverage
from chie.targets import enumerate_targets


_PROBLEMS = []


def w_kernel():
    """Count every solution of each built-in set on each target, problems prebuilt."""
    if not _PROBLEMS:
        _PROBLEMS.extend(Problem(builtin(n), t.region) for n in BUILTINS for t in enumerate_targets(16))
    sols = nodes = 0
    for p in _PROBLEMS:
        c, k, _, _ = p.run()
        sols, nodes = sols + c, nodes + k
    return sols, nodes


def w_coverage():
    return sum(v.nodes for name in BUILTINS for v in coverage(builtin(name)).verdicts)


def w_count():
    ps = builtin("TANGRAM")
    nodes = 0
    for t in enumerate_targets(16):
        count_solutions(ps, t.region)
        nodes += Problem(ps, t.region).run()[1]
    return nodes


def w_search():
    r = search_piece_sets(7, 16, 19, SearchBudget(max_candidates=2000, max_results=100))
    return r.candidates


WORKLOADS = {"kernel": w_kernel, "coverage": w_coverage, "count": w_count, "search": w_search}


def timed(fn, backend, repeat):
    kernel.BACKEND = backend
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    enumerate_targets(16)
    backends = ["python"] + (["cython"] if kernel._compiled is not None else [])
    if len(backends) == 1:
        print("compiled kernel not available; timing the Python kernel only")
    print(f"{'workload':10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup  work")
    for name, fn in WORKLOADS.items():
        res = [timed(fn, b, args.repeat) for b in backends]
        works = {r[1] for r in res}
        speed = f"{res[0][0] / res[-1][0]:8.1f}x" if len(res) > 1 else "       -"
        print(f"{name:10} " + " ".join(f"{t:9.3f}s" for t, _ in res) + f"  {speed}  {sorted(works)}")
        assert len(works) == 1, "kernels disagree"


if __name__ == "__main__":
    main()
