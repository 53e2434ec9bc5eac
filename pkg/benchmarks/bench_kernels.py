"""Time the compiled and pure-Python pivot kernels on the same LP batch.

    python3 benchmarks/bench_kernels.py [--books 200] [--vars 4] [--dense 30] [--repeat 3]

Two workloads: book-extension programs (setup dominates, kernels matter
little) and dense random programs (pivoting dominates).
"""

import argparse
import random
import time
from fractions import Fraction

from psat.coherence import Book, _extension_program
from psat.algebra import build_algebra
from psat.ratlp import LinearProgram, solve
from psat.ratlp._backend import compiled_kernels, python_kernels


def programs(count, n_vars, seed):
    rng = random.Random(seed)
    algebra = build_algebra([f"X{i + 1}" for i in range(n_vars)])
    out = []
    for _ in range(count):
        items = []
        for _ in range(rng.randint(2, 6)):
            e = algebra.event_from_positions(p for p in range(algebra.size) if rng.random() < 0.5)
            items.append((e, Fraction(rng.randint(0, 20), 20)))
        book = Book(algebra, tuple(items))
        query = [rng.randint(0, 1) for _ in range(algebra.size)]
        out.append(_extension_program(book, query, "max"))
    return out


def dense_programs(count, size, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        rows = [
            ([Fraction(rng.randint(1, 30), rng.randint(1, 9)) for _ in range(size)], "<=", rng.randint(10, 99))
            for _ in range(size)
        ]
        obj = [rng.randint(1, 9) for _ in range(size)]
        out.append(LinearProgram.build(size, rows, obj, "max", lower=0))
    return out


def bench(kernels, lps, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        results = [solve(lp, kernels=kernels) for lp in lps]
        best = min(best, time.perf_counter() - start)
    return best, results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--books", type=int, default=200)
    ap.add_argument("--vars", type=int, default=4)
    ap.add_argument("--dense", type=int, default=30, help="size of the dense programs")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    workloads = [
        (f"books ({args.books} programs, {2 ** args.vars} worlds)", programs(args.books, args.vars, args.seed)),
        (f"dense ({args.dense}x{args.dense}, 5 programs)", dense_programs(5, args.dense, args.seed)),
    ]
    for name, lps in workloads:
        print(name)
        py_time, py_res = bench(python_kernels, lps, args.repeat)
        print(f"  python  {py_time:8.3f}s")
        if compiled_kernels is None:
            print("  cython  not built")
            continue
        cy_time, cy_res = bench(compiled_kernels, lps, args.repeat)
        assert cy_res == py_res, "backends disagree"
        print(f"  cython  {cy_time:8.3f}s  speedup {py_time / cy_time:.2f}x")

if __name__ == "__main__":
    main()
