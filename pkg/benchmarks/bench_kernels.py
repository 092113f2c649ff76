#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Generates seeded synthetic client-intermediary graphs, times betweenness,
connected components, and triangle counting on every importable backend, and
prints one table per graph. Run:

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --clients 20000 --intermediaries 800 --repeat 5
"""

import argparse
import sys
import time

import numpy as np

from oligraph.kernels import backends
from oligraph.synth import SynthConfig, generate


def time_call(fn, *args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_graph(label, graph, impls, repeat):
    indptr, indices = graph.csr()
    print(f"\n{label}: {graph.n_nodes} nodes, {graph.n_edges} edges")
    print(f"{'kernel':<22}" + "".join(f"{impl.NAME:>14}" for impl in impls)
          + ("       speedup" if len(impls) > 1 else ""))
    rows = [
        ("betweenness", lambda impl: impl.betweenness(indptr, indices)),
        ("component_labels", lambda impl: impl.component_labels(indptr, indices)),
        ("triangle_count", lambda impl: impl.triangle_count(indptr, indices)),
    ]
    for name, call in rows:
        times = []
        results = []
        for impl in impls:
            t, r = time_call(call, impl, repeat=repeat)
            times.append(t)
            results.append(r)
        _check_agreement(name, results)
        line = f"{name:<22}" + "".join(f"{t * 1000:>12.1f}ms" for t in times)
        if len(times) > 1:
            line += f"{times[-1] / times[0]:>12.1f}x"
        print(line)


def _check_agreement(name, results):
    a = results[0]
    for b in results[1:]:
        if isinstance(a, tuple):
            ok = all(np.array_equal(x, y) if isinstance(x, np.ndarray) else x == y
                     for x, y in zip(a, b))
        elif isinstance(a, np.ndarray):
            ok = np.array_equal(a, b)
        else:
            ok = a == b
        if not ok:
            print(f"!! backend disagreement on {name}", file=sys.stderr)
            sys.exit(1)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--clients", type=int, default=None,
                        help="override the client count (single graph run)")
    parser.add_argument("--intermediaries", type=int, default=None)
    parser.add_argument("--bias", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions; best of N is reported")
    args = parser.parse_args()

    impls = backends()
    print("backends:", ", ".join(impl.NAME for impl in impls))
    if len(impls) == 1:
        print("note: compiled extension not built; timing the fallback only")

    if args.clients:
        configs = [(f"custom (bias={args.bias})",
                    SynthConfig(args.clients, args.intermediaries or max(args.clients // 25, 1),
                                attachment_bias=args.bias, seed=args.seed))]
    else:
        configs = [
            ("small", SynthConfig(2_000, 100, attachment_bias=1.0, seed=args.seed)),
            ("medium", SynthConfig(10_000, 400, attachment_bias=1.0, seed=args.seed)),
            ("large", SynthConfig(30_000, 1_200, attachment_bias=1.0, seed=args.seed)),
        ]
    for label, config in configs:
        bench_graph(label, generate(config), impls, args.repeat)


if __name__ == "__main__":
    main()
