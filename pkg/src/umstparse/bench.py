"""Benchmark harness: random connected graphs and MSF backend timings.

Emits CSV rows `algorithm,n,m,seed,wall_time_ns,total_weight`; equal
total weights across algorithms on the same graph double as a cheap
cross-check of the implementations.
"""

from __future__ import annotations

import time
from typing import Iterable, TextIO

import numpy as np

from .errors import InputError
from .graph import UndirectedGraph
from .mst import RandomSource, boruvka_msf, kruskal_msf, randomized_msf

CSV_HEADER = "algorithm,n,m,seed,wall_time_ns,total_weight"

ALGORITHMS = ("kruskal", "boruvka", "randomized")


def random_connected_graph(n: int, m: int,
                           rng: np.random.Generator) -> UndirectedGraph:
    """Uniform random spanning backbone plus m-(n-1) distinct extra edges."""
    if n < 2:
        raise InputError("need at least 2 vertices")
    max_edges = n * (n - 1) // 2
    m = int(min(max(m, n - 1), max_edges))
    hi = np.arange(1, n, dtype=np.int64)
    lo = (rng.random(n - 1) * hi).astype(np.int64)
    keys = set((lo * n + hi).tolist())
    extra = m - (n - 1)
    lo_parts = [lo]
    hi_parts = [hi]
    while extra > 0:
        cand = rng.integers(0, n, size=(int(extra * 1.4) + 8, 2))
        a = cand.min(axis=1)
        b = cand.max(axis=1)
        good = a != b
        a, b = a[good], b[good]
        ck = a * n + b
        ck, idx = np.unique(ck, return_index=True)
        fresh = [i for k, i in zip(ck.tolist(), idx.tolist()) if k not in keys]
        fresh = fresh[:extra]
        keys.update((a[i] * n + b[i] for i in fresh))
        lo_parts.append(a[fresh])
        hi_parts.append(b[fresh])
        extra -= len(fresh)
    u = np.concatenate(lo_parts)
    v = np.concatenate(hi_parts)
    return UndirectedGraph(n, u, v, rng.random(len(u)),
                           np.arange(len(u), dtype=np.int64))


def _run_algorithm(name: str, graph: UndirectedGraph, seed: int):
    if name == "kruskal":
        return kruskal_msf(graph)
    if name == "boruvka":
        return boruvka_msf(graph)
    if name == "randomized":
        return randomized_msf(graph, RandomSource(seed))
    raise InputError(f"unknown algorithm {name!r}")


def _bench_graph(graph: UndirectedGraph, seed: int, algorithms, rows,
                 stream) -> None:
    for name in algorithms:
        start = time.perf_counter_ns()
        forest = _run_algorithm(name, graph, int(seed))
        elapsed = time.perf_counter_ns() - start
        row = (f"{name},{graph.n_vertices},{graph.n_edges},"
               f"{seed},{elapsed},{forest.total_weight!r}")
        rows.append(row)
        if stream is not None:
            stream.write(row + "\n")
            stream.flush()


def _checked(algorithms) -> list[str]:
    algorithms = list(algorithms)
    for name in algorithms:
        if name not in ALGORITHMS:
            raise InputError(f"unknown algorithm {name!r}")
    return algorithms


def run_bench(sizes: Iterable[int], densities: Iterable[int],
              seeds: Iterable[int], algorithms: Iterable[str] = ALGORITHMS,
              stream: TextIO | None = None) -> list[str]:
    """Time each algorithm on each (m, density, seed) instance.

    density is the target edge/vertex ratio: a graph with m edges gets
    n = max(2, m // density) vertices.  Rows also land on `stream` as
    they are produced, so long runs show progress.
    """
    algorithms = _checked(algorithms)
    rows = [CSV_HEADER]
    if stream is not None:
        stream.write(CSV_HEADER + "\n")
    for m in sizes:
        for density in densities:
            n = max(2, int(m) // int(density))
            for seed in seeds:
                graph = random_connected_graph(
                    n, int(m), np.random.default_rng([int(seed), int(m), int(density)]))
                _bench_graph(graph, int(seed), algorithms, rows, stream)
    return rows


def run_bench_file(path, seeds: Iterable[int],
                   algorithms: Iterable[str] = ALGORITHMS,
                   stream: TextIO | None = None) -> list[str]:
    """Bench a fixed graph read from the debug dump format."""
    from .graph import load_graph
    algorithms = _checked(algorithms)
    with open(path, encoding="utf-8") as fh:
        graph = load_graph(fh)
    rows = [CSV_HEADER]
    if stream is not None:
        stream.write(CSV_HEADER + "\n")
    for seed in seeds:
        _bench_graph(graph, int(seed), algorithms, rows, stream)
    return rows
