"""Minimum spanning forest algorithms.

Three routes to the same forest:

* :func:`kruskal_msf` — sort-based reference implementation, used as the
  independent oracle in tests;
* :func:`boruvka_msf` — repeated minimum-edge-selection steps;
* :func:`randomized_msf` — recursive random-sampling algorithm whose
  expected running time is linear in the number of edges: two
  minimum-edge steps, a half-sampled subgraph, and filtering of edges
  that are too heavy against the sample's forest.

All three share the global (weight, original_id) tie-breaking order, so
the forest is unique and results can be compared as edge-id sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import (
    UndirectedGraph,
    boruvka_step,
    connected_components,
    simplify,
)
from .unionfind import UnionFind


@dataclass(frozen=True)
class SpanningForest:
    """Original-graph edge ids of a minimum spanning forest."""
    edge_ids: frozenset
    total_weight: float

    @property
    def n_edges(self) -> int:
        return len(self.edge_ids)


class RandomSource:
    """Seedable coin-flip stream; one seed fixes the whole algorithm trace."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def coin_flips(self, k: int) -> np.ndarray:
        """k fair coin flips; True means the edge is sampled."""
        return self._gen.random(k) < 0.5

    @classmethod
    def derive(cls, seed: int, *keys: int) -> "RandomSource":
        """A child source keyed by (seed, *keys); stable across runs."""
        ss = np.random.SeedSequence([int(seed), *[int(k) for k in keys]])
        return cls(int(ss.generate_state(1, np.uint64)[0]))


def _forest_of(graph: UndirectedGraph, ids: np.ndarray) -> SpanningForest:
    ids = np.asarray(ids, dtype=np.int64)
    mask = np.isin(graph.original_id, ids)
    return SpanningForest(edge_ids=frozenset(int(i) for i in ids),
                          total_weight=float(graph.weight[mask].sum()))


def kruskal_msf(graph: UndirectedGraph) -> SpanningForest:
    """Minimum spanning forest by sorted edge insertion (the test oracle)."""
    order = np.lexsort((graph.original_id, graph.weight))
    us = graph.u[order].tolist()
    vs = graph.v[order].tolist()
    oids = graph.original_id[order].tolist()
    uf = UnionFind(graph.n_vertices)
    chosen = []
    for a, b, oid in zip(us, vs, oids):
        if uf.union(a, b):
            chosen.append(oid)
            if uf.n_sets == 1:
                break
    return _forest_of(graph, np.asarray(chosen, dtype=np.int64))


def boruvka_msf(graph: UndirectedGraph) -> SpanningForest:
    """Minimum spanning forest by repeated minimum-edge contraction."""
    g = simplify(graph)
    parts = []
    while g.n_edges:
        contraction, selected = boruvka_step(g)
        parts.append(selected)
        g = contraction.graph
    ids = (np.concatenate(parts) if parts else np.empty(0, dtype=np.int64))
    return _forest_of(graph, ids)


def _csr_forest(n: int, fu: np.ndarray, fv: np.ndarray, fw: np.ndarray):
    """CSR adjacency (neighbor, edge weight) arrays for a forest."""
    ends = np.concatenate([fu, fv])
    other = np.concatenate([fv, fu])
    wts = np.concatenate([fw, fw])
    order = np.argsort(ends, kind="stable")
    counts = np.bincount(ends, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, other[order], wts[order]


def _root_forest(n: int, fu: np.ndarray, fv: np.ndarray, fw: np.ndarray,
                 roots: np.ndarray):
    """BFS-root every tree of the forest; returns parent/depth/parent-weight."""
    indptr, nbr, nbr_w = _csr_forest(n, fu, fv, fw)
    parent = np.arange(n, dtype=np.int64)
    pweight = np.full(n, -np.inf)
    depth = np.zeros(n, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    visited[roots] = True
    frontier = roots
    while frontier.size:
        counts = indptr[frontier + 1] - indptr[frontier]
        total = int(counts.sum())
        if total == 0:
            break
        starts = np.repeat(indptr[frontier], counts)
        prefix = np.concatenate([[0], np.cumsum(counts)[:-1]])
        pos = starts + (np.arange(total) - np.repeat(prefix, counts))
        targets = nbr[pos]
        weights = nbr_w[pos]
        sources = np.repeat(frontier, counts)
        new = ~visited[targets]
        targets, weights, sources = targets[new], weights[new], sources[new]
        parent[targets] = sources
        pweight[targets] = weights
        depth[targets] = depth[sources] + 1
        visited[targets] = True
        frontier = targets
    return parent, depth, pweight


def _path_max_table(parent: np.ndarray, depth: np.ndarray,
                    pweight: np.ndarray):
    """Binary-lifting ancestor and path-maximum tables."""
    n = len(parent)
    max_depth = int(depth.max()) if n else 0
    log = max(1, int(max_depth).bit_length())
    up = np.empty((log, n), dtype=np.int64)
    mx = np.empty((log, n))
    up[0] = parent
    mx[0] = pweight
    for k in range(1, log):
        up[k] = up[k - 1][up[k - 1]]
        mx[k] = np.maximum(mx[k - 1], mx[k - 1][up[k - 1]])
    return up, mx


def _path_max(up, mx, depth, a, b):
    """Maximum forest-edge weight on the tree path between a[i] and b[i].

    Assumes every (a[i], b[i]) pair lies in one tree.  A zero-length path
    yields -inf.
    """
    a = a.copy()
    b = b.copy()
    best = np.full(len(a), -np.inf)
    swap = depth[a] < depth[b]
    a[swap], b[swap] = b[swap], a[swap]
    diff = depth[a] - depth[b]
    for k in range(up.shape[0]):
        step = (diff >> k) & 1 == 1
        if step.any():
            best[step] = np.maximum(best[step], mx[k][a[step]])
            a[step] = up[k][a[step]]
    for k in range(up.shape[0] - 1, -1, -1):
        move = (a != b) & (up[k][a] != up[k][b])
        if move.any():
            best[move] = np.maximum(best[move],
                                    np.maximum(mx[k][a[move]], mx[k][b[move]]))
            a[move] = up[k][a[move]]
            b[move] = up[k][b[move]]
    last = a != b
    if last.any():
        best[last] = np.maximum(best[last],
                                np.maximum(mx[0][a[last]], mx[0][b[last]]))
    return best


def _f_heavy_mask(graph: UndirectedGraph, forest_mask: np.ndarray) -> np.ndarray:
    """Boolean mask over graph edges: heavier than the forest path maximum.

    Forest edges themselves are never marked; edges across distinct forest
    components are treated as having an infinite path maximum.
    """
    m = graph.n_edges
    heavy = np.zeros(m, dtype=bool)
    query = np.nonzero(~forest_mask)[0]
    if query.size == 0:
        return heavy
    fu = graph.u[forest_mask]
    fv = graph.v[forest_mask]
    fw = graph.weight[forest_mask]
    labeling = connected_components(graph, np.nonzero(forest_mask)[0])
    labels = labeling.component_of
    roots = np.unique(labels, return_index=True)[1]  # first vertex per component
    parent, depth, pweight = _root_forest(graph.n_vertices, fu, fv, fw, roots)
    a = graph.u[query]
    b = graph.v[query]
    same_tree = labels[a] == labels[b]
    if same_tree.any():
        up, mx = _path_max_table(parent, depth, pweight)
        pmax = _path_max(up, mx, depth, a[same_tree], b[same_tree])
        heavy[query[same_tree]] = graph.weight[query[same_tree]] > pmax
    return heavy


def f_heavy_edges(graph: UndirectedGraph, forest: SpanningForest) -> set:
    """Original ids of edges strictly heavier than their forest path maximum.

    Edges whose endpoints lie in different forest components are never
    reported, nor are the forest edges themselves.
    """
    ids = np.asarray(sorted(forest.edge_ids), dtype=np.int64)
    forest_mask = np.isin(graph.original_id, ids)
    if int(forest_mask.sum()) != len(ids):
        raise InputError("forest contains edges not present in the graph")
    heavy = _f_heavy_mask(graph, forest_mask)
    return {int(i) for i in graph.original_id[heavy]}


def _randomized_rec(g: UndirectedGraph, rng: RandomSource) -> list:
    if g.n_edges == 0:
        return []
    parts = []
    contraction, sel1 = boruvka_step(g)
    parts.append(sel1)
    gc = contraction.graph
    if gc.n_edges:
        contraction2, sel2 = boruvka_step(gc)
        parts.append(sel2)
        gc = contraction2.graph
    if gc.n_edges == 0:
        return parts
    coins = rng.coin_flips(gc.n_edges)
    sampled = np.nonzero(coins)[0]
    if sampled.size:
        su, sv = gc.u[sampled], gc.v[sampled]
        verts = np.unique(np.concatenate([su, sv]))
        sample = UndirectedGraph(
            len(verts),
            np.searchsorted(verts, su),
            np.searchsorted(verts, sv),
            gc.weight[sampled],
            gc.original_id[sampled],
            _validate=False,
        )
        f_parts = _randomized_rec(sample, rng)
        f_ids = (np.concatenate(f_parts) if f_parts
                 else np.empty(0, dtype=np.int64))
    else:
        f_ids = np.empty(0, dtype=np.int64)
    forest_mask = np.isin(gc.original_id, f_ids)
    keep = ~_f_heavy_mask(gc, forest_mask)
    filtered = UndirectedGraph(gc.n_vertices, gc.u[keep], gc.v[keep],
                               gc.weight[keep], gc.original_id[keep],
                               _validate=False)
    parts.extend(_randomized_rec(filtered, rng))
    return parts


def randomized_msf(graph: UndirectedGraph, rng: RandomSource) -> SpanningForest:
    """Exact minimum spanning forest via random sampling and filtering.

    Per recursion level: two minimum-edge contraction steps (their selected
    edges are forest edges by the cut property), a fair per-edge sample
    whose recursive forest is used to discard edges that cannot be in the
    forest (cycle property), and a recursive call on the filtered rest.
    The same seed always yields the same trace and the same forest.
    """
    parts = _randomized_rec(simplify(graph), rng)
    ids = (np.concatenate(parts) if parts else np.empty(0, dtype=np.int64))
    return _forest_of(graph, ids)
