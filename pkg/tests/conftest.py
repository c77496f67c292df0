"""Shared test helpers: independent brute-force oracles and tiny builders.

The brute-force matcher enumerates every subset of edges, so it shares no
code path with the solvers under test.
"""

from __future__ import annotations

from itertools import combinations

from prophet_matching.core import DrawnValue, Graph, Realization


def brute_force_max_weight(graph: Graph, values) -> float:
    """Maximum matching weight by exhaustive subset enumeration (m <= ~14)."""
    m = graph.num_edges
    vals = [values[e] for e in range(m)]
    best = 0.0
    for size in range(1, m + 1):
        for subset in combinations(range(m), size):
            used = set()
            ok = True
            for eid in subset:
                u, v = graph.edges[eid]
                if u in used or v in used:
                    ok = False
                    break
                used.update((u, v))
            if ok:
                best = max(best, sum(vals[e].value for e in subset))
    return best


def general_graph(n: int, edges) -> Graph:
    return Graph(num_vertices=n, edges=tuple(edges))


def bipartite_graph(buyers, items, edges) -> Graph:
    n = len(buyers) + len(items)
    return Graph(
        num_vertices=n,
        edges=tuple(edges),
        kind="bipartite",
        buyers=tuple(buyers),
        items=tuple(items),
    )


def dv(value: float, key: int) -> DrawnValue:
    return DrawnValue(float(value), key)


def realization(samples, reals) -> Realization:
    """Build a realization from (value, key) pairs."""
    return Realization(
        samples=tuple(dv(v, k) for v, k in samples),
        reals=tuple(dv(v, k) for v, k in reals),
    )
