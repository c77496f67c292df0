"""Edge-arrival matching: the online threshold algorithm and its offline twin.

The online algorithm prices every vertex with its incident edge weight in a
greedy matching on the sample values, then accepts an arriving edge iff its
real value beats both endpoint prices and both endpoints are still free.

The offline twin replays the same outcome as a single greedy-style scan over
all 2m draws (both copies of every edge) in decreasing rank order, routing
each edge's first considered copy to either the feasible set or the sample
matching by a coin.  With the coupling coin convention (heads exactly when
the first considered copy is the edge's real draw) the two produce identical
feasible sets, sample matchings, and output matchings realization by
realization, which is the strongest correctness check in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .core import (
    AlgorithmView,
    ArrivalEvent,
    ContractViolation,
    DrawnValue,
    Graph,
    InputError,
    Matching,
    PriceTable,
    Realization,
    RunRecord,
    beats,
    matching_weight,
)
from .distributions import InstanceSpec, _edge_words, draw_realization
from .oracle import greedy_matching

_COIN_SALT = 0xC01F11B5

# CoinMode: "coupled" ties the offline coins to the realization so the twin
# reproduces the online run exactly; "independent" flips fresh fair coins
# (requires coin_seed); a mapping or callable forces specific outcomes.
CoinMode = str | Mapping[int, bool] | Callable[[int], bool]


def _check_permutation(order: Sequence[int], count: int, what: str) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(count)):
        raise InputError(f"order must be a permutation of all {count} {what}")
    return order


def _effective_labels(
    real: Realization, coins: CoinMode, coin_seed: int | None, graph: Graph
) -> Realization:
    """Relabel which copy of each edge counts as the real draw.

    The offline scan flips an edge's coin when its first (larger) copy is
    considered: heads routes that copy to the feasible set, i.e. declares it
    the real draw.  Fixing all coins up front and swapping labels accordingly
    is equivalent, because the pool of active vertices only shrinks, so a copy
    skipped once can never be considered later.
    """
    if coins == "coupled":
        return real
    if coins == "independent":
        if coin_seed is None:
            raise InputError("independent coins require a coin_seed")

        def heads(e: int) -> bool:
            u, v = graph.edges[e]
            return bool(_edge_words(coin_seed, u, v, _COIN_SALT)[0] & 1)

    elif callable(coins):
        heads = coins
    elif isinstance(coins, Mapping):
        forced = coins

        def heads(e: int) -> bool:
            return bool(forced[e])

    else:
        raise InputError(f"unrecognized coin mode {coins!r}")
    samples = list(real.samples)
    reals = list(real.reals)
    for e in range(real.num_edges):
        larger_is_real = beats(reals[e], samples[e])
        if heads(e) != larger_is_real:
            samples[e], reals[e] = reals[e], samples[e]
    return Realization(samples=tuple(samples), reals=tuple(reals))


def run_online_edge(spec: InstanceSpec, real: Realization, order) -> RunRecord:
    """Run the online edge-arrival algorithm.

    ``order`` is either a permutation of edge ids or a controller object with
    a ``next_arrival(view)`` method (see :mod:`prophet_matching.adversary`).
    Acceptance decisions are immediate and irrevocable.
    """
    graph = spec.graph
    m = graph.num_edges
    if real.num_edges != m:
        raise InputError("realization does not match the instance graph")
    sample_matching = greedy_matching(graph, real.samples)
    prices = PriceTable.from_matching(graph, sample_matching, real.samples)

    controller = order if hasattr(order, "next_arrival") else None
    seq = None if controller is not None else _check_permutation(order, m, "edge ids")
    needs_view = controller is not None and getattr(controller, "needs_view", True)

    matched: set[int] = set()
    accepted: list[int] = []
    feasible: list[int] = []
    events: list[ArrivalEvent] = []
    arrived: set[int] = set()
    for step in range(m):
        if controller is None:
            e = seq[step]
        else:
            view = None
            if needs_view:
                view = AlgorithmView(
                    prices=prices,
                    matched_vertices=frozenset(matched),
                    matching_edges=frozenset(accepted),
                    feasible=tuple(feasible),
                    arrived=frozenset(arrived),
                )
            e = controller.next_arrival(view)
            if not isinstance(e, int) or not 0 <= e < m:
                raise ContractViolation(f"controller produced invalid edge id {e!r}")
            if e in arrived:
                raise ContractViolation(f"controller released edge {e} twice")
        arrived.add(e)
        u, v = graph.edges[e]
        r = real.reals[e]
        threshold = max(prices.price(u), prices.price(v))
        if prices.beaten_by(r, u) and prices.beaten_by(r, v):
            feasible.append(e)
            if u not in matched and v not in matched:
                accepted.append(e)
                matched.update((u, v))
                outcome = "accepted"
            else:
                outcome = "conflict_rejected"
        else:
            outcome = "price_rejected"
        events.append(
            ArrivalEvent(
                step=step,
                element=e,
                outcome=outcome,
                edge=e,
                value=r.value,
                threshold=threshold,
            )
        )
    return RunRecord(
        matching=Matching.from_edges(accepted, real.reals),
        sample_matching=sample_matching,
        feasible=tuple(feasible),
        feasible_weight=matching_weight(feasible, real.reals),
        prices=prices,
        events=tuple(events),
    )


@dataclass(frozen=True)
class EdgeArrivalTrace:
    """Offline-run trace with the per-vertex bookkeeping the analysis uses.

    ``first_edge`` maps each vertex that ever had an incident edge considered
    to the first such edge; ``safe`` holds the vertices whose first edge
    landed in the feasible set and is shielded from conflicts (it is the only
    feasible edge at the vertex, and its other endpoint has no lower-ranked
    feasible edge).
    """

    record: RunRecord
    graph: Graph
    realization: Realization  # with labels as the scan used them
    considered: tuple[int, ...]
    considered_vertices: frozenset[int]
    first_edge: Mapping[int, int]
    safe: frozenset[int]
    coin_flips: tuple[tuple[int, bool], ...]


def _compute_safe(
    graph: Graph,
    feasible: frozenset[int],
    considered_vertices: frozenset[int],
    first_edge: Mapping[int, int],
    reals: Sequence[DrawnValue],
) -> frozenset[int]:
    out = []
    for v in considered_vertices:
        e = first_edge[v]
        if e not in feasible:
            continue
        a, b = graph.edges[e]
        u = b if a == v else a
        if any(e2 in feasible and e2 != e for e2 in graph.incident[v]):
            continue
        lead = reals[e]
        if any(
            e2 in feasible and e2 != e and beats(lead, reals[e2])
            for e2 in graph.incident[u]
        ):
            continue
        out.append(v)
    return frozenset(out)


def safe_set(trace: EdgeArrivalTrace) -> frozenset[int]:
    """Vertices whose first considered edge is feasible and conflict-shielded.

    A vertex qualifies iff its first considered edge (u, v) is its only
    feasible incident edge and the other endpoint u has no feasible incident
    edge ranking below it.
    """
    return _compute_safe(
        trace.graph,
        frozenset(trace.record.feasible),
        trace.considered_vertices,
        trace.first_edge,
        trace.realization.reals,
    )


_FREE, _REAL_USED, _SAMPLE_USED = 0, 1, 2


def run_offline_edge(
    spec: InstanceSpec,
    real: Realization,
    order,
    coin_seed: int | None = None,
    coins: CoinMode = "coupled",
) -> EdgeArrivalTrace:
    """Run the offline twin: one decreasing scan over all 2m draws.

    A draw is considered when its edge is untouched and both endpoints are
    still active.  The edge's coin then routes it: heads declares the draw
    real and adds the edge to the feasible set; tails declares it a sample
    and adds the edge to the sample matching, retiring both endpoints.  The
    later, smaller copy of a feasible edge still joins the sample matching if
    its endpoints remain active.  Finally the output matching is extracted
    from the feasible set in the given arrival order.
    """
    graph = spec.graph
    m = graph.num_edges
    seq = _check_permutation(order, m, "edge ids")
    eff = _effective_labels(real, coins, coin_seed, graph)

    draws = []
    for e in range(m):
        draws.append((eff.samples[e].sort_key(), e, False))
        draws.append((eff.reals[e].sort_key(), e, True))
    draws.sort()

    state = [_FREE] * m
    active = set(range(graph.num_vertices))
    feasible: list[int] = []
    sample_ids: list[int] = []
    considered: list[int] = []
    first_edge: dict[int, int] = {}
    coin_flips: list[tuple[int, bool]] = []
    for _, e, is_real in draws:
        u, v = graph.edges[e]
        if state[e] == _FREE and u in active and v in active:
            coin_flips.append((e, is_real))
            considered.append(e)
            first_edge.setdefault(u, e)
            first_edge.setdefault(v, e)
            if is_real:
                state[e] = _REAL_USED
                feasible.append(e)
            else:
                state[e] = _SAMPLE_USED
                sample_ids.append(e)
                active.difference_update((u, v))
        elif state[e] == _REAL_USED and u in active and v in active:
            # the sample copy of an already-feasible edge
            sample_ids.append(e)
            active.difference_update((u, v))

    feas_set = frozenset(feasible)
    used: set[int] = set()
    accepted: list[int] = []
    for e in seq:
        if e in feas_set:
            u, v = graph.edges[e]
            if u not in used and v not in used:
                accepted.append(e)
                used.update((u, v))

    sample_matching = Matching.from_edges(sample_ids, eff.samples)
    record = RunRecord(
        matching=Matching.from_edges(accepted, eff.reals),
        sample_matching=sample_matching,
        feasible=tuple(feasible),
        feasible_weight=matching_weight(feasible, eff.reals),
        prices=PriceTable.from_matching(graph, sample_matching, eff.samples),
    )
    considered_vertices = frozenset(first_edge)
    return EdgeArrivalTrace(
        record=record,
        graph=graph,
        realization=eff,
        considered=tuple(considered),
        considered_vertices=considered_vertices,
        first_edge=first_edge,
        safe=_compute_safe(graph, feas_set, considered_vertices, first_edge, eff.reals),
        coin_flips=tuple(coin_flips),
    )


def coupled_equivalence_check(spec: InstanceSpec, seed: int, order) -> bool:
    """Do the online run and its coupled offline twin agree exactly?

    Draws one realization, runs both procedures with the same arrival order,
    and compares the feasible set, the sample matching, and the output
    matching as sets and by weight.  Any disagreement is a bug.
    """
    real = draw_realization(spec, seed)
    order = _check_permutation(order, spec.graph.num_edges, "edge ids")
    online = run_online_edge(spec, real, order)
    offline = run_offline_edge(spec, real, order).record
    return (
        set(online.feasible) == set(offline.feasible)
        and online.sample_matching.edges == offline.sample_matching.edges
        and online.matching.edges == offline.matching.edges
        and online.feasible_weight == offline.feasible_weight
        and online.sample_matching.weight == offline.sample_matching.weight
        and online.matching.weight == offline.matching.weight
    )
