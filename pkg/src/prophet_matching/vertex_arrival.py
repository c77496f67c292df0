"""Bipartite matching with one-sided vertex arrivals, online and offline.

Items are fixed; buyers arrive one by one with all their incident real values
revealed at once.  Prices on both sides come from the greedy matching on the
sample values.  An arriving buyer contributes at most one edge to the
feasible set: the highest-ranked incident edge beating both its buyer price
and its item price.  That edge joins the matching iff its item is still free.

The offline twin scans all 2m draws in decreasing rank order, keeping three
pools: buyers still open for a feasible edge, buyers still open on the sample
side, and items still open on the sample side.  Under the coupling coin
convention it reproduces the online run exactly, realization by realization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    AlgorithmView,
    ArrivalEvent,
    CapabilityError,
    ContractViolation,
    Graph,
    InputError,
    Matching,
    PriceTable,
    Realization,
    RunRecord,
    matching_weight,
)
from .distributions import InstanceSpec, draw_realization
from .edge_arrival import CoinMode, _effective_labels
from .oracle import greedy_matching


def _require_bipartite(graph: Graph):
    if graph.kind != "bipartite":
        raise CapabilityError("vertex-arrival algorithms require a bipartite graph")


def _check_buyer_order(order, buyers: tuple[int, ...]) -> list[int]:
    order = list(order)
    if sorted(order) != sorted(buyers):
        raise InputError("order must be a permutation of the buyer vertices")
    return order


def run_online_vertex(spec: InstanceSpec, real: Realization, order) -> RunRecord:
    """Run the online one-sided vertex-arrival algorithm.

    ``order`` is a permutation of the buyer ids or a controller object.
    """
    graph = spec.graph
    _require_bipartite(graph)
    if real.num_edges != graph.num_edges:
        raise InputError("realization does not match the instance graph")
    sample_matching = greedy_matching(graph, real.samples)
    prices = PriceTable.from_matching(graph, sample_matching, real.samples)

    controller = order if hasattr(order, "next_arrival") else None
    seq = None if controller is not None else _check_buyer_order(order, graph.buyers)
    needs_view = controller is not None and getattr(controller, "needs_view", True)
    buyer_set = set(graph.buyers)

    taken_items: set[int] = set()
    matched_vertices: set[int] = set()
    accepted: list[int] = []
    feasible: list[int] = []
    events: list[ArrivalEvent] = []
    arrived: set[int] = set()
    for step in range(len(graph.buyers)):
        if controller is None:
            i = seq[step]
        else:
            view = None
            if needs_view:
                view = AlgorithmView(
                    prices=prices,
                    matched_vertices=frozenset(matched_vertices),
                    matching_edges=frozenset(accepted),
                    feasible=tuple(feasible),
                    arrived=frozenset(arrived),
                )
            i = controller.next_arrival(view)
            if i not in buyer_set:
                raise ContractViolation(f"controller produced invalid buyer id {i!r}")
            if i in arrived:
                raise ContractViolation(f"controller released buyer {i} twice")
        arrived.add(i)

        best = None
        for e in graph.incident[i]:
            r = real.reals[e]
            _, j = graph.buyer_item(e)
            if prices.beaten_by(r, i) and prices.beaten_by(r, j):
                if best is None or r.sort_key() < real.reals[best].sort_key():
                    best = e
        if best is None:
            events.append(ArrivalEvent(step=step, element=i, outcome="no_feasible_edge"))
            continue
        feasible.append(best)
        _, j = graph.buyer_item(best)
        if j not in taken_items:
            accepted.append(best)
            taken_items.add(j)
            matched_vertices.update((i, j))
            outcome = "accepted"
        else:
            outcome = "conflict_rejected"
        events.append(
            ArrivalEvent(
                step=step,
                element=i,
                outcome=outcome,
                edge=best,
                value=real.reals[best].value,
                threshold=max(prices.price(i), prices.price(j)),
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
class VertexArrivalTrace:
    """Offline-run trace for the vertex-arrival model.

    ``safe_matching`` resolves each item's feasible-set conflicts in favor of
    the largest incident feasible edge.  The pool fields hold the final state
    of the scan's bookkeeping sets.
    """

    record: RunRecord
    graph: Graph
    realization: Realization
    safe_matching: Matching
    open_buyers_real: frozenset[int]
    open_buyers_sample: frozenset[int]
    open_items: frozenset[int]
    coin_flips: tuple[tuple[int, bool], ...]


def build_safe_matching(trace: VertexArrivalTrace) -> Matching:
    """Keep, per item, the highest-ranked feasible edge.

    Buyers appear at most once in the feasible set, so the result is a valid
    matching.
    """
    graph = trace.graph
    reals = trace.realization.reals
    best_for_item: dict[int, int] = {}
    for e in trace.record.feasible:
        _, j = graph.buyer_item(e)
        cur = best_for_item.get(j)
        if cur is None or reals[e].sort_key() < reals[cur].sort_key():
            best_for_item[j] = e
    return Matching.from_edges(best_for_item.values(), reals)


def run_offline_vertex(
    spec: InstanceSpec,
    real: Realization,
    order,
    coin_seed: int | None = None,
    coins: CoinMode = "coupled",
) -> VertexArrivalTrace:
    """Run the offline twin of the vertex-arrival algorithm.

    Scans all 2m draws in decreasing rank order.  A free edge is coin-marked
    on first sight.  A real-designated copy joins the feasible set if its
    buyer has no feasible edge yet, is unmatched on the sample side, and its
    item is still open; its buyer then leaves the open-for-feasible pool.  A
    sample-designated copy joins the sample matching if buyer and item are
    open on the sample side; both then leave their pools.  The output
    matching is extracted from the feasible set in buyer arrival order.
    """
    graph = spec.graph
    _require_bipartite(graph)
    seq = _check_buyer_order(order, graph.buyers)
    eff = _effective_labels(real, coins, coin_seed, graph)

    draws = []
    for e in range(graph.num_edges):
        draws.append((eff.samples[e].sort_key(), e, False))
        draws.append((eff.reals[e].sort_key(), e, True))
    draws.sort()

    marked = [False] * graph.num_edges
    open_real: set[int] = set(graph.buyers)
    open_sample: set[int] = set(graph.buyers)
    open_items: set[int] = set(graph.items)
    feasible: list[int] = []
    sample_ids: list[int] = []
    coin_flips: list[tuple[int, bool]] = []
    for _, e, is_real in draws:
        i, j = graph.buyer_item(e)
        if not marked[e]:
            marked[e] = True
            coin_flips.append((e, is_real))
        if is_real:
            if i in open_real and j in open_items:
                feasible.append(e)
                open_real.remove(i)
        else:
            if i in open_sample and j in open_items:
                sample_ids.append(e)
                open_items.remove(j)
                open_sample.remove(i)
                open_real.discard(i)

    edge_of_buyer: dict[int, int] = {}
    for e in feasible:
        i, _ = graph.buyer_item(e)
        edge_of_buyer[i] = e
    taken: set[int] = set()
    accepted: list[int] = []
    for i in seq:
        e = edge_of_buyer.get(i)
        if e is None:
            continue
        _, j = graph.buyer_item(e)
        if j not in taken:
            accepted.append(e)
            taken.add(j)

    sample_matching = Matching.from_edges(sample_ids, eff.samples)
    record = RunRecord(
        matching=Matching.from_edges(accepted, eff.reals),
        sample_matching=sample_matching,
        feasible=tuple(feasible),
        feasible_weight=matching_weight(feasible, eff.reals),
        prices=PriceTable.from_matching(graph, sample_matching, eff.samples),
    )
    trace = VertexArrivalTrace(
        record=record,
        graph=graph,
        realization=eff,
        safe_matching=Matching.empty(),
        open_buyers_real=frozenset(open_real),
        open_buyers_sample=frozenset(open_sample),
        open_items=frozenset(open_items),
        coin_flips=tuple(coin_flips),
    )
    return _with_safe_matching(trace)


def _with_safe_matching(trace: VertexArrivalTrace) -> VertexArrivalTrace:
    return replace(trace, safe_matching=build_safe_matching(trace))


def coupled_equivalence_check(spec: InstanceSpec, seed: int, order) -> bool:
    """Vertex-model analogue of the edge-arrival coupling check."""
    real = draw_realization(spec, seed)
    order = _check_buyer_order(order, spec.graph.buyers)
    online = run_online_vertex(spec, real, order)
    offline = run_offline_vertex(spec, real, order).record
    return (
        set(online.feasible) == set(offline.feasible)
        and online.sample_matching.edges == offline.sample_matching.edges
        and online.matching.edges == offline.matching.edges
        and online.feasible_weight == offline.feasible_weight
        and online.sample_matching.weight == offline.sample_matching.weight
        and online.matching.weight == offline.matching.weight
    )
