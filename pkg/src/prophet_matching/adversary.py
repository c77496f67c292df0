"""Arrival-order strategies, from fixed permutations to adaptive adversaries.

Adaptive strategies know the full realization (all sample and real values)
and observe the algorithm's public state after every step; they may release
any element that has not arrived yet.  They never see coin futures or any
internal randomness.  A strategy instance is stateful and drives exactly one
run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AlgorithmView, Graph, InputError, Realization

ADAPTIVE_POLICIES = ("block-best", "starve-items")


@dataclass(frozen=True)
class OrderStrategy:
    """Declarative description of an arrival order.

    kinds: fixed (explicit permutation), random (seeded shuffle),
    dec / inc (by real value, decreasing / increasing), adaptive (named
    policy reacting to the algorithm's public state).
    """

    kind: str
    order: tuple[int, ...] | None = None
    seed: int | None = None
    policy: str | None = None

    def __post_init__(self):
        if self.kind not in ("fixed", "random", "dec", "inc", "adaptive"):
            raise InputError(f"unknown order kind {self.kind!r}")
        if self.kind == "fixed" and self.order is None:
            raise InputError("fixed order needs an explicit permutation")
        if self.kind == "adaptive" and self.policy not in ADAPTIVE_POLICIES:
            raise InputError(
                f"unknown adaptive policy {self.policy!r}; "
                f"available: {', '.join(ADAPTIVE_POLICIES)}"
            )


def parse_order_spec(text: str) -> OrderStrategy:
    """Parse CLI/config order strings.

    Accepted forms: ``fixed:2,0,1`` | ``random`` | ``inc`` | ``dec`` |
    ``adaptive:block-best`` | ``adaptive:starve-items``.
    """
    if text.startswith("fixed:"):
        try:
            ids = tuple(int(x) for x in text[len("fixed:"):].split(","))
        except ValueError:
            raise InputError(f"bad fixed order {text!r}") from None
        return OrderStrategy(kind="fixed", order=ids)
    if text.startswith("adaptive:"):
        return OrderStrategy(kind="adaptive", policy=text[len("adaptive:"):])
    if text in ("random", "inc", "dec"):
        return OrderStrategy(kind=text)
    raise InputError(f"unrecognized order spec {text!r}")


def _elements_for_model(graph: Graph, model: str) -> list[int]:
    if model == "edge":
        return list(range(graph.num_edges))
    if model in ("vertex", "truthful"):
        return list(graph.buyers)
    raise InputError(f"unknown model {model!r}")


def static_order(
    strategy: OrderStrategy, graph: Graph, real: Realization, model: str, seed: int = 0
) -> list[int]:
    """Materialize a non-adaptive strategy into an explicit arrival order.

    For edge arrivals the inc/dec kinds sort edges by real value; for buyer
    arrivals they sort buyers by their largest incident real value.  The
    random kind uses the strategy's own seed when set, else ``seed``.
    """
    if strategy.kind == "adaptive":
        raise InputError("adaptive strategies cannot be materialized statically")
    elements = _elements_for_model(graph, model)
    if strategy.kind == "fixed":
        order = list(strategy.order)
        if sorted(order) != sorted(elements):
            raise InputError("fixed order is not a permutation of the arriving elements")
        return order
    if strategy.kind == "random":
        rng = np.random.default_rng(
            np.random.SeedSequence([strategy.seed if strategy.seed is not None else seed])
        )
        return [elements[k] for k in rng.permutation(len(elements))]
    # value-sorted orders; rank by the same total order used everywhere
    if model == "edge":
        keyed = sorted(elements, key=lambda e: real.reals[e].sort_key())
    else:
        def buyer_key(i):
            best = min(
                (real.reals[e].sort_key() for e in graph.incident[i]),
                default=(0.0, 0),
            )
            return best

        keyed = sorted(elements, key=buyer_key)
    return keyed if strategy.kind == "dec" else keyed[::-1]


class FixedController:
    """Feeds a pre-computed order; never inspects the algorithm state."""

    needs_view = False

    def __init__(self, order):
        self._order = list(order)
        self._pos = 0
        self.history: list[int] = []

    def next_arrival(self, view: AlgorithmView | None) -> int:
        e = self._order[self._pos]
        self._pos += 1
        self.history.append(e)
        return e


class BlockBestController:
    """Edge-model adversary: release the feasible edge that blocks the most.

    At each step, among unarrived price-feasible edges that the algorithm
    would accept right now, it releases the one whose acceptance removes the
    largest total value of other currently acceptable feasible edges.  When
    nothing is acceptable it releases the smallest remaining value first.
    This is a stress heuristic, not a worst-case-optimal adversary.
    """

    needs_view = True

    def __init__(self, graph: Graph, real: Realization):
        self._graph = graph
        self._real = real
        self._remaining = set(range(graph.num_edges))
        self.history: list[int] = []

    def next_arrival(self, view: AlgorithmView) -> int:
        graph, real = self._graph, self._real
        prices = view.prices
        feasible = [
            e
            for e in self._remaining
            if prices.beaten_by(real.reals[e], graph.edges[e][0])
            and prices.beaten_by(real.reals[e], graph.edges[e][1])
        ]
        acceptable = [
            e
            for e in feasible
            if graph.edges[e][0] not in view.matched_vertices
            and graph.edges[e][1] not in view.matched_vertices
        ]
        if acceptable:
            acc = set(acceptable)

            def blocked_weight(e: int) -> float:
                u, v = graph.edges[e]
                total = 0.0
                for e2 in graph.incident[u] + graph.incident[v]:
                    if e2 != e and e2 in acc:
                        total += real.reals[e2].value
                return total

            choice = max(acceptable, key=lambda e: (blocked_weight(e), -e))
        else:
            choice = min(self._remaining, key=lambda e: (real.reals[e].value, e))
        self._remaining.remove(choice)
        self.history.append(choice)
        return choice


class StarveItemsController:
    """Buyer-model adversary: release buyers whose best item is most contested.

    For each unarrived buyer, find the item of her best currently-acceptable
    feasible edge; release a buyer whose target item is wanted by the most
    other unarrived buyers.  Buyers with no acceptable edge are released last.
    """

    needs_view = True

    def __init__(self, graph: Graph, real: Realization):
        self._graph = graph
        self._real = real
        self._remaining = set(graph.buyers)
        self.history: list[int] = []

    def _best_item(self, buyer: int, view: AlgorithmView) -> int | None:
        graph, real = self._graph, self._real
        best = None
        for e in graph.incident[buyer]:
            _, j = graph.buyer_item(e)
            if j in view.matched_vertices:
                continue
            r = real.reals[e]
            if view.prices.beaten_by(r, buyer) and view.prices.beaten_by(r, j):
                if best is None or r.sort_key() < real.reals[best].sort_key():
                    best = e
        if best is None:
            return None
        return graph.buyer_item(best)[1]

    def next_arrival(self, view: AlgorithmView) -> int:
        targets = {i: self._best_item(i, view) for i in self._remaining}
        contest: dict[int, int] = {}
        for j in targets.values():
            if j is not None:
                contest[j] = contest.get(j, 0) + 1
        with_target = [i for i, j in targets.items() if j is not None]
        if with_target:
            choice = max(with_target, key=lambda i: (contest[targets[i]], -i))
        else:
            choice = min(self._remaining)
        self._remaining.remove(choice)
        self.history.append(choice)
        return choice


def make_controller(
    strategy: OrderStrategy, graph: Graph, real: Realization, model: str, seed: int = 0
):
    """Build the stateful controller for one run of the given model."""
    if strategy.kind != "adaptive":
        return FixedController(static_order(strategy, graph, real, model, seed))
    if strategy.policy == "block-best":
        if model != "edge":
            raise InputError("block-best is an edge-arrival policy")
        return BlockBestController(graph, real)
    if model == "edge":
        raise InputError("starve-items is a buyer-arrival policy")
    return StarveItemsController(graph, real)
