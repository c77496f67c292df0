"""Incentive-compatible posted-price assignment for bipartite vertex arrivals.

Prices are the same greedy sample prices used everywhere else.  When a buyer
arrives she sees, for every still-free item, a take-it-or-leave-it price of
max(her own threshold, the item threshold); she gets a utility-maximizing
item among those her reported values can afford.  Prices never depend on her
report, so misreporting can only lose utility: it may forfeit an affordable
item or buy one she values less.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import (
    AlgorithmView,
    ArrivalEvent,
    CapabilityError,
    ContractViolation,
    DrawnValue,
    Graph,
    InputError,
    Matching,
    PriceTable,
    Realization,
    RunRecord,
    beats,
)
from .distributions import InstanceSpec
from .oracle import greedy_matching


@dataclass(frozen=True)
class MechanismOutcome:
    """Result of one mechanism run: assignment, payments, true utilities."""

    record: RunRecord
    graph: Graph
    charged: Mapping[int, float]
    utilities: Mapping[int, float]

    @property
    def matching(self) -> Matching:
        return self.record.matching


def _require_bipartite(graph):
    if graph.kind != "bipartite":
        raise CapabilityError("the mechanism requires a bipartite graph")


def run_truthful(
    spec: InstanceSpec,
    real: Realization,
    order,
    reports: Mapping[int, Mapping[int, float]] | None = None,
) -> MechanismOutcome:
    """Run the posted-price mechanism.

    ``reports`` optionally overrides, per buyer, the values she claims for her
    incident edges (edge id -> reported value); buyers absent from the map
    report truthfully.  Item selection uses reported values; payments and the
    returned utilities always use true values.  A reported value inherits the
    true draw's tie-break key, so reporting the truth is literally identical
    to not reporting at all.
    """
    graph = spec.graph
    _require_bipartite(graph)
    if real.num_edges != graph.num_edges:
        raise InputError("realization does not match the instance graph")
    reports = reports or {}
    for i, rep in reports.items():
        if i not in set(graph.buyers):
            raise InputError(f"report for unknown buyer {i}")
        for e in rep:
            if not 0 <= e < graph.num_edges or i not in graph.edges[e]:
                raise InputError(f"buyer {i} reported a value for non-incident edge {e}")
            if rep[e] < 0:
                raise InputError("reported values must be non-negative")

    sample_matching = greedy_matching(graph, real.samples)
    prices = PriceTable.from_matching(graph, sample_matching, real.samples)

    controller = order if hasattr(order, "next_arrival") else None
    if controller is None:
        seq = list(order)
        if sorted(seq) != sorted(graph.buyers):
            raise InputError("order must be a permutation of the buyer vertices")
    needs_view = controller is not None and getattr(controller, "needs_view", True)
    buyer_set = set(graph.buyers)

    taken: set[int] = set()
    matched_vertices: set[int] = set()
    accepted: list[int] = []
    charged: dict[int, float] = {}
    utilities: dict[int, float] = {}
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
                    feasible=tuple(accepted),
                    arrived=frozenset(arrived),
                )
            i = controller.next_arrival(view)
            if i not in buyer_set:
                raise ContractViolation(f"controller produced invalid buyer id {i!r}")
            if i in arrived:
                raise ContractViolation(f"controller released buyer {i} twice")
        arrived.add(i)

        rep = reports.get(i, {})
        best_edge = None
        best_surplus = None
        best_claim = None
        for e in graph.incident[i]:
            _, j = graph.buyer_item(e)
            if j in taken:
                continue
            claim = DrawnValue(float(rep.get(e, real.reals[e].value)), real.reals[e].tiebreak)
            if not (prices.beaten_by(claim, i) and prices.beaten_by(claim, j)):
                continue
            offered = max(prices.price(i), prices.price(j))
            surplus = claim.value - offered
            if (
                best_edge is None
                or surplus > best_surplus
                or (surplus == best_surplus and beats(claim, best_claim))
            ):
                best_edge, best_surplus, best_claim = e, surplus, claim
        if best_edge is None:
            utilities[i] = 0.0
            events.append(ArrivalEvent(step=step, element=i, outcome="no_feasible_edge"))
            continue
        _, j = graph.buyer_item(best_edge)
        pay = max(prices.price(i), prices.price(j))
        accepted.append(best_edge)
        taken.add(j)
        matched_vertices.update((i, j))
        charged[i] = pay
        utilities[i] = real.reals[best_edge].value - pay
        events.append(
            ArrivalEvent(
                step=step,
                element=i,
                outcome="accepted",
                edge=best_edge,
                value=real.reals[best_edge].value,
                threshold=pay,
            )
        )

    matching = Matching.from_edges(accepted, real.reals)
    record = RunRecord(
        matching=matching,
        sample_matching=sample_matching,
        feasible=tuple(accepted),
        feasible_weight=matching.weight,
        prices=prices,
        events=tuple(events),
    )
    return MechanismOutcome(record=record, graph=graph, charged=charged, utilities=utilities)


def sample_misreport(
    rng: np.random.Generator, true_values: Mapping[int, float]
) -> dict[int, float]:
    """One random deviation from truthful reporting.

    Mixes the failure modes worth probing: multiplicative noise, zeroing out
    edges (walking away), large inflation (overbidding past thresholds), and
    permuting values across the buyer's edges.
    """
    edges = sorted(true_values)
    mode = rng.integers(0, 4)
    out = dict(true_values)
    if mode == 0:
        for e in edges:
            out[e] = float(true_values[e] * rng.uniform(0.0, 2.5))
    elif mode == 1:
        for e in edges:
            if rng.random() < 0.5:
                out[e] = 0.0
    elif mode == 2:
        for e in edges:
            if rng.random() < 0.5:
                out[e] = float(true_values[e] * rng.uniform(2.0, 100.0) + 1.0)
    else:
        perm = rng.permutation(len(edges))
        vals = [true_values[e] for e in edges]
        out = {e: vals[perm[k]] for k, e in enumerate(edges)}
    return out


def misreport_audit(
    spec: InstanceSpec,
    real: Realization,
    order,
    buyer: int,
    trials: int,
    seed: int = 0,
) -> bool:
    """Can ``buyer`` ever gain by lying, all other buyers held truthful?

    Samples ``trials`` random misreports for the buyer and compares the
    resulting true utility against the truthful run's.  Returns True iff the
    truthful utility is at least as large in every trial.
    """
    truthful = run_truthful(spec, real, order)
    base = truthful.utilities.get(buyer, 0.0)
    true_values = {e: real.reals[e].value for e in spec.graph.incident[buyer]}
    rng = np.random.default_rng(np.random.SeedSequence([seed, buyer]))
    for _ in range(trials):
        deviant = sample_misreport(rng, true_values)
        outcome = run_truthful(spec, real, order, reports={buyer: deviant})
        if outcome.utilities.get(buyer, 0.0) > base:
            return False
    return True


def maximality_check(outcome: MechanismOutcome, feasible) -> bool:
    """Is the mechanism's matching maximal inside the price-feasible edge set?

    ``feasible`` is the price-feasible set of the coupled offline edge-arrival
    construction on the same realization (its computation ignores arrival
    order entirely).  True iff no feasible edge could be added to the
    mechanism's matching without sharing a vertex.
    """
    graph = outcome.graph
    chosen = outcome.record.matching.edges
    covered: set[int] = set()
    for e in chosen:
        covered.update(graph.edges[e])
    for e in feasible:
        if e in chosen:
            continue
        u, v = graph.edges[e]
        if u not in covered and v not in covered:
            return False
    return True
