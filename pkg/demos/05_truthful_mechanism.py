"""Posted prices make the assignment truthful; lying never helps a buyer.

Each arriving buyer faces a personalized take-it-or-leave-it price per free
item (the larger of her threshold and the item's), and receives the item that
maximizes her reported utility.  Because the prices ignore her report, the
report only influences which affordable item she gets; we hammer one buyer
with hundreds of random misreports to confirm none of them beats honesty.
"""

import numpy as np

from prophet_matching import (
    DistSpec,
    complete_bipartite,
    draw_realization,
    misreport_audit,
    run_truthful,
    sample_misreport,
)

spec = complete_bipartite(3, 3, DistSpec.uniform(0.0, 10.0))
real = draw_realization(spec, seed=21)
order = list(spec.graph.buyers)

outcome = run_truthful(spec, real, order)
print("truthful run:")
for i in spec.graph.buyers:
    if i in outcome.charged:
        edge = next(e for e in outcome.matching.edges if spec.graph.buyer_item(e)[0] == i)
        j = spec.graph.buyer_item(edge)[1]
        print(
            f"  buyer {i}: item {j} at price {outcome.charged[i]:.3f}, "
            f"value {real.reals[edge].value:.3f}, utility {outcome.utilities[i]:.3f}"
        )
    else:
        print(f"  buyer {i}: left unmatched (utility 0)")

buyer = order[0]
print(f"\nauditing buyer {buyer} with 500 random misreports...")
honest = misreport_audit(spec, real, order, buyer, trials=500, seed=5)
print(f"truthful reporting optimal: {honest}")

rng = np.random.default_rng(6)
true_values = {e: real.reals[e].value for e in spec.graph.incident[buyer]}
print("\na few sampled deviations and what they earn:")
base = outcome.utilities.get(buyer, 0.0)
for _ in range(5):
    deviant = sample_misreport(rng, true_values)
    got = run_truthful(spec, real, order, reports={buyer: deviant})
    print(
        f"  report {({e: round(v, 2) for e, v in deviant.items()})} "
        f"-> utility {got.utilities.get(buyer, 0.0):.3f} (honest: {base:.3f})"
    )
