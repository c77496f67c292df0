from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from prophet_matching.core import InputError
from prophet_matching.distributions import DistSpec, InstanceSpec, draw_realization
from prophet_matching.instances import complete_graph, path_graph

from conftest import general_graph

# KS critical value at alpha=0.01 for n=1e5 draws: 1.628 / sqrt(n)
KS_THRESHOLD = 0.0052
N_KS = 100_000


def _draw_many(dist: DistSpec, n: int, seed: int = 7) -> np.ndarray:
    """n independent draws of a single-edge instance's real value."""
    spec = path_graph(2, dist)
    return np.array(
        [draw_realization(spec, seed * n + k).reals[0].value for k in range(n)]
    )


class TestDistSpecValidation:
    @pytest.mark.parametrize(
        "family,params",
        [
            ("uniform", (2.0, 1.0)),
            ("uniform", (-1.0, 1.0)),
            ("exponential", (0.0,)),
            ("exponential", (-2.0,)),
            ("pareto", (0.0, 1.0)),
            ("pareto", (1.0, -1.0)),
            ("bernoulli_scaled", (1.5, 1.0)),
            ("bernoulli_scaled", (0.5, -1.0)),
            ("point_mass", (-0.5,)),
            ("uniform", (1.0,)),
            ("gamma", (1.0,)),
            ("exponential", (math.inf,)),
        ],
    )
    def test_bad_params_rejected(self, family, params):
        with pytest.raises(InputError):
            DistSpec(family, params)

    def test_instance_needs_one_dist_per_edge(self):
        g = general_graph(3, [(0, 1), (1, 2)])
        with pytest.raises(InputError):
            InstanceSpec(graph=g, dists=(DistSpec.point_mass(1.0),))


class TestDrawRealization:
    def test_point_mass_degenerate(self):
        spec = path_graph(2, DistSpec.point_mass(7.0))
        real = draw_realization(spec, 123)
        assert real.samples[0].value == 7.0
        assert real.reals[0].value == 7.0
        assert real.samples[0].tiebreak != real.reals[0].tiebreak

    def test_deterministic_bit_for_bit(self):
        spec = complete_graph(5, DistSpec.uniform(0.0, 3.0))
        assert draw_realization(spec, 99) == draw_realization(spec, 99)
        assert draw_realization(spec, 99) != draw_realization(spec, 100)

    def test_edge_list_order_does_not_change_draws(self):
        dist = DistSpec.exponential(1.3)
        g1 = general_graph(4, [(0, 1), (1, 2), (2, 3)])
        g2 = general_graph(4, [(2, 3), (0, 1), (1, 2)])
        r1 = draw_realization(InstanceSpec(g1, (dist,) * 3), 5)
        r2 = draw_realization(InstanceSpec(g2, (dist,) * 3), 5)
        by_pair_1 = {g1.edges[e]: (r1.samples[e], r1.reals[e]) for e in range(3)}
        by_pair_2 = {g2.edges[e]: (r2.samples[e], r2.reals[e]) for e in range(3)}
        assert by_pair_1 == by_pair_2

    def test_keys_unique_across_draws(self):
        spec = complete_graph(8, DistSpec.uniform(0.0, 1.0))
        real = draw_realization(spec, 1)
        keys = [d.tiebreak for d in real.samples + real.reals]
        assert len(set(keys)) == 2 * spec.graph.num_edges

    def test_negative_seed_rejected(self):
        spec = path_graph(2, DistSpec.point_mass(1.0))
        with pytest.raises(InputError):
            draw_realization(spec, -1)


class TestMarginals:
    def test_uniform_mean(self):
        xs = _draw_many(DistSpec.uniform(0.0, 1.0), N_KS)
        assert abs(xs.mean() - 0.5) < 0.01

    @pytest.mark.parametrize(
        "dist,frozen",
        [
            (DistSpec.uniform(0.0, 1.0), stats.uniform(0, 1)),
            (DistSpec.exponential(1.5), stats.expon(scale=1 / 1.5)),
            (DistSpec.pareto(1.0, 3.0), stats.pareto(b=3.0, scale=1.0)),
        ],
    )
    def test_continuous_families_match_analytic_cdf(self, dist, frozen):
        xs = _draw_many(dist, N_KS)
        d_stat = stats.kstest(xs, frozen.cdf).statistic
        assert d_stat < KS_THRESHOLD

    def test_quantile_matches_cdf(self):
        for dist in (
            DistSpec.uniform(0.5, 2.0),
            DistSpec.exponential(0.7),
            DistSpec.pareto(2.0, 2.5),
        ):
            for u in (0.01, 0.25, 0.5, 0.9, 0.999):
                x = dist.quantile(u)
                assert math.isclose(dist.cdf(x), u, rel_tol=1e-9)

    def test_bernoulli_support_and_rate(self):
        p, v, n = 0.3, 2.5, 100_000
        xs = _draw_many(DistSpec.bernoulli_scaled(p, v), n)
        assert set(np.unique(xs)) <= {0.0, v}
        rate = (xs == v).mean()
        assert abs(rate - p) < 3 * math.sqrt(p * (1 - p) / n)


class TestIndependence:
    def test_sample_real_and_cross_edge_correlations(self):
        n = 10_000
        spec = path_graph(3, DistSpec.uniform(0.0, 1.0))
        s0 = np.empty(n)
        r0 = np.empty(n)
        r1 = np.empty(n)
        for k in range(n):
            real = draw_realization(spec, k)
            s0[k], r0[k], r1[k] = real.samples[0].value, real.reals[0].value, real.reals[1].value
        bound = 3.0 / math.sqrt(n)
        assert abs(np.corrcoef(s0, r0)[0, 1]) < bound  # two copies of one edge
        assert abs(np.corrcoef(r0, r1)[0, 1]) < bound  # across edges
