"""Per-edge value distributions and seeded sampling of realizations.

Sampling is counter-based: every (edge, copy) pair gets its own sub-stream
derived by hashing ``(seed, u, v, copy)``, so draws do not depend on the order
edges are listed in an instance file and different seeds give independent
realizations.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

from .core import DrawnValue, Graph, InputError, Realization

FAMILIES = ("point_mass", "uniform", "exponential", "pareto", "bernoulli_scaled")

_PARAM_COUNT = {
    "point_mass": 1,
    "uniform": 2,
    "exponential": 1,
    "pareto": 2,
    "bernoulli_scaled": 2,
}


@dataclass(frozen=True)
class DistSpec:
    """A non-negative value distribution, one of five supported families.

    Parameter layout: point_mass(v); uniform(lo, hi); exponential(rate);
    pareto(scale, shape); bernoulli_scaled(p, v) meaning value v with
    probability p, else 0.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown distribution family {self.family!r}")
        if len(self.params) != _PARAM_COUNT[self.family]:
            raise InputError(
                f"{self.family} takes {_PARAM_COUNT[self.family]} parameter(s), "
                f"got {len(self.params)}"
            )
        for p in self.params:
            if not math.isfinite(p):
                raise InputError(f"{self.family} parameter {p} is not finite")
        f, p = self.family, self.params
        if f == "point_mass" and p[0] < 0:
            raise InputError("point_mass value must be non-negative")
        if f == "uniform":
            if p[0] < 0 or p[0] > p[1]:
                raise InputError("uniform requires 0 <= lo <= hi")
        if f == "exponential" and p[0] <= 0:
            raise InputError("exponential rate must be positive")
        if f == "pareto" and (p[0] <= 0 or p[1] <= 0):
            raise InputError("pareto requires scale > 0 and shape > 0")
        if f == "bernoulli_scaled":
            if not 0 <= p[0] <= 1:
                raise InputError("bernoulli_scaled probability must be in [0, 1]")
            if p[1] < 0:
                raise InputError("bernoulli_scaled value must be non-negative")

    # convenience constructors
    @classmethod
    def point_mass(cls, v: float) -> "DistSpec":
        return cls("point_mass", (float(v),))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DistSpec":
        return cls("uniform", (float(lo), float(hi)))

    @classmethod
    def exponential(cls, rate: float) -> "DistSpec":
        return cls("exponential", (float(rate),))

    @classmethod
    def pareto(cls, scale: float, shape: float) -> "DistSpec":
        return cls("pareto", (float(scale), float(shape)))

    @classmethod
    def bernoulli_scaled(cls, p: float, v: float) -> "DistSpec":
        return cls("bernoulli_scaled", (float(p), float(v)))

    def quantile(self, u: float) -> float:
        """Inverse CDF at u in [0, 1); all five families invert analytically."""
        f, p = self.family, self.params
        if f == "point_mass":
            return p[0]
        if f == "uniform":
            return p[0] + u * (p[1] - p[0])
        if f == "exponential":
            return -math.log1p(-u) / p[0]
        if f == "pareto":
            return p[0] * (1.0 - u) ** (-1.0 / p[1])
        return p[1] if u < p[0] else 0.0

    def cdf(self, x: float) -> float:
        """Analytic CDF, used by the distribution-correctness checks."""
        f, p = self.family, self.params
        if f == "point_mass":
            return 1.0 if x >= p[0] else 0.0
        if f == "uniform":
            lo, hi = p
            if x < lo:
                return 0.0
            if x >= hi:
                return 1.0
            return (x - lo) / (hi - lo)
        if f == "exponential":
            return 0.0 if x < 0 else 1.0 - math.exp(-p[0] * x)
        if f == "pareto":
            return 0.0 if x < p[0] else 1.0 - (p[0] / x) ** p[1]
        prob, v = p
        if x < 0:
            return 0.0
        if x < v:
            return 1.0 - prob
        return 1.0


@dataclass(frozen=True)
class InstanceSpec:
    """A graph together with one value distribution per edge."""

    graph: Graph
    dists: tuple[DistSpec, ...]

    def __post_init__(self):
        if len(self.dists) != self.graph.num_edges:
            raise InputError(
                f"need one distribution per edge: graph has {self.graph.num_edges} "
                f"edges, got {len(self.dists)} distributions"
            )


_MASK64 = (1 << 64) - 1


def _edge_words(seed: int, u: int, v: int, salt: int = 0) -> tuple[int, int, int, int]:
    """Four independent 64-bit words for one edge, from a fixed hash split."""
    lo, hi = (u, v) if u < v else (v, u)
    h = hashlib.sha256(
        struct.pack("<QQQQ", seed & _MASK64, lo, hi, salt & _MASK64)
    ).digest()
    return struct.unpack("<QQQQ", h)


def _to_unit(word: int) -> float:
    """Map a 64-bit word to a uniform double in [0, 1) with 53-bit precision."""
    return (word >> 11) * (2.0 ** -53)


def draw_realization(spec: InstanceSpec, seed: int) -> Realization:
    """Draw a sample and a real value for every edge, deterministically.

    Each edge contributes two independent draws from its own distribution,
    each tagged with a fresh 64-bit tie-break key.  In the astronomically
    unlikely event of a key collision among the 2m draws, colliding draws are
    re-keyed from a salted stream until all keys are unique, keeping the
    result a pure function of (spec, seed).
    """
    if seed < 0:
        raise InputError("seed must be a non-negative integer")
    graph = spec.graph
    samples: list[DrawnValue] = []
    reals: list[DrawnValue] = []
    for eid, (u, v) in enumerate(graph.edges):
        ks, vs, kr, vr = _edge_words(seed, u, v)
        dist = spec.dists[eid]
        samples.append(DrawnValue(dist.quantile(_to_unit(vs)), ks))
        reals.append(DrawnValue(dist.quantile(_to_unit(vr)), kr))

    # enforce global key uniqueness across all 2m draws
    seen: set[int] = set()
    for draws in (samples, reals):
        for idx, d in enumerate(draws):
            key, salt = d.tiebreak, 0
            while key in seen:
                salt += 1
                u, v = graph.edges[idx]
                key = _edge_words(seed, u, v, salt)[0 if draws is samples else 2]
            seen.add(key)
            if key != d.tiebreak:
                draws[idx] = DrawnValue(d.value, key)
    return Realization(samples=tuple(samples), reals=tuple(reals))
