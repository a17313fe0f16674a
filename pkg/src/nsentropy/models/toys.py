"""Scalar toy targets with closed-form interval probabilities.

These exist as oracles: the probability of landing within any tolerance of a
reference is analytic, so descent statistics (unbiasedness, the Poisson law
of iteration counts, theoretical error bars) can be checked exactly. Both
support direct draws from the constrained target, bypassing MCMC entirely.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr, ndtri

from ..model import Geometry, Metric, Mode, Model, heavy_step
from ..precisional import ONE_SIDED_FAR, one_sided_run_distance

TWO_SIDED = "two-sided"
ONE_SIDED = "one-sided"


class _ScalarToy(Model):
    """Common scaffolding: particles are plain floats."""

    def __init__(self, distance: str = TWO_SIDED, perfect: bool = False):
        if distance not in (TWO_SIDED, ONE_SIDED):
            raise ValueError(f"distance must be {TWO_SIDED!r} or {ONE_SIDED!r}")
        self.distance_kind = distance
        self.perfect_resampling = perfect
        metric = Metric.INTERVAL_PER_AXIS if distance == TWO_SIDED else Metric.ONE_SIDED
        self.geometry = Geometry(1, metric)

    def draw_initial(self, rng, mode, reference, steps):
        self.require_mode(mode)
        return self.draw_reference(rng)

    def distance(self, particle, reference):
        if self.distance_kind == TWO_SIDED:
            return abs(particle - reference)
        return one_sided_run_distance(particle, reference)

    def summary(self, particle):
        return np.array([particle])

    def _constraint_interval(self, reference: float, d_max: float) -> tuple[float, float]:
        """Open interval where distance(x, reference) < d_max."""
        if self.distance_kind == TWO_SIDED:
            return reference - d_max, reference + d_max
        if d_max <= ONE_SIDED_FAR:
            return reference - d_max, reference
        return reference - d_max, reference + (d_max - ONE_SIDED_FAR)


class UniformToy(_ScalarToy):
    """Uniform[0,1] scalar."""

    def draw_reference(self, rng):
        return rng.random()

    def explore(self, particle, rng, mode, reference):
        proposal = particle + heavy_step(rng, 1.0)
        if not 0.0 <= proposal <= 1.0:
            return proposal, -math.inf
        return proposal, 0.0

    def draw_constrained(self, rng, mode, reference, d_max):
        lo, hi = self._constraint_interval(reference, d_max)
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        return lo + rng.random() * (hi - lo)

    def interval_probability(self, reference: float, d: float) -> float:
        """P(distance < d) for a fixed reference; exact."""
        lo, hi = self._constraint_interval(reference, d)
        return max(0.0, min(hi, 1.0) - max(lo, 0.0))


class GaussianToy(_ScalarToy):
    """Standard normal scalar."""

    def draw_reference(self, rng):
        return rng.standard_normal()

    def explore(self, particle, rng, mode, reference):
        proposal = particle + heavy_step(rng, 1.0)
        return proposal, -0.5 * (proposal * proposal - particle * particle)

    def draw_constrained(self, rng, mode, reference, d_max):
        lo, hi = self._constraint_interval(reference, d_max)
        a, b = ndtr(lo), ndtr(hi)
        return float(ndtri(a + rng.random() * (b - a)))

    def interval_probability(self, reference: float, d: float) -> float:
        lo, hi = self._constraint_interval(reference, d)
        return float(ndtr(hi) - ndtr(lo))
