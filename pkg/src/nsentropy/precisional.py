"""Entropies of precisional questions: "what is x, to within a tolerance?".

A precisional question is resolved by any statement pinning x into one of a
sliding family of overlapping windows, so its entropy is built from window
probabilities rather than point densities. This module gives the discrete
and continuous formulas, plus the one-sided distance adapter that lets the
descent sampler estimate the continuous version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr

from .estimator import DepthEstimate, EntropyEstimate, aggregate
from .model import Geometry, Metric
from .sampler import DepthRecord

#: offset added to the distance of points on the wrong side of the reference.
#: Keeps the distance distribution continuous (an infinite sentinel would put
#: an atom at the top of the quasi-likelihood, which biases the discard
#: counts); any tolerance below this constant reads one-sided.
ONE_SIDED_FAR = 1.0e6


class QuadratureError(RuntimeError):
    """Adaptive integration failed to reach the requested tolerance."""


@dataclass(frozen=True)
class DiscretePmf:
    """Finite distribution over an ordered support."""

    values: tuple
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.probabilities):
            raise ValueError("values and probabilities differ in length")
        if len(self.values) == 0:
            raise ValueError("empty pmf")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be nonnegative")
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")


@dataclass(frozen=True)
class Cdf1D:
    """A one-dimensional distribution given by its CDF and density."""

    cdf: Callable[[float], float]
    pdf: Callable[[float], float]
    lower: float
    upper: float

    def validate(self, probes: int = 7, fd_tol: float = 1e-4) -> None:
        """Spot-check the CDF/PDF pair: bounds, monotonicity, consistency."""
        if not abs(self.cdf(self.lower) - 0.0) <= 1e-9:
            raise ValueError("cdf(lower) must be 0")
        if not abs(self.cdf(self.upper) - 1.0) <= 1e-9:
            raise ValueError("cdf(upper) must be 1")
        lo = self.lower if math.isfinite(self.lower) else -10.0
        hi = self.upper if math.isfinite(self.upper) else 10.0
        xs = np.linspace(lo + 1e-6 * (hi - lo), hi - 1e-6 * (hi - lo), probes)
        h = 1e-6 * (hi - lo)
        last = -1e-15
        for x in xs:
            fx = self.cdf(x)
            if fx < last - 1e-12:
                raise ValueError("cdf is not nondecreasing")
            last = fx
            deriv = (self.cdf(x + h) - self.cdf(x - h)) / (2 * h)
            if abs(deriv - self.pdf(x)) > fd_tol * (1.0 + abs(deriv)):
                raise ValueError(f"pdf inconsistent with cdf slope at x={x}")


def uniform_cdf(a: float = 0.0, b: float = 1.0) -> Cdf1D:
    width = b - a
    return Cdf1D(
        cdf=lambda x: min(1.0, max(0.0, (x - a) / width)),
        pdf=lambda x: 1.0 / width if a <= x <= b else 0.0,
        lower=a, upper=b)


def normal_cdf(mean: float = 0.0, sd: float = 1.0) -> Cdf1D:
    return Cdf1D(
        cdf=lambda x: float(ndtr((x - mean) / sd)),
        pdf=lambda x: math.exp(-0.5 * ((x - mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi)),
        lower=-math.inf, upper=math.inf)


def _h(p: float) -> float:
    """-p log p with the 0 log 0 := 0 convention."""
    if p <= 0.0:
        return 0.0
    return -p * math.log(p)


def precisional_entropy_discrete(pmf: DiscretePmf, window_width: int) -> float:
    """Entropy of "which width-w window contains x?" over an ordered support.

    Sums -P log P over the sliding windows, subtracting the overlap term for
    each window after the first so shared statements are not double counted.
    With width 1 this is the ordinary Shannon entropy.
    """
    m = len(pmf.probabilities)
    if not 1 <= window_width <= m:
        raise ValueError(f"window width must be in [1, {m}], got {window_width}")
    probs = pmf.probabilities
    total = _h(math.fsum(probs[0:window_width]))
    for start in range(1, m - window_width + 1):
        window = math.fsum(probs[start:start + window_width])
        overlap = math.fsum(probs[start:start + window_width - 1])
        total += _h(window) - _h(overlap)
    return total


def precisional_entropy_continuous(cdf: Cdf1D, r: float,
                                   abs_tol: float = 1e-8) -> float:
    """Entropy of "what is x, to within a left-interval of width r?".

    Integrates -(1 + log[F(x) - F(x-r)]) f(x) over the support by adaptive
    quadrature, and cross-checks against the right-interval variant, which
    must agree. Points where the interval mass underflows contribute zero.
    """
    if r <= 0:
        raise ValueError(f"tolerance must be > 0, got {r!r}")

    def integrand_left(x: float) -> float:
        p = cdf.cdf(x) - cdf.cdf(x - r)
        if p < 1e-300:
            return 0.0
        return -(1.0 + math.log(p)) * cdf.pdf(x)

    def integrand_right(x: float) -> float:
        p = cdf.cdf(x + r) - cdf.cdf(x)
        if p < 1e-300:
            return 0.0
        return -(1.0 + math.log(p)) * cdf.pdf(x)

    h = _integrate(integrand_left, cdf, breaks=[cdf.lower + r], abs_tol=abs_tol)
    h_alt = _integrate(integrand_right, cdf, breaks=[cdf.upper - r], abs_tol=abs_tol)
    if abs(h - h_alt) > max(100 * abs_tol, 1e-6):
        raise QuadratureError(
            f"left/right interval entropies disagree: {h!r} vs {h_alt!r}")
    return h


def _integrate(f: Callable[[float], float], cdf: Cdf1D, breaks: Sequence[float],
               abs_tol: float) -> float:
    points = [b for b in breaks if math.isfinite(b) and cdf.lower < b < cdf.upper]
    finite = math.isfinite(cdf.lower) and math.isfinite(cdf.upper)
    value, err = quad(f, cdf.lower, cdf.upper,
                      points=points if (points and finite) else None,
                      epsabs=abs_tol, limit=200)
    if err > max(100 * abs_tol, 1e-6):
        raise QuadratureError(f"quadrature error {err!r} above tolerance {abs_tol!r}")
    return value


def one_sided_distance(x: float, x_ref: float) -> float:
    """Distance that can only fall below a finite tolerance when x <= x_ref."""
    gap = x_ref - x
    return gap if gap >= 0.0 else math.inf


def one_sided_run_distance(x: float, x_ref: float) -> float:
    """One-sided distance with a continuous tie-break for descent runs.

    Points above the reference land beyond ``ONE_SIDED_FAR`` instead of at
    infinity, ordered by how far above they sit, so discard counts keep their
    shrinkage statistics exact. Below any tolerance under ``ONE_SIDED_FAR``
    the two variants agree.
    """
    gap = x_ref - x
    return gap if gap >= 0.0 else ONE_SIDED_FAR - gap


def precisional_entropy_via_sampler(records: Sequence[DepthRecord],
                                    tol: float) -> EntropyEstimate:
    """Precisional entropy from one-sided descent records: mean depth minus 1.

    One-sided depths estimate the expected negative log-mass of the interval
    (x_ref - tol, x_ref]; the precisional entropy subtracts the constant 1
    from that expectation, so no volume term appears. The -1 is reported in
    the log-volume slot to keep the estimate's arithmetic self-describing.
    """
    depth: DepthEstimate = aggregate(records, tol)
    return EntropyEstimate(
        value=depth.mean - 1.0,
        std_error=depth.std_error,
        log_volume=-1.0,
        geometry=Geometry(1, Metric.ONE_SIDED),
    )
