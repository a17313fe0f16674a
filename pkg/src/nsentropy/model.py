"""Contract every target distribution implements for the descent sampler.

A model owns a probability distribution that can be sampled and perturbed
but whose density need not be evaluable. The sampler moves opaque particles
around using the model's proposal kernel; the model reports log acceptance
ratios for the *unconstrained* target and the sampler applies the distance
constraint and the accept/reject coin itself.
"""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

Particle = Any


class Mode(enum.Enum):
    """What a descent estimates: marginal entropy or expected posterior entropy."""

    ENTROPY = "entropy"
    CONDITIONAL_ENTROPY = "conditional-entropy"


class Metric(enum.Enum):
    """Shape of the region ``distance < r``, fixing the volume correction."""

    L2_BALL = "l2-ball"
    INTERVAL_PER_AXIS = "interval-per-axis"
    ONE_SIDED = "one-sided"


@dataclass(frozen=True)
class Geometry:
    """Dimension and metric of the space the distance function acts on."""

    dim: int
    metric: Metric

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"geometry dimension must be >= 1, got {self.dim}")


class UnsupportedModeError(ValueError):
    """Raised when a mode is requested that the model cannot run."""


class Model(ABC):
    """Base class for sampleable target distributions.

    Instances are immutable after construction and safe to share between
    workers; all randomness flows through explicitly passed generators.
    Particles are treated as values: ``explore`` never mutates its input
    and returns a fresh particle.
    """

    #: geometry of the distance function, used for volume corrections
    geometry: Geometry

    #: True when the model can sample the constrained target directly,
    #: letting the sampler bypass MCMC (analytic toy models only)
    perfect_resampling: bool = False

    #: True when the model implements a posterior exploration kernel
    supports_conditional: bool = False

    @abstractmethod
    def draw_reference(self, rng: np.random.Generator) -> Particle:
        """Draw an exact sample from the model's joint distribution."""

    @abstractmethod
    def draw_initial(self, rng: np.random.Generator, mode: Mode,
                     reference: Particle, steps: int) -> Particle:
        """Draw one starting particle for a descent.

        In entropy mode this is an independent draw from the model
        distribution. In conditional-entropy mode the chain starts at the
        parameter values that generated the reference's data (an exact
        posterior sample), keeps the data clamped to the reference's, and
        decorrelates with ``steps`` posterior-kernel moves.
        """

    @abstractmethod
    def explore(self, particle: Particle, rng: np.random.Generator, mode: Mode,
                reference: Particle) -> tuple[Particle, float]:
        """Propose one move and return ``(proposal, log_accept_ratio)``.

        The ratio is for the unconstrained target: the model distribution in
        entropy mode, the posterior given the reference's data in
        conditional-entropy mode. Proposals that leave the support return
        ``-inf``. The caller applies the Metropolis coin.
        """

    @abstractmethod
    def distance(self, particle: Particle, reference: Particle) -> float:
        """Nonnegative distance between the particle and the reference."""

    @abstractmethod
    def summary(self, particle: Particle) -> np.ndarray:
        """Project a particle to a small real vector for logging and plots."""

    def draw_constrained(self, rng: np.random.Generator, mode: Mode,
                         reference: Particle, d_max: float) -> Particle:
        """Exact draw from the target restricted to ``distance < d_max``.

        Only available when ``perfect_resampling`` is True.
        """
        raise NotImplementedError(f"{type(self).__name__} has no analytic constrained sampler")

    def require_mode(self, mode: Mode) -> None:
        if mode is Mode.CONDITIONAL_ENTROPY and not self.supports_conditional:
            raise UnsupportedModeError(
                f"{type(self).__name__} has no posterior kernel; "
                "conditional-entropy mode is unavailable")


def heavy_step(rng: np.random.Generator, scale: float) -> float:
    """Random-walk increment with a heavy-tailed scale mixture.

    The step size is ``scale * 10**(1.5 - 6u)`` for u ~ Uniform[0,1], spanning
    about six orders of magnitude so one kernel serves both wide priors and
    tightly constrained regions.
    """
    return scale * 10.0 ** (1.5 - 6.0 * rng.random()) * rng.standard_normal()
