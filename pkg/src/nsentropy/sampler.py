"""One nested-sampling descent toward a reference particle.

Each descent evolves N particles drawn from the target toward the reference,
discarding the farthest particle every iteration and replacing it with a
draw from the target constrained to lie strictly closer than the discarded
distance. The number of discards divided by N is an unbiased estimate of
minus the log-probability of the region within the run tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import Mode, Model, Particle

#: most initial-set draws attempted before giving up (one-sided distances
#: can leave every starting particle at infinite distance)
INITIAL_DRAW_CAP = 1_000_000


class Termination(Enum):
    TOLERANCE_REACHED = "tolerance-reached"
    DEPTH_CAP_HIT = "depth-cap-hit"


class InsufficientResolutionError(ValueError):
    """Requested tolerance is finer than the tolerance the run descended to."""


@dataclass
class RunConfig:
    """Numerical settings for a batch of descents.

    A record file header serializes this verbatim, so a run is fully
    reproducible from its header.
    """

    model_name: str = ""
    mode: Mode = Mode.ENTROPY
    n_particles: int = 10
    mcmc_steps: int = 1000
    tolerance: float = 1e-3
    reps: int = 1000
    master_seed: int = 0
    threads: int = 1
    depth_cap: float = 200.0
    distance: str = "two-sided"
    output_path: str = "output.txt"

    def validate(self) -> None:
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        if self.mcmc_steps < 1:
            raise ValueError("mcmc_steps must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.depth_cap <= 0:
            raise ValueError("depth_cap must be > 0")
        if self.master_seed < 0:
            raise ValueError("master_seed must be a nonnegative integer")


@dataclass
class DepthRecord:
    """Trace of one descent: the discarded distances plus run metadata.

    ``discarded`` is nonincreasing and holds the greatest particle distance
    at each iteration, at full precision, so the depth can be re-estimated
    later at any tolerance at or above the run tolerance.
    """

    rep_id: int
    discarded: np.ndarray
    n_particles: int
    run_tolerance: float
    terminated_by: Termination = Termination.TOLERANCE_REACHED
    mode: Mode = Mode.ENTROPY

    def __post_init__(self):
        self.discarded = np.asarray(self.discarded, dtype=float)
        self.discarded.flags.writeable = False

    @property
    def iterations(self) -> int:
        return len(self.discarded)

    @property
    def depth(self) -> float:
        """Depth at the run tolerance, in nats."""
        return self.iterations / self.n_particles


def depth_at(record: DepthRecord, tol: float) -> float:
    """Depth of a recorded descent re-thresholded at tolerance ``tol``.

    Counts the discarded distances above ``tol`` and divides by the number
    of particles. ``tol`` may not be below the tolerance the run aimed for,
    because the trace carries no information past that point.
    """
    if tol < record.run_tolerance:
        raise InsufficientResolutionError(
            f"requested tolerance {tol!r} is below the run tolerance "
            f"{record.run_tolerance!r}; rerun with a finer tolerance")
    return int(np.count_nonzero(record.discarded > tol)) / record.n_particles


def depth_std_error_theoretical(depth: float, n_particles: int) -> float:
    """Standard deviation of a single-descent depth estimate: sqrt(depth/N)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    return math.sqrt(depth / n_particles)


def evolve_constrained(model: Model, particle: Particle, dist: float,
                       rng: np.random.Generator, mode: Mode, reference: Particle,
                       d_max: float, steps: int) -> tuple[Particle, float]:
    """Run ``steps`` constrained MCMC moves from ``particle``.

    A move is accepted iff the Metropolis coin for the unconstrained target
    succeeds and the proposal lies strictly closer than ``d_max``. Ties at
    ``d_max`` are rejected.
    """
    for _ in range(steps):
        proposal, log_ratio = model.explore(particle, rng, mode, reference)
        if not log_ratio > -math.inf:  # also rejects NaN
            continue
        d_new = model.distance(proposal, reference)
        if d_new >= d_max:
            continue
        if log_ratio < 0.0 and rng.random() >= math.exp(log_ratio):
            continue
        particle, dist = proposal, d_new
    return particle, dist


def _draw_initial_set(model: Model, rng: np.random.Generator, mode: Mode,
                      reference: Particle, steps: int, n: int):
    """Initial particles, redrawn until at least one is at finite distance."""
    draws = 0
    while True:
        particles = [model.draw_initial(rng, mode, reference, steps) for _ in range(n)]
        dists = [model.distance(p, reference) for p in particles]
        draws += n
        if any(math.isfinite(d) for d in dists):
            return particles, dists
        if draws >= INITIAL_DRAW_CAP:
            raise RuntimeError(
                f"no initial particle reached finite distance after {draws} draws; "
                "the distance function may be unsatisfiable for this reference")


def run_descent(model: Model, reference: Particle, config: RunConfig,
                rng: np.random.Generator, rep_id: int = 0) -> DepthRecord:
    """Run one descent toward ``reference`` and return its trace.

    Every iteration records the greatest distance, then replaces that worst
    particle by cloning a surviving one (uniformly at random) and evolving it
    with constrained MCMC, or by an exact constrained draw when the model
    supports one. Stops once the greatest distance is within tolerance, or
    flags the record when the depth cap would be exceeded.
    """
    config.validate()
    model.require_mode(config.mode)
    n = config.n_particles
    tol = config.tolerance

    particles, dists = _draw_initial_set(
        model, rng, config.mode, reference, config.mcmc_steps, n)

    discarded: list[float] = []
    terminated = Termination.TOLERANCE_REACHED
    worst = int(np.argmax(dists))
    d_max = dists[worst]

    while d_max > tol:
        if (len(discarded) + 1) / n > config.depth_cap:
            terminated = Termination.DEPTH_CAP_HIT
            break
        discarded.append(d_max)

        if model.perfect_resampling:
            new = model.draw_constrained(rng, config.mode, reference, d_max)
            new_dist = model.distance(new, reference)
        else:
            if n == 1:
                # no survivor exists: restart the chain from the discarded
                # particle and let the constraint pull it inward
                clone, clone_dist = particles[0], dists[0]
            else:
                pick = int(rng.integers(n - 1))
                if pick >= worst:
                    pick += 1
                clone, clone_dist = particles[pick], dists[pick]
            new, new_dist = evolve_constrained(
                model, clone, clone_dist, rng, config.mode, reference,
                d_max, config.mcmc_steps)

        particles[worst] = new
        dists[worst] = new_dist
        worst = int(np.argmax(dists))
        d_max = dists[worst]

    return DepthRecord(
        rep_id=rep_id,
        discarded=np.array(discarded, dtype=float),
        n_particles=n,
        run_tolerance=tol,
        terminated_by=terminated,
        mode=config.mode,
    )
