"""Normal location model: a latent mean with 100 unit-variance observations.

The target distribution is the joint prior over the mean and the dataset.
The distance reads only the data coordinates, so descents measure the
entropy of the marginal distribution over datasets, with the mean acting as
a latent variable that lets that marginal be explored cheaply. Its true
entropy is available in closed form, which makes this the main end-to-end
accuracy benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import Geometry, Metric, Model, heavy_step

LN_2PIE = math.log(2.0 * math.pi) + 1.0


@dataclass
class NormalMeanParticle:
    mu: float
    x: np.ndarray
    sum_x: float
    sum_x2: float


def _make_particle(mu: float, x: np.ndarray) -> NormalMeanParticle:
    return NormalMeanParticle(mu, x, float(x.sum()), float(x @ x))


class NormalMeanModel(Model):
    """Joint prior over (mean, dataset): mu ~ N(0, prior_sd^2), x_i ~ N(mu, 1)."""

    def __init__(self, n_obs: int = 100, prior_sd: float = 10.0):
        self.n_obs = n_obs
        self.prior_sd = prior_sd
        self.geometry = Geometry(n_obs, Metric.L2_BALL)

    def draw_reference(self, rng):
        mu = self.prior_sd * rng.standard_normal()
        return _make_particle(mu, mu + rng.standard_normal(self.n_obs))

    def draw_initial(self, rng, mode, reference, steps):
        self.require_mode(mode)
        return self.draw_reference(rng)

    def distance(self, particle, reference):
        v = particle.x - reference.x
        return math.sqrt(v @ v)

    def summary(self, particle):
        return np.array([particle.mu, particle.sum_x / self.n_obs])

    def explore(self, particle, rng, mode, reference):
        kind = int(rng.integers(4))
        if kind == 0:
            return self._move_mu(particle, rng)
        if kind == 1:
            return self._shift_all(particle, rng)
        if kind == 2:
            return self._resample_subset(particle, rng)
        return self._move_one(particle, rng)

    # Sums of squared deviations enter every data-likelihood ratio; the
    # particles carry sum(x) and sum(x^2) so these stay O(1) per proposal.

    def _sum_sq_dev(self, particle, mu: float) -> float:
        n = self.n_obs
        return particle.sum_x2 - 2.0 * mu * particle.sum_x + n * mu * mu

    def _log_prior_mu(self, mu: float) -> float:
        return -0.5 * (mu / self.prior_sd) ** 2

    def _move_mu(self, particle, rng):
        """Move the mean, data fixed; prior and data-likelihood both change."""
        mu_new = particle.mu + heavy_step(rng, self.prior_sd)
        ratio = (self._log_prior_mu(mu_new) - self._log_prior_mu(particle.mu)
                 - 0.5 * (self._sum_sq_dev(particle, mu_new)
                          - self._sum_sq_dev(particle, particle.mu)))
        proposal = NormalMeanParticle(mu_new, particle.x, particle.sum_x, particle.sum_x2)
        return proposal, ratio

    def _shift_all(self, particle, rng):
        """Translate the mean and every observation together.

        The deviations x_i - mu are unchanged, so only the prior on the mean
        enters the ratio; the translation has unit Jacobian.
        """
        delta = heavy_step(rng, self.prior_sd)
        mu_new = particle.mu + delta
        n = self.n_obs
        proposal = NormalMeanParticle(
            mu_new, particle.x + delta,
            particle.sum_x + n * delta,
            particle.sum_x2 + 2.0 * delta * particle.sum_x + n * delta * delta)
        return proposal, self._log_prior_mu(mu_new) - self._log_prior_mu(particle.mu)

    def _resample_subset(self, particle, rng):
        """Redraw a random subset of observations from their conditional."""
        n = self.n_obs
        k = max(1, math.ceil(n * rng.random() ** 2))
        idx = rng.choice(n, size=k, replace=False)
        old = particle.x[idx]
        new = particle.mu + rng.standard_normal(k)
        x = particle.x.copy()
        x[idx] = new
        proposal = NormalMeanParticle(
            particle.mu, x,
            particle.sum_x + float(new.sum() - old.sum()),
            particle.sum_x2 + float(new @ new - old @ old))
        return proposal, 0.0

    def _move_one(self, particle, rng):
        """Nudge a single observation; only its own likelihood factor changes."""
        i = int(rng.integers(self.n_obs))
        xi = particle.x[i]
        xi_new = xi + heavy_step(rng, 1.0)
        x = particle.x.copy()
        x[i] = xi_new
        d_old = xi - particle.mu
        d_new = xi_new - particle.mu
        proposal = NormalMeanParticle(
            particle.mu, x,
            particle.sum_x + (xi_new - xi),
            particle.sum_x2 + (xi_new * xi_new - xi * xi))
        return proposal, -0.5 * (d_new * d_new - d_old * d_old)


def true_data_entropy(n_obs: int = 100, prior_sd: float = 10.0,
                      noise_sd: float = 1.0) -> float:
    """Closed-form entropy of the marginal distribution over datasets.

    Decomposes as the entropy of the data given the mean plus the information
    the data carries about the mean.
    """
    h_given_mu = 0.5 * n_obs * (LN_2PIE + 2.0 * math.log(noise_sd))
    info = 0.5 * math.log1p(n_obs * prior_sd ** 2 / noise_sd ** 2)
    return h_given_mu + info


def true_posterior_sd(n_obs: int = 100, prior_sd: float = 10.0,
                      noise_sd: float = 1.0) -> float:
    """Posterior standard deviation of the mean (same for every dataset)."""
    return math.sqrt(1.0 / (1.0 / prior_sd ** 2 + n_obs / noise_sd ** 2))
