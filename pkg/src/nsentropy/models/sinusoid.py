"""Sinusoidal signal measured at scheduled times, for observing-strategy design.

The unknowns are amplitude, log-period and phase; the data are noisy signal
values at 101 times laid out either evenly or front-loaded. Descents in
conditional-entropy mode explore the posterior over the parameters with the
dataset clamped, measuring how sharply a dataset pins down the log-period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import Geometry, Metric, Mode, Model, heavy_step

TWO_PI = 2.0 * math.pi

EVEN = "even"
UNEVEN = "uneven"


def observation_times(schedule: str, n_obs: int = 101) -> np.ndarray:
    if schedule == EVEN:
        return np.linspace(0.0, 1.0, n_obs)
    if schedule == UNEVEN:
        return ((np.arange(1, n_obs + 1) - 0.5) / n_obs) ** 3
    raise ValueError(f"unknown schedule {schedule!r}")


@dataclass
class SinusoidParticle:
    ln_a: float
    tau: float
    phi: float
    y: np.ndarray
    signal: np.ndarray
    ssq: float  # sum of squared residuals y - signal


class SinusoidModel(Model):
    """ln A ~ N(0, 0.1^2), tau ~ U(-1, 0), phi ~ U(0, 2pi); y_i ~ N(signal(t_i), 0.1^2).

    The signal is A sin(2 pi t / T + phi) with period T = 10^tau. The
    distance between particles is the absolute difference of their tau
    values, so entropies come out in terms of the log-period.
    """

    supports_conditional = True

    LN_A_SD = 0.1
    NOISE_SD = 0.1

    def __init__(self, schedule: str = EVEN, n_obs: int = 101):
        self.schedule = schedule
        self.n_obs = n_obs
        self.times = observation_times(schedule, n_obs)
        self.times.flags.writeable = False
        self.geometry = Geometry(1, Metric.INTERVAL_PER_AXIS)

    def _signal(self, ln_a: float, tau: float, phi: float) -> np.ndarray:
        period = 10.0 ** tau
        return math.exp(ln_a) * np.sin(TWO_PI / period * self.times + phi)

    def _particle(self, ln_a, tau, phi, y) -> SinusoidParticle:
        signal = self._signal(ln_a, tau, phi)
        resid = y - signal
        return SinusoidParticle(ln_a, tau, phi, y, signal, float(resid @ resid))

    def draw_reference(self, rng):
        ln_a = self.LN_A_SD * rng.standard_normal()
        tau = -rng.random()
        phi = TWO_PI * rng.random()
        signal = self._signal(ln_a, tau, phi)
        y = signal + self.NOISE_SD * rng.standard_normal(self.n_obs)
        resid = y - signal
        return SinusoidParticle(ln_a, tau, phi, y, signal, float(resid @ resid))

    def draw_initial(self, rng, mode, reference, steps):
        if mode is Mode.ENTROPY:
            return self.draw_reference(rng)
        # The reference's parameters are an exact posterior sample for its own
        # dataset; decorrelate from them with posterior-kernel moves, data fixed.
        particle = self._particle(reference.ln_a, reference.tau, reference.phi,
                                  reference.y)
        for _ in range(steps):
            proposal, log_ratio = self.explore(particle, rng, mode, reference)
            if log_ratio >= 0.0 or rng.random() < math.exp(log_ratio):
                particle = proposal
        return particle

    def distance(self, particle, reference):
        return abs(particle.tau - reference.tau)

    def summary(self, particle):
        return np.array([particle.ln_a, particle.tau, particle.phi])

    def explore(self, particle, rng, mode, reference):
        if mode is Mode.CONDITIONAL_ENTROPY:
            kind = int(rng.integers(3))
        else:
            kind = int(rng.integers(5))
        if kind < 3:
            return self._move_param(particle, rng, kind)
        if kind == 3:
            return self._resample_subset(particle, rng)
        return self._move_one_obs(particle, rng)

    def _move_param(self, particle, rng, which: int):
        """Heavy-tailed move of one parameter; ratio = prior + data likelihood."""
        ln_a, tau, phi = particle.ln_a, particle.tau, particle.phi
        log_prior = 0.0
        if which == 0:
            new = ln_a + heavy_step(rng, self.LN_A_SD)
            log_prior = 0.5 * ((ln_a / self.LN_A_SD) ** 2 - (new / self.LN_A_SD) ** 2)
            ln_a = new
        elif which == 1:
            tau = tau + heavy_step(rng, 1.0)
            if not -1.0 <= tau <= 0.0:
                return particle, -math.inf
        else:
            phi = (phi + heavy_step(rng, TWO_PI)) % TWO_PI
        signal = self._signal(ln_a, tau, phi)
        resid = particle.y - signal
        ssq = float(resid @ resid)
        log_lik = (particle.ssq - ssq) / (2.0 * self.NOISE_SD ** 2)
        proposal = SinusoidParticle(ln_a, tau, phi, particle.y, signal, ssq)
        return proposal, log_prior + log_lik

    def _resample_subset(self, particle, rng):
        """Redraw a random subset of observations from their conditional."""
        n = self.n_obs
        k = max(1, math.ceil(n * rng.random() ** 2))
        idx = rng.choice(n, size=k, replace=False)
        y = particle.y.copy()
        y[idx] = particle.signal[idx] + self.NOISE_SD * rng.standard_normal(k)
        resid = y[idx] - particle.signal[idx]
        old_resid = particle.y[idx] - particle.signal[idx]
        ssq = particle.ssq + float(resid @ resid - old_resid @ old_resid)
        proposal = SinusoidParticle(particle.ln_a, particle.tau, particle.phi,
                                    y, particle.signal, ssq)
        return proposal, 0.0

    def _move_one_obs(self, particle, rng):
        i = int(rng.integers(self.n_obs))
        y = particle.y.copy()
        y[i] = y[i] + heavy_step(rng, self.NOISE_SD)
        r_new = y[i] - particle.signal[i]
        r_old = particle.y[i] - particle.signal[i]
        ssq = particle.ssq + (r_new * r_new - r_old * r_old)
        proposal = SinusoidParticle(particle.ln_a, particle.tau, particle.phi,
                                    y, particle.signal, ssq)
        return proposal, (r_old * r_old - r_new * r_new) / (2.0 * self.NOISE_SD ** 2)
