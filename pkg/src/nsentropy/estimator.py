"""Turn depth records into entropies, conditional entropies, and mutual informations.

All quantities are in nats. Volume corrections live here, not in the models,
so one set of records can be postprocessed under several tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import gammaln

from .model import Geometry, Metric, Mode
from .sampler import DepthRecord, Termination, depth_at

LN2 = math.log(2.0)


class AggregationError(ValueError):
    """Record set unusable: too small or poisoned by capped descents."""


class ModeMismatchError(ValueError):
    """Records were produced in a different mode than the estimate requires."""


class PairingError(ValueError):
    """Record sets do not share the same reference particles."""


@dataclass(frozen=True)
class DepthEstimate:
    """Mean depth across repetitions with its standard error (nats)."""

    mean: float
    std_error: float
    reps: int


@dataclass(frozen=True)
class EntropyEstimate:
    """Depth mean plus log-volume correction: a differential entropy (nats)."""

    value: float
    std_error: float
    log_volume: float
    geometry: Optional[Geometry] = None

    @classmethod
    def exact(cls, value: float) -> "EntropyEstimate":
        """A known entropy with zero error, e.g. an analytic prior entropy."""
        return cls(value=value, std_error=0.0, log_volume=0.0, geometry=None)

    def in_bits(self) -> "EntropyEstimate":
        return EntropyEstimate(self.value / LN2, self.std_error / LN2,
                               self.log_volume / LN2, self.geometry)


def _reject_capped(records: Sequence[DepthRecord]) -> None:
    capped = [r.rep_id for r in records if r.terminated_by is Termination.DEPTH_CAP_HIT]
    if capped:
        raise AggregationError(
            f"descents {capped} hit the depth cap; their depths are truncated "
            "and would bias the estimate low. Rerun with a larger depth cap.")


def _depths(records: Sequence[DepthRecord], tol: float) -> np.ndarray:
    return np.array([depth_at(r, tol) for r in records], dtype=float)


def aggregate(records: Sequence[DepthRecord], tol: float) -> DepthEstimate:
    """Mean and standard error of the per-descent depths at tolerance ``tol``.

    The standard error is the Bessel-corrected sample standard deviation over
    repetitions divided by sqrt(reps). Records that hit the depth cap poison
    the aggregate rather than being dropped.
    """
    if len(records) < 2:
        raise AggregationError("need at least 2 depth records to aggregate")
    _reject_capped(records)
    depths = _depths(records, tol)
    return DepthEstimate(
        mean=float(np.mean(depths)),
        std_error=float(np.std(depths, ddof=1) / math.sqrt(len(depths))),
        reps=len(depths),
    )


def ball_log_volume(geometry: Geometry, r: float) -> float:
    """Log-volume of the region within distance ``r`` under the geometry.

    An L2 ball of radius r in n dimensions has volume (pi r^2)^(n/2) / (n/2)!,
    evaluated through the log-gamma function so non-integer n/2 works. A
    per-axis interval has volume (2r)^n and a one-sided interval has length r.
    """
    if r <= 0:
        raise ValueError(f"tolerance must be > 0 to define a volume, got {r!r}")
    n = geometry.dim
    if geometry.metric is Metric.L2_BALL:
        return 0.5 * n * math.log(math.pi * r * r) - float(gammaln(0.5 * n + 1.0))
    if geometry.metric is Metric.INTERVAL_PER_AXIS:
        return n * math.log(2.0 * r)
    if geometry.metric is Metric.ONE_SIDED:
        return math.log(r)
    raise ValueError(f"unknown metric {geometry.metric!r}")


def differential_entropy(depth: DepthEstimate, geometry: Geometry,
                         r: float) -> EntropyEstimate:
    """Differential entropy: mean depth plus the log-volume of the tolerance region.

    The volume term is deterministic, so the standard error is the depth's.
    """
    log_v = ball_log_volume(geometry, r)
    return EntropyEstimate(value=depth.mean + log_v, std_error=depth.std_error,
                           log_volume=log_v, geometry=geometry)


def conditional_entropy(records: Sequence[DepthRecord], tol: float,
                        geometry: Geometry) -> EntropyEstimate:
    """Expected posterior entropy from conditional-mode records.

    Arithmetic is identical to ``differential_entropy``; this entry point
    exists to enforce that the records really were produced by descents
    through the posterior and to tag the output accordingly.
    """
    wrong = [r.rep_id for r in records if r.mode is not Mode.CONDITIONAL_ENTROPY]
    if wrong:
        raise ModeMismatchError(
            f"records {wrong} were not produced in conditional-entropy mode")
    return differential_entropy(aggregate(records, tol), geometry, tol)


def mutual_information(h_x: EntropyEstimate, h_y: EntropyEstimate,
                       h_xy: EntropyEstimate) -> tuple[float, float]:
    """I(x;y) = H(x) + H(y) - H(x,y) with errors combined in quadrature.

    Quadrature assumes the three estimates are independent; when the runs
    shared reference particles use ``mutual_information_paired`` instead.
    """
    value = h_x.value + h_y.value - h_xy.value
    std_error = math.sqrt(h_x.std_error ** 2 + h_y.std_error ** 2 + h_xy.std_error ** 2)
    return value, std_error


def mutual_information_paired(
        marginal_records_x: Sequence[DepthRecord],
        marginal_records_y: Sequence[DepthRecord],
        joint_records: Sequence[DepthRecord],
        tol_marginal: float,
        tol_joint: float,
        geometries: tuple[Geometry, Geometry, Geometry],
) -> tuple[float, float]:
    """Mutual information from runs sharing the same reference particles.

    For each repetition the depth difference d_x + d_y - d_xy is formed
    before averaging, so the strongly correlated per-reference errors cancel
    and the standard error comes from the differences themselves.
    """
    for recs in (marginal_records_x, marginal_records_y, joint_records):
        if len(recs) < 2:
            raise AggregationError("need at least 2 depth records to aggregate")
        _reject_capped(recs)
    ids_x = [r.rep_id for r in marginal_records_x]
    ids_y = [r.rep_id for r in marginal_records_y]
    ids_xy = [r.rep_id for r in joint_records]
    if not (ids_x == ids_y == ids_xy):
        raise PairingError(
            "record sets cover different reference particles "
            f"(rep ids {sorted(set(ids_x) ^ set(ids_xy) | set(ids_y) ^ set(ids_xy))}); "
            "paired estimation needs identical rep id sets in the same order")

    diffs = (_depths(marginal_records_x, tol_marginal)
             + _depths(marginal_records_y, tol_marginal)
             - _depths(joint_records, tol_joint))
    geom_x, geom_y, geom_xy = geometries
    log_v = (ball_log_volume(geom_x, tol_marginal)
             + ball_log_volume(geom_y, tol_marginal)
             - ball_log_volume(geom_xy, tol_joint))
    value = float(np.mean(diffs)) + log_v
    std_error = float(np.std(diffs, ddof=1) / math.sqrt(len(diffs)))
    return value, std_error
