"""Joint statistics of a two-walker position distribution.

All quantities are exact sums over the probability matrix; nothing here
samples.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import InvariantViolation
from .walk import Distribution1D

__all__ = [
    "JointDistribution",
    "SummaryRecord",
    "marginal",
    "expected_distance",
    "correlation",
    "at_least_one",
    "diagonal",
    "summarize",
]

SUM_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """``P(i, j)`` for walker 1 at ``i`` and walker 2 at ``j``, both in ``[-n_max, n_max]``."""

    n_max: int
    probabilities: NDArray[np.float64]

    def __post_init__(self) -> None:
        size = 2 * self.n_max + 1
        p = np.array(self.probabilities, dtype=np.float64)
        if p.shape != (size, size):
            raise ValueError(f"probabilities must have shape {(size, size)}")
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.n_max, self.n_max + 1)

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        if abs(i) > self.n_max or abs(j) > self.n_max:
            return 0.0
        return float(self.probabilities[i + self.n_max, j + self.n_max])

    def check(self) -> None:
        """Raise :class:`InvariantViolation` unless entries are >= 0 and sum to 1."""
        p = self.probabilities
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvariantViolation("joint distribution has negative or non-finite entries")
        total = float(p.sum())
        if abs(total - 1.0) > SUM_ATOL:
            raise InvariantViolation(f"joint distribution sums to {total!r}")


@dataclass(frozen=True)
class SummaryRecord:
    steps: int
    initial_condition: str
    expected_distance: float
    correlation: float
    mean1: float
    mean2: float

    def to_dict(self) -> dict:
        return asdict(self)


def marginal(dist: JointDistribution, which: int) -> Distribution1D:
    if which == 1:
        return Distribution1D(dist.n_max, dist.probabilities.sum(axis=1))
    if which == 2:
        return Distribution1D(dist.n_max, dist.probabilities.sum(axis=0))
    raise ValueError("which must be 1 or 2")


def _mean(dist: Distribution1D) -> float:
    return float(np.sum(dist.positions * dist.probabilities))


def expected_distance(dist: JointDistribution) -> float:
    x = dist.positions
    return float(np.sum(np.abs(x[:, None] - x[None, :]) * dist.probabilities))


def correlation(dist: JointDistribution) -> float:
    """Covariance ``<x1 x2> - <x1><x2>`` of the two positions.

    Evaluated in centered form, which avoids cancelling two large moments.
    """
    x = dist.positions.astype(np.float64)
    d1 = x - _mean(marginal(dist, 1))
    d2 = x - _mean(marginal(dist, 2))
    return float(np.sum(np.multiply.outer(d1, d2) * dist.probabilities))


def diagonal(dist: JointDistribution) -> NDArray[np.float64]:
    """Meeting probabilities ``P(i, i)``."""
    return np.diagonal(dist.probabilities).copy()


def at_least_one(dist: JointDistribution) -> NDArray[np.float64]:
    """Probability that at least one walker sits at ``i``: ``P1(i) + P2(i) - P(i, i)``."""
    p = dist.probabilities
    return p.sum(axis=1) + p.sum(axis=0) - np.diagonal(p)


def summarize(dist: JointDistribution, steps: int, label: str) -> SummaryRecord:
    return SummaryRecord(
        steps=steps,
        initial_condition=label,
        expected_distance=expected_distance(dist),
        correlation=correlation(dist),
        mean1=_mean(marginal(dist, 1)),
        mean2=_mean(marginal(dist, 2)),
    )
