"""
Single-walker discrete-time quantum walk on the integer line.

Basis convention
----------------
Each walker lives in the product of a position space and a two-level coin. Coin index 0 is ``UP`` and
shifts the walker by +1; coin index 1 is ``DOWN`` and shifts it by -1.
One step is the coin acting at every site followed by the conditional
shift.

Amplitudes are stored densely as an array of shape ``(2*n_max + 1, 2)``;
row ``k`` holds position ``k - n_max``. Nothing is ever renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import NonUnitary, NotNormalized, OutOfRange, Overflow

__all__ = [
    "Coin",
    "CoinOperator",
    "WalkerState",
    "Distribution1D",
    "make_coin",
    "hadamard",
    "point_source",
    "apply_coin",
    "apply_shift",
    "step",
    "evolve",
    "position_distribution",
    "distribution_stats",
    "classical_distribution",
]

UNITARY_ATOL = 1e-12
COIN_NORM_ATOL = 1e-12


class Coin(IntEnum):
    UP = 0
    DOWN = 1


def _frozen(arr: NDArray) -> NDArray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """Validated 2x2 unitary acting on the coin space (UP, DOWN order)."""

    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"coin must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NonUnitary("coin has non-finite entries")
        residual = float(np.max(np.abs(m.conj().T @ m - np.eye(2))))
        if residual > UNITARY_ATOL:
            raise NonUnitary(f"coin is not unitary: max |U^dag U - I| = {residual:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    def __matmul__(self, other: CoinOperator) -> CoinOperator:
        return CoinOperator(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class WalkerState:
    """Amplitudes of one walker over positions ``[-n_max, n_max]`` and two coin states."""

    n_max: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.shape != (2 * self.n_max + 1, 2):
            raise ValueError(
                f"amplitudes must have shape {(2 * self.n_max + 1, 2)}, got {a.shape}"
            )
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.n_max, self.n_max + 1)

    def amplitude(self, position: int, coin: Coin | int) -> complex:
        if abs(position) > self.n_max:
            return 0j
        return complex(self.amplitudes[position + self.n_max, int(coin)])

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.amplitudes) ** 2)))

    def inner(self, other: WalkerState) -> complex:
        """<self|other>; both states must share ``n_max``."""
        if other.n_max != self.n_max:
            raise ValueError("inner product needs equal n_max")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class Distribution1D:
    n_max: int
    probabilities: NDArray[np.float64]

    def __post_init__(self) -> None:
        p = np.array(self.probabilities, dtype=np.float64)
        if p.shape != (2 * self.n_max + 1,):
            raise ValueError(f"probabilities must have length {2 * self.n_max + 1}")
        object.__setattr__(self, "probabilities", _frozen(p))

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.n_max, self.n_max + 1)

    def __getitem__(self, position: int) -> float:
        if abs(position) > self.n_max:
            return 0.0
        return float(self.probabilities[position + self.n_max])

    def total(self) -> float:
        return float(np.sum(self.probabilities))


def make_coin(entries: ArrayLike) -> CoinOperator:
    """
    Validate a 2x2 complex matrix as a coin.

    Any U(2) matrix is accepted; a global phase is kept as given.

    Raises
    ------
    NonUnitary
        If ``max |U^dag U - I| > 1e-12``.
    """
    return CoinOperator(np.asarray(entries, dtype=np.complex128))


def hadamard() -> CoinOperator:
    return make_coin(np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0))


def point_source(position: int, coin_amplitudes: ArrayLike, n_max: int) -> WalkerState:
    """
    Walker localized at ``position`` with the given coin 2-vector.

    Raises
    ------
    OutOfRange
        If ``|position| > n_max``.
    NotNormalized
        If the coin amplitudes do not have unit norm (within 1e-12).
    """
    if n_max < 0:
        raise OutOfRange("n_max must be nonnegative")
    if abs(position) > n_max:
        raise OutOfRange(f"position {position} outside [-{n_max}, {n_max}]")
    c = np.asarray(coin_amplitudes, dtype=np.complex128).reshape(-1)
    if c.shape != (2,):
        raise ValueError("coin_amplitudes must have exactly two entries")
    norm = math.sqrt(float(np.sum(np.abs(c) ** 2)))
    if abs(norm - 1.0) > COIN_NORM_ATOL:
        raise NotNormalized(f"coin amplitudes have norm {norm!r}")
    amps = np.zeros((2 * n_max + 1, 2), dtype=np.complex128)
    amps[position + n_max] = c
    return WalkerState(n_max, amps)


def apply_coin(state: WalkerState, coin: CoinOperator) -> WalkerState:
    a = state.amplitudes
    m = coin.matrix
    out = np.empty_like(a)
    # Written out per component so the accumulation order is fixed.
    out[:, 0] = m[0, 0] * a[:, 0] + m[0, 1] * a[:, 1]
    out[:, 1] = m[1, 0] * a[:, 0] + m[1, 1] * a[:, 1]
    return WalkerState(state.n_max, out)


def apply_shift(state: WalkerState) -> WalkerState:
    """
    Move UP amplitude one site right and DOWN amplitude one site left.

    Raises
    ------
    Overflow
        If amplitude sits on the boundary with its coin pointing outward.
    """
    a = state.amplitudes
    if a[-1, Coin.UP] != 0 or a[0, Coin.DOWN] != 0:
        raise Overflow(f"amplitude would leave [-{state.n_max}, {state.n_max}]")
    out = np.zeros_like(a)
    out[1:, Coin.UP] = a[:-1, Coin.UP]
    out[:-1, Coin.DOWN] = a[1:, Coin.DOWN]
    return WalkerState(state.n_max, out)


def step(state: WalkerState, coin: CoinOperator) -> WalkerState:
    return apply_shift(apply_coin(state, coin))


def evolve(state: WalkerState, coin: CoinOperator, n: int) -> WalkerState:
    if n < 0:
        raise ValueError("number of steps must be nonnegative")
    for _ in range(n):
        state = step(state, coin)
    return state


def position_distribution(state: WalkerState) -> Distribution1D:
    sq = state.amplitudes.real**2 + state.amplitudes.imag**2
    return Distribution1D(state.n_max, sq[:, 0] + sq[:, 1])


def distribution_stats(dist: Distribution1D) -> tuple[float, float]:
    """Return ``(mean, stddev)`` of the position."""
    x = dist.positions.astype(np.float64)
    p = dist.probabilities
    mean = float(np.sum(x * p))
    var = float(np.sum(x * x * p)) - mean * mean
    return mean, math.sqrt(max(var, 0.0))


def classical_distribution(n: int) -> Distribution1D:
    """
    Exact position distribution of the unbiased classical walk after ``n`` steps.

    ``P(i) = C(n, (n + i) / 2) / 2**n`` for ``i + n`` even. Each entry is an
    integer ratio rounded once to float, so it is exact to the last ulp.
    """
    if n < 0:
        raise ValueError("number of steps must be nonnegative")
    denom = 2**n
    p = np.zeros(2 * n + 1)
    for k in range(n + 1):
        p[2 * k] = math.comb(n, k) / denom
    return Distribution1D(n, p)
