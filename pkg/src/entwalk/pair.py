"""
Two walkers on the same line, each stepped with the same coin.

Two representations are kept side by side:

``TwoParticleState``
    A weighted sum of walker ⊗ walker product terms. Because the joint step
    is ``U ⊗ U``, each factor can be evolved on its own, which makes this
    the fast path.
``DenseJointState``
    The full amplitude tensor indexed ``(i, c1, j, c2)`` (row-major, positions
    offset by ``n_max``). It is stepped with the 4x4 joint coin and a
    two-index conditional shift, without using the product structure, and
    serves as the brute-force reference for the product path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import NotNormalized, Overflow
from .observables import JointDistribution
from .walk import Coin, CoinOperator, WalkerState, evolve, point_source

__all__ = [
    "ProductTerm",
    "TwoParticleState",
    "DenseJointState",
    "UP_COIN",
    "DOWN_COIN",
    "separable_initial",
    "entangled_initial",
    "phase_initial",
    "custom_initial",
    "evolve_pair",
    "to_dense",
    "dense_step",
    "dense_evolve",
    "joint_distribution",
]

NORM_ATOL = 1e-10

UP_COIN = (1.0, 0.0)
DOWN_COIN = (0.0, 1.0)


@dataclass(frozen=True, eq=False)
class ProductTerm:
    coefficient: complex
    walker1: WalkerState
    walker2: WalkerState

    def __post_init__(self) -> None:
        if self.walker1.n_max != self.walker2.n_max:
            raise ValueError("both walkers of a term must share n_max")
        for w in (self.walker1, self.walker2):
            if abs(w.norm() - 1.0) > NORM_ATOL:
                raise NotNormalized("walker factors must have unit norm")
        object.__setattr__(self, "coefficient", complex(self.coefficient))


@dataclass(frozen=True, eq=False)
class TwoParticleState:
    terms: tuple[ProductTerm, ...]

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("a two-particle state needs at least one term")
        if len({t.walker1.n_max for t in terms}) != 1:
            raise ValueError("all terms must share n_max")
        object.__setattr__(self, "terms", terms)

    @property
    def n_max(self) -> int:
        return self.terms[0].walker1.n_max

    def norm(self) -> float:
        """Norm including overlaps between non-orthogonal terms."""
        total = 0j
        for a in self.terms:
            for b in self.terms:
                total += (
                    a.coefficient.conjugate()
                    * b.coefficient
                    * a.walker1.inner(b.walker1)
                    * a.walker2.inner(b.walker2)
                )
        return math.sqrt(max(total.real, 0.0))


@dataclass(frozen=True, eq=False)
class DenseJointState:
    n_max: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        size = 2 * self.n_max + 1
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.shape != (size, 2, size, 2):
            raise ValueError(f"amplitudes must have shape {(size, 2, size, 2)}")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.amplitudes) ** 2)))


def _check_normalized(state: TwoParticleState) -> TwoParticleState:
    norm = state.norm()
    if abs(norm - 1.0) > NORM_ATOL:
        raise NotNormalized(f"two-particle state has norm {norm!r}")
    return state


def separable_initial(n_max: int) -> TwoParticleState:
    """Walker 1 at the origin with coin DOWN, walker 2 at the origin with coin UP."""
    return custom_initial([(1.0, 0, DOWN_COIN, 0, UP_COIN)], n_max)


def entangled_initial(sign: str | int, n_max: int) -> TwoParticleState:
    """Maximally coin-entangled pair ``(|0,D>|0,U> +/- |0,U>|0,D>) / sqrt(2)``.

    ``sign`` is ``"+"``/``"-"`` or ``+1``/``-1``.
    """
    if sign in ("+", 1):
        s = 1.0
    elif sign in ("-", -1):
        s = -1.0
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    r = 1.0 / math.sqrt(2.0)
    return custom_initial(
        [(r, 0, DOWN_COIN, 0, UP_COIN), (s * r, 0, UP_COIN, 0, DOWN_COIN)], n_max
    )


def phase_initial(phi: float, n_max: int) -> TwoParticleState:
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    r = 1.0 / math.sqrt(2.0)
    return custom_initial(
        [(r, 0, DOWN_COIN, 0, UP_COIN), (r * cmath.exp(1j * phi), 0, UP_COIN, 0, DOWN_COIN)],
        n_max,
    )


def custom_initial(
    terms: Iterable[tuple[complex, int, ArrayLike, int, ArrayLike]], n_max: int
) -> TwoParticleState:
    """
    Build a superposition of point-source product terms.

    Each entry is ``(coefficient, position1, coin_amps1, position2, coin_amps2)``.

    Raises
    ------
    OutOfRange
        A position lies outside ``[-n_max, n_max]``.
    NotNormalized
        A coin vector is not unit length, or the total norm differs from 1
        by more than 1e-10.
    """
    built = [
        ProductTerm(c, point_source(x1, c1, n_max), point_source(x2, c2, n_max))
        for c, x1, c1, x2, c2 in terms
    ]
    return _check_normalized(TwoParticleState(tuple(built)))


def evolve_pair(state: TwoParticleState, coin: CoinOperator, n: int) -> TwoParticleState:
    if n == 0:
        return state
    evolved: dict[int, WalkerState] = {}

    def ev(w: WalkerState) -> WalkerState:
        # Entangled initial states reuse the same two factors; evolve each once.
        key = id(w)
        if key not in evolved:
            evolved[key] = evolve(w, coin, n)
        return evolved[key]

    return TwoParticleState(
        tuple(ProductTerm(t.coefficient, ev(t.walker1), ev(t.walker2)) for t in state.terms)
    )


def to_dense(state: TwoParticleState) -> DenseJointState:
    size = 2 * state.n_max + 1
    amps = np.zeros((size, 2, size, 2), dtype=np.complex128)
    for t in state.terms:
        amps += t.coefficient * np.multiply.outer(t.walker1.amplitudes, t.walker2.amplitudes)
    return DenseJointState(state.n_max, amps)


def dense_step(state: DenseJointState, coin: CoinOperator) -> DenseJointState:
    """
    One step of the joint walk on the full amplitude tensor.

    Raises
    ------
    Overflow
        If any amplitude would be shifted past ``+/- n_max`` in either index.
    """
    a = state.amplitudes
    size = a.shape[0]
    joint_coin = np.kron(coin.matrix, coin.matrix)
    # (i, c1, j, c2) -> (i, j, c1c2) so the 4x4 coin acts on the last axis.
    flat = a.transpose(0, 2, 1, 3).reshape(size, size, 4)
    mixed = np.einsum("kl,ijl->ijk", joint_coin, flat)
    b = mixed.reshape(size, size, 2, 2).transpose(0, 2, 1, 3)

    up, down = Coin.UP, Coin.DOWN
    if (
        np.any(b[-1, up] != 0)
        or np.any(b[0, down] != 0)
        or np.any(b[:, :, -1, up] != 0)
        or np.any(b[:, :, 0, down] != 0)
    ):
        raise Overflow(f"joint amplitude would leave [-{state.n_max}, {state.n_max}]^2")

    half = np.zeros_like(b)
    half[1:, up] = b[:-1, up]
    half[:-1, down] = b[1:, down]
    out = np.zeros_like(b)
    out[:, :, 1:, up] = half[:, :, :-1, up]
    out[:, :, :-1, down] = half[:, :, 1:, down]
    return DenseJointState(state.n_max, out)


def dense_evolve(state: DenseJointState, coin: CoinOperator, n: int) -> DenseJointState:
    for _ in range(n):
        state = dense_step(state, coin)
    return state


def joint_distribution(state: TwoParticleState | DenseJointState) -> JointDistribution:
    """``P(i, j)``, summing squared amplitudes over both coins.

    For product-form input the terms are summed coherently first, so
    interference between terms is kept.
    """
    dense = state if isinstance(state, DenseJointState) else to_dense(state)
    a = dense.amplitudes
    sq = a.real**2 + a.imag**2
    return JointDistribution(dense.n_max, sq.sum(axis=(1, 3)))

