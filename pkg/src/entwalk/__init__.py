"""Discrete-time quantum walks on a line with one walker or two coin-entangled walkers."""

from .errors import InvariantViolation, NonUnitary, NotNormalized, OutOfRange, Overflow, WalkError
from .observables import (
    JointDistribution,
    SummaryRecord,
    at_least_one,
    correlation,
    diagonal,
    expected_distance,
    marginal,
    summarize,
)
from .pair import (
    DenseJointState,
    ProductTerm,
    TwoParticleState,
    custom_initial,
    dense_evolve,
    dense_step,
    entangled_initial,
    evolve_pair,
    joint_distribution,
    phase_initial,
    separable_initial,
    to_dense,
)
from .walk import (
    Coin,
    CoinOperator,
    Distribution1D,
    WalkerState,
    apply_coin,
    apply_shift,
    classical_distribution,
    distribution_stats,
    evolve,
    hadamard,
    make_coin,
    point_source,
    position_distribution,
    step,
)

__version__ = "0.1.0"
