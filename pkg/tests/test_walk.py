"""Single-walker machinery: coins, shift, step, readout, classical reference."""

import math
from fractions import Fraction

import numpy as np
import pytest

from entwalk import (
    Coin,
    NonUnitary,
    NotNormalized,
    OutOfRange,
    Overflow,
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

R2 = 1 / math.sqrt(2)
UP = (1, 0)
DOWN = (0, 1)


def state_from(n_max, entries):
    """Build a WalkerState from {(position, coin): amplitude}."""
    a = np.zeros((2 * n_max + 1, 2), dtype=complex)
    for (x, c), v in entries.items():
        a[x + n_max, c] = v
    return WalkerState(n_max, a)


def full_step_matrix(coin_matrix, n_max):
    """Explicit step unitary S (I (x) C) on the basis index 2*(x + n_max) + c.

    The shift is built from its two projector terms; boundary columns that
    would leave the lattice are dropped, which is harmless as long as the
    state never reaches them.
    """
    size = 2 * n_max + 1
    right = np.eye(size, k=-1)  # |x+1><x|
    left = np.eye(size, k=1)  # |x-1><x|
    up = np.array([[1, 0], [0, 0]])
    down = np.array([[0, 0], [0, 1]])
    shift = np.kron(right, up) + np.kron(left, down)
    return shift @ np.kron(np.eye(size), coin_matrix)


def random_state(rng, n_max, radius):
    a = np.zeros((2 * n_max + 1, 2), dtype=complex)
    block = rng.normal(size=(2 * radius + 1, 2)) + 1j * rng.normal(size=(2 * radius + 1, 2))
    a[n_max - radius : n_max + radius + 1] = block / np.linalg.norm(block)
    return WalkerState(n_max, a)


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestCoins:
    def test_identity_is_valid(self):
        assert np.array_equal(make_coin(np.eye(2)).matrix, np.eye(2))

    def test_hadamard_entries(self):
        np.testing.assert_array_equal(
            hadamard().matrix, np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        )

    def test_non_unitary_rejected(self):
        with pytest.raises(NonUnitary):
            make_coin(np.array([[1, 1], [1, 1]]) / math.sqrt(2))

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError):
            make_coin(np.eye(3))

    def test_global_phase_accepted(self):
        coin = make_coin(np.exp(0.3j) * hadamard().matrix)
        assert coin.matrix[0, 0] == pytest.approx(np.exp(0.3j) * R2)

    def test_hadamard_squared_is_identity(self):
        h = hadamard()
        assert np.max(np.abs((h @ h).matrix - np.eye(2))) <= 1e-15

    def test_coin_matrix_is_read_only(self):
        with pytest.raises(ValueError):
            hadamard().matrix[0, 0] = 2.0

    @pytest.mark.parametrize(
        "start, expected",
        [(UP, {(0, 0): R2, (0, 1): R2}), (DOWN, {(0, 0): R2, (0, 1): -R2})],
    )
    def test_hadamard_on_basis_coins(self, start, expected):
        out = apply_coin(point_source(0, start, 2), hadamard())
        np.testing.assert_allclose(out.amplitudes, state_from(2, expected).amplitudes, atol=1e-15)


class TestPointSource:
    def test_up(self):
        s = point_source(0, UP, 5)
        assert s.amplitude(0, Coin.UP) == 1
        assert s.norm() == 1.0

    def test_down(self):
        s = point_source(0, DOWN, 5)
        assert s.amplitude(0, Coin.DOWN) == 1
        assert s.amplitude(0, Coin.UP) == 0

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            point_source(6, UP, 5)

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            point_source(0, (1, 1), 5)


class TestShiftAndStep:
    def test_shift_up_moves_right(self):
        out = apply_shift(point_source(0, UP, 3))
        assert out.amplitude(1, Coin.UP) == 1

    def test_first_step_arrows(self):
        h = hadamard()
        after_coin = apply_coin(point_source(0, UP, 1), h)
        after_shift = apply_shift(after_coin)
        expect = state_from(1, {(1, 0): R2, (-1, 1): R2})
        assert np.max(np.abs(after_shift.amplitudes - expect.amplitudes)) <= 1e-15

    def test_shift_overflow_right(self):
        with pytest.raises(Overflow):
            apply_shift(point_source(3, UP, 3))

    def test_shift_overflow_left(self):
        with pytest.raises(Overflow):
            apply_shift(point_source(-3, DOWN, 3))

    def test_boundary_pointing_inward_is_fine(self):
        out = apply_shift(point_source(3, DOWN, 3))
        assert out.amplitude(2, Coin.DOWN) == 1

    def test_coin_per_position(self):
        # Hand application of the Hadamard at x = 1 and x = -1 separately.
        s = state_from(2, {(1, 0): R2, (-1, 1): -R2})
        out = apply_coin(s, hadamard())
        expect = state_from(2, {(1, 0): 0.5, (1, 1): 0.5, (-1, 0): -0.5, (-1, 1): 0.5})
        np.testing.assert_allclose(out.amplitudes, expect.amplitudes, atol=1e-15)

    def test_step_from_down(self):
        out = step(point_source(0, DOWN, 2), hadamard())
        expect = state_from(2, {(1, 0): R2, (-1, 1): -R2})
        np.testing.assert_allclose(out.amplitudes, expect.amplitudes, atol=1e-15)

    def test_step_is_coin_then_shift(self):
        rng = np.random.default_rng(1)
        s = random_state(rng, 8, 3)
        h = hadamard()
        assert np.array_equal(step(s, h).amplitudes, apply_shift(apply_coin(s, h)).amplitudes)

    @pytest.mark.parametrize("seed", range(5))
    def test_step_matches_explicit_unitary(self, seed):
        rng = np.random.default_rng(seed)
        coin = make_coin(random_unitary(rng))
        s = random_state(rng, 10, 4)
        u = full_step_matrix(coin.matrix, 10)
        expect = (u @ s.amplitudes.reshape(-1)).reshape(-1, 2)
        np.testing.assert_allclose(step(s, coin).amplitudes, expect, atol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_step_preserves_norm(self, seed):
        rng = np.random.default_rng(100 + seed)
        s = random_state(rng, 12, 5)
        coin = make_coin(random_unitary(rng))
        assert abs(step(s, coin).norm() - s.norm()) <= 1e-14


class TestEvolve:
    def test_zero_steps(self):
        s = point_source(0, UP, 4)
        assert evolve(s, hadamard(), 0) is s

    def test_one_step_from_up(self):
        out = evolve(point_source(0, UP, 3), hadamard(), 1)
        expect = state_from(3, {(1, 0): R2, (-1, 1): R2})
        np.testing.assert_allclose(out.amplitudes, expect.amplitudes, atol=1e-15)

    def test_two_steps_from_down(self):
        # U|0,D> = (|1,U> - |-1,D>)/sqrt2; coin then shift once more:
        # 1/2 (|2,U> - |0,U> + |0,D> + |-2,D>).
        out = evolve(point_source(0, DOWN, 3), hadamard(), 2)
        expect = state_from(3, {(2, 0): 0.5, (0, 0): -0.5, (0, 1): 0.5, (-2, 1): 0.5})
        np.testing.assert_allclose(out.amplitudes, expect.amplitudes, atol=1e-15)

    def test_too_many_steps_overflow(self):
        with pytest.raises(Overflow):
            evolve(point_source(0, UP, 3), hadamard(), 4)

    def test_matches_matrix_power(self):
        n = 15
        u = full_step_matrix(hadamard().matrix, n)
        start = point_source(0, UP, n)
        expect = np.linalg.matrix_power(u, n) @ start.amplitudes.reshape(-1)
        got = evolve(start, hadamard(), n).amplitudes.reshape(-1)
        np.testing.assert_allclose(got, expect, atol=1e-13)

    def test_deterministic(self):
        a = evolve(point_source(0, UP, 60), hadamard(), 60)
        b = evolve(point_source(0, UP, 60), hadamard(), 60)
        assert a.amplitudes.tobytes() == b.amplitudes.tobytes()


class TestInvariants:
    def test_norm_drift_over_100_steps(self):
        rng = np.random.default_rng(7)
        for s in (point_source(0, UP, 100), point_source(0, DOWN, 100), random_state(rng, 110, 5)):
            assert abs(evolve(s, hadamard(), 100).norm() - s.norm()) <= 1e-10

    @pytest.mark.parametrize("coin", [UP, DOWN])
    @pytest.mark.parametrize("n", [0, 1, 2, 7, 30, 51])
    def test_parity_support(self, coin, n):
        s = evolve(point_source(0, coin, 60), hadamard(), n)
        x = s.positions
        forbidden = ((x + n) % 2 == 1) | (np.abs(x) > n)
        assert np.all(s.amplitudes[forbidden] == 0)

    @pytest.mark.parametrize("n", [1, 5, 30, 100])
    def test_mirror_symmetry(self, n):
        pu = position_distribution(evolve(point_source(0, UP, n), hadamard(), n))
        pd = position_distribution(evolve(point_source(0, DOWN, n), hadamard(), n))
        assert np.max(np.abs(pu.probabilities - pd.probabilities[::-1])) <= 1e-12

    def test_linear_spreading(self):
        sd = {
            n: distribution_stats(position_distribution(evolve(point_source(0, UP, n), hadamard(), n)))[1]
            for n in (50, 100)
        }
        assert 1.8 <= sd[100] / sd[50] <= 2.2
        classical = distribution_stats(classical_distribution(100))[1] / distribution_stats(
            classical_distribution(50)
        )[1]
        assert classical == pytest.approx(math.sqrt(2), abs=1e-12)


class TestReadout:
    def test_one_step_halves(self):
        p = position_distribution(evolve(point_source(0, UP, 1), hadamard(), 1))
        assert p[1] == pytest.approx(0.5, abs=1e-15)
        assert p[-1] == pytest.approx(0.5, abs=1e-15)
        assert p[0] == 0

    def test_point_source(self):
        assert position_distribution(point_source(0, UP, 3))[0] == 1.0

    def test_two_steps_from_down(self):
        p = position_distribution(evolve(point_source(0, DOWN, 2), hadamard(), 2))
        np.testing.assert_allclose(p.probabilities, [0.25, 0, 0.5, 0, 0.25], atol=1e-15)

    def test_stats_two_point(self):
        p = position_distribution(evolve(point_source(0, UP, 1), hadamard(), 1))
        mean, sd = distribution_stats(p)
        assert mean == pytest.approx(0.0, abs=1e-15)
        assert sd == pytest.approx(1.0, abs=1e-15)

    def test_hadamard_drift_regression(self):
        # Frozen from this implementation; the walk from |0,UP> drifts right.
        p = position_distribution(evolve(point_source(0, UP, 100), hadamard(), 100))
        mean, sd = distribution_stats(p)
        assert mean > 0
        assert mean == pytest.approx(28.97556015637118, abs=1e-9)
        assert sd == pytest.approx(45.7147595905134, abs=1e-9)


class TestClassical:
    def test_one_step(self):
        np.testing.assert_array_equal(classical_distribution(1).probabilities, [0.5, 0, 0.5])

    def test_two_steps(self):
        np.testing.assert_array_equal(classical_distribution(2).probabilities, [0.25, 0, 0.5, 0, 0.25])

    def test_zero_steps(self):
        assert classical_distribution(0).probabilities.tolist() == [1.0]

    def test_hundred_steps_stddev(self):
        mean, sd = distribution_stats(classical_distribution(100))
        assert abs(mean) <= 1e-12
        assert sd == pytest.approx(10.0, abs=1e-12)

    @pytest.mark.parametrize("n", [3, 17, 100, 500])
    def test_matches_exact_binomial(self, n):
        # Exact rational oracle: Pascal's recurrence on Fractions.
        row = [Fraction(1)]
        for _ in range(n):
            row = [a + b for a, b in zip([Fraction(0)] + row, row + [Fraction(0)])]
        exact = [r / 2**n for r in row]
        assert sum(exact) == 1
        assert sum(Fraction(2 * k - n) ** 2 * p for k, p in enumerate(exact)) == n
        got = classical_distribution(n).probabilities
        assert got[::2].tolist() == [float(p) for p in exact]
        assert not np.any(got[1::2])
