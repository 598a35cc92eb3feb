"""
Batch experiments behind the command line: single- and two-walker runs,
the distance/correlation tables, and the validation suite.

Every command returns an :class:`OutputRecord`; writing it to disk is left
to :func:`write_record` so the commands stay pure.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import observables as obs
from .errors import InvariantViolation, WalkError
from .pair import (
    TwoParticleState,
    dense_step,
    entangled_initial,
    evolve_pair,
    joint_distribution,
    phase_initial,
    separable_initial,
    to_dense,
)
from .serialize import dumps_csv, dumps_json
from .walk import (
    CoinOperator,
    Distribution1D,
    WalkerState,
    classical_distribution,
    distribution_stats,
    evolve,
    hadamard,
    make_coin,
    point_source,
    position_distribution,
    step,
)

DEFAULT_TABLE_STEPS = (10, 20, 30, 40, 60, 100)
DEFAULT_STEP_CAP = 500
TABLE_ROWS = ("minus", "separable", "plus")

# Published one-decimal reference values, keyed by (initial, N).
REFERENCE_DISTANCE = {
    "minus": dict(zip(DEFAULT_TABLE_STEPS, (8.8, 17.5, 26.0, 34.9, 52.2, 87.0))),
    "separable": dict(zip(DEFAULT_TABLE_STEPS, (7.1, 14.7, 21.9, 29.5, 44.3, 73.9))),
    "plus": dict(zip(DEFAULT_TABLE_STEPS, (5.5, 11.9, 17.8, 24.1, 36.3, 60.8))),
}
REFERENCE_CORRELATION = {
    "minus": dict(
        zip(DEFAULT_TABLE_STEPS, (-16.8, -69.8, -153.5, -276.2, -619.7, -1718.3))
    ),
    "separable": dict(zip(DEFAULT_TABLE_STEPS, (0.0,) * 6)),
    "plus": dict(zip(DEFAULT_TABLE_STEPS, (4.8, 7.3, 13.7, 15.1, 23.1, 39.1))),
}
TABLE_ATOL = 0.1

UP = (1.0, 0.0)
DOWN = (0.0, 1.0)


class ConfigError(WalkError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    steps: int | tuple[int, ...]
    initial_condition: str = "separable"
    coin: str = "hadamard"
    output_format: str = "csv"
    output_path: str = "-"
    classical: bool = False
    step_cap: int = DEFAULT_STEP_CAP

    def __post_init__(self) -> None:
        steps = (self.steps,) if isinstance(self.steps, int) else tuple(self.steps)
        if not steps:
            raise ConfigError("at least one step count is required")
        for n in steps:
            if not isinstance(n, (int, np.integer)) or n < 0:
                raise ConfigError(f"steps must be nonnegative integers, got {n!r}")
            if n > self.step_cap:
                raise ConfigError(f"steps={n} exceeds the cap of {self.step_cap}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        parse_coin(self.coin)

    @property
    def step_list(self) -> tuple[int, ...]:
        return (self.steps,) if isinstance(self.steps, int) else tuple(self.steps)

    def echo(self) -> dict[str, Any]:
        return {
            "steps": self.steps if isinstance(self.steps, int) else list(self.steps),
            "initial": self.initial_condition,
            "coin": self.coin,
            "classical": self.classical,
            "format": self.output_format,
        }


@dataclass
class OutputRecord:
    """Result of one command.

    ``tables`` maps a name to ``(header, rows)``; the first entry is the
    primary CSV payload, the rest go to companion files.
    """

    command: str
    config: dict[str, Any]
    results: dict[str, Any]
    tables: dict[str, tuple[Sequence[str], list[list[Any]]]] = field(default_factory=dict)
    text: str | None = None
    exit_code: int = 0


def parse_coin(text: str) -> CoinOperator:
    """``"hadamard"`` or four comma-separated complex entries in row-major order."""
    if text.strip().lower() == "hadamard":
        return hadamard()
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ConfigError("custom coin needs four comma-separated entries a,b,c,d")
    try:
        entries = [complex(p.replace(" ", "")) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad coin entry: {exc}") from None
    return make_coin(np.array(entries).reshape(2, 2))


def parse_initial(label: str) -> tuple[str, float | None]:
    """Split a two-walker initial-condition label into ``(kind, phase)``."""
    label = label.strip().lower()
    if label in ("separable", "plus", "minus"):
        return label, None
    if label.startswith("phase:"):
        try:
            phi = float(label.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad phase in {label!r}") from None
        if not math.isfinite(phi):
            raise ConfigError("phase must be finite")
        return "phase", phi
    raise ConfigError(
        f"unknown initial condition {label!r}; use separable, plus, minus or phase:<radians>"
    )


def initial_pair(label: str, n_max: int) -> TwoParticleState:
    kind, phi = parse_initial(label)
    if kind == "separable":
        return separable_initial(n_max)
    if kind == "plus":
        return entangled_initial("+", n_max)
    if kind == "minus":
        return entangled_initial("-", n_max)
    return phase_initial(phi, n_max)


def _single_coin(label: str) -> tuple[float, float]:
    label = label.strip().lower()
    if label in ("up", "u"):
        return UP
    if label in ("down", "d"):
        return DOWN
    raise ConfigError(f"single-walker initial coin must be 'up' or 'down', got {label!r}")


def _check_distribution(p: np.ndarray, what: str, total: float = 1.0) -> None:
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise InvariantViolation(f"{what} has negative or non-finite entries")
    s = float(np.sum(p))
    if abs(s - total) > 1e-10:
        raise InvariantViolation(f"{what} sums to {s!r}, expected {total!r}")


def cmd_walk1(config: ExperimentConfig) -> OutputRecord:
    """Position distribution of one walker after ``steps`` steps (or the classical walk)."""
    n = config.step_list[0]
    if config.classical:
        dist = classical_distribution(n)
    else:
        coin = parse_coin(config.coin)
        start = point_source(0, _single_coin(config.initial_condition), n)
        dist = position_distribution(evolve(start, coin, n))
    _check_distribution(dist.probabilities, "position distribution")
    mean, stddev = distribution_stats(dist)
    rows = [[int(i), float(p)] for i, p in zip(dist.positions, dist.probabilities)]
    return OutputRecord(
        command="walk1",
        config=config.echo(),
        results={
            "n_max": dist.n_max,
            "p": dist.probabilities,
            "mean": mean,
            "stddev": stddev,
        },
        tables={"distribution": (("i", "p"), rows)},
    )


def cmd_walk2(config: ExperimentConfig) -> OutputRecord:
    """Joint grid, marginals, at-least-one array and summary for two walkers."""
    n = config.step_list[0]
    coin = parse_coin(config.coin)
    state = evolve_pair(initial_pair(config.initial_condition, n), coin, n)
    dist = joint_distribution(state)
    dist.check()
    m1 = obs.marginal(dist, 1)
    m2 = obs.marginal(dist, 2)
    alo = obs.at_least_one(dist)
    diag = obs.diagonal(dist)
    summary = obs.summarize(dist, n, config.initial_condition)
    if np.any(alo < -1e-12) or np.any(alo > 1 + 1e-12):
        raise InvariantViolation("at-least-one probabilities outside [0, 1]")
    if abs(alo.sum() - (2.0 - diag.sum())) > 1e-12:
        raise InvariantViolation("at-least-one sum rule violated")
    if not (-1e-9 <= summary.expected_distance <= 2 * n + 1e-9):
        raise InvariantViolation("expected distance outside [0, 2N]")
    if abs(summary.correlation) > n * n + 1e-9:
        raise InvariantViolation("correlation magnitude exceeds N^2")

    x = dist.positions
    p = dist.probabilities
    grid_rows = [[int(x[a]), int(x[b]), float(p[a, b])] for a in range(len(x)) for b in range(len(x))]
    marg_rows = [
        [int(x[k]), float(m1.probabilities[k]), float(m2.probabilities[k]), float(alo[k]), float(diag[k])]
        for k in range(len(x))
    ]
    s = summary
    return OutputRecord(
        command="walk2",
        config=config.echo(),
        results={
            "n_max": dist.n_max,
            "joint": p,
            "marginal1": m1.probabilities,
            "marginal2": m2.probabilities,
            "at_least_one": alo,
            "diagonal": diag,
            "summary": s.to_dict(),
        },
        tables={
            "joint": (("i", "j", "p"), grid_rows),
            "marginals": (("i", "p1", "p2", "at_least_one", "diagonal"), marg_rows),
            "summary": (
                ("initial", "N", "expected_distance", "correlation", "mean1", "mean2"),
                [[s.initial_condition, s.steps, s.expected_distance, s.correlation, s.mean1, s.mean2]],
            ),
        },
    )


def pair_series(
    labels: Sequence[str], steps_list: Sequence[int], coin: CoinOperator
) -> dict[tuple[str, int], obs.JointDistribution]:
    """Joint distributions for every (label, N), evolving each state incrementally."""
    steps_sorted = sorted(set(steps_list))
    n_max = steps_sorted[-1] if steps_sorted else 0
    out = {}
    for label in labels:
        state = initial_pair(label, n_max)
        done = 0
        for n in steps_sorted:
            state = evolve_pair(state, coin, n - done)
            done = n
            out[label, n] = joint_distribution(state)
    return out


def _statistic(which: str) -> Callable[[obs.JointDistribution], float]:
    if which == "distance":
        return obs.expected_distance
    if which == "correlation":
        return obs.correlation
    raise ConfigError(f"unknown table {which!r}; use distance or correlation")


def _round1(v: float) -> str:
    # Avoid printing "-0.0" for values that round to zero.
    return f"{round(v, 1) + 0.0:.1f}"


def compute_table(
    which: str, steps_list: Sequence[int], coin: CoinOperator | None = None
) -> dict[str, list[float]]:
    stat = _statistic(which)
    dists = pair_series(TABLE_ROWS, steps_list, coin or hadamard())
    return {label: [stat(dists[label, n]) for n in steps_list] for label in TABLE_ROWS}


def cmd_tables(
    which: str,
    steps_list: Sequence[int] = DEFAULT_TABLE_STEPS,
    config: ExperimentConfig | None = None,
) -> OutputRecord:
    """Distance or correlation table: rows minus/separable/plus, one column per N."""
    steps_list = list(steps_list)
    config = config or ExperimentConfig(steps=tuple(steps_list))
    values = compute_table(which, steps_list, parse_coin(config.coin))
    if which == "distance":
        for k, n in enumerate(steps_list):
            gap = (values["minus"][k] - values["separable"][k]) - (
                values["separable"][k] - values["plus"][k]
            )
            if abs(gap) > 1e-9:
                raise InvariantViolation(f"distance identity fails at N={n}: residual {gap:.3e}")
    else:
        worst = max((abs(v) for v in values["separable"]), default=0.0)
        if worst > 1e-10:
            raise InvariantViolation(f"separable correlation not zero: {worst:.3e}")
    rows = [[label, n, _round1(values[label][k])] for label in TABLE_ROWS for k, n in enumerate(steps_list)]
    echo = config.echo()
    echo["table"] = which
    return OutputRecord(
        command="tables",
        config=echo,
        results={"table": which, "steps": steps_list, "rows": values},
        tables={which: (("initial", "N", "value"), rows)},
    )


# --------------------------------------------------------------------------
# validation suite


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _within(name: str, residual: float, tol: float, detail: str = "") -> Check:
    return Check(name, float(residual), tol, bool(residual <= tol), detail)


def _walker_series(coin_amps, coin: CoinOperator, n_max: int) -> list[WalkerState]:
    states = [point_source(0, coin_amps, n_max)]
    for _ in range(n_max):
        states.append(step(states[-1], coin))
    return states


def _random_walker(rng: np.random.Generator, radius: int, n_max: int) -> WalkerState:
    amps = np.zeros((2 * n_max + 1, 2), dtype=np.complex128)
    block = rng.normal(size=(2 * radius + 1, 2)) + 1j * rng.normal(size=(2 * radius + 1, 2))
    amps[n_max - radius : n_max + radius + 1] = block / np.linalg.norm(block)
    return WalkerState(n_max, amps)


def _embed(d: Distribution1D, n_max: int) -> np.ndarray:
    out = np.zeros(2 * n_max + 1)
    out[n_max - d.n_max : n_max + d.n_max + 1] = d.probabilities
    return out


def zeroed_diagonal(dist: obs.JointDistribution) -> obs.JointDistribution:
    """Copy of ``dist`` with ``P(i, i)`` set to zero and the rest renormalized."""
    p = np.array(dist.probabilities)
    np.fill_diagonal(p, 0.0)
    return obs.JointDistribution(dist.n_max, p / p.sum())


def table_comparison(dists: dict, steps_list: Sequence[int]) -> list[dict[str, Any]]:
    """Compare computed table entries with the reference values.

    Each entry is evaluated twice: on the exact distribution and on the
    variant whose minus-state diagonal is forced to zero.
    """
    entries = []
    for which, ref, stat in (
        ("distance", REFERENCE_DISTANCE, obs.expected_distance),
        ("correlation", REFERENCE_CORRELATION, obs.correlation),
    ):
        for label in TABLE_ROWS:
            for n in steps_list:
                if n not in ref[label]:
                    continue
                d = dists[label, n]
                exact = stat(d)
                zeroed = stat(zeroed_diagonal(d)) if label == "minus" else exact
                r = ref[label][n]
                exact_ok = abs(exact - r) <= TABLE_ATOL
                zeroed_ok = abs(zeroed - r) <= TABLE_ATOL
                if exact_ok and zeroed_ok:
                    match = "both"
                elif exact_ok:
                    match = "exact"
                elif zeroed_ok:
                    match = "zeroed"
                else:
                    match = "neither"
                entries.append(
                    {
                        "table": which,
                        "initial": label,
                        "N": n,
                        "reference": r,
                        "exact": exact,
                        "zeroed_diagonal": zeroed,
                        "match": match,
                    }
                )
    return entries


def run_checks(max_steps: int = 12, table_max: int = 100) -> tuple[list[Check], dict[str, Any]]:
    """Run the invariant suite. Returns gating checks and non-gating reports."""
    H = hadamard()
    checks: list[Check] = []

    residual = float(np.max(np.abs(H.matrix.conj().T @ H.matrix - np.eye(2))))
    checks.append(_within("coin_unitarity", residual, 1e-12))

    # One step from |0,UP>: (|1,UP> + |-1,DOWN>)/sqrt(2).
    one = step(point_source(0, UP, 1), H)
    expect = np.zeros((3, 2), dtype=complex)
    expect[2, 0] = expect[0, 1] = 1 / math.sqrt(2)
    checks.append(_within("one_step_anchor", np.max(np.abs(one.amplitudes - expect)), 1e-15))

    ups = _walker_series(UP, H, table_max)
    downs = _walker_series(DOWN, H, table_max)
    p_up = [position_distribution(s) for s in ups]
    p_down = [position_distribution(s) for s in downs]

    mean_up, _ = distribution_stats(p_up[-1])
    checks.append(
        Check("drift_direction", -mean_up, 0.0, mean_up > 0, f"mean from |0,UP> at N={table_max}: {mean_up:.6f}")
    )

    rng = np.random.default_rng(20240611)
    per_step = 0.0
    total = 0.0
    for start in (ups[0], downs[0], _random_walker(rng, 5, 105)):
        s = start
        norm0 = s.norm()
        for _ in range(100):
            nxt = step(s, H)
            per_step = max(per_step, abs(nxt.norm() - s.norm()))
            s = nxt
        total = max(total, abs(s.norm() - norm0))
    checks.append(_within("unitarity_per_step", per_step, 1e-14))
    checks.append(_within("unitarity_100_steps", total, 1e-10))

    bad = 0
    for series in (ups, downs):
        for n, st in enumerate(series):
            x = st.positions
            forbidden = ((x + n) % 2 == 1) | (np.abs(x) > n)
            bad += int(np.count_nonzero(st.amplitudes[forbidden]))
    checks.append(_within("parity_support", bad, 0, "count of nonzero forbidden amplitudes"))

    mirror = max(
        float(np.max(np.abs(pu.probabilities - pd.probabilities[::-1])))
        for pu, pd in zip(p_up, p_down)
    )
    checks.append(_within("mirror_symmetry", mirror, 1e-12))

    if table_max >= 100:
        sd50 = distribution_stats(p_up[50])[1]
        sd100 = distribution_stats(p_up[100])[1]
        ratio = sd100 / sd50
        checks.append(
            Check("spreading_ratio", ratio, 0.0, 1.8 <= ratio <= 2.2, "quantum stddev(100)/stddev(50) in [1.8, 2.2]")
        )
        c_ratio = distribution_stats(classical_distribution(100))[1] / distribution_stats(
            classical_distribution(50)
        )[1]
        checks.append(_within("classical_ratio", abs(c_ratio - math.sqrt(2)), 1e-12))

    # Product form against the dense tensor.
    oracle = 0.0
    dense_norm = 0.0
    dense_parity = 0
    for label in ("separable", "plus", "minus", f"phase:{math.pi / 2!r}"):
        base = initial_pair(label, max_steps)
        dense = to_dense(base)
        x = np.arange(-max_steps, max_steps + 1)
        for n in range(max_steps + 1):
            if n:
                nxt = dense_step(dense, H)
                dense_norm = max(dense_norm, abs(nxt.norm() - dense.norm()))
                dense = nxt
            mask = ((x + n) % 2 == 1) | (np.abs(x) > n)
            dense_parity += int(np.count_nonzero(dense.amplitudes[mask]))
            dense_parity += int(np.count_nonzero(dense.amplitudes[:, :, mask]))
            product = joint_distribution(evolve_pair(base, H, n)).probabilities
            oracle = max(oracle, float(np.max(np.abs(product - joint_distribution(dense).probabilities))))
    checks.append(_within("oracle_equivalence", oracle, 1e-12, f"n <= {max_steps}"))
    checks.append(_within("dense_norm_per_step", dense_norm, 1e-14))
    checks.append(_within("dense_parity_support", dense_parity, 0))

    steps = list(range(1, table_max + 1))
    dists = pair_series(TABLE_ROWS, steps, H)
    fact = exch = marg = eq14 = bil = means = sumrule = sep_corr = norm_err = 0.0
    diag_report = []
    for n in steps:
        ds, dp, dm = dists["separable", n], dists["plus", n], dists["minus", n]
        nm = ds.n_max
        pd, pu = _embed(p_down[n], nm), _embed(p_up[n], nm)
        for d in (ds, dp, dm):
            p = d.probabilities
            norm_err = max(norm_err, abs(float(p.sum()) - 1.0), float(-min(p.min(), 0.0)))
            alo = obs.at_least_one(d)
            sumrule = max(sumrule, abs(float(alo.sum()) - (2.0 - float(obs.diagonal(d).sum()))))
        fact = max(fact, float(np.max(np.abs(ds.probabilities - np.outer(pd, pu)))))
        marg = max(
            marg,
            float(np.max(np.abs(obs.marginal(ds, 1).probabilities - pd))),
            float(np.max(np.abs(obs.marginal(ds, 2).probabilities - pu))),
        )
        for d in (dp, dm):
            exch = max(exch, float(np.max(np.abs(d.probabilities - d.probabilities.T))))
            for which in (1, 2):
                m = obs.marginal(d, which)
                marg = max(marg, float(np.max(np.abs(m.probabilities - 0.5 * (pd + pu)))))
                means = max(means, abs(distribution_stats(m)[0]))
        dist_s, dist_p, dist_m = (obs.expected_distance(d) for d in (ds, dp, dm))
        eq14 = max(eq14, abs((dist_m - dist_s) - (dist_s - dist_p)))
        mean_d = distribution_stats(p_down[n])[0]
        mean_u = distribution_stats(p_up[n])[0]
        bil = max(bil, abs(obs.correlation(dp) + obs.correlation(dm) - 2 * mean_d * mean_u))
        sep_corr = max(sep_corr, abs(obs.correlation(ds)))
        diag = obs.diagonal(dm)
        k = int(np.argmax(diag))
        diag_report.append(
            {
                "N": n,
                "max_diagonal": float(diag[k]),
                "at": int(k - nm) if diag[k] > 0 else None,
                "sum_diagonal": float(diag.sum()),
            }
        )

    checks += [
        _within("distribution_normalization", norm_err, 1e-10),
        _within("separable_factorization", fact, 1e-12),
        _within("exchange_symmetry", exch, 1e-12),
        _within("marginal_identity", marg, 1e-12),
        _within("distance_identity", eq14, 1e-9),
        _within("correlation_bilinearity", bil, 1e-9),
        _within("entangled_marginal_means", means, 1e-9),
        _within("at_least_one_sum_rule", sumrule, 1e-12),
        _within("separable_correlation_zero", sep_corr, 1e-10),
    ]

    if table_max >= 30:
        peaks = []
        for label in ("plus", "minus"):
            for which in (1, 2):
                m = obs.marginal(dists[label, 30], which)
                p = m.probabilities
                top = p.max()
                tied = m.positions[p == top]
                peak = int(min(tied, key=abs))
                ok = any(18 <= abs(int(t)) <= 22 for t in tied)
                peaks.append((label, which, peak, ok))
        checks.append(
            Check(
                "maxima_location",
                0.0,
                0.0,
                all(ok for *_, ok in peaks),
                "; ".join(f"{lab} marginal {w}: peak at {pk}" for lab, w, pk, _ in peaks),
            )
        )
        for site in (20, -20):
            vals = {lab: obs.at_least_one(dists[lab, 30])[site + table_max] for lab in TABLE_ROWS}
            ok = vals["minus"] > vals["separable"] > vals["plus"]
            checks.append(
                Check(
                    f"at_least_one_ordering_{site:+d}",
                    0.0,
                    0.0,
                    bool(ok),
                    f"N=30: minus {vals['minus']:.6f} > separable {vals['separable']:.6f} > plus {vals['plus']:.6f}",
                )
            )

    reports = {
        "diagonal_minus": diag_report,
        "tables": table_comparison(dists, [n for n in DEFAULT_TABLE_STEPS if n <= table_max]),
    }
    return checks, reports


def _format_report(checks: list[Check], reports: dict[str, Any]) -> str:
    failed = [c for c in checks if not c.passed]
    lines = [
        "entwalk validation report",
        f"checks: {len(checks) - len(failed)} passed, {len(failed)} failed",
        "",
    ]
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        line = f"{status}  {c.name:<{width}}  residual={c.residual:.3e}  tol={c.tolerance:.0e}"
        if c.detail:
            line += f"  ({c.detail})"
        lines.append(line)

    lines += ["", "meeting probability of the minus state, max_i P(i,i;N) (reported, not judged):"]
    for row in reports["diagonal_minus"]:
        lines.append(
            f"  N={row['N']:>3}  max={row['max_diagonal']:.17g}"
            + (f"  at i={row['at']:+d}" if row["at"] is not None else "")
            + f"  sum={row['sum_diagonal']:.17g}"
        )

    entries = reports["tables"]
    if entries:
        lines += ["", "table reproduction (tolerance +/-0.1; 'zeroed' = minus-state diagonal forced to 0):"]
        lines.append(f"  {'table':<12}{'initial':<10}{'N':>4}{'reference':>11}{'exact':>14}{'zeroed':>14}  match")
        for e in entries:
            lines.append(
                f"  {e['table']:<12}{e['initial']:<10}{e['N']:>4}{e['reference']:>11.1f}"
                f"{e['exact']:>14.4f}{e['zeroed_diagonal']:>14.4f}  {e['match']}"
            )
        for variant, accepted in (("exact", ("exact", "both")), ("zeroed", ("zeroed", "both"))):
            hits = sum(e["match"] in accepted for e in entries)
            lines.append(f"  {variant} variant matches {hits}/{len(entries)} entries")
        misses = [e for e in entries if e["match"] == "neither"]
        if misses:
            lines.append(
                "  entries matched by neither variant: "
                + ", ".join(f"{e['table']} {e['initial']} N={e['N']}" for e in misses)
            )
    return "\n".join(lines) + "\n"


def cmd_verify(max_steps: int = 12, table_max: int = 100) -> OutputRecord:
    if max_steps < 1:
        raise ConfigError("max_steps must be at least 1")
    if table_max < 1 or table_max > DEFAULT_STEP_CAP:
        raise ConfigError(f"table_max must be in [1, {DEFAULT_STEP_CAP}]")
    checks, reports = run_checks(max_steps, table_max)
    ok = all(c.passed for c in checks)
    results = {
        "passed": ok,
        "checks": [c.to_dict() for c in checks],
        "diagonal_minus": reports["diagonal_minus"],
        "tables": reports["tables"],
    }
    return OutputRecord(
        command="verify",
        config={"max_steps": max_steps, "table_max": table_max},
        results=results,
        text=_format_report(checks, reports),
        exit_code=0 if ok else 2,
    )


def _companion(path: Path, name: str) -> Path:
    return path.with_name(f"{path.stem}.{name}{path.suffix or '.csv'}")


def render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return dumps_json(record.command, record.config, record.results)
    if record.text is not None:
        return record.text
    header, rows = next(iter(record.tables.values()))
    return dumps_csv(header, rows)


def write_record(record: OutputRecord, fmt: str, out: str, stdout=None) -> list[Path]:
    """Write ``record`` to ``out`` (``"-"`` for ``stdout``). Returns files written.

    CSV output with a file destination also writes any secondary tables to
    ``<stem>.<name>.csv``. The validation report always pairs its text file
    with a ``.json`` twin.
    """
    stdout = stdout or sys.stdout
    written: list[Path] = []
    if out == "-":
        stdout.write(render(record, fmt))
        return written
    path = Path(out)
    path.write_text(render(record, fmt), encoding="utf-8")
    written.append(path)
    if record.text is not None:
        twin = path.with_suffix(".txt" if fmt == "json" else ".json")
        if twin == path:
            twin = path.with_name(path.name + ".json")
        twin.write_text(render(record, "csv" if fmt == "json" else "json"), encoding="utf-8")
        written.append(twin)
    elif fmt == "csv":
        for name, (header, rows) in list(record.tables.items())[1:]:
            extra = _companion(path, name)
            extra.write_text(dumps_csv(header, rows), encoding="utf-8")
            written.append(extra)
    return written
