"""Exact solver for the grid-restricted game.

A double-oracle loop over an exact-rational LP. The Hider side is fully
enumerated (optionally folded to canonical strategies, each constraining
with its orbit-averaged payoff); the Searcher side is column-generated by
the best-response DP. Termination requires exact equality of the LP value
and the best-response value, after which both one-sided guarantees are
re-verified against every row.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bestresponse import TreePolicy, best_response_value, effective_budget
from .core import (
    GameConfig,
    HiderMixed,
    HiderPure,
    format_rational,
    parse_hider,
    parse_rational,
    relabelings,
)
from .enumeration import Grid, enumerate_grid_hiders

FORMAT_VERSION = "1"


class SolverError(Exception):
    """Internal inconsistency: a certificate or invariant failed."""


@dataclass
class PayoffMatrix:
    """Searcher win probabilities: rows are Hider strategies, cols policies."""

    rows: list[HiderPure]
    cols: list[str]
    entries: list[list[Fraction]]

    def __post_init__(self):
        if len(self.entries) != len(self.rows):
            raise ValueError("entry row count mismatch")
        for row in self.entries:
            if len(row) != len(self.cols):
                raise ValueError("entry column count mismatch")
            for e in row:
                if not 0 <= e <= 1:
                    raise ValueError("payoff outside [0,1]")


def _simplex_max(A, b, c):
    """Maximize c.x subject to A x <= b, x >= 0, with b >= 0.

    Dense tableau simplex with Bland's rule (smallest-index entering and
    leaving variables), which cannot cycle. Returns the solution vector and
    the dual values of the constraints.
    """
    m = len(A)
    n = len(c)
    zero = Fraction(0)
    tableau = [
        [Fraction(v) for v in A[i]]
        + [Fraction(1) if j == i else zero for j in range(m)]
        + [Fraction(b[i])]
        for i in range(m)
    ]
    obj = [-Fraction(v) for v in c] + [zero] * (m + 1)
    basis = [n + i for i in range(m)]
    width = n + m + 1
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best_ratio = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise SolverError("LP unbounded")
        pivot_row = tableau[leave]
        pivot = pivot_row[enter]
        if pivot != 1:
            for j in range(width):
                pivot_row[j] /= pivot
        for row in tableau:
            if row is pivot_row:
                continue
            factor = row[enter]
            if factor:
                for j in range(width):
                    if pivot_row[j]:
                        row[j] -= factor * pivot_row[j]
        factor = obj[enter]
        if factor:
            for j in range(width):
                if pivot_row[j]:
                    obj[j] -= factor * pivot_row[j]
        basis[leave] = enter
    x = [zero] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i][-1]
    duals = obj[n : n + m]
    return x, duals


def solve_matrix_game(matrix) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact minimax of a zero-sum matrix game.

    Rows minimize and columns maximize the entry (the Hider/Searcher
    orientation). Accepts a PayoffMatrix or a plain list of rows. Returns
    (value, row_mix, col_mix) with both guarantees checked exactly.
    """
    entries = matrix.entries if isinstance(matrix, PayoffMatrix) else matrix
    entries = [[Fraction(e) for e in row] for row in entries]
    if not entries or not entries[0]:
        raise ValueError("empty payoff matrix")
    n_rows = len(entries)
    n_cols = len(entries[0])
    if any(len(row) != n_cols for row in entries):
        raise ValueError("ragged payoff matrix")
    low = min(min(row) for row in entries)
    shift = Fraction(1) - low if low < 1 else Fraction(0)
    # Row player's LP, normalized: with u = q / v', minimizing v' is
    # maximizing sum(u) subject to every column's payoff <= 1.
    A = [[entries[i][j] + shift for i in range(n_rows)] for j in range(n_cols)]
    b = [Fraction(1)] * n_cols
    c = [Fraction(1)] * n_rows
    u, duals = _simplex_max(A, b, c)
    total = sum(u)
    if total <= 0:
        raise SolverError("degenerate LP solution")
    shifted_value = 1 / total
    value = shifted_value - shift
    row_mix = [ui * shifted_value for ui in u]
    col_mix = [d * shifted_value for d in duals]
    if sum(row_mix) != 1 or sum(col_mix) != 1:
        raise SolverError("strategy mix does not normalize")
    # Both exact guarantees, strong duality in game form.
    worst_col = max(
        sum(row_mix[i] * entries[i][j] for i in range(n_rows)) for j in range(n_cols)
    )
    worst_row = min(
        sum(col_mix[j] * entries[i][j] for j in range(n_cols)) for i in range(n_rows)
    )
    if worst_col != value or worst_row != value:
        raise SolverError("duality gap in matrix game solution")
    return value, row_mix, col_mix


@dataclass
class GameSolution:
    """Solved grid game with certified optimal mixes."""

    cfg: GameConfig
    grid: Grid
    value: Fraction
    hider_mix: HiderMixed
    searcher_mix: list[tuple[str, Fraction]]
    policies: dict[str, TreePolicy]
    iterations: int
    lp_values: list[Fraction]
    from_cache: bool = False


def _payoff_column(policy: TreePolicy, orbits, threads: int) -> list[Fraction]:
    """Orbit-averaged win probability of one policy against each row."""

    def against(orbit):
        wins = sum(1 for steps in orbit if policy.simulate(steps))
        return Fraction(wins, len(orbit))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(against, orbits))
    return [against(orbit) for orbit in orbits]


def solve_game(
    cfg: GameConfig,
    grid: Grid,
    *,
    reduce_symmetry: bool = True,
    threads: int = 1,
    max_iterations: int = 10_000,
) -> GameSolution:
    """Exact value of the game with the Hider restricted to the grid.

    Rows are all grid Hider strategies (canonical representatives with
    orbit-averaged payoffs when reduce_symmetry is on); columns start from
    the plain sweep policy and grow by best responses to the LP's optimal
    Hider mix. Exact equality of LP and best-response values terminates the
    loop, and the returned mixes are re-certified against every row.
    """
    cfg.require_standard_budget()
    rows = enumerate_grid_hiders(cfg, grid, reduce_symmetry=reduce_symmetry)
    canon = [hp for hp, _ in rows]
    if reduce_symmetry:
        orbit_members = [relabelings(hp) for hp in canon]
        for (_, weight), members in zip(rows, orbit_members):
            if weight != len(members):
                raise SolverError("orbit weight mismatch")
    else:
        orbit_members = [[hp] for hp in canon]
    orbits = [[m_hp.scaled(grid.m) for m_hp in members] for members in orbit_members]
    budget = effective_budget(cfg, grid)

    policies: list[TreePolicy] = [TreePolicy(cfg.n, grid.m, budget)]
    columns: list[list[Fraction]] = [_payoff_column(policies[0], orbits, threads)]
    seen_columns = {tuple(columns[0])}
    lp_values: list[Fraction] = []

    for iteration in range(1, max_iterations + 1):
        entries = [[col[i] for col in columns] for i in range(len(canon))]
        value, row_mix, col_mix = solve_matrix_game(entries)
        if lp_values and value < lp_values[-1]:
            raise SolverError("LP value decreased across iterations")
        lp_values.append(value)

        support = []
        for i, q in enumerate(row_mix):
            if q:
                share = q / len(orbit_members[i])
                support.extend((member, share) for member in orbit_members[i])
        mu = HiderMixed(tuple(support))
        br_value, br_policy = best_response_value(mu, cfg, grid)
        if br_value < value:
            raise SolverError("best response below LP value")
        if br_value == value:
            names = [f"P{j}" for j in range(len(policies))]
            searcher_mix = [(names[j], p) for j, p in enumerate(col_mix)]
            _certify(value, columns, col_mix)
            return GameSolution(
                cfg=cfg,
                grid=grid,
                value=value,
                hider_mix=mu,
                searcher_mix=searcher_mix,
                policies=dict(zip(names, policies)),
                iterations=iteration,
                lp_values=lp_values,
            )
        column = _payoff_column(br_policy, orbits, threads)
        key = tuple(column)
        if key in seen_columns:
            raise SolverError("improving column repeats an existing one")
        seen_columns.add(key)
        policies.append(br_policy)
        columns.append(column)
    raise SolverError(f"no convergence within {max_iterations} iterations")


def _certify(value: Fraction, columns, col_mix) -> None:
    """Searcher mix must achieve >= value against every row, tight somewhere."""
    n_rows = len(columns[0])
    worst = None
    for i in range(n_rows):
        wp = sum(p * col[i] for p, col in zip(col_mix, columns))
        if wp < value:
            raise SolverError("searcher mix fails a row at termination")
        if worst is None or wp < worst:
            worst = wp
    if worst != value:
        raise SolverError("searcher guarantee is not tight")


def solution_to_json_obj(sol: GameSolution) -> dict:
    return {
        "config": {
            "n": sol.cfg.n,
            "k": sol.cfg.k,
            "h": format_rational(sol.cfg.h),
        },
        "grid": {"m": sol.grid.m},
        "value": format_rational(sol.value),
        "hider_mix": [
            {"strategy": str(hp), "prob": format_rational(p)}
            for hp, p in sol.hider_mix.entries
        ],
        "searcher_policies": [
            {
                "id": name,
                "prob": format_rational(p),
                "policy": sol.policies[name].to_json_obj(),
            }
            for name, p in sol.searcher_mix
        ],
        "iterations": sol.iterations,
    }


def solution_from_json_obj(obj: dict) -> GameSolution:
    cfg = GameConfig(
        n=obj["config"]["n"],
        k=obj["config"]["k"],
        h=parse_rational(obj["config"]["h"]),
    )
    grid = Grid(obj["grid"]["m"])
    hider_mix = HiderMixed(
        tuple(
            (parse_hider(e["strategy"]), parse_rational(e["prob"]))
            for e in obj["hider_mix"]
        )
    )
    searcher_mix = []
    policies = {}
    for e in obj["searcher_policies"]:
        searcher_mix.append((e["id"], parse_rational(e["prob"])))
        policies[e["id"]] = TreePolicy.from_json_obj(e["policy"])
    return GameSolution(
        cfg=cfg,
        grid=grid,
        value=parse_rational(obj["value"]),
        hider_mix=hider_mix,
        searcher_mix=searcher_mix,
        policies=policies,
        iterations=obj["iterations"],
        lp_values=[],
        from_cache=True,
    )


def solution_to_json(sol: GameSolution) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(solution_to_json_obj(sol), sort_keys=True, separators=(",", ":")) + "\n"


def solution_csv_row(sol: GameSolution) -> str:
    return ",".join(
        [
            str(sol.cfg.n),
            str(sol.cfg.k),
            format_rational(sol.cfg.h),
            str(sol.grid.m),
            format_rational(sol.value),
        ]
    )


def _cache_key(cfg: GameConfig, grid: Grid) -> str:
    request = {
        "format": FORMAT_VERSION,
        "command": "solve",
        "n": cfg.n,
        "k": cfg.k,
        "h": format_rational(cfg.h),
        "m": grid.m,
    }
    canonical = json.dumps(request, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def solve_game_cached(
    cfg: GameConfig,
    grid: Grid,
    cache_dir: Path | str | None,
    *,
    threads: int = 1,
) -> GameSolution:
    """solve_game behind a content-addressed on-disk cache.

    Cache entries are the canonical solution JSON keyed by a hash of the
    request (format-versioned); a None cache_dir disables caching.
    """
    if cache_dir is None:
        return solve_game(cfg, grid, threads=threads)
    cache_dir = Path(cache_dir)
    path = cache_dir / f"{_cache_key(cfg, grid)}.json"
    if path.exists():
        return solution_from_json_obj(json.loads(path.read_text()))
    sol = solve_game(cfg, grid, threads=threads)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(solution_to_json(sol))
    tmp.replace(path)
    return sol
