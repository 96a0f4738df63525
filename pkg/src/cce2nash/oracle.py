"""Ground-truth machinery: exact game values, best responses, brute-force gaps.

Everything here exists to check the rest of the toolkit against an independent
computation.  The minimax value comes from a self-contained dense simplex (no
external solver), best responses from plain enumeration, and the gap reports
from direct sums over the joint distribution that deliberately avoid the
marginal-based formulas used in :mod:`cce2nash.equilibrium`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equilibrium import GapReport, JointDistribution
from .games import Game, MixedStrategy, Player

# Simplex feasibility/optimality tolerance; downstream consumers should test
# derived quantities at 1e-7 to absorb conditioning of the tableau arithmetic.
FEAS_TOL = 1e-9
_RATIO_TIE_TOL = 1e-12

MAX_VALUE_DIM = 200
MAX_BRUTE_DIM = 50


class SimplexLimitExceeded(RuntimeError):
    """The pivot budget ran out before the simplex reached optimality."""


@dataclass(frozen=True)
class ValueSolution:
    """Exact solution of a zero-sum game.

    ``value`` is the game value for the row player; ``row_strategy`` is a
    maximin strategy and ``col_strategy`` a minimax strategy, so the profile
    they form has exploitability ~0 (within LP arithmetic, ≤ 1e-7).
    """

    value: float
    row_strategy: MixedStrategy
    col_strategy: MixedStrategy


@dataclass(frozen=True)
class BestResponse:
    action: int
    value: float


@dataclass(frozen=True)
class BruteForceGaps:
    cce: GapReport
    nash_of_marginals: GapReport


def _simplex_max_ones(B: np.ndarray, max_pivots: int):
    """Maximize 1ᵀz subject to Bz ≤ 1, z ≥ 0, for entrywise-positive B.

    Dense tableau simplex with Bland's anti-cycling rule (lowest-index
    entering column, lowest-index basic variable among minimum-ratio rows).
    Returns the optimal ``z`` and the dual vector read off the slack columns
    of the objective row.
    """
    m, n = B.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = B
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = 1.0
    T[m, :n] = -1.0
    basis = list(range(n, n + m))

    for _ in range(max_pivots):
        reduced = T[m, : n + m]
        improving = np.nonzero(reduced < -FEAS_TOL)[0]
        if improving.size == 0:
            break
        j = int(improving[0])
        column = T[:m, j]
        eligible = np.nonzero(column > FEAS_TOL)[0]
        if eligible.size == 0:
            # Unreachable for positive B: every column bounds the objective.
            raise RuntimeError("unbounded LP; positive payoff shift should prevent this")
        ratios = T[eligible, -1] / column[eligible]
        tied = eligible[ratios <= ratios.min() + _RATIO_TIE_TOL]
        i = int(min(tied, key=lambda r: basis[r]))
        T[i, :] /= T[i, j]
        scale = T[:, j].copy()
        scale[i] = 0.0
        T -= np.outer(scale, T[i, :])
        basis[i] = j
    else:
        raise SimplexLimitExceeded(
            f"simplex did not converge within {max_pivots} pivots"
        )

    z = np.zeros(n)
    for row_idx, var in enumerate(basis):
        if var < n:
            z[var] = T[row_idx, -1]
    duals = T[m, n : n + m].copy()
    return z, duals


def exact_value(game: Game) -> ValueSolution:
    """Game value and maximin/minimax strategies via linear programming.

    The reduction is the textbook one.  Shift the payoffs positive,
    ``B = A + shift`` with ``shift = 1 − min(A)``, so the shifted value ``w``
    satisfies ``w ≥ 1 > 0``.  The column player wants ``y`` minimizing
    ``max_r (B y)_r``; substituting ``z = y / w`` turns that into the LP

        maximize Σz  subject to  B z ≤ 1,  z ≥ 0,

    whose optimum is ``Σz = 1/w``.  So ``w = 1 / Σz`` and ``y = z / Σz``.
    The dual of this LP is the row player's problem; its solution ``u``
    appears in the final objective row under the slack columns, and
    ``x = u / Σu`` is maximin.  Undoing the shift gives ``value = w − shift``.

    Raises:
        ValueError: if the game exceeds 200×200.
        SimplexLimitExceeded: if the pivot budget runs out (should not occur
            with Bland's rule).
    """
    rows, cols = game.shape
    if rows > MAX_VALUE_DIM or cols > MAX_VALUE_DIM:
        raise ValueError(
            f"game is {rows}x{cols}; exact_value handles at most "
            f"{MAX_VALUE_DIM}x{MAX_VALUE_DIM}"
        )
    payoff = game.payoff
    shift = 1.0 - float(payoff.min())
    z, duals = _simplex_max_ones(payoff + shift, max_pivots=100 * (rows + cols + 2))

    z = np.maximum(z, 0.0)
    duals = np.maximum(duals, 0.0)
    z_total = z.sum()
    return ValueSolution(
        value=1.0 / z_total - shift,
        row_strategy=MixedStrategy(duals / duals.sum()),
        col_strategy=MixedStrategy(z / z_total),
    )


def best_response(game: Game, player, opponent: MixedStrategy) -> BestResponse:
    """Best pure reply to ``opponent``, ties broken toward the lowest index."""
    player = Player(player)
    rows, cols = game.shape
    if player is Player.ROW:
        if len(opponent) != cols:
            raise ValueError(
                f"opponent strategy has {len(opponent)} entries but the column "
                f"player has {cols} actions"
            )
        utilities = game.payoff @ opponent.probs
    else:
        if len(opponent) != rows:
            raise ValueError(
                f"opponent strategy has {len(opponent)} entries but the row "
                f"player has {rows} actions"
            )
        utilities = -(opponent.probs @ game.payoff)
    action = int(np.argmax(utilities))
    return BestResponse(action=action, value=float(utilities[action]))


def brute_force_gaps(mu: JointDistribution, game: Game) -> BruteForceGaps:
    """Recompute both gap reports by direct sums over the joint distribution.

    Used in tests to cross-check the equilibrium module.  Every deviation
    value here is a literal double sum over all cells of ``mu`` (the joint
    route), whereas the equilibrium module evaluates deviations against the
    opponent's marginal; the two are equal by linearity, and comparing them
    exercises exactly that identity.
    """
    rows, cols = game.shape
    if rows > MAX_BRUTE_DIM or cols > MAX_BRUTE_DIM:
        raise ValueError(
            f"game is {rows}x{cols}; brute_force_gaps handles at most "
            f"{MAX_BRUTE_DIM}x{MAX_BRUTE_DIM}"
        )
    if mu.shape != game.shape:
        raise ValueError(
            f"joint distribution is {mu.rows}x{mu.cols} but game is {rows}x{cols}"
        )
    mass = mu.mass
    payoff = game.payoff

    # CCE report: u_row at deviation a is sum_{r,c} mass[r,c] * payoff[a,c].
    base_row = float((mass * payoff).sum())
    base_col = float((mass * -payoff).sum())
    row_devs = np.array([(mass * payoff[a, :]).sum() for a in range(rows)])
    col_devs = np.array([(mass * -payoff[:, b][:, None]).sum() for b in range(cols)])
    cce = GapReport(
        row_gain=float(row_devs.max() - base_row),
        col_gain=float(col_devs.max() - base_col),
        row_deviation=int(np.argmax(row_devs)),
        col_deviation=int(np.argmax(col_devs)),
    )

    # Nash report for the marginals, which are re-derived here on purpose.
    total = mass.sum()
    row_marg = mass.sum(axis=1) / total
    col_marg = mass.sum(axis=0) / total
    product = np.outer(row_marg, col_marg)
    nash_base_row = float((product * payoff).sum())
    nash_base_col = float((product * -payoff).sum())
    nash_row_devs = np.array([(col_marg * payoff[a, :]).sum() for a in range(rows)])
    nash_col_devs = np.array([(row_marg * -payoff[:, b]).sum() for b in range(cols)])
    nash = GapReport(
        row_gain=float(nash_row_devs.max() - nash_base_row),
        col_gain=float(nash_col_devs.max() - nash_base_col),
        row_deviation=int(np.argmax(nash_row_devs)),
        col_deviation=int(np.argmax(nash_col_devs)),
    )
    return BruteForceGaps(cce=cce, nash_of_marginals=nash)
