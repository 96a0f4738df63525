"""Joint distributions over pure profiles, marginals, and equilibrium gap checks.

The central objects are a joint distribution ``mu`` over matrix cells and the
two gap notions attached to it: the coarse-correlated gap (how much a player
can gain by committing to a fixed deviation while the opponent keeps following
``mu``) and the Nash gap of a strategy profile (best-response improvement).
Both are computed by enumerating pure deviations, which suffices because the
expected utility is linear in each player's own strategy.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from pathlib import Path

import numpy as np

from .games import (
    PROB_SUM_TOL,
    FormatError,
    Game,
    MixedStrategy,
    Player,
    StrategyProfile,
    expected_utility,
    parse_matrix,
    write_text_atomic,
)

# Slack added to every inequality check on gaps; absorbs accumulated float
# error, which stays far below this at desk scale (<= 400 cells).
BOUND_TOL = 1e-9

# Distribution files are accepted when their mass sums to 1 within this bound;
# renormalization is refused, the file is rejected instead.
JOINT_FILE_SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """A single probability distribution over pure-strategy profiles (cells).

    Unlike a :class:`StrategyProfile`, the mass may correlate the players.
    """

    mass: np.ndarray
    sum_tol: InitVar[float] = PROB_SUM_TOL

    def __post_init__(self, sum_tol: float):
        arr = np.array(self.mass, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("mass must be a non-empty 2-D matrix")
        if not np.isfinite(arr).all():
            raise ValueError("mass entries must be finite")
        neg = np.argwhere(arr < 0)
        if neg.size:
            r, c = neg[0]
            raise ValueError(f"negative mass {arr[r, c]!r} at cell ({r}, {c})")
        total = float(arr.sum())
        if abs(total - 1.0) > sum_tol:
            raise ValueError(f"mass sums to {total!r}, expected 1 within {sum_tol}")
        arr.setflags(write=False)
        object.__setattr__(self, "mass", arr)

    @property
    def rows(self) -> int:
        return self.mass.shape[0]

    @property
    def cols(self) -> int:
        return self.mass.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.mass.shape

    def __eq__(self, other):
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return np.array_equal(self.mass, other.mass)

    @classmethod
    def product(cls, row: MixedStrategy, col: MixedStrategy) -> "JointDistribution":
        """Independent play: the outer product of two mixed strategies."""
        return cls(np.outer(row.probs, col.probs))

    @classmethod
    def point_mass(cls, rows: int, cols: int, cell: tuple[int, int]) -> "JointDistribution":
        r, c = cell
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"cell ({r}, {c}) out of range for a {rows}x{cols} distribution")
        mass = np.zeros((rows, cols))
        mass[r, c] = 1.0
        return cls(mass)


@dataclass(frozen=True)
class GapReport:
    """Best deviation gains per player and the equilibrium level they imply.

    ``row_gain``/``col_gain`` are the raw best pure-deviation gains and may be
    negative; ``epsilon`` clips them below at zero, since a negative best gain
    still certifies a 0-level equilibrium.  Ties among best deviations break
    toward the lowest action index, so reports are deterministic.
    """

    row_gain: float
    col_gain: float
    row_deviation: int
    col_deviation: int

    @property
    def epsilon(self) -> float:
        return max(0.0, self.row_gain, self.col_gain)


@dataclass(frozen=True)
class ValueConsistency:
    """Gap between the joint's expected payoff and its marginals' payoff."""

    lhs: float
    bound: float
    holds: bool


@dataclass(frozen=True)
class TwoEpsCheck:
    """Nash level of the marginal profile against twice the joint's CCE level."""

    cce_eps: float
    nash_eps: float
    holds: bool


def _check_shape(mu: JointDistribution, game: Game) -> None:
    if mu.shape != game.shape:
        raise ValueError(
            f"joint distribution is {mu.rows}x{mu.cols} but game is {game.rows}x{game.cols}"
        )


def marginal(mu: JointDistribution, player: Player) -> MixedStrategy:
    """Per-player strategy obtained by summing the joint mass over the opponent.

    The sums are normalized by the total mass so the result is always a valid
    probability vector even when the joint was loaded at the looser file
    tolerance.
    """
    axis = 1 if player is Player.ROW else 0
    sums = mu.mass.sum(axis=axis)
    return MixedStrategy(sums / sums.sum())


def marginal_profile(mu: JointDistribution) -> StrategyProfile:
    """Both players' marginal strategies as a profile."""
    return StrategyProfile(row=marginal(mu, Player.ROW), col=marginal(mu, Player.COL))


def expected_joint_utility(mu: JointDistribution, game: Game, player: Player) -> float:
    """Expected utility of ``player`` when the cell is drawn from ``mu``."""
    _check_shape(mu, game)
    value = float((mu.mass * game.payoff).sum())
    return value if player is Player.ROW else -value


def deviation_value(
    mu: JointDistribution, game: Game, player: Player, deviation: MixedStrategy
) -> float:
    """Expected utility of committing to ``deviation`` while the opponent follows ``mu``.

    In a two-player game the opponent's play under ``mu`` is fully described by
    their marginal, so this is evaluated as ``deviation`` against the opponent's
    marginal strategy; the direct cell-by-cell sum over ``mu`` agrees, which the
    test suite checks against an independent oracle.
    """
    _check_shape(mu, game)
    own_dim = game.rows if player is Player.ROW else game.cols
    if len(deviation) != own_dim:
        raise ValueError(f"deviation has length {len(deviation)}, expected {own_dim}")
    opp_marginal = marginal(mu, player.opponent)
    if player is Player.ROW:
        profile = StrategyProfile(row=deviation, col=opp_marginal)
    else:
        profile = StrategyProfile(row=opp_marginal, col=deviation)
    return expected_utility(game, player, profile)


def cce_gap(mu: JointDistribution, game: Game) -> GapReport:
    """Best fixed-deviation gains against ``mu`` for both players.

    Only pure deviations are enumerated: by linearity the best mixed deviation
    never beats the best pure one, so the maximum over all of them is attained
    at a pure strategy.
    """
    _check_shape(mu, game)
    payoff = game.payoff
    row_marg = marginal(mu, Player.ROW).probs
    col_marg = marginal(mu, Player.COL).probs
    base_row = float((mu.mass * payoff).sum())

    row_gains = payoff @ col_marg - base_row
    col_gains = -(row_marg @ payoff) + base_row
    row_best = int(np.argmax(row_gains))
    col_best = int(np.argmax(col_gains))
    return GapReport(
        row_gain=float(row_gains[row_best]),
        col_gain=float(col_gains[col_best]),
        row_deviation=row_best,
        col_deviation=col_best,
    )


def nash_gap(profile: StrategyProfile, game: Game) -> GapReport:
    """Best unilateral-deviation gains against a strategy profile.

    Pure best responses suffice by linearity; ``epsilon`` is zero exactly at a
    Nash equilibrium and measures exploitability otherwise.
    """
    if len(profile.row) != game.rows or len(profile.col) != game.cols:
        raise ValueError(
            f"profile has shape {len(profile.row)}x{len(profile.col)} "
            f"but game is {game.rows}x{game.cols}"
        )
    payoff = game.payoff
    base_row = expected_utility(game, Player.ROW, profile)
    row_gains = payoff @ profile.col.probs - base_row
    col_gains = -(profile.row.probs @ payoff) + base_row
    row_best = int(np.argmax(row_gains))
    col_best = int(np.argmax(col_gains))
    return GapReport(
        row_gain=float(row_gains[row_best]),
        col_gain=float(col_gains[col_best]),
        row_deviation=row_best,
        col_deviation=col_best,
    )


def value_consistency_check(
    mu: JointDistribution, game: Game, tol: float = BOUND_TOL
) -> ValueConsistency:
    """Check that the joint's expected payoff stays within its CCE level of the
    marginal profile's payoff.

    Only the row player is evaluated: the game is zero-sum, so the column
    player's absolute gap is the same number (negation of a negation), an
    identity the test suite asserts separately.
    """
    _check_shape(mu, game)
    joint_value = expected_joint_utility(mu, game, Player.ROW)
    marginal_value = expected_utility(game, Player.ROW, marginal_profile(mu))
    lhs = abs(joint_value - marginal_value)
    bound = cce_gap(mu, game).epsilon
    return ValueConsistency(lhs=lhs, bound=bound, holds=bool(lhs <= bound + tol))


def two_eps_check(mu: JointDistribution, game: Game, tol: float = BOUND_TOL) -> TwoEpsCheck:
    """Check that the marginal profile's Nash level is at most twice the joint's
    CCE level."""
    _check_shape(mu, game)
    cce_eps = cce_gap(mu, game).epsilon
    nash_eps = nash_gap(marginal_profile(mu), game).epsilon
    return TwoEpsCheck(
        cce_eps=cce_eps, nash_eps=nash_eps, holds=bool(nash_eps <= 2.0 * cce_eps + tol)
    )


# ---------------------------------------------------------------------------
# Joint-distribution text format: same layout and comment rules as the game
# format, with nonnegative decimals summing to 1.

def parse_joint(text: str) -> JointDistribution:
    """Parse a joint distribution, rejecting rather than renormalizing bad mass."""
    mass = parse_matrix(text, what="joint distribution")
    neg = np.argwhere(mass < 0)
    if neg.size:
        r, c = neg[0]
        raise FormatError(f"negative mass {mass[r, c]!r} at cell ({r}, {c})")
    total = float(mass.sum())
    if abs(total - 1.0) > JOINT_FILE_SUM_TOL:
        raise FormatError(
            f"mass sums to {total!r}, expected 1 within {JOINT_FILE_SUM_TOL} "
            "(refusing to renormalize)"
        )
    return JointDistribution(mass, sum_tol=JOINT_FILE_SUM_TOL)


def format_joint(mu: JointDistribution) -> str:
    lines = [f"{mu.rows} {mu.cols}"]
    for row in mu.mass:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def load_joint(path) -> JointDistribution:
    return parse_joint(Path(path).read_text(encoding="utf-8"))


def save_joint(mu: JointDistribution, path) -> None:
    write_text_atomic(path, format_joint(mu))
