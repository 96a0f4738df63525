"""No-external-regret learners and the self-play driver.

Three update rules are provided: regret matching, regret matching+, and
multiplicative weights with a fixed-horizon step size.  Driving two of them
against each other with full-information feedback makes the time-averaged
joint play an empirical coarse-correlated equilibrium whose gap vanishes, and
therefore makes the averaged marginals an approximate Nash profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .equilibrium import (
    JointDistribution,
    cce_gap,
    expected_joint_utility,
    nash_gap,
)
from .games import Game, MixedStrategy, Player, StrategyProfile


class Algo(Enum):
    REGRET_MATCHING = "rm"
    REGRET_MATCHING_PLUS = "rmplus"
    MULTIPLICATIVE_WEIGHTS = "mw"


class Averaging(Enum):
    EXPECTED = "expected"
    SAMPLED = "sampled"


@dataclass(frozen=True, eq=False)
class LearnerState:
    """Bookkeeping for one no-external-regret learner.

    ``cumulative`` holds cumulative regrets for regret matching (+) and
    log-weights for multiplicative weights.  ``eta`` is the multiplicative
    weights step size, 0 for the other rules.
    """

    algo: Algo
    cumulative: np.ndarray
    t: int
    payoff_range: float
    eta: float

    @classmethod
    def fresh(cls, algo, num_actions: int, payoff_range: float, horizon: int) -> "LearnerState":
        """Zeroed state for a learner with ``num_actions`` actions.

        For multiplicative weights the step size is fixed from the planned
        horizon, ``eta = sqrt(8 ln k / horizon) / payoff_range``: the classic
        fixed-horizon tuning rescaled to payoffs spanning ``payoff_range``.
        """
        algo = Algo(algo)
        if num_actions < 1:
            raise ValueError("num_actions must be at least 1")
        if payoff_range < 0:
            raise ValueError("payoff_range must be nonnegative")
        if horizon < 1:
            raise ValueError("horizon must be at least 1")
        eta = 0.0
        if algo is Algo.MULTIPLICATIVE_WEIGHTS and num_actions > 1 and payoff_range > 0:
            eta = math.sqrt(8.0 * math.log(num_actions) / horizon) / payoff_range
        return cls(
            algo=algo,
            cumulative=np.zeros(num_actions),
            t=0,
            payoff_range=float(payoff_range),
            eta=eta,
        )


def next_strategy(state: LearnerState) -> MixedStrategy:
    """Current strategy implied by the learner's bookkeeping.

    Regret matching (+) normalizes the positive part of the cumulative regrets
    and falls back to uniform when none are positive; multiplicative weights
    takes the softmax of the log-weights.
    """
    if state.algo is Algo.MULTIPLICATIVE_WEIGHTS:
        shifted = state.cumulative - state.cumulative.max()  # overflow guard
        weights = np.exp(shifted)
        return MixedStrategy(weights / weights.sum())
    positive = np.maximum(state.cumulative, 0.0)
    total = positive.sum()
    if total <= 0.0:
        return MixedStrategy.uniform(len(state.cumulative))
    return MixedStrategy(positive / total)


def observe(state: LearnerState, action_utilities, played: MixedStrategy) -> LearnerState:
    """Fold one round of full-information feedback into the learner.

    ``action_utilities[a]`` is this player's expected utility for pure action
    ``a`` against the opponent's current strategy; ``played`` is the strategy
    the learner just used.  Returns the updated state; the input is unchanged.
    """
    utilities = np.asarray(action_utilities, dtype=float)
    k = state.cumulative.shape[0]
    if utilities.ndim != 1 or utilities.shape[0] != k:
        raise ValueError(f"expected {k} action utilities, got shape {utilities.shape}")
    if len(played) != k:
        raise ValueError(f"played strategy has length {len(played)}, expected {k}")
    if state.algo is Algo.MULTIPLICATIVE_WEIGHTS:
        cumulative = state.cumulative + state.eta * utilities
    else:
        realized = float(played.probs @ utilities)
        cumulative = state.cumulative + (utilities - realized)
        if state.algo is Algo.REGRET_MATCHING_PLUS:
            cumulative = np.maximum(cumulative, 0.0)
    return replace(state, cumulative=cumulative, t=state.t + 1)


@dataclass(frozen=True)
class Checkpoint:
    t: int
    cce_eps: float
    nash_eps: float
    avg_row_payoff: float


@dataclass(frozen=True, eq=False)
class SelfPlayResult:
    """Averaged play of one self-play run.

    ``avg_profile`` matches the marginals of ``empirical_joint`` to within
    accumulated float error, because both are averages of the same
    per-iteration play.
    """

    empirical_joint: JointDistribution
    avg_profile: StrategyProfile
    trajectory: tuple[Checkpoint, ...]


def _sample_index(rng: np.random.Generator, probs: np.ndarray) -> int:
    # One uniform draw mapped through the inverse CDF.
    u = rng.random()
    idx = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    return min(idx, len(probs) - 1)


def _snapshot(joint_acc, row_acc, col_acc):
    # Normalizing by the accumulated float totals (rather than by t) keeps the
    # averaged distributions summing to 1 within rounding even for long runs.
    joint = JointDistribution(joint_acc / joint_acc.sum())
    profile = StrategyProfile(
        row=MixedStrategy(row_acc / row_acc.sum()),
        col=MixedStrategy(col_acc / col_acc.sum()),
    )
    return joint, profile


def self_play(
    game: Game,
    algo,
    iters: int,
    seed: int = 0,
    averaging=Averaging.EXPECTED,
    log_every: int = 1000,
    col_algo=None,
) -> SelfPlayResult:
    """Run synchronized full-information self-play and average the joint play.

    Each round, every player observes the vector of expected payoffs of all
    its pure actions against the opponent's current mixed strategy.  With
    ``expected`` averaging, the empirical joint accumulates the outer product
    of the two current strategies; with ``sampled`` averaging, one pure
    profile per round is drawn from their product distribution (row draw
    first, then column, one uniform each from a PCG64 generator seeded with
    ``seed``) and a point mass is accumulated.  Results are deterministic
    given ``(algo, col_algo, iters, seed, averaging)``.

    Args:
        game: zero-sum game to play.
        algo: update rule, an :class:`Algo` or its string value.
        iters: number of rounds, at least 1.
        seed: 64-bit seed for the sampled-averaging generator.
        averaging: ``expected`` or ``sampled``.
        log_every: checkpoint spacing for the trajectory; the final round is
            always a checkpoint.
        col_algo: optional different update rule for the column player;
            defaults to ``algo`` for both.

    Returns:
        :class:`SelfPlayResult` with the averaged joint distribution, the
        averaged per-player strategies, and the checkpoint trajectory.
    """
    algo = Algo(algo)
    col_algo = algo if col_algo is None else Algo(col_algo)
    averaging = Averaging(averaging)
    if iters < 1:
        raise ValueError("iters must be at least 1")
    if log_every < 1:
        raise ValueError("log_every must be at least 1")

    payoff = game.payoff
    rows, cols = game.shape
    spread = game.payoff_range
    row_state = LearnerState.fresh(algo, rows, spread, iters)
    col_state = LearnerState.fresh(col_algo, cols, spread, iters)
    rng = np.random.default_rng(seed)

    joint_acc = np.zeros((rows, cols))
    row_acc = np.zeros(rows)
    col_acc = np.zeros(cols)
    trajectory = []

    for t in range(1, iters + 1):
        row_play = next_strategy(row_state)
        col_play = next_strategy(col_state)
        x = row_play.probs
        y = col_play.probs

        if averaging is Averaging.EXPECTED:
            joint_acc += np.outer(x, y)
            row_acc += x
            col_acc += y
        else:
            r = _sample_index(rng, x)
            c = _sample_index(rng, y)
            joint_acc[r, c] += 1.0
            row_acc[r] += 1.0
            col_acc[c] += 1.0

        row_state = observe(row_state, payoff @ y, row_play)
        col_state = observe(col_state, -(x @ payoff), col_play)

        if t % log_every == 0 or t == iters:
            joint, profile = _snapshot(joint_acc, row_acc, col_acc)
            trajectory.append(
                Checkpoint(
                    t=t,
                    cce_eps=cce_gap(joint, game).epsilon,
                    nash_eps=nash_gap(profile, game).epsilon,
                    avg_row_payoff=expected_joint_utility(joint, game, Player.ROW),
                )
            )

    joint, profile = _snapshot(joint_acc, row_acc, col_acc)
    return SelfPlayResult(
        empirical_joint=joint, avg_profile=profile, trajectory=tuple(trajectory)
    )


def trajectory_csv(trajectory) -> str:
    """Render checkpoints as CSV with full-precision decimals."""
    lines = ["t,cce_eps,nash_eps,avg_row_payoff"]
    for point in trajectory:
        lines.append(
            f"{point.t},{point.cce_eps:.17g},{point.nash_eps:.17g},"
            f"{point.avg_row_payoff:.17g}"
        )
    return "\n".join(lines) + "\n"
