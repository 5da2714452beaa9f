"""Per-level simulation of the post-selected interference measurements.

One interference round followed by the reference measurement multiplies the
mass of a level at angle ``theta`` by ``(1 - cos theta) / 2`` when the
recorded outcome is 1 and by ``(1 + cos theta) / 2`` when it is 0, up to
renormalization. Every observable in scope depends on an assignment only
through its level, so the full state collapses to one weight per level plus
the running log probability of the recorded outcomes.

For a sequence ``y`` with ``q`` ones out of ``m`` outcomes, the joint
probability has the closed form

    p(y) = sum_k g_k (1 - cos theta_k)^q (1 + cos theta_k)^(m-q) / (2^m N)

which depends on ``y`` only through ``(q, m)``; :func:`sequence_probability`
evaluates it directly, while :func:`run_sequence` reaches the same number by
folding :func:`step`. The two routes are kept separate on purpose so either
can check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoding import ANGLE_ATOL, ClassTable, PhaseHistogram
from .errors import ImpossibleOutcomeError, InvalidParameterError

_WEIGHT_SUM_ATOL = 1e-12


@dataclass(frozen=True)
class MeasurementSequence:
    """Chronological record of reference-measurement outcomes (1 = kept branch)."""

    outcomes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        outs = tuple(int(b) for b in self.outcomes)
        if any(b not in (0, 1) for b in outs):
            raise InvalidParameterError("outcomes must be 0/1 bits")
        object.__setattr__(self, "outcomes", outs)

    @classmethod
    def from_string(cls, text: str) -> "MeasurementSequence":
        s = text.strip()
        if any(ch not in "01" for ch in s):
            raise InvalidParameterError(f"sequence must be a string of 0/1 bits: {text!r}")
        return cls(tuple(int(ch) for ch in s))

    @classmethod
    def successes(cls, m: int) -> "MeasurementSequence":
        if m < 0:
            raise InvalidParameterError("sequence length must be nonnegative")
        return cls((1,) * m)

    @property
    def m(self) -> int:
        """Number of recorded outcomes."""
        return len(self.outcomes)

    @property
    def q(self) -> int:
        """Number of recorded ones."""
        return sum(self.outcomes)

    def appended(self, outcome: int) -> "MeasurementSequence":
        return MeasurementSequence(self.outcomes + (int(outcome),))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.outcomes)


@dataclass(frozen=True)
class ClassState:
    """Conditional level weights after a recorded sequence of outcomes."""

    histogram: PhaseHistogram
    weights: np.ndarray
    history: MeasurementSequence
    log_sequence_probability: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64).copy()
        if w.shape != (self.histogram.n_levels,):
            raise InvalidParameterError("one weight per histogram level required")
        if np.any(w < 0):
            raise InvalidParameterError("weights must be nonnegative")
        if abs(float(w.sum()) - 1.0) > _WEIGHT_SUM_ATOL:
            raise InvalidParameterError("weights must sum to 1")
        if np.any(w[self.histogram.counts == 0] != 0):
            raise InvalidParameterError("weights on empty levels must be 0")
        if self.log_sequence_probability > ANGLE_ATOL:
            raise InvalidParameterError("log probability must be nonpositive")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def probability(self) -> float:
        """Joint probability of the recorded history."""
        return math.exp(self.log_sequence_probability)


def initial_state(h: PhaseHistogram) -> ClassState:
    """Uniform state over the support, before any measurement."""
    return ClassState(h, h.counts / h.support, MeasurementSequence(), 0.0)


def _branch_factors(h: PhaseHistogram, outcome: int) -> np.ndarray:
    c = np.cos(h.thetas)
    return (1.0 - c) / 2.0 if outcome else (1.0 + c) / 2.0


def outcome_probability(state: ClassState, outcome: int) -> float:
    """Probability that the next reference measurement records ``outcome``."""
    if outcome not in (0, 1):
        raise InvalidParameterError("outcome must be 0 or 1")
    return float((state.weights * _branch_factors(state.histogram, outcome)).sum())


def success_probability(state: ClassState) -> float:
    """Probability that the next reference measurement records a 1."""
    return outcome_probability(state, 1)


def step(state: ClassState, outcome: int) -> tuple[ClassState, float]:
    """Condition the state on one more recorded outcome.

    Returns the new state and the branch probability of that outcome.
    """
    if outcome not in (0, 1):
        raise InvalidParameterError("outcome must be 0 or 1")
    raw = state.weights * _branch_factors(state.histogram, outcome)
    p = float(raw.sum())
    if p <= 0.0:
        raise ImpossibleOutcomeError(
            f"outcome {outcome} has probability 0 after '{state.history}'"
        )
    new = ClassState(
        state.histogram,
        raw / p,
        state.history.appended(outcome),
        state.log_sequence_probability + math.log(p),
    )
    return new, p


def run_sequence(h: PhaseHistogram, y: MeasurementSequence) -> tuple[ClassState, float]:
    """Fold :func:`step` over a whole sequence; returns the state and p(y)."""
    state = initial_state(h)
    for outcome in y.outcomes:
        state, _ = step(state, outcome)
    return state, state.probability


def success_run(h: PhaseHistogram, m: int) -> tuple[ClassState, float]:
    """Run an all-ones sequence of length ``m``."""
    return run_sequence(h, MeasurementSequence.successes(m))


def moment_sum(h: PhaseHistogram, q: int, r: int) -> float:
    """Support sum of (1 - cos theta)^q (1 + cos theta)^r, weighted by counts."""
    if q < 0 or r < 0:
        raise InvalidParameterError("moment orders must be nonnegative")
    c = np.cos(h.thetas)
    return float(np.sum(h.counts * (1.0 - c) ** q * (1.0 + c) ** r))


def sequence_probability(h: PhaseHistogram, y: MeasurementSequence) -> float:
    """Closed-form p(y); depends on the sequence only through (ones, length)."""
    q = y.q
    return moment_sum(h, q, y.m - q) / (2.0 ** y.m * h.support)


def tail_probability(state: ClassState, theta: float) -> float:
    """Conditional probability of the levels at angles >= theta."""
    mask = state.histogram.thetas >= theta - ANGLE_ATOL
    return float(state.weights[mask].sum())


def unconditional_tail_probability(state: ClassState, theta: float) -> float:
    """Joint probability of the recorded history and a level at >= theta."""
    return state.probability * tail_probability(state, theta)


def sample_assignment(
    state: ClassState,
    table: ClassTable,
    rng: np.random.Generator | int | None = None,
) -> int:
    """Draw a level per the state weights, then a uniform member of that level."""
    if table.n_levels != state.histogram.n_levels:
        raise InvalidParameterError("class table does not match the histogram levels")
    if table.includes_zero != state.histogram.includes_zero:
        raise InvalidParameterError("class table and histogram disagree on the support")
    if not np.array_equal(table.class_sizes(), state.histogram.counts):
        raise InvalidParameterError("class table counts do not match the histogram")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    cumulative = np.cumsum(state.weights)
    draw = gen.random() * cumulative[-1]
    level = min(int(np.searchsorted(cumulative, draw, side="right")), state.histogram.n_levels - 1)
    members = table.members(level)
    return int(members[gen.integers(members.size)])
