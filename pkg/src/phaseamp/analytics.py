"""Closed forms for the measurement dynamics.

Covers the flat-spectrum asymptotics (a continuum of angles filling (0, pi]),
the two-peak filter model, record-based landscape probes, and rigorous tail
and band bounds. Wherever the inputs are exact (integers, Fractions), the
arithmetic stays exact; float inputs give float outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np

from .encoding import ANGLE_ATOL, PhaseHistogram
from .errors import InvalidParameterError, NoAmplificationError

Number = Union[int, float, Fraction]


# ---------------------------------------------------------------------------
# Flat spectrum


def central_binomial_norm_exact(m: int) -> Fraction:
    """Exact 1 / C(2m, m): the normalization of the m-fold sine-power profile."""
    if m < 0:
        raise InvalidParameterError("m must be nonnegative")
    return Fraction(1, math.comb(2 * m, m))


def central_binomial_norm(m: int) -> float:
    return float(central_binomial_norm_exact(m))


def uniform_step_success_exact(m: int) -> Fraction:
    """Exact success probability of step m on a flat spectrum, (2m-1)/(2m)."""
    if m < 1:
        raise InvalidParameterError("steps are numbered from 1")
    return Fraction(2 * m - 1, 2 * m)


def uniform_step_success(m: int) -> float:
    return float(uniform_step_success_exact(m))


def uniform_run_probability_exact(total: int) -> Fraction:
    """Exact probability of an all-ones run on a flat spectrum, C(2M, M) / 4^M."""
    if total < 0:
        raise InvalidParameterError("run length must be nonnegative")
    return Fraction(math.comb(2 * total, total), 4**total)


class UniformRunProbability(NamedTuple):
    exact: float
    estimate: float


def uniform_run_probability(total: int) -> UniformRunProbability:
    """All-ones run probability on a flat spectrum, with its 1/sqrt(pi*M) estimate."""
    if total < 1:
        raise InvalidParameterError("run length must be at least 1")
    if total <= 100_000:
        exact = float(uniform_run_probability_exact(total))
    else:
        # The exact ratio has huge terms; evaluate it in log space instead.
        log_p = (
            math.lgamma(2 * total + 1)
            - 2 * math.lgamma(total + 1)
            - 2 * total * math.log(2.0)
        )
        exact = math.exp(log_p)
    return UniformRunProbability(exact, 1.0 / math.sqrt(math.pi * total))


def gaussian_tail_estimate(theta: float, total: int) -> float:
    """Gaussian-profile estimate of the conditional mass at angles >= theta
    after an all-ones run of length ``total`` on a flat spectrum."""
    if total < 1:
        raise InvalidParameterError("run length must be at least 1")
    if not (0.0 <= theta <= math.pi + ANGLE_ATOL):
        raise InvalidParameterError("theta must lie in [0, pi]")
    return math.erf(math.sqrt(total) * (math.pi - theta) / 2.0)


# ---------------------------------------------------------------------------
# Two-peak filter model


@dataclass(frozen=True)
class TwoPeakModel:
    """Spectrum with all mass at two angles, one below pi/2 and one above.

    ``q_u`` is the share of the support sitting at the upper angle; the lower
    share is derived so the two always sum to 1 exactly. ``a_l`` and ``a_u``
    are the per-step gains ``1 - cos(alpha)`` of the two peaks and keep the
    numeric type they were built with, so exact Fractions survive the filter
    algebra.
    """

    q_u: Number
    alpha_l: float
    alpha_u: float
    a_l: Number
    a_u: Number

    def __post_init__(self) -> None:
        if not 0 < self.q_u < 1:
            raise InvalidParameterError("q_u must be strictly between 0 and 1")
        if not 0.0 <= self.alpha_l < math.pi / 2 < self.alpha_u <= math.pi:
            raise InvalidParameterError(
                "peak angles must straddle pi/2 inside [0, pi]"
            )
        if not 0 <= self.a_l < 1 < self.a_u <= 2:
            raise InvalidParameterError("per-step gains must satisfy 0 <= a_l < 1 < a_u <= 2")
        for angle, gain in ((self.alpha_l, self.a_l), (self.alpha_u, self.a_u)):
            if abs((1.0 - math.cos(angle)) - float(gain)) > 1e-9:
                raise InvalidParameterError("angles and per-step gains disagree")

    @property
    def q_l(self) -> Number:
        return 1 - self.q_u

    @classmethod
    def from_angles(cls, q_u: Number, alpha_l: float, alpha_u: float) -> "TwoPeakModel":
        return cls(
            q_u,
            float(alpha_l),
            float(alpha_u),
            1.0 - math.cos(alpha_l),
            1.0 - math.cos(alpha_u),
        )

    @classmethod
    def from_gains(cls, q_u: Number, a_l: Number, a_u: Number) -> "TwoPeakModel":
        return cls(
            q_u,
            math.acos(1.0 - float(a_l)),
            math.acos(1.0 - float(a_u)),
            a_l,
            a_u,
        )


@dataclass(frozen=True)
class TwoPeakStats:
    """Filter outcome after a fixed number of all-ones measurements.

    ``run_probability_via_ratio`` evaluates the same probability through the
    mass ratio as a cross-check; it is None when the ratio is infinite.
    """

    measurements: int
    ratio: Number
    p_upper: Number
    run_probability: Number
    run_probability_via_ratio: Optional[Number]


def two_peak_stats(model: TwoPeakModel, measurements: int) -> TwoPeakStats:
    """Upper/lower mass ratio and run probability after all-ones measurements."""
    if measurements < 0:
        raise InvalidParameterError("measurement count must be nonnegative")
    upper = model.q_u * model.a_u**measurements
    lower = model.q_l * model.a_l**measurements
    run_probability = (lower + upper) / 2**measurements
    p_upper = upper / (upper + lower)
    if lower == 0:
        return TwoPeakStats(measurements, math.inf, p_upper, run_probability, None)
    ratio = upper / lower
    via_ratio = (model.a_l**measurements * model.q_l / 2**measurements) * (1 + ratio)
    return TwoPeakStats(measurements, ratio, p_upper, run_probability, via_ratio)


def two_peak_required_measurements(model: TwoPeakModel, target_ratio: Number) -> float:
    """All-ones measurements needed to push the mass ratio up to ``target_ratio``."""
    if target_ratio <= 0:
        raise InvalidParameterError("target ratio must be positive")
    if model.a_u <= model.a_l:
        raise NoAmplificationError("the upper peak does not outgain the lower one")
    if model.a_l == 0:
        raise NoAmplificationError(
            "the lower peak dies after one measurement; any count works"
        )
    start = float(target_ratio * model.q_l / model.q_u)
    gain = float(model.a_u) / float(model.a_l)
    return math.log2(start) / math.log2(gain)


# ---------------------------------------------------------------------------
# Record-based landscape probes


@dataclass(frozen=True)
class PeakWindow:
    """Where in the spectrum a recorded sequence concentrates its evidence.

    ``z_max`` is the cosine at which the sequence weight profile peaks,
    ``width`` the half-width of the surrounding cosine window, and
    ``interval`` the corresponding angles (low, high).
    """

    z_max: float
    width: float
    interval: tuple[float, float]
    estimate: Optional[float] = None


def peak_window(q: int, m: int) -> PeakWindow:
    """Cosine window a length-m sequence with q ones is most sensitive to."""
    if m < 1:
        raise InvalidParameterError("sequence length must be at least 1")
    if not 0 <= q <= m:
        raise InvalidParameterError("ones count must lie in [0, m]")
    z_max = (m - 2 * q) / m
    width = math.sqrt(8 * q * (m - q) / m**3)
    z_low = max(-1.0, z_max - width)
    z_high = min(1.0, z_max + width)
    return PeakWindow(z_max, width, (math.acos(z_high), math.acos(z_low)))


def estimate_mass_from_sequence(p_y: float, q: int, m: int) -> float:
    """Estimate the spectral mass inside the window of a recorded sequence.

    Divides the observed sequence probability by the profile's peak value
    (q/m)^q ((m-q)/m)^(m-q); the result is clamped to [0, 1].
    """
    if m < 1:
        raise InvalidParameterError("sequence length must be at least 1")
    if not 0 <= q <= m:
        raise InvalidParameterError("ones count must lie in [0, m]")
    if p_y < 0:
        raise InvalidParameterError("sequence probability must be nonnegative")
    peak = (q / m) ** q * ((m - q) / m) ** (m - q)
    return min(1.0, p_y / peak)


# ---------------------------------------------------------------------------
# Rigorous bounds


class TailBounds(NamedTuple):
    lower: float
    upper: float


def bound_from_success_run(p_run: float, m: int, theta_ref: float) -> TailBounds:
    """Two-sided bound on the mass at angles >= theta_ref from an all-ones run.

    Levels at or above ``theta_ref`` contribute a per-step factor of at least
    ``(1 - cos theta_ref) / 2`` and levels below at most that, which traps the
    tail mass between the two returned values.
    """
    if m < 1:
        raise InvalidParameterError("run length must be at least 1")
    if not 0.0 < theta_ref < math.pi:
        raise InvalidParameterError("reference angle must lie strictly inside (0, pi)")
    if not 0.0 <= p_run <= 1.0:
        raise InvalidParameterError("run probability must lie in [0, 1]")
    gain = (1.0 - math.cos(theta_ref)) ** m
    scaled = 2.0**m * p_run
    lower = max(0.0, (scaled - gain) / (2.0**m - gain))
    upper = min(1.0, scaled / gain)
    return TailBounds(lower, upper)


def band_bound(p_single_01: float, half_width: float) -> float:
    """Lower bound on the mass with |theta - pi/2| <= half_width from p(01).

    A level at angle theta contributes sin^2(theta)/4 to the probability of
    the two-outcome record 0 then 1, so a large p(01) forces mass near pi/2.
    """
    if not 0.0 < half_width < math.pi / 2:
        raise InvalidParameterError("band half-width must lie strictly inside (0, pi/2)")
    if p_single_01 < 0:
        raise InvalidParameterError("record probability must be nonnegative")
    cos_sq = math.cos(half_width) ** 2
    sin_sq = math.sin(half_width) ** 2
    return max(0.0, (4.0 * p_single_01 - cos_sq) / sin_sq)


# ---------------------------------------------------------------------------
# Amplified sampling vs direct sampling


@dataclass(frozen=True)
class SamplingComparison:
    """Tail hit rates of the two ways of hunting a high-scoring assignment.

    ``p_amplified`` is the joint probability that an all-ones run survives
    and lands in the tail; ``p_sampled`` is the probability that one direct
    draw from the support lands there. The amplified route never beats the
    direct draw on raw hit rate; what it buys is that surviving runs are
    concentrated in the tail.
    """

    p_amplified: float
    p_sampled: float

    @property
    def checks_saved(self) -> float:
        """Expected direct draws per surviving amplified run."""
        if self.p_amplified == 0.0:
            return math.inf if self.p_sampled > 0.0 else math.nan
        return self.p_sampled / self.p_amplified


def sampling_comparison(h: PhaseHistogram, theta: float, m: int) -> SamplingComparison:
    """Compare an m-step all-ones run against direct sampling for the tail at theta."""
    if m < 0:
        raise InvalidParameterError("run length must be nonnegative")
    mask = h.thetas >= theta - ANGLE_ATOL
    counts = h.counts[mask]
    cosines = np.cos(h.thetas[mask])
    support = h.support
    p_sampled = float(counts.sum() / support)
    p_amplified = float(np.sum(counts * ((1.0 - cosines) / 2.0) ** m) / support)
    return SamplingComparison(p_amplified, p_sampled)
