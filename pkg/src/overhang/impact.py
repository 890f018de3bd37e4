"""Constant-elasticity permanent impact, execution friction, and overshoot.

Permanent impact of returning a supply fraction s to the market under
demand elasticity e is (1 + s)^(-1/e) - 1. Execution friction is an
additive temporary band in percentage points, stepped by execution quality
and participation rate. A transient overshoot overlay decays exponentially
toward the mechanical total.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

# Heuristic elasticity sensitivity range; sweeps outside it need an override.
EPSILON_RANGE = (0.3, 1.5)

MAX_PARTICIPATION = 0.05


class ImpactError(ValueError):
    """Raised for out-of-domain impact-model inputs."""


@dataclass(frozen=True)
class ElasticityModel:
    """Demand elasticity: a 1% supply increase moves price ~ -1/epsilon %."""

    epsilon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.epsilon) or self.epsilon <= 0:
            raise ImpactError(f"elasticity must be finite and positive, got {self.epsilon}")


class ExecutionQuality(enum.Enum):
    DISCIPLINED_OTC = "disciplined-otc"
    MIXED = "mixed"
    PUBLIC_VENUE = "public-venue"


@dataclass(frozen=True)
class FrictionBand:
    """Temporary execution concession, in percentage points (low <= high)."""

    low: float
    high: float
    extrapolated: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.low <= self.high:
            raise ImpactError(f"invalid friction band ({self.low}, {self.high})")

    @property
    def midpoint(self) -> float:
        return (self.low + self.high) / 2


@dataclass(frozen=True)
class ImpactResult:
    """Permanent impact combined with a friction band, as signed fractions."""

    permanent: float
    friction: FrictionBand
    total_low: float
    total_high: float


@dataclass(frozen=True)
class OvershootParams:
    """Transient drawdown magnitude and exponential-decay half-life in days."""

    magnitude: float = 0.125
    half_life: float = 7.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.magnitude <= 1.0:
            raise ImpactError(f"overshoot magnitude {self.magnitude} outside [0, 1]")
        if self.half_life <= 0:
            raise ImpactError("overshoot half-life must be positive")


def permanent_impact(supply_shift: float, model: ElasticityModel) -> float:
    """Price change relative to counterfactual from a permanent supply shift."""
    if supply_shift < 0:
        raise ImpactError(f"supply shift must be nonnegative, got {supply_shift}")
    return (1.0 + supply_shift) ** (-1.0 / model.epsilon) - 1.0


def small_shift_approx(supply_shift: float, model: ElasticityModel) -> float:
    """First-order approximation -shift/epsilon, valid for small shifts."""
    if supply_shift < 0:
        raise ImpactError(f"supply shift must be nonnegative, got {supply_shift}")
    return -supply_shift / model.epsilon


def friction_band(quality: ExecutionQuality, participation: float) -> FrictionBand:
    """Step schedule of temporary friction by quality and participation rate.

    The public-venue band is an extrapolation beyond the calibrated OTC and
    mixed points, flagged as such.
    """
    if not 0.0 <= participation <= MAX_PARTICIPATION:
        raise ImpactError(
            f"participation {participation} outside [0, {MAX_PARTICIPATION}]"
        )
    if quality is ExecutionQuality.DISCIPLINED_OTC:
        if participation <= 0.0015:
            return FrictionBand(1.0, 2.0)
        return FrictionBand(2.0, 3.0)
    if quality is ExecutionQuality.MIXED:
        return FrictionBand(3.0, 5.0)
    return FrictionBand(5.0, 8.0, extrapolated=True)


def combine(permanent: float, friction: FrictionBand) -> ImpactResult:
    """Combine permanent impact and friction additively in percentage points."""
    if permanent > 0:
        raise ImpactError(f"permanent impact must be nonpositive, got {permanent}")
    return ImpactResult(
        permanent=permanent,
        friction=friction,
        total_low=permanent - friction.high / 100.0,
        total_high=permanent - friction.low / 100.0,
    )


def relative_impact_with_growth(
    supply_shift: float,
    model: ElasticityModel,
    growth_path: Iterable[float],
) -> float:
    """Terminal disposition-vs-counterfactual price ratio under demand growth.

    Evolves both price paths period by period under the constant-elasticity
    log-linear form; the result is invariant to the growth trajectory and
    equals permanent_impact for the same shift.
    """
    if supply_shift < 0:
        raise ImpactError(f"supply shift must be nonnegative, got {supply_shift}")
    inv_eps = 1.0 / model.epsilon
    counterfactual = 1.0
    disposition = (1.0 + supply_shift) ** (-inv_eps)
    for multiplier in growth_path:
        if multiplier <= 0:
            raise ImpactError(f"demand multiplier must be positive, got {multiplier}")
        counterfactual *= multiplier**inv_eps
        disposition *= multiplier**inv_eps
    return disposition / counterfactual - 1.0


def overshoot_path(
    mechanical_total: float,
    params: OvershootParams,
    horizon: int,
) -> Sequence[tuple[int, float]]:
    """Daily price multipliers: initial overshoot decaying to the mechanical level.

    Day 0 sits at (1 + total) * (1 - magnitude); the transient halves every
    half_life days and the path converges to 1 + total from below.
    """
    if horizon < 1:
        raise ImpactError("horizon must be at least one day")
    base = 1.0 + mechanical_total
    path = []
    for day in range(horizon + 1):
        transient = params.magnitude * 2.0 ** (-day / params.half_life)
        path.append((day, base * (1.0 - transient)))
    return path
