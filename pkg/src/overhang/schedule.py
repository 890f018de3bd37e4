"""Participation-constrained uniform selldown schedules and tranche programs.

Pace arithmetic is kept exact: per-year and per-day BTC flows are rational
numbers over integer satoshis, so reconstructing the position from the pace
round-trips exactly. The market trades around the clock, hence the 365-day
year default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from overhang.ledger import SATS_PER_BTC, btc_to_sats, sats_to_btc
from overhang.mechanisms import TimelockCondition

DEFAULT_TRADING_DAYS = 365
DEFAULT_DAILY_VOLUME_USD = 15e9  # midpoint of the 10-20 billion real-spot range


class ScheduleError(ValueError):
    """Raised for invalid schedule parameters."""


@dataclass(frozen=True)
class ScheduleParams:
    position: float  # BTC
    horizon: float  # years
    trading_days_per_year: int = DEFAULT_TRADING_DAYS
    reference_daily_volume: float = DEFAULT_DAILY_VOLUME_USD
    price: float = 80_000.0

    def __post_init__(self) -> None:
        if self.position <= 0:
            raise ScheduleError("position must be positive")
        if self.horizon < 1:
            raise ScheduleError("horizon must be at least one year")
        if self.trading_days_per_year <= 0:
            raise ScheduleError("trading days per year must be positive")
        if self.reference_daily_volume <= 0 or self.price <= 0:
            raise ScheduleError("volume and price must be positive")


@dataclass(frozen=True)
class Schedule:
    """Uniform liquidation program; BTC flows are exact rationals."""

    position_sats: int
    horizon: float
    annual_btc: Fraction
    daily_btc: Fraction
    daily_usd: float
    participation: float


@dataclass(frozen=True)
class TrancheProgram:
    """Ordered timelocked tranches; amounts in satoshis sum to the position."""

    tranches: Sequence[tuple[TimelockCondition, int]] = field(default_factory=tuple)

    @property
    def total_sats(self) -> int:
        return sum(amount for _, amount in self.tranches)


def build_uniform_schedule(params: ScheduleParams) -> Schedule:
    """Spread the position evenly over the horizon at constant daily pace."""
    position_sats = btc_to_sats(params.position)
    horizon = Fraction(params.horizon)
    annual_btc = Fraction(position_sats, SATS_PER_BTC) / horizon
    daily_btc = annual_btc / params.trading_days_per_year
    daily_usd = float(daily_btc) * params.price
    return Schedule(
        position_sats=position_sats,
        horizon=params.horizon,
        annual_btc=annual_btc,
        daily_btc=daily_btc,
        daily_usd=daily_usd,
        participation=daily_usd / params.reference_daily_volume,
    )


def participation_check(
    schedule: Schedule, volume_range: tuple[float, float]
) -> tuple[float, float]:
    """Participation at the low and high ends of a daily-volume range."""
    low, high = volume_range
    if low <= 0 or high <= 0 or low > high:
        raise ScheduleError(f"invalid volume range ({low}, {high})")
    return schedule.daily_usd / low, schedule.daily_usd / high


def to_tranche_program(
    schedule: Schedule,
    granularity: int,
    start: int = 0,
    epochs_per_year: int = DEFAULT_TRADING_DAYS,
) -> TrancheProgram:
    """Split the schedule into evenly sized, strictly increasing timelocked tranches.

    granularity is tranches per year; unlock epochs are absolute, spaced
    epochs_per_year / granularity apart from `start`. Any satoshi remainder
    goes to the final tranche.
    """
    if granularity < 1:
        raise ScheduleError("granularity must be at least 1 tranche per year")
    n = max(1, round(schedule.horizon * granularity))
    base = schedule.position_sats // n
    spacing = Fraction(epochs_per_year, granularity)
    tranches = []
    for i in range(n):
        amount = base if i < n - 1 else schedule.position_sats - base * (n - 1)
        epoch = start + round(i * spacing)
        tranches.append((TimelockCondition.absolute(epoch), amount))
    return TrancheProgram(tranches=tuple(tranches))


def schedule_rows(schedule: Schedule) -> list[dict]:
    """One summary row for CSV/JSON emission."""
    return [
        {
            "position_btc": sats_to_btc(schedule.position_sats),
            "horizon_years": schedule.horizon,
            "annual_btc": float(schedule.annual_btc),
            "daily_btc": float(schedule.daily_btc),
            "daily_usd": schedule.daily_usd,
            "participation": schedule.participation,
        }
    ]
