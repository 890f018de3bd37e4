"""Preference sets, terminal dispositions, their consistency map, and supply effects.

Marks are three-valued (consistent / weak / inconsistent); no probabilities
are attached. The ranking over terminal states is ordinal: count of
consistent marks, then weak marks, then declaration order on ties.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from overhang.ledger import SupplyLedger, sats_to_btc


class DecisionError(ValueError):
    """Raised for malformed matrices or inconsistent inputs."""


class PreferenceSet(enum.Enum):
    IDEOLOGICAL_NON_INTERVENTION = "ideological-non-intervention"
    PRIVACY_ABOVE_ALL = "privacy-above-all"
    SATISFICING_HABIT = "satisficing-habit"
    KEY_LOSS_INCAPACITY = "key-loss-incapacity"
    GROUP_STALEMATE = "group-stalemate"
    MYTH_PRESERVATION = "myth-preservation"
    LEGAL_CAUTION = "legal-caution"
    ADVERSARIAL = "adversarial"
    PURE_WEALTH_MAX = "pure-wealth-max"


class TerminalStateKind(enum.Enum):
    DORMANCY_NON_RECOVERY = "dormancy-non-recovery"
    SILENT_BURN = "silent-burn"
    ADVERSARIAL_SWITCH = "adversarial-switch"
    PATIENT_LIQUIDATION = "patient-liquidation"


MAX_BURN_RETENTION = 0.05


@dataclass(frozen=True)
class TerminalState:
    kind: TerminalStateKind
    retention_fraction: float = 0.0

    def __post_init__(self) -> None:
        if self.kind is TerminalStateKind.SILENT_BURN:
            if not 0.0 <= self.retention_fraction <= MAX_BURN_RETENTION:
                raise DecisionError(
                    f"burn retention {self.retention_fraction} outside "
                    f"[0, {MAX_BURN_RETENTION}]"
                )
        elif self.retention_fraction != 0.0:
            raise DecisionError("retention applies only to silent burn")


class Mark(enum.Enum):
    CONSISTENT = "consistent"
    WEAK = "weak"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class ConsistencyMatrix:
    """Total map over (preference set, terminal state kind) pairs."""

    entries: Mapping[tuple[PreferenceSet, TerminalStateKind], Mark]

    def __post_init__(self) -> None:
        missing = [
            (p, t)
            for p in PreferenceSet
            for t in TerminalStateKind
            if (p, t) not in self.entries
        ]
        if missing:
            raise DecisionError(f"matrix not total; missing {missing[:3]}...")

    def mark(self, preference: PreferenceSet, state: TerminalStateKind) -> Mark:
        return self.entries[(preference, state)]


_DORMANCY_CONSISTENT = {
    PreferenceSet.IDEOLOGICAL_NON_INTERVENTION,
    PreferenceSet.PRIVACY_ABOVE_ALL,
    PreferenceSet.MYTH_PRESERVATION,
    PreferenceSet.SATISFICING_HABIT,
    PreferenceSet.KEY_LOSS_INCAPACITY,
    PreferenceSet.GROUP_STALEMATE,
    PreferenceSet.LEGAL_CAUTION,
}
_BURN_CONSISTENT = {
    PreferenceSet.IDEOLOGICAL_NON_INTERVENTION,
    PreferenceSet.MYTH_PRESERVATION,
}
_BURN_RETENTION_WEAK = {
    PreferenceSet.SATISFICING_HABIT,
    PreferenceSet.LEGAL_CAUTION,
}


def consistency_matrix(retention_variant: bool = False) -> ConsistencyMatrix:
    """The built-in preference-set x terminal-state consistency map.

    With retention_variant, the partial-burn variant earns weak marks from
    the satisficing and legal-caution preference sets.
    """
    entries: dict[tuple[PreferenceSet, TerminalStateKind], Mark] = {}
    for p in PreferenceSet:
        for t in TerminalStateKind:
            entries[(p, t)] = Mark.INCONSISTENT
    for p in _DORMANCY_CONSISTENT:
        entries[(p, TerminalStateKind.DORMANCY_NON_RECOVERY)] = Mark.CONSISTENT
    for p in _BURN_CONSISTENT:
        entries[(p, TerminalStateKind.SILENT_BURN)] = Mark.CONSISTENT
    if retention_variant:
        for p in _BURN_RETENTION_WEAK:
            entries[(p, TerminalStateKind.SILENT_BURN)] = Mark.WEAK
    # Weak rather than consistent: the record argues against both as dominant.
    entries[(PreferenceSet.ADVERSARIAL, TerminalStateKind.ADVERSARIAL_SWITCH)] = Mark.WEAK
    entries[(PreferenceSet.PURE_WEALTH_MAX, TerminalStateKind.PATIENT_LIQUIDATION)] = Mark.WEAK
    return ConsistencyMatrix(entries=entries)


def rank_terminal_states(matrix: ConsistencyMatrix) -> list[TerminalStateKind]:
    """Ordinal ranking by (consistent count, weak count), declaration-order ties."""
    declaration_order = list(TerminalStateKind)

    def key(state: TerminalStateKind) -> tuple[int, int, int]:
        marks = [matrix.mark(p, state) for p in PreferenceSet]
        consistent = sum(m is Mark.CONSISTENT for m in marks)
        weak = sum(m is Mark.WEAK for m in marks)
        return (-consistent, -weak, declaration_order.index(state))

    return sorted(declaration_order, key=key)


class MarketSign(enum.Enum):
    BULLISH = "bullish"
    NEUTRAL = "neutral"
    BEARISH = "bearish"


@dataclass(frozen=True)
class SupplyEffect:
    delta_effective_float: float  # BTC, signed
    market_sign: MarketSign
    bound: Optional[float] = None

    def __post_init__(self) -> None:
        if self.market_sign is MarketSign.BEARISH and self.bound is None:
            raise DecisionError("bearish supply effects must carry a bound")


def supply_effect(
    state: TerminalState, ledger: SupplyLedger, bear_bound: float
) -> SupplyEffect:
    """Effective-float delta and market sign of one terminal state.

    Dormancy and burn subtract the position (less any retention) from
    effective float; the adversarial switch and patient liquidation return
    it to float, bearish with the supplied bound.
    """
    position = ledger.position
    if position == 0:
        return SupplyEffect(0.0, MarketSign.NEUTRAL)
    if state.kind in (
        TerminalStateKind.DORMANCY_NON_RECOVERY,
        TerminalStateKind.SILENT_BURN,
    ):
        removed = position * (1.0 - state.retention_fraction)
        return SupplyEffect(-removed, MarketSign.BULLISH)
    return SupplyEffect(position, MarketSign.BEARISH, bound=bear_bound)


@dataclass(frozen=True)
class BearCaseReport:
    worst_case_state: TerminalStateKind
    worst_case_bound: tuple[float, float]
    ranking: tuple[TerminalStateKind, ...]
    ranked_signs: tuple[MarketSign, ...]
    bounded_downside: bool
    non_bearish_plurality: bool


def bear_case_summary(
    matrix: ConsistencyMatrix,
    ledger: SupplyLedger,
    scenario_results: Sequence,
) -> BearCaseReport:
    """Structured headline: worst-case bound plus signs of the top-ranked states.

    scenario_results are ScenarioResult values; the worst case is the widest
    total band among them, attached to patient liquidation.
    """
    if not scenario_results:
        raise DecisionError("scenario results required")
    worst = min(scenario_results, key=lambda r: r.total[0])
    bear_bound = worst.total[0]
    ranking = tuple(rank_terminal_states(matrix))
    signs = tuple(
        supply_effect(TerminalState(kind=k), ledger, bear_bound).market_sign
        for k in ranking
    )
    return BearCaseReport(
        worst_case_state=TerminalStateKind.PATIENT_LIQUIDATION,
        worst_case_bound=worst.total,
        ranking=ranking,
        ranked_signs=signs,
        bounded_downside=abs(bear_bound) <= 0.26,
        non_bearish_plurality=all(s is not MarketSign.BEARISH for s in signs[:2]),
    )
