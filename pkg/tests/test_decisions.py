import pytest

from overhang.decisions import (
    ConsistencyMatrix,
    DecisionError,
    Mark,
    MarketSign,
    PreferenceSet,
    SupplyEffect,
    TerminalState,
    TerminalStateKind,
    bear_case_summary,
    consistency_matrix,
    rank_terminal_states,
    supply_effect,
)
from overhang.ledger import SupplyLedger
from overhang.scenarios import builtin_scenarios, run_scenario

EXPECTED_ORDER = [
    TerminalStateKind.DORMANCY_NON_RECOVERY,
    TerminalStateKind.SILENT_BURN,
    TerminalStateKind.ADVERSARIAL_SWITCH,
    TerminalStateKind.PATIENT_LIQUIDATION,
]


@pytest.fixture
def ledger():
    return SupplyLedger.from_btc()


@pytest.fixture
def matrix():
    return consistency_matrix()


def test_matrix_is_total(matrix):
    assert len(matrix.entries) == len(PreferenceSet) * len(TerminalStateKind)


def test_key_marks(matrix):
    assert (
        matrix.mark(
            PreferenceSet.IDEOLOGICAL_NON_INTERVENTION,
            TerminalStateKind.DORMANCY_NON_RECOVERY,
        )
        is Mark.CONSISTENT
    )
    assert (
        matrix.mark(
            PreferenceSet.PURE_WEALTH_MAX, TerminalStateKind.DORMANCY_NON_RECOVERY
        )
        is Mark.INCONSISTENT
    )
    assert (
        matrix.mark(PreferenceSet.ADVERSARIAL, TerminalStateKind.ADVERSARIAL_SWITCH)
        is Mark.WEAK
    )
    assert (
        matrix.mark(PreferenceSet.PURE_WEALTH_MAX, TerminalStateKind.PATIENT_LIQUIDATION)
        is Mark.WEAK
    )


def test_group_stalemate_mirrors_key_loss(matrix):
    for kind in TerminalStateKind:
        assert matrix.mark(PreferenceSet.GROUP_STALEMATE, kind) is matrix.mark(
            PreferenceSet.KEY_LOSS_INCAPACITY, kind
        )


def test_retention_variant_adds_weak_marks():
    variant = consistency_matrix(retention_variant=True)
    assert (
        variant.mark(PreferenceSet.SATISFICING_HABIT, TerminalStateKind.SILENT_BURN)
        is Mark.WEAK
    )
    assert (
        variant.mark(PreferenceSet.LEGAL_CAUTION, TerminalStateKind.SILENT_BURN)
        is Mark.WEAK
    )


def test_ranking(matrix):
    assert rank_terminal_states(matrix) == EXPECTED_ORDER


def test_ranking_with_retention_variant():
    assert rank_terminal_states(consistency_matrix(retention_variant=True)) == EXPECTED_ORDER


def test_ranking_is_insertion_order_independent(matrix):
    reversed_entries = dict(reversed(list(matrix.entries.items())))
    assert rank_terminal_states(ConsistencyMatrix(reversed_entries)) == EXPECTED_ORDER


def test_all_equal_matrix_ties_break_by_declaration_order():
    flat = ConsistencyMatrix(
        {(p, t): Mark.WEAK for p in PreferenceSet for t in TerminalStateKind}
    )
    assert rank_terminal_states(flat) == list(TerminalStateKind)


def test_removing_burn_consistency_demotes_it(matrix):
    entries = dict(matrix.entries)
    for p in PreferenceSet:
        if entries[(p, TerminalStateKind.SILENT_BURN)] is Mark.CONSISTENT:
            entries[(p, TerminalStateKind.SILENT_BURN)] = Mark.INCONSISTENT
    ranking = rank_terminal_states(ConsistencyMatrix(entries))
    assert ranking.index(TerminalStateKind.SILENT_BURN) > ranking.index(
        TerminalStateKind.ADVERSARIAL_SWITCH
    )


def test_incomplete_matrix_rejected(matrix):
    entries = dict(matrix.entries)
    entries.pop((PreferenceSet.ADVERSARIAL, TerminalStateKind.SILENT_BURN))
    with pytest.raises(DecisionError):
        ConsistencyMatrix(entries)


def test_burn_retention_bounds():
    TerminalState(TerminalStateKind.SILENT_BURN, retention_fraction=0.01)
    with pytest.raises(DecisionError):
        TerminalState(TerminalStateKind.SILENT_BURN, retention_fraction=0.2)
    with pytest.raises(DecisionError):
        TerminalState(TerminalStateKind.DORMANCY_NON_RECOVERY, retention_fraction=0.01)


def test_supply_effect_burn_with_retention(ledger):
    state = TerminalState(TerminalStateKind.SILENT_BURN, retention_fraction=0.01)
    effect = supply_effect(state, ledger, bear_bound=-0.25)
    assert effect.delta_effective_float == pytest.approx(-1_136_520)
    assert effect.market_sign is MarketSign.BULLISH


def test_supply_effect_dormancy(ledger):
    effect = supply_effect(
        TerminalState(TerminalStateKind.DORMANCY_NON_RECOVERY), ledger, -0.25
    )
    assert effect.delta_effective_float == pytest.approx(-1.148e6)
    assert effect.market_sign is MarketSign.BULLISH
    assert effect.bound is None


def test_supply_effect_liquidation_is_bearish_with_bound(ledger):
    effect = supply_effect(
        TerminalState(TerminalStateKind.PATIENT_LIQUIDATION), ledger, -0.25
    )
    assert effect.market_sign is MarketSign.BEARISH
    assert effect.bound == pytest.approx(-0.25)
    assert effect.delta_effective_float == pytest.approx(1.148e6)


def test_supply_effect_conserves_position(ledger):
    for kind in TerminalStateKind:
        effect = supply_effect(TerminalState(kind), ledger, -0.25)
        assert abs(effect.delta_effective_float) <= ledger.position + 1e-9


def test_top_two_states_converge_on_supply_outcome(ledger, matrix):
    top_two = rank_terminal_states(matrix)[:2]
    retention = 0.01
    deltas = []
    for kind in top_two:
        r = retention if kind is TerminalStateKind.SILENT_BURN else 0.0
        deltas.append(
            supply_effect(TerminalState(kind, r), ledger, -0.25).delta_effective_float
        )
    assert abs(deltas[0] - deltas[1]) <= ledger.position * retention + 1e-9


def test_bearish_effect_requires_bound():
    with pytest.raises(DecisionError):
        SupplyEffect(1.0, MarketSign.BEARISH, bound=None)


def test_bear_case_summary(ledger, matrix):
    results = [run_scenario(s, ledger) for s in builtin_scenarios()]
    report = bear_case_summary(matrix, ledger, results)
    assert report.worst_case_state is TerminalStateKind.PATIENT_LIQUIDATION
    assert report.worst_case_bound[0] == pytest.approx(-0.25, abs=0.006)
    assert report.bounded_downside
    assert report.non_bearish_plurality
    assert all(s is not MarketSign.BEARISH for s in report.ranked_signs[:2])


def test_bear_case_summary_zero_position(matrix):
    ledger = SupplyLedger.from_btc(position=0)
    for kind in TerminalStateKind:
        effect = supply_effect(TerminalState(kind), ledger, -0.25)
        assert effect.delta_effective_float == 0.0
        assert effect.market_sign is MarketSign.NEUTRAL
