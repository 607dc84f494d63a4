"""Welfare functionals and rankings."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest

from paretoscope import (
    BoxGrid,
    DimensionMismatch,
    FixedTotalLattice,
    Maximin,
    Move,
    OwnBundle,
    Polity,
    Sum,
    SwfSpec,
    ValidationError,
    VectorValuedAgentInfo,
    WeightedOwn,
    WeightedSum,
    alloc,
    check_improvement_neoclassical,
    enumerate_feasible,
    parse_swf,
    simulate_discovery,
    swf_label,
    welfare_rank,
    welfare_value,
)


def test_welfare_value_sum():
    assert welfare_value(SwfSpec(Sum()), alloc(1, 1)) == Fraction(2)


def test_welfare_value_maximin():
    assert welfare_value(SwfSpec(Maximin()), alloc(0, 2)) == Fraction(0)


def test_welfare_value_weighted_sum_zero_margin():
    spec = SwfSpec(WeightedSum((Fraction(0), Fraction(1))))
    assert welfare_value(spec, alloc(2, 0)) == Fraction(0)


def test_weighted_sum_weights_not_all_zero():
    with pytest.raises(ValidationError, match="all zero"):
        WeightedSum((Fraction(0), Fraction(0)))


def test_weighted_sum_weight_count_must_match_agents():
    spec = SwfSpec(WeightedSum((Fraction(1),)))
    with pytest.raises(DimensionMismatch):
        welfare_value(spec, alloc(1, 1))


def test_vector_valued_agent_info_rejected():
    spec = SwfSpec(Sum(), agent_values=OwnBundle())
    with pytest.raises(VectorValuedAgentInfo):
        welfare_value(spec, alloc((1, 1), (2, 2)))


def test_custom_agent_values():
    spec = SwfSpec(Sum(), agent_values=WeightedOwn((Fraction(2), Fraction(1))))
    assert welfare_value(spec, alloc((1, 1), (0, 3))) == Fraction(6)


def test_maximin_rank_puts_even_split_first():
    states = list(enumerate_feasible(FixedTotalLattice.shared(2), Polity(2, 1)))
    ranking = welfare_rank(SwfSpec(Maximin()), states)
    assert ranking.entries[0].state.flat() == (Fraction(1), Fraction(1))
    assert ranking.entries[0].value == Fraction(1)
    assert not ranking.entries[0].tied
    assert {e.value for e in ranking.entries[1:]} == {Fraction(0)}
    assert all(e.tied for e in ranking.entries[1:])


def test_sum_rank_ties_whole_lattice():
    states = list(enumerate_feasible(FixedTotalLattice.shared(2), Polity(2, 1)))
    ranking = welfare_rank(SwfSpec(Sum()), states)
    assert all(e.value == Fraction(2) for e in ranking.entries)
    assert all(e.tied for e in ranking.entries)
    # stable: ties keep enumeration order
    assert [e.state_id for e in ranking.entries] == [0, 1, 2]


def test_weighted_sum_rank_dictates_by_weight():
    states = list(enumerate_feasible(FixedTotalLattice.shared(2), Polity(2, 1)))
    ranking = welfare_rank(SwfSpec(WeightedSum((Fraction(0), Fraction(1)))), states)
    assert ranking.entries[0].state.flat() == (Fraction(0), Fraction(2))


def test_values_non_increasing_down_the_ranking():
    states = list(enumerate_feasible(BoxGrid.shared([0, 1, 2]), Polity(2, 1)))
    for swf in (SwfSpec(Sum()), SwfSpec(Maximin())):
        ranking = welfare_rank(swf, states)
        values = [e.value for e in ranking.entries]
        assert values == sorted(values, reverse=True)
        assert [e.rank for e in ranking.entries] == list(range(1, len(states) + 1))


def test_dictatorship_by_weights():
    # weight 1 on one agent and 0 elsewhere hands that agent the argmax
    states = list(enumerate_feasible(FixedTotalLattice.shared(3), Polity(2, 1)))
    for dictator in (1, 2):
        weights = tuple(
            Fraction(1) if a == dictator else Fraction(0) for a in (1, 2)
        )
        ranking = welfare_rank(SwfSpec(WeightedSum(weights)), states)
        best = ranking.entries[0].state
        own = [s.bundle_for(dictator).quantities[0] for s in states]
        assert best.bundle_for(dictator).quantities[0] == max(own)


def test_sum_is_pareto_consistent_on_box_grid():
    states = list(enumerate_feasible(BoxGrid.shared([0, 1, 2]), Polity(2, 1)))
    swf = SwfSpec(Sum())
    for a, b in permutations(states, 2):
        if check_improvement_neoclassical(Move(a, b)).is_improvement:
            assert welfare_value(swf, b) > welfare_value(swf, a)


def test_maximin_constant_while_sum_grows_under_accumulation():
    run = simulate_discovery(alloc(1, 1), 1, 10)
    sums = [welfare_value(SwfSpec(Sum()), s) for s in run.trajectory]
    floors = [welfare_value(SwfSpec(Maximin()), s) for s in run.trajectory]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert set(floors) == {Fraction(1)}


def test_parse_swf_grammar():
    assert parse_swf("sum").combiner == Sum()
    assert parse_swf("maximin").combiner == Maximin()
    assert parse_swf("weighted_sum(0,1)").combiner == WeightedSum(
        (Fraction(0), Fraction(1))
    )
    for bad in ("product", "sum(1)", "maximin()", "weighted_sum", "weighted_sum(0,0)"):
        with pytest.raises(ValidationError):
            parse_swf(bad)


def test_swf_label_round_trips():
    for text in ("sum", "maximin", "weighted_sum(0,1)", "weighted_sum(1/2,3)"):
        assert swf_label(parse_swf(text)) == text
