"""Preference transforms: evaluation, signs, and the textual grammar."""

from __future__ import annotations

from fractions import Fraction

import pytest

from paretoscope import (
    Bundle,
    DimensionMismatch,
    InvalidAgent,
    OwnBundle,
    PartialOrderResult,
    RelativeToMean,
    RelativeToNeighborhood,
    Sign,
    ValidationError,
    WeightedOwn,
    ZeroReferencePoint,
    aggregate,
    alloc,
    compare_info,
    cross_effect_sign,
    evaluate_transform,
    parse_transform,
    transform_label,
    verify_own_monotonicity,
)


def test_own_bundle_scalar_for_one_commodity():
    assert evaluate_transform(OwnBundle(), alloc(2, 1), 1) == Fraction(2)


def test_own_bundle_vector_for_many_commodities():
    info = evaluate_transform(OwnBundle(), alloc((1, 0), (2, 1)), 2)
    assert isinstance(info, Bundle)
    assert info.quantities == (Fraction(2), Fraction(1))


def test_weighted_own_aggregates():
    a = alloc((1, 2), (0, 0))
    assert evaluate_transform(WeightedOwn((Fraction(2), Fraction(1))), a, 1) == Fraction(4)
    assert evaluate_transform(WeightedOwn(), a, 1) == Fraction(3)


def test_weights_must_be_strictly_positive():
    with pytest.raises(ValidationError):
        WeightedOwn((Fraction(0),))
    with pytest.raises(ValidationError):
        RelativeToMean((Fraction(1), Fraction(-1)))


def test_weight_dimension_checked_at_evaluation():
    with pytest.raises(DimensionMismatch):
        evaluate_transform(WeightedOwn((Fraction(1),)), alloc((1, 1), (1, 1)), 1)


def test_aggregate_unit_weights():
    assert aggregate(Bundle((1, 2, 3)), None) == Fraction(6)


def test_relative_mean_values():
    a = alloc(2, 1)
    assert evaluate_transform(RelativeToMean(), a, 1) == Fraction(4, 3)
    assert evaluate_transform(RelativeToMean(), a, 2) == Fraction(2, 3)


def test_relative_mean_zero_reference():
    with pytest.raises(ZeroReferencePoint) as exc:
        evaluate_transform(RelativeToMean(), alloc(0, 0), 1)
    assert exc.value.agent == 1


def test_relative_neighborhood_uses_declared_set_verbatim():
    a = alloc(2, 4)
    spec = RelativeToNeighborhood(frozenset({2}))
    assert evaluate_transform(spec, a, 1) == Fraction(1, 2)
    including_self = RelativeToNeighborhood(frozenset({1, 2}))
    assert evaluate_transform(including_self, a, 1) == Fraction(2, 3)


def test_relative_neighborhood_zero_reference():
    spec = RelativeToNeighborhood(frozenset({2}))
    with pytest.raises(ZeroReferencePoint):
        evaluate_transform(spec, alloc(2, 0), 1)


def test_relative_neighborhood_unknown_agent():
    spec = RelativeToNeighborhood(frozenset({3}))
    with pytest.raises(InvalidAgent):
        evaluate_transform(spec, alloc(1, 1), 1)


def test_evaluate_transform_agent_bounds():
    with pytest.raises(InvalidAgent):
        evaluate_transform(OwnBundle(), alloc(1, 1), 3)


def test_compare_info_shapes():
    assert (
        compare_info(Fraction(2), Fraction(1)) is PartialOrderResult.STRICTLY_GREATER
    )
    assert (
        compare_info(Bundle((1, 1)), Bundle((1, 1))) is PartialOrderResult.EQUAL
    )
    with pytest.raises(DimensionMismatch):
        compare_info(Fraction(1), Bundle((1,)))


def test_own_monotonicity_positive_for_builtins():
    a = alloc(1, 1)
    for spec in (OwnBundle(), WeightedOwn(), RelativeToMean()):
        report = verify_own_monotonicity(spec, a, 1)
        assert report.sign is Sign.POSITIVE
    nbhd = RelativeToNeighborhood(frozenset({2}))
    assert verify_own_monotonicity(nbhd, a, 1).sign is Sign.POSITIVE


def test_own_monotonicity_zero_when_reference_is_self():
    # the agent's own growth cancels out of a self-only reference ratio
    spec = RelativeToNeighborhood(frozenset({1}))
    report = verify_own_monotonicity(spec, alloc(1, 1), 1)
    assert report.sign is Sign.ZERO
    assert report.before == report.after == Fraction(1)


def test_own_monotonicity_vector_info():
    report = verify_own_monotonicity(OwnBundle(), alloc((1, 1), (0, 0)), 1)
    assert report.sign is Sign.POSITIVE
    assert report.after.quantities == (Fraction(2), Fraction(2))


def test_cross_effect_negative_under_relative_mean():
    report = cross_effect_sign(RelativeToMean(), alloc(1, 1), 2, 1)
    assert report.sign is Sign.NEGATIVE
    assert report.before == Fraction(1)
    assert report.after == Fraction(2, 3)


def test_cross_effect_zero_under_absolute_transforms():
    assert cross_effect_sign(OwnBundle(), alloc(1, 1), 2, 1).sign is Sign.ZERO
    assert cross_effect_sign(WeightedOwn(), alloc(1, 1), 2, 1).sign is Sign.ZERO


def test_cross_effect_requires_distinct_agents():
    with pytest.raises(ValidationError):
        cross_effect_sign(RelativeToMean(), alloc(1, 1), 1, 1)


def test_probe_deltas_must_be_positive():
    with pytest.raises(ValidationError):
        verify_own_monotonicity(OwnBundle(), alloc(1, 1), 1, 0)
    with pytest.raises(ValidationError):
        cross_effect_sign(RelativeToMean(), alloc(1, 1), 2, 1, 0)


def test_parse_transform_grammar():
    assert parse_transform("own") == OwnBundle()
    assert parse_transform("weighted_own(2,1)") == WeightedOwn(
        (Fraction(2), Fraction(1))
    )
    assert parse_transform("relative_mean") == RelativeToMean()
    assert parse_transform("relative_mean(1/2,1)") == RelativeToMean(
        (Fraction(1, 2), Fraction(1))
    )
    assert parse_transform("relative_nbhd(1,2)") == RelativeToNeighborhood(
        frozenset({1, 2})
    )
    assert parse_transform("relative_nbhd(2;3,1)") == RelativeToNeighborhood(
        frozenset({2}), (Fraction(3), Fraction(1))
    )


def test_parse_transform_errors():
    for bad in (
        "unknown",
        "own(1)",
        "weighted_own",
        "weighted_own()",
        "weighted_own(0)",
        "relative_nbhd",
        "relative_nbhd(0)",
        "relative_nbhd(x)",
        "relative_mean(1,)",
        "",
    ):
        with pytest.raises(ValidationError):
            parse_transform(bad)


def test_transform_label_round_trips():
    specs = (
        OwnBundle(),
        WeightedOwn((Fraction(1), Fraction(3))),
        RelativeToMean(),
        RelativeToMean((Fraction(1, 2),)),
        RelativeToNeighborhood(frozenset({1, 3})),
        RelativeToNeighborhood(frozenset({2}), (Fraction(2),)),
    )
    for spec in specs:
        assert parse_transform(transform_label(spec)) == spec
