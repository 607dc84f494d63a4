"""Acceptance suite: one test per shipped criterion, with time budgets.

Each test exercises its criterion exactly as stated (exact arithmetic,
tolerance zero) and enforces the stated wall-clock budget.  Expected values
were frozen from an independent brute-force oracle written before the
engine.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import permutations
from pathlib import Path

import pytest

from paretoscope import (
    BoxGrid,
    FixedTotalLattice,
    HypothesisViolated,
    Maximin,
    Move,
    OwnBundle,
    Polity,
    RelativeToMean,
    RelativeToNeighborhood,
    Sign,
    Sum,
    SwfSpec,
    WeightedOwn,
    WeightedSum,
    ZeroReferencePoint,
    alloc,
    check_improvement,
    check_improvement_neoclassical,
    check_improvement_ratio_form,
    classify_move_agents,
    cross_effect_sign,
    enumerate_feasible,
    is_pareto_efficient,
    scan_all_moves,
    simulate_discovery,
    welfare_rank,
    welfare_value,
)
from paretoscope.cli import main

DATA = Path(__file__).parent / "data"


class _Budget:
    """Context manager asserting a wall-clock budget and reporting the time."""

    def __init__(self, name: str, seconds: float):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            print(f"{self.name}: PASS ({elapsed:.3f}s, budget {self.seconds}s)")
            assert elapsed < self.seconds, (
                f"{self.name} exceeded its {self.seconds}s budget: {elapsed:.3f}s"
            )
        return False


def test_criterion_1_efficiency_equals_no_improving_move():
    """A state is efficient exactly when the exhaustive scan finds no
    improving move from it, for every built-in transform family, on
    BoxGrid({0,1,2}) with 2 agents and 1 commodity."""
    fs = BoxGrid.shared([0, 1, 2])
    polity = Polity(2, 1)
    families = (
        OwnBundle(),
        WeightedOwn((Fraction(2),)),
        RelativeToMean(),
        {
            1: RelativeToNeighborhood(frozenset({2})),
            2: RelativeToNeighborhood(frozenset({1})),
        },
    )
    with _Budget("criterion 1 (duality, 4 transform families, 9 states)", 1.0):
        for transforms in families:
            report = scan_all_moves(fs, polity, transforms)
            assert report.states_examined == 9
            improvable = {i for i, _ in report.improving_moves}
            degenerate = 0
            for idx, state in enumerate(enumerate_feasible(fs, polity)):
                try:
                    verdict = is_pareto_efficient(state, fs, transforms)
                except ZeroReferencePoint:
                    # both routes must flag the same states as unjudgeable
                    degenerate += 1
                    assert idx not in improvable
                    continue
                assert verdict.is_efficient == (idx not in improvable)
            assert degenerate == report.degenerate_states


def test_criterion_2_ratio_form_equals_definitional():
    """The ratio-sign test and the definitional check return identical
    verdicts on every hypothesis-satisfying move: exhaustively on
    BoxGrid({0,1,2}) x 2 agents, and on 10,000 seeded random moves over
    BoxGrid({0..5}) x 3 agents, under own-bundle and relative-to-mean."""
    transforms = (OwnBundle(), RelativeToMean())

    def agree_or_jointly_fail(move, spec):
        if not classify_move_agents(move).gainers:
            with pytest.raises(HypothesisViolated):
                check_improvement_ratio_form(move, spec)
            return 0
        try:
            definitional = check_improvement(move, spec)
        except ZeroReferencePoint:
            with pytest.raises(ZeroReferencePoint):
                check_improvement_ratio_form(move, spec)
            return 0
        ratio = check_improvement_ratio_form(move, spec)
        assert ratio.is_improvement == definitional.is_improvement
        assert ratio.strict_gainers == definitional.strict_gainers
        assert ratio.violators == definitional.violators
        return 1

    with _Budget("criterion 2 (ratio-form equivalence, 72 + 10000 moves)", 5.0):
        small = list(enumerate_feasible(BoxGrid.shared([0, 1, 2]), Polity(2, 1)))
        checked = 0
        for a, b in permutations(small, 2):
            for spec in transforms:
                checked += agree_or_jointly_fail(Move(a, b), spec)
        assert checked > 0

        big = list(enumerate_feasible(BoxGrid.shared(range(6)), Polity(3, 1)))
        assert len(big) == 216
        rng = random.Random(20260819)
        satisfied = 0
        for _ in range(10_000):
            i = rng.randrange(len(big))
            j = rng.randrange(len(big) - 1)
            if j >= i:
                j += 1
            move = Move(big[i], big[j])
            for spec in transforms:
                satisfied += agree_or_jointly_fail(move, spec)
        assert satisfied > 1000


def test_criterion_3_neoclassical_specialization():
    """With own-bundle transforms the generalized checker reproduces the
    neoclassical checker on all 72 ordered moves of BoxGrid({0,1,2}) x 2."""
    states = list(enumerate_feasible(BoxGrid.shared([0, 1, 2]), Polity(2, 1)))
    moves = [Move(a, b) for a, b in permutations(states, 2)]
    assert len(moves) == 72
    with _Budget("criterion 3 (neoclassical specialization, 72 moves)", 1.0):
        for move in moves:
            general = check_improvement(move, OwnBundle())
            special = check_improvement_neoclassical(move)
            assert general.is_improvement == special.is_improvement
            assert general.strict_gainers == special.strict_gainers
            assert general.violators == special.violators


def test_criterion_4_accumulation_run():
    """Ten windfall steps from (1,1): every step a classical improvement,
    every intermediate state efficient among redistributions of its own
    totals, and the gap series exactly 0..10."""
    with _Budget("criterion 4 (accumulation, T=10)", 2.0):
        run = simulate_discovery(alloc(1, 1), beneficiary=1, steps=10, increment=1)
        assert len(run.trajectory) == 11
        assert len(run.step_verdicts) == 10
        assert all(v.is_improvement for v in run.step_verdicts)
        assert all(v.is_efficient for v in run.efficiency_verdicts)
        assert run.gap_series == tuple(Fraction(t) for t in range(11))


def test_criterion_5_relative_mean_freezes_every_state():
    """Under relative-to-mean the all-moves scan finds zero improvements,
    so every state counts as efficient, on BoxGrid({1,2,3}) x 2 (72 moves)
    and BoxGrid({1,2}) x 3 (56 moves)."""
    with _Budget("criterion 5 (zero-improvement scans)", 1.0):
        pair = scan_all_moves(BoxGrid.shared([1, 2, 3]), Polity(2, 1), RelativeToMean())
        assert pair.moves_examined == 72
        assert pair.improvements_found == 0
        assert pair.efficient_state_count == pair.states_examined == 9
        trio = scan_all_moves(BoxGrid.shared([1, 2]), Polity(3, 1), RelativeToMean())
        assert trio.moves_examined == 56
        assert trio.improvements_found == 0
        assert trio.efficient_state_count == trio.states_examined == 8


def test_criterion_6_cross_effect_strictly_negative():
    """One agent's gain strictly lowers every other agent's relative
    standing, at every state of BoxGrid({1,2,3}) x 2."""
    fs = BoxGrid.shared([1, 2, 3])
    polity = Polity(2, 1)
    with _Budget("criterion 6 (cross-effect signs, 9 states x 2 pairs)", 1.0):
        states = list(enumerate_feasible(fs, polity))
        assert len(states) == 9
        for state in states:
            for observer, gainer in ((1, 2), (2, 1)):
                report = cross_effect_sign(RelativeToMean(), state, observer, gainer)
                assert report.sign is Sign.NEGATIVE


def test_criterion_7_welfare_contrasts():
    """Maximin prefers the even split on the fixed-total lattice; along the
    accumulation run the sum rises strictly while maximin stays flat; a
    weighted sum with weight only on agent 2 puts (0,2) first."""
    with _Budget("criterion 7 (welfare contrasts)", 1.0):
        states = list(enumerate_feasible(FixedTotalLattice.shared(2), Polity(2, 1)))
        maximin = welfare_rank(SwfSpec(Maximin()), states)
        positions = {e.state.flat(): e.rank for e in maximin.entries}
        even = positions[(Fraction(1), Fraction(1))]
        assert even < positions[(Fraction(0), Fraction(2))]
        assert even < positions[(Fraction(2), Fraction(0))]

        run = simulate_discovery(alloc(1, 1), 1, 10)
        sums = [welfare_value(SwfSpec(Sum()), s) for s in run.trajectory]
        floors = [welfare_value(SwfSpec(Maximin()), s) for s in run.trajectory]
        assert all(b > a for a, b in zip(sums, sums[1:]))
        assert len(set(floors)) == 1

        weighted = welfare_rank(
            SwfSpec(WeightedSum((Fraction(0), Fraction(1)))), states
        )
        assert weighted.entries[0].state.flat() == (Fraction(0), Fraction(2))


def test_criterion_8_parallel_scan_is_byte_identical(tmp_path):
    """`scan --parallel 4` and `--parallel 1` emit byte-identical CSV on the
    criterion-5 scenarios, across repeated runs."""
    with _Budget("criterion 8 (parallel determinism)", 2.0):
        for scenario in ("relmean_pair", "relmean_trio"):
            outputs = []
            for workers in ("1", "4", "1", "4"):
                out = tmp_path / f"{scenario}-{workers}-{len(outputs)}.csv"
                code = main(
                    [
                        "scan",
                        "--scenario",
                        str(DATA / f"{scenario}.scn"),
                        "--format",
                        "csv",
                        "--parallel",
                        workers,
                        "--output",
                        str(out),
                    ]
                )
                assert code == 0
                outputs.append(out.read_bytes())
            assert len(set(outputs)) == 1
