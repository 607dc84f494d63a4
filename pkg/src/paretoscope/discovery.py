"""Simulation of repeated windfall accumulation by a single agent.

One agent (the beneficiary) repeatedly receives an increment of every
commodity out of nowhere; nobody else's holdings change.  The run records,
for every step, whether the step is a classical improvement, and for every
intermediate state, whether it is efficient when the only feasible
alternatives are redistributions of that state's own totals.  It also tracks
the gap between the beneficiary's aggregate holdings and the best-off other
agent's, which grows linearly without ever breaking improvement or
efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import (
    EfficiencyVerdict,
    ImprovementVerdict,
    check_improvement_neoclassical,
    is_pareto_efficient,
)
from .errors import InfeasibleLattice, InvalidAgent, ValidationError
from .polity import Allocation, FixedTotalLattice, Move, as_quantity
from .transforms import OwnBundle, aggregate


@dataclass(frozen=True)
class DiscoveryRun:
    """Full record of an accumulation run.

    ``trajectory`` has ``steps + 1`` states; ``step_verdicts`` has one entry
    per step; ``efficiency_verdicts`` and ``gap_series`` cover every state.
    """

    initial: Allocation
    beneficiary: int
    steps: int
    increment: Fraction
    trajectory: tuple[Allocation, ...]
    step_verdicts: tuple[ImprovementVerdict, ...]
    efficiency_verdicts: tuple[EfficiencyVerdict, ...]
    gap_series: tuple[Fraction, ...]


def _gap(state: Allocation, beneficiary: int) -> Fraction:
    own = aggregate(state.bundle_for(beneficiary), None)
    others = [
        aggregate(state.bundle_for(a), None)
        for a in state.polity.agents
        if a != beneficiary
    ]
    best_other = max(others) if others else Fraction(0)
    return own - best_other


def simulate_discovery(
    initial: Allocation,
    beneficiary: int,
    steps: int,
    increment: Fraction | int | str = 1,
    lattice_step: Fraction | int | str = 1,
) -> DiscoveryRun:
    """Run ``steps`` rounds of windfall accumulation from ``initial``.

    Each round adds ``increment`` of every commodity to the beneficiary's
    bundle.  Efficiency of each state is judged against the lattice of
    redistributions of that state's totals on a grid of ``lattice_step``
    multiples; the initial quantities and the increment must sit on that
    grid.
    """
    if not 1 <= beneficiary <= initial.n_agents:
        raise InvalidAgent(f"beneficiary {beneficiary} not in 1..{initial.n_agents}")
    if steps < 1:
        raise ValidationError("steps must be a positive integer")
    inc = as_quantity(increment)
    if inc <= 0:
        raise ValidationError("increment must be strictly positive")
    grid = as_quantity(lattice_step)
    if grid <= 0:
        raise ValidationError("lattice step must be strictly positive")
    if (inc / grid).denominator != 1:
        raise InfeasibleLattice(f"increment {inc} is not a multiple of step {grid}")
    for bundle in initial.bundles:
        for q in bundle.quantities:
            if (q / grid).denominator != 1:
                raise InfeasibleLattice(
                    f"initial quantity {q} is not a multiple of step {grid}"
                )

    trajectory = [initial]
    for _ in range(steps):
        last = trajectory[-1]
        trajectory.append(
            last.with_bundle(
                beneficiary, last.bundle_for(beneficiary).plus_uniform(inc)
            )
        )

    step_verdicts = tuple(
        check_improvement_neoclassical(Move(before=a, after=b))
        for a, b in zip(trajectory, trajectory[1:])
    )
    efficiency_verdicts = tuple(
        is_pareto_efficient(
            state,
            FixedTotalLattice(totals=state.totals(), step=grid),
            OwnBundle(),
        )
        for state in trajectory
    )
    gap_series = tuple(_gap(state, beneficiary) for state in trajectory)
    return DiscoveryRun(
        initial=initial,
        beneficiary=beneficiary,
        steps=steps,
        increment=inc,
        trajectory=tuple(trajectory),
        step_verdicts=step_verdicts,
        efficiency_verdicts=efficiency_verdicts,
        gap_series=gap_series,
    )
