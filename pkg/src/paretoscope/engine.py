"""Improvement checking, efficiency testing, frontier enumeration, and scans.

A move is an improvement when every agent's transformed information weakly
rises and at least one agent's strictly rises.  Three checkers implement this:

* ``check_improvement`` applies the definition directly to any transforms.
* ``check_improvement_neoclassical`` is the classical special case where each
  agent's information is their own bundle.
* ``check_improvement_ratio_form`` evaluates, for single-commodity moves with
  no mixed agents, the sign conditions on the ratios of information changes to
  bundle changes.  It is a genuinely separate evaluation route: the tests
  confirm it agrees with the definitional checker rather than assuming it.

``enumerate_frontier`` likewise keeps two routes alive (a pairwise oracle and
a dominance-pruned skyline) and insists they agree on every call.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Union

from .errors import (
    CapExceeded,
    HypothesisViolated,
    InternalInvariant,
    InvalidAgent,
    ValidationError,
    ZeroReferencePoint,
)
from .polity import (
    Allocation,
    FeasibleSet,
    Move,
    PartialOrderResult,
    Polity,
    classify_move_agents,
    compare_bundles,
    count_feasible,
    enumerate_feasible,
    feasible_contains,
)
from .transforms import (
    OwnBundle,
    RelativeToMean,
    RelativeToNeighborhood,
    TransformSpec,
    WeightedOwn,
    compare_info,
    evaluate_transform,
    info_components,
)

logger = logging.getLogger(__name__)

DEFAULT_SCAN_CAP = 200_000

Transforms = Union[TransformSpec, Mapping[int, TransformSpec]]

_SPEC_TYPES = (OwnBundle, WeightedOwn, RelativeToMean, RelativeToNeighborhood)


def transforms_for(polity: Polity, transforms: Transforms) -> dict[int, TransformSpec]:
    """Normalize a transform assignment to one spec per agent.

    A bare spec applies to every agent; a mapping must cover the polity
    exactly.
    """
    if isinstance(transforms, _SPEC_TYPES):
        return {a: transforms for a in polity.agents}
    mapping = dict(transforms)
    missing = [a for a in polity.agents if a not in mapping]
    if missing:
        raise ValidationError(f"no transform assigned to agent(s) {missing}")
    extra = sorted(a for a in mapping if a not in polity.agents)
    if extra:
        raise InvalidAgent(f"transform assigned to unknown agent(s) {extra}")
    return {a: mapping[a] for a in polity.agents}


class Method(Enum):
    DEFINITIONAL = "definitional"
    NEOCLASSICAL = "neoclassical"
    RATIO_FORM = "ratio_form"


class ViolationKind(Enum):
    STRICTLY_WORSE = "strictly_worse"
    INCOMPARABLE_INFO = "incomparable_info"


@dataclass(frozen=True)
class ImprovementVerdict:
    """Outcome of an improvement check.

    ``strict_gainers`` lists agents whose information strictly rose;
    ``violators`` lists agents blocking the improvement together with how
    they block it.  Both are ordered by agent id.
    """

    is_improvement: bool
    strict_gainers: tuple[int, ...]
    violators: tuple[tuple[int, ViolationKind], ...]
    method: Method


def _tagged_zero_reference(exc: ZeroReferencePoint, endpoint: str) -> ZeroReferencePoint:
    return ZeroReferencePoint(
        f"{exc.args[0]} at the {endpoint} state of the move",
        agent=exc.agent,
        endpoint=endpoint,
    )


def _evaluate_all(
    allocation: Allocation, specs: dict[int, TransformSpec], endpoint: str
) -> dict[int, object]:
    infos = {}
    for agent, spec in specs.items():
        try:
            infos[agent] = evaluate_transform(spec, allocation, agent)
        except ZeroReferencePoint as exc:
            raise _tagged_zero_reference(exc, endpoint) from exc
    return infos


def check_improvement(move: Move, transforms: Transforms) -> ImprovementVerdict:
    """Decide by definition whether ``move`` improves on its starting state."""
    specs = transforms_for(move.polity, transforms)
    before = _evaluate_all(move.before, specs, "from")
    after = _evaluate_all(move.after, specs, "to")
    gainers, violators = [], []
    for agent in move.polity.agents:
        result = compare_info(after[agent], before[agent])
        if result is PartialOrderResult.STRICTLY_GREATER:
            gainers.append(agent)
        elif result is PartialOrderResult.INCOMPARABLE:
            violators.append((agent, ViolationKind.INCOMPARABLE_INFO))
        elif not result.weakly_ge:
            violators.append((agent, ViolationKind.STRICTLY_WORSE))
    return ImprovementVerdict(
        is_improvement=not violators and bool(gainers),
        strict_gainers=tuple(gainers),
        violators=tuple(violators),
        method=Method.DEFINITIONAL,
    )


def check_improvement_neoclassical(move: Move) -> ImprovementVerdict:
    """Classical check: every agent's information is their own bundle."""
    gainers, violators = [], []
    for agent in move.polity.agents:
        result = compare_bundles(
            move.after.bundle_for(agent), move.before.bundle_for(agent)
        )
        if result is PartialOrderResult.STRICTLY_GREATER:
            gainers.append(agent)
        elif result is PartialOrderResult.INCOMPARABLE:
            violators.append((agent, ViolationKind.INCOMPARABLE_INFO))
        elif not result.weakly_ge:
            violators.append((agent, ViolationKind.STRICTLY_WORSE))
    return ImprovementVerdict(
        is_improvement=not violators and bool(gainers),
        strict_gainers=tuple(gainers),
        violators=tuple(violators),
        method=Method.NEOCLASSICAL,
    )


def check_improvement_ratio_form(move: Move, transforms: Transforms) -> ImprovementVerdict:
    """Decide improvement via ratio sign conditions on information changes.

    Applies to single-commodity moves where every agent either strictly
    gained or weakly lost holdings and at least one gained.  The conditions:
    for every agent k and every gainer i, the ratio of k's information change
    to i's holding change must be non-negative; for every agent k and every
    loser j whose holding actually changed, the corresponding ratio must be
    non-positive; and at least one ratio in either family must be strict.
    Ratios against an unchanged holding are vacuously satisfied.
    """
    if move.polity.commodity_dim != 1:
        raise HypothesisViolated(
            "ratio-form check requires a single commodity, "
            f"got {move.polity.commodity_dim}"
        )
    classes = classify_move_agents(move)
    if classes.mixed:
        raise HypothesisViolated(
            f"agents {sorted(classes.mixed)} changed incomparably"
        )
    if not classes.gainers:
        raise HypothesisViolated("ratio-form check requires at least one strict gainer")

    specs = transforms_for(move.polity, transforms)
    before = _evaluate_all(move.before, specs, "from")
    after = _evaluate_all(move.after, specs, "to")
    delta_info: dict[int, Fraction] = {}
    for agent in move.polity.agents:
        b, a = before[agent], after[agent]
        if not isinstance(b, Fraction) or not isinstance(a, Fraction):
            raise HypothesisViolated("ratio-form check requires scalar information")
        delta_info[agent] = a - b
    delta_x = {
        agent: move.after.bundle_for(agent).quantities[0]
        - move.before.bundle_for(agent).quantities[0]
        for agent in move.polity.agents
    }

    ok = True
    strict = False
    for k in move.polity.agents:
        for i in sorted(classes.gainers):
            ratio = delta_info[k] / delta_x[i]
            if ratio < 0:
                ok = False
            elif ratio > 0:
                strict = True
        for j in sorted(classes.weak_losers):
            if delta_x[j] == 0:
                continue
            ratio = delta_info[k] / delta_x[j]
            if ratio > 0:
                ok = False
            elif ratio < 0:
                strict = True

    gainers = tuple(a for a in move.polity.agents if delta_info[a] > 0)
    violators = tuple(
        (a, ViolationKind.STRICTLY_WORSE)
        for a in move.polity.agents
        if delta_info[a] < 0
    )
    return ImprovementVerdict(
        is_improvement=ok and strict,
        strict_gainers=gainers,
        violators=violators,
        method=Method.RATIO_FORM,
    )


@dataclass(frozen=True)
class EfficiencyVerdict:
    """Whether a state admits no feasible improvement.

    ``witness`` is the first improving move in enumeration order when one
    exists.  ``skipped_targets`` counts feasible targets that could not be
    evaluated because a relative transform's reference point was zero there.
    """

    is_efficient: bool
    witness: Move | None
    skipped_targets: int = 0


def _signature(
    allocation: Allocation, specs: dict[int, TransformSpec]
) -> tuple[Fraction, ...]:
    """All agents' information components, flattened in agent order.

    Improvement between two states is equivalent to strict componentwise
    dominance between their signatures: per-agent weak rises concatenate to a
    componentwise weak rise, and any strict component makes exactly one agent
    strictly better off.
    """
    parts: list[Fraction] = []
    for agent in sorted(specs):
        parts.extend(info_components(evaluate_transform(specs[agent], allocation, agent)))
    return tuple(parts)


def _dominates(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> bool:
    return all(x >= y for x, y in zip(a, b)) and a != b


def is_pareto_efficient(
    state: Allocation, fs: FeasibleSet, transforms: Transforms
) -> EfficiencyVerdict:
    """Check ``state`` against every feasible alternative.

    Raises ``ZeroReferencePoint`` when the state itself has an undefined
    relative position; alternatives with undefined positions are skipped and
    counted in ``skipped_targets``.
    """
    polity = state.polity
    specs = transforms_for(polity, transforms)
    if not feasible_contains(fs, state):
        logger.warning("state %s is not in the declared feasible set", state.flat())
    try:
        _evaluate_all(state, specs, "from")
    except ZeroReferencePoint:
        raise
    skipped = 0
    own_flat = state.flat()
    for target in enumerate_feasible(fs, polity):
        if target.flat() == own_flat:
            continue
        move = Move(before=state, after=target)
        try:
            verdict = check_improvement(move, specs)
        except ZeroReferencePoint:
            skipped += 1
            continue
        if verdict.is_improvement:
            return EfficiencyVerdict(False, move, skipped)
    return EfficiencyVerdict(True, None, skipped)


@dataclass(frozen=True)
class FrontierEntry:
    state_id: int
    state: Allocation
    efficient: bool
    degenerate: bool = False


@dataclass(frozen=True)
class FrontierReport:
    """Per-state efficiency over a whole feasible set.

    ``entries`` follows enumeration order and covers every state; degenerate
    states (zero reference point) are flagged rather than classified.
    """

    entries: tuple[FrontierEntry, ...]

    @property
    def efficient_ids(self) -> tuple[int, ...]:
        return tuple(e.state_id for e in self.entries if e.efficient)

    @property
    def efficient_states(self) -> tuple[Allocation, ...]:
        """The frontier itself: efficient states in enumeration order."""
        return tuple(e.state for e in self.entries if e.efficient)

    @property
    def degenerate_ids(self) -> tuple[int, ...]:
        return tuple(e.state_id for e in self.entries if e.degenerate)


def enumerate_frontier(
    fs: FeasibleSet, polity: Polity, transforms: Transforms
) -> FrontierReport:
    """Classify every feasible state as efficient or not.

    Runs two independent routes on every call: a pairwise oracle that tests
    each state against each alternative by definition, and a dominance-pruned
    skyline over information signatures.  Disagreement raises
    ``InternalInvariant``; so does an empty frontier, which cannot happen on a
    finite non-empty set unless every state is degenerate.
    """
    specs = transforms_for(polity, transforms)
    states = list(enumerate_feasible(fs, polity))
    signatures: dict[int, tuple[Fraction, ...]] = {}
    degenerate: set[int] = set()
    for idx, state in enumerate(states):
        try:
            signatures[idx] = _signature(state, specs)
        except ZeroReferencePoint as exc:
            degenerate.add(idx)
            logger.warning("state %d excluded from frontier: %s", idx, exc)

    live = [i for i in range(len(states)) if i not in degenerate]

    # Route 1: pairwise oracle straight from the definition.
    naive_efficient = set()
    for i in live:
        improved = False
        for j in live:
            if i == j:
                continue
            verdict = check_improvement(Move(before=states[i], after=states[j]), specs)
            if verdict.is_improvement:
                improved = True
                break
        if not improved:
            naive_efficient.add(i)

    # Route 2: skyline over signatures.
    kept: list[int] = []
    for i in live:
        sig = signatures[i]
        if any(_dominates(signatures[k], sig) for k in kept):
            continue
        kept = [k for k in kept if not _dominates(sig, signatures[k])]
        kept.append(i)
    pruned_efficient = set(kept)

    if naive_efficient != pruned_efficient:
        raise InternalInvariant(
            "frontier routes disagree: "
            f"oracle={sorted(naive_efficient)} skyline={sorted(pruned_efficient)}"
        )
    if live and not naive_efficient:
        raise InternalInvariant("non-empty state set produced an empty frontier")
    if not live:
        raise InternalInvariant(
            "every feasible state has an undefined reference point; frontier is empty"
        )

    entries = tuple(
        FrontierEntry(
            state_id=i,
            state=states[i],
            efficient=i in naive_efficient,
            degenerate=i in degenerate,
        )
        for i in range(len(states))
    )
    return FrontierReport(entries)


@dataclass(frozen=True)
class ScanReport:
    """Exhaustive ordered-move scan over a feasible set.

    ``moves_examined`` counts pairs actually evaluated; pairs touching a
    degenerate state are skipped and counted separately.  Degenerate states
    have no evaluable improving move, so they count as efficient.
    """

    states_examined: int
    moves_examined: int
    improvements_found: int
    improving_moves: tuple[tuple[int, int], ...]
    efficient_state_count: int
    skipped_moves: int = 0
    degenerate_states: int = 0
    states: tuple[Allocation, ...] = field(default=(), repr=False)


def _scan_chunk(
    lo: int,
    hi: int,
    live: list[int],
    signatures: dict[int, tuple[Fraction, ...]],
) -> tuple[list[tuple[int, int]], int]:
    found: list[tuple[int, int]] = []
    examined = 0
    for i in live[lo:hi]:
        for j in live:
            if i == j:
                continue
            examined += 1
            if _dominates(signatures[j], signatures[i]):
                found.append((i, j))
    return found, examined


def scan_all_moves(
    fs: FeasibleSet,
    polity: Polity,
    transforms: Transforms,
    cap: int = DEFAULT_SCAN_CAP,
    workers: int = 1,
) -> ScanReport:
    """Evaluate every ordered pair of distinct feasible states.

    Raises ``CapExceeded`` before enumerating when the pair count would pass
    ``cap``.  Results are deterministic and identical for any ``workers``
    value: the from-state range is split into contiguous chunks and merged in
    order.
    """
    n = count_feasible(fs, polity)
    required = n * (n - 1)
    if required > cap:
        raise CapExceeded(cap, required)
    specs = transforms_for(polity, transforms)
    states = list(enumerate_feasible(fs, polity))
    signatures: dict[int, tuple[Fraction, ...]] = {}
    degenerate: set[int] = set()
    for idx, state in enumerate(states):
        try:
            signatures[idx] = _signature(state, specs)
        except ZeroReferencePoint as exc:
            degenerate.add(idx)
            logger.warning("state %d skipped in scan: %s", idx, exc)
    live = [i for i in range(n) if i not in degenerate]

    workers = max(1, workers)
    chunk = max(1, -(-len(live) // workers))
    bounds = [(lo, min(lo + chunk, len(live))) for lo in range(0, len(live), chunk)]

    results: list[tuple[list[tuple[int, int]], int]]
    if workers == 1 or len(bounds) <= 1:
        results = [_scan_chunk(lo, hi, live, signatures) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_scan_chunk, lo, hi, live, signatures) for lo, hi in bounds
            ]
            results = [f.result() for f in futures]

    improving: list[tuple[int, int]] = []
    examined = 0
    for found, count in results:
        improving.extend(found)
        examined += count
    improvable = {i for i, _ in improving}
    return ScanReport(
        states_examined=n,
        moves_examined=examined,
        improvements_found=len(improving),
        improving_moves=tuple(improving),
        efficient_state_count=n - len(improvable),
        skipped_moves=required - examined,
        degenerate_states=len(degenerate),
        states=tuple(states),
    )
