"""Core value types: quantities, bundles, allocations, moves, and feasible sets.

All quantities are exact ``fractions.Fraction`` values; nothing in this package
ever rounds.  Dominance decisions are order-theoretic over the componentwise
partial order, so exactness removes epsilon tie-breaking entirely.

Agent ids are 1-based throughout the public API.  Enumeration of feasible sets
is deterministic: states are produced in lexicographic order of the flattened
quantity tuple (agent-major, commodity-minor), so witnesses are reproducible
bit-for-bit across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Union

from .errors import DimensionMismatch, InfeasibleConfig, ValidationError

Quantity = Fraction


def as_quantity(value: int | str | Fraction) -> Fraction:
    """Coerce a literal to an exact non-negative quantity.

    Accepts ints, Fractions, and strings in decimal (``"0.5"``) or ratio
    (``"3/2"``) form.  Floats are rejected: binary floats cannot represent
    decimal inputs exactly.
    """
    if isinstance(value, float):
        raise ValidationError(f"float literal {value!r} not accepted; quantities are exact")
    try:
        q = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse quantity {value!r}: {exc}") from exc
    if q < 0:
        raise ValidationError(f"quantity must be non-negative, got {q}")
    return q


class PartialOrderResult(Enum):
    """Outcome of comparing two values under a partial order.

    The componentwise comparison of exact vectors only ever yields ``EQUAL``,
    ``STRICTLY_GREATER``, ``STRICTLY_LESS``, or ``INCOMPARABLE``; the weak
    members complete the vocabulary for callers that track non-strict
    relations explicitly.
    """

    EQUAL = "equal"
    WEAKLY_GREATER = "weakly_greater"
    STRICTLY_GREATER = "strictly_greater"
    WEAKLY_LESS = "weakly_less"
    STRICTLY_LESS = "strictly_less"
    INCOMPARABLE = "incomparable"

    @property
    def weakly_ge(self) -> bool:
        return self in (
            PartialOrderResult.EQUAL,
            PartialOrderResult.WEAKLY_GREATER,
            PartialOrderResult.STRICTLY_GREATER,
        )

    @property
    def weakly_le(self) -> bool:
        return self in (
            PartialOrderResult.EQUAL,
            PartialOrderResult.WEAKLY_LESS,
            PartialOrderResult.STRICTLY_LESS,
        )


@dataclass(frozen=True)
class Bundle:
    """An agent's commodity holdings: a fixed-length vector of quantities."""

    quantities: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "quantities", tuple(as_quantity(q) for q in self.quantities))
        if not self.quantities:
            raise ValidationError("bundle must hold at least one commodity")

    @property
    def dimension(self) -> int:
        return len(self.quantities)

    def plus_uniform(self, delta: Fraction) -> Bundle:
        """Return a copy with ``delta`` added to every commodity."""
        return Bundle(tuple(q + delta for q in self.quantities))


def compare_bundles(a: Bundle, b: Bundle) -> PartialOrderResult:
    """Compare two bundles under the componentwise partial order.

    ``STRICTLY_GREATER`` means every component of ``a`` is at least as large
    as ``b``'s with at least one strictly larger; ``INCOMPARABLE`` means the
    componentwise differences carry both signs.
    """
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"bundle dimensions differ: {a.dimension} vs {b.dimension}")
    some_up = any(x > y for x, y in zip(a.quantities, b.quantities))
    some_down = any(x < y for x, y in zip(a.quantities, b.quantities))
    if some_up and some_down:
        return PartialOrderResult.INCOMPARABLE
    if some_up:
        return PartialOrderResult.STRICTLY_GREATER
    if some_down:
        return PartialOrderResult.STRICTLY_LESS
    return PartialOrderResult.EQUAL


@dataclass(frozen=True)
class Polity:
    """The shape of a society: how many agents, how many commodities."""

    n_agents: int
    commodity_dim: int

    def __post_init__(self):
        if self.n_agents < 1:
            raise ValidationError("polity needs at least one agent")
        if self.commodity_dim < 1:
            raise ValidationError("polity needs at least one commodity")

    @property
    def agents(self) -> range:
        """1-based agent ids."""
        return range(1, self.n_agents + 1)


@dataclass(frozen=True)
class Allocation:
    """One bundle per agent; all bundles share the same commodity dimension."""

    bundles: tuple[Bundle, ...]

    def __post_init__(self):
        coerced = tuple(b if isinstance(b, Bundle) else Bundle(tuple(b)) for b in self.bundles)
        object.__setattr__(self, "bundles", coerced)
        if not self.bundles:
            raise ValidationError("allocation must cover at least one agent")
        dim = self.bundles[0].dimension
        if any(b.dimension != dim for b in self.bundles):
            raise DimensionMismatch("all bundles in an allocation must share one dimension")

    @property
    def n_agents(self) -> int:
        return len(self.bundles)

    @property
    def dimension(self) -> int:
        return self.bundles[0].dimension

    @property
    def polity(self) -> Polity:
        return Polity(self.n_agents, self.dimension)

    def bundle_for(self, agent: int) -> Bundle:
        """The bundle of the 1-based ``agent``."""
        self._check_agent(agent)
        return self.bundles[agent - 1]

    def with_bundle(self, agent: int, bundle: Bundle) -> Allocation:
        """Copy of this allocation with ``agent``'s bundle replaced."""
        self._check_agent(agent)
        if bundle.dimension != self.dimension:
            raise DimensionMismatch("replacement bundle has wrong dimension")
        bundles = list(self.bundles)
        bundles[agent - 1] = bundle
        return Allocation(tuple(bundles))

    def flat(self) -> tuple[Fraction, ...]:
        """All quantities flattened agent-major, commodity-minor (the enumeration key)."""
        return tuple(q for b in self.bundles for q in b.quantities)

    def totals(self) -> tuple[Fraction, ...]:
        """Per-commodity totals across all agents."""
        return tuple(
            sum((b.quantities[c] for b in self.bundles), Fraction(0))
            for c in range(self.dimension)
        )

    def _check_agent(self, agent: int) -> None:
        from .errors import InvalidAgent

        if not 1 <= agent <= self.n_agents:
            raise InvalidAgent(f"agent {agent} not in 1..{self.n_agents}")


def alloc(*per_agent: int | str | Fraction | Iterable[int | str | Fraction]) -> Allocation:
    """Build an allocation from one value (1 commodity) or one tuple per agent.

    ``alloc(1, 2)`` is a two-agent, one-commodity allocation; ``alloc((1, 0),
    (2, 1))`` is two agents with two commodities each.
    """
    bundles = []
    for entry in per_agent:
        if isinstance(entry, (int, str, Fraction)):
            bundles.append(Bundle((entry,)))
        else:
            bundles.append(Bundle(tuple(entry)))
    return Allocation(tuple(bundles))


@dataclass(frozen=True)
class Move:
    """An ordered movement between two allocations of the same shape."""

    before: Allocation
    after: Allocation

    def __post_init__(self):
        if self.before.n_agents != self.after.n_agents:
            raise DimensionMismatch("move endpoints disagree on agent count")
        if self.before.dimension != self.after.dimension:
            raise DimensionMismatch("move endpoints disagree on commodity dimension")

    @property
    def polity(self) -> Polity:
        return self.before.polity


@dataclass(frozen=True)
class MoveClassification:
    """Partition of the polity by how a move changed each agent's bundle."""

    gainers: frozenset[int]
    weak_losers: frozenset[int]
    mixed: frozenset[int]


def classify_move_agents(move: Move) -> MoveClassification:
    """Partition agents into strict gainers, weak losers, and mixed changers.

    Gainers strictly increased their bundle in the componentwise order; weak
    losers stayed equal or (weakly or strictly) decreased; mixed agents saw an
    incomparable change.  The three sets always partition the polity.
    """
    gainers, weak_losers, mixed = set(), set(), set()
    for agent in move.polity.agents:
        result = compare_bundles(move.after.bundle_for(agent), move.before.bundle_for(agent))
        if result is PartialOrderResult.STRICTLY_GREATER:
            gainers.add(agent)
        elif result is PartialOrderResult.INCOMPARABLE:
            mixed.add(agent)
        else:
            weak_losers.add(agent)
    return MoveClassification(frozenset(gainers), frozenset(weak_losers), frozenset(mixed))


@dataclass(frozen=True)
class BoxGrid:
    """Every agent independently holds any of the per-commodity levels."""

    levels: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        coerced = tuple(
            tuple(as_quantity(q) for q in commodity_levels) for commodity_levels in self.levels
        )
        object.__setattr__(self, "levels", coerced)
        if not self.levels:
            raise InfeasibleConfig("box grid needs levels for at least one commodity")
        for commodity_levels in self.levels:
            if not commodity_levels:
                raise InfeasibleConfig("each commodity needs at least one level")
            if any(b <= a for a, b in zip(commodity_levels, commodity_levels[1:])):
                raise InfeasibleConfig("levels must be strictly increasing")

    @classmethod
    def shared(cls, levels: Iterable[int | str | Fraction], commodities: int = 1) -> BoxGrid:
        """One level set applied to every commodity."""
        ordered = tuple(sorted({as_quantity(q) for q in levels}))
        return cls(tuple(ordered for _ in range(commodities)))


@dataclass(frozen=True)
class FixedTotalLattice:
    """All allocations whose per-commodity totals equal the configured totals,
    on a grid of multiples of ``step`` (the redistribution-only state space)."""

    totals: tuple[Fraction, ...]
    step: Fraction

    def __post_init__(self):
        object.__setattr__(self, "totals", tuple(as_quantity(t) for t in self.totals))
        object.__setattr__(self, "step", as_quantity(self.step))
        if not self.totals:
            raise InfeasibleConfig("lattice needs a total for at least one commodity")
        if self.step <= 0:
            raise InfeasibleConfig("lattice step must be strictly positive")
        for total in self.totals:
            if (total / self.step).denominator != 1:
                raise InfeasibleConfig(f"step {self.step} does not divide total {total}")

    @classmethod
    def shared(
        cls,
        total: int | str | Fraction,
        commodities: int = 1,
        step: int | str | Fraction = 1,
    ) -> FixedTotalLattice:
        t = as_quantity(total)
        return cls(tuple(t for _ in range(commodities)), as_quantity(step))


@dataclass(frozen=True)
class ExplicitList:
    """A user-declared candidate set, canonicalized to sorted unique states."""

    states: tuple[Allocation, ...]

    def __post_init__(self):
        if not self.states:
            raise InfeasibleConfig("explicit state list must be non-empty")
        shape = self.states[0].polity
        if any(s.polity != shape for s in self.states):
            raise DimensionMismatch("explicit states disagree on agent count or dimension")
        unique = {s.flat(): s for s in self.states}
        canonical = tuple(unique[key] for key in sorted(unique))
        object.__setattr__(self, "states", canonical)


FeasibleSet = Union[BoxGrid, FixedTotalLattice, ExplicitList]


def feasible_dimension(fs: FeasibleSet) -> int:
    """Commodity dimension implied by a feasible-set declaration."""
    if isinstance(fs, BoxGrid):
        return len(fs.levels)
    if isinstance(fs, FixedTotalLattice):
        return len(fs.totals)
    return fs.states[0].dimension


def _lattice_bundles(levels_per_commodity: list[list[Fraction]]) -> Iterator[Bundle]:
    for combo in product(*levels_per_commodity):
        yield Bundle(combo)


def enumerate_feasible(fs: FeasibleSet, polity: Polity) -> Iterator[Allocation]:
    """Yield every allocation of the feasible set in lexicographic order.

    The order key is the flattened quantity tuple (agent-major,
    commodity-minor), ascending.
    """
    if feasible_dimension(fs) != polity.commodity_dim:
        raise InfeasibleConfig(
            f"feasible set is {feasible_dimension(fs)}-dimensional "
            f"but polity has {polity.commodity_dim} commodities"
        )
    if isinstance(fs, BoxGrid):
        per_agent = [list(fs.levels[c]) for c in range(polity.commodity_dim)]
        slot_levels = per_agent * polity.n_agents
        for combo in product(*slot_levels):
            bundles = tuple(
                Bundle(combo[a * polity.commodity_dim : (a + 1) * polity.commodity_dim])
                for a in range(polity.n_agents)
            )
            yield Allocation(bundles)
    elif isinstance(fs, FixedTotalLattice):
        yield from _enumerate_lattice(fs, polity)
    else:
        if fs.states[0].n_agents != polity.n_agents:
            raise InfeasibleConfig(
                f"explicit states have {fs.states[0].n_agents} agents "
                f"but polity has {polity.n_agents}"
            )
        yield from fs.states


def _enumerate_lattice(fs: FixedTotalLattice, polity: Polity) -> Iterator[Allocation]:
    step = fs.step

    def options(remaining: Fraction) -> list[Fraction]:
        units = int(remaining / step)
        return [step * k for k in range(units + 1)]

    def rec(agent: int, remaining: tuple[Fraction, ...], acc: list[Bundle]) -> Iterator[Allocation]:
        if agent == polity.n_agents:
            # Last agent absorbs the remainder in every commodity.
            yield Allocation(tuple(acc + [Bundle(remaining)]))
            return
        per_commodity = [options(r) for r in remaining]
        for combo in product(*per_commodity):
            rest = tuple(r - q for r, q in zip(remaining, combo))
            yield from rec(agent + 1, rest, acc + [Bundle(combo)])

    yield from rec(1, fs.totals, [])


def feasible_contains(fs: FeasibleSet, state: Allocation) -> bool:
    """Membership test, computed without enumerating the whole set."""
    if isinstance(fs, BoxGrid):
        if state.dimension != len(fs.levels):
            return False
        return all(
            b.quantities[c] in fs.levels[c]
            for b in state.bundles
            for c in range(state.dimension)
        )
    if isinstance(fs, FixedTotalLattice):
        if state.dimension != len(fs.totals):
            return False
        if state.totals() != fs.totals:
            return False
        return all(
            (q / fs.step).denominator == 1 for b in state.bundles for q in b.quantities
        )
    return any(s.flat() == state.flat() for s in fs.states)


def count_feasible(fs: FeasibleSet, polity: Polity) -> int:
    """Number of states the feasible set enumerates to, computed in closed form."""
    if feasible_dimension(fs) != polity.commodity_dim:
        raise InfeasibleConfig("feasible set dimension disagrees with polity")
    if isinstance(fs, BoxGrid):
        per_agent = math.prod(len(levels) for levels in fs.levels)
        return per_agent**polity.n_agents
    if isinstance(fs, FixedTotalLattice):
        total = 1
        for t in fs.totals:
            units = int(t / fs.step)
            total *= math.comb(units + polity.n_agents - 1, polity.n_agents - 1)
        return total
    return len(fs.states)


def describe_feasible(fs: FeasibleSet, polity: Polity) -> str:
    """Stable one-line description used in report headers."""
    if isinstance(fs, BoxGrid):
        levels = "; ".join(",".join(str(q) for q in ls) for ls in fs.levels)
        kind = f"box_grid(levels={levels})"
    elif isinstance(fs, FixedTotalLattice):
        totals = ",".join(str(t) for t in fs.totals)
        kind = f"fixed_total_lattice(totals={totals}; step={fs.step})"
    else:
        kind = f"explicit_list({len(fs.states)} states)"
    return (
        f"{kind} agents={polity.n_agents} commodities={polity.commodity_dim} "
        f"states={count_feasible(fs, polity)}"
    )
