"""Scenario files: a line-oriented ``key = value`` format.

Blank lines and ``#`` comments are ignored.  Keys may appear once each.
Syntax problems raise ``ParseError`` with a 1-based line and column; semantic
problems raise ``ValidationError`` naming the offending key.

Allocation literals are ``(1,2)`` for one commodity (one number per agent) or
``((1,0),(2,1))`` for several (one group per agent).  Moves are written
``FROM -> TO`` and separated by semicolons.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleConfig, ParseError, ValidationError
from .polity import (
    Allocation,
    BoxGrid,
    Bundle,
    ExplicitList,
    FeasibleSet,
    FixedTotalLattice,
    Move,
    Polity,
    as_quantity,
)
from .transforms import RelativeToNeighborhood, TransformSpec, parse_transform
from .welfare import SwfSpec, WeightedSum, parse_swf

_TRANSFORM_KEY = re.compile(r"^transform\.([0-9]+)$")

_BASE_KEYS = {
    "agents",
    "commodities",
    "feasible.kind",
    "feasible.levels",
    "feasible.total",
    "feasible.step",
    "feasible.list",
    "transform",
    "swf",
    "moves",
    "discover.beneficiary",
    "discover.steps",
    "discover.increment",
    "discover.initial",
    "discover.lattice_step",
    "scan.cap",
}


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario: the polity, its feasible set, and optional inputs
    for the individual commands."""

    n_agents: int
    commodities: int
    feasible: FeasibleSet
    transforms: dict[int, TransformSpec]
    swf: SwfSpec | None = None
    moves: tuple[Move, ...] = ()
    discover_beneficiary: int | None = None
    discover_steps: int | None = None
    discover_increment: Fraction = Fraction(1)
    discover_initial: Allocation | None = None
    discover_lattice_step: Fraction = Fraction(1)
    scan_cap: int | None = None
    digest: str = ""

    @property
    def polity(self) -> Polity:
        return Polity(self.n_agents, self.commodities)


@dataclass
class _Entry:
    value: str
    line: int
    column: int


class _Cursor:
    """Character cursor over one value string, reporting 1-based columns
    relative to the original scenario line."""

    def __init__(self, text: str, line: int, base_col: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.base_col = base_col

    def fail(self, message: str):
        raise ParseError(message, line=self.line, column=self.base_col + self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def number(self) -> Fraction:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789./":
            self.pos += 1
        token = self.text[start : self.pos]
        if not token:
            self.fail("expected a number")
        try:
            return as_quantity(token)
        except ValidationError as exc:
            self.pos = start
            self.fail(str(exc))


def _parse_allocation_at(cur: _Cursor) -> list[Fraction | list[Fraction]]:
    cur.skip_ws()
    cur.expect("(")
    items: list[Fraction | list[Fraction]] = []
    while True:
        cur.skip_ws()
        if cur.peek() == "(":
            cur.expect("(")
            group: list[Fraction] = []
            while True:
                cur.skip_ws()
                group.append(cur.number())
                cur.skip_ws()
                if cur.peek() == ",":
                    cur.pos += 1
                    continue
                break
            cur.expect(")")
            items.append(group)
        else:
            items.append(cur.number())
        cur.skip_ws()
        if cur.peek() == ",":
            cur.pos += 1
            continue
        break
    cur.expect(")")
    return items


def _shape_allocation(
    items: list[Fraction | list[Fraction]],
    agents: int,
    commodities: int,
    key: str,
) -> Allocation:
    scalars = [i for i in items if isinstance(i, Fraction)]
    groups = [i for i in items if isinstance(i, list)]
    if scalars and groups:
        raise ValidationError("mixed scalar and grouped entries", key=key)
    if len(items) != agents:
        raise ValidationError(
            f"allocation lists {len(items)} agents, scenario declares {agents}",
            key=key,
        )
    if scalars:
        if commodities != 1:
            raise ValidationError(
                f"scalar entries imply 1 commodity, scenario declares {commodities}",
                key=key,
            )
        return Allocation(tuple(Bundle((q,)) for q in scalars))
    for g in groups:
        if len(g) != commodities:
            raise ValidationError(
                f"bundle lists {len(g)} commodities, scenario declares {commodities}",
                key=key,
            )
    return Allocation(tuple(Bundle(tuple(g)) for g in groups))


def _parse_allocation(
    text: str, line: int, base_col: int, agents: int, commodities: int, key: str
) -> Allocation:
    cur = _Cursor(text, line, base_col)
    items = _parse_allocation_at(cur)
    cur.skip_ws()
    if cur.pos != len(cur.text):
        cur.fail(f"unexpected trailing text {cur.text[cur.pos:]!r}")
    return _shape_allocation(items, agents, commodities, key)


def _collect(text: str) -> dict[str, _Entry]:
    entries: dict[str, _Entry] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        if not stripped.strip():
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", line=line_no, column=1)
        key_part, value_part = stripped.split("=", 1)
        key = key_part.strip()
        if not key:
            raise ParseError("missing key before '='", line=line_no, column=1)
        if key in entries:
            raise ValidationError("duplicate key", key=key)
        if key not in _BASE_KEYS and not _TRANSFORM_KEY.match(key):
            raise ValidationError("unknown key", key=key)
        lead = len(value_part) - len(value_part.lstrip())
        value_col = len(key_part) + 2 + lead
        value = value_part.strip()
        if not value:
            raise ValidationError("empty value", key=key)
        entries[key] = _Entry(value, line_no, value_col)
    return entries


def _require(entries: dict[str, _Entry], key: str) -> _Entry:
    if key not in entries:
        raise ValidationError("missing required key", key=key)
    return entries[key]


def _int_value(entry: _Entry, key: str, minimum: int) -> int:
    try:
        value = int(entry.value)
    except ValueError:
        raise ValidationError(f"expected an integer, got {entry.value!r}", key=key)
    if value < minimum:
        raise ValidationError(f"must be at least {minimum}, got {value}", key=key)
    return value


def _quantity_value(entry: _Entry, key: str) -> Fraction:
    try:
        return as_quantity(entry.value)
    except ValidationError as exc:
        raise ValidationError(str(exc), key=key)


def _split_segments(value: str) -> list[tuple[str, int]]:
    """Split on ';', keeping each segment's offset within the value."""
    segments = []
    offset = 0
    for part in value.split(";"):
        segments.append((part, offset))
        offset += len(part) + 1
    return segments


def _build_feasible(
    entries: dict[str, _Entry], agents: int, commodities: int
) -> FeasibleSet:
    kind = _require(entries, "feasible.kind").value
    allowed = {
        "box_grid": {"feasible.levels"},
        "fixed_total_lattice": {"feasible.total", "feasible.step"},
        "explicit_list": {"feasible.list"},
    }
    if kind not in allowed:
        raise ValidationError(
            f"unknown kind {kind!r}; expected box_grid, "
            "fixed_total_lattice, or explicit_list",
            key="feasible.kind",
        )
    for key in entries:
        if key.startswith("feasible.") and key != "feasible.kind":
            if key not in allowed[kind]:
                raise ValidationError(f"not valid for kind {kind}", key=key)
    if kind == "box_grid":
        entry = _require(entries, "feasible.levels")
        groups = []
        for part, _ in _split_segments(entry.value):
            values = [p.strip() for p in part.split(",")]
            if any(not v for v in values):
                raise ValidationError(
                    f"empty level entry in {part.strip()!r}", key="feasible.levels"
                )
            try:
                levels = sorted({as_quantity(v) for v in values})
            except ValidationError as exc:
                raise ValidationError(str(exc), key="feasible.levels")
            groups.append(tuple(levels))
        if len(groups) == 1:
            groups = groups * commodities
        if len(groups) != commodities:
            raise ValidationError(
                f"{len(groups)} level groups for {commodities} commodities",
                key="feasible.levels",
            )
        try:
            return BoxGrid(tuple(groups))
        except InfeasibleConfig as exc:
            raise ValidationError(str(exc), key="feasible.levels")
    if kind == "fixed_total_lattice":
        entry = _require(entries, "feasible.total")
        parts = [p.strip() for p in entry.value.split(",")]
        if any(not p for p in parts):
            raise ValidationError("empty total entry", key="feasible.total")
        try:
            totals = [as_quantity(p) for p in parts]
        except ValidationError as exc:
            raise ValidationError(str(exc), key="feasible.total")
        if len(totals) == 1:
            totals = totals * commodities
        if len(totals) != commodities:
            raise ValidationError(
                f"{len(totals)} totals for {commodities} commodities",
                key="feasible.total",
            )
        step = Fraction(1)
        if "feasible.step" in entries:
            step = _quantity_value(entries["feasible.step"], "feasible.step")
        try:
            return FixedTotalLattice(tuple(totals), step)
        except InfeasibleConfig as exc:
            raise ValidationError(str(exc), key="feasible.step")
    entry = _require(entries, "feasible.list")
    states = []
    for part, offset in _split_segments(entry.value):
        if not part.strip():
            raise ValidationError("empty state entry", key="feasible.list")
        states.append(
            _parse_allocation(
                part, entry.line, entry.column + offset, agents, commodities,
                "feasible.list",
            )
        )
    return ExplicitList(tuple(states))


def _build_transforms(
    entries: dict[str, _Entry], agents: int
) -> dict[int, TransformSpec]:
    def parsed(entry: _Entry, key: str) -> TransformSpec:
        try:
            spec = parse_transform(entry.value)
        except ValidationError as exc:
            raise ValidationError(str(exc), key=key)
        if isinstance(spec, RelativeToNeighborhood):
            bad = sorted(a for a in spec.neighbors if a > agents)
            if bad:
                raise ValidationError(
                    f"neighborhood names agent(s) {bad} beyond the {agents}-agent polity",
                    key=key,
                )
        return spec

    default: TransformSpec | None = None
    if "transform" in entries:
        default = parsed(entries["transform"], "transform")
    overrides: dict[int, TransformSpec] = {}
    for key, entry in entries.items():
        match = _TRANSFORM_KEY.match(key)
        if not match:
            continue
        agent = int(match.group(1))
        if not 1 <= agent <= agents:
            raise ValidationError(
                f"agent {agent} not in 1..{agents}", key=key
            )
        overrides[agent] = parsed(entry, key)
    if default is None:
        default = parse_transform("own")
    return {a: overrides.get(a, default) for a in range(1, agents + 1)}


def parse_scenario(text: str, digest: str = "") -> Scenario:
    """Parse scenario text into a validated ``Scenario``."""
    entries = _collect(text)
    agents = _int_value(_require(entries, "agents"), "agents", 1)
    commodities = _int_value(_require(entries, "commodities"), "commodities", 1)
    feasible = _build_feasible(entries, agents, commodities)
    transforms = _build_transforms(entries, agents)

    swf = None
    if "swf" in entries:
        entry = entries["swf"]
        try:
            swf = parse_swf(entry.value)
        except ValidationError as exc:
            raise ValidationError(str(exc), key="swf")
        if isinstance(swf.combiner, WeightedSum) and len(swf.combiner.weights) != agents:
            raise ValidationError(
                f"{len(swf.combiner.weights)} weights for {agents} agents", key="swf"
            )

    moves: list[Move] = []
    if "moves" in entries:
        entry = entries["moves"]
        for part, offset in _split_segments(entry.value):
            if not part.strip():
                raise ValidationError("empty move entry", key="moves")
            arrow = part.find("->")
            if arrow < 0:
                raise ParseError(
                    "move must be written FROM -> TO",
                    line=entry.line,
                    column=entry.column + offset,
                )
            lhs, rhs = part[:arrow], part[arrow + 2 :]
            before = _parse_allocation(
                lhs, entry.line, entry.column + offset, agents, commodities, "moves"
            )
            after = _parse_allocation(
                rhs, entry.line, entry.column + offset + arrow + 2,
                agents, commodities, "moves",
            )
            moves.append(Move(before=before, after=after))

    beneficiary = None
    if "discover.beneficiary" in entries:
        beneficiary = _int_value(
            entries["discover.beneficiary"], "discover.beneficiary", 1
        )
        if beneficiary > agents:
            raise ValidationError(
                f"agent {beneficiary} not in 1..{agents}", key="discover.beneficiary"
            )
    steps = None
    if "discover.steps" in entries:
        steps = _int_value(entries["discover.steps"], "discover.steps", 1)
    increment = Fraction(1)
    if "discover.increment" in entries:
        increment = _quantity_value(entries["discover.increment"], "discover.increment")
        if increment <= 0:
            raise ValidationError("must be strictly positive", key="discover.increment")
    lattice_step = Fraction(1)
    if "discover.lattice_step" in entries:
        lattice_step = _quantity_value(
            entries["discover.lattice_step"], "discover.lattice_step"
        )
        if lattice_step <= 0:
            raise ValidationError(
                "must be strictly positive", key="discover.lattice_step"
            )
    initial = None
    if "discover.initial" in entries:
        entry = entries["discover.initial"]
        initial = _parse_allocation(
            entry.value, entry.line, entry.column, agents, commodities,
            "discover.initial",
        )
    if (increment / lattice_step).denominator != 1:
        raise ValidationError(
            f"increment {increment} is not a multiple of lattice step {lattice_step}",
            key="discover.increment",
        )
    if initial is not None:
        for q in initial.flat():
            if (q / lattice_step).denominator != 1:
                raise ValidationError(
                    f"quantity {q} is not a multiple of lattice step {lattice_step}",
                    key="discover.initial",
                )

    scan_cap = None
    if "scan.cap" in entries:
        scan_cap = _int_value(entries["scan.cap"], "scan.cap", 1)

    return Scenario(
        n_agents=agents,
        commodities=commodities,
        feasible=feasible,
        transforms=transforms,
        swf=swf,
        moves=tuple(moves),
        discover_beneficiary=beneficiary,
        discover_steps=steps,
        discover_increment=increment,
        discover_initial=initial,
        discover_lattice_step=lattice_step,
        scan_cap=scan_cap,
        digest=digest,
    )


def load_scenario(path: str) -> Scenario:
    """Read, digest, and parse a scenario file."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("scenario file is not valid UTF-8", line=1)
    return parse_scenario(text, digest=hashlib.sha256(data).hexdigest()[:12])
