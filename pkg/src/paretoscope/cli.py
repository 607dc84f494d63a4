"""Command line interface.

``paretoscope <command> --scenario <path>`` with commands ``check-move``,
``efficient``, ``frontier``, ``scan``, ``discover``, and ``welfare``.
Exit codes: 0 success, 1 scenario or argument problem, 2 engine error,
3 scan cap exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .discovery import simulate_discovery
from .engine import (
    DEFAULT_SCAN_CAP,
    check_improvement,
    check_improvement_neoclassical,
    check_improvement_ratio_form,
    enumerate_frontier,
    is_pareto_efficient,
    scan_all_moves,
)
from .errors import (
    CapExceeded,
    HypothesisViolated,
    MissingField,
    ParetoscopeError,
    ScenarioError,
    ValidationError,
)
from .polity import describe_feasible, enumerate_feasible
from .report import Report, emit_report, render_allocation, render_bool, render_move
from .scenario import Scenario, load_scenario
from .transforms import OwnBundle, transform_label
from .welfare import swf_label, welfare_rank

logger = logging.getLogger(__name__)

_IMPROVING_MOVES_SHOWN = 100


def _header(scenario: Scenario, extra: tuple[tuple[str, str], ...] = ()) -> tuple:
    pairs = [
        ("scenario", scenario.digest or "-"),
        ("engine", __version__),
        ("feasible", describe_feasible(scenario.feasible, scenario.polity)),
        (
            "transforms",
            "; ".join(
                f"{agent}={transform_label(spec)}"
                for agent, spec in sorted(scenario.transforms.items())
            ),
        ),
    ]
    pairs.extend(extra)
    return tuple(pairs)


def _run_check_move(scenario: Scenario) -> Report:
    if not scenario.moves:
        raise MissingField("moves")
    all_own = all(isinstance(t, OwnBundle) for t in scenario.transforms.values())
    rows = []
    diagnostics = []
    for idx, move in enumerate(scenario.moves):
        definitional = check_improvement(move, scenario.transforms)
        neoclassical = check_improvement_neoclassical(move)
        try:
            ratio = check_improvement_ratio_form(move, scenario.transforms)
            ratio_cell = render_bool(ratio.is_improvement)
            applicable = [definitional.is_improvement, ratio.is_improvement]
        except HypothesisViolated as exc:
            ratio_cell = "n/a"
            applicable = [definitional.is_improvement]
            diagnostics.append(f"move {idx}: ratio form not applicable ({exc})")
        if all_own:
            applicable.append(neoclassical.is_improvement)
        rows.append(
            (
                str(idx),
                render_move(move),
                render_bool(definitional.is_improvement),
                render_bool(neoclassical.is_improvement),
                ratio_cell,
                render_bool(len(set(applicable)) == 1),
            )
        )
        gainers = ",".join(str(a) for a in definitional.strict_gainers)
        violators = ",".join(
            f"{agent}:{kind.value}" for agent, kind in definitional.violators
        )
        diagnostics.append(
            f"move {idx}: strict_gainers=[{gainers}] violators=[{violators}]"
        )
    return Report(
        command="check-move",
        header=_header(scenario),
        columns=("move_id", "move", "definitional", "neoclassical", "ratio_form", "agree"),
        rows=tuple(rows),
        diagnostics=tuple(diagnostics),
    )


def _run_efficient(scenario: Scenario, state_id: int | None) -> Report:
    if state_id is None:
        raise MissingField("state")
    states = list(enumerate_feasible(scenario.feasible, scenario.polity))
    if not 0 <= state_id < len(states):
        raise ValidationError(
            f"state id {state_id} not in 0..{len(states) - 1}", key="state"
        )
    state = states[state_id]
    verdict = is_pareto_efficient(state, scenario.feasible, scenario.transforms)
    diagnostics = []
    if verdict.skipped_targets:
        diagnostics.append(
            f"skipped {verdict.skipped_targets} target(s) with undefined reference point"
        )
    return Report(
        command="efficient",
        header=_header(scenario),
        columns=("state_id", "allocation", "efficient", "witness"),
        rows=(
            (
                str(state_id),
                render_allocation(state),
                render_bool(verdict.is_efficient),
                render_move(verdict.witness) if verdict.witness else "",
            ),
        ),
        diagnostics=tuple(diagnostics),
    )


def _run_frontier(scenario: Scenario) -> Report:
    frontier = enumerate_frontier(scenario.feasible, scenario.polity, scenario.transforms)
    rows = tuple(
        (
            str(entry.state_id),
            render_allocation(entry.state),
            "n/a" if entry.degenerate else render_bool(entry.efficient),
        )
        for entry in frontier.entries
    )
    diagnostics = [
        f"efficient: {len(frontier.efficient_ids)} of {len(frontier.entries)} states"
    ]
    if frontier.degenerate_ids:
        diagnostics.append(
            f"degenerate: {len(frontier.degenerate_ids)} state(s) "
            "with undefined reference point"
        )
    return Report(
        command="frontier",
        header=_header(scenario),
        columns=("state_id", "allocation", "efficient"),
        rows=rows,
        diagnostics=tuple(diagnostics),
    )


def _run_scan(scenario: Scenario, workers: int, cap: int | None) -> Report:
    effective_cap = cap if cap is not None else (
        scenario.scan_cap if scenario.scan_cap is not None else DEFAULT_SCAN_CAP
    )
    result = scan_all_moves(
        scenario.feasible,
        scenario.polity,
        scenario.transforms,
        cap=effective_cap,
        workers=workers,
    )
    diagnostics = []
    shown = result.improving_moves[:_IMPROVING_MOVES_SHOWN]
    for i, j in shown:
        diagnostics.append(
            f"improving: {render_allocation(result.states[i])} -> "
            f"{render_allocation(result.states[j])}"
        )
    hidden = len(result.improving_moves) - len(shown)
    if hidden > 0:
        diagnostics.append(f"(+{hidden} more improving moves)")
    if result.degenerate_states:
        diagnostics.append(
            f"degenerate: {result.degenerate_states} state(s) skipped, "
            f"{result.skipped_moves} move(s) not evaluated"
        )
    return Report(
        command="scan",
        header=_header(scenario),
        columns=("states", "moves", "improvements", "efficient_states"),
        rows=(
            (
                str(result.states_examined),
                str(result.moves_examined),
                str(result.improvements_found),
                str(result.efficient_state_count),
            ),
        ),
        diagnostics=tuple(diagnostics),
    )


def _run_discover(scenario: Scenario) -> Report:
    if scenario.discover_initial is None:
        raise MissingField("discover.initial")
    if scenario.discover_beneficiary is None:
        raise MissingField("discover.beneficiary")
    if scenario.discover_steps is None:
        raise MissingField("discover.steps")
    run = simulate_discovery(
        scenario.discover_initial,
        scenario.discover_beneficiary,
        scenario.discover_steps,
        scenario.discover_increment,
        scenario.discover_lattice_step,
    )
    rows = []
    for t, state in enumerate(run.trajectory):
        rows.append(
            (
                str(t),
                render_allocation(state),
                "n/a" if t == 0 else render_bool(run.step_verdicts[t - 1].is_improvement),
                render_bool(run.efficiency_verdicts[t].is_efficient),
                str(run.gap_series[t]),
            )
        )
    return Report(
        command="discover",
        header=_header(
            scenario,
            (
                ("beneficiary", str(run.beneficiary)),
                ("increment", str(run.increment)),
            ),
        ),
        columns=("step", "allocation", "step_improvement", "efficient", "gap"),
        rows=tuple(rows),
    )


def _run_welfare(scenario: Scenario) -> Report:
    if scenario.swf is None:
        raise MissingField("swf")
    states = list(enumerate_feasible(scenario.feasible, scenario.polity))
    ranking = welfare_rank(scenario.swf, states)
    rows = tuple(
        (
            str(entry.rank),
            str(entry.state_id),
            render_allocation(entry.state),
            str(entry.value),
            render_bool(entry.tied),
        )
        for entry in ranking.entries
    )
    return Report(
        command="welfare",
        header=_header(scenario, (("swf", swf_label(scenario.swf)),)),
        columns=("rank", "state_id", "allocation", "value", "tied"),
        rows=rows,
    )


def run_command(
    scenario: Scenario,
    command: str,
    state_id: int | None = None,
    workers: int = 1,
    cap: int | None = None,
) -> Report:
    """Execute one CLI command against a parsed scenario."""
    if command == "check-move":
        return _run_check_move(scenario)
    if command == "efficient":
        return _run_efficient(scenario, state_id)
    if command == "frontier":
        return _run_frontier(scenario)
    if command == "scan":
        return _run_scan(scenario, workers, cap)
    if command == "discover":
        return _run_discover(scenario)
    if command == "welfare":
        return _run_welfare(scenario)
    raise ValidationError(f"unknown command {command!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="paretoscope",
        description="Improvement checks, frontiers, scans, accumulation runs, "
        "and welfare rankings over finite allocation spaces.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="path to a scenario file")
    common.add_argument(
        "--format", choices=("table", "csv"), default="table", help="output format"
    )
    common.add_argument("--output", help="write the report here instead of stdout")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "check-move", parents=[common], help="check the scenario's moves"
    )
    efficient = sub.add_parser(
        "efficient", parents=[common], help="check one state for efficiency"
    )
    efficient.add_argument(
        "--state", type=int, help="state id (enumeration index) to check"
    )
    sub.add_parser(
        "frontier", parents=[common], help="classify every feasible state"
    )
    scan = sub.add_parser(
        "scan", parents=[common], help="evaluate every ordered move"
    )
    scan.add_argument(
        "--parallel", type=int, default=1, help="worker count (output is identical)"
    )
    scan.add_argument("--cap", type=int, help="move-count cap override")
    sub.add_parser(
        "discover", parents=[common], help="run the accumulation simulation"
    )
    sub.add_parser(
        "welfare", parents=[common], help="rank feasible states by welfare"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        scenario = load_scenario(args.scenario)
        report = run_command(
            scenario,
            args.command,
            state_id=getattr(args, "state", None),
            workers=getattr(args, "parallel", 1),
            cap=getattr(args, "cap", None),
        )
        payload = emit_report(report, args.format)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ParetoscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
