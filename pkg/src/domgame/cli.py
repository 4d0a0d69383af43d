"""Command-line front end.

Every subcommand prints JSON by default (stable, versioned shapes shared
with the HTTP service) or a plain-text rendering with --table. Exit codes:
0 success, 1 verification failure (a lemma violation or a failed spider
verdict), 2 malformed input.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from .graphs import (
    PartialState,
    VertexSet,
    builtin_state,
    parse_edge_list,
    parse_graph6,
)
from .lemmas import LEMMA_NAMES, classification_of, run_lemma_batch
from .solver import GameConfig, GameSolver, PassEntitlement, Turn
from .trees import ResumeError, ScanCheckpoint, analyze, scan_critical_trees, verify_spider

SCHEMA_VERSION = 1
CACHE_DIR_ENV = "DOMGAME_CACHE_DIR"

_BUILTIN_NAMES = ("path", "spider", "pprime", "pdprime")


def _resolve_state(source: str) -> PartialState:
    """Sniff the input source: builtin spec, then edge-list file, then graph6."""
    if any(source.startswith(name + ":") for name in _BUILTIN_NAMES):
        return builtin_state(source)
    if os.path.exists(source):
        return PartialState(parse_edge_list(Path(source).read_text(encoding="utf-8")))
    if ":" in source:  # colons cannot occur in graph6, so this was a builtin
        raise ValueError(
            f"unknown builtin spec {source!r}; expected one of "
            + ", ".join(_BUILTIN_NAMES)
        )
    return PartialState(parse_graph6(source))


def _merge_dominated(state: PartialState, csv: str | None) -> PartialState:
    if not csv:
        return state
    extra = VertexSet.from_csv(csv)
    if not extra.issubset(state.graph.full_set):
        raise ValueError(
            f"dominated ids {sorted(extra.ids())} exceed graph order {state.graph.order}"
        )
    return state.with_dominated(extra)


def _print_table(data: dict) -> None:
    for key, value in data.items():
        if key == "verdicts" and isinstance(value, list):
            click.echo("verdicts:")
            for v in value:
                mark = "ok" if v["holds"] else "VIOLATED"
                click.echo(
                    f"  {v['lemma_id']:<28} lhs={v['lhs']:>3} rhs={v['rhs']:>3} {mark}"
                )
        elif key == "reports" and isinstance(value, list):
            click.echo("reports:")
            for r in value:
                click.echo(
                    f"  {r['graph_g6']:<28} gamma_g={r['gamma_g']}"
                    f" gamma_g_prime={r['gamma_g_prime']} {r['classification']}"
                )
        elif key == "trace" and isinstance(value, list):
            click.echo("trace:")
            for i, step in enumerate(value, start=1):
                click.echo(f"  {i}. {step['mover']} -> {step['move']}")
        elif key == "per_vertex" and isinstance(value, list):
            click.echo(f"per_vertex = {','.join(str(x) for x in value)}")
        else:
            click.echo(f"{key} = {value}")


def _emit(data: dict, table: bool) -> None:
    if table:
        _print_table(data)
    else:
        click.echo(json.dumps(data, indent=2))


def _bad_input(message: str) -> "SystemExit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(2)


_graph_option = click.option(
    "--graph",
    "graph_src",
    required=True,
    help="graph6 string, edge-list file, or builtin spec (path:7, spider:1,1,2, pprime:3)",
)
_table_option = click.option(
    "--table", is_flag=True, help="human-readable output instead of JSON"
)


@click.group()
@click.version_option(version=__version__, prog_name="domgame")
def main() -> None:
    """Exact domination-game solving, lemma checking, and tree scanning."""


@main.command()
@_graph_option
@click.option("--dominated", help="comma-separated pre-dominated vertex ids")
@click.option(
    "--first",
    type=click.Choice(["dominator", "staller"]),
    default="dominator",
    show_default=True,
    help="which player moves first",
)
@click.option(
    "--pass",
    "pass_entitlement",
    type=click.Choice(["none", "staller", "dominator"]),
    default="none",
    show_default=True,
    help="grant one optional pass to a player",
)
@click.option("--trace", is_flag=True, help="include one optimal line of play")
@_table_option
def solve(graph_src, dominated, first, pass_entitlement, trace, table) -> None:
    """Number of moves under optimal play."""
    try:
        state = _merge_dominated(_resolve_state(graph_src), dominated)
        cfg = GameConfig(Turn(first), PassEntitlement(pass_entitlement))
        solver = GameSolver(state.graph)
        out = {"schema_version": SCHEMA_VERSION, "moves": solver.value(state.dominated, cfg)}
        if trace:
            out["trace"] = solver.trace(state.dominated, cfg)
    except ValueError as exc:
        raise _bad_input(str(exc))
    _emit(out, table)


@main.command()
@_graph_option
@_table_option
def classify(graph_src, table) -> None:
    """Compare Staller-start with Dominator-start value."""
    try:
        state = _resolve_state(graph_src)
        solver = GameSolver(state.graph)
        d = solver.value(state.dominated, GameConfig(Turn.DOMINATOR))
        s = solver.value(state.dominated, GameConfig(Turn.STALLER))
        out = {
            "schema_version": SCHEMA_VERSION,
            "gamma_g": d,
            "gamma_g_prime": s,
            "class": classification_of(d, s).value,
        }
    except ValueError as exc:
        raise _bad_input(str(exc))
    _emit(out, table)


@main.command("analyze")
@_graph_option
@_table_option
def analyze_cmd(graph_src, table) -> None:
    """Full criticality report: game values plus every single-vertex predomination."""
    try:
        report = analyze(_resolve_state(graph_src).graph)
    except ValueError as exc:
        raise _bad_input(str(exc))
    _emit({"schema_version": SCHEMA_VERSION, **report.to_dict()}, table)


def _load_instances(spec: str) -> tuple[list[dict] | None, int | None, int | None]:
    """--instances value: 'random:SEED:COUNT' or a file of instance JSON."""
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad random spec {spec!r}, expected random:SEED:COUNT")
        try:
            seed, count = int(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"bad random spec {spec!r}, seed and count must be integers") from None
        return None, seed, count
    if not os.path.exists(spec):
        raise ValueError(f"instance file {spec!r} not found (or use random:SEED:COUNT)")
    text = Path(spec).read_text(encoding="utf-8")
    try:
        loaded = json.loads(text)
        if not isinstance(loaded, list):
            raise ValueError(f"instance file {spec!r} must hold a JSON array or JSON lines")
        instances = loaded
    except json.JSONDecodeError:
        try:
            instances = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise ValueError(f"instance file {spec!r} is not valid JSON: {exc}") from None
    if not all(isinstance(i, dict) for i in instances):
        raise ValueError(f"instance file {spec!r} must hold JSON objects")
    return instances, None, None


@main.command("verify-lemma")
@click.option("--lemma", type=click.Choice(list(LEMMA_NAMES)), required=True)
@click.option(
    "--instances",
    "instances_spec",
    required=True,
    help="instance file (JSON array or JSON lines) or random:SEED:COUNT",
)
@_table_option
def verify_lemma(lemma, instances_spec, table) -> None:
    """Check one lemma on explicit or seeded random instances; exit 1 on violation."""
    try:
        instances, seed, count = _load_instances(instances_spec)
        batch = run_lemma_batch(lemma, instances=instances, seed=seed, count=count)
    except ValueError as exc:
        raise _bad_input(str(exc))
    out = {
        "schema_version": SCHEMA_VERSION,
        "lemma": lemma,
        "mode": "random" if instances is None else "file",
        "seed": seed,
        "checked": len(batch.verdicts),
        "violations": batch.violations,
        "holds": batch.holds,
        "verdicts": [v.to_record(seed) for v in batch.verdicts],
    }
    _emit(out, table)
    if not batch.holds:
        raise SystemExit(1)


@main.command()
@click.option("--p", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--r", type=int, required=True)
@_table_option
def spider(p, q, r, table) -> None:
    """Verify the closed-form value and criticality of a three-legged spider."""
    try:
        verdict = verify_spider(p, q, r)
    except ValueError as exc:
        raise _bad_input(str(exc))
    _emit({"schema_version": SCHEMA_VERSION, **verdict.to_dict()}, table)
    if not verdict.passed:
        raise SystemExit(1)


def _default_out_dir() -> Path:
    return Path(os.environ.get(CACHE_DIR_ENV, Path.cwd() / "domgame-scans"))


@main.command("scan-trees")
@click.option("--n", type=int, required=True, help="tree order to scan")
@click.option(
    "--resume",
    "resume_path",
    type=click.Path(),
    help="checkpoint file; loaded when present, written as the scan advances",
)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--budget", type=float, help="wall-time cap in seconds; partial progress is kept")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False),
    help=f"report directory (default ${CACHE_DIR_ENV} or ./domgame-scans)",
)
@_table_option
def scan_trees(n, resume_path, jobs, budget, out_dir, table) -> None:
    """Scan all free trees of order n for criticality; write reports + summary."""
    out = Path(out_dir) if out_dir else _default_out_dir()
    try:
        out.mkdir(parents=True, exist_ok=True)
        checkpoint_file = Path(resume_path) if resume_path else out / f"scan-n{n}-checkpoint.json"
        checkpoint = (
            ScanCheckpoint.load(checkpoint_file) if checkpoint_file.exists() else None
        )
        reports_file = out / f"critical-trees-n{n}.jsonl"
        if checkpoint is None:
            reports_file.unlink(missing_ok=True)
        with open(reports_file, "a", encoding="utf-8") as sink:
            result = scan_critical_trees(
                n,
                checkpoint,
                jobs=jobs,
                budget=budget,
                checkpoint_path=checkpoint_file,
                on_report=lambda r: print(json.dumps(r.to_dict()), file=sink),
            )
    except (ValueError, OSError) as exc:
        raise _bad_input(str(exc))
    summary = result.summary()
    summary_file = out / f"scan-n{n}-summary.json"
    summary_file.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    out_doc = {
        **summary,
        "reports_file": str(reports_file),
        "summary_file": str(summary_file),
        "checkpoint_file": str(checkpoint_file),
        "reports": [r.to_dict() for r in result.reports],
    }
    _emit(out_doc, table)


if __name__ == "__main__":
    sys.exit(main())
