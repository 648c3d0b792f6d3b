"""
Command-line front end.

    python backend/cli.py genus backend/data/six_vertex_example.txt
    python backend/cli.py poly backend/data/six_vertex_example.txt --method both
    python backend/cli.py poly --text "1 2 -1 2" --modified
    python backend/cli.py check --mode four-term-graph --max-size 4
    python backend/cli.py random bouquet --size 6 --seed 3

Input is a file path, "-" for stdin, or --text. The kind is detected from the
text: "signs:" means a signed graph, "v<k>:" records mean a rotation system,
anything else is read as a chord diagram.

Exit codes: 0 success, 1 a check or cross-check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import time
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, PositiveInt, ValidationError

from bouquet_algebra import (
    Bouquet,
    SignedGraph,
    genus_via_rank,
    parse_chord_diagram,
    parse_signed_graph,
    serialize_chord_diagram,
    serialize_signed_graph,
    signed_intersection_graph,
)
from checks import MODES, run_checks
from contraction import aux_bouquet, contract_edges, spanning_tree, validate_tree
from petrial_poly import (
    GenusPolynomial,
    modified_poly_bouquet,
    modified_poly_signed_graph,
    petrial_poly,
)
from random_instances import make_rng, random_bouquet, random_ribbon_graph, random_signed_graph
from ribbon_core import (
    InvalidGraphError,
    RibbonGraph,
    RibbonGraphError,
    boundary_components,
    connected_components,
    euler_genus,
    parse,
    require_connected,
    serialize,
)
from settings import get_settings

log = logging.getLogger("petrial.cli")

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
UNCAPPED = 10**9

Instance = Union[RibbonGraph, SignedGraph]


# ---------------------------------------------------------
# Run configuration and reports
# ---------------------------------------------------------
class RunConfig(BaseModel):
    command: str
    input: Optional[str] = None
    method: Literal["rank", "bruteforce", "both"] = "rank"
    modified: bool = False
    tree: Optional[List[int]] = None
    bruteforce_cap: PositiveInt = 24
    rank_cap: PositiveInt = 30
    seed: Optional[int] = None
    format: Literal["text", "json"] = "text"
    threads: PositiveInt = 1
    progress: bool = False


class GenusReport(BaseModel):
    vertices: int
    edges: int
    faces: int
    components: int
    tree: List[int]
    genus_traced: int
    genus_rank: int
    agree: bool


class PolyReport(BaseModel):
    poly: Dict[str, int]
    edges: int
    method: str
    coeff_sum: int
    modified: bool = False
    agree: Optional[bool] = None


# ---------------------------------------------------------
# Run log
# ---------------------------------------------------------
def log_run_to_file(path: str, command: str, source: Optional[str], elapsed_ms: float, ok: bool, result: Any) -> None:
    """Append one CLI run to `path` as a JSON line."""
    record = {
        "run_id": str(uuid.uuid4()),
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "command": command,
        "input": source,
        "elapsed_ms": round(elapsed_ms, 3),
        "ok": ok,
        "result": result,
    }
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "a", encoding="utf-8") as f:
        f.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_runs_from_file(path: str, limit: int = 50) -> List[dict]:
    """The most recent `limit` runs, newest first; unreadable lines are skipped."""
    if not os.path.exists(path):
        return []
    with open(path, "r", encoding="utf-8") as f:
        lines = f.readlines()

    records: List[dict] = []
    for line in reversed(lines[-limit:]):
        line = line.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError:
            continue
    return records


# ---------------------------------------------------------
# Input
# ---------------------------------------------------------
_ROTATION_RECORD = re.compile(r"^\s*v\d+\s*:", re.MULTILINE)
_SIGNED_HEADER = re.compile(r"^\s*signs\s*:", re.MULTILINE | re.IGNORECASE)


def read_source(args: argparse.Namespace) -> tuple[str, str]:
    """(text, description of where it came from)."""
    if getattr(args, "text", None) is not None:
        return args.text, "<text>"
    source = getattr(args, "input", None)
    if source is None:
        raise InvalidGraphError("no input given (pass a path, '-' or --text)")
    if source == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        with open(source, "r", encoding="utf-8") as f:
            return f.read(), source
    except OSError as exc:
        raise InvalidGraphError(f"cannot read {source}: {exc.strerror}") from exc


def parse_instance(text: str) -> Instance:
    """Detect the input kind and parse it. One-vertex rotation systems come back as bouquets."""
    if _SIGNED_HEADER.search(text):
        return parse_signed_graph(text)
    if _ROTATION_RECORD.search(text):
        G = parse(text)
        return Bouquet.from_graph(G) if G.vertex_count == 1 else G
    return parse_chord_diagram(text)


def _require_ribbon(instance: Instance, command: str) -> RibbonGraph:
    if isinstance(instance, SignedGraph):
        raise InvalidGraphError(f"'{command}' needs a rotation system or chord diagram, not a signed graph")
    return instance


def _parse_labels(raw: Optional[str]) -> Optional[List[int]]:
    if raw is None:
        return None
    try:
        return [int(tok) for tok in raw.replace(",", " ").split()]
    except ValueError:
        raise InvalidGraphError(f"bad edge list {raw!r} (expected e.g. 1,3,5)") from None


def build_config(args: argparse.Namespace) -> RunConfig:
    settings = get_settings()
    force = getattr(args, "force", False)
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        method=getattr(args, "method", "rank"),
        modified=getattr(args, "modified", False),
        tree=_parse_labels(getattr(args, "tree", None)),
        bruteforce_cap=UNCAPPED if force else (getattr(args, "bruteforce_cap", None) or settings.bruteforce_cap),
        rank_cap=UNCAPPED if force else (getattr(args, "rank_cap", None) or settings.rank_cap),
        seed=getattr(args, "seed", None),
        format=args.format,
        threads=getattr(args, "threads", None) or settings.threads,
        progress=args.progress,
    )


class CommandResult(BaseModel):
    exit_code: int = EXIT_OK
    text: str
    payload: Any = None


def emit(config: RunConfig, result: CommandResult) -> None:
    if config.format == "json":
        print(json.dumps(result.payload, ensure_ascii=False))
    else:
        print(result.text)


# ---------------------------------------------------------
# Commands
# ---------------------------------------------------------
def cmd_genus(config: RunConfig, instance: Instance) -> CommandResult:
    """Face-traced genus next to the rank of the auxiliary bouquet's signed matrix."""
    G = _require_ribbon(instance, "genus")
    require_connected(G)
    T = spanning_tree(G) if config.tree is None else validate_tree(G, config.tree)

    traced = euler_genus(G)
    ranked = genus_via_rank(aux_bouquet(G, T))
    report = GenusReport(
        vertices=G.vertex_count,
        edges=G.edge_count,
        faces=boundary_components(G),
        components=connected_components(G),
        tree=sorted(T),
        genus_traced=traced,
        genus_rank=ranked,
        agree=traced == ranked,
    )
    if not report.agree:
        log.error("genus mismatch: face trace %d, rank %d", traced, ranked)

    text = (
        f"euler genus (face trace): {traced}\n"
        f"euler genus (rank):       {ranked}\n"
        f"agree: {'yes' if report.agree else 'NO'}"
    )
    return CommandResult(
        exit_code=EXIT_OK if report.agree else EXIT_FAILED, text=text, payload=report.model_dump()
    )


def _unmodified(config: RunConfig, G: RibbonGraph, method: str) -> GenusPolynomial:
    if method == "bruteforce":
        return petrial_poly(G, "bruteforce", cap=config.bruteforce_cap)
    return petrial_poly(
        G, "rank", config.tree, cap=config.rank_cap, threads=config.threads, progress=config.progress
    )


def _modified(config: RunConfig, instance: Instance, method: str) -> GenusPolynomial:
    """bruteforce: genus form for bouquets, one rank per subset for signed graphs."""
    brute = method == "bruteforce"
    cap = config.bruteforce_cap if brute else config.rank_cap
    if isinstance(instance, SignedGraph):
        return modified_poly_signed_graph(instance, "direct" if brute else "rank", cap=cap)
    if not isinstance(instance, Bouquet):
        raise InvalidGraphError("the modified polynomial is defined for bouquets and signed graphs")
    return modified_poly_bouquet(instance, "genus" if brute else "rank", cap=cap)


def cmd_poly(config: RunConfig, instance: Instance) -> CommandResult:
    """
    Unmodified or modified polynomial. With --method both the two engines run
    and a disagreement is a failed run.
    """
    if config.modified:
        edges = instance.order if isinstance(instance, SignedGraph) else instance.edge_count

        def compute(method: str) -> GenusPolynomial:
            return _modified(config, instance, method)
    else:
        G = _require_ribbon(instance, "poly")
        edges = G.edge_count

        def compute(method: str) -> GenusPolynomial:
            return _unmodified(config, G, method)

    agree: Optional[bool] = None
    if config.method == "both":
        poly, by_brute = compute("rank"), compute("bruteforce")
        agree = poly == by_brute
        if not agree:
            log.error("engines disagree: rank %s, bruteforce %s", poly, by_brute)
    else:
        poly = compute(config.method)

    report = PolyReport(
        poly=poly.to_json_dict(),
        edges=edges,
        method=config.method,
        coeff_sum=poly.coefficient_sum(),
        modified=config.modified,
        agree=agree,
    )
    text = poly.to_text()
    if agree is not None:
        text += "\nmethods agree" if agree else f"\nMETHODS DISAGREE: bruteforce gives {by_brute}"
    return CommandResult(
        exit_code=EXIT_FAILED if agree is False else EXIT_OK,
        text=text,
        payload=report.model_dump(exclude_none=True),
    )


def cmd_aux(config: RunConfig, instance: Instance) -> CommandResult:
    G = _require_ribbon(instance, "aux")
    require_connected(G)
    T = spanning_tree(G) if config.tree is None else validate_tree(G, config.tree)
    B = aux_bouquet(G, T)

    payload = {
        "tree": sorted(T),
        "bouquet": serialize_chord_diagram(B),
        "signed_intersection_graph": serialize_signed_graph(signed_intersection_graph(B)),
    }
    text = "\n".join([
        "tree: " + " ".join(map(str, payload["tree"])),
        "bouquet: " + payload["bouquet"],
        payload["signed_intersection_graph"],
    ])
    return CommandResult(text=text, payload=payload)


def cmd_contract(config: RunConfig, instance: Instance, edges: Sequence[int]) -> CommandResult:
    G = _require_ribbon(instance, "contract")
    if not edges:
        raise InvalidGraphError("pass at least one --edge to contract")
    H = contract_edges(G, edges)
    text = serialize_chord_diagram(H) if isinstance(H, Bouquet) else serialize(H)
    return CommandResult(text=text, payload={"contracted": list(edges), "result": text})


def cmd_check(config: RunConfig, mode: str, trials: int, max_size: Optional[int]) -> CommandResult:
    reports = run_checks(
        mode, trials=trials, seed=config.seed, max_size=max_size, progress=config.progress, threads=config.threads
    )
    lines = []
    for report in reports:
        lines.append(report.summary())
        lines += [f"  {failure}" for failure in report.failures]
    return CommandResult(
        exit_code=EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED,
        text="\n".join(lines),
        payload=[dict(report.model_dump(), passed=report.passed) for report in reports],
    )


def cmd_random(config: RunConfig, kind: str, size: int, edges: Optional[int]) -> CommandResult:
    """Serialized random instance; the same seed always gives the same text."""
    rng = make_rng(config.seed)
    try:
        if kind == "bouquet":
            text = serialize_chord_diagram(random_bouquet(size, rng))
        elif kind == "ribbon":
            m = edges if edges is not None else 2 * size
            text = serialize(random_ribbon_graph(size, m, rng))
        elif kind == "signed-graph":
            text = serialize_signed_graph(random_signed_graph(size, rng))
        else:
            raise InvalidGraphError(f"unknown kind {kind!r}")
    except RibbonGraphError:
        raise
    except ValueError as exc:
        raise InvalidGraphError(str(exc)) from exc
    return CommandResult(text=text, payload={"kind": kind, "seed": config.seed, "instance": text})


def cmd_runs(path: Optional[str], limit: int) -> CommandResult:
    """Most recent runs from the run log, newest first."""
    if not path:
        raise InvalidGraphError("no run log configured (pass --log or set PETRIAL_RUN_LOG)")
    runs = read_runs_from_file(path, limit)
    lines = [
        f"{r.get('timestamp')}  {r.get('command')}  {'ok' if r.get('ok') else 'FAILED'}  "
        f"{r.get('elapsed_ms')} ms  {r.get('input') or '-'}"
        for r in runs
    ]
    return CommandResult(text="\n".join(lines) or "no runs logged", payload=runs)


# ---------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--log", default=None, help="append a JSON line per run to this file")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--progress", action="store_true", help="show progress bars")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("input", nargs="?", help="input file, or '-' for stdin")
    source.add_argument("--text", default=None, help="inline input instead of a file")

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--threads", type=int, default=None)
    engine.add_argument("--bruteforce-cap", type=int, default=None)
    engine.add_argument("--rank-cap", type=int, default=None)
    engine.add_argument("--force", action="store_true", help="ignore the edge caps")

    tree = argparse.ArgumentParser(add_help=False)
    tree.add_argument("--tree", default=None, help="spanning tree edge labels, e.g. 1,4,7")

    parser = argparse.ArgumentParser(prog="petrial", description="Partial Petrial polynomials of ribbon graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("genus", parents=[common, source, tree], help="Euler genus by face tracing and by rank")

    poly = sub.add_parser("poly", parents=[common, source, engine, tree], help="partial Petrial polynomial")
    poly.add_argument("--method", choices=("rank", "bruteforce", "both"), default="rank")
    poly.add_argument("--modified", action="store_true", help="signed (modified) polynomial")

    sub.add_parser("aux", parents=[common, source, tree], help="auxiliary bouquet for a spanning tree")

    contract = sub.add_parser("contract", parents=[common, source], help="contract edges in the given order")
    contract.add_argument("--edge", type=int, action="append", default=[])

    check = sub.add_parser("check", parents=[common, engine], help="run identity checks")
    check.add_argument("--mode", choices=MODES, default="all")
    check.add_argument("--random", type=int, default=0, dest="trials", help="random trials per mode")
    check.add_argument("--max-size", type=int, default=None, help="exhaustive sweep up to this size")
    check.add_argument("--seed", type=int, default=None)

    rand = sub.add_parser("random", parents=[common], help="print a random instance")
    rand.add_argument("kind", choices=("bouquet", "ribbon", "signed-graph"))
    rand.add_argument("--size", type=int, default=4, help="chords, vertices or signed-graph order")
    rand.add_argument("--edges", type=int, default=None, help="edge count for ribbon graphs")
    rand.add_argument("--seed", type=int, default=None)

    runs = sub.add_parser("runs", parents=[common], help="list recent runs from the run log")
    runs.add_argument("--limit", type=int, default=20)

    return parser


def _dispatch(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    if args.command == "check":
        return cmd_check(config, args.mode, args.trials, args.max_size)
    if args.command == "random":
        return cmd_random(config, args.kind, args.size, args.edges)
    if args.command == "runs":
        return cmd_runs(args.log or get_settings().run_log, args.limit)

    text, where = read_source(args)
    config.input = where
    instance = parse_instance(text)
    if args.command == "genus":
        return cmd_genus(config, instance)
    if args.command == "poly":
        return cmd_poly(config, instance)
    if args.command == "aux":
        return cmd_aux(config, instance)
    return cmd_contract(config, instance, args.edge)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    t0 = time.time()
    config: Optional[RunConfig] = None
    try:
        config = build_config(args)
        result = _dispatch(args, config)
        emit(config, result)
        code, logged = result.exit_code, result.payload
    except (RibbonGraphError, ValidationError) as exc:
        message = str(exc).splitlines()[0] if isinstance(exc, ValidationError) else str(exc)
        print(f"error: {message}", file=sys.stderr)
        code, logged = EXIT_INPUT, {"error": message}
    elapsed_ms = (time.time() - t0) * 1000.0

    log_path = None if args.command == "runs" else args.log or get_settings().run_log
    if log_path:
        try:
            log_run_to_file(
                log_path,
                command=args.command,
                source=config.input if config else None,
                elapsed_ms=elapsed_ms,
                ok=code == EXIT_OK,
                result=logged,
            )
        except (OSError, TypeError) as exc:
            log.warning("Failed to write run log %s: %s", log_path, exc)
    return code


if __name__ == "__main__":
    sys.exit(main())
