"""Command-line front end: check, run, dot, confluence.

Results go to standard output and diagnostics to standard error.  Exit codes:
``run`` gives 0 normal, 3 fuel exhausted, 4 stuck; ``check`` and
``confluence`` give 1 on any violation or counterexample; 2 means an input
could not be read.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from .combinators import combinator_system
from .core import (
    Agent,
    CanonicalizationLimitError,
    Configuration,
    DEFAULT_MAX_AGENTS,
    InteractionSystem,
    InvalidSystemError,
    Name,
    canonicalize,
)
from .engine import (
    FUEL_EXHAUSTED,
    NORMAL,
    Strategy,
    iter_trace_lines,
    iter_trace_records,
    normalize,
)
from .oracle import (
    InconclusiveError,
    build_reduction_graph,
    check_diamond,
    check_unique_normal_form,
    generate_random_configuration,
)
from .parser import (
    ParseError,
    SourceDocument,
    parse_configuration,
    parse_document,
    render,
    tokenize,
)

BUILTIN = "builtin:combinators"
EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_FUEL, EXIT_STUCK = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    system: str = BUILTIN
    config: str | None = None
    strategy: str = "fifo"
    seed: int | None = None
    fuel: int = 1_000_000
    trace: bool = False
    format: str = "text"
    samples: int = 1000
    max_agents: int = 12
    max_nodes: int = 200

    def __post_init__(self):
        if self.fuel < 0:
            raise ValueError("fuel must be >= 0")
        if self.samples < 1 or self.max_agents < 1 or self.max_nodes < 1:
            raise ValueError("caps must be >= 1")
        if self.strategy == "random" and self.seed is None:
            raise ValueError("--strategy random needs --seed")

    def make_strategy(self) -> Strategy:
        return Strategy(self.strategy, self.seed if self.strategy == "random" else None)


# -- loading ------------------------------------------------------------------


def _read(path: str) -> SourceDocument:
    try:
        return SourceDocument.from_path(path)
    except (OSError, UnicodeDecodeError) as e:
        raise _Fail(EXIT_IO, f"{path}: cannot read: {e}") from e


def _starts_with_system(doc: SourceDocument) -> bool:
    try:
        first = tokenize(doc)[0]
    except ParseError:
        return False
    return first.kind == "ident" and first.text == "agents"


def _parsed(fn, *args):
    try:
        return fn(*args)
    except ParseError as e:
        raise _Fail(EXIT_INVALID, str(e)) from e
    except InvalidSystemError as e:
        raise _Fail(EXIT_INVALID, "\n".join(e.problems)) from e


def load_system(source: str) -> tuple[InteractionSystem, Configuration | None]:
    """A system from ``builtin:combinators`` or a file, plus any configuration that follows it."""
    if source == BUILTIN:
        return combinator_system(), None
    return _parsed(parse_document, _read(source))


def load_inputs(rc: RunConfig) -> tuple[InteractionSystem, Configuration]:
    system, embedded = load_system(rc.system)
    if rc.config is None:
        if embedded is None:
            raise _Fail(EXIT_INVALID, "no configuration given (use --config)")
        return system, embedded
    doc = _read(rc.config)
    if _starts_with_system(doc):
        _, c = _parsed(parse_document, doc)
        if c is None:
            raise _Fail(EXIT_INVALID, f"{rc.config}: no configuration after the system")
        # reparse against the selected system so agent names resolve there
        return system, _parsed(parse_configuration, SourceDocument(render(c), rc.config), system)
    return system, _parsed(parse_configuration, doc, system)


# -- DOT ----------------------------------------------------------------------


def to_dot(c: Configuration, signature, max_agents: int = DEFAULT_MAX_AGENTS) -> str:
    """Deterministic DOT text for the net of ``c``.

    Node ids follow the canonical form, so alpha-equivalent configurations give
    identical output.  Principal-to-principal edges are drawn bold red.
    """
    c = canonicalize(c, max_agents)
    lines = ["graph net {", "  node [shape=circle];"]
    # a vertex is ("port", agent, port) with port 0 principal, or ("name", id)
    # or ("iface", k); names are interior vertices of wires
    adj: dict[tuple, list[tuple[int, tuple]]] = {}
    ports: list[tuple] = []
    agents: list[Agent] = []
    wires = 0

    def link(a, b):
        nonlocal wires
        adj.setdefault(a, []).append((wires, b))
        adj.setdefault(b, []).append((wires, a))
        wires += 1

    def ref(t) -> tuple:
        if isinstance(t, Name):
            return ("name", t.id)
        k = len(agents)
        agents.append(t)
        ports.append(("port", k, 0))
        for j, arg in enumerate(t.args, 1):
            ports.append(("port", k, j))
            link(("port", k, j), ref(arg))
        return ("port", k, 0)

    for eq in c.equations:
        link(ref(eq.lhs), ref(eq.rhs))
    for k, n in enumerate(c.interface):
        link(("iface", k), ("name", n))

    for k, a in enumerate(agents):
        arity = signature[a.symbol].arity if a.symbol in signature else len(a.args)
        lines.append(f'  a{k} [label="{a.symbol}/{arity}"];')
    for k, n in enumerate(c.interface):
        lines.append(f'  i{k} [shape=plaintext, label="{_dot_escape(c.label(n))}"];')

    used: set[int] = set()

    def walk(v):
        # follow a wire through name vertices to its other end
        w, cur = adj[v][0]
        used.add(w)
        while cur[0] == "name":
            w, cur = next((e, x) for e, x in adj[cur] if e not in used)
            used.add(w)
        return cur

    def node(v) -> str:
        return f"a{v[1]}" if v[0] == "port" else f"i{v[1]}"

    done: set[tuple] = set()
    for v in ports + [("iface", k) for k in range(len(c.interface))]:
        if v in done:
            continue
        w = walk(v)
        done.update((v, w))
        attrs = []
        if v[0] == "port":
            attrs.append(f'taillabel="{_port_label(v[2])}"')
        if w[0] == "port":
            attrs.append(f'headlabel="{_port_label(w[2])}"')
        if v[0] == w[0] == "port" and v[2] == w[2] == 0:
            attrs += ["color=red", "penwidth=2"]
        lines.append(f"  {node(v)} -- {node(w)} [{', '.join(attrs)}];")
    # whatever is left are closed loops made only of names
    loops = 0
    for w in range(wires):
        if w in used:
            continue
        start = next(x for x, edges in adj.items() if any(e == w for e, _ in edges))
        cur, e = start, w
        while e is not None:
            used.add(e)
            cur = next(x for f, x in adj[cur] if f == e)
            e = next((f for f, _ in adj[cur] if f not in used), None)
        lines.append(f'  loop{loops} [shape=point, label=""];')
        lines.append(f"  loop{loops} -- loop{loops};")
        loops += 1
    lines.append("}")
    return "\n".join(lines) + "\n"


def _port_label(p: int) -> str:
    return "p" if p == 0 else str(p)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


# -- commands -----------------------------------------------------------------


def cmd_check(paths: Sequence[str], system: str | None, out: TextIO, err: TextIO) -> int:
    status = EXIT_OK
    for path in paths:
        try:
            doc = _read(path)
            if _starts_with_system(doc):
                _parsed(parse_document, doc)
            else:
                sys_, _ = load_system(system or BUILTIN)
                _parsed(parse_configuration, doc, sys_)
            print(f"{path}: ok", file=out)
        except _Fail as e:
            print(e, file=err)
            status = max(status, e.code)
    return status


def _summary_text(summary: dict, final: str) -> list[str]:
    return [f"{k}: {v}" for k, v in summary.items()] + [f"final: {final}"]


def cmd_run(rc: RunConfig, out: TextIO, err: TextIO) -> int:
    system, c = load_inputs(rc)
    result = normalize(c, system, rc.make_strategy(), rc.fuel, trace=rc.trace)
    shown = lambda x: render(x, system.signature)  # noqa: E731
    final = shown(result.final)
    if rc.format == "dot":
        try:
            out.write(to_dot(result.final, system.signature))
        except CanonicalizationLimitError as e:
            raise _Fail(EXIT_INVALID, str(e)) from e
    elif rc.format == "structured":
        if rc.trace:
            for rec in iter_trace_records(result.trace, shown):
                print(rec, file=out)
        print(json.dumps({**result.summary(), "final": final}, sort_keys=True), file=out)
    else:
        if rc.trace:
            for line in iter_trace_lines(result.trace, shown):
                print(line, file=out)
        for line in _summary_text(result.summary(), final):
            print(line, file=out)
    report = result.report
    if report is not None:
        for i in report.deadlocks:
            eq = result.final.equations[i]
            print(f"deadlock: eq={i} {shown(Configuration((eq,), (), result.final.labels))}", file=err)
        for i in report.norule:
            eq = result.final.equations[i]
            print(f"no rule: eq={i} {eq.lhs.symbol} >< {eq.rhs.symbol}", file=err)
    if result.status == NORMAL:
        return EXIT_OK
    if result.status == FUEL_EXHAUSTED:
        return EXIT_FUEL
    return EXIT_STUCK


def cmd_dot(rc: RunConfig, out: TextIO, err: TextIO) -> int:
    system, c = load_inputs(rc)
    try:
        out.write(to_dot(c, system.signature))
    except CanonicalizationLimitError as e:
        raise _Fail(EXIT_INVALID, str(e)) from e
    return EXIT_OK


def cmd_confluence(rc: RunConfig, out: TextIO, err: TextIO) -> int:
    system, _ = load_system(rc.system)
    base = rc.seed or 0
    passed = failed = inconclusive = 0
    for i in range(rc.samples):
        c = generate_random_configuration(system, rc.max_agents, i % 3, base + i)
        g = build_reduction_graph(c, system, max_nodes=rc.max_nodes)
        try:
            diamond = check_diamond(g)
        except InconclusiveError:
            inconclusive += 1
            continue
        unique = check_unique_normal_form(g)
        if diamond.holds and unique.unique:
            passed += 1
            continue
        failed += 1
        why = "diamond" if not diamond.holds else "normal form"
        text = render(c, system.signature)
        if rc.format == "structured":
            print(json.dumps({"sample": i, "failure": why, "config": text}, sort_keys=True), file=out)
        else:
            print(f"counterexample sample={i} ({why}): {text}", file=out)
    counts = {"samples": rc.samples, "passed": passed, "failed": failed, "inconclusive": inconclusive}
    if rc.format == "structured":
        print(json.dumps(counts, sort_keys=True), file=out)
    else:
        print(" ".join(f"{k}={v}" for k, v in counts.items()), file=out)
    if inconclusive:
        print(f"warning: {inconclusive} sample(s) inconclusive (node cap {rc.max_nodes})", file=err)
    return EXIT_INVALID if failed else EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inets", description="Interaction nets: check, reduce, export, audit.")
    sub = p.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse and validate input files")
    check.add_argument("paths", nargs="+")
    check.add_argument("--system", help=f"system for bare configuration files (default {BUILTIN})")

    def common(q, config=True):
        q.add_argument("--system", default=BUILTIN, help=f"system file or {BUILTIN}")
        if config:
            q.add_argument("--config", help="configuration file")
        q.add_argument("--strategy", choices=Strategy.KINDS, default="fifo")
        q.add_argument("--seed", type=int)
        q.add_argument("--fuel", type=int, default=1_000_000)
        q.add_argument("--trace", action="store_true")
        q.add_argument("--format", choices=("text", "structured", "dot"), default="text")

    common(sub.add_parser("run", help="normalize a configuration"))
    common(sub.add_parser("dot", help="export a configuration as DOT"))
    audit = sub.add_parser("confluence", help="audit strong confluence on random samples")
    common(audit, config=False)
    audit.add_argument("--samples", type=int, default=1000)
    audit.add_argument("--max-agents", type=int, default=12)
    audit.add_argument("--max-nodes", type=int, default=200)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args.paths, args.system, out, err)
        try:
            rc = RunConfig(
                system=args.system,
                config=getattr(args, "config", None),
                strategy=args.strategy,
                seed=args.seed,
                fuel=args.fuel,
                trace=args.trace,
                format=args.format,
                samples=getattr(args, "samples", 1000),
                max_agents=getattr(args, "max_agents", 12),
                max_nodes=getattr(args, "max_nodes", 200),
            )
        except ValueError as e:
            print(f"error: {e}", file=err)
            return EXIT_INVALID
        command = {"run": cmd_run, "dot": cmd_dot, "confluence": cmd_confluence}[args.command]
        return command(rc, out, err)
    except _Fail as e:
        print(e, file=err)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
