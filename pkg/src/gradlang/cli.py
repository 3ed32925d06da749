"""Batch runner and REPL.

Exit codes: 0 success, 1 I/O or parse errors, 2 static type errors,
3 runtime type errors.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import prelude as prelude_mod
from . import runtime as R
from .diagnostics import (
    EvalError,
    KindError,
    LangError,
    ParseError,
    RuntimeTypeError,
    ScopeError,
    UnifyError,
)
from .session import Session


@dataclass
class CliConfig:
    mode: str  # run | repl | type-only
    path: str | None = None
    dynamic_by_default: bool = False
    dump_types: bool = False
    trace_unify: bool = False
    prices_path: str | None = None
    dump_prelude: bool = False


def build_config(argv: list[str]) -> CliConfig:
    parser = argparse.ArgumentParser(
        prog="gradlang",
        description="Run or type-check gradually typed contract programs.",
    )
    parser.add_argument("file", nargs="?", help="source file to run (REPL if omitted)")
    parser.add_argument("--type-only", action="store_true", help="infer and print the type, do not evaluate")
    parser.add_argument("--dynamic-by-default", action="store_true", help="treat un-annotated user code as dynamic")
    parser.add_argument("--dump-types", action="store_true", help="print the span -> type table")
    parser.add_argument("--trace-unify", action="store_true", help="print each unification constraint and case")
    parser.add_argument("--prices", metavar="PATH", help="CSV price fixture: date,name,price")
    parser.add_argument("--dump-prelude", action="store_true", help="print the embedded prelude and exit")
    ns = parser.parse_args(argv)
    if ns.dump_prelude:
        mode = "dump-prelude"
    elif ns.file is None:
        mode = "repl"
    elif ns.type_only:
        mode = "type-only"
    else:
        mode = "run"
    return CliConfig(
        mode=mode,
        path=ns.file,
        dynamic_by_default=ns.dynamic_by_default,
        dump_types=ns.dump_types,
        trace_unify=ns.trace_unify,
        prices_path=ns.prices,
    )


def _make_session(config: CliConfig, stderr) -> Session:
    trace = None
    if config.trace_unify:
        def trace(case, lhs, rhs):
            print(f"CASE {case}: {lhs} ≃ {rhs}", file=stderr)

    prices = R.PriceTable.from_file(config.prices_path) if config.prices_path else None
    session = Session(prices=prices, trace=None, dynamic_by_default=False)
    # The prelude stays fully static and untraced; flags only apply to user code.
    session.store.trace = trace
    session.dynamic_by_default = config.dynamic_by_default
    return session


def run(config: CliConfig, stdout=None, stderr=None, stdin=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    stdin = stdin if stdin is not None else sys.stdin

    if config.mode == "dump-prelude":
        print(prelude_mod.PRELUDE_SOURCE, file=stdout, end="")
        return 0

    if config.mode == "repl":
        return repl(config, stdout, stderr, stdin)

    try:
        with open(config.path, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as err:
        print(f"error: {err}", file=stderr)
        return 1

    try:
        session = _make_session(config, stderr)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=stderr)
        return 1

    try:
        if config.mode == "type-only":
            _, node = session.infer_source(source)
            print(session.show_type(node), file=stdout)
        else:
            value, node = session.run_source(source)
            print(f"{session.show_value(value)} : {session.show_type(node)}", file=stdout)
        if config.dump_types:
            for span, text in session.type_table():
                print(f"{span}  {text}", file=stdout)
        return 0
    except ParseError as err:
        print(f"error: {err}", file=stderr)
        return 1
    except (UnifyError, KindError, ScopeError) as err:
        print(f"error: {err}", file=stderr)
        return 2
    except RuntimeTypeError as err:
        print(f"error: {err} (blame {err.blame_span})", file=stderr)
        return 3
    except EvalError as err:
        print(f"error: {err}", file=stderr)
        return 1


def repl(config: CliConfig, stdout, stderr, stdin) -> int:
    try:
        session = _make_session(config, stderr)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=stderr)
        return 1
    print("gradlang repl — :type <expr>, :quit", file=stdout)
    while True:
        print("> ", file=stdout, end="", flush=True)
        line = stdin.readline()
        if not line:
            return 0
        line = line.strip()
        if not line:
            continue
        if line in (":quit", ":q"):
            return 0
        try:
            if line.startswith(":type "):
                print(session.type_of(line[len(":type "):]), file=stdout)
            elif line.startswith("let ") or line.startswith("let\t"):
                result = _try_binding(session, line)
                if result is not None:
                    name, node, _ = result
                    print(f"{name} : {session.show_type(node)}", file=stdout)
                else:
                    value, node = session.run_source(line)
                    print(f"{session.show_value(value)} : {session.show_type(node)}", file=stdout)
            else:
                value, node = session.run_source(line)
                print(f"{session.show_value(value)} : {session.show_type(node)}", file=stdout)
        except RuntimeTypeError as err:
            print(f"error: {err} (blame {err.blame_span})", file=stderr)
        except LangError as err:
            print(f"error: {err}", file=stderr)


def _try_binding(session: Session, line: str):
    # `let x = e` with no `in` is a REPL binding; with `in` it is a term.
    try:
        return session.bind_source(line)
    except ParseError:
        return None


def main(argv: list[str] | None = None) -> None:
    config = build_config(sys.argv[1:] if argv is None else argv)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
