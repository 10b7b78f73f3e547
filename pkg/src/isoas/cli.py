"""Command-line interface and interactive REPL.

Exit codes: 0 success, 1 domain error, 2 usage error (argparse default).
The engine home comes from --home, else $ISOAS_HOME, else ~/.isoas.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .engine import Engine, PipelineResponse
from .errors import IsoasError
from .repository import SavedQuery
from .resolver import integrate, resolve

PROG = "isoas"


def default_home() -> Path:
    env = os.environ.get("ISOAS_HOME")
    if env:
        return Path(env)
    return Path.home() / ".isoas"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Natural-language search over embedded product-data stores.",
    )
    parser.add_argument("--home", help="engine home directory (default: $ISOAS_HOME or ~/.isoas)")
    parser.add_argument("--lexicon", help="path to an alternative lexicon file")
    parser.add_argument("--ontology", help="path to an alternative ontology file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("query", help="run a natural-language search")
    p.add_argument("text")
    p.add_argument("--store", help="target store (default: session store)")
    p.add_argument("--session", default=None)
    p.add_argument("--json", action="store_true", help="print the raw response JSON")

    p = sub.add_parser("sql", help="run a restricted-SQL search")
    p.add_argument("statement")
    p.add_argument("--store")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("store", help="manage record stores")
    action = p.add_subparsers(dest="action", required=True)
    for name in ("create", "attach", "detach"):
        ap = action.add_parser(name)
        ap.add_argument("name")
    action.add_parser("list")

    p = sub.add_parser("ingest", help="load a CSV file into a store")
    p.add_argument("file")
    p.add_argument("--store", required=True)

    p = sub.add_parser("saved", help="manage saved queries")
    action = p.add_subparsers(dest="action", required=True)
    ap = action.add_parser("save")
    ap.add_argument("name")
    group = ap.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="derive the query from natural language")
    group.add_argument("--sql", help="save a raw restricted-SQL statement")
    ap.add_argument("--store")
    ap.add_argument("--overwrite", action="store_true")
    ap = action.add_parser("edit")
    ap.add_argument("name")
    group = ap.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--sql")
    ap.add_argument("--store")
    ap = action.add_parser("run")
    ap.add_argument("name")
    ap.add_argument("--bind", action="append", default=[], help="value for one query hole")
    ap.add_argument("--store")
    ap.add_argument("--json", action="store_true")
    ap = action.add_parser("show")
    ap.add_argument("name")
    action.add_parser("list")
    ap = action.add_parser("delete")
    ap.add_argument("name")

    p = sub.add_parser("repl", help="interactive session")
    p.add_argument("--store")

    p = sub.add_parser("serve", help="start the HTTP service and console")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--console", help="directory with the built web console")

    return parser


def make_engine(args: argparse.Namespace) -> Engine:
    home = Path(args.home) if args.home else default_home()
    return Engine(home, lexicon_path=args.lexicon, ontology_path=args.ontology)


# -- output formatting


def format_response(resp: PipelineResponse) -> str:
    lines = []
    if resp.tokens is not None:
        badges = " ".join(f"[{t.cls.value} {t.lexeme}]" for t in resp.tokens)
        lines.append(f"tokens:  {badges}")
    if resp.rules is not None:
        lines.append(f"rule:    {', '.join(resp.rules)}")
    if resp.models is not None:
        for m in resp.models:
            parts = [m.intent.value]
            if m.subject:
                parts.append(f"subject={m.subject}")
            if m.predicate:
                parts.append(f"verb={m.predicate!r}")
            if m.concept:
                parts.append(f"concept={m.concept}")
            if m.condition:
                parts.append(f"condition={m.condition.kind.value}")
            lines.append(f"model:   {' '.join(parts)}")
    if resp.sql is not None:
        lines.append(f"sql:     {resp.sql}")
    if resp.results is not None:
        lines.append(f"results: {len(resp.results)} row(s)")
        if resp.results:
            rows = [["id", "name", "kind", "value"]] + [
                [str(r.to_json()["id"]), r.name, r.kind, str(r.to_json()["value"])]
                for r in resp.results
            ]
            widths = [max(len(row[i]) for row in rows) for i in range(4)]
            for row in rows:
                lines.append("  " + "  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    for note in resp.diagnostics:
        lines.append(f"note:    {note}")
    if resp.error is not None:
        stage = resp.error.get("stage", "?")
        lines.append(f"error:   [{stage}] {resp.error.get('type')}: {resp.error.get('message')}")
        if resp.error.get("expected"):
            lines.append(f"         expected next: {', '.join(resp.error['expected'])}")
    return "\n".join(lines)


def _emit(resp: PipelineResponse, as_json: bool) -> int:
    if as_json:
        print(json.dumps(resp.to_json(), indent=2, sort_keys=True))
    else:
        print(format_response(resp))
    return 0 if resp.ok else 1


def _derive_ir(engine: Engine, text: str, store: str) -> str:
    """NL text -> query IR JSON, without executing or logging anything."""
    from .lexer import tokenize
    from .modeler import build_model
    from .parser import parse_many

    ts = tokenize(text, engine.lexicon)
    statements = parse_many(ts)
    models = [
        build_model(s, engine.ontology, engine.agreement, engine.lexicon)
        for s in statements
    ]
    queries = [resolve(m, store) for m in models]
    return json.dumps(integrate(queries).to_json(), sort_keys=True)


# -- command handlers


def _cmd_query(engine: Engine, args) -> int:
    return _emit(engine.process(args.text, args.session, args.store), args.json)


def _cmd_sql(engine: Engine, args) -> int:
    return _emit(engine.run_sql(args.statement, store=args.store), args.json)


def _cmd_store(engine: Engine, args) -> int:
    if args.action == "list":
        for info in engine.repo.list_stores():
            count = "-" if info["records"] is None else str(info["records"])
            print(f"{info['name']:<20} {info['state']:<9} {count} record(s)")
        return 0
    handler = {
        "create": engine.repo.create_store,
        "attach": engine.repo.attach_store,
        "detach": engine.repo.detach_store,
    }[args.action]
    info = handler(args.name)
    print(f"store {info['name']} is {info['state']}")
    return 0


def _cmd_ingest(engine: Engine, args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    count = engine.repo.ingest(args.store, text)
    print(f"ingested {count} record(s) into {args.store}")
    return 0


def _cmd_saved(engine: Engine, args) -> int:
    repo = engine.repo
    if args.action == "list":
        for sq in repo.list_queries():
            print(f"{sq.name:<20} {sq.kind:<4} {sq.body}")
        return 0
    if args.action == "show":
        sq = repo.load_query(args.name)
        print(json.dumps(sq.to_json(), indent=2, sort_keys=True))
        return 0
    if args.action == "delete":
        repo.delete_query(args.name)
        print(f"deleted {args.name}")
        return 0
    if args.action == "run":
        return _emit(engine.run_saved(args.name, args.bind, store=args.store), args.json)
    # save / edit
    store = args.store or engine.default_store
    if args.sql is not None:
        body, kind = args.sql, "sql"
    else:
        body, kind = _derive_ir(engine, args.text, store), "ir"
    overwrite = args.action == "edit" or getattr(args, "overwrite", False)
    if args.action == "edit":
        repo.load_query(args.name)  # must already exist
    saved = repo.save_query(SavedQuery(name=args.name, body=body, kind=kind), overwrite=overwrite)
    print(f"saved {saved.name} ({saved.kind})")
    return 0


def _cmd_serve(engine: Engine, args) -> int:
    from .server import serve

    serve(engine, host=args.host, port=args.port, console_dir=args.console)
    return 0


REPL_HELP = """\
commands:
  <natural language>                 run a search on the active store
  sql <statement>                    run restricted SQL
  use <store>                        switch the active store
  store list|create|attach|detach    manage stores
  ingest <file.csv>                  load CSV into the active store
  saved list                         list saved queries
  saved save <name> sql <statement>  save a SQL query
  saved save <name> text <request>   save an NL-derived query
  saved run <name> [value ...]       run a saved query with bindings
  saved show|delete <name>
  history                            show this session's ledger entries
  help, exit
"""


def repl(engine: Engine, store: str | None = None) -> int:
    """Interactive loop; bare text is a natural-language query."""
    session_id = "repl"
    active = store or engine.default_store
    engine.session(session_id, active)
    print(f"{PROG} repl — store {active!r}; `help` for commands, `exit` to leave")
    while True:
        try:
            line = input(f"{PROG}> ").strip()
        except EOFError:
            print()
            return 0
        except KeyboardInterrupt:
            print()
            continue
        if not line:
            continue
        try:
            code = _repl_dispatch(engine, session_id, line)
            if code is None:
                return 0
        except IsoasError as exc:
            print(f"error: {exc}")
        except OSError as exc:
            print(f"error: {exc}")


def _repl_dispatch(engine: Engine, session_id: str, line: str) -> int | None:
    words = line.split()
    head = words[0].lower()
    active = engine.session(session_id).active_store

    if head in ("exit", "quit"):
        return None
    if head == "help":
        print(REPL_HELP, end="")
        return 0
    if head == "use" and len(words) == 2:
        engine.session(session_id, words[1])
        print(f"active store: {words[1]}")
        return 0
    if head == "sql":
        rest = line[len(words[0]):].strip()
        return _emit(engine.run_sql(rest, session_id=session_id), as_json=False)
    if head == "store" and len(words) >= 2:
        args = argparse.Namespace(action=words[1], name=words[2] if len(words) > 2 else None)
        return _cmd_store(engine, args)
    if head == "ingest" and len(words) == 2:
        text = Path(words[1]).read_text(encoding="utf-8")
        print(f"ingested {engine.repo.ingest(active, text)} record(s) into {active}")
        return 0
    if head == "history":
        for e in engine.repo.history(session_id):
            print(f"#{e.input_id} {e.stage:<9} {e.ts}")
        return 0
    if head == "saved" and len(words) >= 2:
        action = words[1]
        if action == "list":
            return _cmd_saved(engine, argparse.Namespace(action="list"))
        if action in ("show", "delete") and len(words) == 3:
            return _cmd_saved(engine, argparse.Namespace(action=action, name=words[2]))
        if action == "run" and len(words) >= 3:
            return _emit(
                engine.run_saved(words[2], list(words[3:]), session_id=session_id),
                as_json=False,
            )
        if action == "save" and len(words) >= 5 and words[3] in ("sql", "text"):
            rest = line.split(None, 4)[4]
            ns = argparse.Namespace(
                action="save",
                name=words[2],
                sql=rest if words[3] == "sql" else None,
                text=rest if words[3] == "text" else None,
                store=active,
                overwrite=True,
            )
            return _cmd_saved(engine, ns)
        print("usage: saved list|show|run|save|delete ... (`help` for details)")
        return 0
    # anything else is a natural-language query
    return _emit(engine.process(line, session_id=session_id), as_json=False)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        engine = make_engine(args)
        if args.command == "query":
            return _cmd_query(engine, args)
        if args.command == "sql":
            return _cmd_sql(engine, args)
        if args.command == "store":
            return _cmd_store(engine, args)
        if args.command == "ingest":
            return _cmd_ingest(engine, args)
        if args.command == "saved":
            return _cmd_saved(engine, args)
        if args.command == "repl":
            return repl(engine, args.store)
        if args.command == "serve":
            return _cmd_serve(engine, args)
    except IsoasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
