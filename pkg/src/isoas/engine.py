"""Pipeline orchestration: input -> lex -> parse -> model -> resolve -> execute.

Every stage outcome is persisted to the ledger before the next stage runs,
and failures are returned as structured data inside the response (with all
fields up to the failing stage populated) so interfaces can show hints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import IsoasError, UnknownStore
from .lexer import TokenStream, tokenize
from .lexicon import (
    AgreementTable,
    Lexicon,
    Ontology,
    default_lexicon,
    default_ontology,
    load_lexicon,
    load_ontology,
)
from .modeler import SemanticModel, build_model
from .parser import Statement, parse_many
from .repository import LedgerEntry, Record, Repository
from .resolver import StructuredQuery, bind, integrate, render_sql, resolve
from .sql import parse_sql

DEFAULT_STORE = "main"
DEFAULT_SESSION = "default"


@dataclass(frozen=True)
class Session:
    id: str
    active_store: str
    created: str


@dataclass
class PipelineResponse:
    """One pipeline run; fields stay None past the first failing stage."""

    input_id: int | None = None
    session: str | None = None
    store: str | None = None
    tokens: TokenStream | None = None
    rules: list[str] | None = None
    models: list[SemanticModel] | None = None
    query: StructuredQuery | None = None
    sql: str | None = None
    results: list[Record] | None = None
    diagnostics: list[str] = field(default_factory=list)
    error: dict | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_json(self) -> dict:
        return {
            "input_id": self.input_id,
            "session": self.session,
            "store": self.store,
            "tokens": self.tokens.to_json() if self.tokens else None,
            "rules": self.rules,
            "models": [m.to_json() for m in self.models] if self.models is not None else None,
            "query": self.query.to_json() if self.query else None,
            "sql": self.sql,
            "results": [r.to_json() for r in self.results] if self.results is not None else None,
            "diagnostics": self.diagnostics,
            "error": self.error,
        }

    def to_json_bytes(self) -> bytes:
        """Canonical serialized form; the HTTP service returns exactly this."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode("utf-8")


def _stage_error(stage: str, exc: IsoasError) -> dict:
    return {"stage": stage, **exc.to_json()}


class Engine:
    """Owns the knowledge base, the repository, and the session registry."""

    def __init__(
        self,
        home: str | Path,
        lexicon_path: str | Path | None = None,
        ontology_path: str | Path | None = None,
        default_store: str = DEFAULT_STORE,
    ):
        self.repo = Repository(home)
        if lexicon_path is not None:
            self.lexicon: Lexicon = load_lexicon(Path(lexicon_path).read_text(encoding="utf-8"))
        else:
            self.lexicon = default_lexicon()
        if ontology_path is not None:
            self.ontology: Ontology = load_ontology(Path(ontology_path).read_text(encoding="utf-8"))
        else:
            self.ontology = default_ontology()
        self.agreement = AgreementTable.from_ontology(self.ontology)
        self.default_store = default_store
        if not self.repo.has_store(default_store):
            self.repo.create_store(default_store)
        self._sessions: dict[str, Session] = {}

    # -- sessions

    def session(self, session_id: str | None, store: str | None = None) -> Session:
        sid = session_id or DEFAULT_SESSION
        current = self._sessions.get(sid)
        if current is None:
            current = Session(
                id=sid,
                active_store=store or self.default_store,
                created=datetime.now(timezone.utc).isoformat(),
            )
            self._sessions[sid] = current
        elif store and store != current.active_store:
            current = Session(id=sid, active_store=store, created=current.created)
            self._sessions[sid] = current
        return current

    # -- the pipeline

    def process(
        self,
        text: str,
        session_id: str | None = None,
        store: str | None = None,
    ) -> PipelineResponse:
        """Run the full sequence, persisting each completed stage."""
        sess = self.session(session_id, store)
        target = store or sess.active_store
        resp = PipelineResponse(session=sess.id, store=target)

        input_id = self.repo.next_input_id()
        resp.input_id = input_id
        self._log(input_id, sess.id, "input", {"text": text, "store": target})

        # lex; an input with no usable words fails here
        ts = tokenize(text, self.lexicon)
        if not ts.tokens:
            resp.error = {
                "stage": "lexed",
                "type": "EmptyInput",
                "message": "input contains no tokens",
            }
            return resp
        resp.tokens = ts
        self._log(input_id, sess.id, "lexed", ts.to_json())

        # parse
        try:
            statements = parse_many(ts)
        except IsoasError as exc:
            resp.error = _stage_error("parsed", exc)
            return resp
        resp.rules = [s.rule.value for s in statements]
        self._log(input_id, sess.id, "parsed", [s.to_json() for s in statements])

        # model
        try:
            models = [
                build_model(s, self.ontology, self.agreement, self.lexicon)
                for s in statements
            ]
        except IsoasError as exc:
            resp.error = _stage_error("modeled", exc)
            return resp
        resp.models = models
        self._log(input_id, sess.id, "modeled", [m.to_json() for m in models])

        # resolve (+ integrate); fragments become hints, not queries
        attribute = self._condition_attribute(target)
        queries: list[StructuredQuery] = []
        fragment_error: IsoasError | None = None
        for m in models:
            try:
                queries.append(resolve(m, target, attribute))
            except IsoasError as exc:
                fragment_error = exc
                resp.diagnostics.append(str(exc))
        if not queries:
            resp.error = _stage_error("resolved", fragment_error)
            return resp
        try:
            query = integrate(queries)
        except IsoasError as exc:
            resp.error = _stage_error("resolved", exc)
            return resp
        resp.query = query
        resp.diagnostics.extend(query.notes)
        self._log(input_id, sess.id, "resolved", query.to_json())

        # execute
        return self._finish(resp, query, input_id=input_id, session_id=sess.id)

    def run_saved(
        self,
        name: str,
        bindings: list | None = None,
        session_id: str | None = None,
        store: str | None = None,
    ) -> PipelineResponse:
        """Execute a saved query; no natural-language stages, no ledger."""
        sess = self.session(session_id, store)
        target = store or sess.active_store
        resp = PipelineResponse(session=sess.id, store=target)
        try:
            sq = self.repo.load_query(name)
            if sq.kind == "ir":
                query = StructuredQuery.from_json(json.loads(sq.body))
                if store is None and self.repo.has_store(query.store):
                    target = query.store
                    resp.store = target
                query = bind(query, bindings or [])
            else:
                if bindings:
                    resp.diagnostics.append("bindings ignored for sql-kind query")
                query = parse_sql(sq.body, store=target)
        except IsoasError as exc:
            resp.error = _stage_error("resolved", exc)
            return resp
        query = StructuredQuery(
            store=target,
            concepts=query.concepts,
            filter=query.filter,
            attribute=query.attribute,
            notes=query.notes,
        )
        resp.query = query
        return self._finish(resp, query)

    def run_sql(
        self,
        sql: str,
        session_id: str | None = None,
        store: str | None = None,
    ) -> PipelineResponse:
        """Execute restricted SQL directly; no ledger, no NL stages."""
        sess = self.session(session_id, store)
        target = store or sess.active_store
        resp = PipelineResponse(session=sess.id, store=target)
        try:
            query = parse_sql(sql, store=target)
        except IsoasError as exc:
            resp.error = _stage_error("resolved", exc)
            return resp
        resp.query = query
        return self._finish(resp, query)

    def _finish(
        self,
        resp: PipelineResponse,
        query: StructuredQuery,
        input_id: int | None = None,
        session_id: str | None = None,
    ) -> PipelineResponse:
        try:
            if query.params:
                resp.diagnostics.append(
                    "query is parameterized; save it and run with bindings"
                )
            resp.sql = render_sql(query)
        except IsoasError as exc:  # unbound holes cannot render
            resp.error = _stage_error("executed", exc)
            return resp
        try:
            results = self.repo.execute(query.store, query)
        except IsoasError as exc:
            resp.error = _stage_error("executed", exc)
            return resp
        resp.results = results
        if input_id is not None:
            self._log(
                input_id,
                session_id,
                "executed",
                {"sql": resp.sql, "ids": [r.id for r in results], "count": len(results)},
            )
        return resp

    def _condition_attribute(self, store: str) -> str:
        try:
            info = self.repo.store_info(store)
        except UnknownStore:
            return "value"
        return info.get("condition_attribute") or "value"

    def _log(self, input_id: int, session: str, stage: str, payload) -> None:
        self.repo.log_stage(
            LedgerEntry(input_id=input_id, session=session, stage=stage, payload=payload)
        )
