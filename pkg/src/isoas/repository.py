"""Embedded file-backed record stores, the stage ledger, and saved queries.

Everything lives under one home directory as JSON-lines files plus a small
manifest, so state is transparent and diff-able:

    home/
      stores.json          store name -> state and config
      stores/<name>.jsonl  one record per line
      ledger.jsonl         append-only pipeline stage log
      saved_queries.jsonl  saved-query collection (rewritten on change)

A single reentrant lock serializes all state transitions, which keeps every
operation linearizable; callers never coordinate externally.
"""

from __future__ import annotations

import csv
import io
import json
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .errors import (
    DuplicateId,
    InvalidName,
    IoFailure,
    MalformedRow,
    NameInUse,
    StageOrderViolation,
    StoreDetached,
    UnboundParameter,
    UnknownQuery,
    UnknownStore,
    WrongState,
)
from .resolver import BetweenLeaf, CompareLeaf, StructuredQuery, filter_leaves
from .sql import parse_sql

STAGES = ("input", "lexed", "parsed", "modeled", "resolved", "executed")

ATTACHED = "attached"
DETACHED = "detached"

CSV_HEADER = ["id", "name", "kind", "description", "value"]

_NAME_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.-]*$")

# record attributes a condition may bind to
NUMERIC_ATTRIBUTES = ("value", "id")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class Record:
    id: int
    name: str
    kind: str
    description: str
    value: float

    def to_json(self) -> dict:
        value = int(self.value) if float(self.value).is_integer() else self.value
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind,
            "description": self.description,
            "value": value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Record":
        return cls(
            id=int(data["id"]),
            name=str(data["name"]),
            kind=str(data["kind"]),
            description=str(data["description"]),
            value=float(data["value"]),
        )


@dataclass(frozen=True)
class LedgerEntry:
    input_id: int
    session: str
    stage: str
    payload: Any
    ts: str = field(default_factory=_now)

    def to_json(self) -> dict:
        return {
            "input_id": self.input_id,
            "session": self.session,
            "stage": self.stage,
            "payload": self.payload,
            "ts": self.ts,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LedgerEntry":
        return cls(
            input_id=int(data["input_id"]),
            session=str(data["session"]),
            stage=str(data["stage"]),
            payload=data.get("payload"),
            ts=str(data.get("ts", "")),
        )


@dataclass(frozen=True)
class SavedQuery:
    name: str
    body: str  # query IR JSON text, or SQL text
    kind: str  # "ir" | "sql"
    created: str = field(default_factory=_now)
    modified: str = field(default_factory=_now)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "body": self.body,
            "kind": self.kind,
            "created": self.created,
            "modified": self.modified,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SavedQuery":
        return cls(
            name=data["name"],
            body=data["body"],
            kind=data["kind"],
            created=data.get("created", ""),
            modified=data.get("modified", ""),
        )


@dataclass
class _Store:
    name: str
    state: str
    condition_attribute: str = "value"
    records: dict[int, Record] = field(default_factory=dict)


class Repository:
    """All persistent engine state under one home directory."""

    def __init__(self, home: str | Path):
        self.home = Path(home)
        self._lock = threading.RLock()
        try:
            self.home.mkdir(parents=True, exist_ok=True)
            (self.home / "stores").mkdir(exist_ok=True)
        except OSError as exc:
            raise IoFailure(f"cannot create engine home {self.home}: {exc}") from None
        self._stores: dict[str, _Store] = {}
        self._ledger: list[LedgerEntry] = []
        self._stage_done: dict[int, int] = {}  # input_id -> count of logged stages
        self._saved: dict[str, SavedQuery] = {}
        self._next_id = 1
        self._load()
        self._next_id = max(self._stage_done, default=0) + 1

    # -- paths

    @property
    def _manifest_path(self) -> Path:
        return self.home / "stores.json"

    def _store_path(self, name: str) -> Path:
        return self.home / "stores" / f"{name}.jsonl"

    @property
    def _ledger_path(self) -> Path:
        return self.home / "ledger.jsonl"

    @property
    def _saved_path(self) -> Path:
        return self.home / "saved_queries.jsonl"

    # -- loading / flushing

    def _load(self) -> None:
        if self._manifest_path.exists():
            manifest = json.loads(self._manifest_path.read_text(encoding="utf-8"))
            for name, info in manifest.get("stores", {}).items():
                store = _Store(
                    name=name,
                    state=info.get("state", ATTACHED),
                    condition_attribute=info.get("condition_attribute", "value"),
                )
                if store.state == ATTACHED:
                    store.records = self._read_records(name)
                self._stores[name] = store
        if self._ledger_path.exists():
            with self._ledger_path.open(encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        entry = LedgerEntry.from_json(json.loads(line))
                        self._ledger.append(entry)
                        self._stage_done[entry.input_id] = (
                            self._stage_done.get(entry.input_id, 0) + 1
                        )
        if self._saved_path.exists():
            with self._saved_path.open(encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        sq = SavedQuery.from_json(json.loads(line))
                        self._saved[sq.name] = sq

    def _read_records(self, name: str) -> dict[int, Record]:
        path = self._store_path(name)
        records: dict[int, Record] = {}
        if path.exists():
            with path.open(encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = Record.from_json(json.loads(line))
                        records[rec.id] = rec
        return records

    def _flush_manifest(self) -> None:
        manifest = {
            "stores": {
                s.name: {"state": s.state, "condition_attribute": s.condition_attribute}
                for s in self._stores.values()
            }
        }
        self._manifest_path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def _flush_store(self, store: _Store) -> None:
        lines = [
            json.dumps(store.records[rid].to_json(), sort_keys=True)
            for rid in sorted(store.records)
        ]
        self._store_path(store.name).write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8"
        )

    def _flush_saved(self) -> None:
        lines = [
            json.dumps(self._saved[name].to_json(), sort_keys=True)
            for name in sorted(self._saved)
        ]
        self._saved_path.write_text(
            "".join(line + "\n" for line in lines), encoding="utf-8"
        )

    # -- store management

    def _get(self, name: str) -> _Store:
        store = self._stores.get(name)
        if store is None:
            raise UnknownStore(name)
        return store

    def _attached(self, name: str) -> _Store:
        store = self._get(name)
        if store.state != ATTACHED:
            raise StoreDetached(name)
        return store

    def create_store(self, name: str) -> dict:
        with self._lock:
            if not _NAME_RE.match(name or ""):
                raise InvalidName("store name", name)
            if name in self._stores:
                raise NameInUse(name)
            store = _Store(name=name, state=ATTACHED)
            self._stores[name] = store
            self._flush_store(store)
            self._flush_manifest()
            return self.store_info(name)

    def attach_store(self, name: str) -> dict:
        with self._lock:
            store = self._get(name)
            if store.state == ATTACHED:
                raise WrongState(name, store.state, DETACHED)
            store.records = self._read_records(name)
            store.state = ATTACHED
            self._flush_manifest()
            return self.store_info(name)

    def detach_store(self, name: str) -> dict:
        with self._lock:
            store = self._get(name)
            if store.state == DETACHED:
                raise WrongState(name, store.state, ATTACHED)
            self._flush_store(store)
            store.records = {}
            store.state = DETACHED
            self._flush_manifest()
            return self.store_info(name)

    def store_info(self, name: str) -> dict:
        with self._lock:
            store = self._get(name)
            return {
                "name": store.name,
                "state": store.state,
                "condition_attribute": store.condition_attribute,
                "records": len(store.records) if store.state == ATTACHED else None,
            }

    def list_stores(self) -> list[dict]:
        with self._lock:
            return [self.store_info(name) for name in sorted(self._stores)]

    def has_store(self, name: str) -> bool:
        with self._lock:
            return name in self._stores

    # -- records

    def ingest(self, name: str, rows: str) -> int:
        """Insert a CSV batch; all rows land or none do."""
        with self._lock:
            store = self._attached(name)
            reader = csv.reader(io.StringIO(rows))
            try:
                header = next(reader)
            except StopIteration:
                raise MalformedRow(1, "missing header") from None
            if [h.strip().lower() for h in header] != CSV_HEADER:
                raise MalformedRow(1, f"header must be {','.join(CSV_HEADER)}")
            batch: dict[int, Record] = {}
            for row in reader:
                line_no = reader.line_num
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if len(row) != len(CSV_HEADER):
                    raise MalformedRow(line_no, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
                try:
                    rid = int(row[0])
                except ValueError:
                    raise MalformedRow(line_no, f"id {row[0]!r} is not an integer") from None
                if rid <= 0:
                    raise MalformedRow(line_no, f"id must be positive, got {rid}")
                kind = row[2].strip().lower()
                if not kind:
                    raise MalformedRow(line_no, "kind must be non-empty")
                try:
                    value = float(row[4])
                except ValueError:
                    raise MalformedRow(line_no, f"value {row[4]!r} is not numeric") from None
                if rid in batch or rid in store.records:
                    raise DuplicateId(rid)
                batch[rid] = Record(
                    id=rid, name=row[1], kind=kind, description=row[3], value=value
                )
            store.records.update(batch)
            self._flush_store(store)
            return len(batch)

    # -- query execution

    def execute(self, name: str, q: StructuredQuery) -> list[Record]:
        """Concept match (kind equality, then name/description substring
        fallback when empty), filtered on the condition attribute, by id."""
        with self._lock:
            store = self._attached(name)
            if q.params:
                raise UnboundParameter(q.params)
            if q.attribute not in NUMERIC_ATTRIBUTES:
                raise InvalidName("condition attribute", q.attribute)
            records = [store.records[rid] for rid in sorted(store.records)]
            concepts = tuple(c.lower() for c in q.concepts)
            rows = [r for r in records if r.kind in concepts]
            if not rows:
                rows = [
                    r
                    for r in records
                    if any(
                        c in r.name.lower() or c in r.description.lower()
                        for c in concepts
                    )
                ]
            leaves = filter_leaves(q.filter)
            return [
                r
                for r in rows
                if all(_leaf_matches(leaf, getattr(r, q.attribute)) for leaf in leaves)
            ]

    def execute_sql(self, name: str, sql: str) -> list[Record]:
        return self.execute(name, parse_sql(sql, store=name))

    # -- pipeline ledger

    def next_input_id(self) -> int:
        """Reserve a fresh input id (never reused, even if nothing gets logged)."""
        with self._lock:
            self._next_id = max(self._next_id, max(self._stage_done, default=0) + 1)
            reserved = self._next_id
            self._next_id += 1
            return reserved

    def log_stage(self, entry: LedgerEntry) -> None:
        with self._lock:
            done = self._stage_done.get(entry.input_id, 0)
            expected = STAGES[done] if done < len(STAGES) else None
            if entry.stage != expected:
                raise StageOrderViolation(entry.input_id, entry.stage, expected)
            with self._ledger_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.to_json(), sort_keys=True) + "\n")
            self._ledger.append(entry)
            self._stage_done[entry.input_id] = done + 1

    def history(self, session: str) -> list[LedgerEntry]:
        with self._lock:
            return [e for e in self._ledger if e.session == session]

    def ledger_entries(self) -> list[LedgerEntry]:
        with self._lock:
            return list(self._ledger)

    # -- saved queries

    def save_query(self, sq: SavedQuery, overwrite: bool = False) -> SavedQuery:
        with self._lock:
            if not _NAME_RE.match(sq.name or ""):
                raise InvalidName("query name", sq.name)
            if sq.kind not in ("ir", "sql"):
                raise InvalidName("query kind", sq.kind)
            _validate_body(sq)
            existing = self._saved.get(sq.name)
            if existing is not None:
                if not overwrite:
                    raise NameInUse(sq.name)
                sq = SavedQuery(
                    name=sq.name,
                    body=sq.body,
                    kind=sq.kind,
                    created=existing.created,
                    modified=_now(),
                )
            self._saved[sq.name] = sq
            self._flush_saved()
            return sq

    def load_query(self, name: str) -> SavedQuery:
        with self._lock:
            sq = self._saved.get(name)
            if sq is None:
                raise UnknownQuery(name)
            return sq

    def list_queries(self) -> list[SavedQuery]:
        with self._lock:
            return [self._saved[name] for name in sorted(self._saved)]

    def delete_query(self, name: str) -> None:
        with self._lock:
            if name not in self._saved:
                raise UnknownQuery(name)
            del self._saved[name]
            self._flush_saved()


def _validate_body(sq: SavedQuery) -> None:
    if sq.kind == "ir":
        try:
            StructuredQuery.from_json(json.loads(sq.body))
        except (ValueError, KeyError, TypeError) as exc:
            raise InvalidName("ir query body", f"{sq.name}: {exc}") from None
    else:
        parse_sql(sq.body, store="_probe_")


def _leaf_matches(leaf, value: float) -> bool:
    """Numeric comparison; a literal that will not coerce matches nothing."""
    if isinstance(leaf, CompareLeaf):
        n = leaf.value.as_number()
        if n is None:
            return False
        return {
            "=": value == n,
            "<": value < n,
            ">": value > n,
            "<=": value <= n,
            ">=": value >= n,
        }[leaf.op]
    if isinstance(leaf, BetweenLeaf):
        lo, hi = leaf.lo.as_number(), leaf.hi.as_number()
        if lo is None or hi is None:
            return False
        return lo <= value <= hi
    raise UnboundParameter((("value", getattr(leaf, "op", "?")),))
