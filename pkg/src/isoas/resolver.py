"""Backend-neutral query IR: resolution, integration, binding, SQL rendering.

The IR is a set of concept keywords plus an AND-only filter tree over one
numeric record attribute. render_sql emits the one normative SQL shape the
repository's restricted SQL parser accepts back.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

from .errors import (
    ArityMismatch,
    EmptyList,
    InvalidRange,
    MixedStores,
    UnboundParameter,
    Unresolvable,
)
from .modeler import ConditionKind, Intent, Literal, SemanticModel

# Eq lexeme -> SQL comparison operator
OPERATOR_FOR_EQ: dict[str, str] = {
    "equal to": "=",
    "with": "=",
    "less than": "<",
    "greater than": ">",
    "less than and equal to": "<=",
    "greater than and equal to": ">=",
    ">": ">",
    "<": "<",
    "<=": "<=",
    ">=": ">=",
}


@dataclass(frozen=True)
class CompareLeaf:
    op: str  # one of = < > <= >=
    value: Literal

    def to_json(self) -> dict:
        return {"type": "compare", "op": self.op, "value": self.value.to_json()}


@dataclass(frozen=True)
class BetweenLeaf:
    lo: Literal
    hi: Literal

    def __post_init__(self):
        lo_n, hi_n = self.lo.as_number(), self.hi.as_number()
        if lo_n is not None and hi_n is not None and lo_n > hi_n:
            raise InvalidRange(self.lo.text, self.hi.text)

    def to_json(self) -> dict:
        return {"type": "between", "lo": self.lo.to_json(), "hi": self.hi.to_json()}


@dataclass(frozen=True)
class HoleLeaf:
    op: str

    def to_json(self) -> dict:
        return {"type": "hole", "op": self.op}


@dataclass(frozen=True)
class AndNode:
    children: tuple["Filter", ...]

    def to_json(self) -> dict:
        return {"type": "and", "children": [c.to_json() for c in self.children]}


Filter = Union[CompareLeaf, BetweenLeaf, HoleLeaf, AndNode]


def filter_leaves(f: Filter | None) -> tuple[Filter, ...]:
    if f is None:
        return ()
    if isinstance(f, AndNode):
        return tuple(leaf for child in f.children for leaf in filter_leaves(child))
    return (f,)


def filter_from_json(data: dict | None) -> Filter | None:
    if data is None:
        return None
    kind = data.get("type")
    if kind == "compare":
        return CompareLeaf(op=data["op"], value=Literal.from_json(data["value"]))
    if kind == "between":
        return BetweenLeaf(lo=Literal.from_json(data["lo"]), hi=Literal.from_json(data["hi"]))
    if kind == "hole":
        return HoleLeaf(op=data["op"])
    if kind == "and":
        return AndNode(children=tuple(filter_from_json(c) for c in data["children"]))
    raise ValueError(f"unknown filter node type {kind!r}")


@dataclass(frozen=True)
class StructuredQuery:
    store: str
    concepts: tuple[str, ...]
    filter: Filter | None = None
    attribute: str = "value"  # record attribute conditions bind to
    notes: tuple[str, ...] = field(default=())

    @property
    def params(self) -> tuple[tuple[str, str], ...]:
        """Unfilled holes, in filter order, as (attribute, operator)."""
        return tuple(
            (self.attribute, leaf.op)
            for leaf in filter_leaves(self.filter)
            if isinstance(leaf, HoleLeaf)
        )

    def to_json(self) -> dict:
        return {
            "store": self.store,
            "concepts": list(self.concepts),
            "attribute": self.attribute,
            "filter": self.filter.to_json() if self.filter else None,
            "params": [list(p) for p in self.params],
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "StructuredQuery":
        return cls(
            store=data["store"],
            concepts=tuple(data["concepts"]),
            filter=filter_from_json(data.get("filter")),
            attribute=data.get("attribute", "value"),
            notes=tuple(data.get("notes", ())),
        )


def resolve(m: SemanticModel, store: str, attribute: str = "value") -> StructuredQuery:
    """Turn a search-intent model into an executable (or parameterized) query."""
    if m.intent not in (Intent.DIRECT_SEARCH, Intent.CONDITIONAL_SEARCH):
        hints = {
            Intent.SUBJECT_ONLY: "add a verb and a concept, e.g. `i need cad`",
            Intent.VERB_ONLY: "add a concept, e.g. `need cad`",
            Intent.CONCEPT_ONLY: "fragment names a concept but no search verb",
        }
        raise Unresolvable(m.intent.value, hints[m.intent])

    notes: tuple[str, ...] = ()
    flt: Filter | None = None
    cond = m.condition
    if cond is not None:
        if cond.kind is ConditionKind.BETWEEN:
            flt = BetweenLeaf(lo=cond.lo, hi=cond.hi)
            if cond.op is not None:
                notes = (
                    f"comparison {cond.op!r} recorded alongside a between-range; "
                    "executed as the range only",
                )
        elif cond.kind is ConditionKind.COMPARE:
            flt = CompareLeaf(op=OPERATOR_FOR_EQ[cond.op], value=cond.value)
        else:  # CompareHole
            flt = HoleLeaf(op=OPERATOR_FOR_EQ[cond.op])
    return StructuredQuery(
        store=store,
        concepts=(m.concept,),
        filter=flt,
        attribute=attribute,
        notes=notes,
    )


def integrate(qs: list[StructuredQuery]) -> StructuredQuery:
    """Merge queries over one store: OR of concepts, AND of filters."""
    if not qs:
        raise EmptyList()
    stores = tuple(dict.fromkeys(q.store for q in qs))
    if len(stores) > 1:
        raise MixedStores(stores)
    if len(qs) == 1:
        return qs[0]
    concepts = tuple(dict.fromkeys(c for q in qs for c in q.concepts))
    filters = tuple(f for q in qs for f in filter_leaves(q.filter))
    notes = tuple(n for q in qs for n in q.notes)
    flt: Filter | None
    if not filters:
        flt = None
    elif len(filters) == 1:
        flt = filters[0]
    else:
        flt = AndNode(children=filters)
    return StructuredQuery(
        store=stores[0],
        concepts=concepts,
        filter=flt,
        attribute=qs[0].attribute,
        notes=notes,
    )


def bind(q: StructuredQuery, values: list) -> StructuredQuery:
    """Fill the query's holes, in order, with the given literals."""
    holes = q.params
    if len(values) != len(holes):
        raise ArityMismatch(len(holes), len(values))
    if not values:
        return q
    pending = [v if isinstance(v, Literal) else Literal.of(v) for v in values]

    def fill(node: Filter) -> Filter:
        if isinstance(node, HoleLeaf):
            return CompareLeaf(op=node.op, value=pending.pop(0))
        if isinstance(node, AndNode):
            return AndNode(children=tuple(fill(c) for c in node.children))
        return node

    return replace(q, filter=fill(q.filter))


def sql_quote(text: str) -> str:
    return "'" + text.replace("'", "''") + "'"


def _sql_literal(lit: Literal) -> str:
    return lit.text if lit.numeric else sql_quote(lit.text)


def render_sql(q: StructuredQuery) -> str:
    """Render the normative SQL text; requires a fully bound query."""
    if q.params:
        raise UnboundParameter(q.params)
    concepts = " OR ".join(f"kind = {sql_quote(c)}" for c in sorted(q.concepts))
    parts = [f"SELECT id, name, kind, value FROM records WHERE ({concepts})"]
    for leaf in filter_leaves(q.filter):
        if isinstance(leaf, CompareLeaf):
            parts.append(f" AND {q.attribute} {leaf.op} {_sql_literal(leaf.value)}")
        elif isinstance(leaf, BetweenLeaf):
            parts.append(
                f" AND {q.attribute} BETWEEN {_sql_literal(leaf.lo)}"
                f" AND {_sql_literal(leaf.hi)}"
            )
    return "".join(parts)
