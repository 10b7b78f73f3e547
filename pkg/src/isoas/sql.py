"""Parser for the restricted SQL dialect the resolver renders.

Accepted shape (keywords case-insensitive, whitespace free-form):

    SELECT id, name, kind, value FROM records
    WHERE (kind = '<str>' [OR kind = '<str>']*)
    [AND value <op> <literal> | AND value BETWEEN <literal> AND <literal>]*

with <op> one of = < > <= >= and literals either bare numbers or
single-quoted strings (quotes doubled to escape). Nothing else parses.
"""

from __future__ import annotations

import re

from .errors import SqlSyntaxError
from .modeler import Literal
from .resolver import AndNode, BetweenLeaf, CompareLeaf, Filter, StructuredQuery

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<string>'(?:[^']|'')*')
  | (?P<number>-?\d+(?:\.\d+)?)
  | (?P<op><=|>=|=|<|>)
  | (?P<punct>[(),])
  | (?P<word>[A-Za-z_][A-Za-z_0-9]*)
    """,
    re.VERBOSE,
)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _scan(sql: str) -> list[_Tok]:
    tokens = []
    pos = 0
    while pos < len(sql):
        m = _TOKEN_RE.match(sql, pos)
        if m is None:
            raise SqlSyntaxError(pos, "a SQL token")
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Tok(kind, m.group(0), pos))
        pos = m.end()
    tokens.append(_Tok("eof", "", len(sql)))
    return tokens


class _Parser:
    def __init__(self, sql: str):
        self.sql = sql
        self.tokens = _scan(sql)
        self.i = 0

    def peek(self) -> _Tok:
        return self.tokens[self.i]

    def take(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_word(self, word: str) -> None:
        tok = self.peek()
        if tok.kind != "word" or tok.text.lower() != word.lower():
            raise SqlSyntaxError(tok.pos, repr(word))
        self.take()

    def expect(self, kind: str, text: str | None = None, label: str | None = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            raise SqlSyntaxError(tok.pos, label or (text if text is not None else kind))
        return self.take()

    def string_value(self) -> str:
        tok = self.expect("string", label="a quoted string")
        return tok.text[1:-1].replace("''", "'")

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == "number":
            self.take()
            return Literal(text=tok.text, numeric=True)
        if tok.kind == "string":
            return Literal(text=self.string_value(), numeric=False)
        raise SqlSyntaxError(tok.pos, "a number or quoted string")


def parse_sql(sql: str, store: str) -> StructuredQuery:
    """Parse restricted SQL into a query IR bound to the given store."""
    p = _Parser(sql)
    for word in ("SELECT", "id"):
        p.expect_word(word)
    for column in ("name", "kind", "value"):
        p.expect("punct", ",")
        p.expect_word(column)
    p.expect_word("FROM")
    p.expect_word("records")
    p.expect_word("WHERE")
    p.expect("punct", "(")

    concepts = []
    while True:
        p.expect_word("kind")
        p.expect("op", "=")
        concepts.append(p.string_value().lower())
        tok = p.peek()
        if tok.kind == "word" and tok.text.lower() == "or":
            p.take()
            continue
        break
    p.expect("punct", ")")

    leaves: list[Filter] = []
    while True:
        tok = p.peek()
        if tok.kind == "eof":
            break
        if tok.kind != "word" or tok.text.lower() != "and":
            raise SqlSyntaxError(tok.pos, "'AND' or end of statement")
        p.take()
        p.expect_word("value")
        tok = p.peek()
        if tok.kind == "word" and tok.text.lower() == "between":
            p.take()
            lo = p.literal()
            p.expect_word("AND")
            hi = p.literal()
            leaves.append(BetweenLeaf(lo=lo, hi=hi))
        elif tok.kind == "op":
            p.take()
            leaves.append(CompareLeaf(op=tok.text, value=p.literal()))
        else:
            raise SqlSyntaxError(tok.pos, "a comparison operator or 'BETWEEN'")

    flt: Filter | None
    if not leaves:
        flt = None
    elif len(leaves) == 1:
        flt = leaves[0]
    else:
        flt = AndNode(children=tuple(leaves))
    return StructuredQuery(
        store=store,
        concepts=tuple(dict.fromkeys(concepts)),
        filter=flt,
    )
