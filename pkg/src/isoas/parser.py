"""Recognizer for the nine search productions over token-class sequences.

The grammar is regular and the nine class sequences are pairwise distinct,
so single-statement parsing is a direct pattern match. Multi-statement
input is split greedily (longest production first) with backtracking, so
a split is found whenever one exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EmptyInput, NoRuleMatches
from .lexer import Token, TokenStream
from .lexicon import TokenClass


class RuleKind(enum.Enum):
    ASTMT = "astmt"
    BSTMT = "bstmt"
    CSTMT = "cstmt"
    STMT1 = "stmt1"
    STMT2 = "stmt2"
    CONDBT = "condbt"
    CONDEQ = "condeq"
    CONDWEQ = "condweq"
    CONDEQBT = "condeqbt"

    def __str__(self) -> str:
        return self.value


_A = frozenset({TokenClass.A})
_B = frozenset({TokenClass.B})
_C = frozenset({TokenClass.C})
_W = frozenset({TokenClass.W})
_BT = frozenset({TokenClass.BT})
_EQ = frozenset({TokenClass.EQ})
_AND = frozenset({TokenClass.AND})
# condition-value slots take a keyword or a number
_V = frozenset({TokenClass.C, TokenClass.NUMBER})

PRODUCTIONS: dict[RuleKind, tuple[frozenset[TokenClass], ...]] = {
    RuleKind.ASTMT: (_A,),
    RuleKind.BSTMT: (_B,),
    RuleKind.CSTMT: (_C,),
    RuleKind.STMT1: (_A, _B, _C),
    RuleKind.STMT2: (_B, _C),
    RuleKind.CONDBT: (_A, _B, _C, _W, _BT, _V, _AND, _V),
    RuleKind.CONDEQ: (_A, _B, _C, _EQ, _V),
    RuleKind.CONDWEQ: (_A, _B, _C, _W, _EQ),
    RuleKind.CONDEQBT: (_A, _B, _C, _W, _EQ, _BT, _V, _AND, _V),
}

DIRECT_RULES = frozenset({RuleKind.ASTMT, RuleKind.BSTMT, RuleKind.CSTMT,
                          RuleKind.STMT1, RuleKind.STMT2})
CONDITIONAL_RULES = frozenset({RuleKind.CONDBT, RuleKind.CONDEQ,
                               RuleKind.CONDWEQ, RuleKind.CONDEQBT})

# longest first, so greedy splitting prefers the widest production
_BY_LENGTH = sorted(PRODUCTIONS.items(), key=lambda kv: -len(kv[1]))


@dataclass(frozen=True)
class Statement:
    rule: RuleKind
    tokens: tuple[Token, ...]
    subject: Token | None
    verb: Token | None
    concept: Token | None
    cond_tokens: tuple[Token, ...]
    span: tuple[int, int]

    def classes(self) -> tuple[TokenClass, ...]:
        return tuple(t.cls for t in self.tokens)

    def to_json(self) -> dict:
        return {
            "rule": self.rule.value,
            "subject": self.subject.to_json() if self.subject else None,
            "verb": self.verb.to_json() if self.verb else None,
            "concept": self.concept.to_json() if self.concept else None,
            "cond_tokens": [t.to_json() for t in self.cond_tokens],
            "span": list(self.span),
        }


def _bind(rule: RuleKind, tokens: tuple[Token, ...]) -> Statement:
    subject = verb = concept = None
    cond: tuple[Token, ...] = ()
    if rule is RuleKind.ASTMT:
        subject = tokens[0]
    elif rule is RuleKind.BSTMT:
        verb = tokens[0]
    elif rule is RuleKind.CSTMT:
        concept = tokens[0]
    elif rule is RuleKind.STMT1:
        subject, verb, concept = tokens
    elif rule is RuleKind.STMT2:
        verb, concept = tokens
    else:  # conditional rules share the A B C prefix
        subject, verb, concept = tokens[0], tokens[1], tokens[2]
        cond = tokens[3:]
    return Statement(
        rule=rule,
        tokens=tokens,
        subject=subject,
        verb=verb,
        concept=concept,
        cond_tokens=cond,
        span=(tokens[0].span[0], tokens[-1].span[1]),
    )


def _matches_at(tokens: tuple[Token, ...], pos: int, pattern) -> bool:
    if pos + len(pattern) > len(tokens):
        return False
    return all(tokens[pos + j].cls in pattern[j] for j in range(len(pattern)))


def _failure(tokens: tuple[Token, ...], offset: int = 0) -> NoRuleMatches:
    """Furthest position any production stays viable, and what could extend it."""
    best_pos = 0
    expected: set[str] = set()
    for _rule, pattern in _BY_LENGTH:
        pos = 0
        while pos < len(pattern) and pos < len(tokens) and tokens[pos].cls in pattern[pos]:
            pos += 1
        if pos > best_pos:
            best_pos = pos
            expected = set()
        if pos == best_pos and pos < len(pattern):
            expected.update(c.value for c in pattern[pos])
    return NoRuleMatches(offset + best_pos, frozenset(expected))


def parse(ts: TokenStream) -> Statement:
    """Match the whole stream against exactly one production."""
    tokens = tuple(ts.tokens)
    if not tokens:
        raise EmptyInput()
    for rule, pattern in _BY_LENGTH:
        if len(pattern) == len(tokens) and _matches_at(tokens, 0, pattern):
            return _bind(rule, tokens)
    raise _failure(tokens)


def parse_many(ts: TokenStream) -> list[Statement]:
    """Split the stream into consecutive full productions, greedily.

    Longest production first at each position; backtracks if the chosen
    split leaves an unparseable suffix, so failure means no split exists.
    """
    tokens = tuple(ts.tokens)
    if not tokens:
        raise EmptyInput()
    n = len(tokens)
    best_fail = 0
    dead: set[int] = set()

    def split(pos: int) -> list[Statement] | None:
        nonlocal best_fail
        if pos == n:
            return []
        if pos in dead:
            return None
        for rule, pattern in _BY_LENGTH:
            if _matches_at(tokens, pos, pattern):
                rest = split(pos + len(pattern))
                if rest is not None:
                    return [_bind(rule, tokens[pos:pos + len(pattern)])] + rest
        best_fail = max(best_fail, pos)
        dead.add(pos)
        return None

    result = split(0)
    if result is None:
        raise _failure(tokens[best_fail:], offset=best_fail)
    return result
