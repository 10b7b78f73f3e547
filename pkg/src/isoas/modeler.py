"""Semantic modeling: intent classification, agreement and composition checks.

A parsed Statement becomes a SemanticModel once its subject/verb pair passes
the copular agreement table and any where-clause is backed by a relation
edge in the ontology.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import AgreementViolation, CompositionViolation, UnknownNode, UnknownPhrase
from .lexicon import COPULAS, AgreementTable, Lexicon, Ontology, TokenClass, related
from .parser import RuleKind, Statement


class Intent(enum.Enum):
    DIRECT_SEARCH = "DirectSearch"
    CONDITIONAL_SEARCH = "ConditionalSearch"
    SUBJECT_ONLY = "SubjectOnly"
    VERB_ONLY = "VerbOnly"
    CONCEPT_ONLY = "ConceptOnly"

    def __str__(self) -> str:
        return self.value


INTENT_FOR_RULE: dict[RuleKind, Intent] = {
    RuleKind.ASTMT: Intent.SUBJECT_ONLY,
    RuleKind.BSTMT: Intent.VERB_ONLY,
    RuleKind.CSTMT: Intent.CONCEPT_ONLY,
    RuleKind.STMT1: Intent.DIRECT_SEARCH,
    RuleKind.STMT2: Intent.DIRECT_SEARCH,
    RuleKind.CONDBT: Intent.CONDITIONAL_SEARCH,
    RuleKind.CONDEQ: Intent.CONDITIONAL_SEARCH,
    RuleKind.CONDWEQ: Intent.CONDITIONAL_SEARCH,
    RuleKind.CONDEQBT: Intent.CONDITIONAL_SEARCH,
}


class ConditionKind(enum.Enum):
    BETWEEN = "Between"
    COMPARE = "Compare"
    COMPARE_HOLE = "CompareHole"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    """A condition literal; numeric means it came from a NUMBER token."""

    text: str
    numeric: bool

    @classmethod
    def of(cls, value) -> "Literal":
        text = str(value)
        try:
            float(text)
        except ValueError:
            return cls(text=text, numeric=False)
        return cls(text=text, numeric=True)

    def as_number(self) -> float | None:
        try:
            return float(self.text)
        except ValueError:
            return None

    def to_json(self) -> dict:
        return {"text": self.text, "numeric": self.numeric}

    @classmethod
    def from_json(cls, data: dict) -> "Literal":
        return cls(text=data["text"], numeric=bool(data["numeric"]))


def _literal(token) -> Literal:
    return Literal(text=token.lexeme, numeric=token.cls is TokenClass.NUMBER)


@dataclass(frozen=True)
class ConditionSpec:
    kind: ConditionKind
    op: str | None = None  # Eq lexeme as written
    lo: Literal | None = None
    hi: Literal | None = None
    value: Literal | None = None

    def __post_init__(self):
        if self.kind is ConditionKind.BETWEEN:
            assert self.lo is not None and self.hi is not None
        elif self.kind is ConditionKind.COMPARE:
            assert self.op is not None and self.value is not None
        else:
            assert self.op is not None and self.value is None

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "op": self.op,
            "lo": self.lo.to_json() if self.lo else None,
            "hi": self.hi.to_json() if self.hi else None,
            "value": self.value.to_json() if self.value else None,
        }


@dataclass(frozen=True)
class AgreementResult:
    ok: bool
    violation: tuple[str, str, tuple[str, ...]] | None = None  # subject, copula, expected

    def to_json(self) -> dict:
        if self.ok:
            return {"ok": True}
        subject, copula, expected = self.violation
        return {"ok": False, "subject": subject, "copula": copula, "expected": list(expected)}


@dataclass(frozen=True)
class SemanticModel:
    intent: Intent
    subject: str | None
    predicate: str | None
    concept: str | None
    condition: ConditionSpec | None
    source: Statement

    def to_json(self) -> dict:
        return {
            "intent": self.intent.value,
            "subject": self.subject,
            "predicate": self.predicate,
            "concept": self.concept,
            "condition": self.condition.to_json() if self.condition else None,
            "rule": self.source.rule.value,
        }


def check_agreement(
    subject: str,
    predicate: str,
    table: AgreementTable,
    lexicon: Lexicon | None = None,
) -> AgreementResult:
    """Validate the subject against a copular predicate's first word.

    Non-copular predicates are unconstrained. When a lexicon is supplied,
    both phrases must be listed under their classes.
    """
    subject = subject.lower().strip()
    predicate = " ".join(predicate.lower().split())
    if lexicon is not None:
        if lexicon.class_of(subject) is not TokenClass.A:
            raise UnknownPhrase(subject, "A")
        if lexicon.class_of(predicate) is not TokenClass.B:
            raise UnknownPhrase(predicate, "B")
    copula = predicate.split()[0]
    if copula not in COPULAS:
        return AgreementResult(ok=True)
    if table.allows(subject, copula):
        return AgreementResult(ok=True)
    return AgreementResult(ok=False, violation=(subject, copula, table.expected_for(subject)))


def _condition(s: Statement) -> ConditionSpec | None:
    if s.rule is RuleKind.CONDBT:
        # W Bt lo And hi
        return ConditionSpec(
            kind=ConditionKind.BETWEEN,
            lo=_literal(s.cond_tokens[2]),
            hi=_literal(s.cond_tokens[4]),
        )
    if s.rule is RuleKind.CONDEQ:
        # Eq value
        return ConditionSpec(
            kind=ConditionKind.COMPARE,
            op=s.cond_tokens[0].lexeme,
            value=_literal(s.cond_tokens[1]),
        )
    if s.rule is RuleKind.CONDWEQ:
        # W Eq, value left open
        return ConditionSpec(kind=ConditionKind.COMPARE_HOLE, op=s.cond_tokens[1].lexeme)
    if s.rule is RuleKind.CONDEQBT:
        # W Eq Bt lo And hi; the comparison operator rides along
        return ConditionSpec(
            kind=ConditionKind.BETWEEN,
            op=s.cond_tokens[1].lexeme,
            lo=_literal(s.cond_tokens[3]),
            hi=_literal(s.cond_tokens[5]),
        )
    return None


def _check_composition(s: Statement, ontology: Ontology) -> None:
    """A W token must be backed by a where-relation matching its successor."""
    classes = [t.cls for t in s.cond_tokens]
    if TokenClass.W not in classes:
        return
    successor = classes[classes.index(TokenClass.W) + 1]
    partner = "between" if successor is TokenClass.BT else "equal"
    try:
        ok = related(ontology, "where", partner)
    except UnknownNode:
        ok = False
    if not ok:
        raise CompositionViolation("where", partner)


def build_model(
    s: Statement,
    ontology: Ontology,
    table: AgreementTable,
    lexicon: Lexicon | None = None,
) -> SemanticModel:
    """Classify intent and validate the statement against the knowledge base."""
    intent = INTENT_FOR_RULE[s.rule]
    subject = s.subject.lexeme if s.subject else None
    predicate = s.verb.lexeme if s.verb else None
    concept = s.concept.lexeme if s.concept else None

    if subject is not None and predicate is not None:
        result = check_agreement(subject, predicate, table, lexicon)
        if not result.ok:
            raise AgreementViolation(*result.violation)
    _check_composition(s, ontology)

    return SemanticModel(
        intent=intent,
        subject=subject,
        predicate=predicate,
        concept=concept,
        condition=_condition(s),
        source=s,
    )
