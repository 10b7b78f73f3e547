"""isoas: natural-language search processor for product-data records."""

from .engine import Engine, PipelineResponse, Session
from .lexer import Token, TokenStream, tokenize, untokenize
from .lexicon import (
    AgreementTable,
    Lexicon,
    Ontology,
    TokenClass,
    default_lexicon,
    default_ontology,
    isa,
    load_lexicon,
    load_ontology,
    related,
    serialize_lexicon,
)
from .modeler import (
    AgreementResult,
    ConditionKind,
    ConditionSpec,
    Intent,
    Literal,
    SemanticModel,
    build_model,
    check_agreement,
)
from .parser import RuleKind, Statement, parse, parse_many
from .repository import LedgerEntry, Record, Repository, SavedQuery
from .resolver import (
    AndNode,
    BetweenLeaf,
    CompareLeaf,
    HoleLeaf,
    StructuredQuery,
    bind,
    integrate,
    render_sql,
    resolve,
)
from .sql import parse_sql

__version__ = "0.1.0"

__all__ = [
    "AgreementResult",
    "AgreementTable",
    "AndNode",
    "BetweenLeaf",
    "CompareLeaf",
    "ConditionKind",
    "ConditionSpec",
    "Engine",
    "HoleLeaf",
    "Intent",
    "LedgerEntry",
    "Lexicon",
    "Literal",
    "Ontology",
    "PipelineResponse",
    "Record",
    "Repository",
    "RuleKind",
    "SavedQuery",
    "SemanticModel",
    "Session",
    "Statement",
    "StructuredQuery",
    "Token",
    "TokenClass",
    "TokenStream",
    "bind",
    "build_model",
    "check_agreement",
    "default_lexicon",
    "default_ontology",
    "integrate",
    "isa",
    "load_lexicon",
    "load_ontology",
    "parse",
    "parse_many",
    "parse_sql",
    "related",
    "render_sql",
    "resolve",
    "serialize_lexicon",
    "tokenize",
    "untokenize",
]
