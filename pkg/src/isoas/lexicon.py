"""Token lexicon, concept ontology, and the subject/copula agreement table.

All three are loaded from plain-text files so the vocabulary can evolve
without code changes; once loaded they are immutable and safe to share
across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources

from .errors import CyclicHierarchy, DuplicatePhrase, FormatError, UnknownNode

COPULAS = ("is", "am", "are")


class TokenClass(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    W = "W"
    BT = "Bt"
    EQ = "Eq"
    AND = "And"
    NUMBER = "NUMBER"

    def __str__(self) -> str:
        return self.value


# classes that may appear in a lexicon file (NUMBER is produced by the
# lexer for digit runs and never listed)
LISTABLE_CLASSES = (
    TokenClass.A,
    TokenClass.B,
    TokenClass.C,
    TokenClass.W,
    TokenClass.BT,
    TokenClass.EQ,
    TokenClass.AND,
)

_CLASS_BY_NAME = {c.name.upper(): c for c in LISTABLE_CLASSES}


def _normalize_phrase(raw: str) -> str:
    return " ".join(raw.lower().split())


@dataclass(frozen=True)
class Lexicon:
    """Phrase lists per token class, plus the free-identifier policy."""

    entries: dict[TokenClass, tuple[str, ...]]
    free_identifier_classes: frozenset[TokenClass] = frozenset({TokenClass.C})
    _phrase_class: dict[str, TokenClass] = field(init=False, repr=False, compare=False)
    _max_words: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        phrase_class: dict[str, TokenClass] = {}
        max_words = 1
        for cls in LISTABLE_CLASSES:
            for phrase in self.entries.get(cls, ()):
                if not phrase or phrase != _normalize_phrase(phrase):
                    raise FormatError(0, f"phrase {phrase!r} is not normalized")
                seen = phrase_class.get(phrase)
                if seen is not None and seen is not cls:
                    raise DuplicatePhrase(phrase, seen.value, cls.value)
                phrase_class[phrase] = cls
                max_words = max(max_words, phrase.count(" ") + 1)
        object.__setattr__(self, "_phrase_class", phrase_class)
        object.__setattr__(self, "_max_words", max_words)

    @property
    def max_phrase_words(self) -> int:
        return self._max_words

    def class_of(self, phrase: str) -> TokenClass | None:
        """Class of a listed phrase, or None if unlisted."""
        return self._phrase_class.get(_normalize_phrase(phrase))

    def phrases(self, cls: TokenClass) -> tuple[str, ...]:
        return self.entries.get(cls, ())

    def all_phrases(self) -> tuple[tuple[str, TokenClass], ...]:
        return tuple(self._phrase_class.items())


def load_lexicon(text: str) -> Lexicon:
    """Parse lexicon-file content (`CLASS: phrase` lines, `#` comments)."""
    entries: dict[TokenClass, list[str]] = {c: [] for c in LISTABLE_CLASSES}
    owner: dict[str, TokenClass] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise FormatError(line_no, "expected `CLASS: phrase`")
        cls = _CLASS_BY_NAME.get(head.strip().upper())
        if cls is None:
            raise FormatError(line_no, f"unknown token class {head.strip()!r}")
        phrase = _normalize_phrase(body)
        if not phrase:
            raise FormatError(line_no, "empty phrase")
        seen = owner.get(phrase)
        if seen is not None:
            if seen is not cls:
                raise DuplicatePhrase(phrase, seen.value, cls.value)
            continue  # exact repeat is harmless
        owner[phrase] = cls
        entries[cls].append(phrase)
    return Lexicon(entries={c: tuple(v) for c, v in entries.items()})


def serialize_lexicon(lex: Lexicon) -> str:
    """Inverse of load_lexicon (up to comments and blank lines)."""
    lines = []
    for cls in LISTABLE_CLASSES:
        for phrase in lex.phrases(cls):
            lines.append(f"{cls.name.upper()}: {phrase}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Ontology:
    """Concept class tree (isa forest) plus labeled relation edges."""

    nodes: frozenset[str]
    isa_edges: dict[str, str]  # child -> parent; at most one parent each
    rel_edges: tuple[tuple[str, str, str], ...]  # (a, b, label)
    _rel_pairs: frozenset[frozenset[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_rel_pairs", frozenset(frozenset((a, b)) for a, b, _ in self.rel_edges)
        )

    def require(self, name: str) -> str:
        key = name.lower()
        if key not in self.nodes:
            raise UnknownNode(name)
        return key

    def roots(self) -> frozenset[str]:
        return frozenset(n for n in self.nodes if n not in self.isa_edges)


def load_ontology(text: str) -> Ontology:
    """Parse ontology-file content (`isa child parent` / `rel a b label`)."""
    isa_edges: dict[str, str] = {}
    rel_edges: list[tuple[str, str, str]] = []
    rel_lines: list[tuple[int, str, str, str]] = []
    nodes: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.lower().split()
        if parts[0] == "isa":
            if len(parts) != 3:
                raise FormatError(line_no, "expected `isa <child> <parent>`")
            child, parent = parts[1], parts[2]
            if child in isa_edges and isa_edges[child] != parent:
                raise FormatError(line_no, f"{child!r} already has parent {isa_edges[child]!r}")
            isa_edges[child] = parent
            nodes.update((child, parent))
        elif parts[0] == "rel":
            if len(parts) != 4:
                raise FormatError(line_no, "expected `rel <a> <b> <label>`")
            rel_lines.append((line_no, parts[1], parts[2], parts[3]))
        else:
            raise FormatError(line_no, f"unknown directive {parts[0]!r}")

    # relation endpoints must be declared by the isa tree
    for _line_no, a, b, label in rel_lines:
        for endpoint in (a, b):
            if endpoint not in nodes:
                raise UnknownNode(endpoint)
        rel_edges.append((a, b, label))

    # the parent chain from every node must terminate without repeating
    for start in isa_edges:
        seen = {start}
        node = start
        while node in isa_edges:
            node = isa_edges[node]
            if node in seen:
                raise CyclicHierarchy(node)
            seen.add(node)

    return Ontology(nodes=frozenset(nodes), isa_edges=isa_edges, rel_edges=tuple(rel_edges))


def isa(o: Ontology, child: str, ancestor: str) -> bool:
    """True iff ancestor is reachable from child along isa edges (reflexive)."""
    node = o.require(child)
    target = o.require(ancestor)
    while True:
        if node == target:
            return True
        parent = o.isa_edges.get(node)
        if parent is None:
            return False
        node = parent


def related(o: Ontology, a: str, b: str) -> bool:
    """True iff a relation edge joins a and b, in either order."""
    pair = frozenset((o.require(a), o.require(b)))
    return pair in o._rel_pairs


@dataclass(frozen=True)
class AgreementTable:
    """Allowed (subject, copula) pairs for is/am/are-prefixed verb phrases."""

    pairs: frozenset[tuple[str, str]]

    @classmethod
    def from_ontology(cls, o: Ontology) -> "AgreementTable":
        pairs = set()
        for a, b, label in o.rel_edges:
            if label != "agreement":
                continue
            if b in COPULAS:
                pairs.add((a, b))
            elif a in COPULAS:
                pairs.add((b, a))
        return cls(pairs=frozenset(pairs))

    def allows(self, subject: str, copula: str) -> bool:
        return (subject, copula) in self.pairs

    def expected_for(self, subject: str) -> tuple[str, ...]:
        return tuple(c for s, c in sorted(self.pairs) if s == subject)


def _read_data(name: str) -> str:
    return resources.files("isoas").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def default_lexicon() -> Lexicon:
    return load_lexicon(_read_data("lexicon.txt"))


def default_ontology() -> Ontology:
    return load_ontology(_read_data("ontology.txt"))
