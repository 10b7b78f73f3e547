"""Longest-match phrase tokenizer.

Scans raw text left to right, matching the longest lexicon phrase (counted
in words) at each position, case-insensitively. Whitespace is consumed,
word-terminal punctuation is skipped, digit-runs become NUMBER tokens, and
any other unlisted word falls back to a free-identifier class (C).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EncodingError, UnknownWord
from .lexicon import Lexicon, TokenClass

WHITESPACE = frozenset(" \t\r\n\f")
TERMINAL_PUNCT = frozenset(".?,")


@dataclass(frozen=True)
class Token:
    cls: TokenClass
    lexeme: str  # lowercase, whitespace collapsed
    surface: str  # exact input slice
    span: tuple[int, int]  # [start, end) code-point offsets

    def to_json(self) -> dict:
        return {
            "class": self.cls.value,
            "lexeme": self.lexeme,
            "surface": self.surface,
            "span": list(self.span),
        }


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...]
    source: str

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def classes(self) -> tuple[TokenClass, ...]:
        return tuple(t.cls for t in self.tokens)

    def to_json(self) -> dict:
        return {"source": self.source, "tokens": [t.to_json() for t in self.tokens]}


def _words(text: str) -> list[tuple[int, int]]:
    """Spans of punctuation-trimmed words; pure-punctuation words drop out."""
    spans = []
    i, n = 0, len(text)
    while i < n:
        if text[i] in WHITESPACE:
            i += 1
            continue
        start = i
        while i < n and text[i] not in WHITESPACE:
            i += 1
        end = i
        while end > start and text[end - 1] in TERMINAL_PUNCT:
            end -= 1
        if end > start:
            spans.append((start, end))
    return spans


def tokenize(text: str, lex: Lexicon) -> TokenStream:
    """Greedy left-to-right scan; longest phrase in words wins at each position."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"input is not valid UTF-8: {exc}") from None

    spans = _words(text)
    lowered = [text[s:e].lower() for s, e in spans]
    tokens: list[Token] = []
    i = 0
    while i < len(spans):
        # longest multi-word candidate first; a phrase may only span words
        # separated by pure whitespace (stripped punctuation breaks joins)
        matched = False
        limit = min(lex.max_phrase_words, len(spans) - i)
        for k in range(limit, 0, -1):
            if k > 1:
                gaps_clean = all(
                    all(ch in WHITESPACE for ch in text[spans[j][1]:spans[j + 1][0]])
                    for j in range(i, i + k - 1)
                )
                if not gaps_clean:
                    continue
            candidate = " ".join(lowered[i:i + k])
            cls = lex.class_of(candidate)
            if cls is not None:
                start, end = spans[i][0], spans[i + k - 1][1]
                tokens.append(Token(cls, candidate, text[start:end], (start, end)))
                i += k
                matched = True
                break
        if matched:
            continue
        word = lowered[i]
        start, end = spans[i]
        if word.isascii() and word.isdigit():
            cls = TokenClass.NUMBER
        else:
            free = sorted(lex.free_identifier_classes, key=lambda c: c.value)
            if not free:
                raise UnknownWord(word)
            cls = free[0]
        tokens.append(Token(cls, word, text[start:end], (start, end)))
        i += 1
    return TokenStream(tokens=tuple(tokens), source=text)


def untokenize(ts: TokenStream) -> str:
    """Rebuild the original text from token surfaces and the skipped gaps."""
    parts = []
    pos = 0
    for tok in ts.tokens:
        start, end = tok.span
        parts.append(ts.source[pos:start])
        parts.append(tok.surface)
        pos = end
    parts.append(ts.source[pos:])
    return "".join(parts)
