"""Domain error hierarchy.

Every failure the pipeline can produce is an IsoasError subclass carrying
enough structure to be serialized into a response payload; transport-level
problems (bad JSON, missing flags) are deliberately not represented here.
"""

from __future__ import annotations

from typing import Any


class IsoasError(Exception):
    """Base class for all domain errors."""

    def details(self) -> dict[str, Any]:
        return {}

    def to_json(self) -> dict[str, Any]:
        return {"type": type(self).__name__, "message": str(self), **self.details()}


# -- lexicon / ontology loading


class DuplicatePhrase(IsoasError):
    def __init__(self, phrase: str, first: str, second: str):
        super().__init__(f"phrase {phrase!r} listed under both {first} and {second}")
        self.phrase = phrase

    def details(self):
        return {"phrase": self.phrase}


class FormatError(IsoasError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no

    def details(self):
        return {"line": self.line_no}


class CyclicHierarchy(IsoasError):
    def __init__(self, node: str):
        super().__init__(f"isa chain through {node!r} forms a cycle")
        self.node = node

    def details(self):
        return {"node": self.node}


class UnknownNode(IsoasError):
    def __init__(self, name: str):
        super().__init__(f"node {name!r} is not declared in the ontology")
        self.name = name

    def details(self):
        return {"node": self.name}


# -- lexing


class EncodingError(IsoasError):
    pass


class UnknownWord(IsoasError):
    """Raised only when the lexicon admits no free-identifier class."""

    def __init__(self, word: str):
        super().__init__(f"word {word!r} matches no phrase and no free class accepts it")
        self.word = word

    def details(self):
        return {"word": self.word}


# -- parsing


class EmptyInput(IsoasError):
    def __init__(self, message: str = "input contains no tokens"):
        super().__init__(message)


class NoRuleMatches(IsoasError):
    def __init__(self, position: int, expected: frozenset[str]):
        want = ", ".join(sorted(expected)) if expected else "end of input"
        super().__init__(f"no rule matches at token {position}; expected {want}")
        self.position = position
        self.expected = expected

    def details(self):
        return {"position": self.position, "expected": sorted(self.expected)}


# -- modeling


class UnknownPhrase(IsoasError):
    def __init__(self, phrase: str, token_class: str):
        super().__init__(f"{phrase!r} is not a lexicon {token_class} phrase")
        self.phrase = phrase

    def details(self):
        return {"phrase": self.phrase}


class AgreementViolation(IsoasError):
    def __init__(self, subject: str, copula: str, expected: tuple[str, ...]):
        want = ", ".join(expected) if expected else "(none)"
        super().__init__(
            f"subject {subject!r} does not agree with {copula!r}; expected {want}"
        )
        self.subject = subject
        self.copula = copula
        self.expected = expected

    def details(self):
        return {"subject": self.subject, "copula": self.copula, "expected": list(self.expected)}


class CompositionViolation(IsoasError):
    def __init__(self, left: str, right: str):
        super().__init__(f"ontology has no relation between {left!r} and {right!r}")
        self.left = left
        self.right = right

    def details(self):
        return {"left": self.left, "right": self.right}


# -- resolving


class Unresolvable(IsoasError):
    def __init__(self, intent: str, hint: str):
        super().__init__(f"{intent} fragment cannot be resolved into a query: {hint}")
        self.intent = intent
        self.hint = hint

    def details(self):
        return {"intent": self.intent, "hint": self.hint}


class MixedStores(IsoasError):
    def __init__(self, stores: tuple[str, ...]):
        super().__init__(f"cannot integrate queries over different stores: {', '.join(stores)}")
        self.stores = stores

    def details(self):
        return {"stores": list(self.stores)}


class EmptyList(IsoasError):
    def __init__(self):
        super().__init__("cannot integrate an empty list of queries")


class InvalidRange(IsoasError):
    def __init__(self, lo: str, hi: str):
        super().__init__(f"between-range is inverted: {lo} > {hi}")
        self.lo = lo
        self.hi = hi

    def details(self):
        return {"lo": self.lo, "hi": self.hi}


class UnboundParameter(IsoasError):
    def __init__(self, params: tuple[tuple[str, str], ...]):
        holes = ", ".join(f"{name} {op}" for name, op in params)
        super().__init__(f"query has unbound parameters: {holes}")
        self.params = params

    def details(self):
        return {"params": [list(p) for p in self.params]}


class ArityMismatch(IsoasError):
    def __init__(self, wanted: int, got: int):
        super().__init__(f"query takes {wanted} binding(s), got {got}")
        self.wanted = wanted
        self.got = got

    def details(self):
        return {"wanted": self.wanted, "got": self.got}


# -- repository


class InvalidName(IsoasError):
    def __init__(self, what: str, value: str):
        super().__init__(f"invalid {what}: {value!r}")
        self.what = what
        self.value = value

    def details(self):
        return {"what": self.what, "value": self.value}


class NameInUse(IsoasError):
    def __init__(self, name: str):
        super().__init__(f"name {name!r} is already in use")
        self.name = name

    def details(self):
        return {"name": self.name}


class UnknownStore(IsoasError):
    def __init__(self, name: str):
        super().__init__(f"no store named {name!r}")
        self.name = name

    def details(self):
        return {"name": self.name}


class UnknownQuery(IsoasError):
    def __init__(self, name: str):
        super().__init__(f"no saved query named {name!r}")
        self.name = name

    def details(self):
        return {"name": self.name}


class WrongState(IsoasError):
    def __init__(self, name: str, state: str, wanted: str):
        super().__init__(f"store {name!r} is {state}, expected {wanted}")
        self.name = name
        self.state = state

    def details(self):
        return {"name": self.name, "state": self.state}


class StoreDetached(IsoasError):
    def __init__(self, name: str):
        super().__init__(f"store {name!r} is detached")
        self.name = name

    def details(self):
        return {"name": self.name}


class DuplicateId(IsoasError):
    def __init__(self, record_id: int):
        super().__init__(f"record id {record_id} already exists")
        self.record_id = record_id

    def details(self):
        return {"id": self.record_id}


class MalformedRow(IsoasError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"row {line_no}: {message}")
        self.line_no = line_no

    def details(self):
        return {"line": self.line_no}


class StageOrderViolation(IsoasError):
    def __init__(self, input_id: int, stage: str, expected: str | None):
        want = expected if expected is not None else "nothing (pipeline complete)"
        super().__init__(f"input {input_id}: cannot log {stage!r}, next stage is {want}")
        self.input_id = input_id
        self.stage = stage

    def details(self):
        return {"input_id": self.input_id, "stage": self.stage}


class SqlSyntaxError(IsoasError):
    def __init__(self, position: int, expected: str):
        super().__init__(f"SQL syntax error at offset {position}: expected {expected}")
        self.position = position
        self.expected = expected

    def details(self):
        return {"position": self.position, "expected": self.expected}


class IoFailure(IsoasError):
    pass


# -- service


class BindFailure(IsoasError):
    def __init__(self, host: str, port: int, reason: str):
        super().__init__(f"cannot bind {host}:{port}: {reason}")
        self.host = host
        self.port = port
