import pytest

from isoas.errors import AgreementViolation, CompositionViolation, UnknownPhrase
from isoas.lexer import tokenize
from isoas.lexicon import COPULAS, AgreementTable, TokenClass, load_ontology
from isoas.modeler import (
    INTENT_FOR_RULE,
    ConditionKind,
    Intent,
    build_model,
    check_agreement,
)
from isoas.parser import RuleKind, parse, parse_many

# the ground-truth pairs the table must accept, and nothing else copular
EXPECTED_PAIRS = {
    ("i", "am"),
    ("he", "is"),
    ("she", "is"),
    ("it", "is"),
    ("that", "is"),
    ("this", "is"),
    ("they", "are"),
    ("we", "are"),
    ("you", "are"),
}


def model_of(text, lexicon, ontology, agreement):
    statements = parse_many(tokenize(text, lexicon))
    assert len(statements) == 1
    return build_model(statements[0], ontology, agreement, lexicon)


def test_agreement_examples(lexicon, agreement):
    assert check_agreement("i", "am looking for", agreement, lexicon).ok
    assert check_agreement("we", "are in search of", agreement, lexicon).ok
    assert check_agreement("he", "need", agreement, lexicon).ok  # non-copular


def test_agreement_violation_reports_expected(lexicon, agreement):
    result = check_agreement("they", "is searching", agreement, lexicon)
    assert not result.ok
    subject, copula, expected = result.violation
    assert (subject, copula) == ("they", "is")
    assert expected == ("are",)


def test_agreement_unknown_phrases(lexicon, agreement):
    with pytest.raises(UnknownPhrase):
        check_agreement("robot", "am looking for", agreement, lexicon)
    with pytest.raises(UnknownPhrase):
        check_agreement("i", "am flying", agreement, lexicon)


def test_agreement_matrix_exhaustive(lexicon, agreement):
    """All 9 subjects x all 15 copular verb phrases, exactly the table."""
    subjects = lexicon.phrases(TokenClass.A)
    copular = [p for p in lexicon.phrases(TokenClass.B) if p.split()[0] in COPULAS]
    assert len(subjects) == 9
    assert len(copular) == 15
    checked = 0
    for subject in subjects:
        for predicate in copular:
            result = check_agreement(subject, predicate, agreement, lexicon)
            should_pass = (subject, predicate.split()[0]) in EXPECTED_PAIRS
            assert result.ok == should_pass, (subject, predicate)
            checked += 1
    assert checked == 135


def test_intent_mapping_total():
    assert INTENT_FOR_RULE == {
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


def test_direct_search_model(lexicon, ontology, agreement):
    m = model_of("I am looking for document", lexicon, ontology, agreement)
    assert m.intent is Intent.DIRECT_SEARCH
    assert m.concept == "document"
    assert m.condition is None


def test_between_condition(lexicon, ontology, agreement):
    m = model_of("I need cad where between 1 and 5", lexicon, ontology, agreement)
    assert m.intent is Intent.CONDITIONAL_SEARCH
    assert m.condition.kind is ConditionKind.BETWEEN
    assert (m.condition.lo.text, m.condition.hi.text) == ("1", "5")
    assert m.condition.lo.numeric and m.condition.hi.numeric


def test_compare_condition(lexicon, ontology, agreement):
    m = model_of("I need cad less than 5", lexicon, ontology, agreement)
    assert m.condition.kind is ConditionKind.COMPARE
    assert m.condition.op == "less than"
    assert m.condition.value.text == "5"


def test_compare_hole_condition(lexicon, ontology, agreement):
    m = model_of("I need cad where greater than", lexicon, ontology, agreement)
    assert m.condition.kind is ConditionKind.COMPARE_HOLE
    assert m.condition.op == "greater than"
    assert m.condition.value is None


def test_condeqbt_keeps_operator_on_range(lexicon, ontology, agreement):
    m = model_of("I need cad where equal to between 1 and 5", lexicon, ontology, agreement)
    assert m.source.rule is RuleKind.CONDEQBT
    assert m.condition.kind is ConditionKind.BETWEEN
    assert m.condition.op == "equal to"


def test_subject_only_fragment(lexicon, ontology, agreement):
    m = model_of("I", lexicon, ontology, agreement)
    assert m.intent is Intent.SUBJECT_ONLY
    assert m.concept is None and m.condition is None


def test_agreement_violation_raised(lexicon, ontology, agreement):
    with pytest.raises(AgreementViolation):
        model_of("They is looking for music", lexicon, ontology, agreement)


def test_no_subject_skips_agreement(lexicon, ontology, agreement):
    # stmt2 has no subject, so a copular verb is not checked against anything
    m = model_of("is searching music", lexicon, ontology, agreement)
    assert m.intent is Intent.DIRECT_SEARCH
    assert m.subject is None


def test_composition_requires_where_relation(lexicon, agreement):
    # an ontology lacking the where/between edge rejects condbt statements
    bare = load_ontology("isa where b\nisa between looking\nisa looking b\nisa equal looking\n")
    stmt = parse(tokenize("I need cad where between 1 and 5", lexicon))
    with pytest.raises(CompositionViolation):
        build_model(stmt, bare, agreement, lexicon)


def test_composition_checks_eq_successor(lexicon, agreement):
    only_between = load_ontology(
        "isa where b\nisa between looking\nisa looking b\nisa equal looking\n"
        "rel where between condition\n"
    )
    bt_stmt = parse(tokenize("I need cad where between 1 and 5", lexicon))
    build_model(bt_stmt, only_between, agreement, lexicon)  # fine
    eq_stmt = parse(tokenize("I need cad where greater than", lexicon))
    with pytest.raises(CompositionViolation):
        build_model(eq_stmt, only_between, agreement, lexicon)


def test_direct_rules_never_get_conditions(lexicon, ontology, agreement):
    for text in ("I need cad", "need cad", "cad", "i", "need"):
        m = model_of(text, lexicon, ontology, agreement)
        assert (m.condition is not None) == (m.intent is Intent.CONDITIONAL_SEARCH)


def test_conditional_rules_always_get_conditions(lexicon, ontology, agreement):
    for text in (
        "I need cad where between 1 and 5",
        "I need cad equal to 5",
        "I need cad where less than",
        "I need cad where with between 2 and 3",
    ):
        m = model_of(text, lexicon, ontology, agreement)
        assert m.intent is Intent.CONDITIONAL_SEARCH
        assert m.condition is not None
