import json

import pytest

from isoas.errors import (
    ArityMismatch,
    EmptyList,
    InvalidRange,
    MixedStores,
    UnboundParameter,
    Unresolvable,
)
from isoas.lexer import tokenize
from isoas.lexicon import TokenClass
from isoas.modeler import Literal, build_model
from isoas.parser import parse_many
from isoas.resolver import (
    OPERATOR_FOR_EQ,
    AndNode,
    BetweenLeaf,
    CompareLeaf,
    HoleLeaf,
    StructuredQuery,
    bind,
    filter_leaves,
    integrate,
    render_sql,
    resolve,
)

WORD_FORM_MAPPING = {
    "equal to": "=",
    "with": "=",
    "less than": "<",
    "greater than": ">",
    "less than and equal to": "<=",
    "greater than and equal to": ">=",
}


def query_for(text, lexicon, ontology, agreement, store="main"):
    statements = parse_many(tokenize(text, lexicon))
    models = [build_model(s, ontology, agreement, lexicon) for s in statements]
    return integrate([resolve(m, store) for m in models])


def num(text):
    return Literal(text=str(text), numeric=True)


def test_eq_mapping_total_over_all_lexemes(lexicon):
    eq_lexemes = lexicon.phrases(TokenClass.EQ)
    assert len(eq_lexemes) == 10
    for lexeme in eq_lexemes:
        assert lexeme in OPERATOR_FOR_EQ
    for word_form, op in WORD_FORM_MAPPING.items():
        assert OPERATOR_FOR_EQ[word_form] == op
    for symbol in (">", "<", "<=", ">="):
        assert OPERATOR_FOR_EQ[symbol] == symbol
    assert set(OPERATOR_FOR_EQ.values()) == {"=", "<", ">", "<=", ">="}


def test_direct_search_resolves_without_filter(lexicon, ontology, agreement):
    q = query_for("I need cad", lexicon, ontology, agreement)
    assert q.concepts == ("cad",)
    assert q.filter is None
    assert q.params == ()


def test_compare_resolves_to_mapped_operator(lexicon, ontology, agreement):
    q = query_for("I need cad less than 5", lexicon, ontology, agreement)
    assert q.filter == CompareLeaf(op="<", value=num(5))


def test_between_resolves(lexicon, ontology, agreement):
    q = query_for("I need cad where between 1 and 5", lexicon, ontology, agreement)
    assert q.filter == BetweenLeaf(lo=num(1), hi=num(5))


def test_hole_resolves_to_param(lexicon, ontology, agreement):
    q = query_for("I need cad where greater than", lexicon, ontology, agreement)
    assert q.filter == HoleLeaf(op=">")
    assert q.params == (("value", ">"),)


def test_condeqbt_records_operator_note(lexicon, ontology, agreement):
    q = query_for("I need cad where equal to between 1 and 5", lexicon, ontology, agreement)
    assert q.filter == BetweenLeaf(lo=num(1), hi=num(5))
    assert any("equal to" in note for note in q.notes)


def test_fragments_are_unresolvable(lexicon, ontology, agreement):
    for text in ("i", "need", "cad"):
        model = build_model(
            parse_many(tokenize(text, lexicon))[0], ontology, agreement, lexicon
        )
        with pytest.raises(Unresolvable):
            resolve(model, "main")


def test_inverted_numeric_range_rejected():
    with pytest.raises(InvalidRange):
        BetweenLeaf(lo=num(5), hi=num(1))


def test_text_range_is_not_checked():
    BetweenLeaf(
        lo=Literal(text="zebra", numeric=False), hi=Literal(text="apple", numeric=False)
    )


def test_integrate_singleton_identity():
    q = StructuredQuery(store="s", concepts=("cad",))
    assert integrate([q]) is q


def test_integrate_unions_concepts_and_ands_filters():
    q1 = StructuredQuery(store="s", concepts=("document",), filter=CompareLeaf("<", num(9)))
    q2 = StructuredQuery(store="s", concepts=("cad",), filter=BetweenLeaf(num(1), num(5)))
    merged = integrate([q1, q2])
    assert merged.concepts == ("document", "cad")
    assert filter_leaves(merged.filter) == (
        CompareLeaf("<", num(9)),
        BetweenLeaf(num(1), num(5)),
    )


def test_integrate_mixed_stores_rejected():
    with pytest.raises(MixedStores):
        integrate(
            [
                StructuredQuery(store="s1", concepts=("a",)),
                StructuredQuery(store="s2", concepts=("b",)),
            ]
        )


def test_integrate_empty_rejected():
    with pytest.raises(EmptyList):
        integrate([])


def test_integrate_concept_or_matches_union_of_result_sets(repo):
    """Filter-free integration must equal the union of per-query results."""
    repo.create_store("s")
    repo.ingest(
        "s",
        "id,name,kind,description,value\n"
        "1,spec,document,first,1\n"
        "2,axle,cad,second,2\n"
        "3,notes,document,third,3\n"
        "4,song,music,fourth,4\n",
    )
    q1 = StructuredQuery(store="s", concepts=("document",))
    q2 = StructuredQuery(store="s", concepts=("cad",))
    union_ids = sorted(
        {r.id for r in repo.execute("s", q1)} | {r.id for r in repo.execute("s", q2)}
    )
    merged_ids = [r.id for r in repo.execute("s", integrate([q1, q2]))]
    assert merged_ids == union_ids == [1, 2, 3]


def test_integrate_is_associative_on_filter_free_queries(repo):
    repo.create_store("s")
    repo.ingest(
        "s",
        "id,name,kind,description,value\n"
        "1,a,document,x,1\n2,b,cad,y,2\n3,c,music,z,3\n",
    )
    qs = [StructuredQuery(store="s", concepts=(c,)) for c in ("document", "cad", "music")]
    left = integrate([integrate(qs[:2]), qs[2]])
    right = integrate([qs[0], integrate(qs[1:])])
    assert [r.id for r in repo.execute("s", left)] == [r.id for r in repo.execute("s", right)]


def test_render_sql_direct():
    q = StructuredQuery(store="s", concepts=("document",))
    assert render_sql(q) == "SELECT id, name, kind, value FROM records WHERE (kind = 'document')"


def test_render_sql_between():
    q = StructuredQuery(store="s", concepts=("document",), filter=BetweenLeaf(num(1), num(5)))
    assert render_sql(q) == (
        "SELECT id, name, kind, value FROM records WHERE (kind = 'document')"
        " AND value BETWEEN 1 AND 5"
    )


def test_render_sql_compare():
    q = StructuredQuery(store="s", concepts=("cad",), filter=CompareLeaf(">=", num(4)))
    assert render_sql(q) == (
        "SELECT id, name, kind, value FROM records WHERE (kind = 'cad') AND value >= 4"
    )


def test_render_sql_orders_concepts_lexicographically():
    q = StructuredQuery(store="s", concepts=("document", "cad"))
    assert render_sql(q) == (
        "SELECT id, name, kind, value FROM records WHERE (kind = 'cad' OR kind = 'document')"
    )


def test_render_sql_quotes_strings():
    q = StructuredQuery(store="s", concepts=("o'brien",))
    assert render_sql(q) == (
        "SELECT id, name, kind, value FROM records WHERE (kind = 'o''brien')"
    )


def test_render_sql_rejects_holes():
    q = StructuredQuery(store="s", concepts=("cad",), filter=HoleLeaf(op=">"))
    with pytest.raises(UnboundParameter):
        render_sql(q)


def test_bind_fills_hole():
    q = StructuredQuery(store="s", concepts=("cad",), filter=HoleLeaf(op=">"))
    bound = bind(q, [5])
    assert bound.filter == CompareLeaf(op=">", value=num(5))
    assert bound.params == ()


def test_bind_no_holes_identity():
    q = StructuredQuery(store="s", concepts=("cad",))
    assert bind(q, []) is q


def test_bind_arity_mismatch():
    q = StructuredQuery(store="s", concepts=("cad",), filter=HoleLeaf(op=">"))
    with pytest.raises(ArityMismatch):
        bind(q, [1, 2])


def test_bind_multiple_holes_in_order():
    q = StructuredQuery(
        store="s",
        concepts=("cad",),
        filter=AndNode(children=(HoleLeaf(op=">"), HoleLeaf(op="<"))),
    )
    bound = bind(q, [1, "9"])
    assert filter_leaves(bound.filter) == (
        CompareLeaf(op=">", value=num(1)),
        CompareLeaf(op="<", value=num(9)),
    )


def test_query_ir_json_round_trip(lexicon, ontology, agreement):
    for text in (
        "I need cad",
        "I need cad where between 1 and 5",
        "I need cad where greater than",
        "I need document I want cad less than 7",
    ):
        q = query_for(text, lexicon, ontology, agreement)
        again = StructuredQuery.from_json(json.loads(json.dumps(q.to_json())))
        assert again == q
