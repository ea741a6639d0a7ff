"""Query evaluation: prelude semantics, builtins, and error contracts."""

import random

import pytest

from kbir import (
    Entity,
    Facet,
    KbInputs,
    RelationCategory,
    RelationInstance,
    RelationType,
    evaluate,
    parse_program,
)
from kbir.errors import (
    ConstantNotFoundError,
    InvalidArgumentError,
    TimeoutError_,
    UnboundEqualityError,
    UnboundVariableError,
    UnknownPredicateError,
    UnknownRoleError,
)

from conftest import above, below, make_forest, within_above, within_below

RELATED_TYPE = RelationType(
    "RelatedTerm",
    RelationCategory.UNSPECIFIC_ASSOCIATION,
    "subjectMember",
    "objectMember",
)

STEP_RULE = "step($A, $B) :- RelatedTerm($A : subjectMember, $B : objectMember)."

REACH_RULES = (
    STEP_RULE + "\n"
    "reach($A, $B) :- { step($A, $B) | step($A, $C), reach($C, $B) }."
)


def generic_kb(ids, edges, labels=None):
    labels = labels or {}
    return KbInputs(
        facets=(Facet("f", "Fixture"),),
        entities=tuple(Entity(i, labels.get(i, i), "f") for i in ids),
        relation_types=(
            RelationType(
                "HierarchicalRelation",
                RelationCategory.GENERIC_HIERARCHY,
                "broaderTermMember",
                "narrowerTermMember",
            ),
        ),
        relation_instances=tuple(
            RelationInstance("HierarchicalRelation", s, t) for s, t in edges
        ),
        composition_overrides={},
    ).build()


def related_kb(ids, edges):
    return KbInputs(
        facets=(Facet("f", "Fixture"),),
        entities=tuple(Entity(i, i, "f") for i in ids),
        relation_types=(RELATED_TYPE,),
        relation_instances=tuple(
            RelationInstance("RelatedTerm", s, t) for s, t in edges
        ),
        composition_overrides={},
    ).build()


def rows(kb, query, rules=""):
    return evaluate(kb, parse_program(query, rules))


def value_set(kb, query, rules="", var="X"):
    return {row[var] for row in rows(kb, query, rules)}


CHAIN = generic_kb(["a", "b", "c"], [("a", "b"), ("b", "c")])


# -- prelude semantics ------------------------------------------------------


def test_narrower_term_includes_the_start_entity():
    assert [r["X"] for r in rows(CHAIN, "narrower-term(a, $X)?")] == ["a", "b", "c"]


def test_strictly_narrower_term_excludes_the_start_entity():
    assert [r["X"] for r in rows(CHAIN, "strictly-narrower-term(a, $X)?")] == ["b", "c"]


def test_broader_term_walks_the_parent_chain():
    assert value_set(CHAIN, "broader-term(c, $X)?") == {"a", "b", "c"}
    assert value_set(CHAIN, "strictly-broader-term(c, $X)?") == {"a", "b"}


def test_prelude_variants_match_oracle_on_random_forests():
    rng = random.Random(60455)
    for _ in range(25):
        kb, edges = make_forest(rng, max_nodes=40)
        for e in sorted(kb.entities):
            direct = {c for p, c in edges if p == e}
            assert value_set(kb, f"direct-narrower-term({e}, $X)?") == direct
            assert value_set(kb, f"narrower-term({e}, $X)?") == below(edges, e) | {e}
            assert value_set(kb, f"strictly-narrower-term({e}, $X)?") == below(edges, e)
            for k in (1, 2, 3):
                assert value_set(kb, f"narrower-term-{k}({e}, $X)?") == within_below(
                    edges, e, k
                )
            assert value_set(kb, f"broader-term({e}, $X)?") == above(edges, e) | {e}
            assert value_set(kb, f"strictly-broader-term({e}, $X)?") == above(edges, e)
            assert value_set(kb, f"broader-term-1({e}, $X)?") == within_above(
                edges, e, 1
            )
            for k in (2, 3):
                assert value_set(kb, f"broader-term-{k}($X, {e})?") == within_below(
                    edges, e, k
                )


def test_open_one_shots_enumerate_the_whole_relation():
    rng = random.Random(60456)
    for _ in range(10):
        kb, edges = make_forest(rng, max_nodes=40)
        got = {(r["A"], r["B"]) for r in rows(kb, "direct-narrower-term($A, $B)?")}
        assert got == set(edges)
        strict = {(r["A"], r["B"]) for r in rows(kb, "strictly-narrower-term($A, $B)?")}
        assert strict == {(e, d) for e in kb.entities for d in below(edges, e)}
        inverse = {(r["A"], r["B"]) for r in rows(kb, "strictly-broader-term($A, $B)?")}
        assert inverse == {(b, a) for a, b in strict}


def test_direct_broader_term_is_the_edge_inverse():
    assert value_set(CHAIN, "direct-broader-term(c, $X)?") == {"b"}
    assert value_set(CHAIN, "direct-broader-term(a, $X)?") == set()


# -- recursion shapes -------------------------------------------------------


def test_recursive_rule_saturates_a_cycle():
    kb = related_kb(["x", "y", "z"], [("x", "y"), ("y", "z"), ("z", "x")])
    assert value_set(kb, "reach(x, $X)?", REACH_RULES) == {"x", "y", "z"}
    assert len(rows(kb, "reach($X, $Y)?", REACH_RULES)) == 9


def test_left_recursive_rule_terminates():
    kb = related_kb(["x", "y", "z"], [("x", "y"), ("y", "z"), ("z", "x")])
    rules = (
        STEP_RULE + "\n"
        "lreach($A, $B) :- { lreach($A, $C), step($C, $B) | step($A, $B) }."
    )
    assert value_set(kb, "lreach(x, $X)?", rules) == {"x", "y", "z"}


def test_mutually_recursive_rules_terminate():
    kb = related_kb(["x", "y", "z"], [("x", "y"), ("y", "z"), ("z", "x")])
    rules = (
        "even-path($A, $B) :- { $A = $B | step($A, $C), odd-path($C, $B) }.\n"
        "odd-path($A, $B) :- step($A, $C), even-path($C, $B).\n" + STEP_RULE
    )
    assert value_set(kb, "even-path(x, $X)?", rules) == {"x", "y", "z"}
    assert value_set(kb, "odd-path(x, $X)?", rules) == {"x", "y", "z"}


def test_self_loop_yields_one_answer():
    kb = related_kb(["s"], [("s", "s")])
    assert rows(kb, "reach(s, $X)?", REACH_RULES) == [{"X": "s"}]


def test_repeated_variable_call_requires_equal_positions():
    kb = related_kb(["p", "q"], [("p", "q"), ("p", "p")])
    assert rows(kb, "step($X, $X)?", STEP_RULE) == [{"X": "p"}]
    assert rows(CHAIN, "strictly-narrower-term($X, $X)?") == []


def test_user_rules_shadow_the_prelude():
    shadow = "narrower-term($A, $B) :- direct-narrower-term($A, $B)."
    assert value_set(CHAIN, "narrower-term(a, $X)?", shadow) == {"b"}


def test_queries_without_the_prelude_lack_its_predicates():
    program = parse_program("narrower-term(a, $X)?", include_prelude=False)
    with pytest.raises(UnknownPredicateError):
        evaluate(CHAIN, program)


# -- association atoms and builtins -----------------------------------------


def test_hierarchy_builtin_finds_children_by_role(asist_kb):
    got = value_set(
        asist_kb,
        "HierarchicalRelation(indexing : broaderTermMember, $X : narrowerTermMember)?",
    )
    assert got == {"automatic_indexing", "content_based_indexing", "machine_aided_indexing"}


def test_association_member_order_does_not_matter(asist_kb):
    forward = rows(
        asist_kb,
        "HierarchicalRelation(indexing : broaderTermMember, $X : narrowerTermMember)?",
    )
    reversed_members = rows(
        asist_kb,
        "HierarchicalRelation($X : narrowerTermMember, indexing : broaderTermMember)?",
    )
    assert forward == reversed_members


def test_partitive_builtin_uses_whole_and_part_roles():
    kb = KbInputs(
        facets=(Facet("f", "Fixture"),),
        entities=tuple(Entity(i, i, "f") for i in ["car", "wheel", "engine"]),
        relation_types=(
            RelationType(
                "Composition",
                RelationCategory.WHOLE_PART_HIERARCHY,
                "wholeMember",
                "partMember",
            ),
        ),
        relation_instances=(
            RelationInstance("Composition", "car", "wheel"),
            RelationInstance("Composition", "car", "engine"),
        ),
        composition_overrides={},
    ).build()
    got = value_set(kb, "PartitiveRelation(car : wholeMember, $X : partMember)?")
    assert got == {"wheel", "engine"}
    assert value_set(kb, "PartitiveRelation($X : wholeMember, wheel : partMember)?") == {
        "car"
    }


def test_typed_association_atom_joins_with_prelude(asist_kb):
    got = value_set(
        asist_kb,
        "Production($TOPIC : isProducing, $PRODUCT : isProductOf),\n"
        "narrower-term(controlled_vocabularies, $PRODUCT)?",
        var="TOPIC",
    )
    assert got == {
        "automatic_indexing",
        "index_language_construction",
        "subject_heading_lists",
        "subject_headings",
        "vocabulary_control",
    }


def test_prefix_builtin_filters_bound_results(asist_kb):
    got = value_set(
        asist_kb,
        'narrower-term(index_languages, $X), value-starts-with($X, "subject")?',
    )
    assert got == {"subject_heading_lists", "subject_headings"}


def test_prefix_builtin_takes_a_bare_word_as_literal_text(asist_kb):
    quoted = rows(
        asist_kb,
        'narrower-term(index_languages, $X), value-starts-with($X, "subject")?',
    )
    bare = rows(
        asist_kb,
        "narrower-term(index_languages, $X), value-starts-with($X, subject)?",
    )
    assert bare == quoted


def test_prefix_builtin_matches_synonyms_case_insensitively(asist_kb):
    got = value_set(asist_kb, 'value-starts-with($X, "Machine Index")?')
    assert got == {"automatic_indexing"}


def test_prefix_builtin_with_ground_subject_acts_as_a_filter(asist_kb):
    assert rows(asist_kb, 'value-starts-with(weighting, "weigh")?') == [{}]
    assert rows(asist_kb, 'value-starts-with(weighting, "zzz")?') == []


def test_quoted_constant_resolves_by_label():
    kb = generic_kb(
        ["r", "s"], [("r", "s")], labels={"r": "root term", "s": "sub term"}
    )
    assert value_set(kb, 'strictly-narrower-term("root term", $X)?') == {"s"}


# -- equality ----------------------------------------------------------------


def test_equality_binds_a_variable_to_a_constant(asist_kb):
    assert rows(asist_kb, "$A = indexing?") == [{"A": "indexing"}]


def test_ground_equality_is_a_filter(asist_kb):
    assert rows(asist_kb, "indexing = indexing?") == [{}]
    assert rows(asist_kb, "indexing = weighting?") == []


def test_equality_chains_left_to_right(asist_kb):
    got = rows(asist_kb, "$A = indexing, $B = $A?")
    assert got == [{"A": "indexing", "B": "indexing"}]


# -- result shape ------------------------------------------------------------


def test_rows_are_sorted_by_casefolded_label():
    kb = generic_kb(
        ["r", "b", "a", "g"],
        [("r", "b"), ("r", "a"), ("r", "g")],
        labels={"r": "Root", "b": "beta", "a": "Alpha", "g": "gamma"},
    )
    got = [row["X"] for row in rows(kb, "narrower-term(r, $X)?")]
    assert got == ["a", "b", "g", "r"]


def test_duplicate_rows_collapse():
    assert rows(CHAIN, "{ $X = a | $X = a }?") == [{"X": "a"}]


def test_explicit_select_projects_and_dedupes():
    got = rows(CHAIN, "select $B from direct-narrower-term($A, $B)?")
    assert got == [{"B": "b"}, {"B": "c"}]


def test_rows_use_bare_variable_names(asist_kb):
    row = rows(asist_kb, "$A = indexing?")[0]
    assert set(row) == {"A"}


# -- error contracts ---------------------------------------------------------


def test_unbound_equality_raises():
    for query in ["$A = $B?", "narrower-term($A, $B)?", "broader-term-2(a, $X)?"]:
        with pytest.raises(UnboundEqualityError):
            rows(CHAIN, query)


def test_unknown_predicate_raises(asist_kb):
    with pytest.raises(UnknownPredicateError):
        rows(asist_kb, "no-such-pred(indexing, $X)?")
    with pytest.raises(UnknownPredicateError):
        rows(asist_kb, "Nonexistent($A : left, $B : right)?")
    with pytest.raises(UnknownPredicateError) as err:
        rows(asist_kb, "narrower-term(indexing)?")
    assert "takes 2 arguments, got 1" in str(err.value)


def test_association_name_without_roles_hints_at_role_syntax(asist_kb):
    with pytest.raises(UnknownPredicateError) as err:
        rows(asist_kb, "Methodology(indexing, $X)?")
    assert "role" in str(err.value)


def test_unknown_constant_raises(asist_kb):
    with pytest.raises(ConstantNotFoundError):
        rows(asist_kb, "narrower-term(unobtainium, $X)?")


def test_unknown_role_raises(asist_kb):
    with pytest.raises(UnknownRoleError):
        rows(asist_kb, "Methodology($T : isMethodOf, indexing : isWrongRole)?")


def test_variable_prefix_raises(asist_kb):
    with pytest.raises(InvalidArgumentError):
        rows(asist_kb, "value-starts-with($X, $P)?")


def test_rule_that_leaves_a_parameter_unbound_raises():
    rules = "free($A, $B) :- $A = a."
    with pytest.raises(UnboundVariableError):
        rows(CHAIN, "free(a, $B)?", rules)


# -- budget ------------------------------------------------------------------


def long_chain_kb(n=400):
    ids = ["c%03d" % i for i in range(n)]
    return generic_kb(ids, [(ids[i], ids[i + 1]) for i in range(n - 1)])


def test_exhausted_budget_raises_timeout():
    kb = long_chain_kb()
    program = parse_program("broader-term(c399, $X)?")
    with pytest.raises(TimeoutError_):
        evaluate(kb, program, budget_seconds=1e-7)


def test_sufficient_budget_completes():
    kb = long_chain_kb()
    program = parse_program("broader-term(c399, $X)?")
    assert len(evaluate(kb, program, budget_seconds=10.0)) == 400
