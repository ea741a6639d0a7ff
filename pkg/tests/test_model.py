"""Knowledge-base construction, validation findings, and label resolution."""

import pytest

from kbir import (
    Entity,
    Facet,
    KbInputs,
    RelationCategory,
    RelationInstance,
    RelationType,
    build_kb,
    normalize_label,
    resolve_label,
    validate_inputs,
    validate_kb,
)
from kbir.errors import (
    AmbiguousError,
    HierarchyCycleError,
    NotFoundError,
    PolyhierarchyViolationError,
    UnknownEntityError,
    UnknownRelationTypeError,
)

from conftest import GENERIC_TYPE

RC = RelationCategory


def forest_inputs(entity_ids, edges, extra_types=(), extra_instances=()):
    return KbInputs(
        facets=(Facet("f", "Test facet"),),
        entities=tuple(Entity(i, i.replace("_", " "), "f") for i in entity_ids),
        relation_types=(GENERIC_TYPE,) + tuple(extra_types),
        relation_instances=tuple(
            RelationInstance("HierarchicalRelation", s, t) for s, t in edges
        )
        + tuple(extra_instances),
        composition_overrides={},
    )


def finding_codes(report):
    return sorted(f.code for f in report if f.severity == "error")


def test_minimal_forest_builds():
    kb = forest_inputs(["a", "b"], [("a", "b")]).build()
    assert kb.generic_children["a"] == ("b",)
    assert kb.generic_parent["b"] == "a"
    assert "a" not in kb.generic_parent


def test_entity_lookup_raises_for_unknown_ids():
    kb = forest_inputs(["a"], []).build()
    assert kb.entity("a").preferred_label == "a"
    with pytest.raises(UnknownEntityError):
        kb.entity("zz")
    with pytest.raises(UnknownRelationTypeError):
        kb.relation_type("NoSuchType")


def test_two_parents_are_rejected():
    inputs = forest_inputs(["a", "b", "c"], [("a", "c"), ("b", "c")])
    with pytest.raises(PolyhierarchyViolationError):
        inputs.build()
    assert "PolyhierarchyViolation" in finding_codes(
        validate_inputs(*inputs_fields(inputs))
    )


def test_two_cycle_is_rejected():
    inputs = forest_inputs(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(HierarchyCycleError):
        inputs.build()
    assert "HierarchyCycle" in finding_codes(validate_inputs(*inputs_fields(inputs)))


def test_longer_cycle_is_rejected():
    inputs = forest_inputs(
        ["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
    )
    with pytest.raises(HierarchyCycleError):
        inputs.build()


def inputs_fields(inputs):
    return (
        inputs.facets,
        inputs.entities,
        inputs.relation_types,
        inputs.relation_instances,
        inputs.composition_overrides,
    )


def test_duplicate_entity_id_finding():
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(Entity("a", "a", "f"), Entity("a", "also a", "f")),
        relation_types=(),
        relation_instances=(),
        composition_overrides={},
    )
    assert "DuplicateId" in finding_codes(validate_inputs(*inputs_fields(inputs)))


def test_invalid_entity_id_finding():
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(Entity("Not Valid", "x", "f"),),
        relation_types=(),
        relation_instances=(),
        composition_overrides={},
    )
    assert "InvalidId" in finding_codes(validate_inputs(*inputs_fields(inputs)))


def test_dangling_instance_endpoint_finding():
    inputs = forest_inputs(["a"], [("a", "ghost")])
    assert "DanglingReference" in finding_codes(
        validate_inputs(*inputs_fields(inputs))
    )


def test_instance_of_undeclared_type_finding():
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(Entity("a", "a", "f"), Entity("b", "b", "f")),
        relation_types=(),
        relation_instances=(RelationInstance("Mystery", "a", "b"),),
        composition_overrides={},
    )
    assert "DanglingReference" in finding_codes(
        validate_inputs(*inputs_fields(inputs))
    )


def test_duplicate_label_within_facet_finding():
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(Entity("a", "Same Label", "f"), Entity("b", "same label", "f")),
        relation_types=(),
        relation_instances=(),
        composition_overrides={},
    )
    assert "DuplicateLabel" in finding_codes(validate_inputs(*inputs_fields(inputs)))


def test_synonym_colliding_with_entity_id_finding():
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(Entity("a", "a", "f"), Entity("b", "b", "f", synonyms=("a",))),
        relation_types=(),
        relation_instances=(),
        composition_overrides={},
    )
    assert "SynonymCollision" in finding_codes(validate_inputs(*inputs_fields(inputs)))


def test_equivalence_relation_type_is_invalid():
    bad = RelationType("Synonymy", RC.EQUIVALENCE, "from", "to")
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(Entity("a", "a", "f"),),
        relation_types=(bad,),
        relation_instances=(),
        composition_overrides={},
    )
    assert "InvalidRelationType" in finding_codes(
        validate_inputs(*inputs_fields(inputs))
    )


def test_relation_type_with_equal_roles_is_invalid():
    bad = RelationType("Mirror", RC.UNSPECIFIC_ASSOCIATION, "side", "side")
    inputs = KbInputs(
        facets=(Facet("f", "F"),),
        entities=(),
        relation_types=(bad,),
        relation_instances=(),
        composition_overrides={},
    )
    assert "InvalidRelationType" in finding_codes(
        validate_inputs(*inputs_fields(inputs))
    )


def test_build_is_atomic_on_error():
    inputs = forest_inputs(["a", "b", "c"], [("a", "c"), ("b", "c")])
    with pytest.raises(PolyhierarchyViolationError):
        build_kb(
            inputs.facets,
            inputs.entities,
            inputs.relation_types,
            inputs.relation_instances,
        )


def test_bundled_datasets_validate_clean(asist_kb, songbirds_kb):
    assert validate_kb(asist_kb).is_empty
    assert validate_kb(songbirds_kb).is_empty


def test_normalize_label_folds_case_and_whitespace():
    assert normalize_label("  Facet   Analysis ") == "facet_analysis"
    assert normalize_label("NLP") == "nlp"
    assert normalize_label("already_normal") == "already_normal"


def test_resolve_label_by_id_label_and_synonym(asist_kb):
    assert resolve_label(asist_kb, "indexing") == "indexing"
    assert resolve_label(asist_kb, "Facet Analysis") == "facet_analysis"
    assert resolve_label(asist_kb, "thesaurus") == "thesauri"
    assert resolve_label(asist_kb, "NLP") == "natural_language_processing"
    assert resolve_label(asist_kb, "machine indexing") == "automatic_indexing"


def test_resolve_label_on_songbirds_synonyms(songbirds_kb):
    assert resolve_label(songbirds_kb, "Turdus philomelos") == "song_thrush"
    assert resolve_label(songbirds_kb, "gnu") == "wildebeest"


def test_resolve_label_not_found(asist_kb):
    with pytest.raises(NotFoundError):
        resolve_label(asist_kb, "quantum_chromodynamics")


def test_resolve_label_ambiguous_across_facets():
    inputs = KbInputs(
        facets=(Facet("f1", "One"), Facet("f2", "Two")),
        entities=(Entity("a1", "shared name", "f1"), Entity("a2", "shared name", "f2")),
        relation_types=(),
        relation_instances=(),
        composition_overrides={},
    )
    kb = inputs.build()
    with pytest.raises(AmbiguousError):
        resolve_label(kb, "shared name")
    # ids stay unambiguous
    assert resolve_label(kb, "a1") == "a1"


def test_resolution_is_idempotent_over_every_name(asist_kb):
    names = []
    for eid in asist_kb.generic_children:
        entity = asist_kb.entity(eid)
        names.append(entity.preferred_label)
        names.extend(entity.synonyms)
    for name in names:
        once = resolve_label(asist_kb, name)
        again = resolve_label(asist_kb, asist_kb.entity(once).preferred_label)
        assert once == again


def test_merge_deduplicates_verbatim_records():
    a = forest_inputs(["a", "b"], [("a", "b")])
    merged = a.merge(forest_inputs(["a", "b"], [("a", "b")]))
    assert tuple(merged.entities) == tuple(a.entities)
    assert tuple(merged.relation_instances) == tuple(a.relation_instances)
    kb = merged.build()
    assert kb.generic_children["a"] == ("b",)


def test_build_then_validate_is_empty_property():
    kb = forest_inputs(["r", "m", "l1", "l2"], [("r", "m"), ("m", "l1"), ("m", "l2")]).build()
    assert validate_kb(kb).is_empty
