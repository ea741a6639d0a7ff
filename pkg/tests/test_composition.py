"""Composition table conformance.

Expected verdicts are encoded here independently of the implementation:
first as literal published cells, then as a rule encoding that covers all
14 x 14 ordered pairs, so the two formulations check each other.
"""

import itertools

from kbir import RelationCategory, TransitivityVerdict, compose

EQ = RelationCategory.EQUIVALENCE
GEN = RelationCategory.GENERIC_HIERARCHY
WP = RelationCategory.WHOLE_PART_HIERARCHY
EL = RelationCategory.CHRONO_EARLIER_LATER
LE = RelationCategory.CHRONO_LATER_EARLIER
UA = RelationCategory.UNSPECIFIC_ASSOCIATION
RMP = RelationCategory.RAW_MATERIAL_PRODUCT
CAUS = RelationCategory.CAUSALITY
AP = RelationCategory.ACTION_PRODUCT
PAA = RelationCategory.PERSON_ACTOR_ACTION
IAA = RelationCategory.INSTITUTION_ACTOR_ACTION
PAP = RelationCategory.PERSON_ACTOR_PRODUCT
IAP = RelationCategory.INSTITUTION_ACTOR_PRODUCT
FOA = RelationCategory.FIELD_OF_APPLICATION

PLUS = TransitivityVerdict.TRANSITIVE
MINUS = TransitivityVerdict.NOT_EXPECTED
ZERO = TransitivityVerdict.NOT_APPLICABLE

HIERARCHY = (GEN, WP)
CHRONOLOGY = (EL, LE)
ASSOCIATIVE = (UA, RMP, CAUS, AP, PAA, IAA, PAP, IAP, FOA)
# The associative categories that appear in the published tables; the field
# of application category is handled separately (uniform pattern, no row).
TABLED_ASSOCIATIVE = (UA, RMP, AP, PAA, IAA, CAUS, PAP, IAP)

# Same-type connections, one triple per published cell.
SAME_TYPE_CELLS = [
    (EQ, EQ, ZERO),
    (GEN, GEN, PLUS),
    (WP, WP, PLUS),
    (GEN, WP, MINUS),
    (WP, GEN, MINUS),
    (EL, EL, PLUS),
    (LE, LE, PLUS),
    (EL, LE, MINUS),
    (LE, EL, MINUS),
    (UA, UA, MINUS),
    (RMP, RMP, PLUS),
    (CAUS, CAUS, PLUS),
    (PAA, PAA, MINUS),
    (IAA, IAA, MINUS),
    (PAP, PAP, MINUS),
    (IAP, IAP, MINUS),
    (AP, AP, MINUS),
]

# Mixed hierarchical and chronological connections, synonym rows included.
MIXED_HIERARCHY_CELLS = [
    (EQ, GEN, PLUS),
    (EQ, WP, PLUS),
    (GEN, EQ, ZERO),
    (WP, EQ, ZERO),
    (EQ, EL, PLUS),
    (EQ, LE, PLUS),
    (EL, EQ, ZERO),
    (LE, EQ, ZERO),
    (GEN, EL, PLUS),
    (GEN, LE, PLUS),
    (EL, GEN, PLUS),
    (LE, GEN, PLUS),
    (WP, EL, PLUS),
    (WP, LE, PLUS),
    (EL, WP, PLUS),
    (LE, WP, PLUS),
]

# Cross-associative pairs no table specifies; denied by default.
UNSPECIFIED_CROSS_ASSOCIATIVE = [
    (CAUS, RMP),
    (UA, CAUS),
    (RMP, AP),
    (PAA, IAA),
    (FOA, UA),
]


def expected_verdict(first, second):
    """Rule encoding of the full table, written for readability over speed."""
    if second is EQ:
        return ZERO
    if first is EQ:
        return PLUS
    ordered = set(HIERARCHY) | set(CHRONOLOGY)
    if first in ordered and second in ordered:
        same_family = (first in HIERARCHY) == (second in HIERARCHY)
        if same_family:
            return PLUS if first is second else MINUS
        return PLUS
    if first in ASSOCIATIVE and second in ordered:
        return PLUS
    if first in ordered and second in ASSOCIATIVE:
        return MINUS
    if first is second and first in (RMP, CAUS):
        return PLUS
    return MINUS


def test_category_inventory_is_complete():
    assert len(RelationCategory) == 14
    assert len({EQ, *HIERARCHY, *CHRONOLOGY, *ASSOCIATIVE}) == 14


def test_same_type_cells():
    for first, second, verdict in SAME_TYPE_CELLS:
        assert compose(first, second) is verdict, (first, second)


def test_mixed_hierarchy_and_chronology_cells():
    for first, second, verdict in MIXED_HIERARCHY_CELLS:
        assert compose(first, second) is verdict, (first, second)


def test_associative_then_hierarchy_cells():
    for first in TABLED_ASSOCIATIVE:
        for second in (GEN, WP, EL, LE):
            assert compose(first, second) is PLUS, (first, second)


def test_field_of_application_follows_the_associative_pattern():
    for second in (GEN, WP, EL, LE):
        assert compose(FOA, second) is PLUS
    assert compose(FOA, FOA) is MINUS


def test_hierarchy_then_associative_is_not_expected():
    for first in (GEN, WP, EL, LE):
        for second in ASSOCIATIVE:
            assert compose(first, second) is MINUS, (first, second)


def test_unspecified_cross_associative_pairs_are_denied():
    for first, second in UNSPECIFIED_CROSS_ASSOCIATIVE:
        assert first is not second
        assert compose(first, second) is MINUS, (first, second)


def test_every_ordered_pair_has_a_verdict():
    for first, second in itertools.product(RelationCategory, repeat=2):
        assert compose(first, second) in TransitivityVerdict


def test_full_table_matches_the_rule_encoding():
    for first, second in itertools.product(RelationCategory, repeat=2):
        assert compose(first, second) is expected_verdict(first, second), (
            first,
            second,
        )


def test_overrides_take_precedence_over_table_cells():
    overrides = {(WP, WP): MINUS, (GEN, UA): PLUS}
    assert compose(WP, WP, overrides) is MINUS
    assert compose(GEN, UA, overrides) is PLUS
    # untouched cells keep their table verdicts
    assert compose(WP, GEN, overrides) is MINUS
    assert compose(GEN, GEN, overrides) is PLUS
    assert compose(EQ, WP, overrides) is PLUS


def test_empty_overrides_change_nothing():
    for first, second in itertools.product(RelationCategory, repeat=2):
        assert compose(first, second, {}) is compose(first, second)
