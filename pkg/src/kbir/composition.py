"""Relation categories and the pairwise transitivity verdicts for composing them.

A path of two relation steps is admissible for inference only when the
ordered pair of their categories composes to ``TRANSITIVE``.  The table is
total over all 14 x 14 ordered pairs; anything not covered by an explicit
rule composes to ``NOT_EXPECTED``.
"""

from __future__ import annotations

from enum import Enum
from typing import Mapping, Optional, Tuple


class RelationCategory(Enum):
    """Semantic category of a relation type."""

    EQUIVALENCE = "Equivalence"
    GENERIC_HIERARCHY = "GenericHierarchy"
    WHOLE_PART_HIERARCHY = "WholePartHierarchy"
    CHRONO_EARLIER_LATER = "ChronoEarlierLater"
    CHRONO_LATER_EARLIER = "ChronoLaterEarlier"
    UNSPECIFIC_ASSOCIATION = "UnspecificAssociation"
    RAW_MATERIAL_PRODUCT = "RawMaterialProduct"
    CAUSALITY = "Causality"
    ACTION_PRODUCT = "ActionProduct"
    PERSON_ACTOR_ACTION = "PersonActorAction"
    INSTITUTION_ACTOR_ACTION = "InstitutionActorAction"
    PERSON_ACTOR_PRODUCT = "PersonActorProduct"
    INSTITUTION_ACTOR_PRODUCT = "InstitutionActorProduct"
    FIELD_OF_APPLICATION = "FieldOfApplication"


class TransitivityVerdict(Enum):
    """Outcome of composing two relation categories along a path."""

    TRANSITIVE = "Transitive"
    NOT_EXPECTED = "NotExpected"
    NOT_APPLICABLE = "NotApplicable"


HIERARCHICAL = frozenset({
    RelationCategory.GENERIC_HIERARCHY,
    RelationCategory.WHOLE_PART_HIERARCHY,
})

CHRONOLOGICAL = frozenset({
    RelationCategory.CHRONO_EARLIER_LATER,
    RelationCategory.CHRONO_LATER_EARLIER,
})

# Hierarchies and the two chronological directions share the property of
# imposing an order on their members; several composition rules treat them
# as one block.
ORDERED = HIERARCHICAL | CHRONOLOGICAL

ASSOCIATIVE = frozenset({
    RelationCategory.UNSPECIFIC_ASSOCIATION,
    RelationCategory.RAW_MATERIAL_PRODUCT,
    RelationCategory.CAUSALITY,
    RelationCategory.ACTION_PRODUCT,
    RelationCategory.PERSON_ACTOR_ACTION,
    RelationCategory.INSTITUTION_ACTOR_ACTION,
    RelationCategory.PERSON_ACTOR_PRODUCT,
    RelationCategory.INSTITUTION_ACTOR_PRODUCT,
    RelationCategory.FIELD_OF_APPLICATION,
})

# The only associative categories whose self-composition carries over.
_SELF_TRANSITIVE = frozenset({
    RelationCategory.RAW_MATERIAL_PRODUCT,
    RelationCategory.CAUSALITY,
})

CompositionOverrides = Mapping[
    Tuple[RelationCategory, RelationCategory], TransitivityVerdict
]


def compose(
    first: RelationCategory,
    second: RelationCategory,
    overrides: Optional[CompositionOverrides] = None,
) -> TransitivityVerdict:
    """Verdict for traversing a ``first`` step followed by a ``second`` step.

    ``overrides`` maps ordered category pairs to replacement verdicts and is
    consulted before the built-in table.
    """
    if overrides:
        hit = overrides.get((first, second))
        if hit is not None:
            return hit
    return _normative(first, second)


def _normative(first: RelationCategory, second: RelationCategory) -> TransitivityVerdict:
    eq = RelationCategory.EQUIVALENCE
    if second is eq:
        # Ending on a synonym step never extends a path, regardless of the
        # first step (this covers Equivalence over Equivalence as well).
        return TransitivityVerdict.NOT_APPLICABLE
    if first is eq:
        # A synonym step followed by any real relation inherits it.
        return TransitivityVerdict.TRANSITIVE

    first_ordered = first in ORDERED
    second_ordered = second in ORDERED

    if first in ASSOCIATIVE:
        if second_ordered:
            return TransitivityVerdict.TRANSITIVE
        if first is second and first in _SELF_TRANSITIVE:
            return TransitivityVerdict.TRANSITIVE
        return TransitivityVerdict.NOT_EXPECTED

    if first_ordered and second in ASSOCIATIVE:
        return TransitivityVerdict.NOT_EXPECTED

    # Both steps are ordered categories from here on.
    if first is second:
        return TransitivityVerdict.TRANSITIVE
    if first in HIERARCHICAL and second in HIERARCHICAL:
        # Mixing the generic and the whole/part hierarchy breaks inheritance.
        return TransitivityVerdict.NOT_EXPECTED
    if first in CHRONOLOGICAL and second in CHRONOLOGICAL:
        # Opposite chronological directions cancel out.
        return TransitivityVerdict.NOT_EXPECTED
    # Hierarchy combined with a chronological step, in either order.
    return TransitivityVerdict.TRANSITIVE
