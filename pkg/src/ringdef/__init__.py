"""First-order definability toolkit for rings of S-integers and finitely
generated subrings of Q and F_p(T): exact valuation arithmetic, quaternion
splitting tests, semantic set oracles, parameter synthesis, and a formula
compiler with exact quantifier-rank accounting.
"""

from .fields import QQ, FieldElement, RationalFunctions, Rationals, field_from_str
from .places import (
    Place,
    ResidueField,
    place_from_str,
    reduce_at,
    support,
    uniformizer,
    valuation,
    weak_approximate,
)

__all__ = [
    "QQ",
    "FieldElement",
    "RationalFunctions",
    "Rationals",
    "field_from_str",
    "Place",
    "ResidueField",
    "place_from_str",
    "reduce_at",
    "support",
    "uniformizer",
    "valuation",
    "weak_approximate",
]
