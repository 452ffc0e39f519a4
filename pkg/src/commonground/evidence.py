"""The five-point evidence lattice and the weakest-link combination law.

Beliefs in this model are graded by the source of the evidence supporting
them.  The grades form a total order from easiest to hardest to defeat:

    hypothesis < default < inference < linguistic < physical

A belief resting on several assumptions is only as strong as its weakest
assumption, so strengths combine by MIN and can be replaced (never lowered)
by stronger evidence for the same assumption.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable


class Strength(IntEnum):
    """Ordered evidence grade.  Integer values are ranks, not weights."""

    HYPOTHESIS = 1
    DEFAULT = 2
    INFERENCE = 3
    LINGUISTIC = 4
    PHYSICAL = 5

    @property
    def label(self) -> str:
        return self.name.lower()

    def __str__(self) -> str:  # traces render the lowercase lattice names
        return self.label

    @classmethod
    def from_label(cls, label: str) -> "Strength":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown evidence strength {label!r}") from None


#: ``physical`` is reserved: it completes the lattice but no operation in
#: this package ever produces it (copresence upgrades stop at linguistic).
RESERVED_TOP = Strength.PHYSICAL

#: Derived (never-uttered) content is capped at inference grade.
DERIVED_CAP = Strength.INFERENCE


def min_strength(strengths: Iterable[Strength]) -> Strength:
    """Weakest link: the strength of a belief over its supporting assumptions.

    Raises ValueError on an empty collection; a belief with no supporting
    assumptions is meaningless in this model.
    """
    items = list(strengths)
    if not items:
        raise ValueError("min_strength over no assumptions")
    return min(items)


def defeats(a: Strength, b: Strength) -> bool:
    """True iff evidence of strength ``a`` can defeat a belief held at ``b``."""
    return a > b
