"""The ten moral-foundation dimensions and their canonical ordering.

Each of the five foundations has a virtue pole and a vice pole, and every
report, feature vector, and label vector in this package is ordered by the
same canonical sequence of the ten resulting dimensions:

    Care, Harm, Fairness, Cheating, Loyalty, Betrayal,
    Authority, Subversion, Purity, Degradation

The vice display name is fixed by the foundation (Care -> Harm, Fairness ->
Cheating, Loyalty -> Betrayal, Authority -> Subversion, Purity ->
Degradation).
"""

from enum import Enum


class Foundation(Enum):
    CARE = "care"
    FAIRNESS = "fairness"
    LOYALTY = "loyalty"
    AUTHORITY = "authority"
    PURITY = "purity"


class Polarity(Enum):
    VIRTUE = "virtue"
    VICE = "vice"


_VICE_NAMES = {
    Foundation.CARE: "Harm",
    Foundation.FAIRNESS: "Cheating",
    Foundation.LOYALTY: "Betrayal",
    Foundation.AUTHORITY: "Subversion",
    Foundation.PURITY: "Degradation",
}


class Dimension(Enum):
    """One (foundation, polarity) pair; exactly ten values exist."""

    CARE = (Foundation.CARE, Polarity.VIRTUE)
    HARM = (Foundation.CARE, Polarity.VICE)
    FAIRNESS = (Foundation.FAIRNESS, Polarity.VIRTUE)
    CHEATING = (Foundation.FAIRNESS, Polarity.VICE)
    LOYALTY = (Foundation.LOYALTY, Polarity.VIRTUE)
    BETRAYAL = (Foundation.LOYALTY, Polarity.VICE)
    AUTHORITY = (Foundation.AUTHORITY, Polarity.VIRTUE)
    SUBVERSION = (Foundation.AUTHORITY, Polarity.VICE)
    PURITY = (Foundation.PURITY, Polarity.VIRTUE)
    DEGRADATION = (Foundation.PURITY, Polarity.VICE)

    @property
    def foundation(self):
        return self.value[0]

    @property
    def polarity(self):
        return self.value[1]

    @property
    def display_name(self):
        """Column-header name: the foundation for virtues, e.g. Harm for vices."""
        if self.polarity is Polarity.VIRTUE:
            return self.foundation.value.capitalize()
        return _VICE_NAMES[self.foundation]

    @property
    def slug(self):
        """Lowercase display name, used in file columns and model filenames."""
        return self.display_name.lower()

    def __repr__(self):
        return f"Dimension.{self.name}"


# Canonical order shared by every table, vector, and report.
DIMENSIONS = (
    Dimension.CARE,
    Dimension.HARM,
    Dimension.FAIRNESS,
    Dimension.CHEATING,
    Dimension.LOYALTY,
    Dimension.BETRAYAL,
    Dimension.AUTHORITY,
    Dimension.SUBVERSION,
    Dimension.PURITY,
    Dimension.DEGRADATION,
)

DIMENSION_INDEX = {dim: i for i, dim in enumerate(DIMENSIONS)}

_BY_SLUG = {dim.slug: dim for dim in DIMENSIONS}
_BY_PAIR = {(dim.foundation, dim.polarity): dim for dim in DIMENSIONS}


def dimension_from_slug(slug):
    return _BY_SLUG[slug.strip().lower()]


def dimension_of(foundation, polarity):
    return _BY_PAIR[(foundation, polarity)]


def foundation_from_name(name):
    """Case-insensitive lookup; raises KeyError for unknown names."""
    return Foundation(name.strip().lower())
