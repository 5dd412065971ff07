"""Closed vocabularies used throughout lingforge.

Every enum renders as its plain string value so reports, CSV headers and JSON
artifacts stay readable without extra mapping.

Example:
    >>> from lingforge.models.enums import UposTag, Label
    >>> UposTag.from_name("noun")
    <UposTag.NOUN: 'NOUN'>
    >>> str(Label.DEMENTIA)
    'dementia'
"""

from __future__ import annotations

from enum import Enum

from lingforge.errors import ConfigError, UnknownTagName


class Label(Enum):
    """Diagnosis group of a transcript.

    The integer code used by the classifiers is exposed through
    :attr:`code`: control is the negative class, dementia the positive one.
    """

    CONTROL = "control"
    DEMENTIA = "dementia"

    def __str__(self) -> str:
        return self.value

    @property
    def code(self) -> int:
        """Binary class code (0 = control, 1 = dementia)."""
        return 1 if self is Label.DEMENTIA else 0

    @classmethod
    def from_code(cls, code: int) -> Label:
        """Inverse of :attr:`code`."""
        if code not in (0, 1):
            raise ValueError(f"Invalid label code: {code}. Must be 0 (control) or 1 (dementia).")
        return cls.DEMENTIA if code == 1 else cls.CONTROL

    @classmethod
    def from_name(cls, name: str) -> Label:
        """Parse a label name case-insensitively."""
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(
                f"Invalid label: '{name}'. Must be 'control' or 'dementia'."
            ) from None


class TokenKind(Enum):
    """Kind of a cleaned transcript token."""

    WORD = "word"
    FILLER = "filler"
    FRAGMENT = "fragment"
    TERMINATOR = "terminator"
    PLACEHOLDER = "placeholder"

    def __str__(self) -> str:
        return self.value


class Terminator(Enum):
    """Category of the sentence-final mark closing an utterance."""

    PERIOD = "."
    QUESTION = "?"
    EXCLAMATION = "!"
    TRAILING_OFF = "+..."
    INTERRUPTION = "+/."
    SELF_INTERRUPTION = "+//."
    OTHER = "other"
    NONE = "none"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_mark(cls, mark: str | None) -> Terminator:
        """Classify a terminator surface. Unlisted CHAT marks map to OTHER."""
        if mark is None:
            return cls.NONE
        for member in cls:
            if member.value == mark:
                return member
        return cls.OTHER


class UposTag(Enum):
    """The 17 universal part-of-speech tags.

    Member order is the canonical column order of POS proportion features.
    """

    ADJ = "ADJ"
    ADP = "ADP"
    ADV = "ADV"
    AUX = "AUX"
    CCONJ = "CCONJ"
    DET = "DET"
    INTJ = "INTJ"
    NOUN = "NOUN"
    NUM = "NUM"
    PART = "PART"
    PRON = "PRON"
    PROPN = "PROPN"
    PUNCT = "PUNCT"
    SCONJ = "SCONJ"
    VERB = "VERB"
    SYM = "SYM"
    X = "X"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> UposTag:
        """Look up a tag by name, case-insensitively.

        Raises:
            UnknownTagName: If the name is not one of the 17 tags.
        """
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise UnknownTagName(
                f"Unknown tag name: '{name}'. Valid tags: {[t.value for t in cls]}"
            ) from None


CONTENT_TAGS: frozenset[UposTag] = frozenset(
    {UposTag.NOUN, UposTag.PROPN, UposTag.VERB, UposTag.ADJ, UposTag.ADV}
)
"""Tags whose tokens count as content words."""


class Representation(Enum):
    """Feature representation of a transcript."""

    RAW = "raw"
    POS_ENHANCED = "pos_enhanced"
    POS_ONLY = "pos_only"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> Representation:
        """Parse a representation name (``raw``, ``pos_enhanced``, ``pos_only``).

        Hyphens and case are tolerated (``POS-only`` works).

        Raises:
            ConfigError: If the name is unknown.
        """
        key = name.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(
                f"Unknown representation: '{name}'. Valid options: {[r.value for r in cls]}"
            ) from None


class ModelKind(Enum):
    """Classifier family."""

    LOGISTIC = "lr"
    FOREST = "rf"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> ModelKind:
        key = name.strip().lower()
        aliases = {"logistic": "lr", "forest": "rf", "random_forest": "rf"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ConfigError(
                f"Unknown model: '{name}'. Valid options: {[m.value for m in cls]}"
            ) from None


class Protocol(Enum):
    """Evaluation protocol."""

    TRANSCRIPT_SPLIT = "transcript_split"
    SUBJECT_CV = "subject_cv"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> Protocol:
        key = name.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(
                f"Unknown protocol: '{name}'. Valid options: {[p.value for p in cls]}"
            ) from None


class SplitKind(Enum):
    """How a :class:`~lingforge.models.results.SplitPlan` was produced."""

    TRANSCRIPT_STRATIFIED = "transcript_stratified"
    SUBJECT_GROUPED = "subject_grouped"

    def __str__(self) -> str:
        return self.value


class StatsLevel(Enum):
    """Unit of observation for the association table."""

    TRANSCRIPT = "transcript"
    SUBJECT = "subject"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> StatsLevel:
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ConfigError(
                f"Unknown stats level: '{name}'. Valid options: {[s.value for s in cls]}"
            ) from None


class EffectMagnitude(Enum):
    """Conventional magnitude band of an absolute Cliff's delta.

    Thresholds:
        - NEGLIGIBLE: |d| < 0.147
        - SMALL: |d| < 0.33
        - MEDIUM: |d| < 0.474
        - LARGE: otherwise
    """

    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def from_delta(cls, delta: float) -> EffectMagnitude:
        magnitude = abs(delta)
        if magnitude < 0.147:
            return cls.NEGLIGIBLE
        elif magnitude < 0.33:
            return cls.SMALL
        elif magnitude < 0.474:
            return cls.MEDIUM
        return cls.LARGE
