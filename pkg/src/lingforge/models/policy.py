"""Cleaning policy for CHAT transcripts.

The policy decides what happens to every class of CHAT marker when a main
tier is turned into tokens. Defaults keep disfluencies (fillers, repetitions,
retracings, part-word fragments), remove the interviewer, and strip anything
that is not spoken language.

Marker disposition under the default policy:

    ===============================  ===========================  ==================
    Marker                           Example                      Default
    ===============================  ===========================  ==================
    filler                           ``&-uh``, ``&um``            kept (filler)
    fragment / nonword               ``&+fr``, ``&~gaga``         kept (fragment)
    repetition scope                 ``<the boy> [/]``            kept, flagged
    retracing scope                  ``the [//] a``               kept, flagged
    unintelligible                   ``xxx``, ``yyy``, ``www``    dropped
    pause                            ``(.)``, ``(1.5)``           counted
    event / interposed word          ``&=laughs``, ``&*INV:hm``   stripped
    bracket codes                    ``[: x]``, ``[% c]``, ``[*]``  stripped
    omitted word                     ``0is``                      stripped
    linkers, commas, bullets         ``+<``, ``,``                stripped
    terminators                      ``.``, ``?``, ``+...``       terminator token
    ===============================  ===========================  ==================

Example:
    >>> from lingforge.models.policy import CleaningPolicy
    >>> CleaningPolicy().keep_fillers
    True
    >>> CleaningPolicy.lexical_only().keep_fillers
    False
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass, fields
from typing import Any

_SPEAKER_CODE = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class CleaningPolicy:
    """Per-marker-class cleaning toggles.

    Attributes:
        keep_fillers: Emit ``&-uh``-style fillers as filler tokens.
        keep_repetitions: Keep material inside ``[/]`` scopes.
        keep_retracings: Keep material inside ``[//]`` and ``[///]`` scopes.
        keep_fragments: Emit ``&+fr`` part-words as fragment tokens.
        drop_unintelligible: Drop ``xxx``/``yyy``/``www``; when False they
            become placeholder tokens.
        count_pauses: Count pause markers on each utterance.
        target_speaker: Main-tier code of the participant (default ``"PAR"``).
    """

    keep_fillers: bool = True
    keep_repetitions: bool = True
    keep_retracings: bool = True
    keep_fragments: bool = True
    drop_unintelligible: bool = True
    count_pauses: bool = True
    target_speaker: str = "PAR"

    def __post_init__(self) -> None:
        self._validate()

    def _validate(self) -> None:
        """Validate the policy.

        Raises:
            ValueError: If target_speaker is not a bare CHAT speaker code.
        """
        if not _SPEAKER_CODE.match(self.target_speaker):
            raise ValueError(
                f"target_speaker must be a bare speaker code like 'PAR', "
                f"got {self.target_speaker!r}"
            )

    # =========================================================================
    # Factory methods
    # =========================================================================

    @classmethod
    def default(cls) -> CleaningPolicy:
        """Disfluencies kept, interviewer and non-linguistic markers removed."""
        return cls()

    @classmethod
    def lexical_only(cls) -> CleaningPolicy:
        """Fluent reading: fillers, fragments, repetitions and retracings dropped."""
        return cls(
            keep_fillers=False,
            keep_repetitions=False,
            keep_retracings=False,
            keep_fragments=False,
        )

    @classmethod
    def verbatim(cls) -> CleaningPolicy:
        """Everything spoken is kept, including unintelligible placeholders."""
        return cls(drop_unintelligible=False)

    # =========================================================================
    # Serialization
    # =========================================================================

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CleaningPolicy:
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    def to_description(self) -> str:
        def flag(value: bool) -> str:
            return "kept" if value else "dropped"

        return f"""Cleaning Policy (speaker {self.target_speaker}):
  Fillers: {flag(self.keep_fillers)}
  Fragments: {flag(self.keep_fragments)}
  Repetitions: {flag(self.keep_repetitions)}
  Retracings: {flag(self.keep_retracings)}
  Unintelligible: {flag(not self.drop_unintelligible)}
  Pauses: {"counted" if self.count_pauses else "ignored"}"""
