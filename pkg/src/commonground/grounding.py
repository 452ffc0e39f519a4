"""Per-utterance assumption records and the evidence-upgrade rules.

When A says u to B, the inference that B understood u as p rests on four
assumptions (copresence, attention, hearing, and that B takes u to realize
p), optionally plus a license assumption when u is meant to sanction a
further inference.  All start as bare hypotheses.  The addressee's next
move upgrades them: any next utterance lifts copresence to linguistic and
the rest to default, while redundant follow-ups (prompts, repeats,
paraphrases, explicit inferences, implicature reinforcements) lift their
class-specific assumption set all the way to linguistic.  Understanding
strength is the weakest link across the record.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional

from .errors import DanglingAntecedent, DuplicateUtterance, UnknownProposition
from .evidence import Strength, min_strength
from .propositions import Literal, Proposition, RedundancyVerdict, prop_key

if TYPE_CHECKING:  # pragma: no cover
    from .state import DiscourseState

COPRESENT = "copresent"
ATTEND = "attend"
HEAR = "hear"
REALIZE = "realize"
LICENSE = "license"

BASE_ASSUMPTIONS = (COPRESENT, ATTEND, HEAR, REALIZE)
ASSUMPTION_ORDER = (COPRESENT, ATTEND, HEAR, REALIZE, LICENSE)


class ActType(Enum):
    ASSERT = "assert"
    QUESTION = "question"
    PROMPT = "prompt"
    AFFIRMATION = "affirmation"
    OTHER = "other"


class Intonation(Enum):
    RISING = "rising"
    FALLING = "falling"
    UNMARKED = "unmarked"


class IRUClass(Enum):
    PROMPT = "prompt"
    REPEAT = "repeat"
    PARAPHRASE = "paraphrase"
    EXPLICIT_INFERENCE = "explicit_inference"
    IMPLICATURE_REINFORCEMENT = "implicature_reinforcement"
    NONE = "none"


#: Assumptions each redundant-utterance class upgrades to linguistic.
UPGRADE_TABLE: dict[IRUClass, tuple[str, ...]] = {
    IRUClass.PROMPT: (ATTEND,),
    IRUClass.REPEAT: (ATTEND, HEAR),
    IRUClass.PARAPHRASE: (ATTEND, HEAR, REALIZE),
    IRUClass.EXPLICIT_INFERENCE: (ATTEND, HEAR, REALIZE, LICENSE),
    IRUClass.IMPLICATURE_REINFORCEMENT: (ATTEND, HEAR, REALIZE, LICENSE),
}


@dataclass(frozen=True)
class Participant:
    id: str


@dataclass(frozen=True)
class UtteranceEvent:
    """One ``say(speaker, addressee, utterance, propositions)`` act."""

    utterance_id: str
    turn_index: int
    speaker: str
    addressee: str
    text: str
    act: ActType = ActType.ASSERT
    intonation: Intonation = Intonation.UNMARKED
    realizes: tuple[Proposition, ...] = ()
    antecedent_ids: tuple[str, ...] = ()
    implicates: Optional[tuple[Proposition, Proposition]] = None
    supports: Optional[tuple[Proposition, Proposition]] = None
    interrupted: bool = False
    rejects: Optional[str] = None

    def __post_init__(self):
        if self.speaker == self.addressee:
            raise ValueError(f"{self.utterance_id}: speaker and addressee coincide")
        if self.act is ActType.PROMPT and self.realizes:
            raise ValueError(f"{self.utterance_id}: a prompt realizes no propositions")
        if self.turn_index < 0:
            raise ValueError(f"{self.utterance_id}: negative turn index")

    @property
    def tokens(self) -> tuple[str, ...]:
        return normalize_tokens(self.text)


def normalize_tokens(text: str) -> tuple[str, ...]:
    """Lowercase, strip punctuation, collapse whitespace."""
    return tuple(re.findall(r"[a-z0-9']+", text.lower()))


def _contiguous(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    if not needle or len(needle) > len(haystack):
        return False
    return any(haystack[i:i + len(needle)] == needle
               for i in range(len(haystack) - len(needle) + 1))


def tokens_match_repeat(a: tuple[str, ...], b: tuple[str, ...]) -> bool:
    """Repeat criterion: one token sequence contiguously contains the other."""
    return _contiguous(a, b) or _contiguous(b, a)


@dataclass
class LicenseLink:
    """Assumption that one proposition sanctions inferring another.

    ``origin`` records where the link came from: "inference" when forward
    chaining derived the conclusion, "implicature" when a transcript
    annotation supplied it.  Only implicature-origin links feed the
    implicature-reinforcement classification.
    """

    premise: Proposition
    conclusion: Proposition
    strength: Strength
    origin: str  # "inference" | "implicature"
    owner: str  # utterance whose understanding carries this assumption

    ORIGIN_INFERENCE = "inference"
    ORIGIN_IMPLICATURE = "implicature"

    @property
    def key(self) -> tuple[str, str]:
        return (prop_key(self.premise), prop_key(self.conclusion))


@dataclass
class AssumptionRecord:
    """Evidence strengths for the assumptions behind one utterance's uptake.

    Strengths only ever rise.  The license slot appears when the utterance
    carries an intended inference (annotation or derivation)."""

    utterance_id: str
    speaker: str
    addressee: str
    strengths: dict[str, Strength]
    interrupted: bool = False
    any_next_applied: bool = False
    license_keys: set[tuple[str, str]] = field(default_factory=set)

    @classmethod
    def fresh(cls, event: UtteranceEvent) -> "AssumptionRecord":
        strengths = {name: Strength.HYPOTHESIS for name in BASE_ASSUMPTIONS}
        if event.implicates is not None:
            strengths[LICENSE] = Strength.HYPOTHESIS
        return cls(
            utterance_id=event.utterance_id,
            speaker=event.speaker,
            addressee=event.addressee,
            strengths=strengths,
            interrupted=event.interrupted,
        )

    def raise_to(self, name: str, strength: Strength) -> None:
        current = self.strengths.get(name)
        if current is None or strength > current:
            self.strengths[name] = strength


@dataclass(frozen=True)
class UnderstandingBelief:
    utterance_id: str
    proposition: Proposition
    strength: Strength


def open_record(state: "DiscourseState", event: UtteranceEvent) -> AssumptionRecord:
    """Create the assumption record for a new utterance, all at hypothesis."""
    if event.utterance_id in state.records:
        raise DuplicateUtterance(event.utterance_id)
    record = AssumptionRecord.fresh(event)
    state.records[event.utterance_id] = record
    return record


def understanding_strength(record: AssumptionRecord) -> Strength:
    """Weakest link over every assumption currently in the record."""
    return min_strength(record.strengths.values())


def understanding_beliefs(state: "DiscourseState", utterance_id: str) -> list[UnderstandingBelief]:
    record = state.records[utterance_id]
    event = state.events[utterance_id]
    strength = understanding_strength(record)
    return [UnderstandingBelief(utterance_id, p, strength) for p in event.realizes]


def apply_iru_upgrade(record: AssumptionRecord, cls: IRUClass) -> AssumptionRecord:
    """Raise exactly the upgrade table's assumption set for ``cls`` to linguistic.

    Classes that address the license assumption add the slot if absent: the
    redundant utterance is itself the evidence that an inference was
    intended.  Nothing is ever lowered."""
    if cls is IRUClass.NONE:
        raise ValueError("no upgrade for an unclassified utterance")
    for name in UPGRADE_TABLE[cls]:
        record.raise_to(name, Strength.LINGUISTIC)
    return record


def apply_any_next_upgrade(record: AssumptionRecord) -> AssumptionRecord:
    """The addressee spoke again in uninterrupted flow: copresence becomes
    linguistic and every other assumption at least default.  A record whose
    utterance was marked interrupted is left untouched."""
    if record.interrupted:
        return record
    record.raise_to(COPRESENT, Strength.LINGUISTIC)
    for name in list(record.strengths):
        if name != COPRESENT:
            record.raise_to(name, Strength.DEFAULT)
    return record


def classify_iru(event: UtteranceEvent, state: "DiscourseState") -> IRUClass:
    """Classify an utterance against the current discourse state.

    Pure function of (event, state); it inspects but never changes either.
    Precedence on overlap: implicature reinforcement beats explicit
    inference beats repeat beats paraphrase.
    """
    for ant in event.antecedent_ids:
        if ant not in state.events:
            raise DanglingAntecedent(f"{event.utterance_id}: antecedent {ant} unknown")
    if event.act is ActType.PROMPT:
        return IRUClass.PROMPT
    if not event.realizes:
        return IRUClass.NONE
    keys = {prop_key(p) for p in event.realizes}
    for link in state.license_links.values():
        if (link.origin == LicenseLink.ORIGIN_IMPLICATURE
                and link.strength < Strength.LINGUISTIC
                and prop_key(link.conclusion) in keys):
            return IRUClass.IMPLICATURE_REINFORCEMENT
    verdicts = [state.context.is_redundant(p) for p in event.realizes]
    if any(v.kind == RedundancyVerdict.ENTAILED for v in verdicts):
        return IRUClass.EXPLICIT_INFERENCE
    said = [v for v in verdicts if v.kind == RedundancyVerdict.SAID]
    if said:
        candidates = set(event.antecedent_ids)
        for v in said:
            candidates |= v.antecedents
        for ant in sorted(candidates):
            prior = state.events.get(ant)
            if prior is not None and tokens_match_repeat(event.tokens, prior.tokens):
                return IRUClass.REPEAT
        return IRUClass.PARAPHRASE
    return IRUClass.NONE


def record_license_evidence(state: "DiscourseState", link: LicenseLink,
                            strength: Strength) -> LicenseLink:
    """Store ``link`` or strengthen the stored copy to max(old, new).

    The owning record's license slot rises in step, and the premise must
    already be in the context (UnknownProposition otherwise)."""
    if state.context.lookup(link.premise) is None:
        raise UnknownProposition(f"license premise {link.premise} not in context")
    stored = state.license_links.get(link.key)
    if stored is None:
        stored = LicenseLink(link.premise, link.conclusion,
                             max(strength, link.strength), link.origin, link.owner)
        state.license_links[link.key] = stored
    else:
        stored.strength = max(stored.strength, strength)
    owner = state.records.get(stored.owner)
    if owner is not None:
        owner.raise_to(LICENSE, stored.strength)
        owner.license_keys.add(stored.key)
    return stored


def resolved_antecedents(event: UtteranceEvent, state: "DiscourseState",
                         cls: IRUClass) -> tuple[str, ...]:
    """Utterances this redundant event points back at: the annotated links
    plus whatever redundancy detection or a matched license link adds."""
    ids = set(event.antecedent_ids)
    if cls in (IRUClass.REPEAT, IRUClass.PARAPHRASE, IRUClass.EXPLICIT_INFERENCE):
        for p in event.realizes:
            verdict = state.context.is_redundant(p)
            if verdict.redundant:
                ids |= {a for a in verdict.antecedents if a in state.events}
    if cls is IRUClass.IMPLICATURE_REINFORCEMENT:
        keys = {prop_key(p) for p in event.realizes}
        for link in state.license_links.values():
            if (link.origin == LicenseLink.ORIGIN_IMPLICATURE
                    and prop_key(link.conclusion) in keys):
                ids.add(link.owner)
    return tuple(sorted(ids, key=lambda u: state.events[u].turn_index))


# Affirmation phrases recognised when no explicit act annotation is given.
DEFAULT_AFFIRMATIONS = ("that's correct", "right", "yup", "absolutely")


def is_affirmation_text(text: str, lexicon=DEFAULT_AFFIRMATIONS) -> bool:
    return normalize_tokens(text) in {normalize_tokens(p) for p in lexicon}
