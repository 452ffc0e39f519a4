"""Acceptance under the collaborative principle, plus defeat and retraction.

Understanding a contribution and accepting it are different attitudes.
Conversants must surface a detected discrepancy at once, so a next turn
that neither affirms, conflicts, nor questions licenses acceptance as a
default when the dialogue's goals call for it.  Explicit affirmation yields
linguistic-grade acceptance; conflicting content or an annotated rejection
yields none; a redundant utterance spoken with rising intonation blocks the
default until the checker's later turns settle the question.  Defaults can
be defeated later by strictly stronger evidence, and retraction cascades
through everything that depended on the defeated belief.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from .errors import ConflictDetected, DefeatRejected, OrderingViolation, UnknownProposition
from .evidence import Strength, defeats
from .grounding import ActType, Intonation, IRUClass, UtteranceEvent
from .propositions import LIVE, Literal, Proposition, prop_key, retract

if TYPE_CHECKING:  # pragma: no cover
    from .state import DiscourseState

EXPLICIT_REJECTION = "explicit_rejection"
CONTRADICTORY_ASSERTION = "contradictory_assertion"
RISING_IRU = "rising_iru"


@dataclass(frozen=True)
class ConflictEvidence:
    """Evidence that an addressee does not (or may not) accept some content.

    For the two strong kinds the clashing pair is inconsistent under closure
    or the event is annotated as a rejection; a rising redundant check
    carries the questioned proposition as both halves of the pair.
    """

    event_id: str
    pair: tuple[Proposition, Proposition]
    kind: str  # EXPLICIT_REJECTION | CONTRADICTORY_ASSERTION | RISING_IRU
    against: frozenset[str] = frozenset()  # keys of the contested propositions

    @property
    def strength(self) -> Strength:
        return Strength.LINGUISTIC

    def applies_to(self, props) -> bool:
        return any(prop_key(p) in self.against for p in props)


@dataclass
class AcceptanceBelief:
    belief_id: str
    proposition: Proposition
    accepting_agent: str
    strength: Strength  # DEFAULT or LINGUISTIC
    dependencies: set[str] = field(default_factory=set)
    status: str = LIVE
    source_event: str = ""  # utterance whose content is accepted
    trigger_event: str = ""  # next-turn event that licensed the acceptance


@dataclass
class SupportLink:
    """A belief put forward as a reason to adopt a goal or intention."""

    link_id: str
    belief: Proposition
    goal: Proposition
    dependencies: set[str] = field(default_factory=set)
    status: str = LIVE
    strength: Strength = Strength.LINGUISTIC


@dataclass(frozen=True)
class PendingAcceptance:
    """An acceptance question left open (e.g. blocked by a rising check);
    re-evaluated at each subsequent turn by the would-be accepter."""

    source_event: str
    propositions: tuple[Proposition, ...]
    agent: str


@dataclass(frozen=True)
class AcceptanceOutcome:
    kind: str  # "accepted" | "blocked" | "rejected"
    proposition: Proposition
    agent: str
    source_event: str
    trigger_event: str
    strength: Optional[Strength] = None
    detail: str = ""

    ACCEPTED = "accepted"
    BLOCKED = "blocked"
    REJECTED = "rejected"


@dataclass(frozen=True)
class RetractionReport:
    target: str
    evidence_kind: str
    defeated: tuple[str, ...]


def detect_conflict(state: "DiscourseState", event: UtteranceEvent) -> Optional[ConflictEvidence]:
    """Does this event evidence non-acceptance of live content?

    Annotation first: a ``rejects`` link is explicit rejection regardless of
    content.  Otherwise the event's propositions are asserted into a scratch
    copy of the context and chained to fixpoint; any clash is contradictory
    assertion evidence against the previously live half of the pair.
    """
    if event.rejects is not None:
        target = state.events.get(event.rejects)
        if target is None:
            raise OrderingViolation(f"{event.utterance_id}: rejects unknown event {event.rejects}")
        props = target.realizes
        pair = (props[0], props[0]) if props else (Literal("nothing"), Literal("nothing"))
        return ConflictEvidence(event.utterance_id, pair, EXPLICIT_REJECTION,
                                frozenset(prop_key(p) for p in props))
    if not event.realizes:
        return None
    for p in event.realizes:
        if isinstance(p, Literal):
            contrary = state.context.lookup(p.negated())
            if contrary is not None:
                return ConflictEvidence(event.utterance_id, (p, contrary.proposition),
                                        CONTRADICTORY_ASSERTION,
                                        frozenset([prop_key(contrary.proposition)]))
    trial = state.context.clone()
    try:
        for p in event.realizes:
            trial.assert_prop(p, Strength.LINGUISTIC, event.utterance_id)
        trial.closure()
    except ConflictDetected as clash:
        # the contested side is whatever half of a clashing pair is live in
        # the real (pre-event) context; the other half came with the event
        against = set()
        pair = clash.clashes[0]
        for a, b in clash.clashes:
            for live, came in ((a, b), (b, a)):
                if state.context.lookup(live) is not None:
                    against.add(prop_key(live))
                    pair = (came, live)
        return ConflictEvidence(event.utterance_id, pair,
                                CONTRADICTORY_ASSERTION, frozenset(against))
    return None


def evaluate_acceptance(state: "DiscourseState", prev_event: UtteranceEvent,
                        next_event: UtteranceEvent, *, iru_class: IRUClass = IRUClass.NONE,
                        conflict: Optional[ConflictEvidence] = None) -> list[AcceptanceOutcome]:
    """Decide the addressee's stance toward the immediately previous turn.

    In order: explicit affirmation accepts at linguistic strength; conflict
    evidence against the content rejects; a redundant check with rising
    intonation blocks (the question goes to the pending list); otherwise a
    goal-marked dialogue licenses default acceptance of assertions.  Rising
    intonation on any other next turn defers the default without blocking
    visibly.
    """
    if next_event.speaker != prev_event.addressee:
        raise OrderingViolation(
            f"{next_event.utterance_id} does not answer {prev_event.utterance_id}")
    if next_event.interrupted:
        return []
    props = prev_event.realizes
    if not props:
        return []
    trigger = next_event.utterance_id
    if next_event.act is ActType.AFFIRMATION:
        return [_accept(state, p, next_event.speaker, Strength.LINGUISTIC,
                        prev_event.utterance_id, trigger) for p in props]
    if conflict is not None and conflict.applies_to(props):
        return [AcceptanceOutcome(AcceptanceOutcome.REJECTED, p, next_event.speaker,
                                  prev_event.utterance_id, trigger, detail=conflict.kind)
                for p in props]
    if iru_class is not IRUClass.NONE and next_event.intonation is Intonation.RISING:
        state.pending.append(PendingAcceptance(prev_event.utterance_id, props,
                                               next_event.speaker))
        return [AcceptanceOutcome(AcceptanceOutcome.BLOCKED, p, next_event.speaker,
                                  prev_event.utterance_id, trigger, detail="rising")
                for p in props]
    if next_event.intonation is Intonation.RISING:
        if state.require_acceptance and prev_event.act is ActType.ASSERT:
            state.pending.append(PendingAcceptance(prev_event.utterance_id, props,
                                                   next_event.speaker))
        return []
    if state.require_acceptance and prev_event.act is ActType.ASSERT:
        return [_accept(state, p, next_event.speaker, Strength.DEFAULT,
                        prev_event.utterance_id, trigger) for p in props]
    return []


def reevaluate_pending(state: "DiscourseState", event: UtteranceEvent, *,
                       conflict: Optional[ConflictEvidence] = None) -> list[AcceptanceOutcome]:
    """Retry acceptance questions the current speaker left open earlier."""
    if event.interrupted:
        return []
    outcomes: list[AcceptanceOutcome] = []
    remaining: list[PendingAcceptance] = []
    for item in state.pending:
        if item.agent != event.speaker:
            remaining.append(item)
            continue
        if conflict is not None and conflict.applies_to(item.propositions):
            outcomes.extend(
                AcceptanceOutcome(AcceptanceOutcome.REJECTED, p, item.agent,
                                  item.source_event, event.utterance_id,
                                  detail=conflict.kind)
                for p in item.propositions)
            continue
        if event.intonation is Intonation.RISING:
            remaining.append(item)
            continue
        source = state.events[item.source_event]
        if state.require_acceptance and source.act is ActType.ASSERT:
            outcomes.extend(
                _accept(state, p, item.agent, Strength.DEFAULT,
                        item.source_event, event.utterance_id)
                for p in item.propositions)
        # either way the question is settled or dropped
    state.pending = remaining
    return outcomes


def _accept(state: "DiscourseState", p: Proposition, agent: str, strength: Strength,
            source_event: str, trigger: str) -> AcceptanceOutcome:
    belief = state.find_acceptance(p, agent)
    deps = {trigger}
    entry = state.context.lookup(p)
    if entry is not None:
        deps.add(entry.entry_id)
    if belief is None:
        belief = AcceptanceBelief(
            belief_id=state.next_belief_id(),
            proposition=p,
            accepting_agent=agent,
            strength=strength,
            dependencies=deps,
            source_event=source_event,
            trigger_event=trigger,
        )
        state.acceptance_beliefs[belief.belief_id] = belief
        state.nodes[belief.belief_id] = belief
    else:
        belief.strength = max(belief.strength, strength)
        belief.dependencies |= deps
    return AcceptanceOutcome(AcceptanceOutcome.ACCEPTED, p, agent, source_event,
                             trigger, strength=belief.strength)


def defeat(state: "DiscourseState", target_id: str, by: ConflictEvidence) -> RetractionReport:
    """Defeat a belief with strictly stronger contrary evidence.

    The target flips to defeated, as does every live node whose dependency
    closure reaches it.  Strengths are untouched; only status changes.
    """
    node = state.nodes.get(target_id)
    if node is None:
        raise UnknownProposition(f"no belief or entry {target_id!r}")
    if not defeats(by.strength, node.strength):
        raise DefeatRejected(
            f"{by.strength} evidence cannot defeat a {node.strength} belief")
    defeated = retract(state.nodes, target_id)
    state.sync_context_after_defeat(defeated)
    report = RetractionReport(target_id, by.kind, tuple(defeated))
    state.retractions.append(report)
    return report


def record_support(state: "DiscourseState", belief: Proposition,
                   goal: Proposition) -> SupportLink:
    """Link a belief to the goal it supports; idempotent per endpoint pair.

    Both endpoints must already be in the discourse state; every live
    acceptance belief for the goal gains the link as a dependency."""
    belief_entry = state.context.lookup(belief)
    goal_entry = state.context.lookup(goal)
    if belief_entry is None:
        raise UnknownProposition(f"support source {belief} not in state")
    if goal_entry is None:
        raise UnknownProposition(f"support target {goal} not in state")
    for link in state.support_links.values():
        if (prop_key(link.belief), prop_key(link.goal)) == (prop_key(belief), prop_key(goal)):
            return link
    link = SupportLink(
        link_id=state.next_support_id(),
        belief=belief,
        goal=goal,
        dependencies={belief_entry.entry_id, goal_entry.entry_id},
    )
    state.support_links[link.link_id] = link
    state.nodes[link.link_id] = link
    goal_key = prop_key(goal)
    for acc in state.acceptance_beliefs.values():
        if acc.status == LIVE and prop_key(acc.proposition) == goal_key:
            acc.dependencies.add(link.link_id)
    return link
