"""Replays a dialogue event by event, updating the discourse state.

Per-event order of operations (it matters, and it is fixed):

1. validate ordering, open the event's own assumption record (hypothesis),
2. apply the any-next-utterance upgrade to every earlier record addressed
   to the current speaker (copresence to linguistic, the rest to at least
   default) -- before the event's own classification,
3. classify the event against the pre-event context,
4. detect conflict evidence (annotation first, then closure on a scratch
   context),
5. upgrade the antecedent records named by the classification, and lift the
   matched license links to linguistic,
6. settle acceptance: pending questions first, then the adjacent pair,
7. on conflict, defeat whatever weaker beliefs the evidence defeats;
   contested content never enters the common ground,
8. otherwise assert the event's propositions (linguistic), chain the
   closure, and record inference licenses for newly derived content,
9. register annotated implicature and support links.
"""

from __future__ import annotations

from typing import Optional

from . import acceptance as acc
from . import grounding as grd
from .errors import DanglingAntecedent, OrderingViolation
from .evidence import Strength
from .grounding import ActType, AssumptionRecord, IRUClass, LicenseLink, UtteranceEvent
from .propositions import LIVE, Literal, prop_key
from .state import DiscourseState, EngineConfig
from .trace import TraceRecord, prop_text, snapshot_record, write_trace


class DialogueEngine:
    """Sequential engine for one dialogue; sendable, never shared mid-run."""

    def __init__(self, state: DiscourseState):
        self.state = state
        self.traces: list[TraceRecord] = []

    @classmethod
    def for_transcript(cls, transcript, config: Optional[EngineConfig] = None) -> "DialogueEngine":
        state = DiscourseState(
            dialogue_id=transcript.dialogue_id,
            participants=transcript.participants,
            require_acceptance=transcript.require_acceptance,
            config=config,
        )
        return cls(state)

    def replay(self, transcript) -> list[TraceRecord]:
        for event in transcript.events:
            self.process(event)
        return self.traces

    # ------------------------------------------------------------------

    def process(self, event: UtteranceEvent) -> TraceRecord:
        state = self.state
        self._validate(event)
        record = grd.open_record(state, event)
        state.events[event.utterance_id] = event
        state.order.append(event.utterance_id)

        touched: dict[str, AssumptionRecord] = {}

        # any-next-utterance upgrade, before this event's own classification
        if not event.interrupted:
            for uid in state.order[:-1]:
                prior = state.records[uid]
                if (prior.addressee == event.speaker and not prior.any_next_applied
                        and not prior.interrupted):
                    grd.apply_any_next_upgrade(prior)
                    prior.any_next_applied = True
                    for key in prior.license_keys:
                        link = state.license_links[key]
                        link.strength = max(link.strength, Strength.DEFAULT)
                    touched[uid] = prior

        cls = grd.classify_iru(event, state)
        antecedents = grd.resolved_antecedents(event, state, cls)
        redundancy = {prop_key(p): state.context.is_redundant(p) for p in event.realizes}
        conflict = acc.detect_conflict(state, event)
        if conflict is not None:
            state.conflicts.append(conflict)

        license_lines: list[tuple[str, str, Strength, str]] = []
        if cls is not IRUClass.NONE:
            for target in self._upgrade_targets(event, cls, antecedents):
                grd.apply_iru_upgrade(target, cls)
                touched[target.utterance_id] = target
            if cls in (IRUClass.EXPLICIT_INFERENCE, IRUClass.IMPLICATURE_REINFORCEMENT):
                keys = {prop_key(p) for p in event.realizes}
                for link in list(state.license_links.values()):
                    if prop_key(link.conclusion) in keys:
                        grd.record_license_evidence(state, link, Strength.LINGUISTIC)
                        license_lines.append((prop_text(link.premise), prop_text(link.conclusion),
                                              link.strength, link.origin))
                        owner = state.records.get(link.owner)
                        if owner is not None:
                            touched[link.owner] = owner

        outcomes = acc.reevaluate_pending(state, event, conflict=conflict)
        prev = state.events[state.order[-2]] if len(state.order) > 1 else None
        if (prev is not None and prev.addressee == event.speaker
                and not event.interrupted):
            outcomes += acc.evaluate_acceptance(state, prev, event,
                                                iru_class=cls, conflict=conflict)

        retraction_lines: list[tuple[str, ...]] = []
        contested = False
        if conflict is not None:
            contested = self._handle_defeats(conflict, retraction_lines)

        asserted_lines: list[tuple[str, Strength, str]] = []
        derived_lines: list[tuple[str, Strength, tuple[str, ...]]] = []
        support_lines: list[tuple[str, str]] = []
        if not contested:
            derived_before = {eid for eid, e in state.context.entries.items() if e.derived}
            for p in event.realizes:
                verdict = redundancy[prop_key(p)]
                entry = state.context.assert_prop(p, Strength.LINGUISTIC, event.utterance_id)
                state.register_entry(entry)
                note = ""
                if verdict.redundant:
                    note = f"redundant: {verdict.kind} " + ", ".join(sorted(verdict.antecedents))
                asserted_lines.append((prop_text(p), entry.strength, note))
            if event.realizes:
                state.context.closure()
            for eid, entry in state.context.entries.items():
                if entry.derived and eid not in derived_before and entry.status == LIVE:
                    state.register_entry(entry)
                    roots = sorted(state.context.asserted_roots(entry))
                    derived_lines.append((prop_text(entry.proposition), entry.strength,
                                          tuple(roots)))
                    link = self._license_for_derivation(event, entry, roots)
                    if link is not None:
                        license_lines.append((prop_text(link.premise), prop_text(link.conclusion),
                                              link.strength, link.origin))
                        touched[event.utterance_id] = record
            if event.implicates is not None:
                premise, conclusion = event.implicates
                link = grd.record_license_evidence(
                    state,
                    LicenseLink(premise, conclusion, Strength.HYPOTHESIS,
                                LicenseLink.ORIGIN_IMPLICATURE, event.utterance_id),
                    Strength.HYPOTHESIS)
                license_lines.append((prop_text(link.premise), prop_text(link.conclusion),
                                      link.strength, link.origin))
            if event.supports is not None:
                belief, goal = event.supports
                acc.record_support(state, belief, goal)
                support_lines.append((prop_text(belief), prop_text(goal)))

        trace = TraceRecord(
            event_id=event.utterance_id,
            turn_index=event.turn_index,
            speaker=event.speaker,
            addressee=event.addressee,
            act=event.act.value,
            intonation=event.intonation.value,
            iru_class=cls.value,
            antecedents=antecedents,
            records=tuple(
                snapshot_record(r, state.events[uid].turn_index, grd.understanding_strength(r))
                for uid, r in sorted(touched.items(),
                                     key=lambda kv: state.events[kv[0]].turn_index)),
            licenses=tuple(license_lines),
            conflicts=((conflict.kind, prop_text(conflict.pair[0]), prop_text(conflict.pair[1])),)
            if conflict is not None else (),
            acceptances=tuple(
                (o.kind, prop_text(o.proposition), o.agent,
                 str(o.strength) if o.strength is not None else o.detail,
                 o.trigger_event)
                for o in outcomes),
            asserted=tuple(asserted_lines),
            derived=tuple(derived_lines),
            supports=tuple(support_lines),
            retractions=tuple(retraction_lines),
        )
        self.traces.append(trace)
        return trace

    # ------------------------------------------------------------------

    def _validate(self, event: UtteranceEvent) -> None:
        state = self.state
        ids = state.participant_ids()
        if event.speaker not in ids or event.addressee not in ids:
            raise OrderingViolation(
                f"{event.utterance_id}: unknown participant {event.speaker}/{event.addressee}")
        if state.order:
            last = state.events[state.order[-1]]
            if event.turn_index <= last.turn_index:
                raise OrderingViolation(
                    f"{event.utterance_id}: turn {event.turn_index} after {last.turn_index}")
        for ant in event.antecedent_ids:
            if ant not in state.events:
                raise DanglingAntecedent(f"{event.utterance_id}: antecedent {ant} unknown")
        if event.rejects is not None and event.rejects not in state.events:
            raise DanglingAntecedent(f"{event.utterance_id}: rejects unknown {event.rejects}")

    def _upgrade_targets(self, event: UtteranceEvent, cls: IRUClass,
                         antecedents: tuple[str, ...]) -> list[AssumptionRecord]:
        state = self.state
        ids = list(antecedents)
        if cls is IRUClass.PROMPT and not ids:
            for uid in reversed(self.state.order[:-1]):
                if state.records[uid].addressee == event.speaker:
                    ids = [uid]
                    break
        targets = []
        for uid in ids:
            rec = state.records.get(uid)
            if rec is not None and rec.addressee == event.speaker:
                targets.append(rec)
        return targets

    def _handle_defeats(self, conflict: acc.ConflictEvidence,
                        retraction_lines: list) -> bool:
        """Defeat what the evidence can; report whether content stays contested."""
        state = self.state
        for belief in list(state.live_acceptances()):
            if (prop_key(belief.proposition) in conflict.against
                    and belief.strength < conflict.strength):
                report = acc.defeat(state, belief.belief_id, conflict)
                retraction_lines.append(report.defeated)
        entries = [state.context.lookup_key(key) for key in sorted(conflict.against)]
        entries = [e for e in entries if e is not None]
        if not entries:
            return False
        if all(e.strength < conflict.strength for e in entries):
            for e in entries:
                if e.status != LIVE:
                    continue  # already swept up by an earlier cascade
                if e.entry_id in state.nodes:
                    report = acc.defeat(state, e.entry_id, conflict)
                    retraction_lines.append(report.defeated)
                else:
                    retraction_lines.append(tuple(state.context.defeat_entry(e.entry_id)))
            return False
        return True

    def _license_for_derivation(self, event: UtteranceEvent, entry, roots) -> Optional[LicenseLink]:
        """Derived content licenses an inference from this event's contribution."""
        state = self.state
        if event.utterance_id not in roots:
            return None
        premise = None
        for p in event.realizes:
            if isinstance(p, Literal):
                premise = p
                break
        if premise is None and event.realizes:
            premise = event.realizes[0]
        if premise is None:
            return None
        link = LicenseLink(premise, entry.proposition, Strength.INFERENCE,
                           LicenseLink.ORIGIN_INFERENCE, event.utterance_id)
        return grd.record_license_evidence(state, link, Strength.INFERENCE)


def replay_transcript(transcript, config: Optional[EngineConfig] = None):
    """Convenience: run a parsed transcript; returns (engine, trace records)."""
    engine = DialogueEngine.for_transcript(transcript, config)
    traces = engine.replay(transcript)
    return engine, traces


def trace_document(transcript, config: Optional[EngineConfig] = None) -> str:
    _, traces = replay_transcript(transcript, config)
    return write_trace(traces)
