"""Distributional statistics over a corpus of annotated dialogues.

Counts are a pure fold over per-utterance classification results, so the
order dialogues are processed in cannot change the outcome.  An utterance's
antecedents are the annotated links plus whatever redundancy detection
resolved; "remote" means no antecedent within ``remote_gap`` turns back,
"self" means every antecedent was spoken by the same person.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .grounding import ActType
from .trace import TraceRecord
from .transcript import Transcript

#: Published reference corpus (radio financial-advice call-in show; 171
#: redundant utterances over 24 dialogues and 976 turns).  Documented for
#: comparison in the stats footnote; never recomputed and never asserted.
REFERENCE_CORPUS = {
    "irus": 171,
    "dialogues": 24,
    "turns": 976,
    "remote_pct": 35,
    "multi_antecedent_pct": 32,
    "self_pct": 48,
    "other_pct": 52,
    "rising": 28,
    "affirmation_followed": 50,
}


@dataclass(frozen=True)
class StatsConfig:
    remote_gap: int = 1  # adjacent = some antecedent within this many turns back


@dataclass(frozen=True)
class IRUObservation:
    dialogue_id: str
    event_id: str
    iru_class: str
    antecedents: tuple[str, ...]
    min_gap: Optional[int]  # turns back to the nearest antecedent
    all_self: Optional[bool]
    rising: bool
    affirmation_followed: bool


@dataclass(frozen=True)
class CorpusStats:
    total_irus: int
    total_dialogues: int
    total_turns: int
    with_antecedents: int
    remote_count: int
    multi_antecedent_count: int
    self_antecedent_count: int
    rising_count: int
    affirmation_followed_count: int

    @property
    def remote_fraction(self) -> Optional[float]:
        return self._frac(self.remote_count)

    @property
    def multi_antecedent_fraction(self) -> Optional[float]:
        return self._frac(self.multi_antecedent_count)

    @property
    def self_antecedent_fraction(self) -> Optional[float]:
        return self._frac(self.self_antecedent_count)

    @property
    def other_antecedent_fraction(self) -> Optional[float]:
        if self.with_antecedents == 0:
            return None
        return (self.with_antecedents - self.self_antecedent_count) / self.with_antecedents

    def _frac(self, count: int) -> Optional[float]:
        if self.with_antecedents == 0:
            return None
        return count / self.with_antecedents


def collect_observations(transcript: Transcript,
                         traces: list[TraceRecord]) -> list[IRUObservation]:
    """Extract one observation per classified redundant utterance."""
    events = {e.utterance_id: e for e in transcript.events}
    order = [e.utterance_id for e in transcript.events]
    observations = []
    for i, trace in enumerate(traces):
        if trace.iru_class == "none":
            continue
        event = events[trace.event_id]
        ants = trace.antecedents
        gaps = [event.turn_index - events[a].turn_index for a in ants if a in events]
        min_gap = min(gaps) if gaps else None
        all_self = None
        if ants:
            all_self = all(events[a].speaker == event.speaker for a in ants if a in events)
        next_id = order[i + 1] if i + 1 < len(order) else None
        followed = next_id is not None and events[next_id].act is ActType.AFFIRMATION
        observations.append(IRUObservation(
            dialogue_id=transcript.dialogue_id,
            event_id=trace.event_id,
            iru_class=trace.iru_class,
            antecedents=ants,
            min_gap=min_gap,
            all_self=all_self,
            rising=trace.intonation == "rising",
            affirmation_followed=followed,
        ))
    return observations


def aggregate(observations: list[IRUObservation], total_dialogues: int,
              total_turns: int, config: StatsConfig = StatsConfig()) -> CorpusStats:
    with_ants = [o for o in observations if o.min_gap is not None]
    return CorpusStats(
        total_irus=len(observations),
        total_dialogues=total_dialogues,
        total_turns=total_turns,
        with_antecedents=len(with_ants),
        remote_count=sum(1 for o in with_ants if o.min_gap > config.remote_gap),
        multi_antecedent_count=sum(1 for o in with_ants if len(o.antecedents) > 1),
        self_antecedent_count=sum(1 for o in with_ants if o.all_self),
        rising_count=sum(1 for o in observations if o.rising),
        affirmation_followed_count=sum(1 for o in observations if o.affirmation_followed),
    )


def _cell(count: int, total: int) -> str:
    if total == 0:
        return "n/a"
    return f"{count}/{total} ({100.0 * count / total:.1f}%)"


def render_stats(stats: CorpusStats, fmt: str = "text",
                 config: StatsConfig = StatsConfig()) -> str:
    n = stats.with_antecedents
    rows = [
        ("dialogues", str(stats.total_dialogues)),
        ("turns", str(stats.total_turns)),
        ("redundant utterances", str(stats.total_irus)),
        ("with antecedents", str(n)),
        ("remote", _cell(stats.remote_count, n)),
        ("multiple antecedents", _cell(stats.multi_antecedent_count, n)),
        ("self antecedent", _cell(stats.self_antecedent_count, n)),
        ("other antecedent", _cell(n - stats.self_antecedent_count, n)),
        ("rising intonation", str(stats.rising_count)),
        ("followed by affirmation", str(stats.affirmation_followed_count)),
    ]
    if fmt == "tabular":
        return "\n".join(f"{k}\t{v}" for k, v in rows) + "\n"
    width = max(len(k) for k, _ in rows)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    r = REFERENCE_CORPUS
    lines.append("")
    lines.append(f"note: reference corpus ({r['irus']} redundant utterances, "
                 f"{r['dialogues']} dialogues, {r['turns']} turns) reports "
                 f"remote {r['remote_pct']}%, multiple antecedents "
                 f"{r['multi_antecedent_pct']}%, self {r['self_pct']}% / other "
                 f"{r['other_pct']}%, rising {r['rising']}, affirmation-followed "
                 f"{r['affirmation_followed']}; documentation only, never recomputed.")
    return "\n".join(lines) + "\n"


def render_classification(observations: list[IRUObservation], fmt: str = "text") -> str:
    header = ("dialogue", "event", "class", "antecedents", "gap", "source", "intonation")
    rows = []
    for o in observations:
        rows.append((
            o.dialogue_id,
            o.event_id,
            o.iru_class,
            ",".join(o.antecedents) if o.antecedents else "-",
            str(o.min_gap) if o.min_gap is not None else "-",
            ("self" if o.all_self else "other") if o.all_self is not None else "-",
            "rising" if o.rising else "level",
        ))
    if fmt == "tabular":
        return "\n".join("\t".join(r) for r in (header, *rows)) + "\n"
    widths = [max(len(r[i]) for r in (header, *rows)) for i in range(len(header))]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
           for r in (header, *rows)]
    return "\n".join(out) + "\n"
