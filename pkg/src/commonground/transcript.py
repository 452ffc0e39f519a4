"""The ``.dlg`` annotated-transcript format: parsing and canonical output.

A document is a sequence of blank-line-separated records of ``key: value``
lines.  The first record is the header (``dialogue``, ``participants``,
optional ``require-acceptance``); every following record is one utterance.

Event keys -- required: ``id``, ``turn``, ``speaker``, ``addressee``,
``text``; optional: ``act`` (assert|question|prompt|affirmation|other),
``intonation`` (rising|falling|unmarked), ``realizes`` (semicolon-separated
propositions), ``antecedents`` (comma-separated earlier ids), ``implicates``
(``p => q``), ``supports`` (``p => q``), ``interrupted`` (true|false),
``rejects`` (earlier id).  Unknown keys are an error: these files are ground
truth for tests, so nothing is silently ignored.

When ``act`` is omitted it is resolved from the text: an utterance matching
the affirmation lexicon is an affirmation, anything that realizes content is
an assertion, the rest are ``other``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadPropositionSyntax, ParseIssue, TranscriptError
from .grounding import (ActType, DEFAULT_AFFIRMATIONS, Intonation, Participant,
                        UtteranceEvent, is_affirmation_text)
from .propositions import Proposition, format_proposition, parse_proposition

HEADER_KEYS = ("dialogue", "participants", "require-acceptance")
EVENT_KEYS = ("id", "turn", "speaker", "addressee", "text", "act", "intonation",
              "realizes", "antecedents", "implicates", "supports", "interrupted",
              "rejects")
REQUIRED_EVENT_KEYS = ("id", "turn", "speaker", "addressee", "text")


@dataclass(frozen=True)
class Transcript:
    dialogue_id: str
    participants: tuple[Participant, Participant]
    require_acceptance: bool
    events: tuple[UtteranceEvent, ...]


def _records(text: str):
    """Split into records of (line_number, key, value) triples."""
    record: list[tuple[int, str, str]] = []
    issues: list[ParseIssue] = []
    records: list[list[tuple[int, str, str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            if record:
                records.append(record)
                record = []
            continue
        key, sep, value = line.partition(":")
        if not sep:
            issues.append(ParseIssue(lineno, "bad-line", f"expected 'key: value', got {line!r}"))
            continue
        record.append((lineno, key.strip(), value.strip()))
    if record:
        records.append(record)
    return records, issues


def _fields(record, allowed, issues):
    fields: dict[str, tuple[int, str]] = {}
    for lineno, key, value in record:
        if key not in allowed:
            issues.append(ParseIssue(lineno, "unknown-field", f"unknown key {key!r}"))
            continue
        if key in fields:
            issues.append(ParseIssue(lineno, "duplicate-field", f"repeated key {key!r}"))
            continue
        fields[key] = (lineno, value)
    return fields


def _parse_prop_list(value, lineno, issues):
    props = []
    for chunk in value.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            props.append(parse_proposition(chunk))
        except BadPropositionSyntax as exc:
            issues.append(ParseIssue(lineno, "bad-proposition", str(exc)))
    return tuple(props)


def _parse_pair(value, lineno, issues, what):
    left, sep, right = value.partition("=>")
    if not sep:
        issues.append(ParseIssue(lineno, "bad-value", f"{what} must look like 'p => q'"))
        return None
    try:
        return (parse_proposition(left), parse_proposition(right))
    except BadPropositionSyntax as exc:
        issues.append(ParseIssue(lineno, "bad-proposition", str(exc)))
        return None


def parse(text: str, affirmations=DEFAULT_AFFIRMATIONS) -> Transcript:
    """Parse a ``.dlg`` document or raise TranscriptError listing every
    problem found, each with its 1-based line number."""
    issues: list[ParseIssue] = []
    if not text.strip():
        raise TranscriptError([ParseIssue(1, "empty-transcript", "document has no records")])
    records, line_issues = _records(text)
    issues.extend(line_issues)
    if not records:
        raise TranscriptError(issues or
                              [ParseIssue(1, "empty-transcript", "document has no records")])

    header = _fields(records[0], HEADER_KEYS, issues)
    header_line = records[0][0][0]
    dialogue_id = header.get("dialogue", (header_line, ""))[1]
    if "dialogue" not in header:
        issues.append(ParseIssue(header_line, "missing-field", "header lacks 'dialogue'"))
    participants: tuple[Participant, ...] = ()
    if "participants" not in header:
        issues.append(ParseIssue(header_line, "missing-field", "header lacks 'participants'"))
    else:
        lineno, value = header["participants"]
        names = [n.strip() for n in value.split(",") if n.strip()]
        if len(names) != 2 or len(set(names)) != 2:
            issues.append(ParseIssue(lineno, "bad-value",
                                     "exactly two distinct participants required"))
        participants = tuple(Participant(n) for n in names)
    require_acceptance = False
    if "require-acceptance" in header:
        lineno, value = header["require-acceptance"]
        if value not in ("true", "false"):
            issues.append(ParseIssue(lineno, "bad-value", "require-acceptance: true|false"))
        require_acceptance = value == "true"

    events: list[UtteranceEvent] = []
    seen_ids: dict[str, int] = {}
    participant_ids = {p.id for p in participants}
    for index, record in enumerate(records[1:]):
        fields = _fields(record, EVENT_KEYS, issues)
        start_line = record[0][0]
        missing = [k for k in REQUIRED_EVENT_KEYS if k not in fields]
        if missing:
            issues.append(ParseIssue(start_line, "missing-field",
                                     f"event lacks {', '.join(missing)}"))
            continue
        lineno, uid = fields["id"]
        if uid in seen_ids:
            issues.append(ParseIssue(lineno, "duplicate-utterance",
                                     f"utterance {uid!r} already defined"))
            continue
        turn_line, turn_text = fields["turn"]
        try:
            turn = int(turn_text)
        except ValueError:
            issues.append(ParseIssue(turn_line, "bad-value", f"turn must be an integer"))
            continue
        if turn != index:
            issues.append(ParseIssue(turn_line, "turn-order",
                                     f"turn {turn} out of place; expected {index}"))
        speaker = fields["speaker"][1]
        addressee = fields["addressee"][1]
        for role, (l, who) in (("speaker", fields["speaker"]), ("addressee", fields["addressee"])):
            if participant_ids and who not in participant_ids:
                issues.append(ParseIssue(l, "bad-value", f"{role} {who!r} not a participant"))
        text_line, utt_text = fields["text"]
        if not utt_text:
            issues.append(ParseIssue(text_line, "bad-value", "text must be nonempty"))
        realizes: tuple[Proposition, ...] = ()
        if "realizes" in fields:
            realizes = _parse_prop_list(fields["realizes"][1], fields["realizes"][0], issues)
        if "act" in fields:
            act_line, act_text = fields["act"]
            try:
                act = ActType(act_text)
            except ValueError:
                issues.append(ParseIssue(act_line, "bad-value", f"unknown act {act_text!r}"))
                act = ActType.OTHER
        elif is_affirmation_text(utt_text, affirmations):
            act = ActType.AFFIRMATION
        elif realizes:
            act = ActType.ASSERT
        else:
            act = ActType.OTHER
        intonation = Intonation.UNMARKED
        if "intonation" in fields:
            int_line, int_text = fields["intonation"]
            try:
                intonation = Intonation(int_text)
            except ValueError:
                issues.append(ParseIssue(int_line, "bad-value",
                                         f"unknown intonation {int_text!r}"))
        antecedents: tuple[str, ...] = ()
        if "antecedents" in fields:
            ant_line, ant_text = fields["antecedents"]
            antecedents = tuple(a.strip() for a in ant_text.split(",") if a.strip())
            for ant in antecedents:
                if ant not in seen_ids:
                    issues.append(ParseIssue(ant_line, "dangling-antecedent",
                                             f"antecedent {ant!r} not an earlier utterance"))
        implicates = None
        if "implicates" in fields:
            implicates = _parse_pair(fields["implicates"][1], fields["implicates"][0],
                                     issues, "implicates")
        supports = None
        if "supports" in fields:
            supports = _parse_pair(fields["supports"][1], fields["supports"][0],
                                   issues, "supports")
        interrupted = False
        if "interrupted" in fields:
            il, iv = fields["interrupted"]
            if iv not in ("true", "false"):
                issues.append(ParseIssue(il, "bad-value", "interrupted: true|false"))
            interrupted = iv == "true"
        rejects = None
        if "rejects" in fields:
            rl, rv = fields["rejects"]
            if rv not in seen_ids:
                issues.append(ParseIssue(rl, "dangling-antecedent",
                                         f"rejected utterance {rv!r} not defined earlier"))
            rejects = rv
        seen_ids[uid] = start_line
        if speaker == addressee or (act is ActType.PROMPT and realizes):
            issues.append(ParseIssue(start_line, "bad-value",
                                     "speaker must differ from addressee and prompts "
                                     "realize nothing"))
            continue
        try:
            events.append(UtteranceEvent(
                utterance_id=uid, turn_index=turn, speaker=speaker, addressee=addressee,
                text=utt_text, act=act, intonation=intonation, realizes=realizes,
                antecedent_ids=antecedents, implicates=implicates, supports=supports,
                interrupted=interrupted, rejects=rejects))
        except ValueError as exc:
            issues.append(ParseIssue(start_line, "bad-value", str(exc)))

    if not events and not issues:
        issues.append(ParseIssue(records[0][-1][0], "empty-transcript",
                                 "no utterance records"))
    if issues:
        raise TranscriptError(sorted(issues, key=lambda i: i.line))
    return Transcript(dialogue_id, participants, require_acceptance, tuple(events))


def serialize(t: Transcript) -> str:
    """Canonical text form; serialize(parse(serialize(t))) == serialize(t)."""
    out = [
        f"dialogue: {t.dialogue_id}",
        "participants: " + ", ".join(p.id for p in t.participants),
        f"require-acceptance: {'true' if t.require_acceptance else 'false'}",
    ]
    for e in t.events:
        out.append("")
        out.append(f"id: {e.utterance_id}")
        out.append(f"turn: {e.turn_index}")
        out.append(f"speaker: {e.speaker}")
        out.append(f"addressee: {e.addressee}")
        out.append(f"text: {e.text}")
        out.append(f"act: {e.act.value}")
        out.append(f"intonation: {e.intonation.value}")
        if e.realizes:
            out.append("realizes: " + "; ".join(format_proposition(p) for p in e.realizes))
        if e.antecedent_ids:
            out.append("antecedents: " + ", ".join(e.antecedent_ids))
        if e.implicates is not None:
            p, q = e.implicates
            out.append(f"implicates: {format_proposition(p)} => {format_proposition(q)}")
        if e.supports is not None:
            p, q = e.supports
            out.append(f"supports: {format_proposition(p)} => {format_proposition(q)}")
        if e.interrupted:
            out.append("interrupted: true")
        if e.rejects is not None:
            out.append(f"rejects: {e.rejects}")
    return "\n".join(out) + "\n"
