from pathlib import Path

import pytest

from commonground import (ActType, Intonation, Literal, TranscriptError, parse, serialize,
                          write_trace)
from conftest import FIXTURES, load_fixture

ALL_FIXTURES = sorted(p.name for p in FIXTURES.glob("*.dlg"))
CORPUS_FIXTURES = sorted("corpus/" + p.name for p in (FIXTURES / "corpus").glob("*.dlg"))

MINIMAL = """dialogue: tiny
participants: a, b

id: u0
turn: 0
speaker: a
addressee: b
text: hello there
"""


def issues_of(text):
    with pytest.raises(TranscriptError) as exc:
        parse(text)
    return exc.value.issues


def test_parse_example1(fixtures_dir):
    t = parse(load_fixture("example1.dlg"))
    assert t.dialogue_id == "example1"
    assert [p.id for p in t.participants] == ["h", "r"]
    assert t.require_acceptance is True
    assert len(t.events) == 4
    u8 = t.events[2]
    assert u8.utterance_id == "u8"
    assert u8.antecedent_ids == ("u7",)
    assert u8.realizes == (Literal("cd_income_disqualifies"),)
    assert u8.act is ActType.ASSERT


def test_empty_document():
    issues = issues_of("   \n  \n")
    assert issues[0].code == "empty-transcript"
    assert issues[0].line == 1


def test_header_only_document():
    issues = issues_of("dialogue: d\nparticipants: a, b\n")
    assert any(i.code == "empty-transcript" for i in issues)


def test_dangling_antecedent_carries_line_number():
    text = MINIMAL + "\nid: u1\nturn: 1\nspeaker: b\naddressee: a\ntext: ok then\nantecedents: u9\n"
    issues = issues_of(text)
    assert [(i.code, i.line) for i in issues] == [("dangling-antecedent", 15)]


def test_forward_reference_is_dangling():
    text = (MINIMAL
            + "\nid: u1\nturn: 1\nspeaker: b\naddressee: a\ntext: ok\nantecedents: u2\n"
            + "\nid: u2\nturn: 2\nspeaker: a\naddressee: b\ntext: fine\n")
    assert issues_of(text)[0].code == "dangling-antecedent"


def test_duplicate_utterance_id():
    text = MINIMAL + "\nid: u0\nturn: 1\nspeaker: b\naddressee: a\ntext: again\n"
    issues = issues_of(text)
    assert issues[0].code == "duplicate-utterance"
    assert issues[0].line == 10


def test_unknown_field_is_an_error():
    text = MINIMAL.replace("text: hello there", "text: hello there\nmood: cheerful")
    issues = issues_of(text)
    assert issues[0].code == "unknown-field"
    assert issues[0].line == 9


def test_bad_proposition_syntax_with_line():
    text = MINIMAL.replace("text: hello there", "text: hello there\nrealizes: a -> -> b")
    issues = issues_of(text)
    assert issues[0].code == "bad-proposition"
    assert issues[0].line == 9


def test_missing_required_key():
    issues = issues_of("dialogue: d\nparticipants: a, b\n\nid: u0\nturn: 0\nspeaker: a\ntext: hi\n")
    assert any(i.code == "missing-field" for i in issues)


def test_turn_indices_must_be_dense_from_zero():
    text = MINIMAL.replace("turn: 0", "turn: 3")
    assert issues_of(text)[0].code == "turn-order"


def test_prompt_with_content_rejected():
    text = MINIMAL.replace("text: hello there",
                           "text: hello there\nact: prompt\nrealizes: p")
    assert any(i.code == "bad-value" for i in issues_of(text))


def test_speaker_addressee_must_be_participants_and_distinct():
    bad = MINIMAL.replace("addressee: b", "addressee: a")
    assert any(i.code == "bad-value" for i in issues_of(bad))
    unknown = MINIMAL.replace("speaker: a", "speaker: z")
    assert any(i.code == "bad-value" for i in issues_of(unknown))


def test_act_resolution_from_lexicon():
    text = (MINIMAL
            + "\nid: u1\nturn: 1\nspeaker: b\naddressee: a\ntext: that's correct\n"
            + "\nid: u2\nturn: 2\nspeaker: a\naddressee: b\ntext: we close at nine\nrealizes: close_nine\n")
    t = parse(text)
    assert t.events[0].act is ActType.OTHER
    assert t.events[1].act is ActType.AFFIRMATION
    assert t.events[2].act is ActType.ASSERT


def test_explicit_act_overrides_lexicon():
    text = MINIMAL.replace("text: hello there", "text: right\nact: question")
    assert parse(text).events[0].act is ActType.QUESTION


def test_minimal_transcript_canonical_form():
    t = parse(MINIMAL)
    assert serialize(t) == (
        "dialogue: tiny\n"
        "participants: a, b\n"
        "require-acceptance: false\n"
        "\n"
        "id: u0\n"
        "turn: 0\n"
        "speaker: a\n"
        "addressee: b\n"
        "text: hello there\n"
        "act: other\n"
        "intonation: unmarked\n"
    )


@pytest.mark.parametrize("name", ALL_FIXTURES + CORPUS_FIXTURES)
def test_round_trip_identity_on_fixtures(name):
    original = parse(load_fixture(name))
    canonical = serialize(original)
    reparsed = parse(canonical)
    assert reparsed == original
    assert serialize(reparsed) == canonical  # idempotent after one pass


def test_unordered_keys_canonicalize():
    scrambled = """dialogue: tiny
participants: a, b

turn: 0
text: hello there
addressee: b
id: u0
speaker: a
"""
    assert serialize(parse(scrambled)) == serialize(parse(MINIMAL))


def test_write_trace_empty_is_empty_document():
    assert write_trace([]) == ""
