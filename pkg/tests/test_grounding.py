import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commonground import (ActType, DiscourseState, DuplicateUtterance, IRUClass,
                          LicenseLink, Participant, Strength, UnknownProposition,
                          UtteranceEvent, apply_any_next_upgrade, apply_iru_upgrade,
                          classify_iru, min_strength, open_record, parse,
                          parse_proposition, record_license_evidence,
                          replay_transcript, understanding_strength)
from commonground.errors import DanglingAntecedent
from commonground.grounding import (ATTEND, BASE_ASSUMPTIONS, COPRESENT, HEAR, LICENSE,
                                    REALIZE, UPGRADE_TABLE, AssumptionRecord,
                                    normalize_tokens, tokens_match_repeat)
from conftest import load_fixture

PRODUCIBLE = [Strength.HYPOTHESIS, Strength.DEFAULT, Strength.INFERENCE,
              Strength.LINGUISTIC]

LIVE_CLASSES = [c for c in IRUClass if c is not IRUClass.NONE]


def fresh_state(require_acceptance=False):
    return DiscourseState("test", (Participant("a"), Participant("b")),
                          require_acceptance)


def event(uid, turn, speaker="a", addressee="b", text="hello there", **kw):
    return UtteranceEvent(uid, turn, speaker, addressee, text, **kw)


def random_record(rng, with_license=None) -> AssumptionRecord:
    names = list(BASE_ASSUMPTIONS)
    if with_license is None:
        with_license = rng.random() < 0.5
    if with_license:
        names.append(LICENSE)
    return AssumptionRecord(
        utterance_id="uX", speaker="a", addressee="b",
        strengths={n: rng.choice(PRODUCIBLE) for n in names})


# -- token normalization ----------------------------------------------------

def test_normalize_tokens():
    assert normalize_tokens("IT DOES.") == ("it", "does")
    assert normalize_tokens("  that's  CORRECT! ") == ("that's", "correct")
    assert normalize_tokens("$125.45 per month") == ("125", "45", "per", "month")


def test_tokens_match_repeat_contiguous_either_direction():
    assert tokens_match_repeat(("it", "does"), ("yes", "it", "does"))
    assert tokens_match_repeat(("yes", "it", "does"), ("it", "does"))
    assert not tokens_match_repeat(("it", "does"), ("it", "surely", "does"))
    assert not tokens_match_repeat((), ("a",))


# -- open_record ------------------------------------------------------------

def test_open_record_starts_all_hypothesis():
    state = fresh_state()
    record = open_record(state, event("u7", 0))
    assert record.strengths == {name: Strength.HYPOTHESIS for name in BASE_ASSUMPTIONS}


def test_open_record_with_implicature_adds_license_slot():
    state = fresh_state()
    e = event("u17", 0, implicates=(parse_proposition("p"), parse_proposition("q")))
    record = open_record(state, e)
    assert record.strengths[LICENSE] is Strength.HYPOTHESIS


def test_open_record_rejects_duplicates():
    state = fresh_state()
    open_record(state, event("u7", 0))
    with pytest.raises(DuplicateUtterance):
        open_record(state, event("u7", 1))


# -- upgrade table ----------------------------------------------------------

def test_repeat_on_fresh_record():
    state = fresh_state()
    record = open_record(state, event("u7", 0))
    apply_iru_upgrade(record, IRUClass.REPEAT)
    assert record.strengths == {
        COPRESENT: Strength.HYPOTHESIS,
        ATTEND: Strength.LINGUISTIC,
        HEAR: Strength.LINGUISTIC,
        REALIZE: Strength.HYPOTHESIS,
    }


def test_prompt_upgrades_attention_only():
    state = fresh_state()
    record = open_record(state, event("u1", 0))
    apply_iru_upgrade(record, IRUClass.PROMPT)
    changed = [n for n, s in record.strengths.items() if s != Strength.HYPOTHESIS]
    assert changed == [ATTEND]


def test_paraphrase_upgrades_three_assumptions():
    state = fresh_state()
    record = open_record(state, event("u20", 0))
    apply_iru_upgrade(record, IRUClass.PARAPHRASE)
    for name in (ATTEND, HEAR, REALIZE):
        assert record.strengths[name] is Strength.LINGUISTIC
    assert record.strengths[COPRESENT] is Strength.HYPOTHESIS


def test_inference_classes_add_missing_license_slot():
    state = fresh_state()
    record = open_record(state, event("u16", 0))
    assert LICENSE not in record.strengths
    apply_iru_upgrade(record, IRUClass.EXPLICIT_INFERENCE)
    assert record.strengths[LICENSE] is Strength.LINGUISTIC


@pytest.mark.parametrize("cls", LIVE_CLASSES)
def test_upgrade_table_exactness(cls):
    rng = random.Random(hash(cls.value) & 0xFFFF)
    for _ in range(100):
        record = random_record(rng, with_license=True)
        before = dict(record.strengths)
        apply_iru_upgrade(record, cls)
        for name in record.strengths:
            if name in UPGRADE_TABLE[cls]:
                assert record.strengths[name] == max(before[name], Strength.LINGUISTIC)
            else:
                assert record.strengths[name] == before[name]


def test_upgrade_rejects_none_class():
    state = fresh_state()
    record = open_record(state, event("u1", 0))
    with pytest.raises(ValueError):
        apply_iru_upgrade(record, IRUClass.NONE)


# -- any-next-utterance row ---------------------------------------------------

def test_any_next_on_fresh_record():
    state = fresh_state()
    record = open_record(state, event("u7", 0))
    apply_any_next_upgrade(record)
    assert record.strengths == {
        COPRESENT: Strength.LINGUISTIC,
        ATTEND: Strength.DEFAULT,
        HEAR: Strength.DEFAULT,
        REALIZE: Strength.DEFAULT,
    }


def test_any_next_after_repeat_keeps_linguistic_and_fills_default():
    state = fresh_state()
    record = open_record(state, event("u7", 0))
    apply_iru_upgrade(record, IRUClass.REPEAT)
    apply_any_next_upgrade(record)
    assert record.strengths[ATTEND] is Strength.LINGUISTIC
    assert record.strengths[HEAR] is Strength.LINGUISTIC
    assert record.strengths[REALIZE] is Strength.DEFAULT
    assert record.strengths[COPRESENT] is Strength.LINGUISTIC


def test_any_next_leaves_interrupted_record_alone():
    state = fresh_state()
    record = open_record(state, event("u7", 0, interrupted=True))
    apply_any_next_upgrade(record)
    assert set(record.strengths.values()) == {Strength.HYPOTHESIS}


# -- understanding strength ---------------------------------------------------

def test_understanding_examples():
    state = fresh_state()
    record = open_record(state, event("u7", 0))
    record.strengths.update({COPRESENT: Strength.LINGUISTIC, ATTEND: Strength.LINGUISTIC,
                             HEAR: Strength.LINGUISTIC, REALIZE: Strength.DEFAULT})
    assert understanding_strength(record) is Strength.DEFAULT
    record.strengths[REALIZE] = Strength.LINGUISTIC
    assert understanding_strength(record) is Strength.LINGUISTIC
    fresh = open_record(state, event("u8", 1))
    assert understanding_strength(fresh) is Strength.HYPOTHESIS


@given(st.integers(0, 2**32 - 1))
def test_understanding_is_weakest_link(seed):
    record = random_record(random.Random(seed))
    assert understanding_strength(record) == min_strength(record.strengths.values())


def test_paraphrase_dominates_repeat_dominates_prompt():
    rng = random.Random(31337)
    for _ in range(200):
        base = random_record(rng)
        results = {}
        for cls in (IRUClass.PROMPT, IRUClass.REPEAT, IRUClass.PARAPHRASE):
            record = AssumptionRecord("uX", "a", "b", dict(base.strengths))
            apply_iru_upgrade(record, cls)
            results[cls] = understanding_strength(record)
        assert results[IRUClass.PARAPHRASE] >= results[IRUClass.REPEAT]
        assert results[IRUClass.REPEAT] >= results[IRUClass.PROMPT]


# -- monotonicity -------------------------------------------------------------

def test_random_operation_sequences_never_lower_strengths():
    rng = random.Random(424242)
    for _ in range(200):
        state = fresh_state()
        record = open_record(state, event("u0", 0, implicates=(
            parse_proposition("p"), parse_proposition("q"))))
        snapshot = dict(record.strengths)
        for _ in range(rng.randint(1, 12)):
            op = rng.random()
            if op < 0.4:
                apply_iru_upgrade(record, rng.choice(LIVE_CLASSES))
            elif op < 0.8:
                apply_any_next_upgrade(record)
            else:
                record.raise_to(rng.choice(list(record.strengths)),
                                rng.choice(PRODUCIBLE))
            for name, old in snapshot.items():
                assert record.strengths[name] >= old
            snapshot = dict(record.strengths)


# -- classification -----------------------------------------------------------

def test_classification_matches_printed_examples(fixtures_dir):
    cases = {
        "example1.dlg": {"u8": "repeat", "u9": "paraphrase"},
        "example2.dlg": {"u20": "paraphrase"},
        "example3.dlg": {"u17": "explicit_inference", "u18": "implicature_reinforcement"},
    }
    for name, expected in cases.items():
        transcript = parse(load_fixture(name))
        _, traces = replay_transcript(transcript)
        got = {t.event_id: t.iru_class for t in traces}
        for uid, cls in expected.items():
            assert got[uid] == cls, (name, uid)


def test_prompt_classification():
    state = fresh_state()
    assert classify_iru(event("u1", 0, act=ActType.PROMPT, text="uh huh"),
                        state) is IRUClass.PROMPT


def test_classification_is_deterministic_and_pure():
    transcript = parse(load_fixture("example3.dlg"))
    engine, _ = replay_transcript(transcript)
    state = engine.state
    e = event("u99", 99, speaker="h", addressee="j",
              realizes=(parse_proposition("!eligible81"),))
    before = {k: v.strength for k, v in state.license_links.items()}
    first = classify_iru(e, state)
    second = classify_iru(e, state)
    assert first is second
    assert {k: v.strength for k, v in state.license_links.items()} == before


def test_classify_rejects_dangling_antecedent():
    state = fresh_state()
    with pytest.raises(DanglingAntecedent):
        classify_iru(event("u1", 0, antecedent_ids=("missing",)), state)


# -- license links -------------------------------------------------------------

def test_record_license_evidence_strengthens_to_max():
    state = fresh_state()
    open_record(state, event("u16", 0))
    state.events["u16"] = event("u16", 0)
    state.context.assert_prop(parse_proposition("pension"), Strength.LINGUISTIC, "u16")
    link = LicenseLink(parse_proposition("pension"), parse_proposition("!eligible81"),
                       Strength.INFERENCE, LicenseLink.ORIGIN_INFERENCE, "u16")
    stored = record_license_evidence(state, link, Strength.INFERENCE)
    assert stored.strength is Strength.INFERENCE
    record_license_evidence(state, stored, Strength.LINGUISTIC)
    assert stored.strength is Strength.LINGUISTIC
    record_license_evidence(state, stored, Strength.DEFAULT)  # never lowered
    assert stored.strength is Strength.LINGUISTIC
    assert state.records["u16"].strengths[LICENSE] is Strength.LINGUISTIC


def test_record_license_evidence_requires_known_premise():
    state = fresh_state()
    link = LicenseLink(parse_proposition("ghost"), parse_proposition("q"),
                       Strength.HYPOTHESIS, LicenseLink.ORIGIN_IMPLICATURE, "u1")
    with pytest.raises(UnknownProposition):
        record_license_evidence(state, link, Strength.HYPOTHESIS)
