import pytest

from tmn.core import EMPTY_CONTEXT, Context, ModelId
from tmn.errors import NoGoldAnswer
from tmn.hints import (COMPARISON_PATTERN, DIFFERENCE_MUST_MATCH, DIFFERENCE_SHOULD_NOT_MATCH, Hint,
                       classify, comparison_entities, extract_hints, extract_values,
                       hint_from_record, hints_record, in_scope, is_complementation, is_difference,
                       title_mention)
from tmn.textscore import essential_words

from classification_cases import cases
from conftest import make_question


@pytest.mark.parametrize("question,expected", cases(), ids=lambda x: getattr(x, "id", ""))
def test_classification(question, expected):
    assert {c.value for c in classify(question)} == expected


def test_difference_pattern_lists():
    assert len(DIFFERENCE_MUST_MATCH) == 11
    # ".*maximum.*" ".*longest.*" are two separate patterns
    assert ".*maximum.*" in DIFFERENCE_SHOULD_NOT_MATCH and ".*longest.*" in DIFFERENCE_SHOULD_NOT_MATCH
    assert is_difference("How many months between the two treaties?")
    assert not is_difference("How many points did the team score?")
    assert not is_difference("What was the minimum difference?")


def test_comparison_entities_keep_case():
    assert COMPARISON_PATTERN == r"([^,]+)[:,](.*) or (.*)\?"
    assert comparison_entities("Which ancestral group is smaller: Irish or Italian?") == ("Irish", "Italian")
    assert comparison_entities("Which came first, the Treaty of Paris or the Treaty of Ghent?") == (
        "the Treaty of Paris", "the Treaty of Ghent")
    assert comparison_entities("Which is smaller?") is None


def test_complementation_pattern():
    assert is_complementation("What percent of people were not Asian?")
    assert is_complementation("What percentage of households aren't families?")
    assert not is_complementation("How many were not Asian?")


def test_title_mention_keeps_text_casing():
    assert title_mention("Chiwetel Ejiofor", "a film starring chiwetel ejiofor and others") == "chiwetel ejiofor"
    assert title_mention("Moondance (magazine)", "nothing here") is None


def test_extract_values_bare_years_once():
    vals = extract_values(Context("The sector decreased by 7.8 percent in 2002, before rebounding in 2003."))
    assert [v.text for v in vals] == ["7.8", "2002", "2003"]
    assert [v.render() for v in vals] == ["7.8", "2002", "2003"]


def test_extract_values_full_dates_and_window():
    ctx = Context("On 25 December 1705 the massacre took place. " + "filler " * 30 + "It ended in 1710.")
    assert [v.text for v in extract_values(ctx)] == ["25 December 1705", "1710"]
    near = extract_values(ctx, near_entity="massacre", window=5)
    assert [v.text for v in near] == ["25 December 1705"]
    assert extract_values(ctx, near_entity="absent entity") == []


def test_services_hints():
    q = cases()[0][0]
    chains = extract_hints(q)
    phi = tuple(essential_words(q.text))
    assert phi == ("many", "years", "take", "services", "sector", "rebound")
    wanted = (("2003", phi, ModelId.SQUAD), ("2002", phi, ModelId.SQUAD),
              ("1", ("diff", "2003", "2002"), ModelId.CALC))
    assert wanted in [tuple((h.answer, h.vocabulary, h.target) for h in c) for c in chains]
    for chain in chains:
        assert chain[-1].context is EMPTY_CONTEXT and chain[-1].answer == "1"
        assert [h.step_index for h in chain] == [1, 2, 3]


def test_bangkok_hints():
    q = cases()[3][0]
    (chain,) = extract_hints(q)
    assert [(h.answer, h.target) for h in chain] == [("12.6", ModelId.SQUAD), ("87.4", ModelId.CALC)]
    assert chain[1].vocabulary == ("not", "12.6")


def test_comparison_hints_use_question_words_minus_other_entity():
    q = cases()[2][0]
    chains = extract_hints(q)
    first = chains[0]
    assert first[0].vocabulary == ("ancestral", "group", "smaller", "irish")
    assert first[1].vocabulary == ("ancestral", "group", "smaller", "italian")
    assert first[2].vocabulary == ("if_then", "12.2", "6.1", "Irish", "Italian")


def test_composition_hints():
    q = cases()[4][0]
    (chain,) = extract_hints(q)
    assert (chain[0].answer, chain[0].context_index) == ("Chiwetel Ejiofor", 0)
    assert (chain[1].answer, chain[1].context_index) == ("Chiwetel Umeadi Ejiofor", 1)
    assert {"chiwetel", "ejiofor"} <= set(chain[1].vocabulary)


def test_conjunction_hints():
    q = cases()[6][0]
    (chain,) = extract_hints(q)
    assert [h.answer for h in chain] == ["Arnold Schwarzenegger"] * 2
    assert [h.context_index for h in chain] == [0, 1]


def test_extract_hints_needs_gold():
    with pytest.raises(NoGoldAnswer):
        extract_hints(make_question("How many years passed?", "In 2001 and 2003."))


def test_in_scope():
    assert in_scope(cases()[0][0])
    assert not in_scope(cases()[8][0])


def test_calc_hint_must_name_operation():
    with pytest.raises(ValueError):
        Hint(EMPTY_CONTEXT, "1", ("2003", "2002"), ModelId.CALC, 3)


def test_hint_record_round_trip():
    q = cases()[0][0]
    chains = extract_hints(q)
    rec = hints_record(q, classify(q), chains)
    assert rec["classes"] == ["difference"]
    for chain, chain_rec in zip(chains, rec["chains"]):
        assert tuple(hint_from_record(h, q, i + 1) for i, h in enumerate(chain_rec)) == chain
