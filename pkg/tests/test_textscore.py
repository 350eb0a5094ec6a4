import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tmn.core import Chain, ChainStep, Context, ModelId
from tmn.errors import EmptyQuestion
from tmn.textscore import (ChainMetrics, Lexicon, TokenSet, answer_em, answer_f1, chain_metrics,
                           essential_words, load_stopwords, mu, normalize_answer, nu, overlaps,
                           stopwords_sha256, theta, tokenize, zeta)

from conftest import make_question
from test_core import services_chain

STOPWORDS_SHA256 = "019f104ba2ed07436d05f9cdd3383034ad66014edc27fc651f837e1a038b6451"


def test_stopword_list_is_pinned():
    assert stopwords_sha256() == STOPWORDS_SHA256
    words = load_stopwords()
    assert len(words) == 179
    assert {"the", "how", "did", "for", "to", "in", "what"} <= words
    assert "years" not in words and "many" not in words


def test_tokenize():
    assert tokenize("The 1,000 men’s 7.8 percent, in 2002!") == ["the", "1000", "men's", "7.8", "percent", "in", "2002"]


def test_essential_words_of_services_question():
    words = essential_words("How many years did it take for the services sector to rebound?")
    assert words.to_list() == ["many", "years", "take", "services", "sector", "rebound"]


def test_tagger_plugin_filters_by_tag():
    def tagger(tokens):
        return ["NOUN" if t.endswith("s") else "DET" for t in tokens]
    lex = Lexicon(load_stopwords(), tagger)
    assert essential_words("many years services sector", lex) == {"years", "services"}


def test_tokenset_behaves_like_ordered_set():
    a = TokenSet(["b", "a", "b"])
    assert a.to_list() == ["b", "a"] and a == {"a", "b"} and len(a) == 2
    assert (a | ["c"]).to_list() == ["b", "a", "c"]
    assert (a - {"b"}).to_list() == ["a"]


def test_zeta_drops_words_exclusive_to_other_doc():
    q = "Which river flows through the city where Alma Vey was born?"
    own = Context("Alma Vey was born in Tarn in 1901.")
    other = Context("The Seld river flows through Tarn.")
    assert zeta(q, own, other) == {"alma", "vey", "born", "city"}
    assert zeta(q, own, other, mode="formal") == {"river", "flows"}
    assert zeta(q, own, None) == essential_words(q)


def test_services_chain_metrics_hand_counted():
    # question words: many years take services sector rebound
    # new: year, start, dip (no lemmatizer, so "year" is not "years")
    # uncovered: many, years
    m = chain_metrics(services_chain())
    assert (m.new_words, m.uncovered_words, m.question_words) == (3, 2, 6)
    assert m.theta == pytest.approx(0.5) and m.mu == pytest.approx(2 / 6) and m.nu == 0


def test_calculator_keywords_are_not_new_words():
    q = make_question("How many days between the battles?", "p")
    chain = Chain(q, [ChainStep(ModelId.SQUAD, "When were the battles?", "8 January 1706"),
                      ChainStep(ModelId.SQUAD, "When were the battles?", "25 December 1705"),
                      ChainStep(ModelId.CALC, "diff(8 January 1706, 25 December 1705, days)", "14")])
    assert theta(chain) == 0.0
    # operands not seen in earlier answers do count
    alone = Chain(q, chain.steps[2:])
    assert theta(alone) == pytest.approx(6 / 3)


def test_earlier_answers_are_not_new_words():
    q = make_question("Who founded the town where the bridge was built?", "p")
    chain = Chain(q, [ChainStep(ModelId.SQUAD, "Where was the bridge built?", "Tarnby"),
                      ChainStep(ModelId.SQUAD, "Who founded Tarnby?", "Alma Vey")])
    assert theta(chain) == 0.0
    assert mu(chain) == pytest.approx(1 / 4)  # "town" is never asked about
    assert nu(chain) == 0


def test_nu_counts_unused_intermediate_answers():
    q = make_question("How many years did it take for the services sector to rebound?", "p")
    chain = Chain(q, [ChainStep(ModelId.SQUAD, "When did the sector rebound?", "2003"),
                      ChainStep(ModelId.SQUAD, "When did the sector dip?", "2002"),
                      ChainStep(ModelId.CALC, "not(12)", "88")])
    assert nu(chain) == 2


def test_nu_accepts_reuse_in_final_answer():
    q = make_question("Which river flows through both Tarn and Seld?", "p")
    chain = Chain(q, [ChainStep(ModelId.SQUAD, "Which river flows through Tarn?", "Ob River"),
                      ChainStep(ModelId.SQUAD, "Which river flows through Seld?", "Ob River")])
    assert nu(chain) == 0


def test_question_without_essential_words():
    chain = Chain(make_question("Who is it?", "p"), [ChainStep(ModelId.SQUAD, "x", "y")])
    with pytest.raises(EmptyQuestion):
        theta(chain)


def test_filter_sum_uses_exact_counts():
    # 0.1 + 0.3 in floating point is 0.4000000000000001; counts avoid that drift
    m = ChainMetrics(0.1, 0.3, 0, 1, 3, 10)
    assert not m.passes(theta_max=0.3, mu_max=0.31, sum_max=0.4)
    m = ChainMetrics(0.1, 0.2, 0, 1, 2, 10)
    assert m.passes()


# -- answer metrics -----------------------------------------------------------

def test_normalize_answer():
    assert normalize_answer("The  Irish!") == "irish"
    assert normalize_answer("87.4%") == "87.4"
    assert normalize_answer("an apple, a pear") == "apple pear"


def test_f1_chiwetel_hand_computed():
    # two shared tokens, 2 + 3 tokens: 2*2/5
    assert abs(answer_f1("Chiwetel Ejiofor", "Chiwetel Umeadi Ejiofor") - 0.8) <= 1e-9


def _f1_oracle(pred: str, gold: str) -> Fraction:
    p, g = normalize_answer(pred).split(), normalize_answer(gold).split()
    if not p or not g:
        return Fraction(int(p == g))
    remaining = list(g)
    common = 0
    for t in p:
        if t in remaining:
            remaining.remove(t)
            common += 1
    if not common:
        return Fraction(0)
    precision, recall = Fraction(common, len(p)), Fraction(common, len(g))
    return 2 * precision * recall / (precision + recall)


words = st.lists(st.sampled_from(["a", "the", "cat", "dog", "7", "7.5", "Cat", "red"]), max_size=6)


@given(words, words)
def test_f1_matches_rational_oracle_and_is_symmetric(p, g):
    pred, gold = " ".join(p), " ".join(g)
    f1 = answer_f1(pred, gold)
    assert math.isclose(f1, float(_f1_oracle(pred, gold)), abs_tol=1e-12)
    assert f1 == answer_f1(gold, pred)
    assert 0.0 <= f1 <= 1.0
    if answer_em(pred, gold):
        assert f1 == 1.0


def test_em():
    assert answer_em("the Italian", "Italian") == 1
    assert answer_em("Irish", "Italian") == 0


def test_overlaps_threshold_and_empty_prediction():
    assert overlaps("Chiwetel Ejiofor", "Chiwetel Umeadi Ejiofor")
    assert not overlaps("Chiwetel", "Chiwetel Umeadi Ejiofor")
    assert not overlaps("", "")
    assert overlaps("Chiwetel", "Chiwetel Umeadi Ejiofor", threshold=0.5)


@given(st.lists(st.sampled_from(["where", "year", "sector", "dip", "rebound", "start", "bridge"]),
                min_size=1, max_size=5), st.lists(st.text(alphabet="abcdey ", min_size=1), max_size=4))
def test_theta_never_decreases_as_chain_grows(extra, questions):
    q = make_question("How many years did it take for the services sector to rebound?", "p")
    chain = Chain(q)
    last = 0.0
    for i, text in enumerate(questions + [" ".join(extra)]):
        if not text.strip():
            text = "x"
        chain = Chain(q, chain.steps + (ChainStep(ModelId.SQUAD, text, f"a{i}"),))
        now = theta(chain)
        assert now >= last
        last = now
