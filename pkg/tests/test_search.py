from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tmn.core import Chain, ChainStep, ModelId
from tmn.errors import NoChainFound
from tmn.search import SearchConfig, answer_question, chain_score, evaluate, sampling_schedule

from conftest import make_question
from randtree import brute_force_best, random_registry


def test_default_schedule():
    cfg = SearchConfig()
    assert [sampling_schedule(cfg, d) for d in range(5)] == [15, 7, 3, 1, 1]


def test_halving_schedule():
    cfg = SearchConfig.preset("halving")
    assert [sampling_schedule(cfg, d) for d in range(4)] == [10, 5, 2, 1]


@given(st.integers(1, 40), st.sampled_from([0.1, 0.25, 0.3, 0.5, 0.7, 0.9, 1.0]), st.integers(0, 8))
def test_schedule_matches_exact_arithmetic(n0, decay, depth):
    cfg = SearchConfig(n0=n0, decay=decay)
    expected = max(1, (n0 * Fraction(str(decay)) ** depth).numerator // (n0 * Fraction(str(decay)) ** depth).denominator)
    assert sampling_schedule(cfg, depth) == expected


def test_config_validation():
    for bad in ({"n0": 0}, {"decay": 0}, {"decay": 1.5}, {"scorer_weight": -1}, {"budget": -1}):
        with pytest.raises(ValueError):
            SearchConfig(**bad)
    with pytest.raises(ValueError):
        SearchConfig.from_mapping({"lambda": 3})
    with pytest.raises(ValueError):
        SearchConfig.preset("fast")
    assert SearchConfig.from_mapping({"n0": 4}).n0 == 4


def test_chain_score():
    q = make_question("a b", "c")
    chain = Chain(q, [ChainStep(ModelId.CALC, "not(1)", "99")], theta=0.5)
    assert chain_score(chain) == 0.5
    assert chain_score(chain.mark_complete(0.2)) == pytest.approx(2.5)
    assert chain_score(chain.mark_complete(0.2), weight=1.0) == pytest.approx(0.7)


def test_services_search(services):
    q, reg = services
    for greedy in (False, True):
        result = answer_question(q, reg, SearchConfig(greedy=greedy, seed=0))
        assert result.answer == "1"
        assert [s.model for s in result.chain.steps] == [ModelId.SQUAD, ModelId.SQUAD, ModelId.CALC]
        assert result.chain.steps[-1].question == "diff(2003, 2002)"
        assert result.score == pytest.approx(0.5)


def test_search_recovers_from_dead_end(dead_end):
    q, reg = dead_end
    result = answer_question(q, reg)
    assert result.answer == "46"
    with pytest.raises(NoChainFound):
        answer_question(q, reg, SearchConfig(greedy=True))


def test_zero_budget(services):
    q, reg = services
    with pytest.raises(NoChainFound):
        answer_question(q, reg, SearchConfig(budget=0))


def test_budget_is_respected(services):
    q, reg = services
    with pytest.raises(NoChainFound):
        answer_question(q, reg, SearchConfig(budget=2))
    assert answer_question(q, reg, SearchConfig(budget=3)).explored == 3


def test_record_shape(services):
    q, reg = services
    rec = answer_question(q, reg).to_record()
    assert rec["id"] == q.id and rec["answer"] == "1"
    assert rec["chain"][2] == {"model": "CALC", "question": "diff(2003, 2002)", "answer": "1"}


def test_eoq_needs_a_step():
    q = make_question("alpha beta", "ctx")
    from tmn.models import ModelRegistry, ScriptedNextGen, TableQA
    reg = ModelRegistry({ModelId.SQUAD: TableQA({})}, {}, ScriptedNextGen(default=["[EOQ]"]))
    with pytest.raises(NoChainFound):
        answer_question(q, reg)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_search_finds_brute_force_optimum(tree_seed, heavy):
    q = make_question("How many years after the Halvard mill opened did the mill close by the river?", "ctx")
    reg = random_registry(tree_seed)
    cfg = SearchConfig(n0=4, max_steps=3, scorer_weight=10.0 if heavy else 0.5)
    best = brute_force_best(q, reg, cfg)
    if best is None:
        with pytest.raises(NoChainFound):
            answer_question(q, reg, cfg)
        return
    seen = []
    result = answer_question(q, reg, cfg, on_expand=lambda parent, kids: seen.extend(kids))
    assert result.score == pytest.approx(best)
    assert all(result.score <= chain_score(c, cfg.scorer_weight) + 1e-12 for c in seen if c.complete)
    # theta never decreases from parent to child
    for c in seen:
        assert c.theta >= 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_children_never_lower_theta(tree_seed):
    q = make_question("How many years after the Halvard mill opened did the mill close by the river?", "ctx")
    reg = random_registry(tree_seed)
    pairs = []
    try:
        answer_question(q, reg, SearchConfig(n0=4, max_steps=3),
                        on_expand=lambda parent, kids: pairs.extend((parent, k) for k in kids))
    except NoChainFound:
        pass
    for parent, child in pairs:
        assert child.theta >= parent.theta


def test_seeded_search_is_reproducible(services):
    q, reg = services
    a = answer_question(q, reg, SearchConfig(seed=5)).to_record()
    b = answer_question(q, reg, SearchConfig(seed=5)).to_record()
    assert a == b


# -- evaluation --------------------------------------------------------------

def test_evaluate_means():
    gold = [{"id": "1", "answer": "Paris", "classes": ["composition"]},
            {"id": "2", "answer": "the Blue River", "class": "conjunction"},
            {"id": "3", "answer": "46"}]
    preds = [{"id": "1", "answer": "paris"}, {"id": "2", "answer": "Blue"}, {"id": "3", "answer": None}]
    report = evaluate(preds, gold)
    f1_2 = 2 * 1 / (1 + 2)
    assert report.em == pytest.approx(1 / 3)
    assert report.f1 == pytest.approx((1 + f1_2 + 0) / 3)
    assert report.by_class["composition"] == {"em": 1.0, "f1": 1.0, "count": 1}
    assert report.by_class["conjunction"]["f1"] == pytest.approx(f1_2)
    assert report.to_record(100)["em"] == pytest.approx(100 / 3)


def test_evaluate_unknown_id():
    with pytest.raises(KeyError):
        evaluate([{"id": "x", "answer": "a"}], [{"id": "y", "answer": "a"}])


def test_evaluate_empty():
    assert evaluate([], []).em == 0.0
