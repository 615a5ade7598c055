import random

import pytest

from dstl.checker import check
from dstl.computation import load_model
from dstl.formula import parse_temporal
from dstl.lab import (GenParams, counterexample_corpus, corpus_hits, fuzz_all, fuzz_rule,
                      random_computation, random_formula, shrink)
from dstl.proof.catalog import CATALOG, INVALID


@pytest.mark.parametrize("seed", range(20))
def test_random_computations_build(seed):
    p = GenParams(components=(2, 3), states=(1, 4), density=0.6)
    c = random_computation(p, random.Random(seed))
    assert 2 <= len(c.components) <= 3
    assert all(1 <= n <= 4 for n in c.lengths)
    assert load_model(c.to_text()).to_text() == c.to_text()


def test_generation_is_deterministic():
    p = GenParams(seed=7)
    assert random_computation(p).to_text() == random_computation(p).to_text()


def test_random_formula_uses_given_vocabulary():
    rng = random.Random(3)
    for _ in range(50):
        f = random_formula(rng, ["p", "q"], ["m"], 3)
        text = str(f)
        assert "n" not in text.replace("unless", "")


@pytest.mark.parametrize("rule", ["LI", "BI", "LTR", "UCW", "Conf", "Notif"])
def test_sound_rules_small_fuzz(rule):
    r = fuzz_rule(rule, trials=40)
    assert r.sound and r.violations == [] and r.non_vacuous > 0


@pytest.mark.parametrize("rule", list(INVALID))
def test_invalid_rules_refuted(rule):
    r = fuzz_rule(rule, trials=60)
    assert not r.sound and r.ok
    assert r.violations or r.corpus_hits


def test_corpus_instances_fail():
    assert corpus_hits("GeneralCancellation") == ["cancellation.model"]
    assert corpus_hits("BoxElim") == ["incompleteness.model"]
    assert corpus_hits("D2Converse") == ["d2_converse.model"]
    assert corpus_hits("LTR") == []


@pytest.mark.parametrize("entry", counterexample_corpus(), ids=lambda e: e.name)
def test_corpus_verdicts(entry):
    c = entry.computation()
    for text, expected in entry.expected:
        assert check(c, text).holds is expected


def test_shrink_keeps_the_failure():
    r = fuzz_rule("D2Converse", trials=30)
    v = r.violations[0]
    schema = INVALID["D2Converse"]
    small = load_model(v.shrunk_model)
    big = load_model(v.model)
    assert small.size <= big.size
    shrunk_again = shrink(small, schema, v.comps, v.formulas)
    assert shrunk_again.to_text() == small.to_text()


def test_report_serialization():
    r = fuzz_all(10, seeds=(0, 1), rules=["LI", "D2Converse"])
    assert [x.rule for x in r] == ["LI", "D2Converse"]
    assert r[0].trials == 20
    d = r[1].to_dict()
    assert d["expected_sound"] is False and d["ok"] is True


def test_cc_family_refuted():
    # The conjunction rules fail on a single component with two states.
    c = load_model("component m: 2\nlabels m.1: q")
    prem = ["[m]~q leads_to ~<m>q", "[m]~q leads_to <m>q"]
    assert all(check(c, parse_temporal(x)).holds for x in prem)
    assert not check(c, "[m]~q leads_to ~<m>q & <m>q").holds
    assert "LCC" in CATALOG
