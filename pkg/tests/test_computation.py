import itertools

import pytest
from hypothesis import given

from conftest import computations
from dstl.computation import (ComputationDecl, DistributedState, StateId, build, causal_closure,
                              concurrent, enumerate_ds, initial_ds, leq, leq_c, load_model,
                              parse_ds, parse_model)
from dstl.errors import CapExceeded, ModelError, ParseError

CYCLE = """
component m: 2
component n: 2
msg m.1 -> n.0
msg n.1 -> m.0
"""


def test_table1_structure(table1):
    c = table1
    assert c.components == ("m", "n")
    assert c.size == 12
    s = lambda x: next(iter(parse_ds(x)))
    assert c.reaches(s("m.1"), s("n.2"))          # message
    assert c.reaches(s("m.1"), s("n.5"))
    assert not c.reaches(s("m.0"), s("n.1"))
    assert c.reaches(s("n.4"), s("m.5"))
    assert concurrent(c, s("m.0"), s("n.1"))
    assert str(initial_ds(c)) == "{m.0, n.0}"
    assert c.labels_of(s("n.4")) == frozenset({"w", "t"})


def test_causal_closure_is_reflexive_and_transitive(table1):
    rel = causal_closure(table1)
    states = table1.states
    assert all((s, s) in rel for s in states)
    for a, b in rel:
        for b2, d in rel:
            if b == b2:
                assert (a, d) in rel


@pytest.mark.parametrize("text, message", [
    ("component m: 2\ncomponent m: 1", "declared twice"),
    ("component m: 0", "no states"),
    ("component m: 2\nlabels n.0: p", "undeclared component 'n'"),
    ("component m: 2\nlabels m.2: p", "out of range"),
    ("component m: 2\nmsg m.0 -> m.1", "within one component"),
    (CYCLE, "causal cycle"),
    ("component m: 1\nlabels m.0: p\nlabels m.0: q", "duplicate state index"),
    ("", "at least one component"),
])
def test_model_errors(text, message):
    with pytest.raises(ModelError, match=message):
        load_model(text)


def test_model_syntax_errors():
    with pytest.raises(ParseError, match="unrecognized model line"):
        parse_model("component m 2")
    with pytest.raises(ParseError, match="bad proposition"):
        parse_model("component m: 1\nlabels m.0: p-q")


def test_one_state_model():
    c = load_model("component m: 1\nlabels m.0: p")
    assert c.size == 1
    assert [str(d) for d in enumerate_ds(c)] == ["{m.0}"]


def test_text_roundtrip(table1):
    again = load_model(table1.to_text())
    assert again.to_text() == table1.to_text()
    assert again.messages == table1.messages


def test_distributed_state_is_nonempty():
    with pytest.raises(ModelError, match="nonempty"):
        DistributedState(frozenset())


def test_parse_ds_forms():
    a = parse_ds("{m.0, n.3}")
    assert a == parse_ds("n.3 m.0")
    assert sorted(a) == [StateId("m", 0), StateId("n", 3)]
    assert str(a) == "{m.0, n.3}"


def test_enumeration_and_cap(table1):
    small = load_model("component m: 2\ncomponent n: 1")
    assert len(list(enumerate_ds(small))) == 7
    with pytest.raises(CapExceeded):
        list(enumerate_ds(table1, cap=11))


def test_leq_examples(table1):
    c = table1
    assert leq(c, "m.0 n.0", "m.1 n.1")
    assert leq(c, "m.1", "n.2")
    assert not leq(c, "n.2", "m.1")
    # every member of ds' must be reached from some member of ds
    assert not leq(c, "m.0", "m.1 n.0")
    assert leq_c(c, "m.0", "m.1")
    assert not leq_c(c, "m.0", "m.2")
    assert leq_c(c, "m.1", "n.2")              # one message hop


@given(computations())
def test_leq_is_a_preorder(c):
    masks = range(1, 1 << c.size)
    for a in masks:
        assert leq(c, a, a) and leq_c(c, a, a)
    for a, b, d in itertools.product(masks, repeat=3):
        if leq(c, a, b) and leq(c, b, d):
            assert leq(c, a, d)


@given(computations())
def test_closely_implies_follows(c):
    for a, b in itertools.product(range(1, 1 << c.size), repeat=2):
        if leq_c(c, a, b):
            assert leq(c, a, b)


def test_build_from_declaration():
    decl = ComputationDecl([("a", 2), ("b", 1)], {("a", 1): {"x"}}, [(("a", 0), ("b", 0))])
    c = build(decl)
    assert c.prop_mask("x") == 0b010
    assert c.comp_mask("b") == 0b100
    assert c.alphabet() == ["x"]
