from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import computations, dsl_formulas
from dstl.computation import load_model, parse_ds
from dstl.errors import DstlError, ModelError, ParseError
from dstl.formula import parse_dsl
from dstl.semantics import (FrameViolation, KripkeModel, ds_frame, kripke_satisfies, satisfies,
                            truth_table, valid, validate_frame, valuation, world_name)

FIXTURES = Path(__file__).parent / "fixtures"


def example_frame_model():
    return load_model("component m: 2\ncomponent n: 1\nlabels m.0: p\nlabels m.1: q\nlabels n.0: p r")


def test_valuation_is_intersection(table1):
    assert valuation(table1, "n.3") == {"p", "u"}
    assert valuation(table1, "n.0 n.3") == {"p"}
    assert valuation(table1, "m.0 m.1") == frozenset()


@pytest.mark.parametrize("ds, formula, expected", [
    ("n.4", "w & t", True),
    ("n.4 n.5", "w", False),
    ("n.4 n.5", "t", True),
    ("m.0", "<n>true", False),
    ("m.0 n.4", "<n>w", True),
    ("m.0 n.4", "[n]w", True),
    ("m.0 n.4 n.5", "[n]w", False),
    ("m.0 n.3", "<m>p & <n>(p & u)", True),
    ("n.0 n.3", "<n>p & <n>u & ~<n>(p & u)", False),
    ("m.0 n.3", "<m><n>true", False),            # <m> lands on {m.0}, which has no n-state
    ("m.0", "<m><m>p", True),
])
def test_satisfaction_table1(table1, ds, formula, expected):
    assert satisfies(table1, ds, parse_dsl(formula)) is expected


def test_invariant_verdicts(table1):
    assert valid(table1, parse_dsl("w -> t")).holds
    v = valid(table1, parse_dsl("<n>(w -> t)"))
    assert not v.holds and str(v.failing_ds) == "{m.0}"


@given(st.data())
def test_truth_table_matches_satisfies(data):
    c = data.draw(computations())
    f = data.draw(dsl_formulas(comps=c.components))
    table = truth_table(c, f)
    assert table.dtype == np.bool_
    for mask in range(1, 1 << c.size):
        assert bool(table[mask]) == satisfies(c, mask, f)


@given(st.data())
def test_kripke_evaluator_agrees_on_ds_frames(data):
    c = data.draw(computations(max_states=2))
    f = data.draw(dsl_formulas(comps=c.components))
    km = ds_frame(c)
    for mask in range(1, 1 << c.size):
        assert kripke_satisfies(km, world_name(c, mask), f) == satisfies(c, mask, f)


@given(computations(max_states=2))
def test_ds_frames_satisfy_frame_conditions(c):
    assert validate_frame(ds_frame(c)) == []


@given(computations(max_states=2))
def test_dsl2_holds_at_every_world(c):
    if len(c.components) < 2:
        return
    km = ds_frame(c)
    f = parse_dsl("[m][n]false")
    assert all(kripke_satisfies(km, w, f) for w in km.worlds)


def test_example_frame_fixture():
    km = ds_frame(example_frame_model())
    frozen = KripkeModel.from_text((FIXTURES / "example_frame.kripke").read_text())
    assert km.worlds == frozen.worlds
    assert km.reach == frozen.reach
    assert km.successors("m", "m.0,n.0") == ["m.0"]
    assert km.successors("n", "m.0,n.0") == ["n.0"]


def test_kripke_text_roundtrip():
    km = ds_frame(example_frame_model())
    again = KripkeModel.from_text(km.to_text())
    assert again.worlds == km.worlds and again.reach == km.reach and again.valuation == {
        w: v for w, v in km.valuation.items() if v}


def test_kripke_text_errors():
    with pytest.raises(ParseError):
        KripkeModel.from_text("world a\nbogus line")
    with pytest.raises(ModelError, match="undeclared world"):
        KripkeModel.from_text("world a\nedge m: a -> b")


@pytest.mark.parametrize("mutate, condition", [
    (lambda km: km.reach["m"].discard(("m.0", "m.0")), 1),
    (lambda km: km.reach["m"].add(("m.0", "m.1")), 2),
    (lambda km: km.reach["n"].add(("m.0", "n.0")), 3),
])
def test_frame_mutations_flagged(mutate, condition):
    km = ds_frame(example_frame_model())
    mutate(km)
    found = validate_frame(km)
    assert found and {v.condition for v in found} == {condition}
    assert str(found[0]).startswith(f"rc{condition}")


def test_frame_size_limit():
    with pytest.raises(DstlError, match="frame size limit"):
        ds_frame(load_model("component m: 13"))


def test_frame_violation_text():
    v = FrameViolation(3, ("m", "n"), ("a", "b", "c"))
    assert str(v) == "rc3: (a, b) in R_m and (b, c) in R_n"
