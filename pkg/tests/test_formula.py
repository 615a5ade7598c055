import pytest
from hypothesis import given

from conftest import dsl_formulas
from dstl.errors import ParseError
from dstl.formula import (And, Box, FalseF, Iff, Implies, Init, LeadsTo, Loc, Not, Or, Plain,
                          Prop, Stable, Unless, atoms, components_of, desugar, is_tautology,
                          parse_dsl, parse_temporal, props_of, render, substitute)


@pytest.mark.parametrize("text, expected", [
    ("p & q | r", Or(And(Prop("p"), Prop("q")), Prop("r"))),
    ("p | q & r", Or(Prop("p"), And(Prop("q"), Prop("r")))),
    ("p -> q -> r", Implies(Prop("p"), Implies(Prop("q"), Prop("r")))),
    ("p <-> q -> r", Iff(Prop("p"), Implies(Prop("q"), Prop("r")))),
    ("~<m>p", Not(Loc("m", Prop("p")))),
    ("<m>~p & q", And(Loc("m", Not(Prop("p"))), Prop("q"))),
    ("[n](p -> q)", Box("n", Implies(Prop("p"), Prop("q")))),
    ("<m><n>false", Loc("m", Loc("n", FalseF()))),
])
def test_precedence(text, expected):
    assert parse_dsl(text) == expected


def test_temporal_shapes():
    f = parse_temporal("<m>p leads_to <n>q | r")
    assert isinstance(f, LeadsTo)
    assert f.right == Or(Loc("n", Prop("q")), Prop("r"))
    assert isinstance(parse_temporal("p unless q"), Unless)
    assert isinstance(parse_temporal("init p & q"), Init)
    assert isinstance(parse_temporal("stable <m>p"), Stable)
    assert isinstance(parse_temporal("p -> q"), Plain)


@pytest.mark.parametrize("text, col", [
    ("p & (q", 7),
    ("p &", 4),
    ("p $ q", 3),
    ("(p leads_to q) leads_to r", 4),
    ("p leads_to q leads_to r", 14),
])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(ParseError) as exc:
        parse_temporal(text)
    assert f"col {col}" in str(exc.value)


def test_undeclared_component():
    with pytest.raises(ParseError, match="undeclared component 'x'"):
        parse_dsl("<x>p", ["m", "n"])
    assert parse_dsl("<x>p") == Loc("x", Prop("p"))


@given(dsl_formulas())
def test_render_roundtrip(f):
    assert parse_dsl(render(f)) == f
    assert parse_dsl(render(f, sugar=False)) == f


@given(dsl_formulas())
def test_desugar_is_core_and_idempotent(f):
    core = desugar(f)
    assert desugar(core) == core
    text = render(core)
    for op in ("|", "->", "<->", "[", "true"):
        assert op not in text


def test_desugar_boxes_and_stable():
    assert desugar(parse_dsl("[m]p")) == Not(Loc("m", Not(Prop("p"))))
    s = desugar(parse_temporal("stable <m>p"))
    assert isinstance(s, Unless) and s.right == FalseF()


def test_tautologies():
    assert is_tautology(parse_dsl("p | ~p"))
    assert is_tautology(parse_dsl("<m>p -> <m>p | q"))
    assert is_tautology(parse_dsl("(p -> q) -> (~q -> ~p)"))
    assert not is_tautology(parse_dsl("<m>p -> <m>(p | q)"))   # modal, not propositional
    assert not is_tautology(parse_dsl("p -> q"))


def test_atoms_and_symbols():
    f = parse_dsl("<m>p & q -> <m>p | <n>(r & q)")
    assert atoms(f) == [Loc("m", Prop("p")), Prop("q"), Loc("n", And(Prop("r"), Prop("q")))]
    assert components_of(f) == {"m", "n"}
    assert props_of(f) == {"p", "q", "r"}


def test_substitute_formulas_and_components():
    f = parse_temporal("<m>F leads_to G")
    g = substitute(f, {"F": parse_dsl("p & q"), "G": parse_dsl("<n>r")}, {"m": "o"})
    assert render(g) == "<o> (p & q) leads_to <n> r"
