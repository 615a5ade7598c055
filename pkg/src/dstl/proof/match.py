"""First-order matching of schema patterns against formulas.

Formulas are compared in normal form: desugared, with double negations
removed.  A formula metavariable binds a whole subformula; a component
metavariable binds a component name.  There is no search: the pattern is
walked once, left to right.
"""

from __future__ import annotations

from ..formula import (And, DslFormula, FalseF, Init, Loc, Not, Plain, Prop, TemporalFormula,
                       _Binary, desugar)


def _norm_dsl(f: DslFormula) -> DslFormula:
    if isinstance(f, Not):
        inner = _norm_dsl(f.arg)
        if isinstance(inner, Not):
            return inner.arg
        return Not(inner)
    if isinstance(f, And):
        return And(_norm_dsl(f.left), _norm_dsl(f.right))
    if isinstance(f, Loc):
        return Loc(f.comp, _norm_dsl(f.arg))
    return f


def normal(f):
    """Desugared, double-negation-free form; Plain wrappers are dropped."""
    f = desugar(f)
    if isinstance(f, Plain):
        f = f.formula
    if isinstance(f, DslFormula):
        return _norm_dsl(f)
    if isinstance(f, Init):
        return Init(_norm_dsl(f.formula))
    return type(f)(_norm_dsl(f.left), _norm_dsl(f.right))


class MatchFailure(Exception):
    pass


class Matcher:
    def __init__(self, comps, formulas, bindings=None, comp_bindings=None):
        self.comp_vars = set(comps)
        self.formula_vars = set(formulas)
        self.formulas = dict(bindings or {})
        self.comps = dict(comp_bindings or {})

    def bind_comp(self, var, name):
        if var not in self.comp_vars:
            if var != name:
                raise MatchFailure(f"component {name} where {var} was expected")
            return
        old = self.comps.setdefault(var, name)
        if old != name:
            raise MatchFailure(f"component {var} bound to both {old} and {name}")

    def bind_formula(self, var, value):
        value = _norm_dsl(value)
        old = self.formulas.setdefault(var, value)
        if old != value:
            raise MatchFailure(f"metavariable {var} bound to both {old} and {value}")

    def dsl(self, pat: DslFormula, f: DslFormula):
        if isinstance(pat, Prop) and pat.name in self.formula_vars:
            self.bind_formula(pat.name, f)
            return
        if isinstance(pat, Not):
            if isinstance(f, Not):
                self.dsl(pat.arg, f.arg)
                return
            if isinstance(pat.arg, Prop) and pat.arg.name in self.formula_vars:
                self.bind_formula(pat.arg.name, Not(f))
                return
            raise MatchFailure(f"expected a negation, found {f}")
        if type(pat) is not type(f):
            raise MatchFailure(f"expected the shape of {pat}, found {f}")
        if isinstance(pat, (Prop, FalseF)):
            if pat != f:
                raise MatchFailure(f"expected {pat}, found {f}")
        elif isinstance(pat, And):
            self.dsl(pat.left, f.left)
            self.dsl(pat.right, f.right)
        elif isinstance(pat, Loc):
            self.bind_comp(pat.comp, f.comp)
            self.dsl(pat.arg, f.arg)

    def any(self, pat, f):
        """Both arguments in normal form."""
        if isinstance(pat, DslFormula) != isinstance(f, DslFormula):
            raise MatchFailure(f"expected {'a DSL' if isinstance(pat, DslFormula) else 'a temporal'} formula")
        if isinstance(pat, DslFormula):
            self.dsl(pat, f)
        elif type(pat) is not type(f):
            raise MatchFailure(f"expected {pat.keyword or 'plain'} formula, found {f.keyword or 'plain'}")
        elif isinstance(pat, Init):
            self.dsl(pat.formula, f.formula)
        elif isinstance(pat, _Binary):
            self.dsl(pat.left, f.left)
            self.dsl(pat.right, f.right)
        else:
            raise MatchFailure(f"unsupported pattern {pat!r}")
