"""Formula syntax for distributed-state formulae and their temporal layer.

    parse_dsl(text)        -> DslFormula
    parse_temporal(text)   -> TemporalFormula
    render(f)              -> str
    desugar(f)             -> f using only Prop/FalseF/Not/And/Loc
    is_tautology(f)        -> bool, with located subformulae as opaque atoms

Precedence, tightest first: ``~``, ``<m>``/``[m]``, ``&``, ``|``, ``->``,
``<->``; temporal operators bind loosest and never nest.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import ClassVar, Iterable, Iterator, Optional, Union

from .errors import ParseError

__all__ = [
    "DslFormula", "Prop", "FalseF", "TrueF", "Not", "And", "Or", "Implies",
    "Iff", "Loc", "Box",
    "TemporalFormula", "Plain", "LeadsTo", "Because", "LeadsToC", "BecauseC",
    "Unless", "Init", "Stable",
    "parse_dsl", "parse_temporal", "render", "desugar", "is_tautology",
    "atoms", "components_of", "props_of", "substitute", "TAUTOLOGY_ATOM_LIMIT",
]

TAUTOLOGY_ATOM_LIMIT = 20

KEYWORDS = frozenset({
    "true", "false", "leads_to", "because", "leads_to_c", "because_c",
    "unless", "init", "stable",
})


# --------------------------------------------------------------------------
# DSL layer
# --------------------------------------------------------------------------

class DslFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Prop(DslFormula):
    name: str

    def __repr__(self):
        return f"Prop({self.name!r})"


@dataclass(frozen=True, repr=False)
class FalseF(DslFormula):
    def __repr__(self):
        return "FalseF()"


@dataclass(frozen=True, repr=False)
class TrueF(DslFormula):
    def __repr__(self):
        return "TrueF()"


@dataclass(frozen=True)
class Not(DslFormula):
    arg: DslFormula


@dataclass(frozen=True)
class And(DslFormula):
    left: DslFormula
    right: DslFormula


@dataclass(frozen=True)
class Or(DslFormula):
    left: DslFormula
    right: DslFormula


@dataclass(frozen=True)
class Implies(DslFormula):
    left: DslFormula
    right: DslFormula


@dataclass(frozen=True)
class Iff(DslFormula):
    left: DslFormula
    right: DslFormula


@dataclass(frozen=True)
class Loc(DslFormula):
    """``<c> F``: some state of component ``c`` in the distributed state satisfies F."""
    comp: str
    arg: DslFormula


@dataclass(frozen=True)
class Box(DslFormula):
    """``[c] F``: every state of component ``c`` in the distributed state satisfies F."""
    comp: str
    arg: DslFormula


# --------------------------------------------------------------------------
# Temporal layer
# --------------------------------------------------------------------------

class TemporalFormula:
    __slots__ = ()
    keyword: ClassVar[str] = ""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Plain(TemporalFormula):
    formula: DslFormula


@dataclass(frozen=True)
class _Binary(TemporalFormula):
    left: DslFormula
    right: DslFormula


class LeadsTo(_Binary):
    keyword = "leads_to"


class Because(_Binary):
    keyword = "because"


class LeadsToC(_Binary):
    keyword = "leads_to_c"


class BecauseC(_Binary):
    keyword = "because_c"


class Unless(_Binary):
    keyword = "unless"


@dataclass(frozen=True)
class Init(TemporalFormula):
    formula: DslFormula
    keyword = "init"


@dataclass(frozen=True)
class Stable(TemporalFormula):
    formula: DslFormula
    keyword = "stable"


BINARY_TEMPORAL = {cls.keyword: cls for cls in (LeadsTo, Because, LeadsToC, BecauseC, Unless)}

AnyFormula = Union[DslFormula, TemporalFormula]


# --------------------------------------------------------------------------
# Lexer
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<loc><\s*(?P<locname>[A-Za-z][A-Za-z0-9_]*)\s*>)
  | (?P<box>\[\s*(?P<boxname>[A-Za-z][A-Za-z0-9_]*)\s*\])
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[~&|()])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str      # 'ident', 'kw', 'loc', 'box', or the literal operator
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind == "locname":
            kind = "loc"
        elif kind == "boxname":
            kind = "box"
        if kind == "ws":
            pass
        elif kind == "loc":
            toks.append(_Tok("loc", m.group("locname"), pos))
        elif kind == "box":
            toks.append(_Tok("box", m.group("boxname"), pos))
        elif kind == "ident":
            word = m.group("ident")
            toks.append(_Tok("kw" if word in KEYWORDS else "ident", word, pos))
        elif kind == "iff":
            toks.append(_Tok("<->", "<->", pos))
        elif kind == "imp":
            toks.append(_Tok("->", "->", pos))
        else:
            toks.append(_Tok(m.group("op"), m.group("op"), pos))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, components: Optional[Iterable[str]]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.components = None if components is None else frozenset(components)

    # helpers
    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str, tok: Optional[_Tok] = None):
        pos = tok.pos if tok is not None else len(self.text)
        raise ParseError(msg, self.text, pos)

    def take(self, kind: str, value: Optional[str] = None) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind or (value is not None and tok.value != value):
            want = value or kind
            got = "end of input" if tok is None else repr(tok.value)
            self.error(f"expected {want!r}, got {got}", tok)
        self.i += 1
        return tok

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (value is None or tok.value == value)

    def check_component(self, tok: _Tok):
        if self.components is not None and tok.value not in self.components:
            self.error(f"undeclared component {tok.value!r}", tok)

    def done(self):
        tok = self.peek()
        if tok is not None:
            if tok.kind == "kw" and tok.value in BINARY_TEMPORAL:
                self.error("temporal operator nested inside a temporal operand", tok)
            self.error(f"unexpected token {tok.value!r}", tok)

    # grammar
    def temporal(self) -> TemporalFormula:
        if self.at("kw", "init"):
            self.i += 1
            return Init(self.operand())
        if self.at("kw", "stable"):
            self.i += 1
            return Stable(self.operand())
        left = self.operand()
        tok = self.peek()
        if tok is not None and tok.kind == "kw" and tok.value in BINARY_TEMPORAL:
            self.i += 1
            right = self.operand()
            return BINARY_TEMPORAL[tok.value](left, right)
        return Plain(left)

    def operand(self) -> DslFormula:
        tok = self.peek()
        if tok is not None and tok.kind == "kw" and tok.value not in ("true", "false"):
            self.error("temporal operator nested inside a temporal operand", tok)
        f = self.iff()
        tok = self.peek()
        if tok is not None and tok.kind == "kw" and tok.value in ("init", "stable"):
            self.error("temporal operator nested inside a temporal operand", tok)
        return f

    def iff(self) -> DslFormula:
        f = self.imp()
        while self.at("<->"):
            self.i += 1
            f = Iff(f, self.imp())
        return f

    def imp(self) -> DslFormula:
        f = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(f, self.imp())
        return f

    def disj(self) -> DslFormula:
        f = self.conj()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> DslFormula:
        f = self.unary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> DslFormula:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok.kind == "~":
            self.i += 1
            return Not(self.unary())
        if tok.kind == "loc":
            self.i += 1
            self.check_component(tok)
            return Loc(tok.value, self.unary())
        if tok.kind == "box":
            self.i += 1
            self.check_component(tok)
            return Box(tok.value, self.unary())
        return self.atom()

    def atom(self) -> DslFormula:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok.kind == "kw" and tok.value == "true":
            self.i += 1
            return TrueF()
        if tok.kind == "kw" and tok.value == "false":
            self.i += 1
            return FalseF()
        if tok.kind == "ident":
            self.i += 1
            return Prop(tok.value)
        if tok.kind == "(":
            self.i += 1
            f = self.iff()
            if self.at("kw") and self.peek().value in KEYWORDS - {"true", "false"}:
                self.error("temporal operator nested inside a temporal operand", self.peek())
            self.take(")")
            return f
        if tok.kind == "kw":
            self.error("temporal operator nested inside a temporal operand", tok)
        self.error(f"unexpected token {tok.value!r}", tok)


def parse_dsl(text: str, components: Optional[Iterable[str]] = None) -> DslFormula:
    """Parse a DSL formula; ``components`` restricts the location names."""
    p = _Parser(text, components)
    if p.peek() is None:
        p.error("empty formula")
    f = p.operand()
    p.done()
    return f


def parse_temporal(text: str, components: Optional[Iterable[str]] = None) -> TemporalFormula:
    p = _Parser(text, components)
    if p.peek() is None:
        p.error("empty formula")
    f = p.temporal()
    p.done()
    return f


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

# binding strength; higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_UNARY = 5


def _prec(f: DslFormula) -> int:
    return _PREC.get(type(f), _UNARY)


def _render_dsl(f: DslFormula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Not):
        return "~" + _wrap(f.arg, _UNARY)
    if isinstance(f, Loc):
        return f"<{f.comp}> " + _wrap(f.arg, _UNARY)
    if isinstance(f, Box):
        return f"[{f.comp}] " + _wrap(f.arg, _UNARY)
    cls = type(f)
    p = _PREC[cls]
    if cls is Implies:
        # right associative
        left, right = _wrap(f.left, p + 1), _wrap(f.right, p)
    else:
        left, right = _wrap(f.left, p), _wrap(f.right, p + 1)
    return f"{left} {_SYM[cls]} {right}"


def _wrap(f: DslFormula, need: int) -> str:
    s = _render_dsl(f)
    return s if _prec(f) >= need else f"({s})"


def render(f: AnyFormula, sugar: bool = True) -> str:
    """Concrete syntax for ``f``; with ``sugar=False`` stable prints as ``unless false``."""
    if isinstance(f, DslFormula):
        return _render_dsl(f)
    if isinstance(f, Plain):
        return _render_dsl(f.formula)
    if isinstance(f, Stable):
        if sugar:
            return "stable " + _render_dsl(f.formula)
        return render(Unless(f.formula, FalseF()))
    if isinstance(f, Init):
        return "init " + _render_dsl(f.formula)
    if isinstance(f, _Binary):
        return f"{_render_dsl(f.left)} {f.keyword} {_render_dsl(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# Desugaring
# --------------------------------------------------------------------------

def _desugar_dsl(f: DslFormula) -> DslFormula:
    if isinstance(f, (Prop, FalseF)):
        return f
    if isinstance(f, TrueF):
        return Not(FalseF())
    if isinstance(f, Not):
        return Not(_desugar_dsl(f.arg))
    if isinstance(f, And):
        return And(_desugar_dsl(f.left), _desugar_dsl(f.right))
    if isinstance(f, Loc):
        return Loc(f.comp, _desugar_dsl(f.arg))
    if isinstance(f, Box):
        return Not(Loc(f.comp, Not(_desugar_dsl(f.arg))))
    if isinstance(f, Or):
        return Not(And(Not(_desugar_dsl(f.left)), Not(_desugar_dsl(f.right))))
    if isinstance(f, Implies):
        return Not(And(_desugar_dsl(f.left), Not(_desugar_dsl(f.right))))
    if isinstance(f, Iff):
        a, b = _desugar_dsl(f.left), _desugar_dsl(f.right)
        return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
    raise TypeError(f"not a DSL formula: {f!r}")


def desugar(f: AnyFormula) -> AnyFormula:
    if isinstance(f, DslFormula):
        return _desugar_dsl(f)
    if isinstance(f, Plain):
        return Plain(_desugar_dsl(f.formula))
    if isinstance(f, Stable):
        return Unless(_desugar_dsl(f.formula), FalseF())
    if isinstance(f, Init):
        return Init(_desugar_dsl(f.formula))
    if isinstance(f, _Binary):
        return type(f)(_desugar_dsl(f.left), _desugar_dsl(f.right))
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# Traversals
# --------------------------------------------------------------------------

def _children(f: DslFormula) -> tuple:
    if isinstance(f, (Not, Loc, Box)):
        return (f.arg,)
    if isinstance(f, (And, Or, Implies, Iff)):
        return (f.left, f.right)
    return ()


def _walk(f: DslFormula) -> Iterator[DslFormula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(_children(g))


def dsl_parts(f: AnyFormula) -> tuple:
    """The DSL operands of a formula of either layer."""
    if isinstance(f, DslFormula):
        return (f,)
    if isinstance(f, (Plain, Init, Stable)):
        return (f.formula,)
    return (f.left, f.right)


def components_of(f: AnyFormula) -> set[str]:
    return {g.comp for part in dsl_parts(f) for g in _walk(part) if isinstance(g, (Loc, Box))}


def props_of(f: AnyFormula) -> set[str]:
    return {g.name for part in dsl_parts(f) for g in _walk(part) if isinstance(g, Prop)}


def substitute(f: AnyFormula, formulas: dict, comps: dict) -> AnyFormula:
    """Replace propositions by formulas and component names by component names."""
    def sub(g: DslFormula) -> DslFormula:
        if isinstance(g, Prop):
            return formulas.get(g.name, g)
        if isinstance(g, (FalseF, TrueF)):
            return g
        if isinstance(g, (Loc, Box)):
            return type(g)(comps.get(g.comp, g.comp), sub(g.arg))
        if isinstance(g, Not):
            return Not(sub(g.arg))
        return type(g)(sub(g.left), sub(g.right))

    if isinstance(f, DslFormula):
        return sub(f)
    if isinstance(f, (Plain, Init, Stable)):
        return type(f)(sub(f.formula))
    return type(f)(sub(f.left), sub(f.right))


# --------------------------------------------------------------------------
# Propositional tautologies
# --------------------------------------------------------------------------

def atoms(f: DslFormula) -> list[DslFormula]:
    """Opaque atoms of ``desugar(f)``: propositions and maximal located subformulae."""
    out: dict = {}

    def go(g):
        if isinstance(g, (Prop, Loc)):
            out.setdefault(g, None)
        elif isinstance(g, Not):
            go(g.arg)
        elif isinstance(g, And):
            go(g.left)
            go(g.right)

    go(_desugar_dsl(f))
    return list(out)


def _truth(g: DslFormula, env: dict) -> bool:
    if isinstance(g, FalseF):
        return False
    if isinstance(g, Not):
        return not _truth(g.arg, env)
    if isinstance(g, And):
        return _truth(g.left, env) and _truth(g.right, env)
    return env[g]


def is_tautology(f: DslFormula, limit: int = TAUTOLOGY_ATOM_LIMIT) -> bool:
    core = _desugar_dsl(f)
    atom_list = atoms(core)
    if len(atom_list) > limit:
        raise ValueError(f"{len(atom_list)} atoms exceeds the tautology limit of {limit}")
    for values in itertools.product((False, True), repeat=len(atom_list)):
        if not _truth(core, dict(zip(atom_list, values))):
            return False
    return True
