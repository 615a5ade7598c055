"""Axiom schemata and inference rules.

Schemata are written in the concrete syntax.  Formula metavariables are the
propositions listed in ``formulas``; component metavariables are the names
listed in ``comps``.  ``level`` is the level of the conclusion and
``premise_level`` the level every premise must have ("any" for MP).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..formula import parse_temporal

DSL = "DSL"
DSTL = "DSTL"


@dataclass(frozen=True)
class Schema:
    name: str
    comps: tuple
    formulas: tuple
    premises: tuple
    conclusion: str
    level: str = DSTL
    premise_level: str = DSTL
    distinct: tuple = ()          # pairs of component metavariables that must differ
    sound: bool = True
    note: str = ""

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @cached_property
    def premise_patterns(self) -> tuple:
        return tuple(parse_temporal(p) for p in self.premises)

    @cached_property
    def conclusion_pattern(self):
        return parse_temporal(self.conclusion)

    def describe(self) -> str:
        prem = ", ".join(self.premises)
        side = f"  ({', '.join(f'{a} != {b}' for a, b in self.distinct)})" if self.distinct else ""
        return f"{self.name}: {prem + ' ' if prem else ''}|- {self.conclusion}{side}"


def _s(name, premises, conclusion, comps=(), formulas=("F",), **kw) -> Schema:
    return Schema(name, tuple(comps), tuple(formulas), tuple(premises), conclusion, **kw)


_OPS = {"L": "leads_to", "B": "because", "Lc": "leads_to_c", "Bc": "because_c"}


def _families():
    out = []
    for tag, op in _OPS.items():
        out.append(_s(f"{tag}SW", ["G -> F", f"F {op} F1", "F1 -> G1"], f"G {op} G1",
                      formulas=("F", "F1", "G", "G1")))
        out.append(_s(f"{tag}PD", [f"F {op} G", f"F1 {op} G"], f"F | F1 {op} G",
                      formulas=("F", "F1", "G")))
        out.append(_s(f"{tag}CC", [f"G {op} F", f"G {op} F1"], f"G {op} F & F1",
                      formulas=("F", "F1", "G")))
    return out


_RULES = [
    # distributed-state logic
    _s("K", [], "[m](F -> F1) -> ([m]F -> [m]F1)", comps=("m",), formulas=("F", "F1"), level=DSL),
    _s("DSL1", [], "[m]([m]F <-> F)", comps=("m",), level=DSL),
    _s("DSL2", [], "[m][n]false", comps=("m", "n"), formulas=(), level=DSL, distinct=(("m", "n"),)),
    _s("MP", ["F", "F -> G"], "G", formulas=("F", "G"), level="poly", premise_level="any"),
    _s("Nec", ["F"], "[m]F", comps=("m",), level=DSL, premise_level=DSL),
    _s("LIFT", ["F"], "F", premise_level=DSL),
    # operator introduction and elimination
    _s("LcI", [], "F leads_to_c F"),
    _s("BcI", [], "F because_c F"),
    _s("LI", ["F leads_to_c G"], "F leads_to G", formulas=("F", "G")),
    _s("BI", ["F because_c G"], "F because G", formulas=("F", "G")),
    _s("UI", [], "F unless F"),
    _s("InI", ["F"], "init F"),
    _s("SI", ["F"], "stable F"),
    _s("SE", ["init <m>F", "stable <m>F"], "[m]F", comps=("m",)),
    # transitivity
    _s("LTR", ["F leads_to F1", "F1 leads_to G"], "F leads_to G", formulas=("F", "F1", "G")),
    _s("BTR", ["F because F1", "F1 because G"], "F because G", formulas=("F", "F1", "G")),
    _s("UC", ["<m>F unless <m>F1", "<m>F1 unless <m>G"], "<m>F | <m>F1 unless <m>G",
       comps=("m",), formulas=("F", "F1", "G")),
    *_families(),
    _s("UCW", ["F unless F1", "F1 -> G"], "F unless G", formulas=("F", "F1", "G")),
    _s("UD", ["F unless F1", "G unless G1"], "F | G unless F1 | G1", formulas=("F", "F1", "G", "G1")),
    _s("IW", ["init F", "F -> G"], "init G", formulas=("F", "G")),
    _s("Notif", ["F because G", "G leads_to <m>G1", "stable <m>G1"], "F & <m>true leads_to <m>G1",
       comps=("m",), formulas=("F", "G", "G1")),
    _s("Conf", ["stable <m>F", "stable <m>F1"], "<m>F & <m>F1 -> <m>(F & F1)",
       comps=("m",), formulas=("F", "F1")),
    _s("I1", [], "init <m>true", comps=("m",), formulas=()),
    _s("I2", ["init <m>F"], "init [m]F", comps=("m",)),
    _s("I3", ["init [m]F"], "init <m>F", comps=("m",)),
]

# Stated forms that do not hold in general; kept for the soundness fuzzer.
_INVALID = [
    _s("GeneralCancellation", ["F unless F1", "F1 unless G"], "F | F1 unless G",
       formulas=("F", "F1", "G"), sound=False),
    _s("BoxElim", ["[m]F", "[n]F"], "F", comps=("m", "n"), distinct=(("m", "n"),), sound=False,
       note="one [c]F premise per component of the model"),
    _s("D2Converse", [], "<m>F & <m>F1 -> <m>(F & F1)", comps=("m",), formulas=("F", "F1"),
       sound=False),
]

# "PC" is the tautology oracle, not a schema; listed for completeness of names.
PC = "PC"

CATALOG: dict = {s.name: s for s in _RULES}
INVALID: dict = {s.name: s for s in _INVALID}


def catalog() -> list[Schema]:
    return list(_RULES)


def lookup(name: str) -> Schema:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown rule or axiom {name!r}") from None
