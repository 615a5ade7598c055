"""Line-by-line proof checking.

Every line is checked against its justification only: a tautology test, an
axiom or rule schema matched against the cited lines, or a previously checked
lemma used as a derived rule.  A lemma's ``hyp`` lines become the premises of
that derived rule and its last line is the conclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..computation import DEFAULT_CAP, Computation
from ..errors import DstlError, ProofError
from ..formula import (DslFormula, components_of, is_tautology, props_of, render, substitute)
from .catalog import CATALOG, DSL, DSTL, Schema
from .match import Matcher, MatchFailure, normal
from .script import AXIOM, HYP, LEMMA, RULE, TAUT, ProofScript, parse_argument


@dataclass(frozen=True)
class Lemma:
    name: str
    comps: tuple
    formulas: tuple
    premises: tuple            # normal forms
    premise_levels: tuple
    conclusion: object
    level: str
    script: ProofScript = field(compare=False, repr=False)

    def describe(self) -> str:
        prem = ", ".join(render(p) for p in self.premises)
        return f"{self.name}: {prem + ' ' if prem else ''}|- {render(self.conclusion)}"


class LemmaLibrary:
    """Append-only mapping from lemma name to checked lemma."""

    def __init__(self):
        self._lemmas: dict[str, Lemma] = {}

    def __contains__(self, name) -> bool:
        return name in self._lemmas

    def __len__(self) -> int:
        return len(self._lemmas)

    def __iter__(self):
        return iter(self._lemmas.values())

    def get(self, name: str) -> Lemma:
        try:
            return self._lemmas[name]
        except KeyError:
            raise ProofError(f"lemma {name!r} is not in the library (unchecked lemma)") from None

    def names(self) -> list[str]:
        return list(self._lemmas)

    def _add(self, lemma: Lemma):
        if lemma.name in self._lemmas or lemma.name in CATALOG:
            raise ProofError(f"duplicate lemma name {lemma.name!r}")
        self._lemmas[lemma.name] = lemma


@dataclass
class CheckedLine:
    index: int
    level: str
    formula: object             # normal form


@dataclass
class ProofResult:
    name: str
    ok: bool
    lines: list = field(default_factory=list)
    error: Optional[ProofError] = None
    failed_line: Optional[int] = None

    @property
    def theorem(self):
        return self.lines[-1].formula if self.ok and self.lines else None

    def __bool__(self):
        return self.ok


_PATTERN_CACHE: dict = {}


def _normal_pattern(schema: Schema):
    key = schema.name
    if key not in _PATTERN_CACHE:
        _PATTERN_CACHE[key] = (tuple(normal(p) for p in schema.premise_patterns),
                               normal(schema.conclusion_pattern))
    return _PATTERN_CACHE[key]


def _bind_args(just, comps, formulas, components):
    """Explicit instantiation tokens -> (formula bindings, component bindings)."""
    params = list(comps) + list(formulas)
    if len(just.args) > len(params):
        raise ProofError(f"{just.name} takes at most {len(params)} arguments, got {len(just.args)}")
    pairs = list(zip(params, just.args)) + list(just.named)
    fb, cb = {}, {}
    for param, text in pairs:
        if param in comps:
            if not text.isidentifier():
                raise ProofError(f"component argument {param} must be a name, got {text!r}")
            if components is not None and text not in components:
                raise ProofError(f"undeclared component {text!r}")
            if cb.setdefault(param, text) != text:
                raise ProofError(f"component parameter {param} given twice")
        elif param in formulas:
            fb[param] = normal(parse_argument(text, components))
        else:
            raise ProofError(f"{just.name} has no parameter {param!r}")
    return fb, cb


def _instantiate(pattern, fb, cb):
    return normal(substitute(pattern, fb, cb))


def _apply(name, comps, formulas, premises, conclusion, cited, target, just, components,
           distinct=(), injective=False):
    fb, cb = _bind_args(just, comps, formulas, components)
    m = Matcher(comps, formulas, fb, cb)
    try:
        for k, (pat, (idx, f)) in enumerate(zip(premises, cited), 1):
            try:
                m.any(pat, f)
            except MatchFailure as e:
                raise MatchFailure(f"premise {k} (line {idx}) does not match "
                                   f"'{render(pat)}': {e}") from None
        try:
            m.any(conclusion, target)
        except MatchFailure as e:
            raise MatchFailure(f"conclusion does not match '{render(conclusion)}': {e}") from None
    except MatchFailure as e:
        raise ProofError(f"schema mismatch in {name}: {e}") from None
    missing = [v for v in list(comps) + list(formulas)
               if v not in m.comps and v not in m.formulas]
    if missing:
        raise ProofError(f"{name}: parameters {', '.join(missing)} are not determined")
    for a, b in distinct:
        if m.comps[a] == m.comps[b]:
            raise ProofError(f"{name} requires {a} != {b}, both are {m.comps[a]}")
    if injective and len(set(m.comps.values())) < len(m.comps):
        raise ProofError(f"{name}: component parameters must be instantiated with distinct components")
    for pat, (idx, f) in zip(premises, cited):
        if _instantiate(pat, m.formulas, m.comps) != f:
            raise ProofError(f"schema mismatch in {name}: premise line {idx} is not an instance")
    expected = _instantiate(conclusion, m.formulas, m.comps)
    if expected != target:
        raise ProofError(f"schema mismatch in {name}: expected {render(expected)}, found {render(target)}")


def _check_line(script: ProofScript, line, checked: list, lib: LemmaLibrary) -> CheckedLine:
    just = line.justification
    f = normal(line.formula)
    is_dsl = isinstance(f, DslFormula)
    k = line.index
    components = script.components

    def cited_lines(n_expected, what):
        if len(just.citations) != n_expected:
            raise ProofError(f"{what} needs {n_expected} premise line(s), {len(just.citations)} cited")
        out = []
        for c in just.citations:
            if not 1 <= c < k:
                raise ProofError(f"forward citation: line {k} cites line {c}")
            out.append(checked[c - 1])
        return out

    if just.kind == HYP:
        level = line.declared_level or (DSL if is_dsl else DSTL)
    elif just.kind == TAUT:
        if not is_dsl:
            raise ProofError("taut applies to DSL formulas only")
        try:
            ok = is_tautology(f)
        except ValueError as e:
            raise ProofError(str(e)) from None
        if not ok:
            raise ProofError(f"not a propositional tautology: {render(f)}")
        level = DSL
    elif just.kind in (AXIOM, RULE):
        schema = CATALOG.get(just.name)
        if schema is None:
            raise ProofError(f"unknown rule or axiom {just.name!r}")
        if just.kind == AXIOM and not schema.is_axiom:
            raise ProofError(f"{just.name} is a rule, not an axiom")
        cited = cited_lines(len(schema.premises), just.name)
        levels = [c.level for c in cited]
        if schema.premise_level != "any":
            for c in cited:
                if c.level != schema.premise_level:
                    raise ProofError(f"level violation: {just.name} needs {schema.premise_level} premises, "
                                     f"line {c.index} is {c.level}")
        if schema.level == "poly":
            level = DSTL if DSTL in levels else DSL
        else:
            level = schema.level
        prem, concl = _normal_pattern(schema)
        _apply(schema.name, schema.comps, schema.formulas, prem, concl,
               [(c.index, c.formula) for c in cited], f, just, components, schema.distinct)
    elif just.kind == LEMMA:
        lemma = lib.get(just.name)
        cited = cited_lines(len(lemma.premises), f"lemma {lemma.name}")
        for c, want in zip(cited, lemma.premise_levels):
            if c.level != want:
                raise ProofError(f"level violation: lemma {lemma.name} needs a {want} premise, "
                                 f"line {c.index} is {c.level}")
        level = lemma.level
        _apply(lemma.name, lemma.comps, lemma.formulas, lemma.premises, lemma.conclusion,
               [(c.index, c.formula) for c in cited], f, just, components, injective=True)
    else:  # pragma: no cover - parser guarantees the kind
        raise ProofError(f"unknown justification {just.kind!r}")

    if level == DSL and not is_dsl:
        raise ProofError("level violation: a temporal formula cannot be a DSL line")
    if line.declared_level and line.declared_level != level:
        raise ProofError(f"level violation: line is marked {line.declared_level} but {just.kind} "
                         f"yields a {level} line")
    return CheckedLine(k, level, f)


BUNDLED_LEMMAS = "lemmas.proofs"


def check_proof(script: ProofScript, lib: Optional[LemmaLibrary] = None) -> ProofResult:
    lib = lib if lib is not None else LemmaLibrary()
    checked: list[CheckedLine] = []
    for line in script.lines:
        try:
            checked.append(_check_line(script, line, checked, lib))
        except ProofError as e:
            err = ProofError(e.message, line=line.index, script=script.name)
            err.source_line = line.source_line
            return ProofResult(script.name, False, checked, err, line.index)
        except DstlError as e:
            err = ProofError(str(e), line=line.index, script=script.name)
            err.source_line = line.source_line
            return ProofResult(script.name, False, checked, err, line.index)
    return ProofResult(script.name, True, checked)


def _lemma_params(script: ProofScript):
    if script.comp_params is not None or script.formula_params is not None:
        return tuple(script.comp_params or ()), tuple(script.formula_params or ())
    comps, props = set(), set()
    for line in script.lines:
        comps |= components_of(line.formula)
        props |= props_of(line.formula)
    return tuple(sorted(comps)), tuple(sorted(props))


def register_lemma(name: str, script: ProofScript, lib: LemmaLibrary) -> LemmaLibrary:
    """Check ``script`` and make it citable as ``name``; returns the library."""
    if name in lib or name in CATALOG:
        raise ProofError(f"duplicate lemma name {name!r}", script=name)
    result = check_proof(script, lib)
    if not result.ok:
        raise result.error
    comps, formulas = _lemma_params(script)
    hyps = [(c, ln) for c, ln in zip(result.lines, script.lines) if ln.justification.kind == HYP]
    last = result.lines[-1]
    lib._add(Lemma(name, comps, formulas,
                   premises=tuple(c.formula for c, _ in hyps),
                   premise_levels=tuple(c.level for c, _ in hyps),
                   conclusion=last.formula, level=last.level, script=script))
    return lib


def bundled_library(exclude=()) -> LemmaLibrary:
    """The shipped derived lemmas, checked and registered; names in ``exclude`` are skipped."""
    from ..examples import data_text
    from .script import parse_proofs

    lib = LemmaLibrary()
    scripts = [s for s in parse_proofs(data_text(BUNDLED_LEMMAS), BUNDLED_LEMMAS)
               if s.name not in exclude]
    for r in check_file(scripts, lib):
        # lemmas built on an excluded name drop out with it
        if not r.ok and not exclude:  # pragma: no cover - the shipped corpus is tested
            raise r.error
    return lib


def check_file(scripts, lib: Optional[LemmaLibrary] = None, register: bool = True) -> list[ProofResult]:
    """Check scripts in order, registering each checked one as a lemma."""
    lib = lib if lib is not None else LemmaLibrary()
    out = []
    for s in scripts:
        r = check_proof(s, lib)
        out.append(r)
        if r.ok and register and s.name not in lib:
            register_lemma(s.name, s, lib)
    return out


# --------------------------------------------------------------------------
# Semantic cross-check
# --------------------------------------------------------------------------

@dataclass
class BridgeLine:
    index: int
    formula: str
    level: str
    hypothesis: bool
    holds: bool


@dataclass
class BridgeReport:
    name: str
    lines: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(l.holds for l in self.lines if l.hypothesis)

    @property
    def kernel_bugs(self) -> list:
        """Derived lines that fail although every hypothesis holds."""
        if not self.hypotheses_hold:
            return []
        return [l for l in self.lines if not l.hypothesis and not l.holds]

    @property
    def ok(self) -> bool:
        return self.hypotheses_hold and not self.kernel_bugs


def soundness_bridge(c: Computation, script: ProofScript, lib: Optional[LemmaLibrary] = None,
                     cap: int = DEFAULT_CAP) -> BridgeReport:
    """Evaluate every line of a checked script on ``c``."""
    from ..checker import check

    result = check_proof(script, lib)
    if not result.ok:
        raise result.error
    report = BridgeReport(script.name)
    for line, cl in zip(script.lines, result.lines):
        v = check(c, cl.formula, cap)
        report.lines.append(BridgeLine(line.index, render(cl.formula), cl.level,
                                       line.justification.kind == HYP, v.holds))
    return report
