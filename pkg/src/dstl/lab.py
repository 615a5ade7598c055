"""Random computations, rule-soundness fuzzing and the fixed counterexample corpus."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Optional

from .checker import check
from .computation import Computation, load_model
from .errors import DstlError, ModelError
from .examples import data_text
from .formula import (And, DslFormula, FalseF, Loc, Not, Or, Prop, TrueF, Box, parse_temporal,
                      render, substitute)
from .proof.catalog import CATALOG, INVALID, Schema
from .proof.match import normal


@dataclass(frozen=True)
class GenParams:
    components: tuple = (1, 3)       # inclusive range
    states: tuple = (1, 5)           # inclusive range, per component
    density: float = 0.3             # chance of a message from each state
    alphabet: int = 4
    seed: int = 0


PROPS = "pqrstuvw"
COMPS = "mnoabc"


def random_computation(p: GenParams, rng: Optional[random.Random] = None,
                       min_components: int = 1) -> Computation:
    """A valid computation drawn from ``p``; messages that would close a causal
    cycle are dropped, so every draw builds."""
    rng = rng or random.Random(p.seed)
    k = rng.randint(max(p.components[0], min_components), max(p.components[1], min_components))
    names = list(COMPS[:k])
    lengths = [rng.randint(*p.states) for _ in names]
    alphabet = PROPS[:p.alphabet]
    labels = []
    for n in lengths:
        for _ in range(n):
            labels.append(frozenset(a for a in alphabet if rng.random() < 0.5))
    offsets = [sum(lengths[:i]) for i in range(k)]
    comp_of = [i for i, n in enumerate(lengths) for _ in range(n)]
    total = sum(lengths)
    messages = []
    for src in range(total):
        if k > 1 and rng.random() < p.density:
            dst_comp = rng.choice([i for i in range(k) if i != comp_of[src]])
            dst = offsets[dst_comp] + rng.randrange(lengths[dst_comp])
            try:
                Computation(names, lengths, labels, messages + [(src, dst)])
            except ModelError:
                continue
            messages.append((src, dst))
    return Computation(names, lengths, labels, messages)


# --------------------------------------------------------------------------
# Formula instantiation
# --------------------------------------------------------------------------

def random_formula(rng: random.Random, props, comps, depth: int = 3) -> DslFormula:
    """Shallow formula biased toward located literals."""
    roll = rng.random()
    lit = lambda: Prop(rng.choice(props)) if rng.random() < 0.7 else Not(Prop(rng.choice(props)))
    if depth <= 1 or roll < 0.45:
        r = rng.random()
        if r < 0.12:
            return TrueF()
        if r < 0.18:
            return FalseF()
        if r < 0.3:
            return lit()
        if r < 0.9:
            return Loc(rng.choice(comps), lit())
        return Box(rng.choice(comps), lit())
    if roll < 0.55:
        return Not(random_formula(rng, props, comps, depth - 1))
    if roll < 0.65:
        return Loc(rng.choice(comps), random_formula(rng, props, comps, depth - 1))
    op = And if roll < 0.85 else Or
    return op(random_formula(rng, props, comps, depth - 1),
              random_formula(rng, props, comps, depth - 1))


def instantiate(schema: Schema, formulas: dict, comps: dict):
    """Premises and conclusion of ``schema`` under an instantiation."""
    prem = [substitute(p, formulas, comps) for p in schema.premise_patterns]
    concl = substitute(schema.conclusion_pattern, formulas, comps)
    return prem, concl


def _holds(c: Computation, phi) -> bool:
    return check(c, phi).holds


# --------------------------------------------------------------------------
# Fuzzing
# --------------------------------------------------------------------------

@dataclass
class Violation:
    rule: str
    seed: int
    trial: int
    model: str
    formulas: dict
    comps: dict
    premises: list
    conclusion: str
    shrunk_model: str = ""

    def to_dict(self) -> dict:
        return {"rule": self.rule, "seed": self.seed, "trial": self.trial,
                "formulas": {k: render(v) for k, v in self.formulas.items()},
                "components": dict(self.comps), "premises": self.premises,
                "conclusion": self.conclusion, "model": self.model,
                "shrunk_model": self.shrunk_model}


@dataclass
class FuzzReport:
    rule: str
    sound: bool                     # expectation from the catalog
    trials: int = 0
    non_vacuous: int = 0
    violations: list = field(default_factory=list)
    corpus_hits: list = field(default_factory=list)
    min_coverage: float = 0.05

    @property
    def coverage(self) -> float:
        return self.non_vacuous / self.trials if self.trials else 0.0

    @property
    def insufficient_coverage(self) -> bool:
        return self.coverage < self.min_coverage

    @property
    def ok(self) -> bool:
        """Sound rules: no violation and enough coverage.  Invalid rules: refuted."""
        if self.sound:
            return not self.violations and not self.insufficient_coverage
        return bool(self.violations or self.corpus_hits)

    def to_dict(self) -> dict:
        return {"rule": self.rule, "expected_sound": self.sound, "trials": self.trials,
                "non_vacuous": self.non_vacuous, "coverage": round(self.coverage, 4),
                "violations": len(self.violations),
                "insufficient_coverage": self.insufficient_coverage,
                "corpus_hits": list(self.corpus_hits), "ok": self.ok,
                "counterexamples": [v.to_dict() for v in self.violations[:3]]}


def _schema(rule: str) -> Schema:
    if rule in CATALOG:
        return CATALOG[rule]
    if rule in INVALID:
        return INVALID[rule]
    raise KeyError(f"unknown rule {rule!r}")


def _expand(schema: Schema, c: Computation, comps: dict, formulas: dict):
    """Premises/conclusion for one model; BoxElim takes one premise per component."""
    if schema.name == "BoxElim":
        f = formulas["F"]
        return [Box(x, f) for x in c.components], f
    return instantiate(schema, formulas, comps)


def _draw(schema: Schema, c: Computation, rng: random.Random):
    props = sorted(set(c.alphabet()) | {"p"})
    comps = list(c.components)
    if schema.distinct:
        chosen = rng.sample(comps, len(schema.comps))
    else:
        chosen = [rng.choice(comps) for _ in schema.comps]
    comp_map = dict(zip(schema.comps, chosen))
    formulas = {v: random_formula(rng, props, comps, rng.randint(1, 3)) for v in schema.formulas}
    return comp_map, formulas


def run_trial(schema: Schema, c: Computation, rng: random.Random, draws: int):
    """Up to ``draws`` instantiations; stops at the first that satisfies every
    premise.  Returns (non_vacuous, violating instantiation or None)."""
    for _ in range(draws):
        comp_map, formulas = _draw(schema, c, rng)
        prem, concl = _expand(schema, c, comp_map, formulas)
        if all(_holds(c, p) for p in prem):
            if _holds(c, concl):
                return True, None
            return True, (comp_map, formulas, prem, concl)
    return False, None


DEFAULT_DRAWS = 40


def fuzz_rule(rule: str, trials: int = 500, p: GenParams = GenParams(), draws: int = DEFAULT_DRAWS,
              shrink_violations: bool = True, max_violations: int = 5) -> FuzzReport:
    schema = _schema(rule)
    report = FuzzReport(rule, schema.sound)
    need = 2 if schema.distinct else 1
    for t in range(trials):
        rng = random.Random(f"{p.seed}:{rule}:{t}")
        c = random_computation(p, rng, min_components=need)
        hit, bad = run_trial(schema, c, rng, draws)
        report.trials += 1
        report.non_vacuous += hit
        if bad is not None and len(report.violations) < max_violations:
            comp_map, formulas, prem, concl = bad
            v = Violation(rule, p.seed, t, c.to_text(), formulas, comp_map,
                          [render(x) for x in prem], render(concl))
            if shrink_violations:
                v.shrunk_model = shrink(c, schema, comp_map, formulas).to_text()
            report.violations.append(v)
    if not schema.sound:
        report.corpus_hits = corpus_hits(rule)
    return report


def _fails(c: Computation, schema: Schema, comp_map, formulas) -> bool:
    if any(x not in c.components for x in comp_map.values()):
        return False
    try:
        prem, concl = _expand(schema, c, comp_map, formulas)
        return all(_holds(c, x) for x in prem) and not _holds(c, concl)
    except DstlError:
        return False


def shrink(c: Computation, schema: Schema, comp_map: dict, formulas: dict) -> Computation:
    """Greedy deletion of states, labels, messages and components while the
    instantiation keeps failing."""
    names, lengths = list(c.components), list(c.lengths)
    labels = [set(x) for x in c.labels]
    messages = list(c.messages)

    def build_from(names, lengths, labels, messages):
        try:
            return Computation(names, lengths, [frozenset(x) for x in labels], messages)
        except (ModelError, ValueError):
            return None

    def attempt(cand):
        return cand is not None and _fails(cand, schema, comp_map, formulas)

    changed = True
    while changed:
        changed = False
        # drop a message
        for k in range(len(messages)):
            cand = build_from(names, lengths, labels, messages[:k] + messages[k + 1:])
            if attempt(cand):
                messages = messages[:k] + messages[k + 1:]
                changed = True
                break
        if changed:
            continue
        # drop a state (renumbering everything after it)
        for g in range(sum(lengths)):
            ci = max(i for i in range(len(names)) if sum(lengths[:i]) <= g)
            if lengths[ci] == 1:
                continue
            remap = lambda x: x if x < g else x - 1
            msgs = [(remap(a), remap(b)) for a, b in messages if g not in (a, b)]
            new_lengths = lengths[:ci] + [lengths[ci] - 1] + lengths[ci + 1:]
            cand = build_from(names, new_lengths, labels[:g] + labels[g + 1:], msgs)
            if attempt(cand):
                lengths, labels, messages = new_lengths, labels[:g] + labels[g + 1:], msgs
                changed = True
                break
        if changed:
            continue
        # drop a whole component
        for ci in range(len(names)):
            if len(names) == 1:
                break
            lo, hi = sum(lengths[:ci]), sum(lengths[:ci + 1])
            width = hi - lo
            remap = lambda x: x if x < lo else x - width
            msgs = [(remap(a), remap(b)) for a, b in messages
                    if not (lo <= a < hi or lo <= b < hi)]
            cand = build_from(names[:ci] + names[ci + 1:], lengths[:ci] + lengths[ci + 1:],
                              labels[:lo] + labels[hi:], msgs)
            if attempt(cand):
                names, lengths = names[:ci] + names[ci + 1:], lengths[:ci] + lengths[ci + 1:]
                labels, messages = labels[:lo] + labels[hi:], msgs
                changed = True
                break
        if changed:
            continue
        # drop a label
        for g in range(len(labels)):
            for prop in sorted(labels[g]):
                trial = [set(x) for x in labels]
                trial[g].discard(prop)
                if attempt(build_from(names, lengths, trial, messages)):
                    labels = trial
                    changed = True
                    break
            if changed:
                break
    return build_from(names, lengths, labels, messages)


# --------------------------------------------------------------------------
# Fixed corpus
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    name: str
    model: str
    expected: tuple                 # (formula text, expected verdict)

    def computation(self) -> Computation:
        return load_model(data_text(self.model))


def counterexample_corpus() -> list[CorpusEntry]:
    return [
        CorpusEntry("unless-side-condition", "unless_side_condition.model",
                    (("<n>p unless <n>q", False),)),
        CorpusEntry("cancellation", "cancellation.model",
                    (("<m>p unless <m>p & <n>q", True),
                     ("<m>p & <n>q unless <m>r & <n>s", True),
                     ("<m>p | (<m>p & <n>q) unless <m>r & <n>s", False))),
        CorpusEntry("incompleteness", "incompleteness.model",
                    (("[m](p | q)", True), ("p | q", False))),
        CorpusEntry("d2-converse", "d2_converse.model",
                    (("<m>p & <m>q -> <m>(p & q)", False),)),
    ]


# known-invalid rule -> (corpus model, component map, formula instantiation)
_CORPUS_INSTANCES = {
    "GeneralCancellation": ("cancellation.model", {},
                            {"F": "<m>p", "F1": "<m>p & <n>q", "G": "<m>r & <n>s"}),
    "BoxElim": ("incompleteness.model", {"m": "m", "n": "m"}, {"F": "p | q"}),
    "D2Converse": ("d2_converse.model", {"m": "m"}, {"F": "p", "F1": "q"}),
}


def corpus_hits(rule: str) -> list[str]:
    """Corpus models on which the (invalid) rule's fixed instance fails."""
    if rule not in _CORPUS_INSTANCES:
        return []
    model, comp_map, texts = _CORPUS_INSTANCES[rule]
    c = load_model(data_text(model))
    formulas = {k: parse_temporal(v).formula for k, v in texts.items()}
    schema = _schema(rule)
    if _fails(c, schema, comp_map, formulas):
        return [model]
    return []


def fuzz_all(trials: int = 500, seeds=(0,), p: GenParams = GenParams(), rules=None,
             draws: int = DEFAULT_DRAWS) -> list[FuzzReport]:
    names = rules or list(CATALOG) + list(INVALID)
    out = []
    for rule in names:
        merged = None
        for s in seeds:
            r = fuzz_rule(rule, trials, replace(p, seed=s), draws)
            if merged is None:
                merged = r
            else:
                merged.trials += r.trials
                merged.non_vacuous += r.non_vacuous
                merged.violations.extend(r.violations)
        out.append(merged)
    return out
