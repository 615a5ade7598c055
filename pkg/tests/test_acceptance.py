"""Acceptance criteria.  Each test prints one PASS/FAIL line, then asserts."""

import random
import time

import pytest

from conftest import bundled
from dstl import examples
from dstl.checker import check, naive_check, parse_spec
from dstl.computation import load_model
from dstl.formula import Because, BecauseC, LeadsTo, LeadsToC, Unless, substitute
from dstl.lab import GenParams, fuzz_all, fuzz_rule, random_computation, random_formula
from dstl.proof import (CATALOG, LemmaLibrary, bundled_library, check_file, parse_proofs,
                        run_mutations)
from dstl.semantics import ds_frame, validate_frame

FIXTURE_MODELS = [n for n in examples.names() if n.endswith(".model")]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return emit


# 1 ----------------------------------------------------------------------------

TABLE_VERDICTS = [
    ("table1", "w -> t", True),
    ("table1", "[n](w -> t)", True),
    ("table1", "<n>true -> <n>(w -> t)", True),
    ("table1", "<n>(w -> t)", False),
    ("table1", "<n>u leads_to <m>u", True),
    ("table1", "<m>p & <n>v leads_to <m>z & <n>t", True),
    ("table1", "<m>q leads_to <n>v", True),
    ("table1", "<m>p & <n>v leads_to_c <m>q", True),
    ("table1", "<n>w because <n>p & <n>u", True),
    ("table1", "<n>w because <n>(p & u)", True),
    ("table2", "<n>p unless <n>t", True),
    ("table2", "p unless q | t", True),
    ("unless_side_condition", "<n>p unless <n>q", False),
    ("stable", "stable p", True),
    ("se", "[m]p", True),
]


def test_criterion_1_table_verdicts(report):
    start = time.perf_counter()
    wrong = []
    for model, text, expected in TABLE_VERDICTS:
        v = check(bundled(f"{model}.model"), text)
        if v.holds is not expected:
            wrong.append(f"{model}: {text} expected {expected}, got {v.holds} (failing ds {v.failing_ds})")
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < 1
    report(1, ok, f"{len(TABLE_VERDICTS) - len(wrong)}/{len(TABLE_VERDICTS)} verdicts, "
                  f"{elapsed:.2f}s" + ("; " + "; ".join(wrong) if wrong else ""))
    assert ok, wrong


# 2 ----------------------------------------------------------------------------

DSL_SCHEMATA = ["K", "DSL1", "DSL2"]
DSL_LEMMAS = ["Axiom4", "D1", "D2", "D3", "D4", "D5", "D6", "D7", "D8"]


def _bounded_computation(rng, limit=8):
    p = GenParams(components=(1, 3), states=(1, 4))
    while True:
        c = random_computation(p, rng)
        if c.size <= limit:
            return c


def test_criterion_2_dsl_axioms(report):
    lib = bundled_library()
    patterns = [(n, CATALOG[n].comps, CATALOG[n].formulas, CATALOG[n].conclusion_pattern)
                for n in DSL_SCHEMATA]
    patterns += [(n, lib.get(n).comps, lib.get(n).formulas, lib.get(n).conclusion)
                 for n in DSL_LEMMAS]
    rng = random.Random(2024)
    start = time.perf_counter()
    violations, instances = [], 0
    for _ in range(1000):
        c = _bounded_computation(rng)
        props = sorted(set(c.alphabet()) | {"p"})
        for name, comps, metas, pattern in patterns:
            if name == "DSL2" and len(c.components) < 2:
                continue
            chosen = rng.sample(c.components, 2) if name == "DSL2" else [rng.choice(c.components)]
            comp_map = dict(zip(comps, chosen))
            fmap = {v: random_formula(rng, props, list(c.components), 3) for v in metas}
            inst = substitute(pattern, fmap, comp_map)
            instances += 1
            if not check(c, inst).holds:
                violations.append((name, c.to_text(), str(inst)))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 60
    report(2, ok, f"{instances} instances on 1000 models, {len(violations)} violations, {elapsed:.1f}s")
    assert ok, violations[:3]


# 3 ----------------------------------------------------------------------------

def _random_temporal(rng, c):
    op = rng.choice([LeadsTo, LeadsToC, Because, BecauseC, Unless])
    comps = list(c.components)
    return op(random_formula(rng, "pqr", comps, 3), random_formula(rng, "pqr", comps, 3))


def _fixture_formulas():
    """Every spec formula and table verdict, grouped by model."""
    out = {}
    for name in examples.names():
        if name.endswith(".spec"):
            model = name.replace("_extra", "").replace(".spec", ".model")
            c = bundled(model)
            out.setdefault(model, []).extend(parse_spec(examples.data_text(name), c.components))
    for model, text, _ in TABLE_VERDICTS:
        out.setdefault(f"{model}.model", []).append(text)
    return out


def test_criterion_3_oracle_equivalence(report):
    rng = random.Random(3)
    p = GenParams(components=(1, 2), states=(1, 3), alphabet=3)
    disagree, pairs = [], 0
    while pairs < 200:
        c = random_computation(p, rng)
        if c.size > 6:
            continue
        phi = _random_temporal(rng, c)
        pairs += 1
        if check(c, phi) != naive_check(c, phi):
            disagree.append((c.to_text(), str(phi)))
    fixture_checks = 0
    for model, formulas in _fixture_formulas().items():
        c = bundled(model)
        for phi in formulas:
            fixture_checks += 1
            if check(c, phi) != naive_check(c, phi):
                disagree.append((model, str(phi)))
    ok = not disagree
    report(3, ok, f"{pairs} random pairs + {fixture_checks} fixture formulas, "
                  f"{len(disagree)} disagreements")
    assert ok, disagree[:3]


# 4 ----------------------------------------------------------------------------

def test_criterion_4_known_non_theorems(report):
    outcomes = {}
    v = check(bundled("d2_converse.model"), "<m>p & <m>q -> <m>(p & q)")
    outcomes["D2 converse refuted"] = not v.holds
    c = bundled("cancellation.model")
    outcomes["general cancellation refuted"] = (
        check(c, "<m>p unless <m>p & <n>q").holds
        and check(c, "<m>p & <n>q unless <m>r & <n>s").holds
        and not check(c, "<m>p | (<m>p & <n>q) unless <m>r & <n>s").holds)
    outcomes["side condition refuted"] = not check(bundled("unless_side_condition.model"),
                                                   "<n>p unless <n>q").holds
    c = bundled("incompleteness.model")
    v = check(c, "p | q")
    outcomes["[m](p|q) without p|q"] = (check(c, "[m](p | q)").holds and not v.holds
                                        and str(v.failing_ds) == "{m.0, m.1}")
    ok = all(outcomes.values())
    report(4, ok, ", ".join(f"{k}: {'yes' if x else 'NO'}" for k, x in outcomes.items()))
    assert ok


# 5 ----------------------------------------------------------------------------

def test_criterion_5_proof_replay(report):
    start = time.perf_counter()
    lib = LemmaLibrary()
    results, total, missed = [], 0, []
    for name in ("lemmas.proofs", "private_keys.proofs", "leader_election_2.proofs"):
        for s in parse_proofs(examples.data_text(name), name):
            outs = run_mutations(s, lib)
            total += len(outs)
            missed += [o.mutation.describe() for o in outs if not o.caught]
            results += check_file([s], lib)
    elapsed = time.perf_counter() - start
    failed = [r.name for r in results if not r.ok]
    required = {"Axiom4", "D1", "D2", "D3", "D5", "D6", "D7", "D8", "Cor1", "Cor2",
                "NoLeak", "Delivery", "LeaderElection2"}
    missing = required - {r.name for r in results}
    ok = not failed and not missing and not missed and elapsed < 10
    report(5, ok, f"{len(results) - len(failed)}/{len(results)} scripts check, "
                  f"{total - len(missed)}/{total} mutations rejected, {elapsed:.1f}s")
    assert ok, (failed, missing, missed[:5])


# 6 ----------------------------------------------------------------------------

def test_criterion_6_rule_soundness(report):
    start = time.perf_counter()
    reports = fuzz_all(500, seeds=(0, 1, 2, 3, 4), rules=list(CATALOG))
    elapsed = time.perf_counter() - start
    bad = [r for r in reports if not r.ok]
    detail = "; ".join(f"{r.rule} {len(r.violations)} violations coverage {r.coverage:.1%}"
                       for r in bad)
    ok = not bad and elapsed < 300
    report(6, ok, f"{len(reports) - len(bad)}/{len(reports)} rules clean, {elapsed:.0f}s"
                  + (f"; {detail}" if detail else ""))
    assert ok, detail


# 7 ----------------------------------------------------------------------------

def test_criterion_7_li_bi_grounding(report):
    rng = random.Random(7)
    violations, premises_met = [], 0
    for name in FIXTURE_MODELS:
        c = bundled(name)
        comps = list(c.components)
        props = sorted(set(c.alphabet()) | {"p"})
        for _ in range(40):
            f, g = (random_formula(rng, props, comps, 3) for _ in range(2))
            for close, plain in ((LeadsToC, LeadsTo), (BecauseC, Because)):
                if check(c, close(f, g)).holds:
                    premises_met += 1
                    if not check(c, plain(f, g)).holds:
                        violations.append((name, str(close(f, g))))
    random_reports = [fuzz_rule(rule, 500) for rule in ("LI", "BI")]
    violations += [v for r in random_reports for v in r.violations]
    premises_met += sum(r.non_vacuous for r in random_reports)
    ok = not violations
    report(7, ok, f"{len(FIXTURE_MODELS)} fixtures + 500 random models per rule, "
                  f"{premises_met} satisfied premises, {len(violations)} violations")
    assert ok


# 8 ----------------------------------------------------------------------------

def test_criterion_8_frame_validator(report):
    c = load_model("component m: 2\ncomponent n: 1\nlabels m.0: p\nlabels m.1: q\nlabels n.0: p r")
    km = ds_frame(c)
    checks = {"7 worlds": len(km.worlds) == 7, "valid": validate_frame(km) == []}
    mutations = {
        1: lambda k: k.reach["m"].discard(("m.0", "m.0")),
        2: lambda k: k.reach["m"].add(("m.0", "m.1")),
        3: lambda k: k.reach["n"].add(("m.0", "n.0")),
    }
    for condition, mutate in mutations.items():
        k = ds_frame(c)
        mutate(k)
        found = {v.condition for v in validate_frame(k)}
        checks[f"rc{condition} flagged"] = found == {condition}
    ok = all(checks.values())
    report(8, ok, ", ".join(f"{k}: {'yes' if x else 'NO'}" for k, x in checks.items()))
    assert ok
