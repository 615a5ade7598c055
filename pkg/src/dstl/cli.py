"""Command-line interface.

Exit status: 0 success, 1 a formula/script/rule check failed, 2 bad input
(parse or validation error, unknown rule), 3 the model exceeds the state cap.

File arguments that do not exist on disk are looked up among the bundled
examples, so ``dstl check table1.model --spec table1.spec`` works anywhere.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from . import examples
from .checker import BACKEND, check_spec, parse_spec
from .computation import DEFAULT_CAP, Computation, causal_closure, check_cap, load_model
from .errors import CapExceeded, DstlError
from .proof import LemmaLibrary, bundled_library, check_file, parse_proofs
from .proof.catalog import CATALOG, INVALID

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
FUZZ_SCHEMA = 1


@dataclass
class RunConfig:
    subcommand: str
    model: Optional[str] = None
    paths: tuple = ()
    cap: int = DEFAULT_CAP
    seeds: tuple = (0,)
    structured: bool = False
    jobs: int = 1


class InputError(Exception):
    pass


def read_source(path: str) -> tuple[str, str]:
    """(text, display name) for a path or a bundled example name."""
    p = Path(path)
    if p.is_file():
        return p.read_text(), str(p)
    if examples.exists(path):
        return examples.data_text(path), f"<bundled>/{path}"
    raise InputError(f"no such file: {path}")


def _emit(cfg: RunConfig, payload: dict, text: str):
    click.echo(json.dumps(payload, indent=2) if cfg.structured else text)


def _fail_input(cfg: RunConfig, message: str, code: int = EXIT_INPUT):
    if cfg.structured:
        click.echo(json.dumps({"error": message, "exit": code}))
    else:
        click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(cfg: RunConfig, path: str) -> Computation:
    text, _ = read_source(path)
    return load_model(text)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="dstl")
def main():
    """Model checking and proof checking for distributed-state logic."""


@main.command()
@click.argument("model")
@click.option("--json", "as_json", is_flag=True, help="Structured output.")
def validate(model, as_json):
    """Build MODEL and summarize its causal structure."""
    cfg = RunConfig("validate", model=model, structured=as_json)
    try:
        c = _load(cfg, model)
    except (InputError, DstlError) as e:
        _fail_input(cfg, str(e))
    pairs = causal_closure(c)
    strict = sum(1 for a, b in pairs if a != b)
    comps = {name: c.lengths[k] for k, name in enumerate(c.components)}
    payload = {"valid": True, "components": comps, "states": c.size,
               "messages": len(c.messages), "causal_pairs": strict}
    lines = [f"valid: {len(comps)} component{'s' if len(comps) != 1 else ''}, {c.size} states"]
    lines += [f"  {name}: {n} state{'s' if n != 1 else ''}" for name, n in comps.items()]
    lines.append(f"messages: {len(c.messages)}")
    lines.append(f"causal pairs (strict): {strict}")
    _emit(cfg, payload, "\n".join(lines))


@main.command()
@click.argument("model")
@click.option("--spec", "specs", multiple=True, help="Spec file, one formula per line.")
@click.option("-f", "--formula", "formulas", multiple=True, help="Formula given inline.")
@click.option("--cap", default=DEFAULT_CAP, show_default=True, help="Largest state count to enumerate.")
@click.option("--json", "as_json", is_flag=True, help="Structured output.")
@click.option("--jobs", default=1, show_default=True, help="Worker threads for the search.")
def check(model, specs, formulas, cap, as_json, jobs):
    """Check formulas against MODEL."""
    cfg = RunConfig("check", model=model, paths=specs, cap=cap, structured=as_json, jobs=jobs)
    try:
        c = _load(cfg, model)
        document = []
        for path in specs:
            document += parse_spec(read_source(path)[0], c.components)
        document += parse_spec("\n".join(formulas), c.components)
        check_cap(c, cap)
        report = check_spec(c, document, cap, jobs)
    except CapExceeded as e:
        _fail_input(cfg, str(e), EXIT_CAP)
    except (InputError, DstlError) as e:
        _fail_input(cfg, str(e))
    payload = report.to_dict()
    payload["backend"] = BACKEND
    _emit(cfg, payload, report.to_text())
    sys.exit(EXIT_OK if report.holds else EXIT_FAIL)


@main.command()
@click.argument("scripts", nargs=-1, required=True)
@click.option("--lib", "libs", multiple=True, help="Proof file whose lemmas become citable first.")
@click.option("--no-bundled", is_flag=True, help="Do not preload the shipped lemma library.")
@click.option("--json", "as_json", is_flag=True, help="Structured output.")
def prove(scripts, libs, no_bundled, as_json):
    """Check proof SCRIPTS; each checked script becomes a citable lemma."""
    cfg = RunConfig("prove", paths=scripts, structured=as_json)
    try:
        lib_scripts = [s for path in libs for s in parse_proofs(*read_source(path))]
        main_scripts = [s for path in scripts for s in parse_proofs(*read_source(path))]
    except (InputError, DstlError) as e:
        _fail_input(cfg, str(e))
    own = {s.name for s in lib_scripts + main_scripts}
    lib = LemmaLibrary() if no_bundled else bundled_library(exclude=own)
    results = []
    for group, is_lib in ((lib_scripts, True), (main_scripts, False)):
        try:
            group_results = check_file(group, lib)
        except DstlError as e:
            _fail_input(cfg, str(e))
        results += [(r, is_lib) for r in group_results]
    ok = all(r.ok for r, _ in results)
    lines, rows = [], []
    for r, is_lib in results:
        tag = "lib " if is_lib else ""
        if r.ok:
            lines.append(f"ok    {tag}{r.name} ({len(r.lines)} lines)")
        else:
            lines.append(f"FAIL  {tag}{r.name}: {r.error}")
        rows.append({"name": r.name, "ok": r.ok, "library": is_lib,
                     "failed_line": r.failed_line, "error": None if r.ok else str(r.error)})
    lines.append(f"{sum(r.ok for r, _ in results)}/{len(results)} scripts check")
    _emit(cfg, {"schema": 1, "ok": ok, "scripts": rows}, "\n".join(lines))
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command()
@click.argument("rule")
@click.option("--trials", default=500, show_default=True, help="Random models per rule and seed.")
@click.option("--seed", "seeds", multiple=True, type=int, help="Seed; repeat for several (default 0).")
@click.option("--json", "as_json", is_flag=True, help="Structured output.")
def fuzz(rule, trials, seeds, as_json):
    """Fuzz-test RULE (or 'all') for soundness on random models."""
    from .lab import GenParams, fuzz_all

    seeds = tuple(seeds) or (0,)
    cfg = RunConfig("fuzz", seeds=seeds, structured=as_json)
    names = list(CATALOG) + list(INVALID) if rule == "all" else [rule]
    unknown = [n for n in names if n not in CATALOG and n not in INVALID]
    if unknown:
        _fail_input(cfg, f"unknown rule {unknown[0]!r}")
    reports = fuzz_all(trials, seeds, GenParams(), rules=names)
    ok = all(r.ok for r in reports)
    lines = []
    for r in reports:
        verdict = "ok  " if r.ok else "FAIL"
        expect = "sound" if r.sound else "invalid"
        lines.append(f"{verdict}  {r.rule:<20} {expect:<8} coverage {r.coverage:6.1%}  "
                     f"violations {len(r.violations)}")
        if r.sound and r.violations:
            v = r.violations[0]
            lines.append(f"      premises {'; '.join(v.premises)}  conclusion {v.conclusion}")
            lines += ["      " + ln for ln in (v.shrunk_model or v.model).splitlines()]
    lines.append(f"{sum(r.ok for r in reports)}/{len(reports)} rules as expected")
    payload = {"schema": FUZZ_SCHEMA, "ok": ok, "trials": trials, "seeds": list(seeds),
               "rules": [r.to_dict() for r in reports]}
    _emit(cfg, payload, "\n".join(lines))
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


if __name__ == "__main__":  # pragma: no cover
    main()
