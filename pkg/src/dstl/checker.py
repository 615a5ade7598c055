"""Deciding temporal formulae on a finite computation.

    check(c, phi)          -> Verdict, smallest failing ds on failure
    obligation(c, phi, ds) -> Verdict for a single ds, with its smallest witness
    check_spec(c, phis)    -> SpecReport
    naive_check(c, phi)    -> Verdict from an independent direct transcription

The compiled kernel is used when it imports; set DSTL_PURE_PYTHON=1 to force
the pure-Python search.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _search
from .computation import DEFAULT_CAP, Computation, DsLike, check_cap, initial_ds
from .errors import DstlError
from .formula import (And, Because, BecauseC, DslFormula, FalseF, Init, LeadsTo, LeadsToC,
                      Loc, Not, Plain, Prop, Stable, TemporalFormula, Unless, desugar,
                      parse_temporal, render)
from .semantics import satisfies, truth_table, valid
from .verdict import Verdict

REPORT_SCHEMA = 1

if os.environ.get("DSTL_PURE_PYTHON") == "1":
    _kernels = None
else:
    try:
        from . import _kernels
    except ImportError:  # pragma: no cover - depends on the build
        _kernels = None

BACKEND = "compiled" if _kernels is not None else "python"

# operator -> (forward relation, backward relation, mode)
_PLAN = {
    LeadsTo: ("up", "down", _search.MODE_EXISTS),
    LeadsToC: ("step_up", "step_down", _search.MODE_EXISTS),
    Because: ("down", "up", _search.MODE_EXISTS),
    BecauseC: ("step_down", "step_up", _search.MODE_EXISTS),
    Unless: ("step_up", "step_down", _search.MODE_UNLESS),
}

_OPERATOR = {Plain: "plain", Init: "init", LeadsTo: "leads_to", LeadsToC: "leads_to_c",
             Because: "because", BecauseC: "because_c", Unless: "unless"}


def _normalize(phi) -> TemporalFormula:
    if isinstance(phi, str):
        phi = parse_temporal(phi)
    if isinstance(phi, DslFormula):
        phi = Plain(phi)
    return desugar(phi)


def _tables(c: Computation, phi, cap: int):
    reach_rel, back_rel, mode = _PLAN[type(phi)]
    ftab = truth_table(c, phi.left, cap).view(np.uint8)
    gtab = truth_table(c, phi.right, cap).view(np.uint8)
    reach = c.union_table(reach_rel)
    back = c.union_table(back_rel)
    step = np.asarray(c.step_up, dtype=reach.dtype)
    return ftab, gtab, reach, back, mode, step


def _first_failure(c, tables, lo, hi, pure=False) -> int:
    ftab, gtab, reach, back, mode, step = tables
    impl = _search if pure or _kernels is None else _kernels
    return int(impl.first_failure(ftab, gtab, reach, back, mode, step, c.final_mask, lo, hi))


def check(c: Computation, phi, cap: int = DEFAULT_CAP, jobs: int = 1,
          pure: bool = False) -> Verdict:
    """Decide ``c |= phi``.  ``jobs`` splits the outer loop across threads;
    the verdict does not depend on it."""
    original = phi
    phi = _normalize(phi)
    text = render(original) if not isinstance(original, str) else original
    op = _OPERATOR[type(phi)]
    check_cap(c, cap)
    if isinstance(phi, Plain):
        v = valid(c, phi.formula, cap)
        return Verdict(v.holds, op, failing_ds=v.failing_ds, formula=text)
    if isinstance(phi, Init):
        ds0 = initial_ds(c)
        if satisfies(c, ds0, phi.formula):
            return Verdict(True, op, formula=text)
        return Verdict(False, op, failing_ds=ds0, formula=text)

    tables = _tables(c, phi, cap)
    total = 1 << c.size
    if jobs <= 1 or total < 1024:
        bad = _first_failure(c, tables, 1, total, pure)
    else:
        chunks = max(jobs * 4, 1)
        bounds = np.linspace(1, total, chunks + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(lambda k: _first_failure(c, tables, int(bounds[k]),
                                                           int(bounds[k + 1]), pure),
                                  range(chunks)))
        hits = [x for x in found if x]
        bad = min(hits) if hits else 0
    if bad:
        return Verdict(False, op, failing_ds=c.ds(bad), formula=text)
    return Verdict(True, op, formula=text)


def obligation(c: Computation, phi, ds: DsLike, cap: int = DEFAULT_CAP) -> Verdict:
    """The obligation of ``phi`` at one distributed state.

    Binary operators: if ``ds`` satisfies the left operand, report the
    smallest witness or fail at ``ds``; otherwise the obligation is vacuous.
    Plain and init formulas are evaluated at ``ds`` and ds0 respectively.
    """
    original = phi
    phi = _normalize(phi)
    text = render(original) if not isinstance(original, str) else original
    op = _OPERATOR[type(phi)]
    mask = c.mask(ds)
    if isinstance(phi, Plain):
        ok = satisfies(c, mask, phi.formula)
        return Verdict(ok, op, failing_ds=None if ok else c.ds(mask), formula=text)
    if isinstance(phi, Init):
        return check(c, phi, cap)
    if not satisfies(c, mask, phi.left):
        return Verdict(True, op, formula=text)
    ftab, gtab, reach, back, mode, step = _tables(c, phi, cap)
    z = _search.witness(mask, ftab.tolist(), gtab.tolist(), reach.tolist(), back.tolist(),
                        mode, [int(x) for x in step], c.final_mask)
    if z:
        return Verdict(True, op, witness_ds=c.ds(z), formula=text)
    return Verdict(False, op, failing_ds=c.ds(mask), formula=text)


# --------------------------------------------------------------------------
# Spec documents
# --------------------------------------------------------------------------

def parse_spec(text: str, components=None) -> list[TemporalFormula]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_temporal(line, components))
        except DstlError as e:
            if hasattr(e, "line") and e.line is None:
                e.line = lineno
                e.args = (f"line {lineno}, {e.args[0]}",)
            raise
    return out


@dataclass
class SpecReport:
    verdicts: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "holds": self.holds,
                "results": [v.to_dict() for v in self.verdicts]}

    def to_text(self) -> str:
        lines = []
        for v in self.verdicts:
            if v.holds:
                lines.append(f"holds      M |= {v.formula}")
            else:
                lines.append(f"FAILS      M does not satisfy {v.formula}; failing ds {v.failing_ds}")
        n_ok = sum(v.holds for v in self.verdicts)
        lines.append(f"{n_ok}/{len(self.verdicts)} formulas hold")
        return "\n".join(lines)


def check_spec(c: Computation, document, cap: int = DEFAULT_CAP, jobs: int = 1) -> SpecReport:
    """Check every formula of a spec; ``document`` is spec text or a list of formulas."""
    if isinstance(document, str):
        document = parse_spec(document, c.components)
    return SpecReport([check(c, phi, cap, jobs) for phi in document])


# --------------------------------------------------------------------------
# Independent oracle
# --------------------------------------------------------------------------

NAIVE_LIMIT = 12


def naive_check(c: Computation, phi) -> Verdict:
    """Direct transcription of the satisfaction clauses, sharing no code with
    :func:`check` beyond the computation's state list and labels."""
    original = phi
    phi = _normalize(phi)
    text = render(original) if not isinstance(original, str) else original
    op = _OPERATOR[type(phi)]
    n = c.size
    if n > NAIVE_LIMIT:
        raise DstlError(f"naive_check is limited to {NAIVE_LIMIT} states")
    states = list(c.states)
    index = {s: k for k, s in enumerate(states)}
    label = [set(c.labels_of(s)) for s in states]
    comp = [s.component for s in states]

    # R, R= and R* as boolean matrices (Warshall for the closure)
    R = np.zeros((n, n), dtype=bool)
    for s, t in c.next_pairs():
        R[index[s], index[t]] = True
    Req = R | np.eye(n, dtype=bool)
    Rstar = Req.copy()
    for k in range(n):
        Rstar |= np.outer(Rstar[:, k], Rstar[k, :])

    subsets = [frozenset(x) for r in range(1, n + 1) for x in itertools.combinations(range(n), r)]
    subsets.sort(key=lambda ds: sum(1 << k for k in ds))
    members = np.zeros((len(subsets), n), dtype=bool)
    for row, ds in enumerate(subsets):
        members[row, list(ds)] = True

    def sat(ds: frozenset, g) -> bool:
        if isinstance(g, Prop):
            return all(g.name in label[k] for k in ds)
        if isinstance(g, FalseF):
            return False
        if isinstance(g, Not):
            return not sat(ds, g.arg)
        if isinstance(g, And):
            return sat(ds, g.left) and sat(ds, g.right)
        if isinstance(g, Loc):
            return any(comp[k] == g.comp and sat(frozenset([k]), g.arg) for k in ds)
        raise TypeError(g)

    def ds_of(ds: frozenset):
        return c.ds(sum(1 << k for k in ds))

    if isinstance(phi, Plain):
        for ds in subsets:
            if not sat(ds, phi.formula):
                return Verdict(False, op, failing_ds=ds_of(ds), formula=text)
        return Verdict(True, op, formula=text)
    if isinstance(phi, Init):
        ds0 = frozenset(index[s] for s in states if s.index == 0)
        ok = sat(ds0, phi.formula)
        return Verdict(ok, op, failing_ds=None if ok else ds_of(ds0), formula=text)

    f_sat = np.array([sat(ds, phi.left) for ds in subsets])
    g_sat = np.array([sat(ds, phi.right) for ds in subsets])

    hit_cache: dict = {}

    def hits(rel, key):
        """hits[k][row]: candidate ``row`` contains a state related to k (``key``
        "out": k rel s', "in": s' rel k)."""
        if (id(rel), key) not in hit_cache:
            cols = rel if key == "out" else rel.T
            hit_cache[id(rel), key] = [members[:, cols[k]].any(axis=1) for k in range(n)]
        return hit_cache[id(rel), key]

    def le(rel, ds):
        """For each candidate row Z: ds <= Z under ``rel``."""
        d = list(ds)
        out = hits(rel, "out")
        ok = np.ones(len(subsets), dtype=bool)
        for k in d:                                   # every s in ds reaches some s' in Z
            ok &= out[k]
        covered = rel[d].any(axis=0)                  # every s' in Z reached from ds
        return ok & ~members[:, ~covered].any(axis=1)

    def ge(rel, ds):
        """For each candidate row Z: Z <= ds under ``rel``."""
        d = list(ds)
        into = hits(rel, "in")
        ok = np.ones(len(subsets), dtype=bool)
        for k in d:                                   # every s in ds reached from some s' in Z
            ok &= into[k]
        reaching = rel[:, d].any(axis=1)              # every s' in Z reaches into ds
        return ok & ~members[:, ~reaching].any(axis=1)

    final = [k for k, s in enumerate(states)
             if s.index == c.lengths[c.components.index(s.component)] - 1]

    for row, ds in enumerate(subsets):
        if not f_sat[row]:
            continue
        if isinstance(phi, LeadsTo):
            ok = le(Rstar, ds) & g_sat
        elif isinstance(phi, LeadsToC):
            ok = le(Req, ds) & g_sat
        elif isinstance(phi, Because):
            ok = ge(Rstar, ds) & g_sat
        elif isinstance(phi, BecauseC):
            ok = ge(Req, ds) & g_sat
        else:
            d = list(ds)
            superset = members[:, d].all(axis=1)
            stutter = np.zeros(len(subsets), dtype=bool)
            for f in d:
                if f not in final:
                    continue
                cond = superset.copy()
                for k in d:                           # s has a same-or-next state in Z - {f}
                    if k != f:
                        targets = Req[k].copy()
                        targets[f] = False
                        cond &= members[:, targets].any(axis=1)
                stutter |= cond
            progress = f_sat & (~superset | stutter)
            ok = le(Req, ds) & (progress | g_sat)
        if not ok.any():
            return Verdict(False, op, failing_ds=ds_of(ds), formula=text)
    return Verdict(True, op, formula=text)


def naive_witness(c: Computation, phi, ds: DsLike) -> Verdict:
    """Brute-force counterpart of :func:`obligation` (smallest witness)."""
    phi = _normalize(phi)
    mask = c.mask(ds)
    if isinstance(phi, (Plain, Init)) or not satisfies(c, mask, phi.left):
        return obligation(c, phi, ds)
    for z in range(1, 1 << c.size):
        sub = _submodel_ok(c, phi, mask, z)
        if sub:
            return Verdict(True, _OPERATOR[type(phi)], witness_ds=c.ds(z), formula=render(phi))
    return Verdict(False, _OPERATOR[type(phi)], failing_ds=c.ds(mask), formula=render(phi))


def _submodel_ok(c, phi, ds, z) -> bool:
    from .computation import leq, leq_c
    if isinstance(phi, LeadsTo):
        return leq(c, ds, z) and satisfies(c, z, phi.right)
    if isinstance(phi, LeadsToC):
        return leq_c(c, ds, z) and satisfies(c, z, phi.right)
    if isinstance(phi, Because):
        return leq(c, z, ds) and satisfies(c, z, phi.right)
    if isinstance(phi, BecauseC):
        return leq_c(c, z, ds) and satisfies(c, z, phi.right)
    if not leq_c(c, ds, z):
        return False
    if satisfies(c, z, phi.right):
        return True
    if not satisfies(c, z, phi.left):
        return False
    return bool(ds & ~z) or _search._stutters(ds, z, c.step_up, c.final_mask)
