"""Satisfaction of distributed-state formulae.

Two evaluators live here.  ``satisfies``/``truth_table`` work directly on a
computation: a proposition holds at a distributed state when every member
carries it, and ``<m> F`` holds when some member of component ``m`` satisfies
F on its own.  ``kripke_satisfies`` is the textbook modal evaluator over an
explicit frame; ``ds_frame`` materializes the frame of a small computation so
the two can be cross-checked.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Iterable

import numpy as np

from .computation import DEFAULT_CAP, Computation, DsLike, check_cap
from .errors import DstlError, ModelError, ParseError
from .formula import And, DslFormula, FalseF, Loc, Not, Prop, desugar
from .verdict import Verdict

FRAME_LIMIT = 12


def valuation(c: Computation, ds: DsLike) -> frozenset:
    mask = c.mask(ds)
    labels = [c.labels[k] for k in range(c.size) if mask >> k & 1]
    return frozenset.intersection(*labels)


def single_mask(c: Computation, f: DslFormula) -> int:
    """Bitmask of the states s with {s} |= f (f desugared)."""
    if isinstance(f, Prop):
        return c.prop_mask(f.name)
    if isinstance(f, FalseF):
        return 0
    if isinstance(f, Not):
        return c.full_mask & ~single_mask(c, f.arg)
    if isinstance(f, And):
        return single_mask(c, f.left) & single_mask(c, f.right)
    if isinstance(f, Loc):
        return c.comp_mask(f.comp) & single_mask(c, f.arg)
    return single_mask(c, desugar(f))


def _sat_mask(c: Computation, mask: int, f: DslFormula) -> bool:
    if isinstance(f, Prop):
        return mask & ~c.prop_mask(f.name) == 0
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Not):
        return not _sat_mask(c, mask, f.arg)
    if isinstance(f, And):
        return _sat_mask(c, mask, f.left) and _sat_mask(c, mask, f.right)
    if isinstance(f, Loc):
        return mask & c.comp_mask(f.comp) & single_mask(c, f.arg) != 0
    return _sat_mask(c, mask, desugar(f))


def satisfies(c: Computation, ds: DsLike, f: DslFormula) -> bool:
    return _sat_mask(c, c.mask(ds), desugar(f))


def all_masks(c: Computation) -> np.ndarray:
    if "arange" not in c._tables:
        c._tables["arange"] = np.arange(1 << c.size, dtype=np.uint32 if c.size <= 32 else np.uint64)
    return c._tables["arange"]


def truth_table(c: Computation, f: DslFormula, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Boolean array indexed by mask; entry 0 (the empty set) is meaningless."""
    check_cap(c, cap)
    masks = all_masks(c)
    dtype = masks.dtype.type
    memo: dict = {}

    def go(g):
        if g in memo:
            return memo[g]
        if isinstance(g, Prop):
            out = (masks & dtype(c.full_mask & ~c.prop_mask(g.name))) == 0
        elif isinstance(g, FalseF):
            out = np.zeros(masks.shape, dtype=bool)
        elif isinstance(g, Not):
            out = ~go(g.arg)
        elif isinstance(g, And):
            out = go(g.left) & go(g.right)
        elif isinstance(g, Loc):
            out = (masks & dtype(c.comp_mask(g.comp) & single_mask(c, g.arg))) != 0
        else:
            raise TypeError(f"not a core DSL formula: {g!r}")
        memo[g] = out
        return out

    return go(desugar(f))


def valid(c: Computation, f: DslFormula, cap: int = DEFAULT_CAP) -> Verdict:
    """M |= F over every nonempty distributed state; reports the smallest failure."""
    table = truth_table(c, f, cap)
    table[0] = True
    bad = np.flatnonzero(~table)
    text = str(f)
    if bad.size:
        return Verdict(False, "plain", failing_ds=c.ds(int(bad[0])), formula=text)
    return Verdict(True, "plain", formula=text)


# --------------------------------------------------------------------------
# Explicit Kripke models
# --------------------------------------------------------------------------

@dataclass
class KripkeModel:
    worlds: list
    reach: dict = field(default_factory=dict)        # component -> set of (u, v)
    valuation: dict = field(default_factory=dict)    # world -> frozenset of props

    def successors(self, comp: str, w: Hashable) -> list:
        return sorted((v for u, v in self.reach.get(comp, ()) if u == w), key=self.worlds.index)

    def to_text(self) -> str:
        lines = [f"world {w}" for w in self.worlds]
        for comp in sorted(self.reach):
            order = {w: k for k, w in enumerate(self.worlds)}
            for u, v in sorted(self.reach[comp], key=lambda e: (order[e[0]], order[e[1]])):
                lines.append(f"edge {comp}: {u} -> {v}")
        for w in self.worlds:
            props = self.valuation.get(w, ())
            if props:
                lines.append(f"val {w}: {' '.join(sorted(props))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "KripkeModel":
        km = cls(worlds=[])
        edge_re = re.compile(r"edge\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("world "):
                km.worlds.append(line.split(None, 1)[1].strip())
            elif m := edge_re.match(line):
                km.reach.setdefault(m.group(1), set()).add((m.group(2), m.group(3)))
            elif line.startswith("val "):
                head, _, props = line[4:].partition(":")
                km.valuation[head.strip()] = frozenset(props.split())
            else:
                raise ParseError(f"unrecognized frame line {line!r}", raw, 0, lineno)
        known = set(km.worlds)
        for comp, edges in km.reach.items():
            for u, v in edges:
                if u not in known or v not in known:
                    raise ModelError(f"edge {comp}: {u} -> {v} mentions an undeclared world")
        return km


def kripke_satisfies(km: KripkeModel, w: Hashable, f: DslFormula) -> bool:
    if w not in km.valuation and w not in km.worlds:
        raise DstlError(f"unknown world {w!r}")
    index: dict = defaultdict(list)
    for comp, edges in km.reach.items():
        for u, v in edges:
            index[comp, u].append(v)

    def go(u, g) -> bool:
        if isinstance(g, Prop):
            return g.name in km.valuation.get(u, ())
        if isinstance(g, FalseF):
            return False
        if isinstance(g, Not):
            return not go(u, g.arg)
        if isinstance(g, And):
            return go(u, g.left) and go(u, g.right)
        if isinstance(g, Loc):
            return any(go(v, g.arg) for v in index[g.comp, u])
        raise TypeError(f"not a core DSL formula: {g!r}")

    return go(w, desugar(f))


@dataclass(frozen=True)
class FrameViolation:
    condition: int            # 1, 2 or 3
    components: tuple         # (i,) or (i, j)
    worlds: tuple             # offending (u, v, w)

    def __str__(self) -> str:
        u, v, w = self.worlds
        if self.condition == 1:
            return f"rc1: ({u}, {v}) in R_{self.components[0]} but ({v}, {v}) is not"
        if self.condition == 2:
            return f"rc2: ({u}, {v}) and ({v}, {w}) in R_{self.components[0]} with {v} != {w}"
        i, j = self.components
        return f"rc3: ({u}, {v}) in R_{i} and ({v}, {w}) in R_{j}"


def validate_frame(km: KripkeModel) -> list[FrameViolation]:
    """Check conditions rc1-rc3; an empty list means the frame is a DS-frame shape."""
    out = []
    succ = {comp: defaultdict(set) for comp in km.reach}
    for comp, edges in km.reach.items():
        for u, v in edges:
            succ[comp][u].add(v)
    order = {w: k for k, w in enumerate(km.worlds)}

    def key(x):
        return order.get(x, len(order)), str(x)

    for i in sorted(km.reach):
        for u, v in sorted(km.reach[i], key=lambda e: (key(e[0]), key(e[1]))):
            if v not in succ[i][v]:
                out.append(FrameViolation(1, (i,), (u, v, v)))
            for w in sorted(succ[i][v], key=key):
                if w != v:
                    out.append(FrameViolation(2, (i,), (u, v, w)))
            for j in sorted(km.reach):
                if j != i:
                    for w in sorted(succ[j][v], key=key):
                        out.append(FrameViolation(3, (i, j), (u, v, w)))
    return out


def world_name(c: Computation, mask: int) -> str:
    return ",".join(str(c.states[k]) for k in range(c.size) if mask >> k & 1)


def ds_frame(c: Computation, limit: int = FRAME_LIMIT) -> KripkeModel:
    """The frame on distributed states: (ds, {s}) in R_i for each s in ds of component i."""
    if c.size > limit:
        raise DstlError(f"{c.size} states exceeds the frame size limit of {limit}")
    km = KripkeModel(worlds=[world_name(c, m) for m in range(1, 1 << c.size)])
    for comp in c.components:
        edges = set()
        cm = c.comp_mask(comp)
        for m in range(1, 1 << c.size):
            for k in range(c.size):
                if (m & cm) >> k & 1:
                    edges.add((world_name(c, m), world_name(c, 1 << k)))
        km.reach[comp] = edges
    for m in range(1, 1 << c.size):
        km.valuation[world_name(c, m)] = valuation(c, m)
    return km
