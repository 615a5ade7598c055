"""Space-time diagrams: per-component state sequences plus cross-component messages.

A computation numbers its states component-major (all states of the first
declared component, then the second, ...).  That numbering fixes the bit
layout of every distributed-state mask, so enumeration order and reported
witnesses are reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import CapExceeded, ModelError, ParseError

DEFAULT_CAP = 24


@total_ordering
@dataclass(frozen=True)
class StateId:
    component: str
    index: int

    def __str__(self) -> str:
        return f"{self.component}.{self.index}"

    def __lt__(self, other: "StateId") -> bool:
        return (self.component, self.index) < (other.component, other.index)


@dataclass(frozen=True)
class DistributedState:
    members: frozenset

    def __post_init__(self):
        if not self.members:
            raise ModelError("a distributed state must be nonempty")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, s) -> bool:
        return s in self.members

    def __str__(self) -> str:
        return "{" + ", ".join(str(s) for s in self) + "}"


DsLike = Union[DistributedState, Iterable[StateId], int]


@dataclass
class ComputationDecl:
    """Raw declarations as read from a model file, before validation."""
    components: list = field(default_factory=list)      # [(name, count)]
    labels: dict = field(default_factory=dict)           # (name, idx) -> set of props
    messages: list = field(default_factory=list)         # [((name, idx), (name, idx))]


class Computation:
    """Validated, immutable computation.  Build with :func:`build`."""

    def __init__(self, components: Sequence[str], lengths: Sequence[int],
                 labels: Sequence[frozenset], messages: Iterable[tuple]):
        self.components = tuple(components)
        self.lengths = tuple(lengths)
        offsets, acc = [], 0
        for n in self.lengths:
            offsets.append(acc)
            acc += n
        self.offsets = tuple(offsets)
        self.size = acc
        self.labels = tuple(frozenset(x) for x in labels)
        self.messages = tuple(sorted(set(messages)))
        self.states = tuple(StateId(c, i) for c, n in zip(self.components, self.lengths)
                            for i in range(n))
        self._gid = {s: k for k, s in enumerate(self.states)}
        self._comp_index = {c: k for k, c in enumerate(self.components)}
        self._tables: dict = {}

        succ = [[] for _ in range(self.size)]
        pred = [[] for _ in range(self.size)]
        for k in range(self.size):
            s = self.states[k]
            if s.index + 1 < self.lengths[self._comp_index[s.component]]:
                succ[k].append(k + 1)
                pred[k + 1].append(k)
        for a, b in self.messages:
            succ[a].append(b)
            pred[b].append(a)
        self.succ = tuple(tuple(x) for x in succ)
        self.pred = tuple(tuple(x) for x in pred)
        self._closure()

    # -- structure ---------------------------------------------------------

    def _closure(self):
        order = _topological_order(self.size, self.succ)
        if order is None:
            raise ModelError("causal cycle: the next-state relation is not acyclic")
        up = [0] * self.size
        for k in reversed(order):
            m = 1 << k
            for j in self.succ[k]:
                m |= up[j]
            up[k] = m
        down = [0] * self.size
        for k in order:
            m = 1 << k
            for j in self.pred[k]:
                m |= down[j]
            down[k] = m
        self.up = tuple(up)              # R* successors, reflexive
        self.down = tuple(down)          # R* predecessors, reflexive
        self.step_up = tuple((1 << k) | _bits(self.succ[k]) for k in range(self.size))
        self.step_down = tuple((1 << k) | _bits(self.pred[k]) for k in range(self.size))
        self.comp_masks = tuple(((1 << n) - 1) << off for n, off in zip(self.lengths, self.offsets))
        self.final_mask = _bits(off + n - 1 for n, off in zip(self.lengths, self.offsets))
        self.full_mask = (1 << self.size) - 1

    def gid(self, s: StateId) -> int:
        try:
            return self._gid[s]
        except KeyError:
            raise ModelError(f"state {s} does not belong to the computation") from None

    def state(self, component: str, index: int) -> StateId:
        s = StateId(component, index)
        self.gid(s)
        return s

    def comp_mask(self, component: str) -> int:
        try:
            return self.comp_masks[self._comp_index[component]]
        except KeyError:
            raise ModelError(f"undeclared component {component!r}") from None

    def prop_mask(self, prop: str) -> int:
        return _bits(k for k, lab in enumerate(self.labels) if prop in lab)

    def alphabet(self) -> list[str]:
        return sorted(set().union(*self.labels)) if self.labels else []

    def mask(self, ds: DsLike) -> int:
        if isinstance(ds, int):
            if ds <= 0 or ds > self.full_mask:
                raise ModelError(f"mask {ds} is not a nonempty distributed state")
            return ds
        if isinstance(ds, str):
            ds = parse_ds(ds)
        members = ds.members if isinstance(ds, DistributedState) else list(ds)
        m = 0
        for s in members:
            m |= 1 << self.gid(s)
        if m == 0:
            raise ModelError("a distributed state must be nonempty")
        return m

    def ds(self, mask: int) -> DistributedState:
        return DistributedState(frozenset(self.states[k] for k in _iter_bits(mask)))

    def labels_of(self, s: StateId) -> frozenset:
        return self.labels[self.gid(s)]

    # -- relations ---------------------------------------------------------

    def reaches(self, s: StateId, t: StateId) -> bool:
        """(s, t) in R*."""
        return bool(self.up[self.gid(s)] >> self.gid(t) & 1)

    def reaches_eq(self, s: StateId, t: StateId) -> bool:
        """(s, t) in R=."""
        return bool(self.step_up[self.gid(s)] >> self.gid(t) & 1)

    def next_pairs(self) -> list[tuple]:
        """The relation R as pairs of StateIds."""
        return [(self.states[a], self.states[b]) for a in range(self.size) for b in self.succ[a]]

    def union_table(self, relation: str) -> np.ndarray:
        """``table[mask]`` = union of per-state masks over the members of ``mask``.

        ``relation`` is one of ``up``, ``down``, ``step_up``, ``step_down``.
        """
        if relation not in self._tables:
            single = getattr(self, relation)
            self._tables[relation] = _union_table(single, self.size)
        return self._tables[relation]

    def __repr__(self) -> str:
        parts = ", ".join(f"{c}:{n}" for c, n in zip(self.components, self.lengths))
        return f"<Computation {parts}; {len(self.messages)} messages>"

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"component {c}: {n}" for c, n in zip(self.components, self.lengths)]
        for k, lab in enumerate(self.labels):
            if lab:
                lines.append(f"labels {self.states[k]}: {' '.join(sorted(lab))}")
        for a, b in self.messages:
            lines.append(f"msg {self.states[a]} -> {self.states[b]}")
        return "\n".join(lines) + "\n"


def _bits(ks: Iterable[int]) -> int:
    m = 0
    for k in ks:
        m |= 1 << k
    return m


def _iter_bits(mask: int) -> Iterator[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def _topological_order(n: int, succ) -> list | None:
    indeg = [0] * n
    for k in range(n):
        for j in succ[k]:
            indeg[j] += 1
    ready = [k for k in range(n) if indeg[k] == 0]
    ready.reverse()
    order = []
    while ready:
        k = ready.pop()
        order.append(k)
        for j in succ[k]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return order if len(order) == n else None


def _union_table(single: Sequence[int], n: int) -> np.ndarray:
    dtype = np.uint32 if n <= 32 else np.uint64
    table = np.zeros(1 << n, dtype=dtype)
    for b in range(n):
        lo = 1 << b
        table[lo:2 * lo] = table[0:lo] | dtype(single[b])
    return table


def parse_ds(text: str) -> DistributedState:
    """``"m.0 n.3"`` or ``"{m.0, n.3}"`` -> DistributedState."""
    items = re.findall(r"([A-Za-z][A-Za-z0-9_]*)\.(\d+)", text)
    return DistributedState(frozenset(StateId(c, int(i)) for c, i in items))


# --------------------------------------------------------------------------
# Building and validation
# --------------------------------------------------------------------------

def build(decl: ComputationDecl) -> Computation:
    names = [name for name, _ in decl.components]
    seen = set()
    for name, count in decl.components:
        if name in seen:
            raise ModelError(f"component {name!r} declared twice")
        seen.add(name)
        if count < 1:
            raise ModelError(f"component {name!r} has no states")
    if not names:
        raise ModelError("a computation needs at least one component")
    lengths = dict(decl.components)

    def check_state(ref):
        name, idx = ref
        if name not in lengths:
            raise ModelError(f"undeclared component {name!r}")
        if not 0 <= idx < lengths[name]:
            raise ModelError(f"state {name}.{idx} out of range (component has {lengths[name]} states)")

    offsets, acc = {}, 0
    for name, count in decl.components:
        offsets[name] = acc
        acc += count
    labels = [frozenset()] * acc
    for ref, props in decl.labels.items():
        check_state(ref)
        labels[offsets[ref[0]] + ref[1]] = frozenset(props)
    messages = []
    for src, dst in decl.messages:
        check_state(src)
        check_state(dst)
        if src[0] == dst[0]:
            raise ModelError(f"message {src[0]}.{src[1]} -> {dst[0]}.{dst[1]} stays within one component")
        messages.append((offsets[src[0]] + src[1], offsets[dst[0]] + dst[1]))
    return Computation(names, [lengths[n] for n in names], labels, messages)


_REF = r"([A-Za-z][A-Za-z0-9_]*)\.(\d+)"
_COMPONENT_RE = re.compile(r"component\s+([A-Za-z][A-Za-z0-9_]*)\s*:\s*(\d+)\s*$")
_LABELS_RE = re.compile(rf"labels\s+{_REF}\s*:(.*)$")
_MSG_RE = re.compile(rf"msg\s+{_REF}\s*->\s*{_REF}\s*$")
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def parse_model(text: str) -> ComputationDecl:
    decl = ComputationDecl()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _COMPONENT_RE.match(line):
            decl.components.append((m.group(1), int(m.group(2))))
        elif m := _LABELS_RE.match(line):
            ref = (m.group(1), int(m.group(2)))
            if ref in decl.labels:
                raise ModelError(f"line {lineno}: duplicate state index {ref[0]}.{ref[1]}")
            props = m.group(3).split()
            for p in props:
                if not _IDENT_RE.match(p):
                    raise ParseError(f"bad proposition name {p!r}", raw, raw.find(p), lineno)
            decl.labels[ref] = set(props)
        elif m := _MSG_RE.match(line):
            decl.messages.append(((m.group(1), int(m.group(2))), (m.group(3), int(m.group(4)))))
        else:
            raise ParseError(f"unrecognized model line {line!r}", raw, 0, lineno)
    return decl


def load_model(source: Union[str, Path]) -> Computation:
    """Build a computation from model-file text or a path to one."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and Path(source).is_file()):
        source = Path(source).read_text()
    return build(parse_model(source))


# --------------------------------------------------------------------------
# Operations over distributed states
# --------------------------------------------------------------------------

def causal_closure(c: Computation) -> set[tuple]:
    """R* as a set of (StateId, StateId) pairs."""
    return {(c.states[a], c.states[b]) for a in range(c.size) for b in _iter_bits(c.up[a])}


def concurrent(c: Computation, s: StateId, t: StateId) -> bool:
    return not c.reaches(s, t) and not c.reaches(t, s)


def _leq_masks(single: Sequence[int], a: int, b: int) -> bool:
    covered = 0
    for k in _iter_bits(a):
        if not single[k] & b:
            return False
        covered |= single[k]
    return b & ~covered == 0


def leq(c: Computation, ds: DsLike, ds2: DsLike) -> bool:
    """ds <= ds2: every member of ds reaches a member of ds2 under R*, and
    every member of ds2 is reached from a member of ds."""
    return _leq_masks(c.up, c.mask(ds), c.mask(ds2))


def leq_c(c: Computation, ds: DsLike, ds2: DsLike) -> bool:
    """As :func:`leq` with R= (same or immediately next state) in place of R*."""
    return _leq_masks(c.step_up, c.mask(ds), c.mask(ds2))


def initial_ds(c: Computation) -> DistributedState:
    return c.ds(_bits(c.offsets))


def check_cap(c: Computation, cap: int = DEFAULT_CAP):
    if c.size > cap:
        raise CapExceeded(c.size, cap)


def enumerate_ds(c: Computation, cap: int = DEFAULT_CAP) -> Iterator[DistributedState]:
    """Every nonempty set of states, in ascending bitmask order."""
    check_cap(c, cap)
    for mask in range(1, 1 << c.size):
        yield c.ds(mask)
