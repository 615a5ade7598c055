"""Single-line mutations of proof scripts.

A checked script should break at exactly the line that was tampered with.
Two mutation kinds are generated: swapping two cited premises of a line and
shifting one citation by one line up or down.  Mutations that cite a line
with the same normalized formula as the original are dropped, since they do
not change what the step claims.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterator, Optional

from .kernel import LemmaLibrary, ProofResult, check_proof
from .match import normal
from .script import ProofScript


@dataclass(frozen=True)
class Mutation:
    kind: str          # "swap" or "shift"
    line: int          # index of the mutated line
    citations: tuple   # the mutated citation list
    script: ProofScript

    def describe(self) -> str:
        cites = " ".join(map(str, self.citations))
        return f"{self.script.name} line {self.line}: {self.kind} -> cites {cites}"


def _with_citations(script: ProofScript, pos: int, cites: tuple) -> ProofScript:
    line = script.lines[pos]
    just = dataclasses.replace(line.justification, citations=cites)
    lines = list(script.lines)
    lines[pos] = dataclasses.replace(line, justification=just)
    return dataclasses.replace(script, lines=lines)


def mutations(script: ProofScript) -> Iterator[Mutation]:
    forms = {ln.index: normal(ln.formula) for ln in script.lines}

    def same(a: int, b: int) -> bool:
        return a in forms and b in forms and forms[a] == forms[b]

    for pos, line in enumerate(script.lines):
        cites = line.justification.citations
        for i in range(len(cites)):
            for j in range(i + 1, len(cites)):
                if same(cites[i], cites[j]):
                    continue
                new = list(cites)
                new[i], new[j] = new[j], new[i]
                yield Mutation("swap", line.index, tuple(new), _with_citations(script, pos, tuple(new)))
        for i, c in enumerate(cites):
            for d in (-1, 1):
                if same(c, c + d):
                    continue
                new = cites[:i] + (c + d,) + cites[i + 1:]
                yield Mutation("shift", line.index, new, _with_citations(script, pos, new))


@dataclass(frozen=True)
class MutationOutcome:
    mutation: Mutation
    result: ProofResult

    @property
    def caught(self) -> bool:
        """Rejected, and rejected at the mutated line."""
        return not self.result.ok and self.result.failed_line == self.mutation.line


def run_mutations(script: ProofScript, lib: Optional[LemmaLibrary] = None) -> list[MutationOutcome]:
    return [MutationOutcome(m, check_proof(m.script, lib)) for m in mutations(script)]
