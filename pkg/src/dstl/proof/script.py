"""Proof script text format.

    components m n                  # optional, applies to the whole file
    lemma D3 (m; F, F1)             # parameters optional; inferred when absent
    1. [m](F -> F1)        ; hyp
    2. dsl: ...            ; axiom K m F F1
    3. ...                 ; MP 1 2
    4. ...                 ; lemma D1 3 m (p & q)
    qed

A justification is ``hyp``, ``taut``, ``axiom NAME args``, ``RULE lines args``
or ``lemma NAME lines args``.  ``args`` bind the schema parameters in order
(component parameters first); ``name=value`` binds by name.  An argument is an
identifier or a parenthesized formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..errors import DstlError, ParseError, ProofError
from ..formula import Plain, parse_dsl, parse_temporal

HYP, TAUT, AXIOM, RULE, LEMMA = "hyp", "taut", "axiom", "rule", "lemma"


@dataclass(frozen=True)
class Justification:
    kind: str                      # hyp | taut | axiom | rule | lemma
    name: str = ""
    citations: tuple = ()          # cited line indices
    args: tuple = ()               # positional argument texts
    named: tuple = ()              # (param, text) pairs

    def render(self) -> str:
        parts = []
        if self.kind in (HYP, TAUT):
            return self.kind
        if self.kind in (AXIOM, LEMMA):
            parts.append(self.kind)
        parts.append(self.name)
        parts.extend(str(c) for c in self.citations)
        parts.extend(self.args)
        parts.extend(f"{k}={v}" for k, v in self.named)
        return " ".join(parts)


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: object
    text: str
    justification: Justification
    declared_level: Optional[str] = None
    source_line: int = 0


@dataclass
class ProofScript:
    name: str
    lines: list = field(default_factory=list)
    comp_params: Optional[tuple] = None
    formula_params: Optional[tuple] = None
    components: Optional[tuple] = None
    source: str = ""
    source_line: int = 0

    def render(self) -> str:
        head = f"lemma {self.name}"
        if self.comp_params is not None or self.formula_params is not None:
            head += f" ({', '.join(self.comp_params or ())}; {', '.join(self.formula_params or ())})"
        out = [head]
        for ln in self.lines:
            lvl = f"{ln.declared_level.lower()}: " if ln.declared_level else ""
            out.append(f"{ln.index}. {lvl}{ln.text} ; {ln.justification.render()}")
        out.append("qed")
        return "\n".join(out)


_LINE_RE = re.compile(r"\s*(\d+)\s*\.\s*(?:(dsl|dstl)\s*:)?\s*(.*)$", re.IGNORECASE)
_HEAD_RE = re.compile(r"(?:lemma|theorem)\s+([A-Za-z][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")
_ARG_RE = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)\s*=\s*)?(\(|[A-Za-z0-9_]+)")


def _split_args(text: str, lineno: int, raw: str) -> list:
    """Tokens: identifiers/integers, or balanced parenthesized groups; each may
    carry a ``name=`` prefix."""
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _ARG_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad justification argument at {text[pos:]!r}", raw, 0, lineno)
        key = m.group(1)
        if m.group(2) == "(":
            depth, k = 0, m.start(2)
            while k < len(text):
                if text[k] == "(":
                    depth += 1
                elif text[k] == ")":
                    depth -= 1
                    if depth == 0:
                        break
                k += 1
            if depth:
                raise ParseError("unbalanced parenthesis in justification", raw, 0, lineno)
            out.append((key, text[m.start(2):k + 1]))
            pos = k + 1
        else:
            out.append((key, m.group(2)))
            pos = m.end()
    return out


def _parse_justification(text: str, lineno: int, raw: str) -> Justification:
    words = text.strip().split(None, 1)
    if not words:
        raise ParseError("missing justification", raw, 0, lineno)
    head = words[0]
    rest = words[1] if len(words) > 1 else ""
    low = head.lower()
    if low == "hyp" and not rest:
        return Justification(HYP)
    if low in ("taut", "pc") and not rest:
        return Justification(TAUT)
    if low == "axiom":
        parts = rest.split(None, 1)
        if not parts:
            raise ParseError("axiom needs a name", raw, 0, lineno)
        if parts[0] == "PC":
            return Justification(TAUT)
        kind, name, rest = AXIOM, parts[0], parts[1] if len(parts) > 1 else ""
    elif low == "lemma":
        parts = rest.split(None, 1)
        if not parts:
            raise ParseError("lemma citation needs a name", raw, 0, lineno)
        kind, name, rest = LEMMA, parts[0], parts[1] if len(parts) > 1 else ""
    else:
        kind, name = RULE, head
    cites, args, named = [], [], []
    for key, tok in _split_args(rest, lineno, raw):
        if key is None and tok.isdigit() and not args:
            cites.append(int(tok))
        elif key is None:
            args.append(tok)
        else:
            named.append((key, tok))
    return Justification(kind, name, tuple(cites), tuple(args), tuple(named))


def _parse_params(text: str) -> tuple:
    if ";" in text:
        comps, forms = text.split(";", 1)
    else:
        comps, forms = text, ""
    names = lambda s: tuple(x.strip() for x in s.split(",") if x.strip())
    return names(comps), names(forms)


def parse_proofs(text: str, source: str = "<script>") -> list[ProofScript]:
    scripts: list[ProofScript] = []
    components = None
    current: Optional[ProofScript] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("components ") and current is None:
                components = tuple(line.split()[1:])
                continue
            if m := _HEAD_RE.match(line):
                if current is not None:
                    raise ParseError(f"lemma {current.name} is missing qed", raw, 0, lineno)
                current = ProofScript(m.group(1), components=components, source=source,
                                      source_line=lineno)
                if m.group(2) is not None:
                    current.comp_params, current.formula_params = _parse_params(m.group(2))
                    if components is not None:
                        # a lemma's own component parameters are always in scope
                        extra = tuple(c for c in current.comp_params if c not in components)
                        current.components = components + extra
                continue
            if line == "qed":
                if current is None:
                    raise ParseError("qed outside a lemma", raw, 0, lineno)
                if not current.lines:
                    raise ParseError(f"lemma {current.name} has no lines", raw, 0, lineno)
                scripts.append(current)
                current = None
                continue
            if current is None:
                raise ParseError(f"line outside a lemma: {line!r}", raw, 0, lineno)
            m = _LINE_RE.match(line)
            if not m or ";" not in m.group(3):
                raise ParseError("expected 'N. formula ; justification'", raw, 0, lineno)
            index = int(m.group(1))
            if index != len(current.lines) + 1:
                raise ParseError(f"line number {index} out of sequence (expected {len(current.lines) + 1})",
                                 raw, 0, lineno)
            body, just = m.group(3).rsplit(";", 1)
            formula = parse_temporal(body.strip(), current.components)
            if isinstance(formula, Plain):
                formula = formula.formula
            level = m.group(2).upper() if m.group(2) else None
            current.lines.append(ProofLine(index, formula, body.strip(),
                                           _parse_justification(just, lineno, raw), level, lineno))
        except ParseError as e:
            if e.line is None:
                raise ParseError(e.message, raw, e.pos, lineno) from None
            raise
    if current is not None:
        raise ParseError(f"lemma {current.name} is missing qed", "", 0, None)
    return scripts


def parse_argument(text: str, components=None):
    """A justification argument as a DSL formula."""
    inner = text[1:-1] if text.startswith("(") and text.endswith(")") else text
    try:
        return parse_dsl(inner, components)
    except DstlError as e:
        raise ProofError(f"bad argument {text!r}: {e}") from None
