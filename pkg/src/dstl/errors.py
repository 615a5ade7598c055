"""Exception types shared across the package."""

from __future__ import annotations


class DstlError(Exception):
    """Base class for every error raised by this package."""


class ParseError(DstlError):
    def __init__(self, message: str, text: str = "", pos: int = 0, line: int | None = None):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}col {pos + 1}: {message}")


class ModelError(DstlError):
    """A computation violates the structural constraints of a space-time diagram."""


class CapExceeded(DstlError):
    """The state count is too large for exhaustive enumeration."""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{size} states exceeds the enumeration cap of {cap}")


class ProofError(DstlError):
    """A proof script line does not check."""

    def __init__(self, message: str, line: int | None = None, script: str | None = None):
        self.message = message
        self.line = line
        self.script = script
        prefix = ""
        if script is not None:
            prefix += f"{script}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)
