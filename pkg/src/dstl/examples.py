"""Access to the example corpus shipped in ``dstl/data``."""

from __future__ import annotations

from importlib import resources


def _root():
    return resources.files("dstl").joinpath("data")


def names() -> list[str]:
    return sorted(p.name for p in _root().iterdir() if p.is_file() and not p.name.startswith("_"))


def exists(name: str) -> bool:
    return _root().joinpath(name).is_file()


def data_text(name: str) -> str:
    return _root().joinpath(name).read_text()
