"""Builtin constellation assets and their loaders.

A constellation file is a JSON object::

    {"asset_version": "...", "design": {...}, "cost_book": {...}}

with the field names of :class:`ConstellationDesign` and :class:`CostBook`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from leotco.economics import CostBook
from leotco.engine import ConstellationDesign
from leotco.errors import ConfigurationError

BUILTINS = ("starlink", "oneweb", "kuiper")
MODCOD_ASSET = "modcod_dvbs2.csv"


@dataclass(frozen=True)
class Constellation:
    design: ConstellationDesign
    cost_book: CostBook
    asset_version: str
    source: str

    def to_dict(self) -> dict:
        return {
            "asset_version": self.asset_version,
            "design": self.design.to_dict(),
            "cost_book": self.cost_book.to_dict(),
        }


def _parse(doc: object, source: str) -> Constellation:
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{source}: expected a JSON object")
    for key in ("design", "cost_book"):
        if not isinstance(doc.get(key), dict):
            raise ConfigurationError(f"{source}: missing required object {key!r}")
    try:
        design = ConstellationDesign.from_dict(doc["design"])
        book = CostBook.from_dict(doc["cost_book"])
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{source}: {exc}") from None
    return Constellation(design, book, str(doc.get("asset_version", "")), source)


def load_constellation(name_or_path: str | Path) -> Constellation:
    """Load a builtin by name (``starlink``, ``oneweb``, ``kuiper``) or a JSON file."""
    key = str(name_or_path).lower()
    if key in BUILTINS:
        text = resources.files("leotco.data").joinpath(f"{key}.json").read_text(encoding="utf-8")
        source = f"builtin:{key}"
    else:
        path = Path(name_or_path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(
                f"unknown constellation {name_or_path!r}: not a builtin ({', '.join(BUILTINS)}) "
                f"and not a readable file ({exc.strerror})"
            ) from None
        source = str(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{source}: invalid JSON: {exc}") from None
    return _parse(doc, source)


def load_cost_book(path: str | Path) -> CostBook:
    """Read a bare cost-book JSON object."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read cost book {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{path}: expected a JSON object")
    return CostBook.from_dict(doc)


def dump_constellation(constellation: Constellation) -> str:
    return json.dumps(constellation.to_dict(), indent=2, sort_keys=False) + "\n"


def reload_constellation(constellation: Constellation) -> Constellation:
    """Serialise and parse again; used to check the round trip."""
    return _parse(json.loads(dump_constellation(constellation)), "<roundtrip>")


def dump_assets(directory: str | Path) -> list[Path]:
    """Write every builtin asset to ``directory`` so it can be forked."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in BUILTINS:
        out = directory / f"{name}.json"
        out.write_text(dump_constellation(load_constellation(name)), encoding="utf-8")
        written.append(out)
    out = directory / MODCOD_ASSET
    out.write_text(resources.files("leotco.data").joinpath(MODCOD_ASSET).read_text(encoding="utf-8"), encoding="utf-8")
    written.append(out)
    return written
