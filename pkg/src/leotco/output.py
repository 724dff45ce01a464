"""Result serialisation with provenance headers.

Data files are deterministic: they embed the seed, asset versions and a hash
of the resolved configuration, never a timestamp. Timestamps go to the
``run.log`` sidecar only.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from leotco import __version__


def _clean(obj):
    """Replace non-finite floats with ``None`` so JSON stays strict."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(config: Mapping) -> str:
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()[:16]


def provenance(command: str, config: Mapping, asset_versions: Mapping[str, str], seed: int | None) -> dict:
    return {
        "tool": f"leotco {__version__}",
        "command": command,
        "master_seed": seed,
        "asset_versions": dict(sorted(asset_versions.items())),
        "config_hash": config_hash(config),
    }


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(rows: Sequence[Mapping], header: Sequence[str], prov: Mapping | None = None) -> str:
    """CSV text with ``# key: value`` provenance lines ahead of the header."""
    buf = io.StringIO()
    if prov:
        for key, value in prov.items():
            if isinstance(value, Mapping):
                value = ";".join(f"{k}={v}" for k, v in value.items())
            buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(row.get(col)) for col in header])
    return buf.getvalue()


def render_json(payload: Mapping, prov: Mapping | None = None) -> str:
    doc = {"provenance": dict(prov)} if prov else {}
    doc.update(payload)
    return json.dumps(_clean(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def append_log(directory: str | Path, lines: Iterable[str]) -> None:
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "run.log", "a", encoding="utf-8") as fh:
        for line in lines:
            fh.write(f"{stamp} {line}\n")
