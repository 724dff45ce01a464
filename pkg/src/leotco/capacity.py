"""MODCOD lookup and channel/area capacity."""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from leotco.errors import ConfigurationError, InvalidInputError

MODCOD_HEADER = ("modcod", "required_cnr_db", "spectral_efficiency")

# Modulation families in order of constellation size.
MODULATION_ORDER = ("BPSK", "QPSK", "8PSK", "16APSK", "32APSK", "64APSK")


def modulation_family(modcod_name: str) -> str:
    """``"16APSK 3/4"`` -> ``"16APSK"``."""
    family = modcod_name.split()[0].upper()
    if family not in MODULATION_ORDER:
        raise ConfigurationError(f"unknown modulation family in MODCOD name {modcod_name!r}")
    return family


def normalize_modulation(name: str) -> str:
    key = name.replace(" ", "").replace("-", "").upper()
    if key not in MODULATION_ORDER:
        raise ConfigurationError(f"unknown modulation {name!r}; expected one of {MODULATION_ORDER}")
    return key


@dataclass(frozen=True)
class ModcodEntry:
    modcod: str
    required_cnr: float  # dB
    spectral_efficiency: float  # bit/s/Hz


@dataclass(frozen=True)
class ModcodTable:
    """Threshold table, strictly increasing in both CNR and efficiency.

    ``modulation_cap`` restricts lookups to families no larger than the cap.
    """

    entries: tuple[ModcodEntry, ...]
    modulation_cap: str | None = None
    source: str = "<memory>"
    version: str = ""
    _usable: tuple[ModcodEntry, ...] = field(init=False, repr=False, compare=False)
    _thresholds: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _efficiencies: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.entries:
            raise ConfigurationError("MODCOD table is empty")
        for e in self.entries:
            if not (math.isfinite(e.required_cnr) and math.isfinite(e.spectral_efficiency)):
                raise ConfigurationError(f"non-finite value in MODCOD row {e.modcod!r}")
            if e.spectral_efficiency <= 0:
                raise ConfigurationError(f"spectral efficiency must be positive ({e.modcod!r})")
            modulation_family(e.modcod)
        for prev, cur in zip(self.entries, self.entries[1:]):
            if not cur.required_cnr > prev.required_cnr:
                raise ConfigurationError(
                    f"required CNR not strictly increasing at {cur.modcod!r} "
                    f"({cur.required_cnr} after {prev.required_cnr})"
                )
            if not cur.spectral_efficiency > prev.spectral_efficiency:
                raise ConfigurationError(
                    f"spectral efficiency not strictly increasing at {cur.modcod!r} "
                    f"({cur.spectral_efficiency} after {prev.spectral_efficiency})"
                )
        cap = None if self.modulation_cap is None else normalize_modulation(self.modulation_cap)
        object.__setattr__(self, "modulation_cap", cap)
        usable = tuple(e for e in self.entries if cap is None or _rank(modulation_family(e.modcod)) <= _rank(cap))
        if not usable:
            raise ConfigurationError(f"no MODCOD entries at or below cap {cap}")
        object.__setattr__(self, "_usable", usable)
        object.__setattr__(self, "_thresholds", tuple(e.required_cnr for e in usable))
        object.__setattr__(self, "_efficiencies", tuple(e.spectral_efficiency for e in usable))

    def with_cap(self, modulation_cap: str | None) -> ModcodTable:
        return ModcodTable(self.entries, modulation_cap, self.source, self.version)

    @property
    def usable_entries(self) -> tuple[ModcodEntry, ...]:
        """Entries at or below the modulation cap."""
        return self._usable

    @property
    def min_threshold(self) -> float:
        return self._thresholds[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.version:
            buf.write(f"# asset_version: {self.version}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(MODCOD_HEADER)
        for e in self.entries:
            w.writerow([e.modcod, repr(e.required_cnr), repr(e.spectral_efficiency)])
        return buf.getvalue()


def _rank(family: str) -> int:
    return MODULATION_ORDER.index(family)


def parse_modcod_csv(text: str, source: str = "<string>", modulation_cap: str | None = None) -> ModcodTable:
    """Parse a MODCOD CSV. Lines starting with ``#`` are provenance comments."""
    version = ""
    body = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            key, _, value = stripped.lstrip("# ").partition(":")
            if key.strip() == "asset_version":
                version = value.strip()
            continue
        if stripped:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != MODCOD_HEADER:
        raise ConfigurationError(f"{source}: MODCOD header must be {','.join(MODCOD_HEADER)}, got {header}")
    entries = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 3:
            raise ConfigurationError(f"{source}: row {lineno} has {len(row)} fields, expected 3")
        try:
            entries.append(ModcodEntry(row[0].strip(), float(row[1]), float(row[2])))
        except ValueError as exc:
            raise ConfigurationError(f"{source}: row {lineno}: {exc}") from None
    return ModcodTable(tuple(entries), modulation_cap, source, version)


def load_modcod_table(path: str | Path | None = None, modulation_cap: str | None = None) -> ModcodTable:
    """Load a MODCOD table file; ``None`` loads the shipped DVB-S2 table."""
    if path is None:
        text = resources.files("leotco.data").joinpath("modcod_dvbs2.csv").read_text(encoding="utf-8")
        return parse_modcod_csv(text, "builtin:modcod_dvbs2.csv", modulation_cap)
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read MODCOD table {path}: {exc}") from None
    return parse_modcod_csv(text, str(path), modulation_cap)


def lookup_spectral_efficiency(cnr_db: float, table: ModcodTable) -> float:
    """Efficiency of the best MODCOD whose threshold is <= ``cnr_db``; 0 in outage."""
    i = bisect.bisect_right(table._thresholds, cnr_db)
    return table._efficiencies[i - 1] if i else 0.0


def lookup_modcod(cnr_db: float, table: ModcodTable) -> ModcodEntry | None:
    i = bisect.bisect_right(table._thresholds, cnr_db)
    return table.usable_entries[i - 1] if i else None


def channel_capacity(spectral_efficiency: float, bandwidth_mhz: float, channels: int, reuse_factor: float) -> float:
    """Capacity in Mbps: ``SE * B * channels * reuse``.

    Zero efficiency (outage) is allowed and yields zero capacity.
    """
    if spectral_efficiency < 0:
        raise InvalidInputError(f"spectral efficiency must be >= 0, got {spectral_efficiency}")
    if not (bandwidth_mhz > 0 and channels > 0 and reuse_factor > 0):
        raise InvalidInputError("bandwidth, channels and reuse factor must be positive")
    return spectral_efficiency * bandwidth_mhz * channels * reuse_factor


def area_capacity(channel_capacity_mbps: float, coverage_area_km2: float) -> float:
    """Capacity density in Mbps/km²."""
    if not coverage_area_km2 > 0:
        raise InvalidInputError(f"coverage area must be positive, got {coverage_area_km2}")
    return channel_capacity_mbps / coverage_area_km2
