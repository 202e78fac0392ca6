"""Knot table ingestion.

The text format has one diagram per line, ``name | components | PD code``;
blank lines and ``#`` comments are skipped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .diagram import LinkDiagram, parse_pd
from .errors import Kh2Error

log = logging.getLogger(__name__)

BUNDLED = "knot_table.txt"

# common names accepted by --knot
ALIASES = {"unknot": "0_1", "trefoil": "3_1", "figure8": "4_1", "figure-8": "4_1", "hopf": "L2a1{1}",
           "whitehead": "L5a1{0}", "solomon": "L4a1{1}"}


@dataclass
class TableEntry:
    name: str
    components: int
    diagram: LinkDiagram


@dataclass
class KnotTable:
    entries: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)  # (line number, text, reason)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, name):
        return _resolve(name) in self.entries

    def __getitem__(self, name: str) -> LinkDiagram:
        key = _resolve(name)
        if key not in self.entries:
            raise KeyError(f"no diagram named {name!r} in the table")
        return self.entries[key].diagram

    def names(self) -> list[str]:
        return list(self.entries)

    def select(self, max_crossings: Optional[int] = None, links: Optional[bool] = None) -> list[TableEntry]:
        out = []
        for e in self.entries.values():
            if max_crossings is not None and e.diagram.n_crossings > max_crossings:
                continue
            if links is not None and (e.components > 1) != links:
                continue
            out.append(e)
        return out


def _resolve(name: str) -> str:
    return ALIASES.get(name.lower(), name) if isinstance(name, str) else name


def parse_table(text: str, source: str = "<string>") -> KnotTable:
    table = KnotTable()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        try:
            if len(parts) != 3:
                raise ValueError("expected 'name | components | PD code'")
            name, comp, pd_text = parts
            if not name:
                raise ValueError("empty name")
            if name in table.entries:
                raise ValueError(f"duplicate name {name!r}")
            n_comp = int(comp)
            d = LinkDiagram(parse_pd(pd_text), 1, name=name)
            if d.n_components != n_comp:
                raise ValueError(f"PD code has {d.n_components} components, row says {n_comp}")
        except (ValueError, Kh2Error) as e:
            table.errors.append((lineno, raw, str(e)))
            log.warning("%s:%d: row rejected: %s", source, lineno, e)
            continue
        table.entries[name] = TableEntry(name, n_comp, d)
    if not table.entries and not table.errors:
        log.warning("%s: table is empty", source)
    return table


def ingest_table(path: Union[str, Path]) -> KnotTable:
    p = Path(path)
    return parse_table(p.read_text(encoding="utf-8"), str(p))


@lru_cache(maxsize=1)
def load_table() -> KnotTable:
    """The bundled table (cached; diagrams are immutable)."""
    text = resources.files("kh2.data").joinpath(BUNDLED).read_text(encoding="utf-8")
    return parse_table(text, BUNDLED)
