"""Chart catalogue: discovery and metadata for a directory of spec files.

Spec files are ``*.vl.json`` under the catalogue root; data files are
sibling CSVs; an optional sibling ``<stem>.png`` is carried as an opaque
preview attachment (no image processing happens here).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .chart import ChartSpec, LoadedChart, load_chart, parse_spec
from .errors import FeelgridError, TypeCoercionError


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    path: Path
    digest: str  # sha256 of the spec file bytes
    spec: ChartSpec
    schema: tuple[tuple[str, str], ...]  # post-transform (name, type)
    row_count: int
    preview: bytes | None = None


@dataclass(frozen=True)
class SkipReport:
    path: Path
    reason: str


@dataclass(frozen=True)
class ChartCatalogue:
    root: Path
    entries: tuple[CatalogueEntry, ...] = ()
    skipped: tuple[SkipReport, ...] = ()

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def get(self, name: str) -> CatalogueEntry | None:
        for e in self.entries:
            if e.name == name:
                return e
        return None

    def find(self, query: str) -> CatalogueEntry | None:
        """Loose lookup for conversational chart names."""
        norm = _normalize(query)
        for e in self.entries:
            if _normalize(e.name) == norm or _normalize(e.spec.title) == norm:
                return e
        for e in self.entries:
            if norm and (norm in _normalize(e.name) or norm in _normalize(e.spec.title)):
                return e
        # match on words: "interest rates" ~ "interest-rates"
        words = set(norm.split())
        for e in self.entries:
            target = set(_normalize(e.name).split()) | set(_normalize(e.spec.title).split())
            if words and words <= target:
                return e
        return None

    def summary(self) -> list[dict]:
        return [
            {
                "name": e.name,
                "title": e.spec.title or e.name,
                "mark": e.spec.mark,
                "columns": [{"name": n, "type": t} for n, t in e.schema],
                "rows": e.row_count,
                "digest": e.digest,
                "has_preview": e.preview is not None,
            }
            for e in self.entries
        ]


def _normalize(text: str) -> str:
    return " ".join("".join(c.lower() if c.isalnum() else " " for c in text).split())


def _entry_name(path: Path, root: Path) -> str:
    stem = path.name[: -len(".vl.json")]
    rel = path.relative_to(root)
    if len(rel.parts) == 1:
        return stem
    return "/".join(list(rel.parts[:-1]) + [stem])


def scan_catalogue(root: Path | str) -> ChartCatalogue:
    """Build a catalogue from every parseable spec under ``root``.

    Unparseable files are skipped and reported; entries sort by name so
    scans are deterministic.
    """
    root = Path(root)
    if not root.is_dir():
        raise OSError(f"catalogue root is not a readable directory: {root}")
    entries: list[CatalogueEntry] = []
    skipped: list[SkipReport] = []
    for path in sorted(root.rglob("*.vl.json")):
        raw = path.read_bytes()
        name = _entry_name(path, root)
        try:
            spec = parse_spec(raw, name=name, base=path.parent)
            loaded = load_chart(spec)
        except (FeelgridError, OSError, TypeCoercionError) as exc:
            skipped.append(SkipReport(path=path, reason=str(exc)))
            continue
        preview_path = path.with_name(path.name[: -len(".vl.json")] + ".png")
        preview = preview_path.read_bytes() if preview_path.exists() else None
        entries.append(
            CatalogueEntry(
                name=name,
                path=path,
                digest=hashlib.sha256(raw).hexdigest(),
                spec=spec,
                schema=tuple((c.name, c.type) for c in loaded.table.columns),
                row_count=loaded.table.row_count,
                preview=preview,
            )
        )
    entries.sort(key=lambda e: e.name)
    return ChartCatalogue(root=root, entries=tuple(entries), skipped=tuple(skipped))


def load_entry(catalogue: ChartCatalogue, name: str) -> LoadedChart:
    entry = catalogue.get(name) or catalogue.find(name)
    if entry is None:
        raise KeyError(f"no chart named {name!r} in catalogue (have {catalogue.names()})")
    return load_chart(entry.spec)
