"""Entity records, corpus statistics and corpus file import/export.

The corpus is entity-level: one surface form, one CoNLL-2003 class label
(PER/LOC/ORG/MISC), no O tag. Entity ids are content hashes of the surface
so annotation journals survive pipeline re-runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .candidates import Candidate

LABELS = ("PER", "LOC", "ORG", "MISC")
LABEL_SET = frozenset(LABELS)


class InvalidLabel(ValueError):
    """Label outside the closed PER/LOC/ORG/MISC tagset."""


class InconsistentCounts(ValueError):
    """Pipeline stage counts are not monotonically decreasing."""


class UnlabeledRecord(ValueError):
    """Export hit records without a final label."""

    def __init__(self, ids: Sequence[str]) -> None:
        super().__init__(f"{len(ids)} record(s) lack a final label")
        self.ids = list(ids)


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateSurface(ValueError):
    def __init__(self, surface: str) -> None:
        super().__init__(f"duplicate surface {surface!r}")
        self.surface = surface


def check_label(label: str) -> str:
    if label not in LABEL_SET:
        raise InvalidLabel(f"{label!r} is not one of {', '.join(LABELS)}")
    return label


def entity_id(surface: str) -> str:
    """Stable id: truncated content hash of the surface form."""
    return hashlib.sha256(surface.encode("utf-8")).hexdigest()[:16]


@dataclass
class EntityRecord:
    """A selected entity with annotator labels and provenance."""

    id: str
    surface: str
    candidate: Optional[Candidate] = None
    annotations: dict[str, str] = field(default_factory=dict)
    final_label: Optional[str] = None
    provenance: list[tuple[str, str]] = field(default_factory=list)

    @classmethod
    def from_surface(cls, surface: str, **kwargs) -> "EntityRecord":
        return cls(id=entity_id(surface), surface=surface, **kwargs)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "surface": self.surface,
            "candidate": self.candidate.to_json() if self.candidate else None,
            "annotations": dict(self.annotations),
            "final_label": self.final_label,
            "provenance": [list(pair) for pair in self.provenance],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EntityRecord":
        cand = obj.get("candidate")
        return cls(
            id=obj["id"],
            surface=obj["surface"],
            candidate=Candidate.from_json(cand) if cand else None,
            annotations=dict(obj.get("annotations") or {}),
            final_label=obj.get("final_label"),
            provenance=[tuple(p) for p in obj.get("provenance") or []],
        )


@dataclass
class CorpusStats:
    """Corpus-level statistics: stage counts, NE density, class table."""

    pages_accessed: int
    links_extracted: int
    probable_after_dedup: int
    selected: int
    ne_density: float
    class_counts: dict[str, int]
    class_percentages: dict[str, float]

    def display_percentages(self) -> dict[str, int]:
        """Class percentages rounded to integers for report display."""
        return {label: round(pct) for label, pct in self.class_percentages.items()}

    def to_json(self) -> dict:
        return {
            "pages_accessed": self.pages_accessed,
            "links_extracted": self.links_extracted,
            "probable_after_dedup": self.probable_after_dedup,
            "selected": self.selected,
            "ne_density": self.ne_density,
            "class_counts": dict(self.class_counts),
            "class_percentages": dict(self.class_percentages),
        }


def compute_stats(
    records: Sequence[EntityRecord],
    pipeline_counts: tuple[int, int, int],
) -> CorpusStats:
    """Derive corpus statistics from labeled records and stage counts.

    ``pipeline_counts`` is (pages accessed, links extracted, probable NEs
    after dedup); the selected count is the number of records. NE density
    is selected / links extracted as a percentage rounded to 2 decimals.
    """
    pages, links, probable = pipeline_counts
    selected = len(records)
    if not links >= probable >= selected:
        raise InconsistentCounts(
            f"expected links >= probable >= selected, "
            f"got {links} >= {probable} >= {selected}"
        )
    density = round(100.0 * selected / links, 2) if links else 0.0
    labeled = [r for r in records if r.final_label is not None]
    class_counts = {label: 0 for label in LABELS}
    for rec in labeled:
        class_counts[check_label(rec.final_label)] += 1
    total = len(labeled)
    if total:
        class_percentages = {
            label: 100.0 * count / total for label, count in class_counts.items()
        }
    else:
        class_counts = {}
        class_percentages = {}
    return CorpusStats(
        pages_accessed=pages,
        links_extracted=links,
        probable_after_dedup=probable,
        selected=selected,
        ne_density=density,
        class_counts=class_counts,
        class_percentages=class_percentages,
    )


def stats_from_class_counts(
    class_counts: dict[str, int],
    pipeline_counts: tuple[int, int, int],
) -> CorpusStats:
    """compute_stats variant fed by a class-count table directly."""
    records = []
    for label, count in class_counts.items():
        check_label(label)
        for i in range(count):
            records.append(
                EntityRecord.from_surface(f"{label}-{i}", final_label=label)
            )
    return compute_stats(records, pipeline_counts)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def export_corpus(
    records: Sequence[EntityRecord], path: Path, format: str = "tsv"
) -> None:
    """Write the labeled corpus, sorted by surface, atomically.

    tsv: one ``surface<TAB>LABEL`` line per entity. jsonl: full records.
    Every record must carry a final label.
    """
    missing = [r.id for r in records if r.final_label is None]
    if missing:
        raise UnlabeledRecord(missing)
    ordered = sorted(records, key=lambda r: r.surface)
    if format == "tsv":
        body = "".join(f"{r.surface}\t{r.final_label}\n" for r in ordered)
    elif format == "jsonl":
        body = "".join(
            json.dumps(r.to_json(), ensure_ascii=False) + "\n" for r in ordered
        )
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    _atomic_write(Path(path), body)


def import_corpus(path: Path, format: str = "tsv") -> list[EntityRecord]:
    """Read a corpus file back; inverse of export on the exported fields."""
    records: list[EntityRecord] = []
    seen: set[str] = set()
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if format == "tsv":
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError(line_no, f"expected 2 tab fields, got {len(parts)}")
                surface, label = parts
                if not surface:
                    raise ParseError(line_no, "empty surface")
                if label not in LABEL_SET:
                    raise ParseError(line_no, f"bad label {label!r}")
                record = EntityRecord.from_surface(surface, final_label=label)
            elif format == "jsonl":
                try:
                    record = EntityRecord.from_json(json.loads(line))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise ParseError(line_no, str(exc)) from exc
                if record.final_label is not None:
                    check_label(record.final_label)
            else:
                raise ValueError(f"unknown corpus format {format!r}")
            if record.surface in seen:
                raise DuplicateSurface(record.surface)
            seen.add(record.surface)
            records.append(record)
    return records


def write_stats_json(stats: CorpusStats, path: Path) -> None:
    _atomic_write(
        Path(path), json.dumps(stats.to_json(), indent=2, sort_keys=True) + "\n"
    )


def records_from_candidates(
    candidates: Iterable[Candidate],
    provenance: Optional[dict[str, list[tuple[str, str]]]] = None,
) -> list[EntityRecord]:
    """Build unlabeled entity records for every selected candidate."""
    records = []
    for cand in candidates:
        if not cand.selected:
            continue
        records.append(
            EntityRecord.from_surface(
                cand.surface,
                candidate=cand,
                provenance=list((provenance or {}).get(cand.surface, [])),
            )
        )
    return records
