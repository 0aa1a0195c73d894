"""Two-annotator labeling workflow with an append-only event journal.

State is derived purely from the journal (label and adjudication events),
so replaying the journal reconstructs the exact effective state. Agreement
is computed over entities labeled by both primary annotators; Cohen's
kappa accompanies the raw percent agreement.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .corpus import LABELS, EntityRecord, check_label


class UnknownAnnotator(LookupError):
    pass


class UnknownEntity(LookupError):
    pass


class NotEnoughAnnotators(RuntimeError):
    pass


class NotDisagreed(ValueError):
    """Adjudication attempted on an entity that is not in disagreement."""


class Unresolved(RuntimeError):
    """Finalize attempted while entities are still unlabeled or disputed."""

    def __init__(self, entity_ids: Sequence[str]) -> None:
        super().__init__(f"{len(entity_ids)} unresolved entity(ies)")
        self.entity_ids = list(entity_ids)


@dataclass(frozen=True)
class AnnotationEvent:
    """One journaled action: a label submission or an adjudication."""

    kind: str  # "label" | "adjudicate"
    entity_id: str
    label: str
    annotator_id: Optional[str] = None
    submitted_at: str = ""

    def to_json(self) -> dict:
        obj = {
            "kind": self.kind,
            "entity_id": self.entity_id,
            "label": self.label,
            "submitted_at": self.submitted_at,
        }
        if self.annotator_id is not None:
            obj["annotator"] = self.annotator_id
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "AnnotationEvent":
        return cls(
            kind=obj["kind"],
            entity_id=obj["entity_id"],
            label=obj["label"],
            annotator_id=obj.get("annotator"),
            submitted_at=obj.get("submitted_at", ""),
        )


@dataclass
class AgreementReport:
    """Pairwise agreement between the two primary annotators."""

    n_labeled_by_both: int
    n_agree: int
    percent_agreement: Optional[float]
    kappa: Optional[float]
    disagreements: list[dict]
    empty: bool = False

    def to_json(self) -> dict:
        return {
            "n_labeled_by_both": self.n_labeled_by_both,
            "n_agree": self.n_agree,
            "percent_agreement": self.percent_agreement,
            "kappa": self.kappa,
            "disagreements": self.disagreements,
            "empty": self.empty,
        }


def cohens_kappa(pairs: Sequence[tuple[str, str]]) -> float:
    """Two-rater chance-corrected agreement over the 4-label table."""
    n = len(pairs)
    if n == 0:
        raise ValueError("kappa needs at least one jointly labeled item")
    observed = sum(1 for a, b in pairs if a == b) / n
    marg_a = {label: 0 for label in LABELS}
    marg_b = {label: 0 for label in LABELS}
    for a, b in pairs:
        marg_a[a] += 1
        marg_b[b] += 1
    expected = sum(marg_a[l] * marg_b[l] for l in LABELS) / (n * n)
    if expected == 1.0:
        # Both raters constant: total agreement iff observed is also 1.
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


class AnnotationService:
    """Serialized annotation workflow over a fixed roster of annotators.

    The first two roster entries are the primary annotators whose labels
    drive agreement and finalization; any further entries are observers.
    All mutations append to the journal first, then update derived state,
    under one lock (the journal append is the linearization point).
    """

    def __init__(
        self,
        records: Sequence[EntityRecord],
        annotators: Sequence[str],
        journal_path: Optional[Path] = None,
    ) -> None:
        if len(set(annotators)) != len(annotators):
            raise ValueError("duplicate annotator ids in roster")
        self.records = {r.id: r for r in records}
        if len(self.records) != len(records):
            raise ValueError("duplicate entity ids")
        self.annotators = list(annotators)
        self.journal_path = Path(journal_path) if journal_path else None
        self._lock = threading.Lock()
        # effective label per (entity, annotator); last write wins
        self._labels: dict[str, dict[str, str]] = {r.id: {} for r in records}
        self._adjudications: dict[str, str] = {}
        self._journal: list[AnnotationEvent] = []
        if self.journal_path and self.journal_path.exists():
            self._replay_file(self.journal_path)

    # -- journal ----------------------------------------------------------

    def _replay_file(self, path: Path) -> None:
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(AnnotationEvent.from_json(json.loads(line)), journal=False)

    def _apply(self, event: AnnotationEvent, journal: bool = True) -> None:
        if event.entity_id not in self.records:
            raise UnknownEntity(event.entity_id)
        check_label(event.label)
        if event.kind == "label":
            if event.annotator_id not in self.annotators:
                raise UnknownAnnotator(str(event.annotator_id))
            self._labels[event.entity_id][event.annotator_id] = event.label
        elif event.kind == "adjudicate":
            self._adjudications[event.entity_id] = event.label
        else:
            raise ValueError(f"unknown event kind {event.kind!r}")
        self._journal.append(event)
        if journal and self.journal_path:
            with self.journal_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event.to_json(), ensure_ascii=False) + "\n")
                fh.flush()

    @property
    def journal(self) -> list[AnnotationEvent]:
        return list(self._journal)

    # -- workflow ---------------------------------------------------------

    def _check_annotator(self, annotator_id: str) -> None:
        if annotator_id not in self.annotators:
            raise UnknownAnnotator(annotator_id)

    def next_task(self, annotator_id: str) -> Optional[EntityRecord]:
        """Lowest-surface-ordered entity this annotator has not labeled."""
        self._check_annotator(annotator_id)
        with self._lock:
            pending = [
                rec
                for rec in self.records.values()
                if annotator_id not in self._labels[rec.id]
            ]
        if not pending:
            return None
        return min(pending, key=lambda r: r.surface)

    def submit_label(self, annotator_id: str, entity_id: str, label: str) -> None:
        self._check_annotator(annotator_id)
        if entity_id not in self.records:
            raise UnknownEntity(entity_id)
        check_label(label)
        with self._lock:
            self._apply(
                AnnotationEvent(
                    kind="label",
                    entity_id=entity_id,
                    label=label,
                    annotator_id=annotator_id,
                    submitted_at=_now(),
                )
            )

    def progress(self) -> dict:
        total = len(self.records)
        with self._lock:
            per_annotator = {
                ann: sum(1 for labels in self._labels.values() if ann in labels)
                for ann in self.annotators
            }
        return {"total": total, "labeled": per_annotator}

    def _primary_pair(self) -> tuple[str, str]:
        if len(self.annotators) < 2:
            raise NotEnoughAnnotators(
                f"need two primary annotators, have {len(self.annotators)}"
            )
        return self.annotators[0], self.annotators[1]

    def _disagreement_ids(self) -> list[str]:
        """Entities labeled differently by both primaries, not yet adjudicated."""
        first, second = self._primary_pair()
        out = []
        for eid, labels in self._labels.items():
            if first in labels and second in labels and labels[first] != labels[second]:
                if eid not in self._adjudications:
                    out.append(eid)
        return sorted(out, key=lambda eid: self.records[eid].surface)

    def disagreements(self) -> list[dict]:
        first, second = self._primary_pair()
        with self._lock:
            return [
                {
                    "entity_id": eid,
                    "surface": self.records[eid].surface,
                    "labels": {
                        first: self._labels[eid][first],
                        second: self._labels[eid][second],
                    },
                }
                for eid in self._disagreement_ids()
            ]

    def agreement(self) -> AgreementReport:
        """Percent agreement and kappa over entities labeled by both primaries."""
        first, second = self._primary_pair()
        with self._lock:
            pairs = [
                (labels[first], labels[second])
                for labels in self._labels.values()
                if first in labels and second in labels
            ]
            disagreements = [
                {
                    "entity_id": eid,
                    "surface": self.records[eid].surface,
                    "labels": {
                        first: self._labels[eid][first],
                        second: self._labels[eid][second],
                    },
                }
                for eid in sorted(
                    (
                        e
                        for e, labels in self._labels.items()
                        if first in labels
                        and second in labels
                        and labels[first] != labels[second]
                    ),
                    key=lambda eid: self.records[eid].surface,
                )
            ]
        n_both = len(pairs)
        n_agree = sum(1 for a, b in pairs if a == b)
        if n_both == 0:
            return AgreementReport(
                n_labeled_by_both=0,
                n_agree=0,
                percent_agreement=None,
                kappa=None,
                disagreements=[],
                empty=True,
            )
        return AgreementReport(
            n_labeled_by_both=n_both,
            n_agree=n_agree,
            percent_agreement=100.0 * n_agree / n_both,
            kappa=cohens_kappa(pairs),
            disagreements=disagreements,
        )

    def adjudicate(self, entity_id: str, label: str) -> None:
        if entity_id not in self.records:
            raise UnknownEntity(entity_id)
        check_label(label)
        with self._lock:
            if entity_id not in self._disagreement_ids():
                raise NotDisagreed(
                    f"entity {entity_id} is not awaiting adjudication"
                )
            self._apply(
                AnnotationEvent(
                    kind="adjudicate",
                    entity_id=entity_id,
                    label=label,
                    submitted_at=_now(),
                )
            )

    def finalize(self) -> list[EntityRecord]:
        """Set final labels: the agreed label, or the adjudicated one.

        Every entity must be labeled by both primaries and every
        disagreement adjudicated, else Unresolved lists the offenders.
        """
        first, second = self._primary_pair()
        with self._lock:
            unresolved = []
            for eid, labels in self._labels.items():
                if first not in labels or second not in labels:
                    unresolved.append(eid)
                elif labels[first] != labels[second] and eid not in self._adjudications:
                    unresolved.append(eid)
            if unresolved:
                raise Unresolved(sorted(unresolved))
            out = []
            for eid, rec in self.records.items():
                labels = self._labels[eid]
                if labels[first] == labels[second]:
                    rec.final_label = labels[first]
                else:
                    rec.final_label = self._adjudications[eid]
                rec.annotations = dict(labels)
                out.append(rec)
        return sorted(out, key=lambda r: r.surface)
