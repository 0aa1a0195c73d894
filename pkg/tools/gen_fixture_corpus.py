#!/usr/bin/env python3
"""Generate the 300-entity fixture corpus (65/17/13/5 class mix).

Surfaces are built systematically from small name-part inventories, so the
file is deterministic and contains no duplicates. PER/LOC/ORG carry strong
repeated character patterns; MISC is a small heterogeneous grab-bag, which
keeps it the hardest class for the n-gram models, mirroring how a real
miscellaneous class behaves.

Run from the repo root: python tools/gen_fixture_corpus.py
"""

from __future__ import annotations

from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

FIRST_NAMES = [
    "Arjun", "Kavita", "Ramesh", "Sunita", "Vikram", "Anil", "Priya",
    "Rohan", "Meena", "Suresh", "Deepak", "Lata", "Manoj", "Nisha", "Rajiv",
]
LAST_NAMES = [
    "Sharma", "Verma", "Gupta", "Singh", "Yadav", "Mehta", "Joshi",
    "Mishra", "Chauhan", "Saxena", "Tripathi", "Dubey", "Srivastava",
]

LOC_STEMS = [
    "Ram", "Fateh", "Moham", "Alam", "Hardo", "Sita", "Gopal", "Jahan",
    "Kishan", "Noor", "Sultan", "Chand", "Bala", "Firoz", "Shiv", "Dev",
    "Hari",
]
LOC_SUFFIXES = ["pur", "abad", "nagar"]

ORG_BASES = [
    "Awadh", "Bundelkhand", "Magadh", "Mithila", "Braj", "Rohilkhand",
    "Baghelkhand", "Bhojpur", "Doab", "Terai", "Malwa", "Marwar", "Mewar",
]
ORG_TYPES = ["University", "Development Corporation", "Kisan Union"]

MISC_SURFACES = [
    "Diwali",
    "Holi",
    "Navratri",
    "Dussehra",
    "Raksha Bandhan",
    "Padma Shri",
    "Padma Bhushan",
    "Bharat Ratna",
    "Kabaddi",
    "Hindi Diwas",
    "Kumbh Mela",
    "Chhath Puja",
    "Republic Day Parade",
    "Magh Mela",
    "Teej",
]


def build_rows() -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    for first in FIRST_NAMES:
        for last in LAST_NAMES:
            rows.append((f"{first} {last}", "PER"))
    for stem in LOC_STEMS:
        for suffix in LOC_SUFFIXES:
            rows.append((f"{stem}{suffix}", "LOC"))
    for base in ORG_BASES:
        for org_type in ORG_TYPES:
            rows.append((f"{base} {org_type}", "ORG"))
    for surface in MISC_SURFACES:
        rows.append((surface, "MISC"))
    return rows


def main() -> None:
    rows = build_rows()
    surfaces = [s for s, _ in rows]
    assert len(surfaces) == len(set(surfaces)), "duplicate surfaces in fixture"
    counts = {}
    for _, label in rows:
        counts[label] = counts.get(label, 0) + 1
    assert counts == {"PER": 195, "LOC": 51, "ORG": 39, "MISC": 15}, counts
    FIXTURES.mkdir(parents=True, exist_ok=True)
    out = FIXTURES / "corpus.tsv"
    body = "".join(f"{s}\t{label}\n" for s, label in sorted(rows))
    out.write_text(body, encoding="utf-8")
    print(f"wrote {out} with {len(rows)} entities: {counts}")


if __name__ == "__main__":
    main()
