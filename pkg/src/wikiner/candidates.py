"""Turn link anchor texts into scored named-entity candidates.

Pipeline: exact dedup of anchors, whitespace tokenization, POS tagging
(pluggable, deterministic heuristic by default), character-class wordtypes,
then a 0-2 confidence score. A candidate with positive confidence is
selected as a probable named entity.
"""

from __future__ import annotations

import json
import subprocess
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .lexicon import FUNCTION_WORDS, TAGSET

NOMINAL_TAGS = frozenset({"NNP", "NNS", "NN"})

AGGREGATIONS = ("any", "all", "first")

# Characters kept at token edges because they are word-internal in
# abbreviations ("U.P."), hyphenations and contractions.
_EDGE_KEEP = {".", "-", "'"}


class EmptySurface(ValueError):
    """Tokenization left nothing behind."""


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _clean_token(tok: str) -> str:
    """Strip surrounding punctuation while keeping word-internal marks."""
    changed = True
    while changed and tok:
        changed = False
        if _is_punct(tok[0]) and tok[0] not in _EDGE_KEEP:
            tok = tok[1:]
            changed = True
            continue
        if tok and _is_punct(tok[-1]) and tok[-1] not in _EDGE_KEEP:
            tok = tok[:-1]
            changed = True
            continue
        # An edge "." / "-" / "'" stays only when the same character also
        # appears inside the token (abbreviation or contraction pattern).
        if tok and tok[0] in _EDGE_KEEP and tok[0] not in tok[1:]:
            tok = tok[1:]
            changed = True
            continue
        if tok and tok[-1] in _EDGE_KEEP and tok[-1] not in tok[:-1]:
            tok = tok[:-1]
            changed = True
    if tok and all(_is_punct(ch) for ch in tok):
        return ""
    return tok


def tokenize(surface: str) -> list[str]:
    """Split on whitespace and trim stray punctuation from token edges."""
    if not surface or not surface.strip():
        raise EmptySurface("surface is empty")
    tokens = [_clean_token(part) for part in surface.split()]
    tokens = [t for t in tokens if t]
    if not tokens:
        raise EmptySurface(f"no tokens survive in {surface!r}")
    return tokens


def dedup(anchors: Sequence[str]) -> list[tuple[str, int]]:
    """Exact case-sensitive dedup; output sorted by surface for determinism."""
    counts = Counter(anchors)
    return sorted(counts.items())


def wordtype(token: str) -> str:
    """Character-class abstraction: uppercase->A, lowercase->a, digit->0."""
    out = []
    for ch in token:
        if ch.isupper():
            out.append("A")
        elif ch.islower():
            out.append("a")
        elif ch.isdigit():
            out.append("0")
        else:
            out.append(ch)
    return "".join(out)


def _wordtype_qualifies(wt: str) -> bool:
    return wt.startswith("A") or (len(wt) > 0 and set(wt) == {"A"})


def _aggregate(flags: Sequence[bool], agg: str) -> bool:
    if agg == "any":
        return any(flags)
    if agg == "all":
        return all(flags)
    if agg == "first":
        return flags[0]
    raise ValueError(f"unknown aggregation {agg!r}")


def wordtype_score(wordtypes: Sequence[str], agg: str = "all") -> int:
    """1 when the expression's wordtypes signal a name, else 0.

    A single wordtype qualifies when it starts with 'A' or is all 'A'.
    By default every token must qualify.
    """
    if not wordtypes:
        raise ValueError("wordtype list is empty")
    return int(_aggregate([_wordtype_qualifies(wt) for wt in wordtypes], agg))


def pos_score(tags: Sequence[str], agg: str = "any") -> int:
    """1 when the expression's POS tags include a nominal (NNP/NNS/NN)."""
    if not tags:
        raise ValueError("tag list is empty")
    return int(_aggregate([t in NOMINAL_TAGS for t in tags], agg))


class Tagger(Protocol):
    def tag(self, tokens: Sequence[str]) -> list[str]: ...


class HeuristicTagger:
    """Deterministic shape-and-lexicon tagger.

    Rules, in order: function-word lexicon lookup (case-insensitive),
    all-digit -> CD, titlecase or all-caps -> NNP, lowercase ending in
    "s" -> NNS, other lowercase alphabetic -> NN, anything else OTHER.
    """

    tagset = TAGSET

    def tag(self, tokens: Sequence[str]) -> list[str]:
        return [self._tag_one(tok) for tok in tokens]

    @staticmethod
    def _tag_one(tok: str) -> str:
        lexical = FUNCTION_WORDS.get(tok.lower())
        if lexical is not None:
            return lexical
        if tok.isdigit():
            return "CD"
        if tok[:1].isupper() or tok.isupper():
            return "NNP"
        if tok.islower() and tok.endswith("s"):
            return "NNS"
        if tok.islower() and tok.isalpha():
            return "NN"
        return "OTHER"


class CommandTagger:
    """External tagger spoken to over a one-token-per-line pipe protocol."""

    def __init__(self, command: str) -> None:
        self.command = command

    def tag(self, tokens: Sequence[str]) -> list[str]:
        proc = subprocess.run(
            [self.command],
            input="\n".join(tokens) + "\n",
            capture_output=True,
            text=True,
            check=True,
        )
        tags = proc.stdout.splitlines()
        if len(tags) != len(tokens):
            raise RuntimeError(
                f"tagger {self.command!r} returned {len(tags)} tags "
                f"for {len(tokens)} tokens"
            )
        return [t.strip() for t in tags]


def make_tagger(selector: str) -> Tagger:
    """Build a tagger from a CLI selector: 'heuristic' or 'cmd:<path>'."""
    if selector == "heuristic":
        return HeuristicTagger()
    if selector.startswith("cmd:"):
        return CommandTagger(selector[len("cmd:") :])
    raise ValueError(f"unknown tagger selector {selector!r}")


@dataclass(frozen=True)
class Token:
    text: str
    pos_tag: str


@dataclass
class Candidate:
    """A deduplicated probable NE with its confidence breakdown."""

    surface: str
    tokens: list[Token]
    wordtypes: list[str]
    pos_score: int
    wordtype_score: int
    confidence: int
    selected: bool
    occurrence_count: int

    def to_json(self) -> dict:
        return {
            "surface": self.surface,
            "tokens": [t.text for t in self.tokens],
            "tags": [t.pos_tag for t in self.tokens],
            "wordtypes": self.wordtypes,
            "pos_score": self.pos_score,
            "wordtype_score": self.wordtype_score,
            "confidence": self.confidence,
            "selected": self.selected,
            "occurrence_count": self.occurrence_count,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Candidate":
        return cls(
            surface=obj["surface"],
            tokens=[
                Token(text=text, pos_tag=tag)
                for text, tag in zip(obj["tokens"], obj["tags"])
            ],
            wordtypes=list(obj["wordtypes"]),
            pos_score=obj["pos_score"],
            wordtype_score=obj["wordtype_score"],
            confidence=obj["confidence"],
            selected=obj["selected"],
            occurrence_count=obj["occurrence_count"],
        )


def score_candidate(
    surface: str,
    occurrence_count: int,
    tagger: Tagger,
    pos_agg: str = "any",
    wt_agg: str = "all",
) -> Candidate:
    token_texts = tokenize(surface)
    tags = tagger.tag(token_texts)
    wordtypes = [wordtype(t) for t in token_texts]
    p = pos_score(tags, agg=pos_agg)
    w = wordtype_score(wordtypes, agg=wt_agg)
    confidence = p + w
    return Candidate(
        surface=surface,
        tokens=[Token(text=t, pos_tag=g) for t, g in zip(token_texts, tags)],
        wordtypes=wordtypes,
        pos_score=p,
        wordtype_score=w,
        confidence=confidence,
        selected=confidence >= 1,
        occurrence_count=occurrence_count,
    )


def score_candidates(
    surfaces: Sequence[tuple[str, int]],
    tagger: Tagger,
    pos_agg: str = "any",
    wt_agg: str = "all",
) -> list[Candidate]:
    """Score deduplicated (surface, count) pairs, preserving input order."""
    return [
        score_candidate(surface, count, tagger, pos_agg=pos_agg, wt_agg=wt_agg)
        for surface, count in surfaces
    ]


def write_candidates_jsonl(candidates: Iterable[Candidate], path: Path) -> None:
    tmp = Path(path).with_suffix(".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for cand in candidates:
            fh.write(json.dumps(cand.to_json(), ensure_ascii=False) + "\n")
    tmp.replace(path)


def read_candidates_jsonl(path: Path) -> list[Candidate]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(Candidate.from_json(json.loads(line)))
    return out
