"""Character n-gram feature extraction over entity surfaces.

N-grams are contiguous character windows over the raw surface, spaces
included and case preserved. The vocabulary is built from training
surfaces only and frozen before any test item is featurized, so test
n-grams unseen in training are silently dropped.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

SparseVector = dict[int, int]


class SpaceNotFrozen(RuntimeError):
    pass


def char_ngrams(surface: str, n_min: int = 1, n_max: int = 5) -> Counter:
    """Multiset of all character n-grams for n in [n_min, n_max]."""
    if not surface:
        raise ValueError("surface is empty")
    if not 1 <= n_min <= n_max:
        raise ValueError(f"bad n-gram range [{n_min}, {n_max}]")
    grams: Counter = Counter()
    length = len(surface)
    for n in range(n_min, min(n_max, length) + 1):
        for i in range(length - n + 1):
            grams[surface[i : i + n]] += 1
    return grams


@dataclass
class FeatureSpace:
    """Frozen n-gram vocabulary with dense feature indices."""

    n_min: int = 1
    n_max: int = 5
    vocabulary: dict[str, int] = field(default_factory=dict)
    frozen: bool = False

    @property
    def size(self) -> int:
        return len(self.vocabulary)


def fit_feature_space(
    train_surfaces: Sequence[str], n_min: int = 1, n_max: int = 5
) -> FeatureSpace:
    """Build and freeze the vocabulary from training surfaces only.

    Grams are indexed in sorted order so the space is independent of the
    training example order.
    """
    grams: set[str] = set()
    for surface in train_surfaces:
        grams.update(char_ngrams(surface, n_min, n_max))
    vocabulary = {gram: idx for idx, gram in enumerate(sorted(grams))}
    return FeatureSpace(n_min=n_min, n_max=n_max, vocabulary=vocabulary, frozen=True)


def featurize(surface: str, space: FeatureSpace) -> SparseVector:
    """Count vector over the frozen space; unseen grams are dropped."""
    if not space.frozen:
        raise SpaceNotFrozen("freeze the feature space before featurizing")
    vec: SparseVector = {}
    for gram, count in char_ngrams(surface, space.n_min, space.n_max).items():
        idx = space.vocabulary.get(gram)
        if idx is not None:
            vec[idx] = count
    return vec
