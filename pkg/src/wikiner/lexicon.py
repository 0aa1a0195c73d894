"""Bundled function-word lexicon for the heuristic POS tagger.

Roughly 200 closed-class English words mapped to Penn-Treebank-style tags.
Lookups are case-insensitive. Open-class words are deliberately absent;
they fall through to the tagger's shape rules.
"""

from __future__ import annotations


def _expand(tag: str, words: str) -> dict[str, str]:
    return {w: tag for w in words.split()}


FUNCTION_WORDS: dict[str, str] = {}

FUNCTION_WORDS.update(
    _expand(
        "DT",
        "the a an this that these those each every either neither some any "
        "no all both half several few many much more most other another such",
    )
)
FUNCTION_WORDS.update(
    _expand(
        "IN",
        "of in on at by from with about against between into through during "
        "before after above below under over near off out around among "
        "across behind beyond within without along despite inside outside "
        "throughout beside besides per unlike until since onto upon toward "
        "towards amid amidst atop via except versus like as than because if "
        "unless whereas while although though once whether",
    )
)
FUNCTION_WORDS.update(_expand("CC", "and or nor but so yet plus"))
FUNCTION_WORDS.update(_expand("TO", "to"))
FUNCTION_WORDS.update(
    _expand(
        "PRP",
        "i you he she it we they me him her us them myself yourself himself "
        "herself itself ourselves themselves oneself who whom anybody anyone "
        "anything everybody everyone everything nobody nothing somebody "
        "someone something none",
    )
)
FUNCTION_WORDS.update(
    _expand("PRP$", "my your his its our their mine yours hers ours theirs")
)
FUNCTION_WORDS.update(
    _expand("MD", "can could may might must shall should will would ought")
)
FUNCTION_WORDS.update(_expand("VBZ", "is has does"))
FUNCTION_WORDS.update(_expand("VBP", "am are have do"))
FUNCTION_WORDS.update(_expand("VBD", "was were had did"))
FUNCTION_WORDS.update(_expand("VB", "be"))
FUNCTION_WORDS.update(_expand("VBN", "been done gone"))
FUNCTION_WORDS.update(_expand("VBG", "being having doing"))
FUNCTION_WORDS.update(
    _expand(
        "RB",
        "not never also very too just only quite rather almost always often "
        "sometimes soon still then there here now already again ever "
        "perhaps maybe instead together apart away back forth",
    )
)
FUNCTION_WORDS.update(_expand("WDT", "which whichever"))
FUNCTION_WORDS.update(_expand("WP", "what whatever whoever"))
FUNCTION_WORDS.update(_expand("WRB", "when where why how whenever wherever"))
FUNCTION_WORDS.update(_expand("EX", "there"))
FUNCTION_WORDS.update(_expand("UH", "oh yes"))

# Tags the bundled tagger can emit: lexicon tags plus the shape-rule tags.
TAGSET = frozenset(FUNCTION_WORDS.values()) | {"NNP", "NNS", "NN", "CD", "OTHER"}
