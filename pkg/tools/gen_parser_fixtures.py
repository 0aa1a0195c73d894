#!/usr/bin/env python3
"""Generate the category-page parser fixtures and their golden link lists.

Each fixture is assembled segment by segment together with the links that
segment is expected to yield, so the goldens encode *intended* behavior,
hand-written here, not captured implementation output. Run from the repo
root: python tools/gen_parser_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

WIKITEXT_TITLE = "Category:Politics of the Hindi Belt"
HTML_TITLE = "Category:Hindi Belt geography"


def _link(source: str, target: str, anchor: str, position: int) -> dict:
    return {
        "source_title": source,
        "target_title": target,
        "anchor_text": anchor,
        "position_index": position,
    }


def build_wikitext() -> tuple[str, list[dict]]:
    """(body, expected links) for the wikitext category fixture."""
    segments: list[tuple[str, list[tuple[str, str]]]] = []

    def seg(markup: str, *expected: tuple[str, str]) -> None:
        segments.append((markup, list(expected)))

    def plain(title: str) -> None:
        seg(f"* [[{title}]]\n", (title, title))

    seg("{{Short description|Fixture category page}}\n")
    seg(
        "'''Politics of the Hindi Belt''' lists articles about "
        "[[New Delhi]] and the [[Hindi]]-speaking regions of "
        "[[India|the Republic of India]].\n",
        ("New Delhi", "New Delhi"),
        ("Hindi", "Hindi"),
        ("India", "the Republic of India"),
    )
    seg("\n== Institutions ==\n")
    plain("Lok Sabha")
    plain("Rajya Sabha")
    plain("Parliament of India")
    plain("Election Commission of India")
    plain("Supreme Court of India")
    plain("Reserve Bank of India")
    plain("Allahabad High Court")
    seg(
        "* [[Banaras Hindu University|BHU]]\n",
        ("Banaras Hindu University", "BHU"),
    )
    plain("Aligarh Muslim University")
    seg("\n== States ==\n")
    plain("Uttar Pradesh")
    plain("Bihar")
    plain("Madhya Pradesh")
    plain("Rajasthan")
    plain("Haryana")
    plain("Jharkhand")
    plain("Chhattisgarh")
    plain("Uttarakhand")
    plain("Himachal Pradesh")
    seg("\n== Parties ==\n")
    plain("Indian National Congress")
    seg(
        "* [[Bharatiya Janata Party|BJP]]\n",
        ("Bharatiya Janata Party", "BJP"),
    )
    plain("Samajwadi Party")
    plain("Bahujan Samaj Party")
    plain("Janata Dal (United)")
    plain("Rashtriya Janata Dal")
    seg("\n== Leaders ==\n")
    plain("Jawaharlal Nehru")
    plain("Indira Gandhi")
    plain("Lal Bahadur Shastri")
    plain("Atal Bihari Vajpayee")
    plain("Chaudhary Charan Singh")
    plain("Rajendra Prasad")
    plain("Sarojini Naidu")
    seg(
        "* [[Motilal_Nehru]] (underscored target)\n",
        ("Motilal Nehru", "Motilal Nehru"),
    )
    seg("\n== Cities and rivers ==\n")
    # Fragment targets: the fragment is stripped from the target title.
    seg(
        "* [[Delhi#History|historic Delhi]]\n",
        ("Delhi", "historic Delhi"),
    )
    seg("* [[Lucknow#Culture]]\n", ("Lucknow", "Lucknow"))
    plain("Kanpur")
    plain("Varanasi")
    plain("Patna")
    plain("Bhopal")
    plain("Jaipur")
    plain("Agra")
    plain("Gorakhpur")
    plain("Meerut")
    plain("Ganges")
    plain("Yamuna")
    # Duplicate link: emitted again, dedup happens downstream.
    seg(
        "The capital [[New Delhi]] appears twice on this page.\n",
        ("New Delhi", "New Delhi"),
    )
    # A leading colon forces a plain article link.
    seg("* [[:Bhojpuri]]\n", ("Bhojpuri", "Bhojpuri"))
    # Empty-anchor pipe falls back to the target title.
    seg("* [[Awadhi|]]\n", ("Awadhi", "Awadhi"))
    seg("\n== Skipped namespaces ==\n")
    seg("[[Category:Politics of India]]\n")
    seg("[[File:Flag of India.svg|thumb|[[hidden caption link]] inside]]\n")
    seg("[[Template:Politics of India]]\n")
    seg("[[Help:Contents]]\n")
    seg("[[Special:RecentChanges]]\n")
    seg("[[Wikipedia:Manual of Style]]\n")
    seg("[[Portal:India]]\n")
    seg("[[Talk:New Delhi]]\n")
    seg("[[fr:Politique en Inde]]\n")
    seg("[[:hi:Bharat ki rajneeti]]\n")
    # Template bodies are not descended into.
    seg("{{Navbox|list=[[Hidden Template Link]]}}\n")
    # Malformed: an unclosed "[[" is skipped with a warning; the valid
    # link after it still parses.
    seg("Broken [[unclosed bracket then [[Sonbhadra]] follows.\n", ("Sonbhadra", "Sonbhadra"))
    seg("Trailing broken link: [[never closed\n")

    body_parts: list[str] = []
    expected: list[dict] = []
    for markup, links in segments:
        body_parts.append(markup)
        for target, anchor in links:
            expected.append(_link(WIKITEXT_TITLE, target, anchor, len(expected)))
    return "".join(body_parts), expected


def build_html() -> tuple[str, list[dict]]:
    """(body, expected links) for the rendered-HTML category fixture."""
    segments: list[tuple[str, list[tuple[str, str]]]] = []

    def seg(markup: str, *expected: tuple[str, str]) -> None:
        segments.append((markup, list(expected)))

    def item(href: str, text: str, *expected: tuple[str, str]) -> None:
        seg(f'<li><a href="{href}">{text}</a></li>\n', *expected)

    def plain(title: str) -> None:
        item(f"/wiki/{title.replace(' ', '_')}", title, (title, title))

    seg("<!DOCTYPE html>\n<html><head><title>Category fixture</title></head>\n")
    seg('<body><div id="mw-content-text">\n')
    seg("<h2>Pages in this category</h2>\n<ul>\n")
    plain("New Delhi")
    plain("Lok Sabha")
    plain("Rajya Sabha")
    plain("Parliament of India")
    plain("Election Commission of India")
    plain("Supreme Court of India")
    plain("Reserve Bank of India")
    plain("Allahabad High Court")
    plain("Banaras Hindu University")
    plain("Aligarh Muslim University")
    plain("Uttar Pradesh")
    plain("Bihar")
    plain("Madhya Pradesh")
    plain("Rajasthan")
    plain("Haryana")
    plain("Jharkhand")
    plain("Chhattisgarh")
    plain("Uttarakhand")
    plain("Himachal Pradesh")
    plain("Indian National Congress")
    plain("Bharatiya Janata Party")
    plain("Samajwadi Party")
    plain("Bahujan Samaj Party")
    plain("Rashtriya Janata Dal")
    plain("Jawaharlal Nehru")
    plain("Indira Gandhi")
    plain("Lal Bahadur Shastri")
    plain("Atal Bihari Vajpayee")
    plain("Chaudhary Charan Singh")
    plain("Rajendra Prasad")
    plain("Sarojini Naidu")
    plain("Motilal Nehru")
    plain("Lucknow")
    plain("Kanpur")
    plain("Varanasi")
    plain("Patna")
    plain("Bhopal")
    plain("Jaipur")
    plain("Agra")
    plain("Gorakhpur")
    plain("Meerut")
    plain("Ganges")
    plain("Yamuna")
    # Percent-encoded href paths decode to the canonical title.
    item("/wiki/Janata%20Dal%20(United)", "JD(U)", ("Janata Dal (United)", "JD(U)"))
    item(
        "/wiki/%E0%A4%A6%E0%A4%BF%E0%A4%B2%E0%A5%8D%E0%A4%B2%E0%A5%80",
        "Dilli (Devanagari title)",
        ("दिल्ली", "Dilli (Devanagari title)"),
    )
    # Fragment stripped from the target.
    item("/wiki/Delhi#History", "historic Delhi", ("Delhi", "historic Delhi"))
    # Markup inside the anchor contributes only its text content.
    seg(
        '<li><a href="/wiki/Hindi"><b>Hindi</b> language</a></li>\n',
        ("Hindi", "Hindi language"),
    )
    # Empty anchor text falls back to the target title.
    item("/wiki/Bhojpuri", "", ("Bhojpuri", "Bhojpuri"))
    # Duplicate of an earlier link: kept, dedup is a later stage.
    item("/wiki/New_Delhi", "New Delhi", ("New Delhi", "New Delhi"))
    seg("</ul>\n<h2>Skipped hrefs</h2>\n<ul>\n")
    item("/wiki/Category:Politics_of_India", "category page")
    item("/wiki/File:Flag_of_India.svg", "file page")
    item("/wiki/Template:Politics_of_India", "template page")
    item("/wiki/Help:Contents", "help page")
    item("/wiki/Special:RecentChanges", "special page")
    item("/wiki/Wikipedia:Manual_of_Style", "project page")
    item("/wiki/Portal:India", "portal page")
    item("/wiki/Talk:New_Delhi", "talk page")
    item("/w/index.php?title=Sonbhadra&action=edit", "redlink")
    item("/wiki/Meerut?action=history", "history view")
    item("https://example.org/wiki/External", "external site")
    item("#top", "same-page anchor")
    seg("</ul>\n")
    seg("<p>Unclosed anchor: <a href='/wiki/Agra'>dangling</div></body></html>\n")

    body_parts: list[str] = []
    expected: list[dict] = []
    for markup, links in segments:
        body_parts.append(markup)
        for target, anchor in links:
            expected.append(_link(HTML_TITLE, target, anchor, len(expected)))
    return "".join(body_parts), expected


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    wikitext_body, wikitext_links = build_wikitext()
    html_body, html_links = build_html()
    (FIXTURES / "category_politics.wikitext").write_text(
        wikitext_body, encoding="utf-8"
    )
    (FIXTURES / "category_geography.html").write_text(html_body, encoding="utf-8")
    with (FIXTURES / "golden_wikitext_links.jsonl").open("w", encoding="utf-8") as fh:
        for link in wikitext_links:
            fh.write(json.dumps(link, ensure_ascii=False) + "\n")
    with (FIXTURES / "golden_html_links.jsonl").open("w", encoding="utf-8") as fh:
        for link in html_links:
            fh.write(json.dumps(link, ensure_ascii=False) + "\n")
    print(f"wikitext fixture: {len(wikitext_links)} expected links")
    print(f"html fixture: {len(html_links)} expected links")


if __name__ == "__main__":
    main()
