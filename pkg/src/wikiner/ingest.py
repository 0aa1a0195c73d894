"""Fetch and parse Wikipedia category/content pages into wikilink lists.

Two parsers with the same contract: one for raw wikitext markup, one for
rendered HTML. Both emit article-namespace links only, in document order.
The fetcher is optional (offline-first): every fetched page is cached to
disk so re-runs never touch the network.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
import urllib.parse
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import Callable, Iterable, Optional

NAMESPACE_ARTICLE = "article"
NAMESPACE_CATEGORY = "category"
NAMESPACE_OTHER = "other"

KIND_WIKITEXT = "wikitext"
KIND_HTML = "html"

# Non-article namespace prefixes whose targets never become candidates.
SKIPPED_NAMESPACES = frozenset(
    {
        "category",
        "file",
        "template",
        "help",
        "special",
        "wikipedia",
        "portal",
        "talk",
    }
)

# Interlanguage/interwiki prefixes look like short lowercase codes ("fr",
# "hi", "zh-min-nan"); those links leave the project and are skipped.
_LANG_CODE_RE = re.compile(r"^[a-z]{2,3}(-[a-z0-9]+)*$")

_WS_RE = re.compile(r"\s+")


class EmptyTitle(ValueError):
    """Raised when a title normalizes to the empty string."""


class NetworkError(RuntimeError):
    """Transient fetch failure after exhausting retries."""


class PageMissing(LookupError):
    """The wiki has no page under the requested title."""


class NetworkDisabled(RuntimeError):
    """A network fetch was needed but --online was not given."""


def normalize_title(raw: str, *, decode_percent: bool = False) -> str:
    """Canonicalize a page title.

    Underscores become single spaces, whitespace runs collapse, any
    "#fragment" suffix is dropped. ``decode_percent`` additionally decodes
    %xx escapes and is only meant for titles lifted out of hrefs (plain
    titles may legitimately contain a percent sign).
    """
    title = raw.split("#", 1)[0]
    if decode_percent:
        title = urllib.parse.unquote(title)
    title = title.replace("_", " ")
    title = _WS_RE.sub(" ", title).strip()
    if not title:
        raise EmptyTitle(f"title {raw!r} normalizes to nothing")
    return title


def classify_namespace(title: str) -> str:
    """Namespace of a normalized title: article, category or other."""
    prefix = _namespace_prefix(title)
    if prefix is None:
        return NAMESPACE_ARTICLE
    if prefix == "category":
        return NAMESPACE_CATEGORY
    return NAMESPACE_OTHER


def _namespace_prefix(title: str) -> Optional[str]:
    """Lowercased namespace/interwiki prefix of a title, if it has one."""
    head = title[1:] if title.startswith(":") else title
    if ":" not in head:
        return None
    prefix = head.split(":", 1)[0].strip().lower()
    if prefix in SKIPPED_NAMESPACES:
        return prefix
    if _LANG_CODE_RE.match(prefix):
        return prefix
    # Titles like "Star Wars: Episode IV" contain a colon but stay articles.
    return None


def is_article_title(title: str) -> bool:
    return not title.startswith(":") and _namespace_prefix(title) is None


@dataclass
class RawPage:
    """One fetched or bundled page, wikitext or rendered HTML."""

    title: str
    namespace: str
    content_kind: str
    body: str
    source_url: Optional[str] = None
    fetched_at: Optional[str] = None

    def __post_init__(self) -> None:
        self.title = normalize_title(self.title)
        if not self.body:
            raise ValueError(f"page {self.title!r} has an empty body")


@dataclass(frozen=True)
class WikiLink:
    """A single article-namespace hyperlink in document order."""

    source_title: str
    target_title: str
    anchor_text: str
    position_index: int

    def to_json(self) -> dict:
        return {
            "source_title": self.source_title,
            "target_title": self.target_title,
            "anchor_text": self.anchor_text,
            "position_index": self.position_index,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WikiLink":
        return cls(
            source_title=obj["source_title"],
            target_title=obj["target_title"],
            anchor_text=obj["anchor_text"],
            position_index=obj["position_index"],
        )


@dataclass
class ParseResult:
    links: list[WikiLink] = field(default_factory=list)
    warnings: int = 0


def _find_matching(body: str, start: int, open_tok: str, close_tok: str) -> int:
    """Index just past the matching close token, or -1 when unbalanced."""
    depth = 1
    i = start
    n = len(body)
    while i < n:
        if body.startswith(open_tok, i):
            depth += 1
            i += len(open_tok)
        elif body.startswith(close_tok, i):
            depth -= 1
            i += len(close_tok)
            if depth == 0:
                return i
        else:
            i += 1
    return -1


def parse_wikitext_links(page: RawPage) -> ParseResult:
    """Extract ``[[Target]]`` / ``[[Target|Anchor]]`` links from wikitext.

    Template bodies (``{{...}}``) and skipped-namespace constructs such as
    ``[[File:...]]`` are not descended into. Unclosed brackets are skipped
    and counted as warnings rather than raised.
    """
    if page.content_kind != KIND_WIKITEXT:
        raise ValueError(f"expected wikitext body, got {page.content_kind}")
    result = ParseResult()
    body = page.body
    i = 0
    n = len(body)
    while i < n:
        if body.startswith("{{", i):
            end = _find_matching(body, i + 2, "{{", "}}")
            if end == -1:
                result.warnings += 1
                i += 2
            else:
                i = end
            continue
        if not body.startswith("[[", i):
            i += 1
            continue
        end = _find_matching(body, i + 2, "[[", "]]")
        if end == -1:
            result.warnings += 1
            i += 2
            continue
        inner = body[i + 2 : end - 2]
        i = end
        raw_target, sep, raw_anchor = inner.partition("|")
        try:
            # A single leading colon forces a plain link ("[[:Delhi]]");
            # the target behind it still goes through the namespace check.
            target = normalize_title(raw_target.lstrip(":"))
        except EmptyTitle:
            result.warnings += 1
            continue
        if not is_article_title(target):
            continue
        anchor = raw_anchor.strip() if sep else ""
        if not anchor:
            anchor = target
        result.links.append(
            WikiLink(
                source_title=page.title,
                target_title=target,
                anchor_text=anchor,
                position_index=len(result.links),
            )
        )
    return result


class _AnchorCollector(HTMLParser):
    """Collects (href, text) pairs for <a> elements, tolerating bad nesting."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.anchors: list[tuple[str, str]] = []
        self.warnings = 0
        self._href: Optional[str] = None
        self._text: list[str] = []

    def handle_starttag(self, tag: str, attrs: list) -> None:
        if tag != "a":
            return
        if self._href is not None:
            # Browsers close a dangling <a> when the next one opens.
            self._flush()
        self._href = dict(attrs).get("href") or ""
        self._text = []

    def handle_data(self, data: str) -> None:
        if self._href is not None:
            self._text.append(data)

    def handle_endtag(self, tag: str) -> None:
        if tag == "a" and self._href is not None:
            self._flush()

    def _flush(self) -> None:
        self.anchors.append((self._href or "", "".join(self._text)))
        self._href = None
        self._text = []

    def close(self) -> None:
        super().close()
        if self._href is not None:
            # Anchor still open at end of input: unparseable region, skip it.
            self._href = None
            self._text = []
            self.warnings += 1


def parse_html_links(page: RawPage) -> ParseResult:
    """Extract /wiki/ links from rendered HTML with the wikitext contract."""
    if page.content_kind != KIND_HTML:
        raise ValueError(f"expected html body, got {page.content_kind}")
    collector = _AnchorCollector()
    collector.feed(page.body)
    collector.close()
    result = ParseResult(warnings=collector.warnings)
    for href, text in collector.anchors:
        if not href.startswith("/wiki/"):
            continue
        if "?" in href:
            # Query-string hrefs are redlinks/actions, not articles.
            continue
        tail = href[len("/wiki/") :]
        try:
            target = normalize_title(tail, decode_percent=True)
        except EmptyTitle:
            result.warnings += 1
            continue
        if not is_article_title(target):
            continue
        anchor = _WS_RE.sub(" ", text).strip()
        if not anchor:
            anchor = target
        result.links.append(
            WikiLink(
                source_title=page.title,
                target_title=target,
                anchor_text=anchor,
                position_index=len(result.links),
            )
        )
    return result


def parse_links(page: RawPage) -> ParseResult:
    if page.content_kind == KIND_WIKITEXT:
        return parse_wikitext_links(page)
    return parse_html_links(page)


def read_seed_list(path: Path) -> list[str]:
    """Read a seed file of page titles or URLs, one per line, '#' comments."""
    titles = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        titles.append(seed_to_title(line))
    return titles


def seed_to_title(seed: str) -> str:
    """Turn a seed entry (bare title or full URL) into a normalized title."""
    if seed.startswith(("http://", "https://")):
        path = urllib.parse.urlsplit(seed).path
        if "/wiki/" in path:
            tail = path.split("/wiki/", 1)[1]
            return normalize_title(tail, decode_percent=True)
        raise EmptyTitle(f"cannot find a /wiki/ title in {seed!r}")
    return normalize_title(seed)


def _default_transport(url: str, timeout: float) -> tuple[int, str]:
    import requests

    resp = requests.get(
        url,
        timeout=timeout,
        headers={"User-Agent": "wikiner/0.1 (corpus construction tool)"},
    )
    return resp.status_code, resp.text


class PageFetcher:
    """Single-flight, rate-limited, cache-backed page fetcher.

    All fetched bodies are rendered HTML pages. The cache lives under
    ``cache_dir`` as one ``<sha256-of-title>.page`` file per title: a JSON
    header line followed by the raw body. Cache hits never touch the
    network, so a populated cache makes every run offline.
    """

    MAX_ATTEMPTS = 3
    BASE_URL = "https://en.wikipedia.org/wiki/"

    def __init__(
        self,
        cache_dir: Path,
        online: bool = False,
        politeness_delay_ms: int = 500,
        transport: Callable[[str, float], tuple[int, str]] = _default_transport,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if politeness_delay_ms < 500:
            raise ValueError("politeness delay must be at least 500 ms")
        self.cache_dir = Path(cache_dir)
        self.online = online
        self.delay_s = politeness_delay_ms / 1000.0
        self._transport = transport
        self._clock = clock
        self._sleep = sleep
        self._last_request: Optional[float] = None

    def cache_path(self, title: str) -> Path:
        digest = hashlib.sha256(title.encode("utf-8")).hexdigest()
        return self.cache_dir / f"{digest}.page"

    def fetch(self, title: str) -> RawPage:
        title = normalize_title(title)
        cached = self._read_cache(title)
        if cached is not None:
            return cached
        if not self.online:
            raise NetworkDisabled(
                f"page {title!r} is not cached and network access is disabled"
            )
        url = self.BASE_URL + urllib.parse.quote(title.replace(" ", "_"))
        status, body = self._request(url)
        if status == 404:
            raise PageMissing(title)
        if status != 200:
            raise NetworkError(f"HTTP {status} for {url}")
        fetched_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        page = RawPage(
            title=title,
            namespace=classify_namespace(title),
            content_kind=KIND_HTML,
            body=body,
            source_url=url,
            fetched_at=fetched_at,
        )
        self._write_cache(page)
        return page

    def _request(self, url: str) -> tuple[int, str]:
        last_error: Optional[Exception] = None
        for _ in range(self.MAX_ATTEMPTS):
            self._respect_delay()
            try:
                return self._transport(url, 30.0)
            except Exception as exc:  # transient transport failure
                last_error = exc
        raise NetworkError(f"giving up on {url}: {last_error}")

    def _respect_delay(self) -> None:
        now = self._clock()
        if self._last_request is not None:
            remaining = self.delay_s - (now - self._last_request)
            if remaining > 0:
                self._sleep(remaining)
        self._last_request = self._clock()

    def _read_cache(self, title: str) -> Optional[RawPage]:
        path = self.cache_path(title)
        if not path.exists():
            return None
        header_line, _, body = path.read_text(encoding="utf-8").partition("\n")
        header = json.loads(header_line)
        return RawPage(
            title=header["title"],
            namespace=classify_namespace(header["title"]),
            content_kind=header["kind"],
            body=body,
            source_url=header.get("url"),
            fetched_at=header.get("fetched_at"),
        )

    def _write_cache(self, page: RawPage) -> None:
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        header = json.dumps(
            {
                "title": page.title,
                "kind": page.content_kind,
                "url": page.source_url,
                "fetched_at": page.fetched_at,
            },
            ensure_ascii=False,
        )
        path = self.cache_path(page.title)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(header + "\n" + page.body, encoding="utf-8")
        tmp.replace(path)


def write_links_jsonl(links: Iterable[WikiLink], path: Path) -> None:
    tmp = Path(path).with_suffix(".tmp")
    with tmp.open("w", encoding="utf-8") as fh:
        for link in links:
            fh.write(json.dumps(link.to_json(), ensure_ascii=False) + "\n")
    tmp.replace(path)


def read_links_jsonl(path: Path) -> list[WikiLink]:
    links = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                links.append(WikiLink.from_json(json.loads(line)))
    return links
