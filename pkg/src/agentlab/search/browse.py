"""Page fetching and content extraction: visit and read."""

from __future__ import annotations

import copy
import re
from urllib.parse import urljoin, urlsplit

from bs4 import BeautifulSoup, NavigableString, Tag
from markdownify import markdownify

from agentlab.errors import ExtractFailed, FetchFailed
from agentlab.search.models import EXTRACTORS, READ_MODES, Extractor, PageContent, ReadMode, is_valid_url
from agentlab.search.transport import DEFAULT_TIMEOUT, Response, Transport

DEFAULT_EXTRACTOR: Extractor = "jina_style_reader"

_NEVER_VISIBLE = ("script", "style", "noscript", "template", "iframe", "svg", "canvas", "head")
_BOILERPLATE = ("nav", "header", "footer", "aside", "form", "button", "menu", "dialog")
_BOILERPLATE_HINT = re.compile(
    r"(^|[\s_-])(nav|navbar|menu|footer|header|sidebar|cookie|banner|advert|ads?|share|social|comment|breadcrumb)s?($|[\s_-])",
    re.IGNORECASE,
)
_BLOCK = (
    "address", "article", "blockquote", "dd", "div", "dl", "dt", "figcaption", "figure",
    "h1", "h2", "h3", "h4", "h5", "h6", "hr", "li", "main", "ol", "p", "pre", "section",
    "table", "tr", "ul", "br",
)
_TEXT_TYPES = ("text/html", "application/xhtml+xml", "text/plain", "")


def _soup(html: str) -> BeautifulSoup:
    soup = BeautifulSoup(html, "html.parser")
    for tag in soup.find_all(_NEVER_VISIBLE):
        tag.decompose()
    return soup


def _base_url(soup: BeautifulSoup, url: str) -> str:
    base = soup.find("base", href=True)
    return urljoin(url, base["href"]) if base else url


def _drop_boilerplate(root: Tag) -> None:
    for tag in root.find_all(_BOILERPLATE):
        tag.decompose()
    for tag in root.find_all(True):
        if tag.decomposed or tag.attrs is None:
            continue
        hints = " ".join(tag.get("class", [])) + " " + (tag.get("id") or "") + " " + (tag.get("role") or "")
        if tag.name not in ("body", "html", "main", "article") and _BOILERPLATE_HINT.search(hints):
            tag.decompose()


def _text_len(tag: Tag) -> int:
    return len(" ".join(tag.get_text(" ").split()))


def _link_density(tag: Tag) -> float:
    total = _text_len(tag)
    if not total:
        return 1.0
    linked = sum(_text_len(a) for a in tag.find_all("a"))
    return linked / total


def _main_content(root: Tag) -> Tag:
    """Pick the element most likely to hold the article body."""
    for selector in ("article", "main", "[role=main]"):
        found = root.select(selector)
        if found:
            return max(found, key=_text_len)
    best, best_score = root, -1.0
    for tag in root.find_all(["div", "section", "td"]):
        paragraphs = tag.find_all("p", recursive=False)
        text = sum(_text_len(p) for p in paragraphs)
        if not text:
            continue
        score = text * (1.0 - _link_density(tag))
        if score > best_score:
            best, best_score = tag, score
    return best


def extract(html: str, url: str, extractor: Extractor = DEFAULT_EXTRACTOR) -> Tag:
    """Return the subtree to render, with relative links made absolute."""
    if extractor not in EXTRACTORS:
        raise ValueError(f"unknown extractor {extractor!r}")
    soup = _soup(html)
    base = _base_url(soup, url)
    for a in soup.find_all("a", href=True):
        a["href"] = urljoin(base, a["href"].strip())
    for img in soup.find_all("img", src=True):
        img["src"] = urljoin(base, img["src"].strip())
    root: Tag = soup.body or soup
    if extractor == "raw":
        return root
    _drop_boilerplate(root)
    if extractor == "crawler":
        return root
    return _main_content(root)


def render_text(root: Tag) -> str:
    """Visible text with one line per block element."""
    node = copy.copy(root)
    for tag in node.find_all(_BLOCK):
        tag.insert_before(NavigableString("\n"))
        tag.insert_after(NavigableString("\n"))
    for cell in node.find_all(["td", "th"]):
        cell.insert_after(NavigableString(" | "))
    lines = []
    for line in node.get_text().splitlines():
        clean = " ".join(line.split()).strip(" |").strip()
        if clean:
            lines.append(clean)
    return "\n".join(lines)


def render_markdown(root: Tag) -> str:
    md = markdownify(str(root), heading_style="ATX", bullets="-")
    md = re.sub(r"[ \t]+\n", "\n", md)
    md = re.sub(r"\n{3,}", "\n\n", md)
    return md.strip()


def render_links(root: Tag) -> str:
    """``anchor → absolute URL`` lines for every http(s) link, first occurrence only."""
    lines: list[str] = []
    seen: set[tuple[str, str]] = set()
    for a in root.find_all("a", href=True):
        href = a["href"]
        if urlsplit(href).scheme not in ("http", "https") or not is_valid_url(href):
            continue
        text = " ".join(a.get_text(" ").split()) or a.get("title", "").strip() or href
        if (text, href) in seen:
            continue
        seen.add((text, href))
        lines.append(f"{text} → {href}")
    return "\n".join(lines)


def fetch(url: str, transport: Transport, timeout: float = DEFAULT_TIMEOUT) -> Response:
    if not is_valid_url(url):
        raise ValueError(f"not a valid http(s) URL: {url!r}")
    resp = transport.request("GET", url, timeout=timeout)
    if resp.status != 200:
        raise FetchFailed(resp.status, url)
    return resp


def page_from_response(
    resp: Response, url: str, mode: ReadMode, extractor: Extractor = DEFAULT_EXTRACTOR
) -> PageContent:
    if mode not in READ_MODES:
        raise ValueError(f"unknown read mode {mode!r}")
    ctype = resp.content_type
    if ctype not in _TEXT_TYPES and not ctype.startswith("text/"):
        raise ExtractFailed(f"cannot extract text from {ctype} at {url}")
    text = resp.text
    if not text.strip():
        return PageContent(url=url, mode=mode, body="", fetched_via=extractor)
    if ctype == "text/plain" or (ctype.startswith("text/") and ctype != "text/html"):
        body = "" if mode == "links" else text.strip()
        return PageContent(url=url, mode=mode, body=body, fetched_via=extractor)
    try:
        # links come from the whole page; text and markdown from the extracted part
        root = extract(text, url, "raw" if mode == "links" else extractor)
        if mode == "text":
            body = render_text(root)
        elif mode == "markdown":
            body = render_markdown(root)
        else:
            body = render_links(root)
    except (ValueError, AttributeError, TypeError) as exc:
        raise ExtractFailed(f"{type(exc).__name__}: {exc}") from exc
    return PageContent(url=url, mode=mode, body=body, fetched_via=extractor)


def read(
    url: str,
    mode: ReadMode,
    transport: Transport,
    extractor: Extractor = DEFAULT_EXTRACTOR,
    timeout: float = DEFAULT_TIMEOUT,
) -> PageContent:
    if mode not in READ_MODES:
        raise ValueError(f"unknown read mode {mode!r}")
    return page_from_response(fetch(url, transport, timeout), url, mode, extractor)


def visit(
    url: str,
    transport: Transport,
    extractor: Extractor = DEFAULT_EXTRACTOR,
    timeout: float = DEFAULT_TIMEOUT,
) -> PageContent:
    return read(url, "text", transport, extractor, timeout)
