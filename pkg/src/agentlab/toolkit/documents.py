"""Format-specific text extraction for local documents."""

from __future__ import annotations

import csv
import io
import unicodedata
from enum import Enum
from pathlib import Path

from bs4 import BeautifulSoup

from agentlab.errors import ParseFailed, UnsupportedKind


class DocumentKind(str, Enum):
    PDF = "pdf"
    XLSX = "xlsx"
    CSV = "csv"
    DOCX = "docx"
    TXT = "txt"
    HTML = "html"
    UNKNOWN = "unknown"


_EXTENSIONS = {
    ".pdf": DocumentKind.PDF,
    ".xlsx": DocumentKind.XLSX,
    ".csv": DocumentKind.CSV,
    ".docx": DocumentKind.DOCX,
    ".txt": DocumentKind.TXT,
    ".html": DocumentKind.HTML,
    ".htm": DocumentKind.HTML,
}


def classify_document(path: str | Path) -> DocumentKind:
    return _EXTENSIONS.get(Path(path).suffix.lower(), DocumentKind.UNKNOWN)


def sanitize(text: str) -> str:
    """Drop control characters other than newline and tab; normalize line endings."""
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return "".join(
        ch for ch in text if ch in "\n\t" or unicodedata.category(ch) not in ("Cc", "Cs")
    )


def _cell(value: object) -> str:
    text = "" if value is None else str(value)
    return " ".join(text.replace("|", "\\|").splitlines()).strip()


def render_table(rows: list[list[object]]) -> str:
    """Pipe-joined rows; short rows are padded with empty cells."""
    rows = [list(r) for r in rows]
    width = max((len(r) for r in rows), default=0)
    lines = []
    for row in rows:
        cells = [_cell(v) for v in row] + [""] * (width - len(row))
        lines.append(" | ".join(cells))
    return "\n".join(lines)


def _parse_csv(path: Path) -> str:
    text = path.read_text(encoding="utf-8-sig", errors="replace")
    rows = list(csv.reader(io.StringIO(text)))
    return render_table(rows)


def _parse_xlsx(path: Path) -> str:
    from openpyxl import load_workbook

    wb = load_workbook(path, read_only=True, data_only=True)
    try:
        sections = []
        for ws in wb.worksheets:
            rows = [list(r) for r in ws.iter_rows(values_only=True)]
            # trailing empty cells in read-only mode carry no information
            while rows and all(v is None for v in rows[-1]):
                rows.pop()
            sections.append(f"Sheet: {ws.title}\n{render_table(rows)}".rstrip())
        return "\n\n".join(sections)
    finally:
        wb.close()


def _parse_pdf(path: Path) -> str:
    from pypdf import PdfReader

    reader = PdfReader(str(path))
    pages = [(page.extract_text() or "").strip() for page in reader.pages]
    return "\n\n".join(p for p in pages if p)


def _parse_docx(path: Path) -> str:
    import docx

    document = docx.Document(str(path))
    parts = [p.text for p in document.paragraphs]
    for table in document.tables:
        parts.append(render_table([[c.text for c in row.cells] for row in table.rows]))
    return "\n".join(parts).strip()


def _parse_html(path: Path) -> str:
    soup = BeautifulSoup(path.read_text(encoding="utf-8", errors="replace"), "html.parser")
    for tag in soup(["script", "style", "noscript", "template"]):
        tag.decompose()
    lines = (" ".join(line.split()) for line in soup.get_text("\n").splitlines())
    return "\n".join(line for line in lines if line)


def _parse_txt(path: Path) -> str:
    return path.read_text(encoding="utf-8", errors="replace")


_PARSERS = {
    DocumentKind.PDF: _parse_pdf,
    DocumentKind.XLSX: _parse_xlsx,
    DocumentKind.CSV: _parse_csv,
    DocumentKind.DOCX: _parse_docx,
    DocumentKind.TXT: _parse_txt,
    DocumentKind.HTML: _parse_html,
}


def parse_document(path: str | Path, kind: DocumentKind | str | None = None) -> str:
    path = Path(path)
    kind = classify_document(path) if kind is None else DocumentKind(kind)
    if kind is DocumentKind.UNKNOWN:
        raise UnsupportedKind(f"no parser for {path.name}")
    if not path.is_file():
        raise ParseFailed(f"{path} is not a readable file")
    try:
        text = _PARSERS[kind](path)
    except Exception as exc:
        raise ParseFailed(f"{kind.value} parse of {path.name} failed: {type(exc).__name__}: {exc}") from exc
    return sanitize(text)


def document_tool(base_dir: str | Path | None = None):
    """A run-loop tool that returns the text of a local file."""
    from agentlab.core.tools import Tool
    from agentlab.core.types import ToolSpec

    root = Path(base_dir) if base_dir is not None else None

    def inspect_file(path: str) -> str:
        target = Path(path)
        if root is not None and not target.is_absolute():
            target = root / target
        return parse_document(target)

    return Tool(
        ToolSpec("inspect_file", "Read a local document (pdf, xlsx, csv, docx, txt, html) as text.", (("path", "string"),)),
        inspect_file,
    )
