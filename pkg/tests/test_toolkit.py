from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agentlab.core.clients import EchoClient
from agentlab.errors import AdapterFailed, ParseFailed, UnsupportedKind
from agentlab.toolkit.documents import (
    DocumentKind, classify_document, document_tool, parse_document, render_table, sanitize,
)
from agentlab.toolkit.multimodal import FixtureAdapter, MediaAdapter, answer_multimodal


def minimal_pdf(text: str) -> bytes:
    """A one-page PDF with a single line of Helvetica text."""
    stream = f"BT /F1 12 Tf 72 720 Td ({text}) Tj ET".encode()
    objects = [
        b"<< /Type /Catalog /Pages 2 0 R >>",
        b"<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        b"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R "
        b"/Resources << /Font << /F1 5 0 R >> >> >>",
        b"<< /Length %d >>\nstream\n" % len(stream) + stream + b"\nendstream",
        b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>",
    ]
    out = bytearray(b"%PDF-1.4\n")
    offsets = []
    for i, body in enumerate(objects, 1):
        offsets.append(len(out))
        out += b"%d 0 obj\n" % i + body + b"\nendobj\n"
    xref = len(out)
    out += b"xref\n0 %d\n0000000000 65535 f \n" % (len(objects) + 1)
    out += b"".join(b"%010d 00000 n \n" % off for off in offsets)
    out += b"trailer\n<< /Size %d /Root 1 0 R >>\nstartxref\n%d\n%%%%EOF\n" % (len(objects) + 1, xref)
    return bytes(out)


def test_classify():
    assert classify_document("a/B.XLSX") is DocumentKind.XLSX
    assert classify_document("page.htm") is DocumentKind.HTML
    assert classify_document("clip.mp3") is DocumentKind.UNKNOWN


def test_csv(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("name,count\nowl,3\n\"a|b\",\n", encoding="utf-8")
    assert parse_document(p) == "name | count\nowl | 3\na\\|b | "


def test_xlsx(tmp_path):
    from openpyxl import Workbook

    wb = Workbook()
    ws = wb.active
    ws.title = "Birds"
    ws.append(["species", "wingspan"])
    ws.append(["barn owl", 0.9])
    wb.create_sheet("Empty")
    p = tmp_path / "t.xlsx"
    wb.save(p)
    text = parse_document(p)
    assert text.startswith("Sheet: Birds\nspecies | wingspan\nbarn owl | 0.9")
    assert "Sheet: Empty" in text


def test_docx(tmp_path):
    import docx

    d = docx.Document()
    d.add_paragraph("Field notes")
    table = d.add_table(rows=2, cols=2)
    table.cell(0, 0).text, table.cell(0, 1).text = "site", "count"
    table.cell(1, 0).text, table.cell(1, 1).text = "barn", "2"
    p = tmp_path / "t.docx"
    d.save(p)
    assert parse_document(p) == "Field notes\nsite | count\nbarn | 2"


def test_pdf(tmp_path):
    p = tmp_path / "t.pdf"
    p.write_bytes(minimal_pdf("Owls are nocturnal"))
    assert "Owls are nocturnal" in parse_document(p)


def test_html_and_txt(tmp_path):
    h = tmp_path / "t.html"
    h.write_text("<html><script>x=1</script><body><h1>Title</h1><p>Some   text</p></body></html>")
    assert parse_document(h) == "Title\nSome text"
    t = tmp_path / "t.txt"
    t.write_bytes(b"line1\r\nline2\x00\x07\tend")
    assert parse_document(t) == "line1\nline2\tend"


def test_errors(tmp_path):
    with pytest.raises(UnsupportedKind):
        parse_document(tmp_path / "x.mp3")
    with pytest.raises(ParseFailed):
        parse_document(tmp_path / "missing.csv")
    bad = tmp_path / "bad.xlsx"
    bad.write_bytes(b"not a zip")
    with pytest.raises(ParseFailed):
        parse_document(bad)
    bad_pdf = tmp_path / "bad.pdf"
    bad_pdf.write_bytes(b"garbage")
    with pytest.raises(ParseFailed):
        parse_document(bad_pdf)


def test_kind_override(tmp_path):
    p = tmp_path / "data.dat"
    p.write_text("a,b\n")
    assert parse_document(p, "csv") == "a | b"


def test_render_table_pads_short_rows():
    assert render_table([["a", "b", "c"], ["d"]]) == "a | b | c\nd |  | "
    assert render_table([]) == ""


@given(st.text())
def test_sanitize_properties(text):
    out = sanitize(text)
    assert "\r" not in out
    assert all(ch in "\n\t" or ord(ch) >= 32 and not 0x7F <= ord(ch) <= 0x9F for ch in out)
    assert sanitize(out) == out


def test_document_tool_resolves_relative_paths(tmp_path):
    (tmp_path / "n.txt").write_text("hello")
    tool = document_tool(tmp_path)
    assert tool.spec.name == "inspect_file"
    assert tool.fn("n.txt") == "hello"


def test_fixture_adapter():
    image = b"\x89PNG fake"
    adapter = FixtureAdapter({FixtureAdapter.key(image): "two owls on a branch"})
    assert isinstance(adapter, MediaAdapter)
    assert adapter.describe_image(image, "what?") == "two owls on a branch"
    assert adapter.transcribe(b"abc").startswith("[audio ") and adapter.transcribe(b"abc").endswith(", 3 bytes]")


def test_answer_multimodal_composes_prompt():
    image = b"img"
    adapter = FixtureAdapter({FixtureAdapter.key(image): "a barn owl"})
    out = answer_multimodal("How many owls?", image, None, adapter, EchoClient())
    assert out == "How many owls?\n\nImage description: a barn owl"
    assert answer_multimodal("Plain?", None, None, adapter, EchoClient()) == "Plain?"
    with_audio = answer_multimodal("Q", None, b"v", adapter, EchoClient(), audio=b"a")
    assert "Video description: [video " in with_audio and "Audio transcript: [audio " in with_audio


def test_adapter_failure_is_wrapped():
    class Broken(FixtureAdapter):
        def describe_video(self, video, question):
            raise RuntimeError("decoder crashed")

    with pytest.raises(AdapterFailed, match="decoder crashed"):
        answer_multimodal("Q", None, b"v", Broken(), EchoClient())
