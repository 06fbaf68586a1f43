from __future__ import annotations

import json
import random
from urllib.parse import parse_qs, urlsplit

import pytest
from hypothesis import given
from hypothesis import strategies as st

from agentlab.core.clients import ScriptedClient
from agentlab.errors import (
    AllSourcesFailed, BadTimestamp, CassetteMiss, ExtractFailed, FetchFailed, MalformedList, MalformedVerdict, WrongArity,
)
from agentlab.search import browse, routing, wayback
from agentlab.search.engines import archive_target
from agentlab.search.models import SearchHit, SourceKind
from agentlab.search.query import QuerySpec, expand_query, lexicon_variants, parse_query_list, reflect_query
from agentlab.search.search import merge_hits, normalize_url, search
from agentlab.search.tools import SearchAgent
from agentlab.search.transport import CassetteTransport, Response, cassette_name, redact_url

QUERY = "barn owl habitat"
G, W, D = SourceKind.GOOGLE, SourceKind.WIKIPEDIA, SourceKind.DUCKDUCKGO


@pytest.fixture
def tape(fixtures):
    return CassetteTransport(fixtures / "cassettes")


@pytest.fixture
def article(fixtures):
    return (fixtures / "pages" / "article.html").read_text()


# query optimization

def test_reflect_query_sets_optimized():
    reply = '{"Problems":"none","Suggestions":"-","Augmented Query":"q"}'
    spec = reflect_query(QuerySpec("q"), ScriptedClient([reply]))
    assert spec.optimized == "q" and spec.best == "q"


def test_reflect_query_rewrites_ambiguous_query():
    reply = '{"Problems":"jaguar is ambiguous","Suggestions":"name the animal","Augmented Query":"jaguar cat top speed"}'
    spec = reflect_query(QuerySpec("jaguar speed", task_context="wildlife quiz"), ScriptedClient([reply]))
    assert spec.optimized != spec.initial and spec.problems == "jaguar is ambiguous"


def test_reflect_query_missing_key_after_reask():
    bad = '{"Problems":"x","Suggestions":"y"}'
    client = ScriptedClient([bad, bad])
    with pytest.raises(MalformedVerdict):
        reflect_query(QuerySpec("q"), client)
    assert len(client.calls) == 2


def test_expand_query():
    assert expand_query("q", 2, ScriptedClient(['["a","b"]'])) == ["a", "b"]
    with pytest.raises(WrongArity):
        expand_query("q", 2, ScriptedClient(['["a","b","c"]']))
    with pytest.raises(MalformedList):
        expand_query("q", 2, ScriptedClient(['["a","A "]']))
    with pytest.raises(MalformedList):
        expand_query("q", 2, ScriptedClient(["no list here"]))


def test_parse_query_list_python_and_bare_forms():
    assert parse_query_list("Sure: ['x y', 'z']") == ["x y", "z"]
    assert parse_query_list("[alpha, beta]") == ["alpha", "beta"]


def test_lexicon_variants():
    assert lexicon_variants("colour of owls", [("colour", ("color", "hue"))]) == ["color of owls", "hue of owls"]


def test_query_spec_needs_text():
    with pytest.raises(ValueError):
        QuerySpec("  ")


# routing

def test_route_presets():
    assert routing.route_sources(QuerySpec("owls"), "single", 2026) == [G]
    assert set(routing.route_sources(QuerySpec("owls"), "k3", 2026)) == {G, W, D}
    assert set(routing.route_sources(QuerySpec("owls"), "k5", 2026)) == {G, W, D, SourceKind.BING, SourceKind.BAIDU}


@pytest.mark.parametrize(
    "text,expected",
    [
        ("homepage of example.com as of 2019", True),
        ("what did the site say in 2015", True),
        ("the 2018 version of the page", True),
        ("show the archived page of example.com", True),
        ("population of France", False),
        ("as of 2030", False),
        ("2019 was a year", False),
    ],
)
def test_temporal_cue(text, expected):
    assert routing.has_temporal_cue(text, current_year=2026) is expected


@given(st.text(max_size=60))
def test_presets_nest(text):
    spec = QuerySpec(text if text.strip() else "x")
    single, k3, k5 = (set(routing.route_sources(spec, p, 2026)) for p in ("single", "k3", "k5"))
    assert single <= k3 <= k5


# search

def test_search_replays_google(tape):
    hits = search(QUERY, [G], tape)
    assert [h.rank for h in hits] == [1, 2, 3] and {h.source for h in hits} == {G}
    assert hits[0].url == "https://example.org/owls/barn"


def test_search_partial_failure_records_warning(tape):
    hits = search(QUERY, [D, W], tape)
    assert {h.source for h in hits} == {W}
    assert len(hits.warnings) == 1 and hits.warnings[0].startswith("duckduckgo")


def test_search_all_failed(tape):
    with pytest.raises(AllSourcesFailed):
        search(QUERY, [D], tape)


def test_search_needs_query(tape):
    with pytest.raises(ValueError):
        search("  ", [G], tape)


def test_search_is_deterministic(tape):
    first = [h.to_dict() for h in search(QUERY, [G, W, D], tape)]
    second = [h.to_dict() for h in search(QUERY, [G, W, D], tape)]
    assert json.dumps(first) == json.dumps(second)


def test_wayback_source_needs_url_and_year(tape):
    assert archive_target("owls in 2019") is None
    req = archive_target("example.com in 2019")
    assert (req.url, req.timestamp) == ("example.com", "2019")


def test_cassette_miss(tmp_path):
    with pytest.raises(CassetteMiss):
        CassetteTransport(tmp_path).request("GET", "https://nowhere.example/")


def test_cassette_names_ignore_secrets():
    a = cassette_name("GET", "https://api.example.com/s?q=x&key=one", None)
    assert a == cassette_name("GET", "https://api.example.com/s?q=x&key=two", None)
    assert a != cassette_name("GET", "https://api.example.com/s?q=y&key=one", None)
    assert "one" not in redact_url("https://api.example.com/s?key=one&token=t")


def test_cassette_record_replay_binary(tmp_path):
    class Fixed:
        def request(self, method, url, params=None, headers=None, body=None, timeout=15.0):
            return Response(200, {"content-type": "image/png"}, b"\x00\xffdata", url)

    CassetteTransport(tmp_path, "record", Fixed()).request("GET", "https://img.example/a.png")
    replay = CassetteTransport(tmp_path).request("GET", "https://img.example/a.png")
    assert replay.body == b"\x00\xffdata" and replay.content_type == "image/png"


# merging

def hit(source, rank, url=None):
    return SearchHit(f"{source}{rank}", url or f"https://{source}.example/{rank}", "", source, rank)


def test_merge_dedup_keeps_first():
    a = hit(G, 1, "https://Example.com/page/")
    b = hit(W, 1, "https://example.com/page#top")
    assert merge_hits([a, b], 10) == [a]


def test_merge_round_robin():
    hits = [hit(G, r) for r in (1, 2, 3)] + [hit(W, r) for r in (1, 2, 3)]
    assert [h.title for h in merge_hits(hits, 4)] == ["google1", "wikipedia1", "google2", "wikipedia2"]
    assert merge_hits([], 3) == []


@given(st.lists(st.tuples(st.sampled_from(list(SourceKind)), st.integers(1, 5), st.integers(0, 6)), max_size=30), st.integers(1, 12))
def test_merge_properties(rows, limit):
    hits = [hit(src, rank, f"https://site{n}.example/p") for src, rank, n in rows]
    merged = merge_hits(hits, limit)
    keys = [normalize_url(h.url) for h in merged]
    assert len(keys) == len(set(keys)) and len(merged) <= limit
    assert len(merged) == min(limit, len({normalize_url(h.url) for h in hits}))


# browsing

def test_visit_extracts_main_text(tape):
    page = browse.visit("https://example.org/owls/barn", tape)
    assert page.fetched_via == "jina_style_reader" and page.mode == "text"
    assert "Barn owls hunt at night over open fields." in page.body
    assert "<p>" not in page.body and "tracking" not in page.body
    assert "Buy binoculars" not in page.body and "Copyright" not in page.body
    assert "UK | 9000" in page.body


def test_visit_errors(tape):
    with pytest.raises(FetchFailed) as err:
        browse.visit("https://example.org/missing", tape)
    assert err.value.status == 404
    assert browse.visit("https://example.org/empty", tape).body == ""
    with pytest.raises(ExtractFailed):
        browse.visit("https://example.org/logo.png", tape)
    with pytest.raises(ValueError):
        browse.visit("not a url", tape)


def test_read_modes(tape):
    url = "https://example.org/owls/barn"
    assert browse.read(url, "text", tape).body == browse.visit(url, tape).body
    md = browse.read(url, "markdown", tape).body
    assert md.startswith("# Barn owls") and "## Habitat" in md and "- Diet: small mammals" in md
    links = browse.read(url, "links", tape).body.splitlines()
    assert "tawny owl → https://example.org/owls/tawny" in links
    assert all(line.split(" → ")[1].startswith(("http://", "https://")) for line in links)


def test_links_resolve_against_host():
    root = browse.extract('<p><a href="/x">go</a> <a href="mailto:a@b">mail</a></p>', "https://h.example/a/b", "raw")
    assert browse.render_links(root) == "go → https://h.example/x"


def test_markdown_heading():
    root = browse.extract("<h1>T</h1><p>body</p>", "https://h.example/", "raw")
    assert browse.render_markdown(root).startswith("# T")


@pytest.mark.parametrize("extractor", ["raw", "crawler", "jina_style_reader"])
def test_extractors_drop_scripts(article, extractor):
    text = browse.render_text(browse.extract(article, "https://example.org/", extractor))
    assert "Barn owls hunt at night" in text
    assert ("tracking" in text) is False or extractor == "raw"


# wayback

def test_build_cdx_url():
    assert wayback.build_cdx_url(wayback.ArchiveRequest("example.com", "20200101")) == (
        "http://web.archive.org/cdx/search/cdx?url=example.com&output=json&from=20200101"
    )
    assert wayback.build_cdx_url(wayback.ArchiveRequest("a.org", "2019")).endswith("url=a.org&output=json&from=2019")
    with pytest.raises(BadTimestamp):
        wayback.ArchiveRequest("example.com", "202")


@given(
    st.from_regex(r"[a-z]{1,8}\.(com|org)(/[a-z0-9&?=+#%]{0,10})?", fullmatch=True),
    st.sampled_from(["2019", "201901", "20190101", "20190101120000"]),
)
def test_cdx_url_round_trip(url, ts):
    parsed = parse_qs(urlsplit(wayback.build_cdx_url(wayback.ArchiveRequest(url, ts))).query, keep_blank_values=True)
    assert parsed == {"url": [url], "output": ["json"], "from": [ts]}


def test_cdx_lookup_and_snapshot(tape):
    records = wayback.cdx_lookup(wayback.ArchiveRequest("example.com", "2019"), tape)
    assert [r.timestamp for r in records] == ["20190105123000", "20190301000000"]
    assert records[0].snapshot_url == "http://web.archive.org/web/20190105123000id_/http://example.com/"
    assert b"archived in 2019" in wayback.fetch_snapshot(records[0], tape).body


def test_search_agent_tools(tape):
    agent = SearchAgent(tape, preset="single")
    assert [t.name for t in agent.tools()] == ["web_search", "visit_page", "read_page", "archived_page"]
    out = agent.web_search(QUERY)
    assert out.startswith("1. [Barn owls | Bird Notes](https://example.org/owls/barn)")
    archived = agent.archived_page("example.com", "2019")
    assert "Archived http://example.com/ at 20190105123000" in archived and "archived in 2019" in archived


def test_search_agent_k3_reports_failed_source(tape):
    out = SearchAgent(tape, preset="k3").web_search(QUERY)
    assert "Warnings:" in out and "duckduckgo" in out
    assert "en.wikipedia.org/wiki/Barn_owl" in out
