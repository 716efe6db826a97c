import bz2
import io
import tracemalloc

import pytest

from wikitalk.dump import (
    DumpFormatError,
    RawPage,
    is_archive_subpage,
    stream_pages,
)

EXPECTED_TALK_TITLES = [
    "Discussion:Troubles au Tibet en mars 2008/archives_2009",
    "Discussion:Chocolat",
    "Discussion:Fromage",
    "Discussion:Paris",
    "Discussion:Mer",
    "Discussion:Lune/Archive 1",
    "Discussion:Soleil",
    "Discussion:Vin",
    "Discussion:Thé",
    "Discussion:Café",
]


def test_stream_filters_talk_namespace_in_dump_order(mini_dump_path):
    pages = list(stream_pages(mini_dump_path, {1}))
    assert [p.title for p in pages] == EXPECTED_TALK_TITLES
    assert all(p.namespace_id == 1 for p in pages)


def test_footnote_archive_page_included(talk_pages):
    titles = {p.title for p in talk_pages}
    assert "Discussion:Troubles au Tibet en mars 2008/archives_2009" in titles


def test_empty_filter_yields_nothing(mini_dump_path):
    assert list(stream_pages(mini_dump_path, set())) == []


def test_all_namespaces(mini_dump_path):
    pages = list(stream_pages(mini_dump_path, {0, 1}))
    assert len(pages) == 11
    assert sum(1 for p in pages if p.namespace_id == 0) == 1


def test_page_text_is_full_revision(talk_pages):
    tibet = next(p for p in talk_pages if "Tibet" in p.title)
    assert tibet.text.startswith("== Youtube ==")
    # the very last message must survive, not get truncated
    assert "23 février 2010 à 23:25 (CET)" in tibet.text
    assert tibet.page_id == 1001
    assert tibet.dump_timestamp is not None
    assert tibet.dump_timestamp.year == 2019


def test_bz2_stream_matches_plain(mini_dump_path, tmp_path):
    compressed = tmp_path / "dump.xml.bz2"
    compressed.write_bytes(bz2.compress(mini_dump_path.read_bytes()))
    plain = list(stream_pages(mini_dump_path, {1}))
    packed = list(stream_pages(compressed, {1}))
    assert packed == plain


def test_file_object_source(mini_dump_path):
    with open(mini_dump_path, "rb") as fh:
        pages = list(stream_pages(fh, {1}))
    assert len(pages) == 10


class _NoSeekStream:
    """Pipe-like source: read() only, no seek."""

    def __init__(self, data: bytes):
        self._buf = io.BytesIO(data)

    def read(self, n: int = -1) -> bytes:
        return self._buf.read(n)


def test_non_seekable_bz2_stream(mini_dump_path):
    data = bz2.compress(mini_dump_path.read_bytes())
    pages = list(stream_pages(_NoSeekStream(data), {1}))
    assert len(pages) == 10


def test_non_seekable_plain_stream(mini_dump_path):
    pages = list(stream_pages(_NoSeekStream(mini_dump_path.read_bytes()), {1}))
    assert len(pages) == 10


def test_malformed_xml_reports_byte_offset(tmp_path):
    bad = tmp_path / "bad.xml"
    bad.write_text("<mediawiki version=\"0.10\"><page><title>X</безtitle>", encoding="utf-8")
    with pytest.raises(DumpFormatError) as err:
        list(stream_pages(bad, {1}))
    assert err.value.byte_offset is not None
    assert "byte offset" in str(err.value)


def test_unknown_schema_version_warns(tmp_path):
    doc = (
        '<mediawiki version="9.99"><page><title>Discussion:X</title>'
        "<ns>1</ns><id>7</id><revision><timestamp>2019-09-01T00:00:00Z</timestamp>"
        "<text>bonjour</text></revision></page></mediawiki>"
    )
    path = tmp_path / "odd.xml"
    path.write_text(doc, encoding="utf-8")
    with pytest.warns(UserWarning, match="schema version"):
        pages = list(stream_pages(path, {1}))
    assert [p.title for p in pages] == ["Discussion:X"]


def test_multiple_revisions_keep_latest(tmp_path):
    doc = (
        '<mediawiki version="0.10"><page><title>Discussion:X</title>'
        "<ns>1</ns><id>7</id>"
        "<revision><timestamp>2018-01-01T00:00:00Z</timestamp><text>ancien</text></revision>"
        "<revision><timestamp>2019-09-01T00:00:00Z</timestamp><text>récent</text></revision>"
        "</page></mediawiki>"
    )
    path = tmp_path / "two.xml"
    path.write_text(doc, encoding="utf-8")
    (page,) = stream_pages(path, {1})
    assert page.text == "récent"
    assert page.dump_timestamp.year == 2019


def _synthetic_dump(n_pages: int) -> bytes:
    buf = io.StringIO()
    buf.write('<mediawiki version="0.10"><siteinfo><namespaces>')
    buf.write('<namespace key="1">Discussion</namespace></namespaces></siteinfo>')
    filler = "Contenu de discussion assez long pour peser quelque chose. " * 20
    for i in range(n_pages):
        buf.write(
            f"<page><title>Discussion:Page {i}</title><ns>1</ns><id>{i + 1}</id>"
            f"<revision><timestamp>2019-09-01T00:00:00Z</timestamp>"
            f"<text>== Sujet ==\n{filler}</text></revision></page>"
        )
    buf.write("</mediawiki>")
    return buf.getvalue().encode("utf-8")


def _peak_during_stream(data: bytes) -> int:
    tracemalloc.start()
    count = 0
    for _ in stream_pages(io.BytesIO(data), {1}):
        count += 1
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    return peak


def test_streaming_memory_does_not_grow_with_dump_size():
    small = _synthetic_dump(100)
    large = _synthetic_dump(1000)
    peak_small = _peak_during_stream(small)
    peak_large = _peak_during_stream(large)
    assert peak_large < 2 * peak_small


def test_emitted_count_matches_dump(mini_dump_path):
    assert len(list(stream_pages(mini_dump_path, {1}))) == 10
    assert len(list(stream_pages(mini_dump_path, {0}))) == 1


def test_raw_page_record_round_trip(talk_pages):
    for page in talk_pages:
        assert RawPage.from_record(page.to_record()) == page


@pytest.mark.parametrize(
    "title,expected",
    [
        ("Discussion:X/archives_2009", True),
        ("Discussion:X", False),
        ("Discussion:X/Archive 1", True),
        ("Discussion:X/Archives", True),
        ("Discussion:X/archive2", True),
        ("Discussion:X/Sous-page", False),
        ("Discussion:X/archiveur", False),
        ("Discussion:Troubles au Tibet en mars 2008/archives_2009", True),
    ],
)
def test_is_archive_subpage(title, expected):
    assert is_archive_subpage(title) is expected


def test_archive_patterns_configurable():
    assert is_archive_subpage("Discussion:X/Archiv 3", ["archiv"]) is True
    assert is_archive_subpage("Discussion:X/Archive 1", ["archiv"]) is False
