"""Stream pages out of MediaWiki XML exports.

Reads a pages export (plain XML or .bz2, sniffed by magic bytes) with expat,
keeping only one page in memory at a time. Only the latest revision of each
page is retained, matching a pages-current snapshot.
"""

from __future__ import annotations

import bz2
import re
import warnings
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator
from xml.parsers import expat

KNOWN_SCHEMA_VERSIONS = ("0.10", "0.11")
DEFAULT_ARCHIVE_PATTERNS = ("archive", "archives")

_CHUNK_SIZE = 1 << 16
_BZ2_MAGIC = b"BZh"


class DumpFormatError(Exception):
    """Malformed XML in the dump stream."""

    def __init__(self, message: str, byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class RawPage:
    """One page of the dump: latest-revision wikitext plus identifiers."""

    title: str
    namespace_id: int
    page_id: int
    text: str
    dump_timestamp: datetime | None

    def to_record(self) -> dict:
        return {
            "title": self.title,
            "namespace_id": self.namespace_id,
            "page_id": self.page_id,
            "text": self.text,
            "dump_timestamp": self.dump_timestamp.isoformat() if self.dump_timestamp else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RawPage":
        ts = rec.get("dump_timestamp")
        return cls(
            title=rec["title"],
            namespace_id=rec["namespace_id"],
            page_id=rec["page_id"],
            text=rec["text"],
            dump_timestamp=datetime.fromisoformat(ts) if ts else None,
        )


class _PageHandler:
    """Expat callbacks collecting one page at a time."""

    def __init__(self) -> None:
        self.stack: list[str] = []
        self.ready: list[RawPage] = []
        self.namespace_names: dict[int, str] = {}
        self.schema_version: str | None = None
        self._chars: list[str] | None = None
        self._ns_key: int | None = None
        self._reset_page()

    def _reset_page(self) -> None:
        self._title = ""
        self._ns: int | None = None
        self._page_id: int | None = None
        self._rev_text = ""
        self._rev_timestamp: datetime | None = None
        self._pending_text: list[str] = []
        self._pending_timestamp = ""

    def start(self, name: str, attrs: dict) -> None:
        parent = self.stack[-1] if self.stack else None
        self.stack.append(name)
        if name == "mediawiki" and parent is None:
            self._check_schema(attrs)
        elif name == "page":
            self._reset_page()
        elif name == "title" and parent == "page":
            self._chars = []
        elif name == "ns" and parent == "page":
            self._chars = []
        elif name == "id" and parent == "page":
            self._chars = []
        elif name == "timestamp" and parent == "revision":
            self._chars = []
        elif name == "text" and parent == "revision":
            self._pending_text = []
            self._chars = self._pending_text
        elif name == "namespace" and parent == "namespaces":
            self._ns_key = int(attrs.get("key", "0"))
            self._chars = []

    def chars(self, data: str) -> None:
        if self._chars is not None:
            self._chars.append(data)

    def end(self, name: str) -> None:
        parent = self.stack[-2] if len(self.stack) > 1 else None
        content = "".join(self._chars) if self._chars is not None else ""
        if name == "title" and parent == "page":
            self._title = content
        elif name == "ns" and parent == "page":
            self._ns = int(content)
        elif name == "id" and parent == "page" and self._page_id is None:
            self._page_id = int(content)
        elif name == "timestamp" and parent == "revision":
            self._pending_timestamp = content
        elif name == "namespace" and parent == "namespaces":
            if self._ns_key is not None:
                self.namespace_names[self._ns_key] = content
            self._ns_key = None
        elif name == "revision":
            # last revision in page order wins: that is the latest one
            self._rev_text = "".join(self._pending_text)
            self._rev_timestamp = _parse_dump_timestamp(self._pending_timestamp)
            self._pending_text = []
            self._pending_timestamp = ""
        elif name == "page":
            self.ready.append(
                RawPage(
                    title=self._title,
                    namespace_id=self._ns if self._ns is not None else 0,
                    page_id=self._page_id if self._page_id is not None else 0,
                    text=self._rev_text,
                    dump_timestamp=self._rev_timestamp,
                )
            )
        self._chars = None
        self.stack.pop()

    def _check_schema(self, attrs: dict) -> None:
        version = attrs.get("version")
        if version is None:
            m = re.search(r"export-([\d.]+)/?$", attrs.get("xmlns", ""))
            version = m.group(1) if m else None
        self.schema_version = version
        if version not in KNOWN_SCHEMA_VERSIONS:
            warnings.warn(
                f"unknown dump schema version {version!r}; attempting best-effort parse",
                stacklevel=4,
            )


def _parse_dump_timestamp(s: str) -> datetime | None:
    s = s.strip()
    if not s:
        return None
    try:
        return datetime.fromisoformat(s.replace("Z", "+00:00"))
    except ValueError:
        return None


def _open_stream(source: str | Path | BinaryIO) -> BinaryIO:
    if isinstance(source, (str, Path)):
        raw: BinaryIO = open(source, "rb")
    else:
        raw = source
    head = raw.read(len(_BZ2_MAGIC))
    if hasattr(raw, "seek"):
        raw.seek(0)
        rest = raw
    else:  # non-seekable stream: splice the sniffed bytes back on
        rest = _Concat(head, raw)
    if head == _BZ2_MAGIC:
        return bz2.BZ2File(rest)  # type: ignore[arg-type]
    return rest


class _Concat:
    """Minimal read-only file object chaining a prefix with a stream."""

    def __init__(self, prefix: bytes, stream: BinaryIO):
        self._prefix = prefix
        self._stream = stream

    def read(self, n: int = -1) -> bytes:
        if self._prefix:
            if n < 0 or n >= len(self._prefix):
                out, self._prefix = self._prefix, b""
                more = self._stream.read(n - len(out)) if n > 0 else self._stream.read(n)
                return out + (more or b"")
            out, self._prefix = self._prefix[:n], self._prefix[n:]
            return out
        return self._stream.read(n)


def stream_pages(
    source: str | Path | BinaryIO,
    namespace_filter: Iterable[int],
    check_namespace_names: bool = True,
) -> Iterator[RawPage]:
    """Yield every page whose namespace is in ``namespace_filter``, in dump order.

    Single streaming pass; peak memory stays bounded by the largest page, not
    the dump size. Raises DumpFormatError (with the byte offset into the
    decompressed XML) on malformed input.
    """
    wanted = set(namespace_filter)
    handler = _PageHandler()
    parser = expat.ParserCreate()
    parser.buffer_text = True
    parser.StartElementHandler = handler.start
    parser.EndElementHandler = handler.end
    parser.CharacterDataHandler = handler.chars

    stream = _open_stream(source)
    warned_ns: set[int] = set()
    try:
        while True:
            chunk = stream.read(_CHUNK_SIZE)
            try:
                parser.Parse(chunk, not chunk)
            except expat.ExpatError as exc:
                offset = getattr(parser, "ErrorByteIndex", None)
                raise DumpFormatError(
                    f"malformed XML at byte offset {offset}: {exc}", byte_offset=offset
                ) from exc
            for page in handler.ready:
                if check_namespace_names:
                    _check_title_prefix(page, handler.namespace_names, warned_ns)
                if page.namespace_id in wanted:
                    yield page
            handler.ready.clear()
            if not chunk:
                break
    finally:
        if isinstance(source, (str, Path)):
            stream.close()


def _check_title_prefix(page: RawPage, names: dict[int, str], warned: set[int]) -> None:
    name = names.get(page.namespace_id)
    if not name or page.namespace_id == 0 or page.namespace_id in warned:
        return
    if not page.title.startswith(name + ":"):
        warned.add(page.namespace_id)
        warnings.warn(
            f"page {page.title!r} does not carry the declared prefix for "
            f"namespace {page.namespace_id} ({name!r})",
            stacklevel=3,
        )


def compile_archive_patterns(patterns: Iterable[str]) -> list[re.Pattern]:
    """Each pattern is a prefix word, optionally followed by separators and digits."""
    return [
        re.compile(rf"^{re.escape(p)}(?:[\s_\-]*\d[\d\s_\-]*)?$", re.IGNORECASE)
        for p in patterns
    ]


_DEFAULT_ARCHIVE_RES = compile_archive_patterns(DEFAULT_ARCHIVE_PATTERNS)


def is_archive_subpage(title: str, patterns: Iterable[str] | None = None) -> bool:
    """True iff some subpage component of ``title`` matches an archive pattern."""
    regexes = _DEFAULT_ARCHIVE_RES if patterns is None else compile_archive_patterns(patterns)
    parts = title.split("/")
    for component in parts[1:]:
        component = component.strip()
        if any(rx.match(component) for rx in regexes):
            return True
    return False


def load_archive_patterns(path: str | Path) -> list[str]:
    """One archive prefix per line; blank lines and # comments ignored."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out
