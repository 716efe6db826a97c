"""Split talk-page wikitext into titled threads and signature-delimited messages.

A message ends at its author's signature: a user link (or bare IP, or the
rendered "Name (d)" convention) followed within 80 characters by a French
datetime with a zone abbreviation. Text after the last signature of a
section becomes a trailing unsigned message.
"""

from __future__ import annotations

import ipaddress
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .dump import RawPage
from .specificity import count_words

FRENCH_MONTHS = {
    "janvier": 1,
    "février": 2,
    "mars": 3,
    "avril": 4,
    "mai": 5,
    "juin": 6,
    "juillet": 7,
    "août": 8,
    "septembre": 9,
    "octobre": 10,
    "novembre": 11,
    "décembre": 12,
}

# French Wikipedia signs in CET/CEST; anything else is a parse error.
ZONE_OFFSETS = {
    "CET": timezone(timedelta(hours=1)),
    "CEST": timezone(timedelta(hours=2)),
    "UTC": timezone.utc,
}

SIGNATURE_WINDOW = 80
DEFAULT_MIN_WORDS = 2

REGISTERED = "registered"
ANONYMOUS_IP = "anonymous_ip"
UNSIGNED = "unsigned"


class TimestampParseError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    author_id: str
    author_kind: str  # registered | anonymous_ip
    timestamp: datetime
    span: tuple[int, int]


@dataclass(frozen=True)
class Message:
    author_id: str | None  # None for the unsigned sentinel
    author_kind: str
    timestamp: datetime | None
    rank: int
    indent_depth: int
    text: str
    word_count: int


@dataclass(frozen=True)
class Thread:
    thread_id: str
    title: str
    source_page: str
    messages: tuple[Message, ...]
    has_bot: bool


_DATETIME_RE = re.compile(
    r"(\d{1,2})(?:er)?\s+([A-Za-zÀ-ÖØ-öø-ÿ]+)\s+(\d{4})\s+à\s+(\d{1,2})[:h](\d{2})\s+\(([A-Z]+)\)"
)

_USERLINK_RE = re.compile(
    r"\[\[\s*(?:"
    r"(?:[Uu]tilisateur|[Uu]tilisatrice|[Uu]ser(?:[ _]talk)?|[Dd]iscussion[ _][Uu]tilisateur|[Dd]iscussion[ _][Uu]tilisatrice)"
    r"\s*:\s*([^|\]#]+?)"
    r"|[Ss]p[ée]cial\s*:\s*[Cc]ontributions\s*/\s*([^|\]#]+?)"
    r")\s*(?:[|#][^\]]*)?\]\]"
)

_IPV4_RE = re.compile(r"(?<![\d.])(?:\d{1,3}\.){3}\d{1,3}(?![\d.])")
_IPV6_RE = re.compile(r"(?<![0-9A-Fa-f:])[0-9A-Fa-f]{1,4}(?::+[0-9A-Fa-f]{0,4}){2,7}(?![0-9A-Fa-f:])")

_PLAIN_NAME_RE = re.compile(
    r"([^\n]{1,80}?)\s*\(\s*(?:d(?:iscuter)?|talk)\s*\)\s*(?:le\s+)?$"
)

_NAME_CUTS = ("--", "—", "–", "]]", "}}", ".", "!", "?", ";", ":", "„", "«", "»", '"')


def parse_french_timestamp(s: str) -> datetime:
    """Parse "21 février 2010 à 19:26 (CET)" into an offset-aware datetime."""
    m = _DATETIME_RE.search(s)
    if m is None:
        raise TimestampParseError(f"no French datetime in {s!r}")
    return _timestamp_from_match(m)


def _timestamp_from_match(m: re.Match) -> datetime:
    month_name = m.group(2).lower()
    if month_name not in FRENCH_MONTHS:
        raise TimestampParseError(f"unknown month name {m.group(2)!r}")
    zone = m.group(6)
    if zone not in ZONE_OFFSETS:
        raise TimestampParseError(f"unknown zone abbreviation {zone!r}")
    try:
        return datetime(
            int(m.group(3)),
            FRENCH_MONTHS[month_name],
            int(m.group(1)),
            int(m.group(4)),
            int(m.group(5)),
            tzinfo=ZONE_OFFSETS[zone],
        )
    except ValueError as exc:
        raise TimestampParseError(f"invalid date in {m.group(0)!r}: {exc}") from exc


def _as_ip(candidate: str) -> str | None:
    try:
        return str(ipaddress.ip_address(candidate))
    except ValueError:
        return None


def _normalise_username(name: str) -> str:
    return re.sub(r"[_\s]+", " ", name).strip()


def _find_author(text: str, at: int, dt_start: int) -> tuple[str, int] | None:
    """Locate the author signing right before the datetime at ``dt_start``.

    Returns (author_id, start offset in text) or None. Tried in order:
    wikitext user link, bare IP, rendered "Name (d)" form. A user link must
    end within the anchor window but may start earlier (long usernames).
    """
    anchor_start = max(at, dt_start - SIGNATURE_WINDOW)
    wide_start = max(at, dt_start - SIGNATURE_WINDOW - 200)
    win_start = wide_start
    wide = text[wide_start:dt_start]

    links = [
        m
        for m in _USERLINK_RE.finditer(wide)
        if wide_start + m.end() > anchor_start
    ]
    if links:
        name = _normalise_username(links[-1].group(1) or links[-1].group(2))
        # a signature is usually several adjacent links to the same user
        # (user page, talk page, contributions); span from the first of them
        first = len(links) - 1
        while first > 0:
            prev = links[first - 1]
            gap = wide[prev.end() : links[first].start()]
            same = _normalise_username(prev.group(1) or prev.group(2)) == name
            if same and len(gap) <= 30 and "\n" not in gap:
                first -= 1
            else:
                break
        return name, wide_start + links[first].start()

    win_start = anchor_start
    window = text[anchor_start:dt_start]
    ip_match = None
    for rx in (_IPV4_RE, _IPV6_RE):
        for m in rx.finditer(window):
            if _as_ip(m.group(0)) is not None:
                if ip_match is None or m.start() > ip_match.start():
                    ip_match = m
    if ip_match is not None:
        return ip_match.group(0), win_start + ip_match.start()

    m = _PLAIN_NAME_RE.search(window)
    if m is not None:
        group = m.group(1)
        cut = 0
        for marker in _NAME_CUTS:
            idx = group.rfind(marker)
            if idx >= 0:
                cut = max(cut, idx + len(marker))
        tail = group[cut:]
        lead = len(tail) - len(tail.lstrip(" \t:*#"))
        name = tail[lead:].rstrip()
        if name and "[[" not in name:
            return name, win_start + m.start(1) + cut + lead
    return None


def parse_signature(text: str, at: int = 0) -> Signature | None:
    """First signature found at or after position ``at``; None when absent."""
    pos = at
    while True:
        m = _DATETIME_RE.search(text, pos)
        if m is None:
            return None
        pos = m.end()
        try:
            ts = _timestamp_from_match(m)
        except TimestampParseError:
            continue
        found = _find_author(text, at, m.start())
        if found is None:
            continue
        author, author_start = found
        start = _extend_over_dashes(text, author_start)
        ip = _as_ip(author)
        return Signature(
            author_id=author,
            author_kind=ANONYMOUS_IP if ip is not None else REGISTERED,
            timestamp=ts,
            span=(start, m.end()),
        )


def _extend_over_dashes(text: str, start: int) -> int:
    while start > 0 and text[start - 1] in "-—–":
        start -= 1
    return start


_HEADING2_RE = re.compile(r"^==([^=\n].*?)==[ \t]*(?:\n|$)", re.MULTILINE)


def split_sections(page_text: str) -> list[tuple[str, str]]:
    """Level-2 sections of a page as (heading, body) pairs.

    Text before the first heading becomes a headingless ("") preamble entry;
    deeper headings stay inside their parent body.
    """
    sections: list[tuple[str, str]] = []
    matches = list(_HEADING2_RE.finditer(page_text))
    preamble_end = matches[0].start() if matches else len(page_text)
    preamble = page_text[:preamble_end]
    if preamble.strip():
        sections.append(("", preamble))
    for i, m in enumerate(matches):
        body_end = matches[i + 1].start() if i + 1 < len(matches) else len(page_text)
        sections.append((m.group(1).strip(), page_text[m.end() : body_end]))
    return sections


def _indent_depth(block: str) -> int:
    for line in block.splitlines():
        if line.strip():
            return len(line) - len(line.lstrip(":*"))
    return 0


def _clean_text(content: str) -> str:
    lines = [re.sub(r"^[:*#]+\s?", "", line) for line in content.splitlines()]
    return "\n".join(lines).strip()


def segment_messages(body: str) -> list[Message]:
    """Signature-delimited messages of one section body, ranked in page order."""
    signatures: list[Signature] = []
    at = 0
    while True:
        sig = parse_signature(body, at)
        if sig is None:
            break
        signatures.append(sig)
        at = sig.span[1]

    messages: list[Message] = []
    prev = 0
    for sig in signatures:
        block = body[prev : sig.span[1]]
        text = _clean_text(body[prev : sig.span[0]])
        messages.append(
            Message(
                author_id=sig.author_id,
                author_kind=sig.author_kind,
                timestamp=sig.timestamp,
                rank=len(messages) + 1,
                indent_depth=_indent_depth(block),
                text=text,
                word_count=count_words(text),
            )
        )
        prev = sig.span[1]
    tail = body[prev:]
    if tail.strip():
        text = _clean_text(tail)
        messages.append(
            Message(
                author_id=None,
                author_kind=UNSIGNED,
                timestamp=None,
                rank=len(messages) + 1,
                indent_depth=_indent_depth(tail),
                text=text,
                word_count=count_words(text),
            )
        )
    return messages


def is_bot(author_id: str, bot_list: Iterable[str] = ()) -> bool:
    """Bot predicate: listed name (case-insensitive) or a "bot" name suffix."""
    lowered = author_id.lower()
    return lowered.endswith("bot") or lowered in {b.lower() for b in bot_list}


def load_bot_list(path: str | Path) -> frozenset[str]:
    names = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            names.append(line)
    return frozenset(names)


def parse_page(page: RawPage, bot_list: Iterable[str] = ()) -> list[Thread]:
    """All threads of one talk page, bot flags resolved against ``bot_list``."""
    bots = frozenset(b.lower() for b in bot_list)
    threads = []
    for index, (heading, body) in enumerate(split_sections(page.text)):
        messages = tuple(segment_messages(body))
        has_bot = any(
            m.author_id is not None and is_bot(m.author_id, bots) for m in messages
        )
        threads.append(
            Thread(
                thread_id=f"{page.title}#s{index}",
                title=heading,
                source_page=page.title,
                messages=messages,
                has_bot=has_bot,
            )
        )
    return threads


def filter_thread(thread: Thread, min_words: int = DEFAULT_MIN_WORDS) -> str | None:
    """None when the thread is kept, otherwise the drop reason."""
    if not thread.messages:
        return "no_messages"
    if sum(m.word_count for m in thread.messages) < min_words:
        return "too_few_words"
    if thread.has_bot:
        return "bot"
    return None


def parse_corpus(
    pages: Iterable[RawPage],
    bot_list: Iterable[str] = (),
    min_words: int = DEFAULT_MIN_WORDS,
) -> Iterator[tuple[Thread, str | None]]:
    """Parse pages into threads, pairing each with its filter verdict."""
    bots = frozenset(bot_list)
    for page in pages:
        for thread in parse_page(page, bots):
            yield thread, filter_thread(thread, min_words=min_words)
