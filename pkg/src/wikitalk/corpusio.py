"""Intermediate corpus files: newline-delimited JSON, one record per line.

Three record shapes travel between pipeline stages:
  pages.jsonl    one raw page per line (title, namespace_id, page_id, text,
                 dump_timestamp)
  threads.jsonl  one parsed thread per line (thread_id, title, source_page,
                 has_bot, messages[])
  flat.jsonl     one flattened thread per line (thread record plus schema,
                 participants[] and unsigned_ranks)

Timestamps are ISO-8601 with their UTC offset. Serialization is stable
(sorted keys) so re-running a stage on unchanged input is byte-identical.
"""

from __future__ import annotations

import json
from datetime import datetime
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .model import (
    FlatThread,
    MULTILOGUE,
    Participant,
    c_features,
    chronology_consistency,
    classify_thread,
    third_arrival_rank,
    thread_duration,
)
from .parsing import Message, Thread


def message_to_record(m: Message) -> dict:
    return {
        "author_id": m.author_id,
        "author_kind": m.author_kind,
        "timestamp": m.timestamp.isoformat() if m.timestamp else None,
        "rank": m.rank,
        "indent_depth": m.indent_depth,
        "text": m.text,
        "word_count": m.word_count,
    }


def message_from_record(rec: dict) -> Message:
    ts = rec.get("timestamp")
    return Message(
        author_id=rec["author_id"],
        author_kind=rec["author_kind"],
        timestamp=datetime.fromisoformat(ts) if ts else None,
        rank=rec["rank"],
        indent_depth=rec["indent_depth"],
        text=rec["text"],
        word_count=rec["word_count"],
    )


def thread_to_record(t: Thread) -> dict:
    return {
        "thread_id": t.thread_id,
        "title": t.title,
        "source_page": t.source_page,
        "has_bot": t.has_bot,
        "messages": [message_to_record(m) for m in t.messages],
    }


def thread_from_record(rec: dict) -> Thread:
    return Thread(
        thread_id=rec["thread_id"],
        title=rec["title"],
        source_page=rec["source_page"],
        has_bot=rec["has_bot"],
        messages=tuple(message_from_record(m) for m in rec["messages"]),
    )


def thread_features(ft: FlatThread) -> dict:
    """Derived per-thread features carried on flat records for inspection.

    Loaders ignore them; the messages stay the source of truth.
    """
    kind, participant_count = classify_thread(ft)
    duration = thread_duration(ft)
    features = {
        "class": kind,
        "participant_count": participant_count,
        "message_count": len(ft.messages),
        "third_arrival_rank": third_arrival_rank(ft),
        "chronology_consistency": chronology_consistency(ft),
        "duration_s": duration.total_seconds() if duration is not None else None,
    }
    if kind == MULTILOGUE:
        c = c_features(ft)
        features["c_delay_from_first_s"] = (
            c.delay_from_first.total_seconds() if c.delay_from_first is not None else None
        )
        features["c_delay_from_previous_s"] = (
            c.delay_from_previous.total_seconds()
            if c.delay_from_previous is not None
            else None
        )
        features["c_first_message_is_last"] = c.c_first_message_is_last
    return features


def flat_to_record(ft: FlatThread) -> dict:
    return {
        "thread_id": ft.thread_id,
        "title": ft.title,
        "source_page": ft.source_page,
        "messages": [message_to_record(m) for m in ft.messages],
        "participants": [
            {"author_id": p.author_id, "letter": p.letter, "arrival_rank": p.arrival_rank}
            for p in ft.participants
        ],
        "schema": ft.schema,
        "unsigned_ranks": list(ft.unsigned_ranks),
        "features": thread_features(ft),
    }


def flat_from_record(rec: dict) -> FlatThread:
    return FlatThread(
        thread_id=rec["thread_id"],
        title=rec["title"],
        source_page=rec["source_page"],
        messages=tuple(message_from_record(m) for m in rec["messages"]),
        participants=tuple(
            Participant(p["author_id"], p["letter"], p["arrival_rank"])
            for p in rec["participants"]
        ),
        schema=rec["schema"],
        unsigned_ranks=tuple(rec["unsigned_ranks"]),
    )


def write_jsonl(records: Iterable[dict], target: str | Path | TextIO) -> int:
    """Write one JSON object per line; returns the record count."""
    own = isinstance(target, (str, Path))
    fh = open(target, "w", encoding="utf-8") if own else target
    count = 0
    try:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
            count += 1
    finally:
        if own:
            fh.close()
    return count


def iter_jsonl(source: str | Path | TextIO) -> Iterator[dict]:
    own = isinstance(source, (str, Path))
    fh = open(source, encoding="utf-8") if own else source
    try:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
    finally:
        if own:
            fh.close()


def load_threads(path: str | Path) -> list[Thread]:
    return [thread_from_record(rec) for rec in iter_jsonl(path)]


def load_flat_threads(path: str | Path) -> list[FlatThread]:
    return [flat_from_record(rec) for rec in iter_jsonl(path)]


def load_flat_corpus(path: str | Path) -> dict[str, FlatThread]:
    """Flat threads keyed by thread id, as the annotation service expects."""
    return {ft.thread_id: ft for ft in load_flat_threads(path)}
