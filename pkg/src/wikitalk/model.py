"""Flatten threads into linear conversations with participant arrival letters.

Reply trees on talk pages are unreliable, so a conversation is the page-order
sequence of messages. Participants are renamed by arrival: the opener is A,
the first respondent B, the third distinct voice C, and so on. The schema
string maps each message rank to its author's letter ("ABAC").
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from datetime import timedelta
from typing import NamedTuple

from .parsing import Message, Thread

LETTER_ALPHABET = string.ascii_uppercase + string.ascii_lowercase

MONOLOGUE_SINGLE = "monologue_single"
MONOLOGUE_MULTI = "monologue_multi"
DIALOGUE = "dialogue"
MULTILOGUE = "multilogue"


@dataclass(frozen=True)
class Participant:
    author_id: str
    letter: str
    arrival_rank: int


@dataclass(frozen=True)
class FlatThread:
    thread_id: str
    title: str
    source_page: str
    messages: tuple[Message, ...]
    participants: tuple[Participant, ...]
    schema: str
    unsigned_ranks: tuple[int, ...]  # ranks attributed to anonymous singletons


def flatten(thread: Thread) -> FlatThread:
    """Assign arrival letters in page order and build the schema string.

    Each unsigned message counts as its own anonymous participant; the
    affected ranks are recorded so such threads can be excluded from
    sensitivity checks.
    """
    letters: dict[str, Participant] = {}
    schema: list[str] = []
    unsigned_ranks: list[int] = []
    for message in thread.messages:
        if message.author_id is None:
            key = f"__unsigned_r{message.rank}"
            unsigned_ranks.append(message.rank)
        else:
            key = message.author_id
        participant = letters.get(key)
        if participant is None:
            if len(letters) >= len(LETTER_ALPHABET):
                raise ValueError(
                    f"thread {thread.thread_id!r} exceeds the "
                    f"{len(LETTER_ALPHABET)}-participant letter alphabet"
                )
            participant = Participant(
                author_id=key,
                letter=LETTER_ALPHABET[len(letters)],
                arrival_rank=message.rank,
            )
            letters[key] = participant
        schema.append(participant.letter)
    return FlatThread(
        thread_id=thread.thread_id,
        title=thread.title,
        source_page=thread.source_page,
        messages=thread.messages,
        participants=tuple(letters.values()),
        schema="".join(schema),
        unsigned_ranks=tuple(unsigned_ranks),
    )


def chronology_consistency(ft: FlatThread) -> float | None:
    """Fraction of consecutive timestamped pairs in non-decreasing order.

    Pairs involving an untimestamped message are ignored; None when no pair
    is eligible.
    """
    ordered = 0
    eligible = 0
    for first, second in zip(ft.messages, ft.messages[1:]):
        if first.timestamp is None or second.timestamp is None:
            continue
        eligible += 1
        if second.timestamp >= first.timestamp:
            ordered += 1
    if eligible == 0:
        return None
    return ordered / eligible


def third_arrival_rank(ft: FlatThread) -> int | None:
    """Rank of the first message by the third distinct participant."""
    index = ft.schema.find("C")
    return index + 1 if index >= 0 else None


class ThreadClass(NamedTuple):
    kind: str
    participants: int


def classify_thread(ft: FlatThread) -> ThreadClass:
    n = len(ft.participants)
    if n == 1:
        kind = MONOLOGUE_SINGLE if len(ft.messages) == 1 else MONOLOGUE_MULTI
    elif n == 2:
        kind = DIALOGUE
    else:
        kind = MULTILOGUE
    return ThreadClass(kind, n)


def inter_message_delays(
    ft: FlatThread,
) -> list[tuple[tuple[int, int], timedelta]]:
    """Durations between consecutive timestamped messages, negatives kept."""
    delays = []
    for first, second in zip(ft.messages, ft.messages[1:]):
        if first.timestamp is None or second.timestamp is None:
            continue
        delays.append(((first.rank, second.rank), second.timestamp - first.timestamp))
    return delays


@dataclass(frozen=True)
class CFeatures:
    c_rank: int
    delay_from_first: timedelta | None
    delay_from_previous: timedelta | None
    c_first_message_is_last: bool


def c_features(ft: FlatThread) -> CFeatures:
    """Arrival features of the third participant's first message."""
    c_rank = third_arrival_rank(ft)
    if c_rank is None:
        raise ValueError(f"thread {ft.thread_id!r} has fewer than 3 participants")
    c_msg = ft.messages[c_rank - 1]
    first_msg = ft.messages[0]
    prev_msg = ft.messages[c_rank - 2]
    delay_from_first = None
    delay_from_previous = None
    if c_msg.timestamp is not None and first_msg.timestamp is not None:
        delay_from_first = c_msg.timestamp - first_msg.timestamp
    if c_msg.timestamp is not None and prev_msg.timestamp is not None:
        delay_from_previous = c_msg.timestamp - prev_msg.timestamp
    return CFeatures(
        c_rank=c_rank,
        delay_from_first=delay_from_first,
        delay_from_previous=delay_from_previous,
        c_first_message_is_last=c_rank == len(ft.messages),
    )


def thread_duration(ft: FlatThread) -> timedelta | None:
    """Last signed timestamp minus first; None with fewer than two."""
    stamps = [m.timestamp for m in ft.messages if m.timestamp is not None]
    if len(stamps) < 2:
        return None
    return max(stamps) - min(stamps)
