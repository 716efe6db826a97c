import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from wikitalk.dump import stream_pages
from wikitalk.model import FlatThread, flatten
from wikitalk.parsing import Message, Thread, parse_corpus

FIXTURES = Path(__file__).parent / "fixtures"
MINI_DUMP = FIXTURES / "mini_dump.xml"

CET = timezone(timedelta(hours=1))
BASE_TIME = datetime(2015, 1, 1, 12, 0, tzinfo=CET)


def build_flat(
    authors,
    thread_id="t",
    times=None,
    texts=None,
    title="Sujet",
    source_page="Discussion:Page",
) -> FlatThread:
    """FlatThread from an author sequence; None authors become unsigned.

    Timestamps default to one hour apart; pass times as offsets in minutes
    (None for no timestamp) to override.
    """
    messages = []
    for i, author in enumerate(authors):
        if times is None:
            ts = BASE_TIME + timedelta(hours=i)
        else:
            ts = None if times[i] is None else BASE_TIME + timedelta(minutes=times[i])
        if author is None:
            ts = None
        text = texts[i] if texts else f"contenu du message {i + 1} ici"
        messages.append(
            Message(
                author_id=author,
                author_kind="unsigned" if author is None else "registered",
                timestamp=ts,
                rank=i + 1,
                indent_depth=0,
                text=text,
                word_count=len(text.split()),
            )
        )
    thread = Thread(
        thread_id=thread_id,
        title=title,
        source_page=source_page,
        messages=tuple(messages),
        has_bot=False,
    )
    return flatten(thread)


_VOCAB = (
    "accord article source proposition section discussion modification "
    "référence exemple question paragraphe correction liste avis page"
).split()


def random_flat_thread(rng: random.Random, thread_id: str, min_c_rank: int | None = None) -> FlatThread:
    """One synthetic conversation; min_c_rank forces a late third arrival."""
    if min_c_rank is not None:
        c_rank = rng.randint(min_c_rank, min_c_rank + 6)
        authors = [f"u{1 + (i % 2)}" for i in range(c_rank - 1)] + ["u3"]
        authors += [rng.choice(["u1", "u2", "u3"]) for _ in range(rng.randint(0, 3))]
    else:
        n = rng.choices(range(1, 13), weights=[30, 18, 14, 10, 8, 6, 4, 3, 3, 2, 1, 1])[0]
        authors = []
        known: list[str] = []
        for i in range(n):
            if not known or (rng.random() < 0.35 and len(known) < 8):
                known.append(f"u{len(known) + 1}")
                authors.append(known[-1])
            else:
                authors.append(rng.choice(known))
    times = []
    clock = rng.randint(0, 500_000)
    for i, _ in enumerate(authors):
        if min_c_rank is None and rng.random() < 0.05:
            times.append(None)  # becomes an unsigned message
        else:
            step = rng.randint(1, 3000)
            if rng.random() < 0.04 and i > 0:
                clock -= step  # chronology violation
            else:
                clock += step
            times.append(clock)
    final_authors = [a if t is not None else None for a, t in zip(authors, times)]
    texts = [
        " ".join(rng.choice(_VOCAB) for _ in range(rng.randint(2, 12)))
        for _ in authors
    ]
    return build_flat(final_authors, thread_id=thread_id, times=times, texts=texts)


def random_corpus(seed: int, n_threads: int, late_fraction: float = 0.0) -> list[FlatThread]:
    rng = random.Random(seed)
    corpus = []
    for i in range(n_threads):
        late = rng.random() < late_fraction
        corpus.append(
            random_flat_thread(rng, f"Discussion:Synth#{i}", min_c_rank=10 if late else None)
        )
    return corpus


@pytest.fixture(scope="session")
def mini_dump_path() -> Path:
    return MINI_DUMP


@pytest.fixture(scope="session")
def talk_pages():
    return list(stream_pages(MINI_DUMP, {1}))


@pytest.fixture(scope="session")
def parsed_threads(talk_pages):
    """(thread, verdict) pairs for every section of the fixture dump."""
    return list(parse_corpus(talk_pages))


@pytest.fixture(scope="session")
def kept_threads(parsed_threads):
    return [t for t, verdict in parsed_threads if verdict is None]


@pytest.fixture(scope="session")
def flat_corpus(kept_threads):
    return [flatten(t) for t in kept_threads]


@pytest.fixture(scope="session")
def example_thread(flat_corpus) -> FlatThread:
    return next(ft for ft in flat_corpus if "Tibet" in ft.thread_id)
