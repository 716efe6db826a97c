"""Aggregate flattened threads into the corpus-level quantitative profile.

Central tendencies of inter-message durations use the median throughout;
pauses of months or years make the mean useless. The Mann-Whitney U test
compares third-arrival delays against ordinary consecutive delays, with an
exact permutation p-value for small samples and a tie-corrected normal
approximation above the switchover size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import timedelta
from itertools import combinations, groupby
from typing import Iterable, NamedTuple, Sequence

from .model import (
    DIALOGUE,
    FlatThread,
    MONOLOGUE_MULTI,
    MONOLOGUE_SINGLE,
    MULTILOGUE,
    c_features,
    classify_thread,
    inter_message_delays,
    thread_duration,
)
from .parsing import ANONYMOUS_IP, REGISTERED

EXACT_LIMIT = 20
CLASS_KINDS = (MONOLOGUE_SINGLE, MONOLOGUE_MULTI, DIALOGUE, MULTILOGUE)

_ZERO = timedelta(0)


def median(values: Sequence):
    """Middle value; mean of the two middle values for even-length samples."""
    if not values:
        raise ValueError("empty_sample")
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


class MannWhitneyResult(NamedTuple):
    U: float
    p_two_sided: float
    method: str


def _as_number(value) -> float:
    if isinstance(value, timedelta):
        return value.total_seconds()
    return float(value)


def _midranks(pooled: Sequence[float]) -> list[float]:
    order = sorted(range(len(pooled)), key=pooled.__getitem__)
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def mann_whitney_u(
    a: Sequence, b: Sequence, method: str = "auto"
) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test with midrank tie handling.

    method: "exact" enumerates every label assignment, "normal" uses the
    tie- and continuity-corrected approximation, "auto" picks exact for
    combined samples of at most 20 values.
    """
    xs = [_as_number(v) for v in a]
    ys = [_as_number(v) for v in b]
    if not xs or not ys:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(xs), len(ys)
    pooled = xs + ys
    ranks = _midranks(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2

    if method == "auto":
        method = "exact" if n1 + n2 <= EXACT_LIMIT else "normal"
    if method == "exact":
        p = _exact_p(ranks, n1, u1)
    elif method == "normal":
        p = _normal_p(ranks, n1, n2, u1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MannWhitneyResult(U=u1, p_two_sided=p, method=method)


def _exact_p(ranks: Sequence[float], n1: int, u1: float) -> float:
    n = len(ranks)
    n2 = n - n1
    base = n1 * (n1 + 1) / 2
    center = n1 * n2 / 2
    observed = abs(u1 - center)
    hits = 0
    total = 0
    for combo in combinations(range(n), n1):
        u = sum(ranks[i] for i in combo) - base
        total += 1
        if abs(u - center) >= observed - 1e-9:
            hits += 1
    return hits / total


def _normal_p(ranks: Sequence[float], n1: int, n2: int, u1: float) -> float:
    n = n1 + n2
    tie_term = 0.0
    for _, grp in groupby(sorted(ranks)):
        t = len(list(grp))
        tie_term += t**3 - t
    correction = 1.0 - tie_term / (n**3 - n) if n > 1 else 0.0
    variance = correction * n1 * n2 * (n + 1) / 12
    if variance <= 0:
        return 1.0
    z = (abs(u1 - n1 * n2 / 2) - 0.5) / math.sqrt(variance)
    z = max(z, 0.0)
    return min(1.0, math.erfc(z / math.sqrt(2)))


@dataclass(frozen=True)
class CorpusSummary:
    thread_count: int
    class_counts: dict[str, int]
    class_proportions: dict[str, float]
    max_participants: int
    message_count: int
    distinct_registered_authors: int
    distinct_ips: int
    pct_chronological_pairs: float | None


def summarize(corpus: Iterable[FlatThread]) -> CorpusSummary:
    """Thread-type counts and corpus totals."""
    counts = {kind: 0 for kind in CLASS_KINDS}
    max_participants = 0
    message_count = 0
    registered: set[str] = set()
    ips: set[str] = set()
    ordered_pairs = 0
    eligible_pairs = 0
    total = 0
    for ft in corpus:
        total += 1
        kind, n = classify_thread(ft)
        counts[kind] += 1
        max_participants = max(max_participants, n)
        message_count += len(ft.messages)
        for m in ft.messages:
            if m.author_kind == REGISTERED:
                registered.add(m.author_id)
            elif m.author_kind == ANONYMOUS_IP:
                ips.add(m.author_id)
        for first, second in zip(ft.messages, ft.messages[1:]):
            if first.timestamp is None or second.timestamp is None:
                continue
            eligible_pairs += 1
            if second.timestamp >= first.timestamp:
                ordered_pairs += 1
    proportions = {
        kind: (counts[kind] / total if total else 0.0) for kind in CLASS_KINDS
    }
    return CorpusSummary(
        thread_count=total,
        class_counts=counts,
        class_proportions=proportions,
        max_participants=max_participants,
        message_count=message_count,
        distinct_registered_authors=len(registered),
        distinct_ips=len(ips),
        pct_chronological_pairs=(
            100.0 * ordered_pairs / eligible_pairs if eligible_pairs else None
        ),
    )


@dataclass(frozen=True)
class ArrivalProfile:
    """Third-participant arrival statistics; percentages on a 0-100 scale."""

    pct_third_among_3plus_msgs: float | None
    pct_c_at_rank3: float | None
    max_c_rank: int | None
    median_delay_from_first: timedelta | None
    median_delay_from_previous: timedelta | None
    median_all_consecutive: timedelta | None
    median_rank3plus_consecutive: timedelta | None
    pct_c_first_is_last: float | None
    pct_dialogue_ends_after_3: float | None


def _median_or_none(values: list[timedelta]) -> timedelta | None:
    eligible = [v for v in values if v >= _ZERO]
    return median(eligible) if eligible else None


def arrival_profile(corpus: Iterable[FlatThread]) -> ArrivalProfile:
    """All arrival statistics in one corpus pass.

    Negative delays (chronology violations) are excluded from every median.
    """
    threads_3plus_msgs = 0
    multilogues_among_3plus = 0
    multilogues = 0
    c_at_rank3 = 0
    c_is_last = 0
    max_c_rank: int | None = None
    from_first: list[timedelta] = []
    from_previous: list[timedelta] = []
    all_consecutive: list[timedelta] = []
    rank3plus: list[timedelta] = []
    dialogues_3plus = 0
    dialogues_exactly_3 = 0

    for ft in corpus:
        kind, _ = classify_thread(ft)
        n_msgs = len(ft.messages)
        if n_msgs >= 3:
            threads_3plus_msgs += 1
            if kind == MULTILOGUE:
                multilogues_among_3plus += 1
        for (_, later_rank), delay in inter_message_delays(ft):
            all_consecutive.append(delay)
            if later_rank >= 3:
                rank3plus.append(delay)
        if kind == DIALOGUE and n_msgs >= 3:
            dialogues_3plus += 1
            if n_msgs == 3:
                dialogues_exactly_3 += 1
        if kind != MULTILOGUE:
            continue
        multilogues += 1
        feats = c_features(ft)
        max_c_rank = feats.c_rank if max_c_rank is None else max(max_c_rank, feats.c_rank)
        if feats.c_rank == 3:
            c_at_rank3 += 1
        if feats.c_first_message_is_last:
            c_is_last += 1
        if feats.delay_from_first is not None:
            from_first.append(feats.delay_from_first)
        if feats.delay_from_previous is not None:
            from_previous.append(feats.delay_from_previous)

    def pct(num: int, denom: int) -> float | None:
        return 100.0 * num / denom if denom else None

    return ArrivalProfile(
        pct_third_among_3plus_msgs=pct(multilogues_among_3plus, threads_3plus_msgs),
        pct_c_at_rank3=pct(c_at_rank3, multilogues),
        max_c_rank=max_c_rank,
        median_delay_from_first=_median_or_none(from_first),
        median_delay_from_previous=_median_or_none(from_previous),
        median_all_consecutive=_median_or_none(all_consecutive),
        median_rank3plus_consecutive=_median_or_none(rank3plus),
        pct_c_first_is_last=pct(c_is_last, multilogues),
        pct_dialogue_ends_after_3=pct(dialogues_exactly_3, dialogues_3plus),
    )


def c_delay_significance(corpus: Sequence[FlatThread]) -> MannWhitneyResult | None:
    """U test of C's arrival delays against rank>=3 consecutive delays."""
    c_delays: list[timedelta] = []
    consecutive: list[timedelta] = []
    for ft in corpus:
        if classify_thread(ft).kind == MULTILOGUE:
            feats = c_features(ft)
            if feats.delay_from_previous is not None and feats.delay_from_previous >= _ZERO:
                c_delays.append(feats.delay_from_previous)
        for (_, later_rank), delay in inter_message_delays(ft):
            if later_rank >= 3 and delay >= _ZERO:
                consecutive.append(delay)
    if not c_delays or not consecutive:
        return None
    return mann_whitney_u(c_delays, consecutive)


@dataclass(frozen=True)
class OverviewNode:
    label: str
    thread_count: int
    mean_message_count: float | None
    median_duration: timedelta | None
    children: tuple["OverviewNode", ...] = ()

    def leaves(self) -> list["OverviewNode"]:
        if not self.children:
            return [self]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out


def _node(label: str, threads: list[FlatThread], children=()) -> OverviewNode:
    durations = [d for d in (thread_duration(ft) for ft in threads) if d is not None]
    return OverviewNode(
        label=label,
        thread_count=len(threads),
        mean_message_count=(
            sum(len(ft.messages) for ft in threads) / len(threads) if threads else None
        ),
        median_duration=median(durations) if durations else None,
        children=tuple(children),
    )


def _c_rank_bucket(rank: int) -> str:
    if rank == 3:
        return "c_at_rank_3"
    if rank < 10:
        return "c_at_rank_4_to_9"
    return "c_at_rank_10_plus"


def overview_report(corpus: Iterable[FlatThread]) -> OverviewNode:
    """Thread-type tree by protagonist pattern, arrival rank and termination.

    Leaf thread counts always partition the corpus.
    """
    threads = list(corpus)
    if not threads:
        return _node("all_threads", [])
    by_kind: dict[str, list[FlatThread]] = {kind: [] for kind in CLASS_KINDS}
    for ft in threads:
        by_kind[classify_thread(ft).kind].append(ft)

    a_only = _node(
        "a_only",
        by_kind[MONOLOGUE_SINGLE] + by_kind[MONOLOGUE_MULTI],
        children=[
            _node("single_message", by_kind[MONOLOGUE_SINGLE]),
            _node("several_messages", by_kind[MONOLOGUE_MULTI]),
        ],
    )
    dialogue = _node("ab_dialogue", by_kind[DIALOGUE])

    buckets: dict[str, dict[str, list[FlatThread]]] = {
        "c_at_rank_3": {"terminal": [], "continuing": []},
        "c_at_rank_4_to_9": {"terminal": [], "continuing": []},
        "c_at_rank_10_plus": {"terminal": [], "continuing": []},
    }
    for ft in by_kind[MULTILOGUE]:
        feats = c_features(ft)
        fate = "terminal" if feats.c_first_message_is_last else "continuing"
        buckets[_c_rank_bucket(feats.c_rank)][fate].append(ft)
    multi_children = []
    for bucket, fates in buckets.items():
        multi_children.append(
            _node(
                bucket,
                fates["terminal"] + fates["continuing"],
                children=[
                    _node("c_message_ends_thread", fates["terminal"]),
                    _node("thread_continues", fates["continuing"]),
                ],
            )
        )
    multilogue = _node("multilogue", by_kind[MULTILOGUE], children=multi_children)
    return _node("all_threads", threads, children=[a_only, dialogue, multilogue])


def render_overview(node: OverviewNode, indent: str = "") -> str:
    """Plain-text rendering of the overview tree."""
    dur = _format_duration(node.median_duration)
    mean = f"{node.mean_message_count:.1f}" if node.mean_message_count is not None else "-"
    lines = [
        f"{indent}{node.label}: {node.thread_count} threads, "
        f"mean {mean} messages, median duration {dur}"
    ]
    for child in node.children:
        lines.append(render_overview(child, indent + "  "))
    return "\n".join(lines)


def _format_duration(d: timedelta | None) -> str:
    if d is None:
        return "-"
    seconds = d.total_seconds()
    if seconds >= 86400:
        return f"{seconds / 86400:.2f}d"
    if seconds >= 3600:
        return f"{seconds / 3600:.2f}h"
    return f"{seconds / 60:.1f}min"
