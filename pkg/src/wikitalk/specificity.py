"""Word-form frequencies and contrastive lexical specificity.

The specificity index of a form is derived from the hypergeometric
probability of drawing its sub-corpus frequency: -log10 of the upper-tail
probability when the form is over-represented, log10 of the lower-tail
probability when under-represented, saturated to +/-1000. Computation runs
in log space (log-gamma) so corpus-scale token totals stay stable.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

SATURATION = 1000.0
DEFAULT_BANALITY_THRESHOLD = 2.0

# Elided prefixes kept as standalone forms ("c'", "Qu'", ...). Whole words
# containing an apostrophe elsewhere ("aujourd'hui", "Quelqu'un") stay intact.
ELISION_PREFIXES = frozenset(
    "c d j l m n s t qu jusqu lorsqu puisqu quoiqu".split()
)

# Post-verbal clitics split off with their hyphen ("-il", "-vous", "-t-on").
CLITIC_SUFFIXES = frozenset(
    "il ils elle elles on je tu nous vous ce y en moi toi le la les lui leur ci là même mêmes".split()
)
T_CLITIC_SUFFIXES = frozenset("t-il t-ils t-elle t-elles t-on".split())

_WORDCHARS = "0-9A-Za-zÀ-ÖØ-öø-ÿŒœÆæ"
_TOKEN_RE = re.compile(
    rf"[{_WORDCHARS}]+(?:['’\-][{_WORDCHARS}]+)*['’]?|[^\s{_WORDCHARS}]+"
)


def tokenize(text: str) -> list[str]:
    """Split text into case-preserving word-forms.

    Elisions and hyphenated clitics become separate forms; any other run of
    non-space symbols is kept as a form of its own.
    """
    tokens: list[str] = []
    for chunk in _TOKEN_RE.findall(text):
        if chunk and (chunk[0].isalnum() or chunk[0] in "'’"):
            tokens.extend(_split_compound(chunk))
        else:
            tokens.append(chunk)
    return tokens


def _split_compound(tok: str) -> list[str]:
    parts: list[str] = []
    seg_start = 0
    for i, ch in enumerate(tok):
        if ch in "'’" and i + 1 < len(tok):
            if tok[seg_start:i].lower() in ELISION_PREFIXES:
                parts.append(tok[seg_start : i + 1])
                seg_start = i + 1
    rest = tok[seg_start:]
    clitics: list[str] = []
    while "-" in rest[1:]:
        head, _, tail = rest.rpartition("-")
        if tail.lower() in CLITIC_SUFFIXES:
            two_back = head.rpartition("-")
            if two_back[2].lower() == "t" and f"t-{tail.lower()}" in T_CLITIC_SUFFIXES:
                clitics.append("-t-" + tail)
                rest = two_back[0]
                if not rest:
                    break
                continue
            clitics.append("-" + tail)
            rest = head
        else:
            break
    if rest:
        parts.append(rest)
    parts.extend(reversed(clitics))
    return parts


def is_word(token: str) -> bool:
    """Word-form counting rule: a token with at least one letter or digit."""
    return any(ch.isalnum() for ch in token)


def count_words(text: str) -> int:
    return sum(1 for tok in tokenize(text) if is_word(tok))


@dataclass(frozen=True)
class FrequencyTable:
    """Per-form counts of one sub-corpus (f, t) against its reference (F, T)."""

    f: Mapping[str, int]
    t: int
    F: Mapping[str, int]
    T: int

    def validate(self) -> None:
        if sum(self.f.values()) != self.t or sum(self.F.values()) != self.T:
            raise ValueError("form counts do not sum to the stated totals")
        for form, n in self.f.items():
            big = self.F.get(form, 0)
            if not (0 <= n <= big <= self.T and n <= self.t):
                raise ValueError(f"inconsistent counts for form {form!r}")

    @classmethod
    def from_tokens(cls, sub: Sequence[str], reference: Sequence[str]) -> "FrequencyTable":
        return cls(f=Counter(sub), t=len(sub), F=Counter(reference), T=len(reference))


@dataclass(frozen=True)
class SpecificityScore:
    form: str
    index: float
    direction: str  # positive | negative | banal
    f: int
    F: int


def _log_choose(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log10_upper_tail(f: int, F: int, t: int, T: int) -> float:
    """log10 P(X >= f) for X ~ Hypergeometric(T, F, t)."""
    k_max = min(F, t)
    log_p = _log_choose(F, f) + _log_choose(T - F, t - f) - _log_choose(T, t)
    total = 1.0
    ratio = 1.0
    for k in range(f, k_max):
        ratio *= (F - k) * (t - k) / ((k + 1) * (T - F - t + k + 1))
        total += ratio
        if ratio < 1e-16 * total:
            break
    return (log_p + math.log(total)) / math.log(10)


def _log10_lower_tail(f: int, F: int, t: int, T: int) -> float:
    """log10 P(X <= f)."""
    k_min = max(0, t - (T - F))
    log_p = _log_choose(F, f) + _log_choose(T - F, t - f) - _log_choose(T, t)
    total = 1.0
    ratio = 1.0
    for k in range(f, k_min, -1):
        ratio *= k * (T - F - t + k) / ((F - k + 1) * (t - k + 1))
        total += ratio
        if ratio < 1e-16 * total:
            break
    return (log_p + math.log(total)) / math.log(10)


def specificity(f: int, F: int, t: int, T: int) -> float:
    """Signed specificity index of a form with sub-corpus count f out of t,
    reference count F out of T. Positive = over-represented."""
    if not (0 <= f <= F <= T and f <= t <= T and t - f <= T - F):
        raise ValueError(f"invalid frequency quadruple f={f} F={F} t={t} T={T}")
    if t == 0 or F == 0:
        return 0.0
    mode = ((F + 1) * (t + 1)) // (T + 2)
    if f >= mode:
        index = -_log10_upper_tail(f, F, t, T)
    else:
        index = _log10_lower_tail(f, F, t, T)
    if index > SATURATION:
        return SATURATION
    if index < -SATURATION:
        return -SATURATION
    # tail sums may land at -0.0; normalise
    return index + 0.0


def score_table(
    table: FrequencyTable, banality: float = DEFAULT_BANALITY_THRESHOLD
) -> list[SpecificityScore]:
    """Score every form of the reference vocabulary against the sub-corpus."""
    scores = []
    for form, big in table.F.items():
        small = table.f.get(form, 0)
        index = specificity(small, big, table.t, table.T)
        if abs(index) < banality:
            direction = "banal"
        elif index > 0:
            direction = "positive"
        else:
            direction = "negative"
        scores.append(SpecificityScore(form, index, direction, small, big))
    return scores


def build_partition(threads: Iterable) -> dict[str, list[str]]:
    """Token lists of the first messages of participants A, B and C.

    Every thread must be a multilogue (letters A, B and C all assigned).
    """
    partition: dict[str, list[str]] = {"firstA": [], "firstB": [], "firstC": []}
    for ft in threads:
        by_letter = {p.letter: p for p in ft.participants}
        if not {"A", "B", "C"} <= set(by_letter):
            raise ValueError(f"thread {ft.thread_id!r} is not a multilogue")
        for letter, key in (("A", "firstA"), ("B", "firstB"), ("C", "firstC")):
            first = ft.messages[by_letter[letter].arrival_rank - 1]
            partition[key].extend(tokenize(first.text))
    return partition


def partition_tables(partition: Mapping[str, Sequence[str]]) -> dict[str, FrequencyTable]:
    reference: Counter = Counter()
    total = 0
    for tokens in partition.values():
        reference.update(tokens)
        total += len(tokens)
    return {
        name: FrequencyTable(f=Counter(tokens), t=len(tokens), F=reference, T=total)
        for name, tokens in partition.items()
    }


@dataclass(frozen=True)
class RankedSpecificities:
    positive: tuple[SpecificityScore, ...]
    negative: tuple[SpecificityScore, ...]


def rank_specificities(
    partition: Mapping[str, Sequence[str]],
    top: int = 10,
    banality: float = DEFAULT_BANALITY_THRESHOLD,
) -> dict[str, RankedSpecificities]:
    """Top over- and under-represented forms of each sub-corpus."""
    ranked = {}
    for name, table in partition_tables(partition).items():
        scores = score_table(table, banality=banality)
        positive = [s for s in scores if s.direction == "positive"]
        negative = [s for s in scores if s.direction == "negative"]
        positive.sort(key=lambda s: (-s.index, s.form))
        negative.sort(key=lambda s: (s.index, s.form))
        ranked[name] = RankedSpecificities(
            positive=tuple(positive[:top]), negative=tuple(negative[:top])
        )
    return ranked
