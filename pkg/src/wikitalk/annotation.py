"""Annotation methodology support: samples, label grid, storage and reports.

Three dimensions describe how a third participant enters a two-party
exchange: who the message addresses, how it aligns with the earlier
positions, and its main objective (10 categories). Threads are drawn into
two seeded samples: random multilogues, and multilogues where the third
voice only appears at rank 10 or later.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from threading import Lock
from typing import Iterable, Mapping

from .model import FlatThread, third_arrival_rank

ADJUDICATOR_ID = "adjudicated"

SAMPLE1 = "sample1"  # random multilogues
SAMPLE2 = "sample2"  # multilogues with third arrival at rank >= 10
SAMPLE2_MIN_RANK = 10


class Addressee(str, Enum):
    GENERAL = "general"
    TARGETED = "targeted"


class Alignment(str, Enum):
    HARMONY = "harmony"
    SIDE_WITH_A = "side_with_A"
    SIDE_WITH_B = "side_with_B"
    OPPOSITION = "opposition"
    NEUTRALITY = "neutrality"


class Objective(str, Enum):
    VOTE = "vote"
    ACTIVITY_REPORT = "activity_report"
    COMPLEMENT = "complement"
    SUPPORT = "support"
    SUPPORT_AND_COMPLEMENT = "support_and_complement"
    OPPOSITION = "opposition"
    QUESTION = "question"
    ANSWER = "answer"
    PACIFICATION = "pacification"
    OPENING = "opening"


SIDES = (Alignment.SIDE_WITH_A, Alignment.SIDE_WITH_B)

DIMENSIONS = ("addressee", "alignment", "objective")


class NotInSampleError(KeyError):
    pass


class InsufficientPoolError(ValueError):
    def __init__(self, pool_size: int, requested: int):
        super().__init__(f"pool holds {pool_size} threads, {requested} requested")
        self.pool_size = pool_size


class EmptyReportError(ValueError):
    pass


class NoOverlapError(ValueError):
    pass


@dataclass(frozen=True)
class Annotation:
    thread_id: str
    annotator_id: str
    addressee: Addressee
    alignment: Alignment
    objective: Objective
    created_at: datetime
    note: str | None = None

    def to_record(self) -> dict:
        return {
            "thread_id": self.thread_id,
            "annotator_id": self.annotator_id,
            "addressee": self.addressee.value,
            "alignment": self.alignment.value,
            "objective": self.objective.value,
            "created_at": self.created_at.isoformat(),
            "note": self.note,
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "Annotation":
        return cls(
            thread_id=rec["thread_id"],
            annotator_id=rec["annotator_id"],
            addressee=Addressee(rec["addressee"]),
            alignment=Alignment(rec["alignment"]),
            objective=Objective(rec["objective"]),
            created_at=datetime.fromisoformat(rec["created_at"]),
            note=rec.get("note"),
        )


@dataclass(frozen=True)
class Sample:
    name: str
    rule: str
    seed: int
    size: int
    thread_ids: tuple[str, ...]

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "rule": self.rule,
            "seed": self.seed,
            "size": self.size,
            "thread_ids": list(self.thread_ids),
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "Sample":
        return cls(
            name=rec["name"],
            rule=rec["rule"],
            seed=rec["seed"],
            size=rec["size"],
            thread_ids=tuple(rec["thread_ids"]),
        )


def eligible_pool(corpus: Iterable[FlatThread], rule: str) -> list[str]:
    """Sorted thread ids satisfying a sample rule."""
    if rule == SAMPLE1:
        ids = [ft.thread_id for ft in corpus if len(ft.participants) >= 3]
    elif rule == SAMPLE2:
        ids = [
            ft.thread_id
            for ft in corpus
            if (rank := third_arrival_rank(ft)) is not None and rank >= SAMPLE2_MIN_RANK
        ]
    else:
        raise ValueError(f"unknown sample rule {rule!r}")
    return sorted(ids)


def _randbelow(rng: random.Random, n: int) -> int:
    """Uniform integer in [0, n) from the generator's bit stream.

    Rejection sampling over getrandbits keeps draws identical on every
    platform for a given seed.
    """
    if n <= 1:
        return 0
    bits = (n - 1).bit_length()
    while True:
        r = rng.getrandbits(bits)
        if r < n:
            return r


def draw_sample(
    corpus: Iterable[FlatThread], rule: str, size: int, seed: int, name: str | None = None
) -> Sample:
    """Seeded uniform draw without replacement from the rule's eligible pool.

    The pool is sorted by thread id and shuffled with a partial Fisher-Yates
    pass, so identical (corpus, rule, size, seed) always give the same sample.
    """
    pool = eligible_pool(corpus, rule)
    if len(pool) < size:
        raise InsufficientPoolError(len(pool), size)
    rng = random.Random(seed)
    picked: list[str] = []
    arr = list(pool)
    for i in range(size):
        j = i + _randbelow(rng, len(arr) - i)
        arr[i], arr[j] = arr[j], arr[i]
        picked.append(arr[i])
    return Sample(
        name=name or f"{rule}-seed{seed}",
        rule=rule,
        seed=seed,
        size=size,
        thread_ids=tuple(picked),
    )


def validate_sample(sample: Sample, corpus: Mapping[str, FlatThread]) -> None:
    """Re-check rule soundness, e.g. when loading a stored sample."""
    for tid in sample.thread_ids:
        ft = corpus.get(tid)
        if ft is None:
            raise NotInSampleError(f"thread {tid!r} missing from corpus")
        if sample.rule == SAMPLE1 and len(ft.participants) < 3:
            raise ValueError(f"thread {tid!r} violates {SAMPLE1}: not a multilogue")
        if sample.rule == SAMPLE2:
            rank = third_arrival_rank(ft)
            if rank is None or rank < SAMPLE2_MIN_RANK:
                raise ValueError(
                    f"thread {tid!r} violates {SAMPLE2}: third arrival rank {rank}"
                )


class AnnotationStore:
    """Durable annotation log: append-only JSONL with last-write-wins keys.

    Every record is flushed and fsynced before the call returns; compact()
    rewrites the log as a snapshot of the current state.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._samples: dict[str, Sample] = {}
        self._annotations: dict[tuple[str, str], Annotation] = {}
        self._lock = Lock()
        self._fh = None
        if self.path.exists():
            self._load()
        self._fh = open(self.path, "a", encoding="utf-8")

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec.get("kind") == "sample":
                    sample = Sample.from_record(rec)
                    self._samples[sample.name] = sample
                elif rec.get("kind") == "annotation":
                    ann = Annotation.from_record(rec)
                    self._annotations[(ann.thread_id, ann.annotator_id)] = ann

    def _append(self, rec: dict) -> None:
        line = json.dumps(rec, ensure_ascii=False, sort_keys=True)
        self._fh.write(line + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def add_sample(self, sample: Sample, corpus: Mapping[str, FlatThread] | None = None) -> None:
        if corpus is not None:
            validate_sample(sample, corpus)
        with self._lock:
            self._samples[sample.name] = sample
            self._append({"kind": "sample", **sample.to_record()})

    def sample(self, name: str) -> Sample:
        try:
            return self._samples[name]
        except KeyError:
            raise NotInSampleError(f"unknown sample {name!r}") from None

    def samples(self) -> list[Sample]:
        return sorted(self._samples.values(), key=lambda s: s.name)

    def sample_of_thread(self, thread_id: str) -> Sample | None:
        for sample in self._samples.values():
            if thread_id in sample.thread_ids:
                return sample
        return None

    def record(self, annotation: Annotation) -> tuple[Annotation, list[str]]:
        """Upsert keyed by (thread_id, annotator_id); returns warnings."""
        sample = self.sample_of_thread(annotation.thread_id)
        if sample is None:
            raise NotInSampleError(
                f"thread {annotation.thread_id!r} is not part of any sample"
            )
        warnings = []
        if sample.rule == SAMPLE2 and annotation.objective is Objective.VOTE:
            warnings.append(
                f"objective 'vote' on a {SAMPLE2} thread: late arrivals cannot vote"
            )
        with self._lock:
            self._annotations[(annotation.thread_id, annotation.annotator_id)] = annotation
            self._append({"kind": "annotation", **annotation.to_record()})
        return annotation, warnings

    def get(self, thread_id: str, annotator_id: str) -> Annotation | None:
        return self._annotations.get((thread_id, annotator_id))

    def annotations(
        self, sample: str | None = None, annotator: str | None = None
    ) -> list[Annotation]:
        selected = self._annotations.values()
        if sample is not None:
            ids = set(self.sample(sample).thread_ids)
            selected = [a for a in selected if a.thread_id in ids]
        if annotator is not None:
            selected = [a for a in selected if a.annotator_id == annotator]
        return sorted(selected, key=lambda a: (a.thread_id, a.annotator_id))

    def compact(self) -> None:
        """Rewrite the log as one snapshot of the live records."""
        with self._lock:
            self._fh.close()
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for sample in self.samples():
                    fh.write(
                        json.dumps({"kind": "sample", **sample.to_record()},
                                   ensure_ascii=False, sort_keys=True) + "\n"
                    )
                for ann in sorted(
                    self._annotations.values(), key=lambda a: (a.thread_id, a.annotator_id)
                ):
                    fh.write(
                        json.dumps({"kind": "annotation", **ann.to_record()},
                                   ensure_ascii=False, sort_keys=True) + "\n"
                    )
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
            self._fh = open(self.path, "a", encoding="utf-8")

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def resolve_label(annotations: list[Annotation], dimension: str):
    """Reference label of one thread: adjudicated, else strict majority, else None."""
    for ann in annotations:
        if ann.annotator_id == ADJUDICATOR_ID:
            return getattr(ann, dimension)
    votes: dict = {}
    voters = 0
    for ann in annotations:
        voters += 1
        value = getattr(ann, dimension)
        votes[value] = votes.get(value, 0) + 1
    if not votes:
        return None
    value, count = max(votes.items(), key=lambda kv: kv[1])
    if count * 2 > voters:
        return value
    return None


def _resolved_labels(store: AnnotationStore, sample_name: str, dimension: str) -> dict[str, object]:
    sample = store.sample(sample_name)
    by_thread: dict[str, list[Annotation]] = {}
    for ann in store.annotations(sample=sample_name):
        by_thread.setdefault(ann.thread_id, []).append(ann)
    resolved = {}
    for tid in sample.thread_ids:
        anns = by_thread.get(tid)
        if not anns:
            continue
        label = resolve_label(anns, dimension)
        if label is not None:
            resolved[tid] = label
    return resolved


@dataclass(frozen=True)
class AlignmentReport:
    n: int
    proportions: dict[str, float]
    prise_de_parti: float
    side_with_b_share: float | None


def alignment_distribution(store: AnnotationStore, sample_name: str) -> AlignmentReport:
    """Alignment proportions, with the two side-taking labels also merged."""
    labels = _resolved_labels(store, sample_name, "alignment")
    if not labels:
        raise EmptyReportError(f"no usable annotations for sample {sample_name!r}")
    n = len(labels)
    proportions = {value.value: 0.0 for value in Alignment}
    for label in labels.values():
        proportions[label.value] += 1 / n
    sides = [v for v in labels.values() if v in SIDES]
    share = None
    if sides:
        share = sum(1 for v in sides if v is Alignment.SIDE_WITH_B) / len(sides)
    return AlignmentReport(
        n=n,
        proportions=proportions,
        prise_de_parti=proportions[Alignment.SIDE_WITH_A.value]
        + proportions[Alignment.SIDE_WITH_B.value],
        side_with_b_share=share,
    )


@dataclass(frozen=True)
class ObjectiveReport:
    n: int
    proportions: dict[str, float]


def objective_distribution(store: AnnotationStore, sample_name: str) -> ObjectiveReport:
    labels = _resolved_labels(store, sample_name, "objective")
    if not labels:
        raise EmptyReportError(f"no usable annotations for sample {sample_name!r}")
    n = len(labels)
    proportions = {value.value: 0.0 for value in Objective}
    for label in labels.values():
        proportions[label.value] += 1 / n
    return ObjectiveReport(n=n, proportions=proportions)


def targeted_rate(store: AnnotationStore, sample_name: str) -> float:
    """Share of threads whose third message reacts to one specific message."""
    labels = _resolved_labels(store, sample_name, "addressee")
    if not labels:
        raise EmptyReportError(f"no usable annotations for sample {sample_name!r}")
    return sum(1 for v in labels.values() if v is Addressee.TARGETED) / len(labels)


@dataclass(frozen=True)
class PairAgreement:
    annotators: tuple[str, str]
    n_shared: int
    raw: dict[str, float]
    kappa: dict[str, float]


@dataclass(frozen=True)
class AgreementReport:
    pairs: tuple[PairAgreement, ...]
    raw: dict[str, float]  # per dimension, averaged over pairs
    kappa: dict[str, float]


def _cohen_kappa(pairs: list[tuple[object, object]]) -> float:
    n = len(pairs)
    observed = sum(1 for a, b in pairs if a == b) / n
    marg_a: dict = {}
    marg_b: dict = {}
    for a, b in pairs:
        marg_a[a] = marg_a.get(a, 0) + 1
        marg_b[b] = marg_b.get(b, 0) + 1
    expected = sum(
        marg_a[v] * marg_b.get(v, 0) for v in marg_a
    ) / (n * n)
    if expected >= 1.0:
        return 1.0 if observed >= 1.0 else 0.0
    return (observed - expected) / (1 - expected)


def agreement(store: AnnotationStore, sample_name: str) -> AgreementReport:
    """Pairwise raw agreement and Cohen's kappa per dimension."""
    sample = store.sample(sample_name)
    by_annotator: dict[str, dict[str, Annotation]] = {}
    for ann in store.annotations(sample=sample_name):
        if ann.annotator_id == ADJUDICATOR_ID:
            continue
        by_annotator.setdefault(ann.annotator_id, {})[ann.thread_id] = ann
    names = sorted(by_annotator)
    pair_reports = []
    for i, first in enumerate(names):
        for second in names[i + 1 :]:
            shared = sorted(set(by_annotator[first]) & set(by_annotator[second]))
            if not shared:
                continue
            raw = {}
            kappa = {}
            for dim in DIMENSIONS:
                labelled = [
                    (getattr(by_annotator[first][tid], dim), getattr(by_annotator[second][tid], dim))
                    for tid in shared
                ]
                raw[dim] = sum(1 for a, b in labelled if a == b) / len(labelled)
                kappa[dim] = _cohen_kappa(labelled)
            pair_reports.append(
                PairAgreement(
                    annotators=(first, second), n_shared=len(shared), raw=raw, kappa=kappa
                )
            )
    if not pair_reports:
        raise NoOverlapError(f"no annotator pair overlaps on sample {sample_name!r}")
    mean_raw = {
        dim: sum(p.raw[dim] for p in pair_reports) / len(pair_reports) for dim in DIMENSIONS
    }
    mean_kappa = {
        dim: sum(p.kappa[dim] for p in pair_reports) / len(pair_reports)
        for dim in DIMENSIONS
    }
    return AgreementReport(pairs=tuple(pair_reports), raw=mean_raw, kappa=mean_kappa)


def new_annotation(
    thread_id: str,
    annotator_id: str,
    addressee: str | Addressee,
    alignment: str | Alignment,
    objective: str | Objective,
    note: str | None = None,
    created_at: datetime | None = None,
) -> Annotation:
    """Build a validated Annotation from raw label strings."""
    return Annotation(
        thread_id=thread_id,
        annotator_id=annotator_id,
        addressee=Addressee(addressee),
        alignment=Alignment(alignment),
        objective=Objective(objective),
        created_at=created_at or datetime.now(timezone.utc),
        note=note,
    )
