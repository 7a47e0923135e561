"""Rule-based extraction of typed entity spans from user utterances.

The entity inventory is closed-class (issue keys, hashes, gazetteer file
names, dates, fixed word lists), so deterministic rules beat a trained
tagger here. Matching is longest-match-first, left to right; exact overlaps
fall back to a fixed type precedence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Collection

from .dates import DateRange, NowClock, scan_date_expressions
from .errors import AmbiguousHashPrefix
from .store import Gazetteer


class EntityType(str, Enum):
    ISSUE_KEY = "ISSUE_KEY"
    COMMIT_HASH = "COMMIT_HASH"
    DATE_RANGE = "DATE_RANGE"
    FILE = "FILE"
    STATUS = "STATUS"
    PRIORITY = "PRIORITY"
    COMMIT_KIND = "COMMIT_KIND"
    K = "K"


# Overlap precedence; lower wins.
_PRECEDENCE = {t: i for i, t in enumerate(EntityType)}


@dataclass(frozen=True, slots=True)
class Entity:
    entity_type: EntityType
    surface: str
    span: tuple[int, int]
    value: object

    def to_dict(self) -> dict:
        value = self.value
        if isinstance(value, DateRange):
            value = value.to_dict()
        elif isinstance(value, tuple):
            value = list(value)
        return {
            "type": self.entity_type.value,
            "surface": self.surface,
            "span": list(self.span),
            "value": value,
        }


ISSUE_KEY_RE = re.compile(r"\b[A-Z][A-Z0-9]*-\d+\b")
HASH_RE = re.compile(r"\b[0-9a-f]{7,40}\b")
STATUS_RE = re.compile(r"\b(?:in\s+progress|reopened|resolved|closed|open)\b", re.IGNORECASE)
PRIORITY_RE = re.compile(r"\b(?:blocker|critical|major|minor|trivial)\b", re.IGNORECASE)
KIND_RE = re.compile(r"\b(?:bug[-\s]introducing|bug[-\s]fixing|buggy|fixing)\b", re.IGNORECASE)
TOP_K_RE = re.compile(r"\btop\s+(\d+)\b", re.IGNORECASE)
K_MOST_RE = re.compile(r"\b(\d+)\s+most\b", re.IGNORECASE)
# File-ish tokens: word chars plus path separators and dots, never ending on
# punctuation, so trailing periods and question marks stay out of the span.
FILE_TOKEN_RE = re.compile(r"[A-Za-z0-9_](?:[A-Za-z0-9_.\-/]*[A-Za-z0-9_])?")


class EntityRecognizer:
    def __init__(self, gazetteer: Gazetteer, commit_hashes: Collection[str] = ()):
        self.gazetteer = gazetteer
        self.commit_hashes = frozenset(commit_hashes)

    @classmethod
    def for_store(cls, kb) -> EntityRecognizer:
        return cls(kb.gazetteer, kb.commits.keys())

    def recognize(self, utterance: str, clock: NowClock | None = None) -> list[Entity]:
        """All typed entity spans in the utterance, non-overlapping."""
        if not utterance.strip():
            raise ValueError("utterance is empty")
        clock = clock or NowClock.system()
        candidates: list[Entity] = []
        candidates += self._issue_keys(utterance)
        candidates += self._commit_hashes(utterance)
        candidates += self._date_ranges(utterance, clock)
        candidates += self._files(utterance)
        candidates += self._word_list(utterance, STATUS_RE, EntityType.STATUS)
        candidates += self._word_list(utterance, PRIORITY_RE, EntityType.PRIORITY)
        candidates += self._commit_kinds(utterance)
        candidates += self._top_k(utterance)
        return _select_non_overlapping(candidates)

    def _issue_keys(self, text: str) -> list[Entity]:
        return [
            Entity(EntityType.ISSUE_KEY, m.group(0), m.span(), m.group(0))
            for m in ISSUE_KEY_RE.finditer(text)
        ]

    def _commit_hashes(self, text: str) -> list[Entity]:
        found = []
        for m in HASH_RE.finditer(text):
            token = m.group(0)
            matches = sorted(h for h in self.commit_hashes if h.startswith(token))
            if len(matches) > 1:
                raise AmbiguousHashPrefix(token, matches)
            if len(matches) == 1:
                value = matches[0]
            elif len(token) == 40:
                # A full-length hash is still a hash entity; the query layer
                # reports it as unknown.
                value = token
            else:
                continue
            found.append(Entity(EntityType.COMMIT_HASH, token, m.span(), value))
        return found

    def _date_ranges(self, text: str, clock: NowClock) -> list[Entity]:
        return [
            Entity(EntityType.DATE_RANGE, text[start:end], (start, end), resolved)
            for start, end, resolved in scan_date_expressions(text, clock)
        ]

    def _files(self, text: str) -> list[Entity]:
        found = []
        for m in FILE_TOKEN_RE.finditer(text):
            token = m.group(0)
            paths = self.gazetteer.lookup(token)
            if not paths:
                base = token.rsplit("/", 1)[-1]
                stem, _, ext = base.rpartition(".")
                if not (stem and ext.lower() in self.gazetteer.extensions):
                    continue
                # Looks like one of the repository's file kinds but is not in
                # the gazetteer; surfaces as UnknownFile at query time.
                paths = (token,)
            found.append(Entity(EntityType.FILE, token, m.span(), paths))
        return found

    def _word_list(self, text: str, pattern: re.Pattern, etype: EntityType) -> list[Entity]:
        return [
            Entity(etype, m.group(0), m.span(), " ".join(m.group(0).lower().split()))
            for m in pattern.finditer(text)
        ]

    def _commit_kinds(self, text: str) -> list[Entity]:
        found = []
        for m in KIND_RE.finditer(text):
            word = m.group(0).lower()
            kind = "FIXING" if "fix" in word else "BUGGY"
            found.append(Entity(EntityType.COMMIT_KIND, m.group(0), m.span(), kind))
        return found

    def _top_k(self, text: str) -> list[Entity]:
        found = []
        for pattern in (TOP_K_RE, K_MOST_RE):
            for m in pattern.finditer(text):
                found.append(Entity(EntityType.K, m.group(1), m.span(1), int(m.group(1))))
        return found


@dataclass(frozen=True)
class NerEvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    per_type: dict[str, tuple[int, int, int]]  # type -> (tp, fp, fn)

    @property
    def precision(self) -> float:
        denom = self.true_positives + self.false_positives
        return self.true_positives / denom if denom else 0.0

    @property
    def recall(self) -> float:
        denom = self.true_positives + self.false_negatives
        return self.true_positives / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


def evaluate_ner(dataset: dict) -> NerEvalReport:
    """Exact-span micro precision/recall/F1 of recognize() on a labeled set.

    The dataset carries its own matching context (gazetteer paths, commit
    hashes, and the `now` used for relative dates), so scores do not depend
    on any particular store.
    """
    from .dates import NowClock  # local import keeps module import cheap
    from .model import parse_utc
    from .store import Gazetteer

    gazetteer = Gazetteer(set(dataset.get("gazetteer", ())))
    recognizer = EntityRecognizer(gazetteer, dataset.get("commit_hashes", ()))
    clock = NowClock(parse_utc(dataset["now"])) if dataset.get("now") else NowClock.system()

    gold: set[tuple[int, str, int, int]] = set()
    predicted: set[tuple[int, str, int, int]] = set()
    for index, case in enumerate(dataset["cases"]):
        for g in case["entities"]:
            gold.add((index, g["type"], g["span"][0], g["span"][1]))
        for entity in recognizer.recognize(case["utterance"], clock):
            predicted.add((index, entity.entity_type.value, entity.span[0], entity.span[1]))

    per_type: dict[str, tuple[int, int, int]] = {}
    for name in sorted({t for _, t, _, _ in gold | predicted}):
        g = {item for item in gold if item[1] == name}
        p = {item for item in predicted if item[1] == name}
        per_type[name] = (len(g & p), len(p - g), len(g - p))
    return NerEvalReport(
        true_positives=len(gold & predicted),
        false_positives=len(predicted - gold),
        false_negatives=len(gold - predicted),
        per_type=per_type,
    )


def _select_non_overlapping(candidates: list[Entity]) -> list[Entity]:
    ordered = sorted(
        candidates,
        key=lambda e: (e.span[0], -(e.span[1] - e.span[0]), _PRECEDENCE[e.entity_type]),
    )
    chosen: list[Entity] = []
    occupied_until = -1
    for entity in ordered:
        if entity.span[0] > occupied_until:
            chosen.append(entity)
            occupied_until = entity.span[1] - 1
    return chosen
