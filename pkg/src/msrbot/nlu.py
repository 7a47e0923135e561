"""Intent classification over bag-of-words sentence vectors.

A sentence vector is the element-wise sum of the word vectors of the
utterance's in-vocabulary tokens. Classification scores the utterance
against every training template by cosine similarity and keeps the best
intent, falling back below a confidence threshold.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import yaml

from .errors import MalformedRecord, ZeroVector
from .ner import Entity, EntityType

DEFAULT_THRESHOLD = 0.70

# Placeholder tokens substituted for entity spans before embedding, so
# "who modified Foo.java" and "who modified Bar.java" embed identically.
TYPE_TOKENS: Mapping[EntityType, str] = {
    EntityType.ISSUE_KEY: "issuekey",
    EntityType.COMMIT_HASH: "commithash",
    EntityType.DATE_RANGE: "daterange",
    EntityType.FILE: "filename",
    EntityType.STATUS: "statusvalue",
    EntityType.PRIORITY: "priorityvalue",
    EntityType.COMMIT_KIND: "commitkind",
    EntityType.K: "topk",
}

_NON_TOKEN_RE = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class WordVectorTable:
    dimension: int
    vectors: Mapping[str, np.ndarray]

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word.lower())


@dataclass(frozen=True, eq=False)
class SentenceVector:
    components: np.ndarray
    contributing_tokens: int

    @property
    def is_zero(self) -> bool:
        return self.contributing_tokens == 0 or not np.any(self.components)


@dataclass(frozen=True, eq=False)
class TrainingUtterance:
    intent_id: str
    text: str
    vector: SentenceVector


@dataclass(frozen=True, eq=False)
class IntentPrediction:
    intent_id: str
    score: float
    best_match: TrainingUtterance


@dataclass(frozen=True)
class Fallback:
    """Below-threshold outcome; a value, not an error."""

    score: float = 0.0


def load_vectors(path: str | Path) -> WordVectorTable:
    """Parse a plain-text vector file: header "V D", then V "word x1..xD" lines."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise MalformedRecord(1, "vector file header must be 'V D'")
        try:
            count, dimension = int(header[0]), int(header[1])
        except ValueError:
            raise MalformedRecord(1, "vector file header must be two integers") from None
        if dimension < 1:
            raise MalformedRecord(1, "vector dimension must be positive")
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dimension + 1:
                raise MalformedRecord(lineno, f"expected {dimension + 1} fields, got {len(parts)}")
            word = parts[0].lower()
            try:
                values = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise MalformedRecord(lineno, "non-numeric vector component") from None
            vectors[word] = values
    if len(vectors) != count:
        raise MalformedRecord(1, f"header declares {count} words, file has {len(vectors)}")
    return WordVectorTable(dimension=dimension, vectors=vectors)


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation to spaces, split on whitespace."""
    return [t for t in _NON_TOKEN_RE.split(text.lower()) if t]


def substitute_entities(utterance: str, entities: Sequence[Entity]) -> str:
    """Replace each recognized entity span with its type token."""
    out = utterance
    for entity in sorted(entities, key=lambda e: e.span[0], reverse=True):
        start, end = entity.span
        out = out[:start] + TYPE_TOKENS[entity.entity_type] + out[end:]
    return out


def embed(tokens: Iterable[str], table: WordVectorTable) -> SentenceVector:
    """Element-wise sum of in-vocabulary token vectors; OOV tokens are skipped."""
    total = np.zeros(table.dimension, dtype=np.float64)
    contributors = 0
    for token in tokens:
        vector = table.get(token)
        if vector is None:
            continue
        total = total + vector
        contributors += 1
    return SentenceVector(components=total, contributing_tokens=contributors)


def cosine(a: SentenceVector, b: SentenceVector) -> float:
    na = float(np.linalg.norm(a.components))
    nb = float(np.linalg.norm(b.components))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector()
    return float(np.dot(a.components, b.components)) / (na * nb)


def load_training(path: str | Path, table: WordVectorTable) -> tuple[TrainingUtterance, ...]:
    """Load intent → template mapping (YAML) and precompute sentence vectors."""
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict) or not raw:
        raise ValueError(f"{path}: expected a non-empty intent -> templates mapping")
    utterances: list[TrainingUtterance] = []
    for intent_id in sorted(raw):
        templates = raw[intent_id]
        if not isinstance(templates, list) or not templates:
            raise ValueError(f"{path}: intent {intent_id} has no templates")
        for text in templates:
            vector = embed(tokenize(text), table)
            if vector.is_zero:
                raise ValueError(f"{path}: template {text!r} embeds to the zero vector")
            utterances.append(TrainingUtterance(intent_id=str(intent_id), text=text, vector=vector))
    return tuple(utterances)


def classify(
    utterance: str,
    entities: Sequence[Entity],
    table: WordVectorTable,
    training: Sequence[TrainingUtterance],
    tau: float = DEFAULT_THRESHOLD,
) -> IntentPrediction | Fallback:
    """Best-intent match by cosine similarity, or Fallback below tau.

    Ties within 1e-9 of the maximum prefer the intent whose best template
    shares more raw tokens with the utterance, then the smaller intent_id.
    """
    substituted = substitute_entities(utterance, entities)
    query = embed(tokenize(substituted), table)
    if query.is_zero:
        return Fallback(score=0.0)

    best_per_intent: dict[str, tuple[float, TrainingUtterance]] = {}
    for candidate in training:
        score = cosine(query, candidate.vector)
        current = best_per_intent.get(candidate.intent_id)
        if current is None or score > current[0]:
            best_per_intent[candidate.intent_id] = (score, candidate)

    top = max(score for score, _ in best_per_intent.values())
    if top < tau:
        return Fallback(score=top)

    tied = [
        (intent_id, score, match)
        for intent_id, (score, match) in best_per_intent.items()
        if math.isclose(score, top, rel_tol=0.0, abs_tol=1e-9)
    ]
    if len(tied) > 1:
        raw_tokens = set(tokenize(utterance))
        tied.sort(key=lambda t: (-len(raw_tokens & set(tokenize(t[2].text))), t[0]))
    intent_id, score, match = tied[0]
    return IntentPrediction(intent_id=intent_id, score=score, best_match=match)


@dataclass(frozen=True)
class NluEvalReport:
    total: int
    correct: int
    per_intent: Mapping[str, tuple[int, int]]  # intent -> (correct, total)
    confusion: Mapping[tuple[str, str], int]  # (gold, predicted) -> count

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


def evaluate(
    heldout: Mapping[str, Sequence[str]],
    table: WordVectorTable,
    training: Sequence[TrainingUtterance],
    tau: float = DEFAULT_THRESHOLD,
) -> NluEvalReport:
    """Top-1 accuracy of classify() on held-out paraphrases (already substituted)."""
    total = correct = 0
    per_intent: dict[str, list[int]] = {}
    confusion: dict[tuple[str, str], int] = {}
    for gold in sorted(heldout):
        stats = per_intent.setdefault(gold, [0, 0])
        for text in heldout[gold]:
            outcome = classify(text, [], table, training, tau)
            predicted = outcome.intent_id if isinstance(outcome, IntentPrediction) else "fallback"
            total += 1
            stats[1] += 1
            if predicted == gold:
                correct += 1
                stats[0] += 1
            confusion[(gold, predicted)] = confusion.get((gold, predicted), 0) + 1
    return NluEvalReport(
        total=total,
        correct=correct,
        per_intent={k: (v[0], v[1]) for k, v in per_intent.items()},
        confusion=confusion,
    )


def load_heldout(path: str | Path) -> dict[str, list[str]]:
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict) or not raw:
        raise ValueError(f"{path}: expected a non-empty intent -> paraphrases mapping")
    return {str(k): [str(t) for t in v] for k, v in raw.items()}
