#!/usr/bin/env python3
"""Regenerate the deterministic word-vector file shipped with the package.

Each word's vector is a fixed-seed Gaussian draw keyed by the sha256 of the
word, so the file is reproducible byte for byte. The vocabulary is every
token in the shipped NLU training and held-out files plus a list of
off-topic words, so unsupported questions still embed to a nonzero vector
and exercise the confidence threshold rather than the zero-vector path.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import yaml

from msrbot.nlu import tokenize

DIM = 256

# Off-topic vocabulary for below-threshold (fallback) behavior.
EXTRA_WORDS = [
    "meaning", "life", "weather", "pizza", "love", "music", "movie", "game",
    "joke", "story", "president", "capital", "france", "cook", "pasta",
    "tallest", "mountain", "world", "play", "sing", "dance", "tomorrow",
    "next", "news", "sports", "stock", "price", "coffee", "lunch", "dinner",
    "cat", "dog", "color", "favorite", "tell", "a", "some", "new", "old",
    "where", "when", "why", "your", "name", "please", "thanks", "thank",
]


def word_vector(word: str) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(word.encode("utf-8")).digest()[:8], "big")
    return np.random.default_rng(seed).standard_normal(DIM)


def main() -> None:
    data_dir = Path(__file__).resolve().parent.parent / "src" / "msrbot" / "data"
    vocabulary: set[str] = set(EXTRA_WORDS)
    for name in ("nlu_training.yaml", "nlu_heldout.yaml"):
        raw = yaml.safe_load((data_dir / name).read_text(encoding="utf-8"))
        for templates in raw.values():
            for template in templates:
                vocabulary.update(tokenize(template))

    out_path = data_dir / "vectors.txt"
    words = sorted(vocabulary)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(words)} {DIM}\n")
        for word in words:
            values = " ".join(f"{x:.8f}" for x in word_vector(word))
            fh.write(f"{word} {values}\n")
    print(f"wrote {len(words)} vectors of dimension {DIM} to {out_path}")


if __name__ == "__main__":
    main()
