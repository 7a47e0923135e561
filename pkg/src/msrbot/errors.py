"""Exception types shared across the msrbot pipeline."""

from __future__ import annotations


class MsrbotError(Exception):
    """Base class for all msrbot errors."""


class MalformedRecord(MsrbotError):
    """An export record failed validation. Carries the 1-based line (or index)."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateHash(MsrbotError):
    def __init__(self, hash_: str):
        super().__init__(f"duplicate commit hash: {hash_}")
        self.hash = hash_


class DuplicateKey(MsrbotError):
    def __init__(self, key: str):
        super().__init__(f"duplicate issue key: {key}")
        self.key = key


class SchemaVersionMismatch(MsrbotError):
    def __init__(self, found: object, expected: int):
        super().__init__(f"store schema version {found!r}, expected {expected}")
        self.found = found
        self.expected = expected


class HunkInconsistency(MsrbotError):
    """A hunk's old range does not fit the replayed file; the export is corrupt."""

    def __init__(self, path: str, commit: str):
        super().__init__(f"hunk exceeds file length for {path} at commit {commit}")
        self.path = path
        self.commit = commit


class UnknownFile(MsrbotError):
    def __init__(self, name: str):
        super().__init__(f"no file named {name!r} in the repository")
        self.name = name


class UnknownIssue(MsrbotError):
    def __init__(self, key: str):
        super().__init__(f"no issue {key} in the tracker")
        self.key = key


class UnknownCommit(MsrbotError):
    def __init__(self, hash_: str):
        super().__init__(f"no commit {hash_} in the repository")
        self.hash = hash_


class InvalidK(MsrbotError):
    def __init__(self, k: int):
        super().__init__(f"k must be a positive integer, got {k}")
        self.k = k


class AmbiguousHashPrefix(MsrbotError):
    def __init__(self, prefix: str, matches: list[str]):
        super().__init__(f"hash prefix {prefix!r} matches {len(matches)} commits")
        self.prefix = prefix
        self.matches = matches


class UnparseableDate(MsrbotError):
    def __init__(self, expression: str):
        super().__init__(f"cannot parse date expression: {expression!r}")
        self.expression = expression


class InvertedRange(MsrbotError):
    def __init__(self, start, end):
        super().__init__(f"date range starts after it ends: {start} > {end}")
        self.start = start
        self.end = end


class ZeroVector(MsrbotError):
    def __init__(self):
        super().__init__("cosine similarity is undefined for a zero vector")


class TemplateMismatch(MsrbotError):
    def __init__(self, template_id: str, kind: str):
        super().__init__(f"template {template_id} cannot render a {kind} result")
        self.template_id = template_id
        self.kind = kind
