"""The single-file knowledge-base store and its derived indexes.

The core sections (commits, issues, links) are immutable after ingestion;
re-ingesting identical inputs reproduces them byte for byte. Mining appends a
derived, versioned section without touching the core.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import SchemaVersionMismatch
from .model import ChangeType, Commit, CommitIssueLink, Issue, format_utc
from .szz import MinedRecords

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class IngestMeta:
    commits_checksum: str
    issues_checksum: str
    ingested_at: str

    def to_dict(self) -> dict:
        return {
            "commits_checksum": self.commits_checksum,
            "issues_checksum": self.issues_checksum,
            "ingested_at": self.ingested_at,
        }


def _canonical_checksum(records: list[dict]) -> str:
    # Records are serialized sorted by their primary key, so any input line
    # order yields the same checksum.
    blob = json.dumps(records, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class Gazetteer:
    """Closed list of file paths and basenames known to the repository."""

    def __init__(self, paths: set[str]):
        self.paths = frozenset(paths)
        by_basename: dict[str, set[str]] = {}
        extensions: set[str] = set()
        for path in paths:
            base = path.rsplit("/", 1)[-1]
            by_basename.setdefault(base.lower(), set()).add(path)
            if "." in base:
                extensions.add(base.rsplit(".", 1)[-1].lower())
        self.by_basename = {k: tuple(sorted(v)) for k, v in by_basename.items()}
        self.extensions = frozenset(extensions)

    def lookup(self, name: str) -> tuple[str, ...]:
        """Paths matching a full path, else a case-insensitive basename."""
        if name in self.paths:
            return (name,)
        return self.by_basename.get(name.rsplit("/", 1)[-1].lower(), ())

    def __contains__(self, name: str) -> bool:
        return bool(self.lookup(name))

    def __len__(self) -> int:
        return len(self.paths) + len(self.by_basename)


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class KnowledgeBase:
    """Read-only view over ingested commits, issues, links, and mined records."""

    def __init__(
        self,
        commits: dict[str, Commit],
        issues: dict[str, Issue],
        links: frozenset[CommitIssueLink],
        ingest_meta: IngestMeta,
        mined: MinedRecords | None = None,
    ):
        self.commits = commits
        self.issues = issues
        self.links = links
        self.ingest_meta = ingest_meta
        self.mined = mined
        self._build_indexes()

    def _build_indexes(self) -> None:
        ordered = sorted(self.commits.values(), key=lambda c: (c.committer_time, c.hash))
        self.commits_by_time: list[Commit] = ordered
        file_index: dict[str, list[str]] = {}
        added_index: dict[str, list[str]] = {}
        paths: set[str] = set()
        renames = _UnionFind()
        for commit in ordered:
            touched_here: set[str] = set()
            for change in commit.changes:
                paths.add(change.path)
                touched_here.add(change.path)
                if change.old_path:
                    paths.add(change.old_path)
                    touched_here.add(change.old_path)
                    renames.union(change.old_path, change.path)
                if change.change_type is ChangeType.Added:
                    added_index.setdefault(change.path, []).append(commit.hash)
            for path in touched_here:
                file_index.setdefault(path, []).append(commit.hash)
        self.file_index = file_index
        self.added_index = added_index
        self.gazetteer = Gazetteer(paths)
        self._renames = renames

    def rename_closure(self, path: str) -> frozenset[str]:
        """All paths connected to `path` through explicit rename records."""
        root = self._renames.find(path)
        group = {p for p in self.gazetteer.paths if self._renames.find(p) == root}
        group.add(path)
        return frozenset(group)

    def resolve_hash_prefix(self, prefix: str) -> list[str]:
        return sorted(h for h in self.commits if h.startswith(prefix))

    # -- persistence ---------------------------------------------------------

    def to_payload(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "ingest_meta": self.ingest_meta.to_dict(),
            "commits": [self.commits[h].to_dict() for h in sorted(self.commits)],
            "issues": [self.issues[k].to_dict() for k in sorted(self.issues)],
            "links": [l.to_dict() for l in sorted(self.links)],
            "mined": self.mined.to_dict() if self.mined else None,
        }

    def save(self, path: str | os.PathLike) -> None:
        blob = json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))
        Path(path).write_text(blob, encoding="utf-8")

    @classmethod
    def load(cls, path: str | os.PathLike) -> KnowledgeBase:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        version = payload.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionMismatch(version, SCHEMA_VERSION)
        commits = {c["hash"]: Commit.from_dict(c) for c in payload["commits"]}
        issues = {i["key"]: Issue.from_dict(i) for i in payload["issues"]}
        links = frozenset(CommitIssueLink.from_dict(l) for l in payload["links"])
        meta = IngestMeta(**payload["ingest_meta"])
        mined = MinedRecords.from_dict(payload["mined"]) if payload.get("mined") else None
        return cls(commits, issues, links, meta, mined)

    def attach_mined(self, mined: MinedRecords) -> None:
        """Replace the derived mining section (the core sections never change)."""
        self.mined = mined


def build_store(
    commits: list[Commit],
    issues: list[Issue],
    links: frozenset[CommitIssueLink] | set[CommitIssueLink],
    out_path: str | os.PathLike,
) -> KnowledgeBase:
    """Assemble, validate, persist, and return the knowledge base."""
    commit_map = {c.hash: c for c in commits}
    issue_map = {i.key: i for i in issues}
    for link in links:
        if link.issue_key not in issue_map:
            raise ValueError(f"link references unknown issue {link.issue_key}")
        if link.commit_hash not in commit_map:
            raise ValueError(f"link references unknown commit {link.commit_hash}")
    meta = IngestMeta(
        commits_checksum=_canonical_checksum(
            [commit_map[h].to_dict() for h in sorted(commit_map)]
        ),
        issues_checksum=_canonical_checksum(
            [issue_map[k].to_dict() for k in sorted(issue_map)]
        ),
        ingested_at=format_utc(datetime.now(timezone.utc)),
    )
    kb = KnowledgeBase(commit_map, issue_map, frozenset(links), meta)
    kb.save(out_path)
    return kb
