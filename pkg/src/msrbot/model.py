"""Domain records for the knowledge base: commits, issues, and their links."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from enum import Enum

HASH_RE = re.compile(r"^[0-9a-f]{40}$")
ISSUE_KEY_RE = re.compile(r"^[A-Z][A-Z0-9]*-[0-9]+$")


def parse_utc(value: str) -> datetime:
    """Parse an ISO-8601 instant and normalize it to UTC."""
    raw = value.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_utc(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def civil_date(dt: datetime) -> date:
    return dt.astimezone(timezone.utc).date()


class ChangeType(str, Enum):
    Added = "A"
    Modified = "M"
    Deleted = "D"
    Renamed = "R"


class IssueType(str, Enum):
    Bug = "Bug"
    Improvement = "Improvement"
    Task = "Task"
    Other = "Other"


class LinkSource(str, Enum):
    MessageMention = "MessageMention"


@dataclass(frozen=True, slots=True)
class Hunk:
    """One contiguous edit in old/new line coordinates (unified-diff header)."""

    old_start: int
    old_count: int
    new_start: int
    new_count: int

    def to_dict(self) -> dict:
        return {
            "old_start": self.old_start,
            "old_count": self.old_count,
            "new_start": self.new_start,
            "new_count": self.new_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Hunk:
        return cls(
            old_start=int(d["old_start"]),
            old_count=int(d["old_count"]),
            new_start=int(d["new_start"]),
            new_count=int(d["new_count"]),
        )


@dataclass(frozen=True, slots=True)
class FileChange:
    path: str
    change_type: ChangeType
    old_path: str | None = None
    hunks: tuple[Hunk, ...] = ()

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "old_path": self.old_path,
            "change_type": self.change_type.value,
            "hunks": [h.to_dict() for h in self.hunks],
        }

    @classmethod
    def from_dict(cls, d: dict) -> FileChange:
        return cls(
            path=d["path"],
            old_path=d.get("old_path"),
            change_type=ChangeType(d["change_type"]),
            hunks=tuple(Hunk.from_dict(h) for h in d.get("hunks", [])),
        )


@dataclass(frozen=True, slots=True)
class Commit:
    hash: str
    parents: tuple[str, ...]
    author_name: str
    author_email: str
    author_time: datetime
    committer_time: datetime
    message: str
    changes: tuple[FileChange, ...]

    @property
    def first_line(self) -> str:
        return self.message.splitlines()[0] if self.message else ""

    def to_dict(self) -> dict:
        return {
            "hash": self.hash,
            "parents": list(self.parents),
            "author_name": self.author_name,
            "author_email": self.author_email,
            "author_time": format_utc(self.author_time),
            "committer_time": format_utc(self.committer_time),
            "message": self.message,
            "changes": [c.to_dict() for c in self.changes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Commit:
        return cls(
            hash=d["hash"],
            parents=tuple(d["parents"]),
            author_name=d["author_name"],
            author_email=d["author_email"],
            author_time=parse_utc(d["author_time"]),
            committer_time=parse_utc(d["committer_time"]),
            message=d["message"],
            changes=tuple(FileChange.from_dict(c) for c in d["changes"]),
        )


CANONICAL_STATUSES = ("open", "in progress", "reopened", "resolved", "closed")
CANONICAL_PRIORITIES = ("blocker", "critical", "major", "minor", "trivial")


@dataclass(frozen=True, slots=True)
class Issue:
    key: str
    issue_type: IssueType
    status: str
    priority: str
    resolution: str | None
    assignee: str | None
    watcher_count: int
    created: datetime
    resolved: datetime | None
    summary: str

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "issue_type": self.issue_type.value,
            "status": self.status,
            "priority": self.priority,
            "resolution": self.resolution,
            "assignee": self.assignee,
            "watcher_count": self.watcher_count,
            "created": format_utc(self.created),
            "resolved": format_utc(self.resolved) if self.resolved else None,
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Issue:
        return cls(
            key=d["key"],
            issue_type=IssueType(d["issue_type"]),
            status=d["status"],
            priority=d["priority"],
            resolution=d.get("resolution"),
            assignee=d.get("assignee"),
            watcher_count=int(d["watcher_count"]),
            created=parse_utc(d["created"]),
            resolved=parse_utc(d["resolved"]) if d.get("resolved") else None,
            summary=d["summary"],
        )


@dataclass(frozen=True, slots=True, order=True)
class CommitIssueLink:
    commit_hash: str
    issue_key: str
    source: LinkSource = field(default=LinkSource.MessageMention, compare=False)

    def to_dict(self) -> dict:
        return {
            "commit_hash": self.commit_hash,
            "issue_key": self.issue_key,
            "source": self.source.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CommitIssueLink:
        return cls(
            commit_hash=d["commit_hash"],
            issue_key=d["issue_key"],
            source=LinkSource(d.get("source", "MessageMention")),
        )
