"""Parse Git and issue-tracker exports, validate them, and link commits to issues."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import BinaryIO, Iterable

from .errors import DuplicateHash, DuplicateKey, MalformedRecord
from .model import (
    HASH_RE,
    ISSUE_KEY_RE,
    ChangeType,
    Commit,
    CommitIssueLink,
    FileChange,
    Hunk,
    Issue,
    IssueType,
    parse_utc,
)

# Candidate issue mentions inside commit messages; the project prefix is
# matched case-sensitively, so lowercase look-alikes never link.
MENTION_RE = re.compile(r"\b[A-Z][A-Z0-9]*-[0-9]+\b")

_CHANGE_TYPES = {c.value for c in ChangeType}


def _fail(line: int, reason: str) -> MalformedRecord:
    return MalformedRecord(line, reason)


def _parse_hunk(raw: dict, line: int) -> Hunk:
    try:
        hunk = Hunk.from_dict(raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(line, f"bad hunk object: {exc}") from exc
    if hunk.old_start < 0 or hunk.new_start < 0:
        raise _fail(line, "hunk start positions must be non-negative")
    if hunk.old_count < 0 or hunk.new_count < 0:
        raise _fail(line, "hunk counts must be non-negative")
    if hunk.old_count > 0 and hunk.old_start < 1:
        raise _fail(line, "hunks that remove lines need a 1-based old_start")
    return hunk


def _parse_change(raw: dict, line: int) -> FileChange:
    if not isinstance(raw, dict):
        raise _fail(line, "file change must be an object")
    ctype = raw.get("change_type")
    if ctype not in _CHANGE_TYPES:
        raise _fail(line, f"unknown change_type {ctype!r}")
    change_type = ChangeType(ctype)
    path = raw.get("path")
    if not path or not isinstance(path, str):
        raise _fail(line, "file change needs a non-empty path")
    old_path = raw.get("old_path")
    if change_type is ChangeType.Renamed:
        if not old_path:
            raise _fail(line, "renamed change needs old_path")
    elif old_path is not None:
        raise _fail(line, "old_path is only valid on renamed changes")

    hunks = [_parse_hunk(h, line) for h in raw.get("hunks", [])]
    hunks.sort(key=lambda h: (h.old_start, h.new_start))
    prev_end = 0
    for h in hunks:
        if h.old_start < prev_end:
            raise _fail(line, "hunks overlap in old coordinates")
        prev_end = h.old_start + h.old_count
        if change_type is ChangeType.Added and h.old_count != 0:
            raise _fail(line, "added files cannot remove old lines")
        if change_type is ChangeType.Deleted and h.new_count != 0:
            raise _fail(line, "deleted files cannot add new lines")
    return FileChange(
        path=path, old_path=old_path, change_type=change_type, hunks=tuple(hunks)
    )


def _parse_commit_record(raw: dict, line: int) -> Commit:
    if not isinstance(raw, dict):
        raise _fail(line, "commit record must be a JSON object")
    try:
        hash_ = str(raw["hash"]).lower()
        parents = tuple(str(p).lower() for p in raw.get("parents", []))
        author_time = parse_utc(raw["author_time"])
        committer_time = parse_utc(raw["committer_time"])
        commit = Commit(
            hash=hash_,
            parents=parents,
            author_name=str(raw["author_name"]),
            author_email=str(raw["author_email"]),
            author_time=author_time,
            committer_time=committer_time,
            message=str(raw["message"]),
            changes=tuple(_parse_change(c, line) for c in raw.get("changes", [])),
        )
    except MalformedRecord:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(line, f"bad commit record: {exc}") from exc
    if not HASH_RE.match(commit.hash):
        raise _fail(line, f"hash {commit.hash!r} is not 40 hex characters")
    for p in commit.parents:
        if not HASH_RE.match(p):
            raise _fail(line, f"parent hash {p!r} is not 40 hex characters")
    return commit


def parse_commit_export(stream: BinaryIO | Iterable[bytes]) -> list[Commit]:
    """Read an NDJSON commit export. Aborts on the first malformed record."""
    commits: list[Commit] = []
    seen: set[str] = set()
    for lineno, raw_line in enumerate(stream, start=1):
        text = raw_line.decode("utf-8") if isinstance(raw_line, bytes) else raw_line
        if not text.strip():
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _fail(lineno, f"invalid JSON: {exc.msg}") from exc
        commit = _parse_commit_record(record, lineno)
        if commit.hash in seen:
            raise DuplicateHash(commit.hash)
        seen.add(commit.hash)
        commits.append(commit)
    return commits


_ISSUE_TYPES = {t.value.lower(): t for t in IssueType}


def _canon(value: object) -> str | None:
    if value is None:
        return None
    text = str(value).strip().lower()
    return text or None


def _parse_issue_record(raw: dict, index: int) -> Issue:
    if not isinstance(raw, dict):
        raise _fail(index, "issue record must be a JSON object")
    try:
        key = str(raw["key"]).strip()
        issue_type = _ISSUE_TYPES.get(str(raw.get("type", "")).strip().lower(), IssueType.Other)
        watcher_count = int(raw.get("watchers", 0))
        created = parse_utc(raw["created"])
        resolved = parse_utc(raw["resolved"]) if raw.get("resolved") else None
        issue = Issue(
            key=key,
            issue_type=issue_type,
            status=_canon(raw.get("status")) or "open",
            priority=_canon(raw.get("priority")) or "",
            resolution=_canon(raw.get("resolution")),
            assignee=(str(raw["assignee"]).strip() or None) if raw.get("assignee") else None,
            watcher_count=watcher_count,
            created=created,
            resolved=resolved,
            summary=str(raw.get("summary", "")),
        )
    except MalformedRecord:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(index, f"bad issue record: {exc}") from exc
    if not ISSUE_KEY_RE.match(issue.key):
        raise _fail(index, f"issue key {issue.key!r} does not match KEY-123 form")
    if issue.watcher_count < 0:
        raise _fail(index, "watcher count must be non-negative")
    if issue.resolved is not None and issue.status not in ("resolved", "closed"):
        raise _fail(index, f"issue {issue.key} has a resolved time but status {issue.status!r}")
    return issue


def parse_issue_export(stream: BinaryIO | bytes | str) -> list[Issue]:
    """Read a JSON-array issue export with canonicalized status/priority/resolution."""
    if hasattr(stream, "read"):
        data = stream.read()
    else:
        data = stream
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        records = json.loads(data)
    except json.JSONDecodeError as exc:
        raise _fail(exc.lineno, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(records, list):
        raise _fail(1, "issue export must be a top-level JSON array")
    issues: list[Issue] = []
    seen: set[str] = set()
    for index, raw in enumerate(records, start=1):
        issue = _parse_issue_record(raw, index)
        if issue.key in seen:
            raise DuplicateKey(issue.key)
        seen.add(issue.key)
        issues.append(issue)
    return issues


@dataclass(frozen=True)
class LinkResult:
    """Commit-to-issue links plus the ingest report of unresolved mentions."""

    links: frozenset[CommitIssueLink]
    ignored_mentions: int


def link_commits_to_issues(commits: list[Commit], issues: list[Issue]) -> LinkResult:
    """Link every commit whose message mentions an existing issue key.

    Mentions of keys without a matching issue are counted, not errors; repeat
    mentions of the same key in one message produce a single link.
    """
    known = {issue.key for issue in issues}
    links: set[CommitIssueLink] = set()
    ignored = 0
    for commit in commits:
        for match in MENTION_RE.finditer(commit.message):
            key = match.group(0)
            if key in known:
                links.add(CommitIssueLink(commit_hash=commit.hash, issue_key=key))
            else:
                ignored += 1
    return LinkResult(links=frozenset(links), ignored_mentions=ignored)
