"""Builders for synthetic commit/issue exports and random linear histories.

The history generator maintains real file texts where every line literally
names the commit that wrote it, so tests can derive ground-truth line
provenance from content alone, with no diff replay involved.
"""

from __future__ import annotations

import difflib
import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone


def commit_record(
    hash_: str,
    committer_time: str,
    message: str = "work",
    author_name: str = "dev",
    changes: list | None = None,
    parents: list | None = None,
    author_time: str | None = None,
) -> dict:
    return {
        "hash": hash_,
        "parents": parents if parents is not None else [],
        "author_name": author_name,
        "author_email": f"{author_name}@example.com",
        "author_time": author_time or committer_time,
        "committer_time": committer_time,
        "message": message,
        "changes": changes or [],
    }


def issue_record(
    key: str,
    type_: str = "Bug",
    status: str = "Resolved",
    priority: str = "major",
    resolution: str | None = "Fixed",
    assignee: str | None = "dev",
    watchers: int = 0,
    created: str = "2020-01-01T00:00:00Z",
    resolved: str | None = None,
    summary: str = "an issue",
) -> dict:
    return {
        "key": key,
        "type": type_,
        "status": status,
        "priority": priority,
        "resolution": resolution,
        "assignee": assignee,
        "watchers": watchers,
        "created": created,
        "resolved": resolved,
        "summary": summary,
    }


def change(path: str, change_type: str, hunks: list | None = None, old_path: str | None = None) -> dict:
    return {
        "path": path,
        "old_path": old_path,
        "change_type": change_type,
        "hunks": hunks or [],
    }


def hunk(old_start: int, old_count: int, new_start: int, new_count: int) -> dict:
    return {
        "old_start": old_start,
        "old_count": old_count,
        "new_start": new_start,
        "new_count": new_count,
    }


def added_hunks(n_lines: int) -> list:
    return [hunk(0, 0, 1, n_lines)]


def write_exports(tmp_path, commits: list[dict], issues: list[dict]):
    tmp_path.mkdir(parents=True, exist_ok=True)
    commits_path = tmp_path / "commits.ndjson"
    issues_path = tmp_path / "issues.json"
    commits_path.write_text(
        "".join(json.dumps(c, sort_keys=True) + "\n" for c in commits), encoding="utf-8"
    )
    issues_path.write_text(json.dumps(issues, indent=1), encoding="utf-8")
    return commits_path, issues_path


def build_kb(tmp_path, commits: list[dict], issues: list[dict], mine: bool = True,
             filter_by_report_date: bool = True):
    """Parse, link, store, and optionally mine a synthetic export."""
    from msrbot import szz
    from msrbot.ingest import link_commits_to_issues, parse_commit_export, parse_issue_export
    from msrbot.store import build_store

    commits_path, issues_path = write_exports(tmp_path, commits, issues)
    with open(commits_path, encoding="utf-8") as fh:
        parsed_commits = parse_commit_export(fh)
    with open(issues_path, encoding="utf-8") as fh:
        parsed_issues = parse_issue_export(fh)
    linked = link_commits_to_issues(parsed_commits, parsed_issues)
    kb = build_store(parsed_commits, parsed_issues, linked.links, tmp_path / "kb.json")
    if mine:
        kb.attach_mined(szz.mine(kb, filter_by_report_date=filter_by_report_date))
    return kb


# -- random linear histories with content-level ground truth -----------------


@dataclass
class GeneratedHistory:
    commits: list[dict]
    issues: list[dict]
    # (inducing, fix, issue, path, old_line_number) per deleted line,
    # before any temporal/report-date filtering
    deleted_line_writers: list[tuple[str, str, str, str, int]]
    texts_before: dict[str, dict[str, list[str]]] = field(default_factory=dict)


def _hunks_from_texts(old: list[str], new: list[str]) -> list[dict]:
    hunks = []
    matcher = difflib.SequenceMatcher(a=old, b=new, autojunk=False)
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            continue
        hunks.append(
            hunk(
                old_start=i1 if i2 == i1 else i1 + 1,
                old_count=i2 - i1,
                new_start=j1 if j2 == j1 else j1 + 1,
                new_count=j2 - j1,
            )
        )
    return hunks


def generate_history(rng: random.Random, max_commits: int = 20, max_files: int = 5) -> GeneratedHistory:
    """A linear history of text edits, with bug-fix commits linked to issues.

    Line contents are "writer_hash|serial", so the writer of any line is
    readable straight off the text.
    """
    files: dict[str, list[str]] = {}
    commits: list[dict] = []
    issues: list[dict] = []
    deleted_line_writers: list[tuple[str, str, str, str, int]] = []
    texts_before: dict[str, dict[str, list[str]]] = {}

    serial = 0
    base = datetime(2021, 1, 1, tzinfo=timezone.utc)
    n_commits = rng.randint(2, max_commits)
    prev_hash: str | None = None

    for index in range(n_commits):
        commit_hash = f"{index:040x}"
        time = base + timedelta(days=index, hours=rng.randint(0, 12))
        texts_before[commit_hash] = {p: list(lines) for p, lines in files.items()}

        def fresh_lines(count: int) -> list[str]:
            nonlocal serial
            out = []
            for _ in range(count):
                out.append(f"{commit_hash}|{serial}")
                serial += 1
            return out

        changes = []
        is_fix = bool(files) and rng.random() < 0.35
        message = f"change {index}"
        issue_key = None
        if is_fix:
            issue_key = f"BUG-{len(issues) + 1}"
            message = f"{issue_key} fix a defect"
            created_offset = rng.choice([-3, -1, 0, 1, 3])
            issues.append(
                issue_record(
                    key=issue_key,
                    created=(time + timedelta(days=created_offset)).isoformat().replace("+00:00", "Z"),
                    resolved=(time + timedelta(days=5)).isoformat().replace("+00:00", "Z"),
                )
            )

        n_ops = rng.randint(1, 3)
        touched: set[str] = set()
        for _ in range(n_ops):
            candidates = [p for p in files if p not in touched]
            op = rng.random()
            if (op < 0.3 and len(files) < max_files) or not candidates:
                path = f"f{len(files)}_{index}.txt"
                if path in files:
                    continue
                lines = fresh_lines(rng.randint(1, 6))
                files[path] = lines
                changes.append(change(path, "A", added_hunks(len(lines))))
                touched.add(path)
            elif op < 0.75:
                path = rng.choice(candidates)
                old = list(files[path])
                new = list(old)
                edit = rng.random()
                if edit < 0.4 and new:  # delete a slice
                    i = rng.randrange(len(new))
                    j = min(len(new), i + rng.randint(1, 3))
                    removed = new[i:j]
                    new[i:j] = []
                    if is_fix and issue_key:
                        for offset, text in enumerate(removed):
                            deleted_line_writers.append(
                                (text.split("|")[0], commit_hash, issue_key, path, i + offset + 1)
                            )
                elif edit < 0.8:  # insert
                    i = rng.randint(0, len(new))
                    new[i:i] = fresh_lines(rng.randint(1, 3))
                else:  # replace a slice
                    i = rng.randrange(len(new)) if new else 0
                    j = min(len(new), i + rng.randint(1, 2))
                    removed = new[i:j]
                    new[i:j] = fresh_lines(rng.randint(1, 2))
                    if is_fix and issue_key:
                        for offset, text in enumerate(removed):
                            deleted_line_writers.append(
                                (text.split("|")[0], commit_hash, issue_key, path, i + offset + 1)
                            )
                if new == old:
                    continue
                hunks = _hunks_from_texts(old, new)
                files[path] = new
                changes.append(change(path, "M", hunks))
                touched.add(path)
            elif op < 0.85 and candidates:
                path = rng.choice(candidates)
                new_path = f"r{index}_{path}"
                files[new_path] = files.pop(path)
                changes.append(change(new_path, "R", [], old_path=path))
                touched.add(new_path)
                touched.add(path)
            elif candidates:
                path = rng.choice(candidates)
                old = files.pop(path)
                hunks = [hunk(1, len(old), 0, 0)] if old else []
                if is_fix and issue_key:
                    for offset, text in enumerate(old):
                        deleted_line_writers.append(
                            (text.split("|")[0], commit_hash, issue_key, path, offset + 1)
                        )
                changes.append(change(path, "D", hunks))
                touched.add(path)

        if not changes:
            path = f"f{len(files)}_{index}.txt"
            lines = fresh_lines(1)
            files[path] = lines
            changes.append(change(path, "A", added_hunks(1)))

        changes.sort(key=lambda c: c["path"])
        commits.append(
            commit_record(
                commit_hash,
                time.isoformat().replace("+00:00", "Z"),
                message=message,
                parents=[prev_hash] if prev_hash else [],
                changes=changes,
            )
        )
        prev_hash = commit_hash

    return GeneratedHistory(
        commits=commits,
        issues=issues,
        deleted_line_writers=deleted_line_writers,
        texts_before=texts_before,
    )
