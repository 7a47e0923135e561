"""Fix-inducing commit mining.

Walks first-parent history replaying hunks to maintain a per-file table of
line origins, then maps each bug-fixing commit to the commits that last wrote
the lines it deleted. Merge side-branches are ignored; renames are followed
only through explicit rename records in the export.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import HunkInconsistency
from .model import ChangeType, Commit, Hunk, IssueType

if TYPE_CHECKING:
    from .store import KnowledgeBase

# Per path, one origin hash per current line; index i holds line i+1's writer.
LineOriginTable = dict[str, list[str]]

MINED_SECTION_VERSION = 1


@dataclass(frozen=True, slots=True)
class FixRecord:
    fix_commit: str
    issue_key: str
    touched_files: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "fix_commit": self.fix_commit,
            "issue_key": self.issue_key,
            "touched_files": list(self.touched_files),
        }

    @classmethod
    def from_dict(cls, d: dict) -> FixRecord:
        return cls(d["fix_commit"], d["issue_key"], tuple(d["touched_files"]))


@dataclass(frozen=True, slots=True)
class InducingRecord:
    inducing_commit: str
    fix_commit: str
    issue_key: str
    # (path, deleted line numbers in the fix's pre-image) pairs, sorted.
    evidence_files: tuple[tuple[str, tuple[int, ...]], ...]

    def to_dict(self) -> dict:
        return {
            "inducing_commit": self.inducing_commit,
            "fix_commit": self.fix_commit,
            "issue_key": self.issue_key,
            "evidence_files": [[path, list(lines)] for path, lines in self.evidence_files],
        }

    @classmethod
    def from_dict(cls, d: dict) -> InducingRecord:
        return cls(
            d["inducing_commit"],
            d["fix_commit"],
            d["issue_key"],
            tuple((path, tuple(lines)) for path, lines in d["evidence_files"]),
        )


@dataclass
class MinedRecords:
    """Derived, versioned store section produced by `msrbot mine`."""

    filter_report_date: bool
    fixes: list[FixRecord] = field(default_factory=list)
    inducing: list[InducingRecord] = field(default_factory=list)
    version: int = MINED_SECTION_VERSION

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "filter_report_date": self.filter_report_date,
            "fixes": [f.to_dict() for f in self.fixes],
            "inducing": [r.to_dict() for r in self.inducing],
        }

    @classmethod
    def from_dict(cls, d: dict) -> MinedRecords:
        return cls(
            filter_report_date=bool(d["filter_report_date"]),
            fixes=[FixRecord.from_dict(f) for f in d["fixes"]],
            inducing=[InducingRecord.from_dict(r) for r in d["inducing"]],
            version=int(d.get("version", MINED_SECTION_VERSION)),
        )


def identify_fixing_commits(kb: KnowledgeBase) -> list[FixRecord]:
    """One record per commit-issue link whose issue is a Bug resolved as fixed."""
    fixes: list[FixRecord] = []
    for link in sorted(kb.links):
        issue = kb.issues[link.issue_key]
        if issue.issue_type is not IssueType.Bug or issue.resolution != "fixed":
            continue
        commit = kb.commits[link.commit_hash]
        touched = tuple(
            change.path
            for change in commit.changes
            if change.change_type is not ChangeType.Added
            and any(h.old_count > 0 for h in change.hunks)
        )
        fixes.append(FixRecord(commit.hash, issue.key, touched))
    fixes.sort(key=lambda f: (kb.commits[f.fix_commit].committer_time, f.fix_commit, f.issue_key))
    return fixes


def first_parent_chain(kb: KnowledgeBase, up_to: str) -> list[Commit]:
    """Commits from the root (or export boundary) to up_to, first parents only."""
    chain: list[Commit] = []
    current: Commit | None = kb.commits[up_to]
    while current is not None:
        chain.append(current)
        if not current.parents:
            break
        # A parent absent from the export is a boundary; replay starts there.
        current = kb.commits.get(current.parents[0])
    chain.reverse()
    return chain


def _apply_hunks(entries: list[str], hunks: tuple[Hunk, ...], origin: str, path: str) -> list[str]:
    out: list[str] = []
    cursor = 0
    for hunk in hunks:
        # old_count == 0 inserts after old line old_start; otherwise the hunk
        # replaces old lines [old_start, old_start + old_count).
        boundary = hunk.old_start if hunk.old_count == 0 else hunk.old_start - 1
        if boundary < cursor or boundary > len(entries):
            raise HunkInconsistency(path, origin)
        out.extend(entries[cursor:boundary])
        cursor = boundary
        if cursor + hunk.old_count > len(entries):
            raise HunkInconsistency(path, origin)
        cursor += hunk.old_count
        out.extend([origin] * hunk.new_count)
    out.extend(entries[cursor:])
    return out


def _apply_commit(table: LineOriginTable, commit: Commit) -> None:
    for change in commit.changes:
        if change.change_type is ChangeType.Added:
            table[change.path] = _apply_hunks([], change.hunks, commit.hash, change.path)
        elif change.change_type is ChangeType.Deleted:
            table.pop(change.path, None)
        elif change.change_type is ChangeType.Renamed:
            entries = table.pop(change.old_path, [])
            if change.hunks:
                entries = _apply_hunks(entries, change.hunks, commit.hash, change.path)
            table[change.path] = entries
        else:
            entries = table.get(change.path, [])
            table[change.path] = _apply_hunks(entries, change.hunks, commit.hash, change.path)


def replay_line_origins(kb: KnowledgeBase, up_to: str) -> LineOriginTable:
    """Line-origin table for the state immediately before `up_to`."""
    table: LineOriginTable = {}
    for commit in first_parent_chain(kb, up_to)[:-1]:
        _apply_commit(table, commit)
    return table


def compute_inducing(
    kb: KnowledgeBase,
    fixes: list[FixRecord],
    filter_by_report_date: bool = True,
) -> list[InducingRecord]:
    """SZZ step two: origins of the lines each fix deletes are its inducers.

    Candidates committed at or after the fix are impossible and dropped; with
    the report-date filter on, so are candidates newer than the issue report.
    """
    evidence: dict[tuple[str, str, str], dict[str, set[int]]] = defaultdict(
        lambda: defaultdict(set)
    )
    for fix in fixes:
        fix_commit = kb.commits[fix.fix_commit]
        issue = kb.issues[fix.issue_key]
        table = replay_line_origins(kb, fix.fix_commit)
        for change in fix_commit.changes:
            if change.change_type is ChangeType.Added:
                continue
            deleted = [
                line
                for hunk in change.hunks
                if hunk.old_count > 0
                for line in range(hunk.old_start, hunk.old_start + hunk.old_count)
            ]
            if not deleted:
                continue
            pre_path = change.old_path if change.change_type is ChangeType.Renamed else change.path
            entries = table.get(pre_path)
            if entries is None or deleted[-1] > len(entries):
                raise HunkInconsistency(pre_path, fix.fix_commit)
            for line in deleted:
                origin = entries[line - 1]
                candidate = kb.commits[origin]
                if candidate.committer_time >= fix_commit.committer_time:
                    continue
                if filter_by_report_date and candidate.committer_time > issue.created:
                    continue
                evidence[(origin, fix.fix_commit, fix.issue_key)][pre_path].add(line)

    records = [
        InducingRecord(
            inducing_commit=inducing,
            fix_commit=fix_hash,
            issue_key=key,
            evidence_files=tuple(
                (path, tuple(sorted(lines))) for path, lines in sorted(files.items())
            ),
        )
        for (inducing, fix_hash, key), files in evidence.items()
    ]
    records.sort(key=lambda r: (r.fix_commit, r.inducing_commit, r.issue_key))
    return records


def mine(kb: KnowledgeBase, filter_by_report_date: bool = True) -> MinedRecords:
    fixes = identify_fixing_commits(kb)
    inducing = compute_inducing(kb, fixes, filter_by_report_date)
    return MinedRecords(
        filter_report_date=filter_by_report_date, fixes=fixes, inducing=inducing
    )
