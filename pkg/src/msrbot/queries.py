"""The fifteen question operations over a built (and mined) knowledge base.

Every operation is a pure function of (store, parameters). File-name
parameters match by full path first, then case-insensitively by basename;
basename collisions aggregate over all matching paths and the result
carries the matched set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dates import DateRange
from .errors import AmbiguousHashPrefix, InvalidK, UnknownCommit, UnknownFile, UnknownIssue
from .model import Commit, Issue
from .store import KnowledgeBase

DEFAULT_K = 5
DEFAULT_K_LATEST = 3

_UNASSIGNED = "(unassigned)"
_CLOSED_STATUSES = frozenset({"resolved", "closed"})


@dataclass(frozen=True)
class QueryResult:
    kind: str
    rows: tuple[dict, ...]
    scalar: int | float | None = None
    truncated: bool = False
    matched_paths: tuple[str, ...] = ()
    empty_denominator: bool = False

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rows": [dict(r) for r in self.rows],
            "scalar": self.scalar,
            "truncated": self.truncated,
            "matched_paths": list(self.matched_paths),
            "empty_denominator": self.empty_denominator,
        }


def _commit_row(commit: Commit) -> dict:
    return {
        "hash": commit.hash,
        "author_name": commit.author_name,
        "date": commit.committer_time.date().isoformat(),
        "message": commit.first_line,
    }


def _issue_row(issue: Issue) -> dict:
    return {
        "key": issue.key,
        "status": issue.status,
        "priority": issue.priority,
        "watchers": issue.watcher_count,
    }


def _require_k(k: int | None, default: int) -> int:
    if k is None:
        return default
    if k < 1:
        raise InvalidK(k)
    return k


class QueryEngine:
    def __init__(self, kb: KnowledgeBase):
        self.kb = kb

    # -- shared lookups ----------------------------------------------------

    @property
    def _fixes(self):
        return self.kb.mined.fixes if self.kb.mined else ()

    @property
    def _inducing(self):
        return self.kb.mined.inducing if self.kb.mined else ()

    def _match_file(self, name: str) -> tuple[str, ...]:
        paths = self.kb.gazetteer.lookup(name)
        if not paths:
            raise UnknownFile(name)
        return paths

    def _rename_group(self, paths: Iterable[str]) -> frozenset[str]:
        group: set[str] = set()
        for path in paths:
            group |= self.kb.rename_closure(path)
        return frozenset(group)

    def _commits_touching(self, paths: Iterable[str]) -> list[Commit]:
        """Commits touching any of the paths, committer_time ascending."""
        hashes: set[str] = set()
        for path in paths:
            hashes.update(self.kb.file_index.get(path, ()))
        return [c for c in self.kb.commits_by_time if c.hash in hashes]

    def _resolve_commit(self, hash_or_prefix: str) -> str:
        if hash_or_prefix in self.kb.commits:
            return hash_or_prefix
        matches = self.kb.resolve_hash_prefix(hash_or_prefix)
        if len(matches) > 1:
            raise AmbiguousHashPrefix(hash_or_prefix, matches)
        if not matches:
            raise UnknownCommit(hash_or_prefix)
        return matches[0]

    def _commits_in_range(self, range_: DateRange) -> list[Commit]:
        return [c for c in self.kb.commits_by_time if range_.contains(c.committer_time)]

    # -- operations --------------------------------------------------------

    def q1_fixing_commits(self, issue_key: str) -> QueryResult:
        if issue_key not in self.kb.issues:
            raise UnknownIssue(issue_key)
        hashes = {f.fix_commit for f in self._fixes if f.issue_key == issue_key}
        rows = tuple(_commit_row(c) for c in self.kb.commits_by_time if c.hash in hashes)
        return QueryResult(kind="q1", rows=rows)

    def q2_top_bug_fixers(self, file: str) -> QueryResult:
        paths = self._match_file(file)
        path_set = set(paths)
        bugs_by_author: dict[str, set[str]] = {}
        for fix in self._fixes:
            if path_set.intersection(fix.touched_files):
                author = self.kb.commits[fix.fix_commit].author_name
                bugs_by_author.setdefault(author, set()).add(fix.issue_key)
        if not bugs_by_author:
            return QueryResult(kind="q2", rows=(), matched_paths=paths)
        top = max(len(keys) for keys in bugs_by_author.values())
        rows = tuple(
            {"name": author, "count": len(keys)}
            for author, keys in sorted(bugs_by_author.items())
            if len(keys) == top
        )
        return QueryResult(kind="q2", rows=rows, matched_paths=paths)

    def q3_most_bug_introducing_files(self, k: int | None = None) -> QueryResult:
        k = _require_k(k, DEFAULT_K)
        inducers_by_path: dict[str, set[str]] = {}
        for record in self._inducing:
            for path, _lines in record.evidence_files:
                inducers_by_path.setdefault(path, set()).add(record.inducing_commit)
        ranked = sorted(inducers_by_path.items(), key=lambda item: (-len(item[1]), item[0]))
        rows = tuple({"path": path, "count": len(commits)} for path, commits in ranked[:k])
        return QueryResult(kind="q3", rows=rows, truncated=len(ranked) > k)

    def q4_modifiers_of_file(self, file: str) -> QueryResult:
        paths = self._match_file(file)
        seen: dict[str, None] = {}
        for commit in self._commits_touching(paths):
            seen.setdefault(commit.author_name)
        rows = tuple({"name": name} for name in seen)
        return QueryResult(kind="q4", rows=rows, matched_paths=paths)

    def q5_bugs_introduced_by_commit(self, commit_hash: str) -> QueryResult:
        full = self._resolve_commit(commit_hash)
        keys = {r.issue_key for r in self._inducing if r.inducing_commit == full}
        issues = sorted((self.kb.issues[k] for k in keys), key=lambda i: (i.created, i.key))
        return QueryResult(kind="q5", rows=tuple(_issue_row(i) for i in issues))

    def q6_commit_count(self, range_: DateRange) -> QueryResult:
        return QueryResult(kind="q6", rows=(), scalar=len(self._commits_in_range(range_)))

    def q7_commits_in_range(self, range_: DateRange) -> QueryResult:
        rows = tuple(_commit_row(c) for c in self._commits_in_range(range_))
        return QueryResult(kind="q7", rows=rows)

    def q8_latest_commits_to_file(self, file: str, k: int | None = None) -> QueryResult:
        k = _require_k(k, DEFAULT_K_LATEST)
        paths = self._match_file(file)
        commits = self._commits_touching(paths)
        newest_first = list(reversed(commits))
        rows = tuple(_commit_row(c) for c in newest_first[:k])
        return QueryResult(
            kind="q8", rows=rows, truncated=len(newest_first) > k, matched_paths=paths
        )

    def q9_commits_for_file(self, file: str) -> QueryResult:
        paths = self._match_file(file)
        group = self._rename_group(paths)
        rows = tuple(_commit_row(c) for c in self._commits_touching(group))
        return QueryResult(kind="q9", rows=rows, matched_paths=tuple(sorted(group)))

    def q10_most_common_bugs(self, k: int | None = None) -> QueryResult:
        k = _require_k(k, DEFAULT_K)
        bugs = [i for i in self.kb.issues.values() if i.issue_type.value == "Bug"]
        bugs.sort(key=lambda i: (-i.watcher_count, i.created, i.key))
        rows = tuple(_issue_row(i) for i in bugs[:k])
        return QueryResult(kind="q10", rows=rows, truncated=len(bugs) > k)

    def q11_buggy_or_fixing_commits(self, range_: DateRange, kind: str) -> QueryResult:
        if kind not in ("BUGGY", "FIXING"):
            raise ValueError(f"kind must be BUGGY or FIXING, got {kind!r}")
        if kind == "FIXING":
            hashes = {f.fix_commit for f in self._fixes}
        else:
            hashes = {r.inducing_commit for r in self._inducing}
        rows = tuple(
            _commit_row(c)
            for c in self.kb.commits_by_time
            if c.hash in hashes and range_.contains(c.committer_time)
        )
        return QueryResult(kind="q11", rows=rows)

    def q12_issue_count(self, facet: str, value: str) -> QueryResult:
        if facet not in ("status", "priority"):
            raise ValueError(f"facet must be status or priority, got {facet!r}")
        wanted = value.strip().lower()
        count = sum(
            1
            for i in self.kb.issues.values()
            if i.issue_type.value == "Bug" and getattr(i, facet) == wanted
        )
        return QueryResult(kind="q12", rows=(), scalar=count)

    def q13_author_of_file(self, file: str) -> QueryResult:
        paths = self._match_file(file)
        group = self._rename_group(paths)
        adders: list[Commit] = []
        for path in group:
            for commit_hash in self.kb.added_index.get(path, ()):
                adders.append(self.kb.commits[commit_hash])
        if not adders:
            return QueryResult(kind="q13", rows=(), matched_paths=tuple(sorted(group)))
        earliest = min(adders, key=lambda c: (c.committer_time, c.hash))
        return QueryResult(
            kind="q13",
            rows=({"name": earliest.author_name, "hash": earliest.hash},),
            matched_paths=tuple(sorted(group)),
        )

    def q14_most_unfixed_bugs(self, k: int | None = None) -> QueryResult:
        k = _require_k(k, DEFAULT_K)
        counts: dict[str, int] = {}
        for issue in self.kb.issues.values():
            if issue.issue_type.value != "Bug" or issue.status in _CLOSED_STATUSES:
                continue
            assignee = issue.assignee or _UNASSIGNED
            counts[assignee] = counts.get(assignee, 0) + 1
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        cut = ranked[:k]
        # Ties at the maximum count are never dropped by the cap.
        if ranked:
            top = ranked[0][1]
            cut += [item for item in ranked[k:] if item[1] == top]
        rows = tuple({"name": name, "count": count} for name, count in cut)
        return QueryResult(kind="q14", rows=rows, truncated=len(ranked) > len(cut))

    def q15_fix_inducing_percentage(self, range_: DateRange) -> QueryResult:
        fixes_in_range = {
            f.fix_commit
            for f in self._fixes
            if range_.contains(self.kb.commits[f.fix_commit].committer_time)
        }
        if not fixes_in_range:
            return QueryResult(kind="q15", rows=(), empty_denominator=True)
        inducers = {r.inducing_commit for r in self._inducing}
        both = fixes_in_range & inducers
        pct = round(100.0 * len(both) / len(fixes_in_range), 1)
        return QueryResult(kind="q15", rows=(), scalar=pct)
