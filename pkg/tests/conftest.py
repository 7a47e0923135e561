from __future__ import annotations

from pathlib import Path

import pytest

from msrbot import szz
from msrbot.config import ServiceConfig
from msrbot.ingest import link_commits_to_issues, parse_commit_export, parse_issue_export
from msrbot.queries import QueryEngine
from msrbot.service import build_runtime
from msrbot.store import KnowledgeBase, build_store

import oracles

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
COMMITS_PATH = FIXTURES / "commits.ndjson"
ISSUES_PATH = FIXTURES / "issues.json"

# the six sample hashes are the two-character ids repeated to 40 chars
def full_hash(n: int) -> str:
    return f"c{n}" * 20


@pytest.fixture(scope="session")
def raw_commits():
    return oracles.load_raw_commits(COMMITS_PATH)


@pytest.fixture(scope="session")
def raw_issues():
    return oracles.load_raw_issues(ISSUES_PATH)


@pytest.fixture(scope="session")
def kb_path(tmp_path_factory) -> Path:
    """The sample store, mined with the default filters, saved to disk once."""
    out = tmp_path_factory.mktemp("store") / "kb.json"
    with open(COMMITS_PATH, encoding="utf-8") as fh:
        commits = parse_commit_export(fh)
    with open(ISSUES_PATH, encoding="utf-8") as fh:
        issues = parse_issue_export(fh)
    linked = link_commits_to_issues(commits, issues)
    kb = build_store(commits, issues, linked.links, out)
    kb.attach_mined(szz.mine(kb))
    kb.save(out)
    return out


@pytest.fixture(scope="session")
def kb(kb_path) -> KnowledgeBase:
    return KnowledgeBase.load(kb_path)


@pytest.fixture(scope="session")
def engine(kb) -> QueryEngine:
    return QueryEngine(kb)


@pytest.fixture(scope="session")
def make_orchestrator(kb_path):
    def _make(fixed_now: str = "2020-03-15T12:00:00Z", log_path=None):
        config = ServiceConfig(
            kb_path=str(kb_path),
            fixed_now=fixed_now,
            log_path=str(log_path) if log_path else None,
        )
        _, orchestrator = build_runtime(config)
        return orchestrator

    return _make


@pytest.fixture(scope="session")
def orchestrator(make_orchestrator):
    return make_orchestrator()


@pytest.fixture(scope="session")
def client(kb_path):
    from fastapi.testclient import TestClient

    from msrbot.service import create_app

    config = ServiceConfig(kb_path=str(kb_path), fixed_now="2020-03-15T12:00:00Z")
    app = create_app(config)
    with TestClient(app, raise_server_exceptions=False) as tc:
        yield tc
