"""Command-line entry points: ingest, mine, serve, chat, ask, eval, query."""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from . import ingest as ingest_mod
from . import szz
from .config import ServiceConfig, data_path, load_config
from .dates import DateRange
from .errors import MsrbotError
from .ner import evaluate_ner
from .nlu import evaluate as evaluate_nlu
from .nlu import load_heldout, load_training, load_vectors
from .queries import QueryEngine
from .service import build_runtime, create_app, reply_to_dict
from .store import KnowledgeBase, build_store


def _fail(message: str) -> None:
    raise click.ClickException(message)


def _config_from_flags(
    config: str | None,
    kb: str | None,
    vectors: str | None,
    nlu: str | None,
    tau: float | None,
    port: int | None,
    log: str | None,
    fixed_now: str | None,
) -> ServiceConfig:
    try:
        return load_config(
            config,
            kb_path=kb,
            vectors_path=vectors,
            nlu_path=nlu,
            tau=tau,
            port=port,
            log_path=log,
            fixed_now=fixed_now,
        )
    except (OSError, ValueError, TypeError) as exc:
        _fail(f"bad configuration: {exc}")


def _runtime_or_fail(config: ServiceConfig):
    try:
        return build_runtime(config)
    except (MsrbotError, OSError, ValueError) as exc:
        _fail(f"failed to load resources: {exc}")


_SERVICE_FLAGS = [
    click.option("--config", "config_path", type=click.Path(), default=None, help="YAML config file (or MSRBOT_CONFIG)."),
    click.option("--kb", type=click.Path(), default=None, help="Knowledge base file."),
    click.option("--vectors", type=click.Path(), default=None, help="Word vector file."),
    click.option("--nlu", type=click.Path(), default=None, help="Intent training file."),
    click.option("--tau", type=float, default=None, help="Intent confidence threshold."),
    click.option("--log", type=click.Path(), default=None, help="Conversation log (NDJSON)."),
    click.option("--fixed-now", default=None, help="Fixed UTC instant for relative dates (testing)."),
]


def service_flags(fn):
    for flag in reversed(_SERVICE_FLAGS):
        fn = flag(fn)
    return fn


@click.group()
def main() -> None:
    """Repository question-answering bot."""


@main.command()
@click.option("--git-export", "git_export", type=click.Path(exists=True), required=True)
@click.option("--issues", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
def ingest(git_export: str, issues: str, out: str) -> None:
    """Build a knowledge base from commit and issue exports."""
    try:
        with open(git_export, encoding="utf-8") as fh:
            commits = ingest_mod.parse_commit_export(fh)
        with open(issues, encoding="utf-8") as fh:
            issue_list = ingest_mod.parse_issue_export(fh)
        linked = ingest_mod.link_commits_to_issues(commits, issue_list)
        kb = build_store(commits, issue_list, linked.links, out)
    except (MsrbotError, OSError, ValueError) as exc:
        _fail(str(exc))
    click.echo(f"commits: {len(kb.commits)}")
    click.echo(f"issues: {len(kb.issues)}")
    click.echo(f"links: {len(kb.links)}")
    click.echo(f"ignored mentions: {linked.ignored_mentions}")
    click.echo(f"store written to {out}")


@main.command()
@click.option("--kb", type=click.Path(exists=True), required=True)
@click.option("--no-report-date-filter", "no_filter", is_flag=True, default=False)
def mine(kb: str, no_filter: bool) -> None:
    """Mine fixing and fix-inducing commits and store them back."""
    try:
        store = KnowledgeBase.load(kb)
        mined = szz.mine(store, filter_by_report_date=not no_filter)
        store.attach_mined(mined)
        store.save(kb)
    except (MsrbotError, OSError) as exc:
        _fail(str(exc))
    click.echo(f"fixing commits: {len(mined.fixes)}")
    click.echo(f"inducing records: {len(mined.inducing)}")
    click.echo(f"report-date filter: {'on' if mined.filter_report_date else 'off'}")
    if mined.inducing:
        click.echo(f"{'fix':<12} {'inducing':<12} {'issue':<12} files")
        for record in mined.inducing:
            files = ", ".join(path for path, _ in record.evidence_files)
            click.echo(
                f"{record.fix_commit[:10]:<12} {record.inducing_commit[:10]:<12} "
                f"{record.issue_key:<12} {files}"
            )


@main.command()
@service_flags
@click.option("--port", type=int, default=None, help="HTTP port.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path, kb, vectors, nlu, tau, log, fixed_now, port, host) -> None:
    """Run the HTTP chat service."""
    import uvicorn

    config = _config_from_flags(config_path, kb, vectors, nlu, tau, port, log, fixed_now)
    try:
        app = create_app(config)
    except (MsrbotError, OSError, ValueError) as exc:
        _fail(f"failed to load resources: {exc}")
    uvicorn.run(app, host=host, port=config.port)


@main.command()
@service_flags
def chat(config_path, kb, vectors, nlu, tau, log, fixed_now) -> None:
    """Interactive question loop over standard input/output."""
    config = _config_from_flags(config_path, kb, vectors, nlu, tau, None, log, fixed_now)
    _, orchestrator = _runtime_or_fail(config)
    click.echo("msrbot ready. Type a question, or 'exit' to quit.")
    while True:
        try:
            line = input("you> ")
        except EOFError:
            break
        text = line.strip()
        if not text:
            continue
        if text.lower() == "exit":
            break
        reply = orchestrator.handle(text)
        click.echo(reply.text)


@main.command()
@click.argument("text")
@service_flags
@click.option("--json", "as_json", is_flag=True, default=False)
def ask(text, config_path, kb, vectors, nlu, tau, log, fixed_now, as_json) -> None:
    """Answer one question and exit."""
    config = _config_from_flags(config_path, kb, vectors, nlu, tau, None, log, fixed_now)
    _, orchestrator = _runtime_or_fail(config)
    if not text.strip():
        _fail("text must be non-empty")
    reply = orchestrator.handle(text)
    if as_json:
        click.echo(json.dumps(reply_to_dict(reply), sort_keys=True, ensure_ascii=False))
    else:
        click.echo(reply.text)


@main.command("eval-ner")
@click.option("--dataset", type=click.Path(exists=True), default=None)
def eval_ner(dataset: str | None) -> None:
    """Score the entity recognizer on the labeled evaluation set."""
    path = Path(dataset) if dataset else data_path("ner_eval.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    report = evaluate_ner(data)
    click.echo(f"{'type':<14} {'tp':>4} {'fp':>4} {'fn':>4}")
    for name, (tp, fp, fn) in sorted(report.per_type.items()):
        click.echo(f"{name:<14} {tp:>4} {fp:>4} {fn:>4}")
    click.echo(f"precision: {report.precision:.3f}")
    click.echo(f"recall: {report.recall:.3f}")
    click.echo(f"f1: {report.f1:.3f}")


@main.command("eval-nlu")
@click.option("--vectors", type=click.Path(exists=True), default=None)
@click.option("--nlu", type=click.Path(exists=True), default=None)
@click.option("--heldout", type=click.Path(exists=True), default=None)
@click.option("--tau", type=float, default=None)
def eval_nlu(vectors, nlu, heldout, tau) -> None:
    """Score intent classification on the held-out paraphrase set."""
    table = load_vectors(Path(vectors) if vectors else data_path("vectors.txt"))
    training = load_training(Path(nlu) if nlu else data_path("nlu_training.yaml"), table)
    held = load_heldout(Path(heldout) if heldout else data_path("nlu_heldout.yaml"))
    kwargs = {"tau": tau} if tau is not None else {}
    report = evaluate_nlu(held, table, training, **kwargs)
    click.echo(f"{'intent':<10} {'correct':>8} {'total':>6}")
    for intent in sorted(report.per_intent):
        correct, total = report.per_intent[intent]
        click.echo(f"{intent:<10} {correct:>8} {total:>6}")
    confused = {pair: n for pair, n in report.confusion.items() if pair[0] != pair[1]}
    if confused:
        click.echo("confusions (gold -> predicted):")
        for (gold, pred), n in sorted(confused.items()):
            click.echo(f"  {gold} -> {pred}: {n}")
    click.echo(f"accuracy: {report.accuracy:.3f} ({report.correct}/{report.total})")


def _parse_day(value: str, flag: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError:
        _fail(f"{flag} must be an ISO date (YYYY-MM-DD), got {value!r}")


def _range_from_flags(start: str | None, end: str | None) -> DateRange:
    if not start or not end:
        _fail("this query needs --start and --end (ISO dates)")
    return DateRange(_parse_day(start, "--start"), _parse_day(end, "--end"))


@main.command()
@click.argument("qname", type=click.Choice([f"q{i}" for i in range(1, 16)]))
@click.option("--kb", type=click.Path(exists=True), required=True)
@click.option("--issue", default=None, help="Issue key (q1).")
@click.option("--file", "file_", default=None, help="File name (q2, q4, q8, q9, q13).")
@click.option("--commit", default=None, help="Commit hash or unique prefix (q5).")
@click.option("--start", default=None, help="Range start, ISO date (q6, q7, q11, q15).")
@click.option("--end", default=None, help="Range end, ISO date (q6, q7, q11, q15).")
@click.option("--kind", type=click.Choice(["buggy", "fixing"]), default=None, help="q11.")
@click.option("--status", default=None, help="Issue status (q12).")
@click.option("--priority", default=None, help="Issue priority (q12).")
@click.option("--k", type=int, default=None, help="Result cap (q3, q8, q10, q14).")
@click.option("--json", "as_json", is_flag=True, default=False)
def query(qname, kb, issue, file_, commit, start, end, kind, status, priority, k, as_json):
    """Run one knowledge-base query directly."""
    try:
        engine = QueryEngine(KnowledgeBase.load(kb))
    except (MsrbotError, OSError) as exc:
        _fail(str(exc))

    def need(value, flag):
        if value is None:
            _fail(f"{qname} needs {flag}")
        return value

    try:
        if qname == "q1":
            result = engine.q1_fixing_commits(need(issue, "--issue"))
        elif qname == "q2":
            result = engine.q2_top_bug_fixers(need(file_, "--file"))
        elif qname == "q3":
            result = engine.q3_most_bug_introducing_files(k)
        elif qname == "q4":
            result = engine.q4_modifiers_of_file(need(file_, "--file"))
        elif qname == "q5":
            result = engine.q5_bugs_introduced_by_commit(need(commit, "--commit"))
        elif qname == "q6":
            result = engine.q6_commit_count(_range_from_flags(start, end))
        elif qname == "q7":
            result = engine.q7_commits_in_range(_range_from_flags(start, end))
        elif qname == "q8":
            result = engine.q8_latest_commits_to_file(need(file_, "--file"), k)
        elif qname == "q9":
            result = engine.q9_commits_for_file(need(file_, "--file"))
        elif qname == "q10":
            result = engine.q10_most_common_bugs(k)
        elif qname == "q11":
            result = engine.q11_buggy_or_fixing_commits(
                _range_from_flags(start, end), need(kind, "--kind").upper()
            )
        elif qname == "q12":
            if (status is None) == (priority is None):
                _fail("q12 needs exactly one of --status or --priority")
            facet = "status" if status is not None else "priority"
            result = engine.q12_issue_count(facet, status if status is not None else priority)
        elif qname == "q13":
            result = engine.q13_author_of_file(need(file_, "--file"))
        elif qname == "q14":
            result = engine.q14_most_unfixed_bugs(k)
        else:
            result = engine.q15_fix_inducing_percentage(_range_from_flags(start, end))
    except MsrbotError as exc:
        _fail(str(exc))

    if as_json:
        click.echo(json.dumps(result.to_dict(), sort_keys=True, ensure_ascii=False))
        return
    if result.scalar is not None:
        click.echo(result.scalar)
    elif result.empty_denominator:
        click.echo("no bug-fixing commits in that period")
    elif not result.rows:
        click.echo("(no rows)")
    else:
        for row in result.rows:
            click.echo(" | ".join(str(row[key]) for key in row))


if __name__ == "__main__":
    sys.exit(main())
