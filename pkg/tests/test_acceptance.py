"""Release acceptance gate.

One test per criterion, in a fixed order. Run `pytest -v tests/test_acceptance.py`
to get one pass/fail line per criterion; each test also prints a `PASS:` line
with the criterion summary and the measured figure where one applies.
"""

from __future__ import annotations

import json
import random
import statistics
import time
from datetime import date

import numpy as np

import factory
import oracles
import test_dates
from conftest import full_hash
from msrbot.config import data_path
from msrbot.dates import DateRange, NowClock, resolve_date
from msrbot.dialogue import DialogueOrchestrator
from msrbot.model import parse_utc
from msrbot.ner import EntityRecognizer, evaluate_ner
from msrbot.nlu import (
    WordVectorTable,
    classify,
    cosine,
    embed,
    evaluate,
    load_heldout,
    load_training,
    load_vectors,
)
from msrbot.queries import QueryEngine

JAN = DateRange(date(2020, 1, 1), date(2020, 1, 31))
FEB = DateRange(date(2020, 2, 1), date(2020, 2, 29))
ALL = DateRange(date(2020, 1, 1), date(2020, 12, 31))
FILES = ("Foo.java", "Bar.java", "Baz.java")


def _pass(label: str) -> None:
    print(f"PASS: {label}")


def _hashes(result) -> list[str]:
    return [row["hash"] for row in result.rows]


def test_01_query_oracle_equivalence(engine, raw_commits, raw_issues):
    """All 15 query operations match independent brute-force oracles exactly."""
    started = time.perf_counter()
    rc, ri = raw_commits, raw_issues

    for key in ("HHH-1", "HHH-2", "HHH-3"):
        assert _hashes(engine.q1_fixing_commits(key)) == oracles.oracle_q1(rc, ri, key)
    for name in FILES:
        got = [(r["name"], r["count"]) for r in engine.q2_top_bug_fixers(name).rows]
        assert got == oracles.oracle_q2(rc, ri, name)
        assert [r["name"] for r in engine.q4_modifiers_of_file(name).rows] == \
            oracles.oracle_q4(rc, ri, name)
        assert _hashes(engine.q9_commits_for_file(name)) == oracles.oracle_q9(rc, ri, name)
        rows = engine.q13_author_of_file(name).rows
        assert (rows[0]["name"] if rows else None) == oracles.oracle_q13(rc, ri, name)
        for k in (1, 3, 10):
            assert _hashes(engine.q8_latest_commits_to_file(name, k)) == \
                oracles.oracle_q8(rc, ri, name, k)
    for k in (1, 2, 5):
        got = [(r["path"], r["count"]) for r in engine.q3_most_bug_introducing_files(k).rows]
        assert got == oracles.oracle_q3(rc, ri, k)
        keys = [r["key"] for r in engine.q10_most_common_bugs(k).rows]
        assert keys == oracles.oracle_q10(rc, ri, k)
        got = [(r["name"], r["count"]) for r in engine.q14_most_unfixed_bugs(k).rows]
        assert got == oracles.oracle_q14(rc, ri, k)
    for n in range(1, 7):
        got = [r["key"] for r in engine.q5_bugs_introduced_by_commit(full_hash(n)).rows]
        assert got == oracles.oracle_q5(rc, ri, full_hash(n))
    for window in (JAN, FEB, ALL):
        span = (window.start_day, window.end_day)
        assert engine.q6_commit_count(window).scalar == oracles.oracle_q6(rc, ri, *span)
        assert _hashes(engine.q7_commits_in_range(window)) == oracles.oracle_q7(rc, ri, *span)
        for kind in ("BUGGY", "FIXING"):
            assert _hashes(engine.q11_buggy_or_fixing_commits(window, kind)) == \
                oracles.oracle_q11(rc, ri, *span, kind)
        result = engine.q15_fix_inducing_percentage(window)
        want = oracles.oracle_q15(rc, ri, *span)
        assert result.scalar == want if want is not None else result.empty_denominator
    for facet, values in (
        ("status", ("open", "in progress", "resolved", "closed", "reopened")),
        ("priority", ("blocker", "critical", "major", "minor", "trivial")),
    ):
        for value in values:
            assert engine.q12_issue_count(facet, value).scalar == \
                oracles.oracle_q12(rc, ri, facet, value)

    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    _pass(f"query-oracle equivalence, 15 operations exact ({elapsed:.2f}s < 5s)")


def test_02_szz_property_suite(tmp_path):
    """Mined fix-inducing records match two oracles on 50 random histories."""
    started = time.perf_counter()
    from test_szz import _expected_from_content, _mined_as_set
    from msrbot import szz

    for seed in range(50):
        history = factory.generate_history(random.Random(seed))
        for filter_on in (True, False):
            kb = factory.build_kb(
                tmp_path / f"h{seed}_{filter_on}", history.commits, history.issues,
                filter_by_report_date=filter_on,
            )
            got = _mined_as_set(kb.mined)
            assert got == oracles.oracle_inducing(
                history.commits, history.issues, filter_by_report_date=filter_on
            ), f"seed {seed} filter={filter_on}"
            assert got == _expected_from_content(
                history, history.commits, history.issues, filter_on
            ), f"seed {seed} filter={filter_on}"
        # invariants on the same instance
        kb = factory.build_kb(tmp_path / f"inv{seed}", history.commits, history.issues)
        unfiltered = szz.mine(kb, filter_by_report_date=False)
        assert set(_mined_as_set(kb.mined)) <= set(_mined_as_set(unfiltered))
        for inducing, fix, _issue in _mined_as_set(unfiltered):
            assert kb.commits[inducing].committer_time < kb.commits[fix].committer_time

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    _pass(f"fix-inducing mining matches both oracles on 50 histories ({elapsed:.1f}s < 30s)")


def test_03_relative_date_fidelity():
    """Pinned relative/date-range forms plus a 1000-expression round trip."""
    tuesday = test_dates.TUESDAY
    last_week = resolve_date("last week", tuesday)
    assert (last_week.start_day, last_week.end_day) == (date(2019, 1, 21), date(2019, 1, 27))
    spelled = resolve_date("21/01/2019 – 27/01/2019", tuesday)
    assert (spelled.start_day, spelled.end_day) == (last_week.start_day, last_week.end_day)
    may = resolve_date("between 27/5/2018 - 31/5/2018", tuesday)
    assert (may.start_day, may.end_day) == (date(2018, 5, 27), date(2018, 5, 31))

    rng = random.Random(424242)
    for _ in range(1000):
        roll = rng.random()
        if roll < 0.35:
            text, clock, start, end = test_dates._relative_case(rng)
        elif roll < 0.70:
            text, start, end = test_dates._range_case(rng)
            clock = tuesday
        else:
            text, start, end = test_dates._atom(rng, test_dates._random_day(rng))
            clock = tuesday
        resolved = resolve_date(text, clock)
        assert (resolved.start_day, resolved.end_day) == (start, end), text
    _pass("date grammar: pinned forms exact, 1000 generated expressions round-trip")


def test_04_nlu_heldout_accuracy():
    """Top-1 intent accuracy on the held-out paraphrases is at least 90%."""
    table = load_vectors(data_path("vectors.txt"))
    training = load_training(data_path("nlu_training.yaml"), table)
    heldout = load_heldout(data_path("nlu_heldout.yaml"))

    assert len(heldout) == 17
    assert all(len(texts) >= 3 for texts in heldout.values())
    training_texts = {t.text.lower() for t in training}
    for texts in heldout.values():
        assert not training_texts & {t.lower() for t in texts}

    report = evaluate(heldout, table, training)
    assert report.total >= 51
    assert report.accuracy >= 0.90
    _pass(f"intent accuracy {report.accuracy:.3f} >= 0.90 "
          f"({report.correct}/{report.total} held-out paraphrases)")


def test_05_ner_exact_span_f1():
    """Exact-span F1 on the labeled utterance set is at least 0.90."""
    dataset = json.loads(data_path("ner_eval.json").read_text(encoding="utf-8"))
    assert len(dataset["cases"]) >= 30
    surfaces = {
        entity["surface"]
        for case in dataset["cases"]
        for entity in case["entities"]
    }
    assert "May 27th 2018" in surfaces  # ordinal month-day form must be covered
    report = evaluate_ner(dataset)
    assert report.f1 >= 0.90
    _pass(f"entity recognition F1 {report.f1:.3f} >= 0.90 "
          f"on {len(dataset['cases'])} labeled utterances")


def test_06_dialogue_golden_strings(kb, tmp_path):
    """Contractual reply wording is byte-exact."""
    table = load_vectors(data_path("vectors.txt"))
    training = load_training(data_path("nlu_training.yaml"), table)

    def make_bot(store, now):
        return DialogueOrchestrator(
            engine=QueryEngine(store),
            recognizer=EntityRecognizer.for_store(store),
            table=table,
            training=training,
            clock=NowClock(parse_utc(now)),
        )

    bot = make_bot(kb, "2020-03-15T12:00:00Z")
    assert bot.handle("zzz qqq").text == (
        "Sorry, I did not understand your question, "
        "could you please ask a different question?"
    )
    assert bot.handle("who modified the file?").text == (
        "Could you please specify the file name?"
    )
    assert bot.handle("how many commits were pushed to the repository?").text == (
        "Could you please specify the date?"
    )
    assert bot.handle("which commits fixed the bug?").text == (
        "Could you please specify the issue key?"
    )

    commits = []
    day_cycle = [21, 22, 22, 23, 23, 24, 24, 25, 25, 26, 26, 26, 27, 27, 21, 22]
    for i, day in enumerate(day_cycle, start=1):
        commits.append(factory.commit_record(
            f"{i:040x}", f"2019-01-{day:02d}T{8 + i % 10:02d}:00:00Z",
            parents=[f"{i - 1:040x}"] if i > 1 else [],
            changes=[factory.change(f"f{i}.txt", "A", factory.added_hunks(1))],
        ))
    commits.insert(0, factory.commit_record(
        "e" * 40, "2019-01-19T09:00:00Z",
        changes=[factory.change("early.txt", "A", factory.added_hunks(1))],
    ))
    commits.append(factory.commit_record(
        "f" * 40, "2019-01-28T09:00:00Z", parents=[f"{16:040x}"],
        changes=[factory.change("late.txt", "A", factory.added_hunks(1))],
    ))
    week_bot = make_bot(factory.build_kb(tmp_path, commits, []), "2019-01-29T10:00:00Z")
    reply = week_bot.handle("How many commits happened in the last week?")
    assert reply.text == (
        "There is a total of 16 commits that were pushed to the repository in the last week"
    )
    _pass("golden dialogue strings byte-exact (fallback, prompts, 16-commit week)")


def test_07_embedding_properties():
    """Sentence-sum and cosine invariants hold to 1e-9; scaling keeps the argmax."""
    table = load_vectors(data_path("vectors.txt"))
    training = load_training(data_path("nlu_training.yaml"), table)
    words = sorted(table.vectors)
    rng = random.Random(20260814)

    for _ in range(200):
        first = rng.choices(words, k=rng.randint(1, 6))
        second = rng.choices(words, k=rng.randint(1, 6))
        joined = embed(first + second, table)
        split_sum = embed(first, table).components + embed(second, table).components
        assert np.max(np.abs(joined.components - split_sum)) <= 1e-9

        shuffled = first[:]
        rng.shuffle(shuffled)
        delta = embed(shuffled, table).components - embed(first, table).components
        assert np.max(np.abs(delta)) <= 1e-9

        one, other = embed(first, table), embed(second, table)
        if one.is_zero or other.is_zero:
            continue
        factor = 2.0 ** rng.uniform(-8, 8)
        scaled = embed(first, table)
        scaled = type(scaled)(scaled.components * factor, scaled.contributing_tokens)
        assert abs(cosine(scaled, other) - cosine(one, other)) <= 1e-9

    probes = (
        "which commits fixed HHH-1",
        "who modified Foo.java",
        "how many commits were pushed last week",
        "what are the most common bugs",
        "hello there",
    )
    for exponent in (-6, -2, 3, 7):
        factor = 2.0 ** exponent
        scaled_table = WordVectorTable(
            dimension=table.dimension,
            vectors={w: v * factor for w, v in table.vectors.items()},
        )
        scaled_training = load_training(data_path("nlu_training.yaml"), scaled_table)
        for text in probes:
            base = classify(text, [], table, training)
            scaled = classify(text, [], scaled_table, scaled_training)
            assert type(base) is type(scaled)
            if hasattr(base, "intent_id"):
                assert scaled.intent_id == base.intent_id
            assert scaled.score == base.score  # power-of-two scaling is bit-exact
    _pass("embedding sum/cosine properties at 1e-9; argmax invariant under scaling")


def test_08_chat_latency(client):
    """Median /chat round trip over 100 scripted questions stays under 1 s."""
    questions = [
        "Which commits fixed HHH-1?",
        "Who fixes the most bugs related to Foo.java?",
        "What are the most bug introducing files?",
        "Who modified Bar.java?",
        "Which bugs were introduced by commit c2c2c2c?",
        "How many commits were pushed last month?",
        "What commits were submitted between 2020-01-01 and 2020-01-31?",
        "What are the latest commits to Foo.java?",
        "Which commits touched Baz.java?",
        "What are the most common bugs?",
        "What buggy commits happened in January 2020?",
        "How many bugs have the status open?",
        "Who is the author of Baz.java?",
        "Who has the most unfixed bugs?",
        "What percentage of commits last year were fix-inducing?",
        "Hello!",
        "What can you do?",
        "which commits fixed HHH-3",
        "who modified foo.java",
        "how many commits were pushed yesterday",
    ]
    samples = []
    for i in range(100):
        text = questions[i % len(questions)]
        begun = time.perf_counter()
        response = client.post("/chat", json={"text": text})
        samples.append(time.perf_counter() - begun)
        assert response.status_code == 200
    median = statistics.median(samples)
    assert median < 1.0
    _pass(f"median /chat latency {median * 1000:.1f}ms < 1s over 100 questions")


def test_09_runs_without_chat_ui():
    """Nothing in the package or this suite imports or reads the web UI."""
    from pathlib import Path

    root = Path(__file__).resolve().parent.parent
    marker = "front" + "end"  # split so this file does not match itself
    offenders = []
    for folder in ("src", "tests"):
        for path in (root / folder).rglob("*.py"):
            if marker in path.read_text(encoding="utf-8"):
                offenders.append(str(path))
    assert not offenders, offenders
    _pass("python suite has no dependency on the chat UI")
