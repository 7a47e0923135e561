"""Pipeline wiring: entities + intent -> required-entity check -> query -> reply.

Reply templates live here. Two strings are contractual and must never be
reworded: the fallback message and the missing-entity prompt.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

from .dates import DateRange, NowClock
from .errors import (
    AmbiguousHashPrefix,
    InvalidK,
    TemplateMismatch,
    UnknownCommit,
    UnknownFile,
    UnknownIssue,
)
from .ner import Entity, EntityRecognizer, EntityType
from .nlu import (
    DEFAULT_THRESHOLD,
    Fallback,
    IntentPrediction,
    TrainingUtterance,
    WordVectorTable,
    classify,
)
from .queries import QueryEngine, QueryResult

FALLBACK_TEXT = (
    "Sorry, I did not understand your question, could you please ask a different question?"
)
MISSING_ENTITY_TEXT = "Could you please specify the {name}?"

GREETING_TEXT = "Hello! I can answer questions about this repository's commits, files, and bugs."
BOT_INFO_TEXT = (
    "I am a repository assistant. I answer questions about commits, files, bugs, "
    "and the developers who worked on them. Try the supported question list for examples."
)

# Human names used in the missing-entity prompt, keyed by entity type.
_ENTITY_NAMES = {
    EntityType.FILE: "file name",
    EntityType.ISSUE_KEY: "issue key",
    EntityType.COMMIT_HASH: "commit hash",
    EntityType.DATE_RANGE: "date",
    EntityType.COMMIT_KIND: "commit kind",
    EntityType.STATUS: "status",
    EntityType.PRIORITY: "priority",
}


@dataclass(frozen=True)
class IntentSpec:
    intent_id: str
    required: tuple[EntityType, ...]
    optional_k: bool
    example: str


INTENT_SPECS: dict[str, IntentSpec] = {
    spec.intent_id: spec
    for spec in (
        IntentSpec("Q1", (EntityType.ISSUE_KEY,), False, "Which commits fixed HHH-1?"),
        IntentSpec("Q2", (EntityType.FILE,), False, "Who fixes the most bugs related to Foo.java?"),
        IntentSpec("Q3", (), True, "What are the most bug introducing files?"),
        IntentSpec("Q4", (EntityType.FILE,), False, "Who modified Foo.java?"),
        IntentSpec("Q5", (EntityType.COMMIT_HASH,), False, "Which bugs were introduced by commit abc1234?"),
        IntentSpec("Q6", (EntityType.DATE_RANGE,), False, "How many commits happened last week?"),
        IntentSpec("Q7", (EntityType.DATE_RANGE,), False, "What commits were submitted on 2020-01-05?"),
        IntentSpec("Q8", (EntityType.FILE,), True, "What are the latest commits to Foo.java?"),
        IntentSpec("Q9", (EntityType.FILE,), False, "Which commits are related to Foo.java?"),
        IntentSpec("Q10", (), True, "What are the most common bugs?"),
        IntentSpec("Q11", (EntityType.DATE_RANGE, EntityType.COMMIT_KIND), False, "What are the buggy commits that happened last month?"),
        IntentSpec("Q12", (), False, "How many bugs have the status open?"),  # status|priority checked separately
        IntentSpec("Q13", (EntityType.FILE,), False, "Who is the author of Foo.java?"),
        IntentSpec("Q14", (), True, "Which developers have the most unfixed bugs?"),
        IntentSpec("Q15", (EntityType.DATE_RANGE,), False, "What percentage of bug fixing commits introduced bugs last year?"),
        IntentSpec("GREETING", (), False, "Hello!"),
        IntentSpec("BOT_INFO", (), False, "What can you do?"),
    )
}


@dataclass(frozen=True)
class BotReply:
    text: str
    payload: QueryResult | None
    intent_id: str
    confidence: float
    elapsed_ms: float
    entities: tuple[Entity, ...] = ()


def _plural(n: int, noun: str) -> str:
    return f"{n} {noun}" if n == 1 else f"{n} {noun}s"


def _commit_line(row: dict) -> str:
    return f"{row['hash']} — {row['author_name']} — {row['date']} — {row['message']}"


def _issue_line(row: dict) -> str:
    return (
        f"{row['key']} (status {row['status']}, priority {row['priority']}, "
        f"{_plural(row['watchers'], 'watcher')})"
    )


def period_phrase(surface: str | None, range_: DateRange) -> str:
    """Echo the user's date wording; fall back to ISO dates when absent."""
    if surface:
        text = " ".join(surface.split())
        low = text.lower()
        if low.startswith("last "):
            return f"in the {text}"
        if low in ("today", "yesterday"):
            return text
        if low.startswith(("between ", "from ", "since ")):
            return text
        if range_.start_day == range_.end_day:
            return f"on {text}"
        return f"in {text}"
    if range_.start_day == range_.end_day:
        return f"on {range_.start_day.isoformat()}"
    return f"between {range_.start_day.isoformat()} and {range_.end_day.isoformat()}"


def render(result: QueryResult, template_id: str, context: dict) -> str:
    """Deterministic fill-in of the reply template for one query result."""
    if template_id != result.kind:
        raise TemplateMismatch(template_id, result.kind)
    rows = result.rows
    if template_id == "q1":
        key = context["key"]
        if not rows:
            return f"No fixing commits were found for {key}."
        lines = "\n".join(_commit_line(r) for r in rows)
        return f"The following commits fixed {key}:\n{lines}"
    if template_id == "q2":
        file = context["file"]
        if not rows:
            return f"No bug fixes were found for {file}."
        lines = "\n".join(f"- {r['name']} ({_plural(r['count'], 'bug')})" for r in rows)
        return f"The following developers fixed the most bugs related to {file}:\n{lines}"
    if template_id == "q3":
        if not rows:
            return "No bug-introducing files were found."
        lines = "\n".join(
            f"- {r['path']} ({_plural(r['count'], 'bug-introducing commit')})" for r in rows
        )
        return f"The most bug-introducing files are:\n{lines}"
    if template_id == "q4":
        file = context["file"]
        if not rows:
            return f"No modifications were found for {file}."
        names = ", ".join(r["name"] for r in rows)
        return f"The following developers modified {file}: {names}."
    if template_id == "q5":
        commit = context["hash"]
        if not rows:
            return f"No bugs were introduced by commit {commit}."
        lines = "\n".join(f"- {_issue_line(r)}" for r in rows)
        return f"The following bugs were introduced by commit {commit}:\n{lines}"
    if template_id == "q6":
        period = context["period"]
        # Contractual wording; no trailing period.
        return (
            f"There is a total of {result.scalar} commits that were pushed "
            f"to the repository {period}"
        )
    if template_id == "q7":
        period = context["period"]
        if not rows:
            return f"No commits were found {period}."
        lines = "\n".join(_commit_line(r) for r in rows)
        return f"The following commits were pushed to the repository {period}:\n{lines}"
    if template_id == "q8":
        file = context["file"]
        if not rows:
            return f"No commits were found for {file}."
        lines = "\n".join(_commit_line(r) for r in rows)
        return f"The latest commits to {file} are:\n{lines}"
    if template_id == "q9":
        file = context["file"]
        if not rows:
            return f"No commits were found for {file}."
        lines = "\n".join(_commit_line(r) for r in rows)
        return f"The following commits are related to {file}:\n{lines}"
    if template_id == "q10":
        if not rows:
            return "No bugs were found."
        lines = "\n".join(f"- {_issue_line(r)}" for r in rows)
        return f"The most common bugs are:\n{lines}"
    if template_id == "q11":
        period = context["period"]
        kind_word = context["kind_word"]
        if not rows:
            return f"No {kind_word} commits were found {period}."
        lines = "\n".join(_commit_line(r) for r in rows)
        return f"The following {kind_word} commits happened {period}:\n{lines}"
    if template_id == "q12":
        facet = context["facet"]
        value = context["value"]
        return f"There is a total of {result.scalar} bugs with the {facet} {value}."
    if template_id == "q13":
        file = context["file"]
        if not rows:
            return f"No author information was found for {file}."
        return f"The author of {file} is {rows[0]['name']}."
    if template_id == "q14":
        if not rows:
            return "There are no unfixed bugs."
        lines = "\n".join(f"- {r['name']} ({_plural(r['count'], 'unfixed bug')})" for r in rows)
        return f"The developers with the most unfixed bugs are:\n{lines}"
    if template_id == "q15":
        if result.empty_denominator:
            return "There were no bug-fixing commits in that period."
        period = context["period"]
        return f"A total of {result.scalar:.1f}% of the bug-fixing commits {period} introduced bugs."
    raise TemplateMismatch(template_id, result.kind)


class DialogueOrchestrator:
    def __init__(
        self,
        engine: QueryEngine,
        recognizer: EntityRecognizer,
        table: WordVectorTable,
        training: Sequence[TrainingUtterance],
        tau: float = DEFAULT_THRESHOLD,
        clock: NowClock | None = None,
        log_path: str | None = None,
    ):
        self.engine = engine
        self.recognizer = recognizer
        self.table = table
        self.training = tuple(training)
        self.tau = tau
        self.clock = clock
        self.log_path = log_path
        self._log_lock = threading.Lock()

    def handle(self, utterance: str, clock: NowClock | None = None) -> BotReply:
        started = time.perf_counter()
        active_clock = clock or self.clock or NowClock.system()
        reply = self._handle_inner(utterance, active_clock)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        reply = BotReply(
            text=reply.text,
            payload=reply.payload,
            intent_id=reply.intent_id,
            confidence=reply.confidence,
            elapsed_ms=elapsed_ms,
            entities=reply.entities,
        )
        self._log(utterance, reply)
        return reply

    def _handle_inner(self, utterance: str, clock: NowClock) -> BotReply:
        try:
            entities = tuple(self.recognizer.recognize(utterance, clock))
        except AmbiguousHashPrefix as exc:
            matches = ", ".join(exc.matches)
            text = (
                f"The commit hash {exc.prefix} is ambiguous; it matches {matches}. "
                "Please use more characters."
            )
            return BotReply(text, None, "error", 0.0, 0.0, ())

        outcome = classify(utterance, entities, self.table, self.training, self.tau)
        if isinstance(outcome, Fallback):
            return BotReply(FALLBACK_TEXT, None, "fallback", outcome.score, 0.0, entities)

        intent_id, confidence = outcome.intent_id, outcome.score
        if intent_id == "GREETING":
            return BotReply(GREETING_TEXT, None, intent_id, confidence, 0.0, entities)
        if intent_id == "BOT_INFO":
            return BotReply(BOT_INFO_TEXT, None, intent_id, confidence, 0.0, entities)

        spec = INTENT_SPECS[intent_id]
        by_type: dict[EntityType, list[Entity]] = {}
        for entity in entities:
            by_type.setdefault(entity.entity_type, []).append(entity)

        if intent_id == "Q12":
            if EntityType.STATUS not in by_type and EntityType.PRIORITY not in by_type:
                text = MISSING_ENTITY_TEXT.format(name="status or priority")
                return BotReply(text, None, intent_id, confidence, 0.0, entities)
        else:
            for required in spec.required:
                if required not in by_type:
                    text = MISSING_ENTITY_TEXT.format(name=_ENTITY_NAMES[required])
                    return BotReply(text, None, intent_id, confidence, 0.0, entities)

        try:
            result, context, notes = self._execute(intent_id, by_type)
            text = render(result, result.kind, context)
        except UnknownFile as exc:
            text = f"Sorry, I could not find a file named {exc.name} in the repository."
            return BotReply(text, None, intent_id, confidence, 0.0, entities)
        except UnknownIssue as exc:
            text = f"Sorry, I could not find an issue with key {exc.key}."
            return BotReply(text, None, intent_id, confidence, 0.0, entities)
        except UnknownCommit as exc:
            text = f"Sorry, I could not find a commit with hash {exc.hash}."
            return BotReply(text, None, intent_id, confidence, 0.0, entities)
        except AmbiguousHashPrefix as exc:
            matches = ", ".join(exc.matches)
            text = (
                f"The commit hash {exc.prefix} is ambiguous; it matches {matches}. "
                "Please use more characters."
            )
            return BotReply(text, None, intent_id, confidence, 0.0, entities)
        except InvalidK:
            text = "The number of results must be at least 1."
            return BotReply(text, None, intent_id, confidence, 0.0, entities)

        if len(result.matched_paths) > 1:
            notes.append(f"Matched files: {', '.join(result.matched_paths)}.")
        if notes:
            text = text + " " + " ".join(notes)
        return BotReply(text, result, intent_id, confidence, 0.0, entities)

    def _execute(
        self, intent_id: str, by_type: dict[EntityType, list[Entity]]
    ) -> tuple[QueryResult, dict, list[str]]:
        notes: list[str] = []
        engine = self.engine

        def first(etype: EntityType) -> Entity:
            return by_type[etype][0]

        def k_value() -> int | None:
            return by_type[EntityType.K][0].value if EntityType.K in by_type else None

        def date_args() -> tuple[DateRange, str]:
            spans = by_type[EntityType.DATE_RANGE]
            if len(spans) > 1:
                notes.append("Note: multiple dates were given; the first one was used.")
            return spans[0].value, period_phrase(spans[0].surface, spans[0].value)

        if intent_id == "Q1":
            key = first(EntityType.ISSUE_KEY).value
            return engine.q1_fixing_commits(key), {"key": key}, notes
        if intent_id == "Q2":
            file = first(EntityType.FILE).surface
            return engine.q2_top_bug_fixers(file), {"file": file}, notes
        if intent_id == "Q3":
            return engine.q3_most_bug_introducing_files(k_value()), {}, notes
        if intent_id == "Q4":
            file = first(EntityType.FILE).surface
            return engine.q4_modifiers_of_file(file), {"file": file}, notes
        if intent_id == "Q5":
            commit = first(EntityType.COMMIT_HASH).value
            return engine.q5_bugs_introduced_by_commit(commit), {"hash": commit}, notes
        if intent_id == "Q6":
            range_, period = date_args()
            return engine.q6_commit_count(range_), {"period": period}, notes
        if intent_id == "Q7":
            range_, period = date_args()
            return engine.q7_commits_in_range(range_), {"period": period}, notes
        if intent_id == "Q8":
            file = first(EntityType.FILE).surface
            return engine.q8_latest_commits_to_file(file, k_value()), {"file": file}, notes
        if intent_id == "Q9":
            file = first(EntityType.FILE).surface
            return engine.q9_commits_for_file(file), {"file": file}, notes
        if intent_id == "Q10":
            return engine.q10_most_common_bugs(k_value()), {}, notes
        if intent_id == "Q11":
            range_, period = date_args()
            kind = first(EntityType.COMMIT_KIND).value
            kind_word = "bug-fixing" if kind == "FIXING" else "bug-introducing"
            context = {"period": period, "kind_word": kind_word}
            return engine.q11_buggy_or_fixing_commits(range_, kind), context, notes
        if intent_id == "Q12":
            if EntityType.STATUS in by_type:
                facet, value = "status", first(EntityType.STATUS).value
                if EntityType.PRIORITY in by_type:
                    notes.append(
                        "Note: both a status and a priority were given; the status was used."
                    )
            else:
                facet, value = "priority", first(EntityType.PRIORITY).value
            context = {"facet": facet, "value": value}
            return engine.q12_issue_count(facet, value), context, notes
        if intent_id == "Q13":
            file = first(EntityType.FILE).surface
            return engine.q13_author_of_file(file), {"file": file}, notes
        if intent_id == "Q14":
            return engine.q14_most_unfixed_bugs(k_value()), {}, notes
        if intent_id == "Q15":
            range_, period = date_args()
            return engine.q15_fix_inducing_percentage(range_), {"period": period}, notes
        raise TemplateMismatch(intent_id, "unbound intent")

    def _log(self, utterance: str, reply: BotReply) -> None:
        if not self.log_path:
            return
        record = {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "utterance": utterance,
            "entities": [e.to_dict() for e in reply.entities],
            "intent": reply.intent_id,
            "confidence": reply.confidence,
            "reply": reply.text,
            "elapsed_ms": reply.elapsed_ms,
        }
        line = json.dumps(record, sort_keys=True, ensure_ascii=False)
        with self._log_lock:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


def intent_examples() -> list[dict]:
    """Supported intents with one example phrasing each, for /intents and docs."""
    return [
        {"intent_id": spec.intent_id, "example": spec.example}
        for spec in INTENT_SPECS.values()
    ]
