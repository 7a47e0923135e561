"""Date expressions: absolute days, calendar months, ranges, and relative forms.

All resolution happens against an injected "now" instant so relative phrases
("last week", "yesterday") are reproducible in tests. Ambiguous slash dates
are day-first (27/5/2018 = 27 May 2018).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone

from .errors import InvertedRange, UnparseableDate
from .model import civil_date

MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5, "june": 6,
    "july": 7, "august": 8, "september": 9, "october": 10, "november": 11,
    "december": 12,
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7, "aug": 8,
    "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
}

_MONTH = r"(?:january|february|march|april|may|june|july|august|september|october|november|december|jan|feb|mar|apr|jun|jul|aug|sept|sep|oct|nov|dec)\.?"
_ISO = r"\d{4}-\d{2}-\d{2}"
_DMY = r"\d{1,2}/\d{1,2}/\d{4}"
_MONTH_DAY = rf"{_MONTH}\s+\d{{1,2}}(?:st|nd|rd|th)?,?\s+\d{{4}}"
_MONTH_YEAR = rf"{_MONTH}\s+\d{{4}}"
_ATOM = rf"(?:{_ISO}|{_DMY}|{_MONTH_DAY}|{_MONTH_YEAR})"
_CONNECT = r"(?:\-|–|\bto\b|\band\b)"
_RELATIVE = r"(?:last\s+week|last\s+month|last\s+year|last\s+\d+\s+days?|today|yesterday)"
_RANGE = (
    rf"between\s+{_ATOM}\s*{_CONNECT}\s*{_ATOM}"
    rf"|from\s+{_ATOM}\s+to\s+{_ATOM}"
    rf"|{_ATOM}\s*(?:\-|–|\bto\b)\s*{_ATOM}"
)

EXPRESSION_RE = re.compile(rf"\b(?:{_RANGE}|{_RELATIVE}|{_ATOM})\b", re.IGNORECASE)
_FULL_RE = re.compile(rf"^(?:{_RANGE}|{_RELATIVE}|{_ATOM})$", re.IGNORECASE)
_ATOM_RE = re.compile(_ATOM, re.IGNORECASE)
_ISO_RE = re.compile(rf"^({_ISO})$")
_DMY_RE = re.compile(r"^(\d{1,2})/(\d{1,2})/(\d{4})$")
_MONTH_DAY_RE = re.compile(
    rf"^({_MONTH})\s+(\d{{1,2}})(?:st|nd|rd|th)?,?\s+(\d{{4}})$", re.IGNORECASE
)
_MONTH_YEAR_RE = re.compile(rf"^({_MONTH})\s+(\d{{4}})$", re.IGNORECASE)
_LAST_N_RE = re.compile(r"^last\s+(\d+)\s+days?$", re.IGNORECASE)


@dataclass(frozen=True, slots=True)
class DateRange:
    """Inclusive civil-day range in UTC."""

    start_day: date
    end_day: date

    def __post_init__(self):
        if self.start_day > self.end_day:
            raise InvertedRange(self.start_day, self.end_day)

    def contains(self, instant: datetime) -> bool:
        day = civil_date(instant)
        return self.start_day <= day <= self.end_day

    def to_dict(self) -> dict:
        return {"start": self.start_day.isoformat(), "end": self.end_day.isoformat()}


@dataclass(frozen=True)
class NowClock:
    """Injectable current instant; fixed for one utterance's processing."""

    now: datetime

    @classmethod
    def system(cls) -> NowClock:
        return cls(datetime.now(timezone.utc))

    @property
    def today(self) -> date:
        return civil_date(self.now)


def _month_number(name: str) -> int:
    return MONTHS[name.rstrip(".").lower()]


def _month_span(year: int, month: int) -> tuple[date, date]:
    first = date(year, month, 1)
    last = (date(year + 1, 1, 1) if month == 12 else date(year, month + 1, 1)) - timedelta(days=1)
    return first, last


def _resolve_atom(text: str, expression: str) -> tuple[date, date]:
    """An atom spans one day, or a whole month for Month-YYYY forms."""
    text = text.strip()
    try:
        if m := _ISO_RE.match(text):
            day = date.fromisoformat(m.group(1))
            return day, day
        if m := _DMY_RE.match(text):
            day = date(int(m.group(3)), int(m.group(2)), int(m.group(1)))
            return day, day
        if m := _MONTH_DAY_RE.match(text):
            day = date(int(m.group(3)), _month_number(m.group(1)), int(m.group(2)))
            return day, day
        if m := _MONTH_YEAR_RE.match(text):
            return _month_span(int(m.group(2)), _month_number(m.group(1)))
    except ValueError as exc:
        raise UnparseableDate(expression) from exc
    raise UnparseableDate(expression)


def _resolve_relative(text: str, clock: NowClock) -> DateRange:
    lowered = " ".join(text.lower().split())
    today = clock.today
    if lowered == "today":
        return DateRange(today, today)
    if lowered == "yesterday":
        day = today - timedelta(days=1)
        return DateRange(day, day)
    if lowered == "last week":
        monday = today - timedelta(days=today.weekday())
        return DateRange(monday - timedelta(days=7), monday - timedelta(days=1))
    if lowered == "last month":
        year, month = (today.year - 1, 12) if today.month == 1 else (today.year, today.month - 1)
        return DateRange(*_month_span(year, month))
    if lowered == "last year":
        return DateRange(date(today.year - 1, 1, 1), date(today.year - 1, 12, 31))
    if m := _LAST_N_RE.match(lowered):
        n = int(m.group(1))
        if n < 1:
            raise UnparseableDate(text)
        end = today - timedelta(days=1)
        return DateRange(end - timedelta(days=n - 1), end)
    raise UnparseableDate(text)


def resolve_date(expression: str, clock: NowClock) -> DateRange:
    """Resolve one full date expression to its inclusive civil-day range."""
    text = expression.strip()
    if not _FULL_RE.match(text):
        raise UnparseableDate(expression)
    if re.match(rf"^{_RELATIVE}$", text, re.IGNORECASE):
        return _resolve_relative(text, clock)
    atoms = _ATOM_RE.findall(text)
    if len(atoms) == 1:
        start, end = _resolve_atom(atoms[0], expression)
        return DateRange(start, end)
    if len(atoms) == 2:
        start, _ = _resolve_atom(atoms[0], expression)
        _, end = _resolve_atom(atoms[1], expression)
        return DateRange(start, end)
    raise UnparseableDate(expression)


def scan_date_expressions(utterance: str, clock: NowClock) -> list[tuple[int, int, DateRange]]:
    """Non-overlapping (start, end, range) spans for date expressions in a sentence.

    Candidates with impossible calendar values or inverted bounds are skipped;
    the caller treats them as unrecognized.
    """
    found: list[tuple[int, int, DateRange]] = []
    for match in EXPRESSION_RE.finditer(utterance):
        try:
            resolved = resolve_date(match.group(0), clock)
        except (UnparseableDate, InvertedRange):
            continue
        found.append((match.start(), match.end(), resolved))
    return found
