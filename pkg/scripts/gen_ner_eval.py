#!/usr/bin/env python3
"""Regenerate the labeled entity-recognition evaluation set.

Labels are authored here as (surface, type) pairs per utterance; character
spans are computed by string search so they never drift from the text. The
dataset carries its own gazetteer, commit hashes, and clock so scoring is
independent of any particular store.
"""

from __future__ import annotations

import json
from pathlib import Path

NOW = "2019-01-29T10:00:00Z"

GAZETTEER = [
    "src/Foo.java",
    "src/Bar.java",
    "src/Baz.java",
    "src/util/Helpers.java",
    "src/Utilities.java",
    "docs/README.md",
]

COMMIT_HASHES = [f"c{i}" * 20 for i in range(1, 7)]

# (utterance, [(surface, entity_type), ...])
CASES = [
    ("which commits fixed HHH-6574", [("HHH-6574", "ISSUE_KEY")]),
    ("who modified Utilities.java", [("Utilities.java", "FILE")]),
    (
        "show fixing commits last week and open bugs",
        [("fixing", "COMMIT_KIND"), ("last week", "DATE_RANGE"), ("open", "STATUS")],
    ),
    (
        "how many commits happened between 27/5/2018 - 31/5/2018",
        [("between 27/5/2018 - 31/5/2018", "DATE_RANGE")],
    ),
    ("what commits were submitted on May 27th 2018", [("May 27th 2018", "DATE_RANGE")]),
    ("who is the author of src/Foo.java", [("src/Foo.java", "FILE")]),
    (
        "which bugs were introduced by commit " + "c3" * 20,
        [("c3" * 20, "COMMIT_HASH")],
    ),
    ("how many bugs have the status in progress", [("in progress", "STATUS")]),
    ("how many bugs have the priority blocker", [("blocker", "PRIORITY")]),
    (
        "top 5 bug introducing files",
        [("5", "K"), ("bug introducing", "COMMIT_KIND")],
    ),
    (
        "what are the buggy commits that happened last month",
        [("buggy", "COMMIT_KIND"), ("last month", "DATE_RANGE")],
    ),
    ("how many commits were pushed yesterday", [("yesterday", "DATE_RANGE")]),
    ("what commits happened on 2018-06-01", [("2018-06-01", "DATE_RANGE")]),
    ("list the commits related to Bar.java", [("Bar.java", "FILE")]),
    (
        "who fixes the most bugs related to src/util/Helpers.java",
        [("src/util/Helpers.java", "FILE")],
    ),
    (
        "what is the percentage of bug fixing commits that introduced bugs in June 2018",
        [("bug fixing", "COMMIT_KIND"), ("June 2018", "DATE_RANGE")],
    ),
    (
        "which commits fixed HHH-1 and HHH-2",
        [("HHH-1", "ISSUE_KEY"), ("HHH-2", "ISSUE_KEY")],
    ),
    ("show me the commits from March 2019", [("March 2019", "DATE_RANGE")]),
    ("who changed Nope.java", [("Nope.java", "FILE")]),
    ("how many commits in the last 30 days", [("last 30 days", "DATE_RANGE")]),
    ("which developer has the most critical bugs", [("critical", "PRIORITY")]),
    (
        "what bugs did commit c4c4c4c4c4 introduce",
        [("c4c4c4c4c4", "COMMIT_HASH")],
    ),
    ("how many changes happened today", [("today", "DATE_RANGE")]),
    (
        "show commits between 2020-01-01 and 2020-01-31",
        [("between 2020-01-01 and 2020-01-31", "DATE_RANGE")],
    ),
    (
        "were any bugs closed last year",
        [("closed", "STATUS"), ("last year", "DATE_RANGE")],
    ),
    (
        "what are the 3 most buggy files",
        [("3", "K"), ("buggy", "COMMIT_KIND")],
    ),
    ("who modified foo.java recently", [("foo.java", "FILE")]),
    (
        "list resolved bugs with priority minor",
        [("resolved", "STATUS"), ("minor", "PRIORITY")],
    ),
    (
        "what commits were submitted from 1/2/2019 to 28/2/2019",
        [("from 1/2/2019 to 28/2/2019", "DATE_RANGE")],
    ),
    ("who created docs/README.md", [("docs/README.md", "FILE")]),
]


def main() -> None:
    cases = []
    for utterance, labels in CASES:
        entities = []
        cursor = 0
        for surface, entity_type in labels:
            start = utterance.index(surface, cursor)
            entities.append(
                {"type": entity_type, "span": [start, start + len(surface)], "surface": surface}
            )
            cursor = start + len(surface)
        cases.append({"utterance": utterance, "entities": entities})

    dataset = {
        "now": NOW,
        "gazetteer": GAZETTEER,
        "commit_hashes": COMMIT_HASHES,
        "cases": cases,
    }
    out_path = Path(__file__).resolve().parent.parent / "src" / "msrbot" / "data" / "ner_eval.json"
    out_path.write_text(json.dumps(dataset, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {len(cases)} labeled utterances to {out_path}")


if __name__ == "__main__":
    main()
