"""Packaged example corpus.

Each fixture is a JSON document naming a CLI invocation, the exact
expectation, and a source tag: "reference" marks a value pinned from the
worked examples this library reproduces, "derived" marks a value computed
by an independent oracle in this repository.  The runner executes the
command in-process and compares the exit code and a JSON subset.
"""

from __future__ import annotations

import contextlib
import io
import json
import os
import tempfile


def default_dir() -> str:
    return os.path.join(os.path.dirname(__file__), "fixtures")


def _subset_matches(expected, actual) -> bool:
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return False
        return all(k in actual and _subset_matches(v, actual[k]) for k, v in expected.items())
    if isinstance(expected, list):
        return isinstance(actual, list) and len(expected) == len(actual) and all(
            _subset_matches(e, a) for e, a in zip(expected, actual)
        )
    return expected == actual


def run_fixture(doc: dict, base_dir: str) -> dict:
    from .cli import main

    argv = [a.replace("{dir}", base_dir) for a in doc["argv"]]
    expect = doc.get("expect", {})
    out_path = None
    if "json" in expect:
        fd, out_path = tempfile.mkstemp(suffix=".json")
        os.close(fd)
        argv += ["--out", out_path]
    with contextlib.redirect_stdout(io.StringIO()):
        code = main(argv)
    ok = True
    notes = []
    if "exit" in expect and code != expect["exit"]:
        ok = False
        notes.append(f"exit {code} != {expect['exit']}")
    if "json" in expect:
        try:
            with open(out_path) as fh:
                produced = json.load(fh)
        except Exception as exc:  # pragma: no cover - defensive
            produced = None
            ok = False
            notes.append(f"no JSON produced: {exc}")
        if produced is not None and not _subset_matches(expect["json"], produced):
            ok = False
            notes.append("JSON mismatch")
    if out_path:
        os.unlink(out_path)
    return {
        "name": doc["name"],
        "source": doc.get("source", "derived"),
        "note": doc.get("note", "") if ok else (doc.get("note", "") + " | " + "; ".join(notes)),
        "ok": ok,
    }


def run_corpus(directory: str) -> list:
    results = []
    for fname in sorted(os.listdir(directory)):
        if not fname.endswith(".fixture.json"):
            continue
        with open(os.path.join(directory, fname)) as fh:
            doc = json.load(fh)
        results.append(run_fixture(doc, directory))
    return results
