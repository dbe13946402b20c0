from __future__ import annotations

import random

import pytest

from fraglead.corpus import Corpus
from fraglead.smiles import tokenize

from fixtures import MIDAZOLAM, NELARABINE


@pytest.fixture
def nelarabine_tokens():
    return tokenize(NELARABINE)


@pytest.fixture
def midazolam_tokens():
    return tokenize(MIDAZOLAM)


@pytest.fixture
def tiny_corpus():
    return Corpus.from_pairs([("d1", "abc"), ("d2", "bcd"), ("d3", "abcbc")])


def make_fragment_corpus(directory, seed: int = 11, documents: int = 60) -> None:
    """Write a synthetic document directory whose bodies embed random
    substrings of the two reference molecules."""
    rng = random.Random(seed)
    sources = (NELARABINE, MIDAZOLAM)
    for i in range(documents):
        source = rng.choice(sources)
        start = rng.randrange(len(source))
        end = min(len(source), start + rng.randint(3, 24))
        noise_left = "".join(rng.choice("xyz .,") for _ in range(rng.randint(0, 12)))
        noise_right = "".join(rng.choice("xyz .,") for _ in range(rng.randint(0, 12)))
        (directory / f"doc{i:03}.txt").write_text(
            noise_left + source[start:end] + noise_right, encoding="utf-8"
        )


@pytest.fixture
def corpus_dir(tmp_path):
    docs = tmp_path / "docs"
    docs.mkdir()
    make_fragment_corpus(docs)
    return docs


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    reports = []
    for key in ("passed", "failed", "error"):
        reports.extend(terminalreporter.stats.get(key, []))
    acceptance = [
        r for r in reports
        if getattr(r, "when", None) == "call" and "test_acceptance" in r.nodeid
    ]
    if not acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for report in sorted(acceptance, key=lambda r: r.nodeid):
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        terminalreporter.write_line(f"{status}  {name}")
