"""Shared fixtures plus the acceptance-criteria summary printed after a run."""

from __future__ import annotations

import random

import pytest

from genmetrics.corpus import Corpus


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, desc): test backs the numbered acceptance criterion",
    )


# criterion number -> [all backing tests passed so far, description]
_criteria: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num, desc = marker.args
    entry = _criteria.setdefault(num, [True, desc])
    # any failed or skipped phase of any backing test leaves the criterion unproven
    if report.failed or report.skipped:
        entry[0] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        passed, desc = _criteria[num]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict} - {desc}")


def random_sentences(rng: random.Random, max_sentences: int, vocab_size: int,
                     min_len: int = 1, max_len: int = 12):
    """Random token sequences over a small closed vocabulary."""
    vocab = [f"w{i}" for i in range(vocab_size)]
    count = rng.randint(1, max_sentences)
    return [
        tuple(rng.choice(vocab) for _ in range(rng.randint(min_len, max_len)))
        for _ in range(count)
    ]


@pytest.fixture
def rng():
    return random.Random(20240817)


def make_corpus(sentences) -> Corpus:
    return Corpus(sentences=tuple(tuple(s) for s in sentences))
