"""Shared fixtures plus the acceptance-criteria summary printed after a run.

Tests run against a tiny randomly initialized BERT saved to a temp directory,
so nothing is fetched from the network and the whole suite stays fast.
"""

from __future__ import annotations

import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizer


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


@pytest.fixture(scope="session")
def tiny_encoder(tmp_path_factory) -> str:
    """A 1-layer, 16-dim BERT with a 55-token vocab, saved to a local dir."""
    model_dir = tmp_path_factory.mktemp("tiny-encoder")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + [f"w{i}" for i in range(50)]
    vocab_file = model_dir / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    BertTokenizer(str(vocab_file)).save_pretrained(model_dir)

    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=16,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=512,
    )
    torch.manual_seed(20240817)
    BertModel(config).save_pretrained(model_dir)
    return str(model_dir)


def write_corpus(path, sentences) -> str:
    """Write token sequences in the corpus file format; return the path."""
    lines = [" ".join(sent) for sent in sentences]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
