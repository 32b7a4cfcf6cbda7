import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
sys.path.insert(0, str(Path(__file__).parent))

_acceptance: list[tuple[str, str]] = []


@pytest.fixture
def space_doc_path():
    return DATA / "space_exploration.json"


@pytest.fixture
def space_doc(space_doc_path):
    from rhetsum import parse_document_spec

    return parse_document_spec(space_doc_path.read_bytes())


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and (
        report.when == "call" or (report.when == "setup" and report.failed)
    ):
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        if hasattr(item, "callspec"):
            title += f" [{item.callspec.id}]"
        _acceptance.append((title, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for title, verdict in _acceptance:
        terminalreporter.write_line(f"[{verdict}] {title}")
