from pathlib import Path

import pytest

HERE = Path(__file__).parent
CORPUS = HERE / "corpus"
GOLDEN = HERE / "golden"

_acceptance: dict[int, tuple[str, list[bool]]] = {}


def pytest_addoption(parser):
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="rewrite the golden files from the current compiler output",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture
def update_golden(request):
    return request.config.getoption("--update-golden")


def corpus_files():
    return sorted(CORPUS.glob("*.purl"))


def read_corpus(stem_prefix: str) -> str:
    (path,) = [p for p in corpus_files() if p.stem.startswith(stem_prefix)]
    return path.read_text(encoding="utf-8")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    n, title = mark.args
    _acceptance.setdefault(n, (title, []))[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, results = _acceptance[n]
        verdict = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}")
