import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# (label, passed, detail) for every acceptance criterion that ran
VERDICTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in VERDICTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
