import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, seconds, limit, title = ACCEPTANCE[num]
        terminalreporter.write_line(
            f"criterion {num}: {'PASS' if ok else 'FAIL'}  {seconds:7.3f}s (limit {limit}s)  {title}")
