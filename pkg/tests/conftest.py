from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# filled by test_acceptance.py: (number, passed, detail)
ACCEPTANCE: list[tuple[int, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {num:2d}: {status:4s}  {detail}")
