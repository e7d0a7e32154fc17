from contextlib import contextmanager

import pytest

CRITERIA = {
    1: "Moebius oracle",
    2: "two-sided quotient inversion",
    3: "strategy cross-agreement",
    4: "Neumann certificate soundness",
    5: "margin on analytically forced cases",
    6: "weight classification",
    7: "inverse-closedness desk evidence",
    8: "algebra law suite",
}

_RESULTS: dict[int, list] = {}


class Check:
    def __init__(self):
        self.detail = ""


@contextmanager
def _record(number: int, part: str = ""):
    check = Check()
    try:
        yield check
    except BaseException as exc:
        _RESULTS.setdefault(number, []).append((part, False, check.detail or type(exc).__name__))
        raise
    _RESULTS.setdefault(number, []).append((part, True, check.detail))


@pytest.fixture
def criterion():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        parts = _RESULTS.get(number)
        if not parts:
            terminalreporter.write_line(f"[NOT RUN] criterion {number}: {title}")
            continue
        ok = all(p[1] for p in parts)
        failed = [p[0] or p[2] for p in parts if not p[1]]
        if len(parts) == 1:
            detail = parts[0][2]
        elif failed:
            detail = f"failed: {', '.join(failed)}"
        else:
            detail = f"{len(parts)} checks"
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
        if len(parts) > 1:
            for part, passed, info in parts:
                terminalreporter.write_line(f"      {'ok  ' if passed else 'FAIL'} {part}: {info}")
