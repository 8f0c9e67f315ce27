from __future__ import annotations

import re
from collections import OrderedDict

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    verdicts: dict[int, list[tuple[str, bool]]] = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m and rep.when in ("call", "setup"):
                if outcome == "passed" and rep.when == "setup":
                    continue
                verdicts.setdefault(int(m.group(1)), []).append((m.group(2), outcome == "passed"))
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for num, checks in OrderedDict(sorted(verdicts.items())).items():
        ok = all(passed for _, passed in checks)
        failed = [name for name, passed in checks if not passed]
        detail = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}{detail}")
