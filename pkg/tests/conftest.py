"""Prints one pass/fail line per acceptance criterion after the run."""

MARK = "test_acceptance.py::test_criterion_"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, ()):
            nodeid = getattr(rep, "nodeid", "")
            if MARK not in nodeid or getattr(rep, "when", None) != "call":
                continue
            name = nodeid.split("::test_criterion_", 1)[1]
            num, _, label = name.partition("_")
            rows.append((int(num), label.replace("_", " "),
                         "PASS" if outcome == "passed" else "FAIL",
                         rep.duration))
    if rows:
        terminalreporter.section("acceptance criteria")
        for num, label, status, dur in sorted(rows):
            terminalreporter.write_line(
                f"criterion {num} ({label}): {status} ({dur:.1f}s)")
