import time

_START = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, CRITERIA
    except ImportError:
        return
    if not RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key, _ in CRITERIA:
        if key in RESULTS:
            passed, detail = RESULTS[key]
            tr.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {key}: {detail}")
        else:
            tr.write_line(f"SKIP  criterion {key}: not run")
    tr.write_line(f"session wall time {time.perf_counter() - _START:.1f}s")
