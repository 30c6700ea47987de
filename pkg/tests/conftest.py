# filled by test_acceptance: criterion number -> (passed, detail, seconds)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail, secs = ACCEPTANCE[k]
        terminalreporter.write_line(
            f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({secs:.1f} s)  {detail}")
