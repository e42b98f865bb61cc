from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def pytest_terminal_summary(terminalreporter):
    # Repeat the acceptance PASS/FAIL lines outside the capture machinery
    # so they appear even without -s.
    try:
        import test_acceptance
    except ImportError:
        return
    lines = getattr(test_acceptance, "SUMMARY_LINES", ())
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
