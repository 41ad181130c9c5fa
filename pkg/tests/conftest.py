import oracles


def pytest_terminal_summary(terminalreporter):
    if oracles.ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in oracles.ACCEPTANCE:
            terminalreporter.write_line(line)
