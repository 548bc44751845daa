import pytest

ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Record the outcome of one acceptance criterion: ``acceptance(number, title, report_lines)``."""
    results = request.config.stash[ACCEPTANCE_KEY]

    def record(number, title, checks):
        results[number] = (title, checks)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, checks = results[number]
        ok = all(c[1] for c in checks)
        worst = "; ".join(f"{name}={value}" for name, passed, value in checks if not passed)
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if worst:
            line += f"  [failing: {worst}]"
        terminalreporter.write_line(line)
