import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True, scope="session")
def _private_cache(tmp_path_factory):
    from ellassoc import cache

    root = tmp_path_factory.mktemp("cache")
    cache.set_root(root)
    os.environ["ELLASSOC_CACHE"] = str(root)
    yield root
    cache.set_root(None)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for reps in terminalreporter.stats.values():
        for rep in reps:
            if getattr(rep, "when", None) != "call":
                continue
            lines += [v for k, v in getattr(rep, "user_properties", []) if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
