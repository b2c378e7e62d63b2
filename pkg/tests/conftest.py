"""Emit one ACCEPTANCE line per tagged criterion, past output capture."""

import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    info = getattr(getattr(item, "function", None), "_acceptance", None)
    if info is None:
        return
    num, label = info
    status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    line = "ACCEPTANCE criterion %d (%s): %s [%.1fs]" % (
        num, label, status, rep.duration)
    capman = item.config.pluginmanager.getplugin("capturemanager")
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    else:
        print(line, flush=True)
