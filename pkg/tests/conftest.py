from dataclasses import replace

import pytest

from teleswitch import DelayProfile, HuntCrossleyParams, SessionConfig, TrajectoryScript, preset


def make_config(rtt_ms=0.0, scheme="fixed_tdpa", duration=4.0, seed=1, noise=True, **kw):
    """Soft-object preset with the usual overrides used throughout the tests."""
    base = preset("paper-soft-object")
    env = kw.pop("env_params", None) or replace(base.env_params, noise_enabled=noise)
    return replace(
        base,
        scheme_mode=scheme,
        duration=duration,
        rng_seed=seed,
        delay_profile=kw.pop("delay_profile", None) or DelayProfile.constant(rtt_ms / 1000.0),
        env_params=env,
        **kw,
    )


@pytest.fixture
def config():
    return make_config


LINEAR_ENV = HuntCrossleyParams(K=200.0, n=1.0, B_damp=0.0, noise_enabled=False)
FREE_SPACE = TrajectoryScript(kind="free_space")


# One "criterion N: PASS/FAIL" line per acceptance criterion, printed at the end.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
