import pytest

from teleswitch import DEFAULT_QOE, SchemeId, SchemeMode, parse_scenario, preset
from teleswitch.config import ConfigError, load_scenario, parse_delay_profile, qoe_fragment

FULL = """
[session]
duration = 3.5
scheme_mode = fixed_mmt   ; comment
dbp = 0.05
rng_seed = 9
force_floor = 0.02

[environment]
K = 300
n = 1.0
noise_enabled = off

[operator]
kind = piecewise
press_depth = 0.02
knots = 0 -0.01; 1 0.01

[network]
delay_profile =
    0 5 5
    2000 50 60
probe_period = 0.05

[qoe]
tdpa = 2 -2 60 4.5
margin = 0.2

[mmt]
initial_stiffness = 150
"""


def test_soft_object_preset_defaults():
    cfg = preset("paper-soft-object")
    assert (cfg.env_params.K, cfg.env_params.n, cfg.env_params.B_damp) == (200.0, 1.5, 0.5)
    assert cfg.env_params.noise_std == 0.1 and cfg.env_params.noise_enabled
    assert cfg.dbp == 0.1 and cfg.sample_period == 0.001
    assert cfg.operator_script.frequency == 0.5 and cfg.operator_script.press_depth == 0.02
    assert cfg.qoe_params == DEFAULT_QOE


def test_unknown_preset():
    with pytest.raises(ConfigError):
        preset("nope")


def test_full_scenario():
    cfg = parse_scenario(FULL)
    assert cfg.duration == 3.5 and cfg.scheme_mode is SchemeMode.FIXED_MMT
    assert cfg.dbp == 0.05 and cfg.rng_seed == 9 and cfg.floors.force == 0.02
    assert cfg.env_params.K == 300 and cfg.env_params.n == 1.0 and not cfg.env_params.noise_enabled
    assert cfg.operator_script.knots == ((0.0, -0.01), (1.0, 0.01))
    assert cfg.delay_profile.delays_at(2.5) == (0.05, 0.06)
    assert cfg.probe_period == 0.05
    assert cfg.qoe_params[SchemeId.TDPA_PD].C == 60 and cfg.qoe_params[SchemeId.MMT_PD] == DEFAULT_QOE[SchemeId.MMT_PD]
    assert cfg.hysteresis.margin == 0.2 and cfg.hysteresis.dwell == 3
    assert cfg.mmt.initial_stiffness == 150


@pytest.mark.parametrize("text", [
    "[session]\nbogus = 1\n",
    "[nowhere]\nx = 1\n",
    "[session]\nduration = -1\n",
    "[session]\nduration = abc\n",
    "[environment]\nnoise_enabled = maybe\n",
    "[network]\ndelay_profile = 0 5\n",
    "[qoe]\nmmt = 1 2 3\n",
    "[session]\nscheme_mode = sometimes\n",
    "no section header\n",
])
def test_rejected(text):
    with pytest.raises(ConfigError):
        parse_scenario(text)


def test_delay_profile_in_ms():
    p = parse_delay_profile("0 10 10\n5000 50 50")
    assert p.segments == ((0.0, 0.01, 0.01), (5.0, 0.05, 0.05))


def test_missing_file():
    with pytest.raises(ConfigError):
        load_scenario("/does/not/exist.ini")


def test_fragment_round_trips():
    text = qoe_fragment(DEFAULT_QOE)
    assert parse_scenario(text).qoe_params == DEFAULT_QOE
