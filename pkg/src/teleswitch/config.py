"""Scenario files and named presets.

A scenario file is INI-style text::

    [session]
    duration = 20          ; seconds
    scheme_mode = auto     ; fixed_tdpa | fixed_mmt | auto
    dbp = 0.1
    rng_seed = 1

    [network]
    delay_profile =
        0 5 5              ; start_ms fwd_ms bwd_ms
        5000 50 50

Unknown sections or keys are rejected.
"""
from __future__ import annotations

import configparser
from dataclasses import fields, replace
from pathlib import Path

from .channel import DelayProfile
from .engine import DeadbandFloors, MmtParams, SessionConfig
from .environment import HuntCrossleyParams
from .qoe import DEFAULT_QOE, FourPLParams, HysteresisConfig, SchemeId
from .trajectory import TrajectoryScript


class ConfigError(ValueError):
    pass


_SESSION_KEYS = {
    "duration": float,
    "sample_period": float,
    "scheme_mode": str,
    "dbp": float,
    "rng_seed": int,
    "initial_scheme": str,
    "position_floor": float,
    "velocity_floor": float,
    "force_floor": float,
    "stiffness_floor": float,
}
_ENV_KEYS = {
    "k": float,
    "n": float,
    "b_damp": float,
    "noise_mean": float,
    "noise_std": float,
    "noise_enabled": "bool",
}
_OPERATOR_KEYS = {
    "kind": str,
    "press_depth": float,
    "frequency": float,
    "start_offset": float,
    "knots": str,
}
_NETWORK_KEYS = {"delay_profile": str, "probe_period": float, "rtt_smoothing": float}
_QOE_KEYS = {"tdpa": str, "mmt": str, "margin": float, "dwell": int}
_MMT_KEYS = {
    "initial_stiffness": float,
    "window": int,
    "min_contact_samples": int,
    "max_force_jump": float,
}
_SECTIONS = {
    "session": _SESSION_KEYS,
    "environment": _ENV_KEYS,
    "operator": _OPERATOR_KEYS,
    "network": _NETWORK_KEYS,
    "qoe": _QOE_KEYS,
    "mmt": _MMT_KEYS,
}

PRESETS = {
    # Soft-object case study: K=200 N/m, n=1.5, B=0.5, 0.1 N noise, DBP 0.1,
    # fitted QoE curves, 0.5 Hz / 2 cm press.
    "paper-soft-object": SessionConfig(
        duration=20.0,
        scheme_mode="auto",
        delay_profile=DelayProfile.constant(0.0),
        operator_script=TrajectoryScript(),
        env_params=HuntCrossleyParams(),
        dbp=0.1,
        rng_seed=0,
        qoe_params=dict(DEFAULT_QOE),
    ),
}


def preset(name: str) -> SessionConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None


def _floats(text: str, count: int | None = None, what: str = "value") -> list[float]:
    try:
        vals = [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"bad number in {what}: {text!r}") from None
    if count is not None and len(vals) != count:
        raise ConfigError(f"{what} needs {count} numbers, got {len(vals)}")
    return vals


def parse_delay_profile(text: str) -> DelayProfile:
    """Parse ``start_ms fwd_ms bwd_ms`` triples, one per line or ``;``-separated."""
    rows = [r.strip() for r in text.replace(";", "\n").splitlines() if r.strip()]
    if not rows:
        raise ConfigError("delay_profile is empty")
    segs = []
    for row in rows:
        s, f, b = _floats(row, 3, "delay_profile segment")
        segs.append((s / 1000.0, f / 1000.0, b / 1000.0))
    try:
        return DelayProfile(tuple(segs))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_knots(text: str):
    rows = [r.strip() for r in text.replace(";", "\n").splitlines() if r.strip()]
    return tuple(tuple(_floats(r, 2, "knot")) for r in rows)


def _typed(section, key, raw, kind):
    if kind == "bool":
        v = raw.strip().lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"[{section}] {key}: expected a boolean, got {raw!r}")
    try:
        return kind(raw.strip()) if kind is not str else raw.strip()
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from None


def parse_scenario(text: str, base: SessionConfig | None = None) -> SessionConfig:
    """Build a ``SessionConfig`` from scenario text layered over ``base``
    (the soft-object preset by default)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed scenario file: {exc}") from None

    vals: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        allowed = _SECTIONS[section]
        vals[section] = {}
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            vals[section][key] = _typed(section, key, raw, allowed[key])

    cfg = base or preset("paper-soft-object")
    try:
        sess = vals.get("session", {})
        floors = cfg.floors
        floor_updates = {k[: -len("_floor")]: sess.pop(k) for k in list(sess) if k.endswith("_floor")}
        if floor_updates:
            floors = replace(floors, **floor_updates)

        env = vals.get("environment", {})
        env_params = replace(
            cfg.env_params,
            **{
                {"k": "K", "n": "n", "b_damp": "B_damp"}.get(k, k): v
                for k, v in env.items()
            },
        )

        op = dict(vals.get("operator", {}))
        if "knots" in op:
            op["knots"] = _parse_knots(op["knots"])
        script = replace(cfg.operator_script, **op)

        net = dict(vals.get("network", {}))
        profile = parse_delay_profile(net.pop("delay_profile")) if "delay_profile" in net else cfg.delay_profile

        qoe = dict(vals.get("qoe", {}))
        qoe_params = dict(cfg.qoe_params)
        for scheme in SchemeId:
            if scheme.value in qoe:
                a, b, c, d = _floats(qoe.pop(scheme.value), 4, f"[qoe] {scheme.value}")
                qoe_params[scheme] = FourPLParams(A=a, B_slope=b, C=c, D=d)
        hysteresis = replace(cfg.hysteresis, **qoe) if qoe else cfg.hysteresis

        mmt = replace(cfg.mmt, **vals.get("mmt", {}))

        return replace(
            cfg,
            **sess,
            floors=floors,
            env_params=env_params,
            operator_script=script,
            delay_profile=profile,
            qoe_params=qoe_params,
            hysteresis=hysteresis,
            mmt=mmt,
            **net,
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid scenario: {exc}") from None


def load_scenario(path: str | Path, base: SessionConfig | None = None) -> SessionConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_scenario(text, base)


def qoe_fragment(params: dict[SchemeId, FourPLParams] | FourPLParams, scheme: SchemeId | None = None) -> str:
    """Render QoE curves as a ``[qoe]`` section."""
    if isinstance(params, FourPLParams):
        params = {scheme or SchemeId.TDPA_PD: params}
    lines = ["[qoe]", "; A B C D"]
    for s, p in params.items():
        lines.append(f"{SchemeId(s).value} = {p.A!r} {p.B_slope!r} {p.C!r} {p.D!r}")
    return "\n".join(lines) + "\n"


def session_fields() -> list[str]:
    return [f.name for f in fields(SessionConfig)]
