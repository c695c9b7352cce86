"""Flat key = value configuration files, one section per concern.

Example::

    [grid]
    direction = right
    length = 50.0
    cells = 2048

    [coupling]
    alpha = 1.0
    beta = 1.0
    gamma = 1.0

    [initial_u]
    kind = gaussian
    amplitude = 1.0
    center = 10.0
    width = 1.0
    wavenumber = 1.0

    [boundary_g]
    kind = poly_exp
    amplitude = 0.3
    power = 2
    rate = 1.0

    [time]
    dt = 2.5e-4
    t_final = 1.0
    sample_stride = 40

    [run]
    tag = demo

Unknown sections or keys are rejected.  Every SimConfig field is
addressable; overrides use the same ``section.key=value`` naming.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .errors import ConfigError
from .grid import Direction, FieldSpec, SignalSpec
from .stepper import SimConfig

_SCHEMA = {
    "grid": {"direction": str, "length": float, "cells": int},
    "coupling": {"alpha": float, "beta": float, "gamma": float},
    "initial_u": {"kind": str, "amplitude": float, "center": float,
                  "width": float, "wavenumber": float, "path": str},
    "initial_v": {"kind": str, "amplitude": float, "center": float,
                  "width": float, "path": str},
    "boundary_f": {"kind": str, "amplitude": float, "power": int, "rate": float, "path": str},
    "boundary_g": {"kind": str, "amplitude": float, "power": int, "rate": float, "path": str},
    "boundary_h": {"kind": str, "amplitude": float, "power": int, "rate": float, "path": str},
    "time": {"dt": float, "t_final": float, "sample_stride": int},
    "run": {"tag": str},
}


def default_config_dict() -> dict:
    return {section: {} for section in _SCHEMA}


def _validate_entry(section: str, key: str, value):
    if section not in _SCHEMA:
        raise ConfigError(f"unknown config section [{section}]; valid: {sorted(_SCHEMA)}")
    schema = _SCHEMA[section]
    if key not in schema:
        raise ConfigError(f"unknown key {key!r} in section [{section}]; valid: {sorted(schema)}")
    typ = schema[key]
    try:
        if typ is int:
            # reject silent truncation of non-integers
            as_float = float(value)
            as_int = int(as_float)
            if as_float != as_int:
                raise ValueError
            return as_int
        return typ(value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"bad value {value!r} for [{section}] {key}: expected {typ.__name__}"
        ) from None


def read_config_file(path) -> dict:
    """Parse an INI config file into a validated {section: {key: value}} dict."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    out = default_config_dict()
    for section in parser.sections():
        for key, value in parser.items(section):
            out.setdefault(section, {})
            out[section][key] = _validate_entry(section, key, value)
    return out


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply ``section.key=value`` strings on top of a config dict."""
    for item in overrides or ():
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        section, key = section.strip(), key.strip()
        cfg.setdefault(section, {})
        cfg[section][key] = _validate_entry(section, key, value.strip())
    return cfg


def _spec_from(section: dict, cls):
    try:
        return cls(**section)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def build_sim_config(cfg: dict) -> SimConfig:
    grid_sec = cfg.get("grid", {})
    coup = cfg.get("coupling", {})
    time_sec = cfg.get("time", {})
    run_sec = cfg.get("run", {})
    kwargs = {}
    if "direction" in grid_sec:
        kwargs["direction"] = Direction.parse(grid_sec["direction"])
    for key, source in (("length", grid_sec), ("cells", grid_sec),
                        ("alpha", coup), ("beta", coup), ("gamma", coup),
                        ("dt", time_sec), ("t_final", time_sec),
                        ("sample_stride", time_sec), ("tag", run_sec)):
        if key in source:
            kwargs[key] = source[key]
    kwargs["u0"] = _spec_from(cfg.get("initial_u", {}), FieldSpec)
    kwargs["v0"] = _spec_from(cfg.get("initial_v", {}), FieldSpec)
    kwargs["f"] = _spec_from(cfg.get("boundary_f", {}), SignalSpec)
    kwargs["g"] = _spec_from(cfg.get("boundary_g", {}), SignalSpec)
    kwargs["h"] = _spec_from(cfg.get("boundary_h", {}), SignalSpec)
    return SimConfig(**kwargs)


def load_config(path, overrides=None) -> SimConfig:
    return build_sim_config(apply_overrides(read_config_file(path), overrides))
