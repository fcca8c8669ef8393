"""Run configuration: an INI document with ``chain``, ``state``, ``grid`` and
``detection`` sections.  Every key is optional; defaults are the most common
figure setting (N=7, D=0, g=0.1, lambda=0, p=0.5, t in [0, 100] step 0.05).

Layering, later wins: defaults, preset, config file, ``--set`` overrides.
"""
from __future__ import annotations

import configparser
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .chain import ChainParams, ParameterWarning
from .states import BellPhiPlus, Custom, GenericPure, InitialStateSpec, InvalidStateError

AXIS_NAMES = ("t", "gamma", "lambda", "dm", "g", "n_sites", "p")
STATE_KINDS = ("pure", "pure-x", "bell", "custom")

DEFAULTS: dict[str, dict[str, str]] = {
    "chain": {
        "n_sites": "7",
        "gamma": "0",
        "lambda": "0",
        "dm": "0",
        "g": "0.1",
        "time_convention": "exact",
    },
    "state": {"kind": "pure", "p": "0.5", "matrix_file": ""},
    "grid": {
        "axis1": "t",
        "axis1_start": "0",
        "axis1_stop": "100",
        "axis1_step": "0.05",
        "axis1_values": "",
        "t": "0",
        "axis2": "",
        "axis2_start": "",
        "axis2_stop": "",
        "axis2_step": "",
        "axis2_values": "",
    },
    "detection": {"threshold": "0.02", "pair": "3,3"},
}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class SweepGrid:
    axis1: str
    axis1_values: np.ndarray
    axis2: Optional[str] = None
    axis2_values: Optional[np.ndarray] = None
    fixed_time: float = 0.0

    def __post_init__(self):
        for label, name, values in (
            ("grid.axis1", self.axis1, self.axis1_values),
            ("grid.axis2", self.axis2, self.axis2_values),
        ):
            if name is None:
                continue
            if name not in AXIS_NAMES:
                raise ConfigError(label, f"unknown axis {name!r}; expected one of {AXIS_NAMES}")
            if values is None or len(values) == 0:
                raise ConfigError(label, "axis has no values")
            if np.any(np.diff(values) <= 0):
                raise ConfigError(label, "axis values must be strictly increasing")
            if name == "n_sites" and any(int(v) != v or int(v) % 2 == 0 or v < 3 for v in values):
                raise ConfigError(label, "n_sites values must be odd integers >= 3")
        if self.axis2 is not None and self.axis2 == self.axis1:
            raise ConfigError("grid.axis2", "axis2 must differ from axis1")


@dataclass(frozen=True)
class RunConfig:
    params: ChainParams
    state: InitialStateSpec
    grid: SweepGrid
    threshold: float
    pair: tuple[int, int]
    settings: dict[str, str]
    preset: Optional[str] = None

    def at(self, **axes) -> tuple[ChainParams, InitialStateSpec]:
        """Params and state with the named axis values substituted."""
        params, state = self.params, self.state
        for name, value in axes.items():
            params, state = with_axis(params, state, name, value)
        return params, state


_PARAM_FIELDS = {"gamma": "anisotropy", "lambda": "field", "dm": "dm", "g": "coupling"}


def with_axis(params: ChainParams, state: InitialStateSpec, name: str, value: float):
    if name in _PARAM_FIELDS:
        return params.replace(**{_PARAM_FIELDS[name]: float(value)}), state
    if name == "n_sites":
        return params.replace(n_sites=int(value)), state
    if name == "p":
        if not isinstance(state, GenericPure):
            raise ConfigError("grid", "axis 'p' needs state.kind = pure or pure-x")
        return params, GenericPure(float(value), x_only=state.x_only)
    if name == "t":
        return params, state
    raise ConfigError("grid", f"unknown axis {name!r}")


def _float(settings, key) -> float:
    raw = settings[key]
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, f"expected a finite number, got {raw!r}")
    return value


def _int(settings, key) -> int:
    raw = settings[key]
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw!r}") from None


def _axis_values(settings, prefix) -> Optional[np.ndarray]:
    listed = settings[f"grid.{prefix}_values"].strip()
    if listed:
        try:
            return np.array([float(x) for x in listed.split(",")])
        except ValueError:
            raise ConfigError(f"grid.{prefix}_values", f"expected comma-separated numbers, got {listed!r}") from None
    keys = [f"grid.{prefix}_{part}" for part in ("start", "stop", "step")]
    if not any(settings[k].strip() for k in keys):
        return None
    for k in keys:
        if not settings[k].strip():
            raise ConfigError(k, "missing; start, stop and step must be given together")
    start, stop, step = (_float(settings, k) for k in keys)
    if step <= 0:
        raise ConfigError(keys[2], "step must be positive")
    if stop < start:
        raise ConfigError(keys[1], "stop must not be below start")
    n = int(round((stop - start) / step)) + 1
    return start + step * np.arange(n)


def _state(settings, base_dir: Path) -> InitialStateSpec:
    kind = settings["state.kind"].strip()
    if kind not in STATE_KINDS:
        raise ConfigError("state.kind", f"expected one of {STATE_KINDS}, got {kind!r}")
    if kind == "bell":
        return BellPhiPlus()
    if kind == "custom":
        path = settings["state.matrix_file"].strip()
        if not path:
            raise ConfigError("state.matrix_file", "required for state.kind = custom")
        try:
            data = json.loads((base_dir / path).read_text())
            matrix = np.array(data["real"], dtype=float) + 1j * np.array(data["imag"], dtype=float)
            return Custom(matrix)
        except (OSError, KeyError, ValueError, TypeError, InvalidStateError) as exc:
            raise ConfigError("state.matrix_file", str(exc)) from None
    try:
        return GenericPure(_float(settings, "state.p"), x_only=(kind == "pure-x"))
    except InvalidStateError as exc:
        raise ConfigError("state.p", str(exc)) from None


def _pair(settings) -> tuple[int, int]:
    raw = settings["detection.pair"]
    try:
        a, b = (int(x) for x in raw.split(","))
    except ValueError:
        raise ConfigError("detection.pair", f"expected 'a,b', got {raw!r}") from None
    if a not in (1, 2, 3, 4) or b not in (1, 2, 3, 4):
        raise ConfigError("detection.pair", "labels must be in 1..4")
    return a, b


def _set(settings: dict[str, str], key: str, value: str) -> None:
    if key not in settings:
        raise ConfigError(key, "unknown configuration key")
    settings[key] = value


def read_ini(text: str, source: str = "<config>") -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(source, str(exc)) from None
    if parser.defaults():
        raise ConfigError("DEFAULT", "keys must sit inside a section")
    return {f"{section}.{key}": value for section in parser.sections()
            for key, value in parser.items(section)}


def parse_override(item: str) -> tuple[str, str]:
    key, sep, value = item.partition("=")
    if not sep:
        raise ConfigError(item, "override must look like section.key=value")
    return key.strip(), value.strip()


def resolve(
    layers: Iterable[dict[str, str]] = (),
    preset: Optional[str] = None,
    base_dir: Path = Path("."),
) -> RunConfig:
    settings = {f"{s}.{k}": v for s, keys in DEFAULTS.items() for k, v in keys.items()}
    for layer in layers:
        for key, value in layer.items():
            _set(settings, key, value)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterWarning)
            params = ChainParams(
                n_sites=_int(settings, "chain.n_sites"),
                anisotropy=_float(settings, "chain.gamma"),
                field=_float(settings, "chain.lambda"),
                dm=_float(settings, "chain.dm"),
                coupling=_float(settings, "chain.g"),
                time_convention=settings["chain.time_convention"].strip(),
            )
    except ConfigError:
        raise
    except ValueError as exc:
        msg = str(exc)
        key = next((f"chain.{k}" for k in ("n_sites", "time_convention") if k in msg), "chain")
        raise ConfigError(key, msg) from None

    axis1 = settings["grid.axis1"].strip()
    axis2 = settings["grid.axis2"].strip() or None
    grid = SweepGrid(
        axis1,
        _axis_values(settings, "axis1"),
        axis2,
        _axis_values(settings, "axis2") if axis2 else None,
        _float(settings, "grid.t"),
    )
    threshold = _float(settings, "detection.threshold")
    if not 0.0 < threshold <= 0.5:
        raise ConfigError("detection.threshold", "must lie in (0, 0.5]")
    config = RunConfig(
        params, _state(settings, base_dir), grid, threshold, _pair(settings),
        dict(sorted(settings.items())), preset,
    )
    # every axis value must give a valid computation
    for name, values in ((grid.axis1, grid.axis1_values), (grid.axis2, grid.axis2_values)):
        if name is not None:
            for v in (values[0], values[-1]):
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", ParameterWarning)
                        config.at(**{name: v})
                except (ValueError, InvalidStateError) as exc:
                    raise ConfigError(f"grid.{'axis1' if name == grid.axis1 else 'axis2'}", str(exc)) from None
    return config


def load(
    path: Optional[str] = None,
    preset: Optional[str] = None,
    overrides: Iterable[str] = (),
) -> RunConfig:
    from .presets import get_preset

    layers = []
    if preset is not None:
        layers.append(get_preset(preset).settings)
    base_dir = Path(".")
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        layers.append(read_ini(text, str(p)))
        base_dir = p.parent
    layers.append(dict(parse_override(item) for item in overrides))
    return resolve(layers, preset, base_dir)
