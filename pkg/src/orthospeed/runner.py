"""Batch runs behind the CLI: signals, sweeps, event tables, oracle reports.

Every run returns text that depends only on the resolved configuration, so
repeating a run (with any thread count) reproduces it byte for byte.
"""
from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .chain import ParameterWarning
from .config import ConfigError, RunConfig
from .oracle import divergence_report
from .signal import find_orthogonality_events, orthogonality_signal
from .svg import heatmap, line_chart

SCHEMAS = {
    "signal": "orthospeed.signal/1",
    "sweep": "orthospeed.sweep/1",
    "events": "orthospeed.events/1",
    "verify": "orthospeed.verify/1",
}
FORMATS = {
    "signal": ("csv", "json", "svg"),
    "sweep": ("csv", "json", "svg"),
    "events": ("json", "csv"),
    "verify": ("text", "json"),
}
SIGNAL_COLUMNS = ("t", "re_Sor", "im_Sor", "abs_Sor", "re_S14", "im_S14")


@dataclass
class Series:
    axis2_value: Optional[float]
    axis1: np.ndarray
    overlaps: np.ndarray
    s14: np.ndarray
    signal: object = None


def _num(x) -> str:
    return f"{float(x):.17g}"


def metadata(kind: str, config: RunConfig) -> dict:
    return {
        "schema": SCHEMAS[kind],
        "version": __version__,
        "preset": config.preset or "",
        **config.settings,
    }


def _csv_header(meta: dict) -> list[str]:
    return [f"# {k}: {v}" for k, v in meta.items()]


def _series_values(config: RunConfig) -> list[Optional[float]]:
    g = config.grid
    return [None] if g.axis2 is None else [float(v) for v in g.axis2_values]


def _compute_series(config: RunConfig, axis2_value, threads: int) -> Series:
    g = config.grid
    extra = {} if axis2_value is None else {g.axis2: axis2_value}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterWarning)
        if g.axis1 == "t":
            params, state = config.at(**extra)
            sig = orthogonality_signal(state, params, g.axis1_values, config.pair, threads, check=True)
            return Series(axis2_value, g.axis1_values, sig.overlaps, sig.s14, sig)
        over, s14 = [], []
        for v in g.axis1_values:
            params, state = config.at(**extra, **{g.axis1: v})
            sig = orthogonality_signal(state, params, [g.fixed_time], config.pair, check=True)
            over.append(sig.overlaps[0])
            s14.append(sig.s14[0])
        return Series(axis2_value, g.axis1_values, np.array(over), np.array(s14))


def compute(config: RunConfig, threads: int = 1) -> list[Series]:
    values = _series_values(config)
    if threads > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda v: _compute_series(config, v, 1), values))
    return [_compute_series(config, v, threads) for v in values]


def _check_format(kind: str, fmt: str) -> None:
    if fmt not in FORMATS[kind]:
        raise ConfigError("--format", f"{kind} supports {', '.join(FORMATS[kind])}, got {fmt!r}")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _series_label(config, value):
    return "" if value is None else f"{config.grid.axis2}={value:g}"


def run_signal(config: RunConfig, fmt: str = "csv", threads: int = 1) -> str:
    _check_format("signal", fmt)
    series = compute(config, threads)
    g = config.grid
    columns = ([g.axis2] if g.axis2 else []) + [g.axis1] + list(SIGNAL_COLUMNS[1:])
    rows = []
    for s in series:
        lead = [] if s.axis2_value is None else [s.axis2_value]
        for x, o, v in zip(s.axis1, s.overlaps, s.s14):
            rows.append(lead + [x, o.real, o.imag, abs(o), v.real, v.imag])
    meta = metadata("signal", config)
    if fmt == "csv":
        lines = _csv_header(meta) + [",".join(columns)]
        lines += [",".join(_num(x) for x in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json({"metadata": meta, "columns": columns,
                      "rows": [[float(x) for x in row] for row in rows]})
    title = config.preset or "orthogonality signal"
    return line_chart(
        [(_series_label(config, s.axis2_value), s.axis1, np.abs(s.overlaps)) for s in series],
        title, g.axis1, "|S_or|",
    )


def run_sweep(config: RunConfig, fmt: str = "csv", threads: int = 1) -> str:
    """Long format ``axis1, axis2, abs_Sor``, rows axis2-major then axis1."""
    _check_format("sweep", fmt)
    series = compute(config, threads)
    g = config.grid
    columns = [g.axis1] + ([g.axis2] if g.axis2 else []) + ["abs_Sor"]
    rows = []
    for s in series:
        mid = [] if s.axis2_value is None else [s.axis2_value]
        rows.extend([x] + mid + [abs(o)] for x, o in zip(s.axis1, s.overlaps))
    meta = metadata("sweep", config)
    if fmt == "csv":
        lines = _csv_header(meta) + [",".join(columns)]
        lines += [",".join(_num(x) for x in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json({"metadata": meta, "columns": columns,
                      "rows": [[float(x) for x in row] for row in rows]})
    title = config.preset or "orthogonality sweep"
    if g.axis2 is None:
        return line_chart([("", series[0].axis1, np.abs(series[0].overlaps))], title, g.axis1, "|S_or|")
    z = np.array([np.abs(s.overlaps) for s in series])
    return heatmap(g.axis1_values, g.axis2_values, z, title, g.axis1, g.axis2)


def events_for(config: RunConfig, threads: int = 1):
    """``[(axis2_value, OrthogonalityEvents), ...]`` for every series."""
    if config.grid.axis1 != "t":
        raise ConfigError("grid.axis1", "event detection needs axis1 = t")
    return [(s.axis2_value, find_orthogonality_events(s.signal, config.threshold))
            for s in compute(config, threads)]


def run_events(config: RunConfig, fmt: str = "json", threads: int = 1) -> str:
    _check_format("events", fmt)
    results = events_for(config, threads)
    meta = metadata("events", config)
    axis2 = config.grid.axis2
    if fmt == "csv":
        lines = _csv_header(meta)
        lines.append(",".join(([axis2] if axis2 else []) + ["count", "first_event", "event_times"]))
        for value, ev in results:
            lead = [] if value is None else [_num(value)]
            first = "" if ev.first_event is None else _num(ev.first_event)
            lines.append(",".join(lead + [str(ev.count), first,
                                          ";".join(_num(t) for t in ev.event_times)]))
        return "\n".join(lines) + "\n"
    if axis2 is None:
        record = results[0][1].as_dict()
        return _json({"metadata": meta, **record})
    return _json({
        "metadata": meta,
        "series": [{axis2: value, **ev.as_dict()} for value, ev in results],
    })


def run_verify(config: RunConfig, fmt: str = "text", threads: int = 1) -> str:
    _check_format("verify", fmt)
    g = config.grid
    if g.axis1 != "t":
        raise ConfigError("grid.axis1", "verify needs axis1 = t")

    def one(value):
        extra = {} if value is None else {g.axis2: value}
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterWarning)
            params, _ = config.at(**extra)
        return divergence_report(params, g.axis1_values)

    values = _series_values(config)
    if threads > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, values))
    else:
        reports = [one(v) for v in values]
    if fmt == "json":
        return _json({"metadata": metadata("verify", config),
                      "reports": [r.as_dict() for r in reports]})
    return "".join(r.to_text() for r in reports)
