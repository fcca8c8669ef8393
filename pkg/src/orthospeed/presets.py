"""Named configurations, one per published figure panel.

Each preset is a set of config overrides on top of the defaults, plus the
run mode ``figure`` uses: ``signal`` for line plots, ``sweep`` for contours.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FigurePreset:
    name: str
    description: str
    settings: dict
    mode: str = "signal"


_MODELS = {"grid.axis2": "gamma", "grid.axis2_values": "0,0.5,1"}
_GAMMA_CONTOUR = {
    "grid.axis2": "gamma",
    "grid.axis2_start": "0",
    "grid.axis2_stop": "1",
    "grid.axis2_step": "0.01",
}
_DM_CONTOUR = {
    "grid.axis2": "dm",
    "grid.axis2_start": "-1",
    "grid.axis2_stop": "1",
    "grid.axis2_step": "0.02",
}
_PES = {"state.kind": "pure", "state.p": "0.5"}
_MES = {"state.kind": "bell"}


def _p(name, description, mode="signal", **groups):
    settings = {}
    for group in groups.pop("use", ()):
        settings.update(group)
    settings.update({k.replace("__", "."): str(v) for k, v in groups.items()})
    return FigurePreset(name, description, settings, mode)


PRESETS = {p.name: p for p in [
    _p("pes-n7", "PES p=0.5, N=7, D=0, g=0.1, lambda=0; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=7, chain__dm=0, chain__g=0.1, chain__lambda=0),
    _p("pes-n27", "PES p=0.5, N=27, D=0, g=0.1, lambda=0; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=27, chain__dm=0, chain__g=0.1, chain__lambda=0),
    _p("pes-lambda02", "PES p=0.5, N=7, D=0, g=0.1, lambda=0.2; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=7, chain__dm=0, chain__g=0.1, chain__lambda=0.2),
    _p("pes-lambda09", "PES p=0.5, N=7, D=0, g=0.1, lambda=0.9; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=7, chain__dm=0, chain__g=0.1, chain__lambda=0.9),
    _p("pes-g03", "PES p=0.5, N=7, D=0, g=0.3, lambda=0; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=7, chain__dm=0, chain__g=0.3, chain__lambda=0),
    _p("pes-dm0-n13", "PES p=0.5, N=13, D=0, g=0.1, lambda=0.1; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=13, chain__dm=0, chain__g=0.1, chain__lambda=0.1),
    _p("pes-dm03-n13", "PES p=0.5, N=13, D=0.3, g=0.1, lambda=0.1; gamma in {0, 0.5, 1}",
       use=(_PES, _MODELS), chain__n_sites=13, chain__dm=0.3, chain__g=0.1, chain__lambda=0.1),
    _p("pes-contour-n3", "PES p=0.5, N=3, D=0.5, g=0.05, lambda=1; gamma x t contour", "sweep",
       use=(_PES, _GAMMA_CONTOUR), chain__n_sites=3, chain__dm=0.5, chain__g=0.05, chain__lambda=1),
    _p("pes-contour-n9", "PES p=0.5, N=9, D=0.5, g=0.05, lambda=1; gamma x t contour", "sweep",
       use=(_PES, _GAMMA_CONTOUR), chain__n_sites=9, chain__dm=0.5, chain__g=0.05, chain__lambda=1),
    _p("mes-contour-gamma-n3", "Bell state, N=3, D=0.5, g=0.05, lambda=1; gamma x t contour", "sweep",
       use=(_MES, _GAMMA_CONTOUR), chain__n_sites=3, chain__dm=0.5, chain__g=0.05, chain__lambda=1),
    _p("mes-contour-gamma-n9", "Bell state, N=9, D=0.5, g=0.05, lambda=1; gamma x t contour", "sweep",
       use=(_MES, _GAMMA_CONTOUR), chain__n_sites=9, chain__dm=0.5, chain__g=0.05, chain__lambda=1),
    _p("mes-contour-dm-n7", "Bell state, N=7, g=0.1, lambda=1, gamma=0; D x t contour", "sweep",
       use=(_MES, _DM_CONTOUR), chain__n_sites=7, chain__g=0.1, chain__lambda=1, chain__gamma=0),
    _p("mes-contour-dm-n7-gamma0.5", "Bell state, N=7, g=0.1, lambda=1, gamma=0.5; D x t contour",
       "sweep", use=(_MES, _DM_CONTOUR), chain__n_sites=7, chain__g=0.1, chain__lambda=1,
       chain__gamma=0.5),
    _p("mes-contour-dm-n7-gamma1", "Bell state, N=7, g=0.1, lambda=1, gamma=1; D x t contour",
       "sweep", use=(_MES, _DM_CONTOUR), chain__n_sites=7, chain__g=0.1, chain__lambda=1,
       chain__gamma=1),
    _p("mes-g03", "Bell state, N=7, D=0, g=0.3, lambda=0; gamma in {0, 0.5, 1}",
       use=(_MES, _MODELS), chain__n_sites=7, chain__dm=0, chain__g=0.3, chain__lambda=0),
    _p("pes-n7-xpart", "pes-n7 with the X-shaped reduced evolution of the pure state",
       use=(_PES, _MODELS), state__kind="pure-x", chain__n_sites=7, chain__dm=0, chain__g=0.1,
       chain__lambda=0),
]}


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        from .config import ConfigError

        raise ConfigError("preset", f"unknown preset {name!r}; see list-presets") from None
