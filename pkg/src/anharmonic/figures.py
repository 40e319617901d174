"""Curve data for the three published figures.

Each curve is computed the way the original figures were: squeezing from the
closed form, ``Q`` from the closed-form cumulants along the classical
trajectory, and ``|z1|`` from the bare (undamped) integral of ``Q``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cumulants import closed_trajectory
from .model import ModelParams
from .observables import squeezing_closed

FIGURES = ("fig1", "fig2", "fig3")

FIG1_TAU_MAX = 10.0
FIG1_DT = 0.01
# fig2/fig3 windows are [0, 10/Gamma]
_WINDOW_POINTS = {0.05: 0.01, 0.5: 0.002}


@dataclass
class Curve:
    figure: str
    panel: str
    l: int
    Gamma: float
    n_d: float
    columns: dict

    @property
    def filename(self) -> str:
        return f"{self.figure}{self.panel}_l{self.l}_Gamma{self.Gamma:g}_nd{self.n_d:g}.csv"

    def comments(self) -> list[str]:
        src = {"fig1": "S from closed-form squeezing",
               "fig2": "Q from closed-form cumulants on the classical trajectory",
               "fig3": "|z1| = |int_0^tau Q| (bare integral) of closed-form Q"}[self.figure]
        return [f"figure={self.figure} panel={self.panel}",
                f"l={self.l} Gamma={self.Gamma:g} delta_bar=0 n_d={self.n_d:g} z0=1",
                f"source: {src}"]


def _grid(tau_max: float, dt: float) -> np.ndarray:
    return np.arange(int(round(tau_max / dt)) + 1) * dt


def fig1_curves() -> list[Curve]:
    out = []
    tau = _grid(FIG1_TAU_MAX, FIG1_DT)
    for panel, l in (("a", 1), ("b", 5)):
        for G, nd in ((0.0, 0.0), (0.05, 0.0), (0.05, 1.0)):
            m = ModelParams(l=l, Gamma=G, n_d=nd)
            out.append(Curve("fig1", panel, l, G, nd,
                             {"tau": tau, "S": squeezing_closed(m, 1.0, tau)}))
    return out


def _window(G: float) -> np.ndarray:
    return _grid(10.0 / G, _WINDOW_POINTS[G])


def fig2_curves() -> list[Curve]:
    out = []
    for panel, G in (("a", 0.05), ("b", 0.5)):
        tau = _window(G)
        for l in (1, 3):
            tr = closed_trajectory(ModelParams(l=l, Gamma=G), 1.0, tau, kernel="bare")
            out.append(Curve("fig2", panel, l, G, 0.0,
                             {"tau": tau, "re_Q": tr.Q.real, "im_Q": tr.Q.imag,
                              "abs_Q": np.abs(tr.Q)}))
    return out


def fig3_curves() -> list[Curve]:
    out = []
    for panel, G in (("a", 0.05), ("b", 0.5)):
        tau = _window(G)
        for l in (1, 3, 5):
            tr = closed_trajectory(ModelParams(l=l, Gamma=G), 1.0, tau, kernel="bare")
            out.append(Curve("fig3", panel, l, G, 0.0,
                             {"tau": tau, "re_z1": tr.z1.real, "im_z1": tr.z1.imag,
                              "abs_z1": np.abs(tr.z1)}))
    return out


def figure_curves(which: str) -> list[Curve]:
    try:
        return {"fig1": fig1_curves, "fig2": fig2_curves, "fig3": fig3_curves}[which]()
    except KeyError:
        raise ValueError(f"unknown figure {which!r}; expected one of {FIGURES}") from None
