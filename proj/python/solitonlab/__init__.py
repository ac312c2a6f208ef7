"""Two-soliton collisions in 1D nonlinear Schroedinger equations."""

import json

from ._core import (
    Grid,
    Nonlinearity,
    Potential,
    Profile,
    SolitonlabError,
    SolitonParams,
    charge,
    compute_tau_alpha,
    decompose,
    default_config,
    effective_trajectory,
    energy,
    evolve,
    omega_matrix,
    solve_profile,
    synthesize,
)
from . import _core

__all__ = [
    "Grid",
    "Nonlinearity",
    "Potential",
    "Profile",
    "SolitonlabError",
    "SolitonParams",
    "charge",
    "compute_tau_alpha",
    "decompose",
    "default_config",
    "effective_trajectory",
    "energy",
    "evolve",
    "omega_matrix",
    "run",
    "solve_profile",
    "sweep",
    "synthesize",
]


def _pairs(settings):
    return [(str(k), str(v)) for k, v in (settings or {}).items()]


def run(config="", settings=None, out=""):
    """Run one experiment and return its summary as a dict."""
    return json.loads(_core.run(config, _pairs(settings), str(out)))


def sweep(axis, values, config="", settings=None, jobs=1, out=""):
    """Scaling sweep over one axis ("v0", "h" or "d"); returns the summary dict."""
    return json.loads(_core.sweep(config, _pairs(settings), axis, list(values), jobs, str(out)))
