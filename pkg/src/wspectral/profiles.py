"""Test-signal families on deformed grids.

Profiles are specified in the deformed coordinate u = phi(x) and pulled
back as f(x) = g(phi(x)) / omega(x), the isometric image of g.  These are
exactly the functions whose weighted analysis reduces to classical results,
which makes them the natural smoke-test family.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.hermite import hermval
from numpy.polynomial.hermite_e import hermeval

from .geometry import DeformedGrid, SpatialWeight
from .transform import GridFunction

__all__ = ["u_profile", "pullback", "PROFILES"]


def _gaussian(params):
    sigma = float(params[0]) if params else 1.0
    center = float(params[1]) if len(params) > 1 else 0.0
    return lambda u: np.exp(-((u - center) ** 2).sum(axis=-1) / (2.0 * sigma ** 2))


def _normal_gaussian(params):
    sigma = float(params[0]) if params else 1.0
    center = float(params[1]) if len(params) > 1 else 0.0

    def g(u):
        n = u.shape[-1]
        r2 = ((u - center) ** 2).sum(axis=-1)
        amp = (math.pi * sigma ** 2) ** (-n / 4.0)
        return amp * np.exp(-r2 / (2.0 * sigma ** 2))

    return g


def _hermite(params):
    k = int(params[0]) if params else 2
    coef = np.zeros(k + 1)
    coef[k] = 1.0

    def g(u):
        r = u[..., 0]
        val = hermval(r, coef) * np.exp(-(u ** 2).sum(axis=-1) / 2.0)
        return val

    return g


def _gauss_deriv(params):
    # k-th derivative of exp(-u^2/2): (-1)^k He_k(u) exp(-u^2/2); its spectrum
    # is |xi|^k exp(-xi^2/2), so the first k moments vanish
    k = int(params[0]) if params else 4
    coef = np.zeros(k + 1)
    coef[k] = 1.0

    def g(u):
        r = u[..., 0]
        return hermeval(r, coef) * np.exp(-(u ** 2).sum(axis=-1) / 2.0)

    return g


def _wavelet(params):
    return lambda u: (1.0 - (u ** 2).sum(axis=-1)) * np.exp(-(u ** 2).sum(axis=-1) / 2.0)


def _modulated(params):
    k = float(params[0]) if params else 3.0
    return lambda u: np.cos(k * u[..., 0]) * np.exp(-(u ** 2).sum(axis=-1) / 2.0)


PROFILES = {
    "gaussian": _gaussian,
    "normal_gaussian": _normal_gaussian,
    "hermite": _hermite,
    "gauss_deriv": _gauss_deriv,
    "wavelet": _wavelet,
    "modulated": _modulated,
}


def u_profile(name: str, params=()):
    """Profile g(u) from the catalog (gaussian, normal_gaussian, hermite,
    gauss_deriv, wavelet, modulated)."""
    if name not in PROFILES:
        raise ValueError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")
    return PROFILES[name](params)


def pullback(grid: DeformedGrid, w: SpatialWeight, g) -> GridFunction:
    """Sample f(x) = g(phi(x)) / omega(x) on the grid (phi(x) = u at nodes)."""
    u = grid.u_mesh()
    om = w.at(grid.x_nodes)
    return GridFunction(grid=grid, values=np.asarray(g(u)) / om)
