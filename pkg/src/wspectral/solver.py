"""Fundamental solution of the weighted Hilfer diffusion-wave problem.

Three independent evaluation routes:

* spectral -- inverse weighted Fourier transform of the relaxation symbol
  (the reference implementation; only needs Mittag-Leffler + the transform);
* mellin   -- vertical-line contour integral of the Gamma-factor kernel;
* foxh     -- the same kernel packaged as the Fox H-function of the
  similarity argument Z = |phi(x)| / (lambda*gamma(t)^alpha)^(1/(2s)).

The Mellin/Fox prefactor is pi^(-n/2) * gamma(t)^(mu-1) * rho(0+) /
(rho(t) * omega(x) * |phi(x)|^n); this resolves the source material's
inconsistent display constants empirically against the spectral route
(the classical limit then reproduces the textbook heat kernel exactly).
"""

from __future__ import annotations

import math
import warnings
import weakref
from dataclasses import dataclass

import numpy as np

from .fracops import FractionalOrder, HilferOrder
from .geometry import DeformedGrid, Diffeomorphism, SpatialWeight, TemporalPair
from .specfun import (ContourSpec, check_convergence, diffusion_kernel_spec,
                      mellin_barnes, mittag_leffler, mittag_leffler_neg_array)
from .transform import GridFunction, SpectralField, forward, inverse

__all__ = [
    "HilferProblem",
    "GreenEvaluation",
    "UnderResolvedWarning",
    "green_hat",
    "green_spectral_route",
    "spectral_error_estimate",
    "green_mellin_route",
    "green_foxh_route",
    "solve_cauchy",
    "delta_surrogate",
]


class UnderResolvedWarning(UserWarning):
    """The relaxation symbol has not decayed at the Nyquist shell."""


@dataclass(frozen=True)
class HilferProblem:
    """Problem data: time order (alpha, beta), space order s, diffusivity,
    and the geometric/temporal context."""

    order: HilferOrder
    s: FractionalOrder
    diffusivity: float
    geometry: Diffeomorphism
    weight: SpatialWeight
    temporal: TemporalPair

    def __post_init__(self):
        if self.diffusivity <= 0:
            raise ValueError("the diffusivity must be positive")

    @property
    def dim(self) -> int:
        return self.geometry.dim

    @property
    def mu(self) -> float:
        return self.order.mu


@dataclass(frozen=True)
class GreenEvaluation:
    """One point evaluation of the fundamental solution on one route."""

    x: tuple
    t: float
    value: float
    route: str
    error_estimate: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("non-finite Green value")
        if self.error_estimate < 0:
            raise ValueError("negative error estimate")


def green_hat(xi_norm: float, t: float, p: HilferProblem) -> complex:
    """Relaxation symbol: (rho(0+)/rho(t)) gamma^(mu-1)
    E_{alpha,mu}(-lambda |xi|^(2s) gamma^alpha)."""
    if t <= 0:
        raise ValueError("t must be positive")
    tp = p.temporal
    g = tp.gamma(t)
    arg = p.diffusivity * float(xi_norm) ** (2.0 * p.s.s) * g ** p.order.alpha
    E = mittag_leffler(p.order.alpha, p.mu, -arg)
    return (tp.rho_at_zero / tp.rho(t)) * g ** (p.mu - 1.0) * E


# per-grid cache of radial symbol evaluations, keyed by (t, parameters)
_symbol_cache: "weakref.WeakKeyDictionary[DeformedGrid, dict]" = weakref.WeakKeyDictionary()


def _symbol_on_grid(grid: DeformedGrid, t: float, p: HilferProblem) -> np.ndarray:
    key = (t, p.order.alpha, p.order.beta, p.s.s, p.diffusivity,
           p.temporal.name, p.temporal.rho_at_zero)
    per_grid = _symbol_cache.setdefault(grid, {})
    hit = per_grid.get(key)
    if hit is not None:
        return hit
    tp = p.temporal
    g = tp.gamma(t)
    xin = grid.xi_norm_mesh()
    uniq, inv_idx = np.unique(xin, return_inverse=True)
    args = p.diffusivity * uniq ** (2.0 * p.s.s) * g ** p.order.alpha
    E = mittag_leffler_neg_array(p.order.alpha, p.mu, args)
    pref = (tp.rho_at_zero / tp.rho(t)) * g ** (p.mu - 1.0)
    sym = (pref * E)[inv_idx].reshape(xin.shape)
    per_grid[key] = sym
    return sym


def _check_resolution(sym: np.ndarray, grid: DeformedGrid) -> None:
    xin = grid.xi_norm_mesh()
    shell = xin >= 0.98 * xin.max()
    peak = float(np.abs(sym).max())
    edge = float(np.abs(sym[shell]).max())
    if peak > 0 and edge > 1e-6 * peak:
        warnings.warn(
            f"relaxation symbol at the Nyquist shell is {edge/peak:.2e} of its "
            "peak; the grid under-resolves this problem", UnderResolvedWarning,
            stacklevel=3)


def green_spectral_route(grid: DeformedGrid, t: float, p: HilferProblem) -> GridFunction:
    """Fundamental solution on the grid by the inverse weighted transform of
    the symbol, normalized so the classical limit is the textbook kernel."""
    sym = _symbol_on_grid(grid, t, p)
    _check_resolution(sym, grid)
    n = grid.dim
    F = SpectralField(xi_axes=grid.xi_axes,
                      values=(2.0 * math.pi) ** (-n / 2.0) * sym.astype(complex),
                      grid=grid)
    G = inverse(F, p.weight, grid)
    vals = G.values
    peak = float(np.abs(vals).max())
    if peak > 0 and float(np.abs(vals.imag).max()) > 1e-8 * peak:
        raise ArithmeticError("imaginary residue of the fundamental solution "
                              f"exceeds 1e-8 of its peak: {np.abs(vals.imag).max():.3e}")
    return GridFunction(grid=grid, values=vals.real)


def spectral_error_estimate(grid: DeformedGrid, t: float, p: HilferProblem,
                            G: GridFunction, u_abs: float) -> float:
    """Upper-bound style accuracy estimate for the spectral route at a probe
    with |phi(x)| = u_abs: Nyquist aliasing of the algebraic symbol tail plus
    a periodization term read off the computed solution near the box edge.

    The frequency-origin kink of the symbol (|xi|^(2s) with 2s < 2)
    contributes a further O((pi/L)^(1+2s)) term not captured here; compare
    against a half-box evaluation for a self-estimate of that component.
    """
    sym = _symbol_on_grid(grid, t, p)
    xin = grid.xi_norm_mesh()
    edge_sym = float(np.abs(sym[xin >= 0.98 * xin.max()]).max())
    alias = 3.0 * edge_sym / (math.pi * max(u_abs, min(grid.spacing)))
    umesh = np.sqrt((grid.u_mesh() ** 2).sum(axis=-1))
    outer = umesh >= 0.9 * umesh.max()
    period = 2.0 * float(np.abs(np.asarray(G.values)[outer]).max())
    return alias + period + 1e-13


def _mellin_prefactor(x: np.ndarray, t: float, p: HilferProblem) -> tuple[float, float]:
    """Common prefactor of the contour routes; returns (prefactor, |phi(x)|)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = np.asarray(p.geometry.map(x), dtype=float)
    unorm = float(np.linalg.norm(u))
    if unorm <= 0:
        raise ValueError("the contour routes require |phi(x)| > 0")
    tp = p.temporal
    g = tp.gamma(t)
    om = complex(np.asarray(p.weight.at(x[None, :]))[0])
    if abs(om.imag) > 1e-13 * abs(om):
        raise ValueError("contour routes are defined for real weights at the probe")
    pre = (tp.rho_at_zero / tp.rho(t)) * g ** (p.mu - 1.0) \
        * math.pi ** (-p.dim / 2.0) / (om.real * unorm ** p.dim)
    return pre, unorm


def green_mellin_route(x, t: float, p: HilferProblem,
                       contour: ContourSpec | None = None) -> GreenEvaluation:
    """Contour-integral route: prefactor times the vertical-line integral of
    Gamma(z)Gamma(1-z)Gamma(n/2-sz) / (Gamma(sz)Gamma(mu-alpha z)) against
    W^(-z), W = 2^(2s) lambda gamma^alpha / |phi(x)|^(2s)."""
    pre, unorm = _mellin_prefactor(x, t, p)
    spec = diffusion_kernel_spec(p.dim, p.s.s, p.order.alpha, p.mu)
    W = 2.0 ** (2.0 * p.s.s) * p.diffusivity * p.temporal.gamma(t) ** p.order.alpha \
        / unorm ** (2.0 * p.s.s)
    report = check_convergence(spec, W)
    if not report.valid:
        raise ValueError(f"Mellin route invalid for these parameters: {report.reason}")
    res = mellin_barnes(spec, W, contour=contour)
    return GreenEvaluation(x=tuple(np.atleast_1d(x)), t=t,
                           value=pre * res.value.real, route="mellin",
                           error_estimate=abs(pre) * res.error)


def green_foxh_route(x, t: float, p: HilferProblem) -> GreenEvaluation:
    """Fox-H packaging of the contour route via the similarity argument
    Z = |phi(x)| / (lambda gamma^alpha)^(1/(2s))."""
    pre, unorm = _mellin_prefactor(x, t, p)
    Z = unorm / (p.diffusivity * p.temporal.gamma(t) ** p.order.alpha) ** (1.0 / (2.0 * p.s.s))
    spec = diffusion_kernel_spec(p.dim, p.s.s, p.order.alpha, p.mu)
    W = 2.0 ** (2.0 * p.s.s) * Z ** (-2.0 * p.s.s)
    res = mellin_barnes(spec, W)
    if abs(res.value.imag) > 1e-8 * (1.0 + abs(res.value.real)):
        raise ArithmeticError("non-negligible imaginary residue in the H-factor")
    return GreenEvaluation(x=tuple(np.atleast_1d(x)), t=t,
                           value=pre * res.value.real, route="foxh",
                           error_estimate=abs(pre) * res.error)


def solve_cauchy(f0: GridFunction, t: float, p: HilferProblem) -> GridFunction:
    """Cauchy evolution of initial data f0: spectral product of the symbol
    with the transform of f0 (the weighted convolution with the kernel)."""
    grid = f0.grid
    sym = _symbol_on_grid(grid, t, p)
    _check_resolution(sym, grid)
    F0 = forward(f0, p.weight)
    F = SpectralField(xi_axes=F0.xi_axes, values=sym * F0.values, grid=grid)
    return inverse(F, p.weight, grid)


def delta_surrogate(grid: DeformedGrid, w: SpatialWeight) -> GridFunction:
    """Discrete impulse: the grid function whose weighted spectrum is the
    constant (2*pi)^(-n/2) (the classical-delta normalization)."""
    n = grid.dim
    F = SpectralField(xi_axes=grid.xi_axes,
                      values=np.full(grid.shape, (2.0 * math.pi) ** (-n / 2.0),
                                     dtype=complex),
                      grid=grid)
    return inverse(F, w, grid)
