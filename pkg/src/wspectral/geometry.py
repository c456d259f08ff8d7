"""Deformation maps, weights, and deformed computational grids.

Every transform in this library operates on a uniform grid in the deformed
coordinate u = phi(x).  This module owns the map phi (with inverse and
Jacobian), the spatial weight omega, the temporal pair (gamma, rho), and the
grid construction that ties them together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DegenerateJacobianError",
    "Diffeomorphism",
    "SpatialWeight",
    "TemporalPair",
    "DeformedGrid",
    "make_diffeomorphism",
    "diffeomorphism_from_callables",
    "jacobian_det",
    "build_grid",
    "make_spatial_weight",
    "make_temporal_pair",
    "CATALOG",
    "WEIGHT_CATALOG",
    "TEMPORAL_CATALOG",
]

#: Below this absolute value a Jacobian determinant is treated as degenerate.
JACOBIAN_FLOOR = 1e-14

#: Tolerance for phi(inverse(u)) = u round trips, relative to 1 + |u|.
ROUNDTRIP_TOL = 1e-10


class DegenerateJacobianError(ValueError):
    """Raised when |det D(phi)| falls below the degeneracy floor."""


@dataclass(frozen=True)
class Diffeomorphism:
    """A smooth invertible deformation of R^n with nonvanishing Jacobian.

    ``map``, ``inverse_map`` and ``jacobian`` are vectorized over leading
    axes: points have shape (..., dim), Jacobians (..., dim, dim).
    """

    dim: int
    map: Callable[[np.ndarray], np.ndarray]
    inverse_map: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    separable: bool = False
    name: str = "custom"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")


@dataclass(frozen=True)
class SpatialWeight:
    """Nonvanishing complex density omega(x); vectorized over (..., dim)."""

    value: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"

    def at(self, x: np.ndarray) -> np.ndarray:
        w = np.asarray(self.value(np.asarray(x, dtype=float)))
        if np.any(np.abs(w) < JACOBIAN_FLOOR):
            raise ValueError("spatial weight vanishes at an evaluated point")
        return w


@dataclass(frozen=True)
class TemporalPair:
    """Time reparametrization gamma(t) and positive temporal weight rho(t).

    gamma is increasing with gamma'(t) > 0; rho(t) > 0.  rho_prime is
    optional; when absent it is obtained by central differences.
    """

    gamma: Callable[[float], float]
    gamma_prime: Callable[[float], float]
    rho: Callable[[float], float]
    rho_at_zero: float = 1.0
    rho_prime: Callable[[float], float] | None = None
    name: str = "custom"

    def rho_derivative(self, t: float) -> float:
        if self.rho_prime is not None:
            return self.rho_prime(t)
        h = 1e-6 * max(1.0, abs(t))
        return (self.rho(t + h) - self.rho(t - h)) / (2.0 * h)


@dataclass(frozen=True, eq=False)
class DeformedGrid:
    """Uniform tensor grid in u = phi(x) with node preimages and weights.

    u_axes are half-open uniform axes (FFT layout, no duplicated endpoint);
    x_nodes has shape (*shape, dim); jac_weights holds |det D(phi)| at the
    preimages.  Grids compare by identity (used as symbol-cache keys).
    """

    dim: int
    u_axes: tuple[np.ndarray, ...]
    x_nodes: np.ndarray
    jac_weights: np.ndarray
    spacing: tuple[float, ...]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.u_axes)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def xi_axes(self) -> tuple[np.ndarray, ...]:
        """DFT frequency axes conjugate to u_axes (unshifted fftfreq order)."""
        return tuple(
            2.0 * np.pi * np.fft.fftfreq(n, d=h)
            for n, h in zip(self.shape, self.spacing)
        )

    def u_mesh(self) -> np.ndarray:
        """Node coordinates in u-space, shape (*shape, dim)."""
        mesh = np.meshgrid(*self.u_axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def xi_norm_mesh(self) -> np.ndarray:
        """|xi| at every spectral node, shape = self.shape."""
        mesh = np.meshgrid(*self.xi_axes, indexing="ij")
        return np.sqrt(sum(m**2 for m in mesh))


# ---------------------------------------------------------------------------
# Scalar profile catalog for separable maps.  Each profile is an odd,
# strictly increasing bijection of R, so the assembled map is a global
# diffeomorphism by construction.

def _invert_monotone(f, fprime, u, tol=1e-12, maxiter=100):
    """Solve f(x) = u per entry for increasing f by safeguarded Newton.

    Brackets are expanded by doubling, Newton steps falling outside the
    bracket are replaced by bisection.
    """
    u = np.asarray(u, dtype=float)
    lo = np.full(u.shape, -1.0)
    hi = np.full(u.shape, 1.0)
    for _ in range(200):
        bad_lo = f(lo) > u
        bad_hi = f(hi) < u
        if not (bad_lo.any() or bad_hi.any()):
            break
        lo[bad_lo] *= 2.0
        hi[bad_hi] *= 2.0
    else:
        raise ValueError("failed to bracket monotone inverse")
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x) - u
        done = np.abs(fx) <= tol * (1.0 + np.abs(u))
        if done.all():
            break
        above = fx > 0
        hi = np.where(above, x, hi)
        lo = np.where(above, lo, x)
        step = fx / fprime(x)
        xn = x - step
        outside = (xn <= lo) | (xn >= hi) | ~np.isfinite(xn)
        x = np.where(outside, 0.5 * (lo + hi), xn)
    # one polishing step: quadratic convergence puts the residual near round-off
    x = x - (f(x) - u) / fprime(x)
    return x


def _power_profile(p):
    if p <= 0:
        raise ValueError("power profile requires p > 0")
    f = lambda x: np.sign(x) * np.abs(x) ** p
    fp = lambda x: p * np.abs(x) ** (p - 1.0)
    finv = lambda u: np.sign(u) * np.abs(u) ** (1.0 / p)
    return f, fp, finv


_PROFILES: dict[str, Callable] = {
    "identity": lambda params: (lambda x: x, lambda x: np.ones_like(np.asarray(x, float)), lambda u: u),
    "power": lambda params: _power_profile(float(params[0])),
    "cubic": lambda params: (
        lambda x: x**3 + x,
        lambda x: 3.0 * x**2 + 1.0,
        lambda u: _invert_monotone(lambda x: x**3 + x, lambda x: 3.0 * x**2 + 1.0, u),
    ),
    "sinh": lambda params: (np.sinh, np.cosh, np.arcsinh),
    # log-style stretch of R realized through the inverse hyperbolic sine
    "log-stretch": lambda params: (np.arcsinh, lambda x: 1.0 / np.sqrt(1.0 + x**2), np.sinh),
}


def _separable(dim, profile_name, params, name):
    f, fp, finv = _PROFILES[profile_name](params)

    def mapping(x):
        return f(np.asarray(x, dtype=float))

    def inverse(u):
        return finv(np.asarray(u, dtype=float))

    def jac(x):
        x = np.asarray(x, dtype=float)
        d = fp(x)
        out = np.zeros(x.shape + (dim,))
        for j in range(dim):
            out[..., j, j] = d[..., j]
        return out

    return Diffeomorphism(dim=dim, map=mapping, inverse_map=inverse,
                          jacobian=jac, separable=True, name=name)


def _affine(dim, params):
    params = np.asarray(params, dtype=float)
    if params.size == dim * dim + dim:
        A = params[: dim * dim].reshape(dim, dim)
        b = params[dim * dim:]
    elif params.size == dim * dim:
        A = params.reshape(dim, dim)
        b = np.zeros(dim)
    elif params.size == 1:
        A = float(params[0]) * np.eye(dim)
        b = np.zeros(dim)
    else:
        raise ValueError("affine expects 1, dim^2 or dim^2+dim parameters")
    if abs(np.linalg.det(A)) < JACOBIAN_FLOOR:
        raise DegenerateJacobianError("affine matrix is singular")
    Ainv = np.linalg.inv(A)

    def mapping(x):
        return np.asarray(x, dtype=float) @ A.T + b

    def inverse(u):
        return (np.asarray(u, dtype=float) - b) @ Ainv.T

    def jac(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(A, x.shape[:-1] + (dim, dim)).copy()

    return Diffeomorphism(dim=dim, map=mapping, inverse_map=inverse,
                          jacobian=jac, separable=bool(np.allclose(A, np.diag(np.diag(A)))),
                          name="affine")


CATALOG = ("identity", "affine", "power", "cubic", "sinh", "log-stretch")


def _validate(d: Diffeomorphism, n_probes: int = 100, seed: int = 1234) -> None:
    rng = np.random.default_rng(seed)
    x = rng.normal(scale=2.0, size=(n_probes, d.dim))
    u = np.asarray(d.map(x), dtype=float)
    back = np.asarray(d.inverse_map(u), dtype=float)
    resid = np.max(np.abs(back - x) / (1.0 + np.abs(x)))
    if resid > ROUNDTRIP_TOL:
        raise ValueError(f"inverse round-trip residual {resid:.3e} exceeds {ROUNDTRIP_TOL:.0e}")
    det = np.abs(np.linalg.det(d.jacobian(x)))
    if np.any(det < JACOBIAN_FLOOR):
        raise DegenerateJacobianError("zero Jacobian detected at a probe point")
    if d.separable:
        off = np.array(d.jacobian(x))
        for j in range(d.dim):
            off[..., j, j] = 0.0
        if np.max(np.abs(off)) > 1e-12:
            raise ValueError("separable map has a non-diagonal Jacobian")


def make_diffeomorphism(name: str, params: Sequence[float] = (), dim: int = 1) -> Diffeomorphism:
    """Build a catalog deformation and validate it at 100 random probes.

    Catalog: identity, affine(A[,b]), power(p), cubic (x^3+x per axis),
    sinh, log-stretch.  Raises on unknown names and on degenerate
    Jacobians at a probe point.
    """
    if name == "affine":
        d = _affine(dim, params)
    elif name in _PROFILES:
        d = _separable(dim, name, params, name)
    else:
        raise ValueError(f"unknown catalog name {name!r}; choose from {CATALOG}")
    _validate(d)
    return d


def diffeomorphism_from_callables(dim, map, inverse_map, jacobian,
                                  separable=False, name="custom") -> Diffeomorphism:
    """Wrap user callables; the inverse is mandatory (no numerical inversion
    of coupled maps is attempted)."""
    if inverse_map is None:
        raise ValueError("missing inverse for user-supplied map")
    d = Diffeomorphism(dim=dim, map=map, inverse_map=inverse_map,
                       jacobian=jacobian, separable=separable, name=name)
    _validate(d)
    return d


def jacobian_det(d: Diffeomorphism, x) -> np.ndarray | float:
    """|det D(phi)(x)|, signalling degeneracy below the 1e-14 floor."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    scalar = x.ndim == 1
    det = np.abs(np.linalg.det(d.jacobian(x)))
    if np.any(det < JACOBIAN_FLOOR):
        raise DegenerateJacobianError("Jacobian determinant below degeneracy floor")
    return float(det[()]) if scalar else det


def build_grid(d: Diffeomorphism, bounds, sizes) -> DeformedGrid:
    """Uniform half-open grid in u-space with preimages under phi.

    bounds: per-axis (u_min, u_max); sizes: per-axis node counts N_j >= 8.
    """
    bounds = [tuple(map(float, b)) for b in np.atleast_2d(np.asarray(bounds, dtype=float))]
    sizes = [int(n) for n in np.atleast_1d(sizes)]
    if len(bounds) == 1 and d.dim > 1:
        bounds = bounds * d.dim
    if len(sizes) == 1 and d.dim > 1:
        sizes = sizes * d.dim
    if len(bounds) != d.dim or len(sizes) != d.dim:
        raise ValueError("bounds/sizes do not match the map dimension")
    for (lo, hi), n in zip(bounds, sizes):
        if n < 8:
            raise ValueError("need at least 8 nodes per axis")
        if not lo < hi:
            raise ValueError("u_min must be below u_max")

    axes, spacing = [], []
    for (lo, hi), n in zip(bounds, sizes):
        h = (hi - lo) / n
        axes.append(lo + h * np.arange(n))
        spacing.append(h)

    mesh = np.meshgrid(*axes, indexing="ij")
    u = np.stack(mesh, axis=-1)
    x = np.asarray(d.inverse_map(u), dtype=float)
    back = np.asarray(d.map(x), dtype=float)
    resid = np.abs(back - u) / (1.0 + np.abs(u))
    if np.max(resid) > ROUNDTRIP_TOL:
        raise ValueError("inverse-map failure inside the requested box")
    jw = np.abs(np.linalg.det(d.jacobian(x)))
    if np.any(jw < JACOBIAN_FLOOR):
        raise DegenerateJacobianError("degenerate Jacobian at a grid node")
    return DeformedGrid(dim=d.dim, u_axes=tuple(axes), x_nodes=x,
                        jac_weights=jw, spacing=tuple(spacing))


# ---------------------------------------------------------------------------
# Weight and temporal catalogs (consumed by the CLI and the test suite).

def make_spatial_weight(name: str, params: Sequence[float] = ()) -> SpatialWeight:
    """Catalog weights: one, const(c), one_plus_sq (1+|x|^2), gauss(a)."""
    if name == "one":
        return SpatialWeight(lambda x: np.ones(np.asarray(x).shape[:-1]), name="one")
    if name == "const":
        c = complex(params[0]) if len(params) == 1 else complex(params[0], params[1])
        return SpatialWeight(lambda x: np.full(np.asarray(x).shape[:-1], c), name="const")
    if name == "one_plus_sq":
        return SpatialWeight(lambda x: 1.0 + np.sum(np.asarray(x) ** 2, axis=-1), name="one_plus_sq")
    if name == "gauss":
        a = float(params[0]) if params else 0.25
        return SpatialWeight(lambda x: np.exp(-a * np.sum(np.asarray(x) ** 2, axis=-1)), name="gauss")
    raise ValueError(f"unknown weight {name!r}")


WEIGHT_CATALOG = ("one", "const", "one_plus_sq", "gauss")


def make_temporal_pair(gamma_name: str = "linear", rho_name: str = "one",
                       gamma_params: Sequence[float] = (), rho_params: Sequence[float] = ()) -> TemporalPair:
    """Catalog pairs: gamma in {linear, quadratic, power(p), log1p},
    rho in {one, exp(a)}."""
    if gamma_name == "linear":
        g, gp = (lambda t: t), (lambda t: 1.0)
    elif gamma_name == "quadratic":
        g, gp = (lambda t: t * t), (lambda t: 2.0 * t)
    elif gamma_name == "power":
        p = float(gamma_params[0])
        if p <= 0:
            raise ValueError("gamma power must be positive")
        g, gp = (lambda t: t**p), (lambda t: p * t ** (p - 1.0))
    elif gamma_name == "log1p":
        g, gp = (lambda t: np.log1p(t)), (lambda t: 1.0 / (1.0 + t))
    else:
        raise ValueError(f"unknown gamma profile {gamma_name!r}")

    if rho_name == "one":
        r, rp, r0 = (lambda t: 1.0), (lambda t: 0.0), 1.0
    elif rho_name == "exp":
        a = float(rho_params[0]) if rho_params else 1.0
        r, rp, r0 = (lambda t: np.exp(a * t)), (lambda t: a * np.exp(a * t)), 1.0
    else:
        raise ValueError(f"unknown rho profile {rho_name!r}")

    return TemporalPair(gamma=g, gamma_prime=gp, rho=r, rho_at_zero=r0,
                        rho_prime=rp, name=f"{gamma_name}/{rho_name}")


TEMPORAL_CATALOG = {"gamma": ("linear", "quadratic", "power", "log1p"), "rho": ("one", "exp")}
