"""Generalized position/momentum operators and the uncertainty product.

Position multiplies by the deformed coordinate phi_j(x); momentum is -i
times the weighted gradient.  Dispersions are second moments of |f|^2 in
the deformed coordinates and of |F f|^2 on the frequency side; the report
carries the summed product against the n^2/4 lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import SpatialWeight
from .transform import (GridFunction, forward, weighted_gradient,
                        weighted_inner, weighted_norm)

__all__ = [
    "DispersionReport",
    "apply_position",
    "apply_momentum",
    "commutator_residual",
    "dispersion_report",
]


@dataclass(frozen=True)
class DispersionReport:
    """Means and standard deviations per axis, with the summed product and
    the theoretical lower bound n^2/4."""

    means_phi: tuple[float, ...]
    means_xi: tuple[float, ...]
    std_phi: tuple[float, ...]
    std_xi: tuple[float, ...]
    product: float
    bound: float

    def componentwise_products(self) -> tuple[float, ...]:
        return tuple(a * b for a, b in zip(self.std_phi, self.std_xi))


def apply_position(f: GridFunction, axis: int = 0) -> GridFunction:
    """Multiply by the deformed coordinate phi_axis(x) (exact at nodes)."""
    u = f.grid.u_mesh()[..., axis]
    return GridFunction(grid=f.grid, values=u * f.values)


def apply_momentum(f: GridFunction, w: SpatialWeight, axis: int = 0) -> GridFunction:
    """-i times the weighted gradient along the given axis."""
    g = weighted_gradient(f, w, axis)
    return GridFunction(grid=f.grid, values=-1j * g.values)


def commutator_residual(f: GridFunction, w: SpatialWeight, j: int = 0, k: int = 0) -> float:
    """Relative deviation of [T_j, P_k] f from i*delta_jk*f in the weighted norm."""
    tp = apply_position(apply_momentum(f, w, k), j)
    pt = apply_momentum(apply_position(f, j), w, k)
    target = 1j * f.values if j == k else 0.0
    resid = GridFunction(grid=f.grid, values=tp.values - pt.values - target)
    return weighted_norm(resid, w) / weighted_norm(f, w)


def dispersion_report(f: GridFunction, w: SpatialWeight) -> DispersionReport:
    """Dispersion measures of a unit-norm state.

    Rejects inputs whose weighted norm deviates from 1 by more than 1e-8
    (normalization is the caller's responsibility).  Frequency means use
    the real part of <P_j f, f>; its imaginary part must vanish to 1e-9.
    """
    nrm = weighted_norm(f, w)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"input is not normalized: ||f|| = {nrm:.12g}")
    grid = f.grid
    n = grid.dim
    om = w.at(grid.x_nodes)
    dens_x = np.abs(f.values) ** 2 * np.abs(om) ** 2 * grid.cell_volume

    F = forward(f, w)
    dxi = 1.0
    for N, h in zip(grid.shape, grid.spacing):
        dxi *= 2.0 * math.pi / (N * h)
    dens_xi = np.abs(F.values) ** 2 * dxi

    means_phi, means_xi, std_phi, std_xi = [], [], [], []
    for j in range(n):
        u = grid.u_mesh()[..., j]
        mphi = float(np.sum(u * dens_x))
        vphi = float(np.sum((u - mphi) ** 2 * dens_x))

        pj = apply_momentum(f, w, j)
        mxi_c = weighted_inner(pj, f, w)
        scale = 1.0 + abs(mxi_c)
        if abs(mxi_c.imag) > 1e-9 * scale:
            raise ArithmeticError(
                f"<P_{j} f, f> has imaginary part {mxi_c.imag:.3e}; "
                "momentum is not numerically self-adjoint on this grid")
        mxi = mxi_c.real
        shape = [1] * n
        shape[j] = grid.shape[j]
        xi_j = F.xi_axes[j].reshape(shape)
        vxi = float(np.sum((xi_j - mxi) ** 2 * dens_xi))

        means_phi.append(mphi)
        means_xi.append(mxi)
        std_phi.append(math.sqrt(max(vphi, 0.0)))
        std_xi.append(math.sqrt(max(vxi, 0.0)))

    product = sum(std_phi) * sum(std_xi)
    return DispersionReport(means_phi=tuple(means_phi), means_xi=tuple(means_xi),
                            std_phi=tuple(std_phi), std_xi=tuple(std_xi),
                            product=product, bound=n * n / 4.0)
