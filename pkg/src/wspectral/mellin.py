"""Generalized phi-Mellin transform pair on the half line.

The forward transform integrates phi(x)^(s-1) * omega(x) * f(x) * phi'(x)
over (0, inf); the inverse is a truncated vertical-line integral divided by
omega(x).  The domain is (0, inf) with phi an increasing bijection of the
half line, so this module deliberately does not reuse the R^n geometry
types.  The inversion abscissa is caller-supplied through a MellinStrip
(the convergence strip is not auto-detected).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "MellinStrip",
    "MellinDivergenceError",
    "mellin_forward",
    "mellin_forward_line",
    "mellin_inverse",
]


class MellinDivergenceError(ArithmeticError):
    """Panel sums failed to settle (integral diverges or decays too slowly)."""


@dataclass(frozen=True)
class MellinStrip:
    """Convergence strip bounds and the chosen inversion abscissa."""

    sigma_min: float
    sigma_max: float
    abscissa: float

    def __post_init__(self):
        if not self.sigma_min < self.abscissa < self.sigma_max:
            raise ValueError("abscissa must lie strictly inside the strip")


def _identity(x):
    return x


def _one(x):
    return 1.0


def mellin_forward(f, s: complex, *, phi=None, phi_prime=None, omega=None,
                   tol: float = 1e-9, max_decades: int = 120) -> complex:
    """Weighted phi-Mellin transform at the complex point s.

    Integrates over geometrically spaced panels in x on both sides of 1
    until the panel sums are Cauchy (a geometric tail bound falls below
    tol); growing panel sequences raise MellinDivergenceError.
    """
    phi = phi or _identity
    phi_prime = phi_prime or (lambda x: 1.0)
    omega = omega or _one
    s = complex(s)

    def integrand(x):
        return complex(phi(x)) ** (s - 1.0) * omega(x) * f(x) * phi_prime(x)

    def sweep(direction):
        total = 0.0 + 0.0j
        prev_mag = math.inf
        grew = 0
        for k in range(max_decades):
            if direction < 0:
                lo, hi = math.exp(-(k + 1.0)), math.exp(-float(k))
            else:
                lo, hi = math.exp(float(k)), math.exp(k + 1.0)
            val, _ = integrate.quad(integrand, lo, hi, complex_func=True,
                                    epsabs=0.25 * tol, epsrel=1e-12, limit=200)
            total += val
            mag = abs(val)
            # sustained growth (oscillatory panels fluctuate; demand a streak)
            if mag > prev_mag * 1.0000001 and mag > tol:
                grew += 1
                if grew >= 4:
                    raise MellinDivergenceError(
                        f"panel sums grow toward {'0' if direction < 0 else 'infinity'} "
                        f"(panel {k}: {mag:.3e})")
            else:
                grew = 0
            if mag < 0.01 * tol and k >= 2:
                return total
            ratio = mag / prev_mag if prev_mag > 0 else 0.0
            if k >= 3 and ratio < 0.95 and mag * ratio / (1.0 - ratio) < 0.25 * tol:
                return total  # geometric tail below tolerance
            prev_mag = mag
        raise MellinDivergenceError(
            f"no decay toward {'0' if direction < 0 else 'infinity'} within the panel budget")

    return sweep(-1) + sweep(+1)


def mellin_forward_line(f, svals, *, phi=None, phi_prime=None, omega=None,
                        tol: float = 1e-9, max_decades: int = 120) -> np.ndarray:
    """Transform values at an array of points on (or near) a vertical line.

    The s-independent integrand factor is sampled once on log-spaced
    Gauss-Legendre panels (node count adapted to max |Im s|); each transform
    value is then a single weighted sum, which makes inversion loops cheap.
    """
    phi = phi or _identity
    phi_prime = phi_prime or (lambda x: 1.0)
    omega = omega or _one
    svals = np.atleast_1d(np.asarray(svals, dtype=complex))
    sig_lo = float(np.min(svals.real))
    sig_hi = float(np.max(svals.real))
    tmax = float(np.max(np.abs(svals.imag)))
    nper = int(min(3000, max(24, 0.75 * tmax + 20)))
    xg, wg = np.polynomial.legendre.leggauss(nper)

    log_px, log_wpre = [], []

    def add_panels(direction):
        prev_mag = math.inf
        grew = 0
        sig_worst = sig_lo if direction < 0 else sig_hi
        for k in range(max_decades):
            if direction < 0:
                a, b = math.exp(-(k + 1.0)), math.exp(-float(k))
            else:
                a, b = math.exp(float(k)), math.exp(k + 1.0)
            xs = 0.5 * (b - a) * xg + 0.5 * (a + b)
            pre = np.array([omega(x) * f(x) * phi_prime(x) for x in xs], dtype=complex)
            px = np.array([float(phi(x)) for x in xs])
            wts = 0.5 * (b - a) * wg
            mag = float(np.sum(np.abs(pre) * px ** (sig_worst - 1.0) * wts))
            log_px.append(np.log(px))
            log_wpre.append(wts * pre)
            if mag > prev_mag * 1.0000001 and mag > tol:
                grew += 1
                if grew >= 4:
                    raise MellinDivergenceError(
                        f"panel sums grow toward {'0' if direction < 0 else 'infinity'}")
            else:
                grew = 0
            if mag < 0.005 * tol and k >= 2:
                return
            ratio = mag / prev_mag if prev_mag > 0 else 0.0
            if k >= 3 and ratio < 0.95 and mag * ratio / (1.0 - ratio) < 0.1 * tol:
                return
            prev_mag = mag
        raise MellinDivergenceError("no panel decay within the budget")

    add_panels(-1)
    add_panels(+1)
    lpx = np.concatenate(log_px)
    wpre = np.concatenate(log_wpre)
    out = np.empty(svals.shape, dtype=complex)
    block = max(1, int(4e6 // max(len(lpx), 1)))
    for i0 in range(0, svals.size, block):
        sl = slice(i0, min(i0 + block, svals.size))
        out[sl] = np.exp((svals[sl, None] - 1.0) * lpx[None, :]) @ wpre
    return out


def mellin_inverse(F, strip: MellinStrip, x: float, *, phi=None, omega=None,
                   T: float = 60.0, tol: float = 1e-7, max_doublings: int = 6) -> complex:
    """Inverse transform at x > 0: truncated vertical-line trapezoid of
    F(s) phi(x)^(-s) / (2 pi i omega(x)), refined by doubling the height T
    and the node density until the increments fall below tol."""
    if x <= 0:
        raise ValueError("x must be positive")
    phi = phi or _identity
    omega = omega or _one
    px = float(phi(x))
    if px <= 0:
        raise ValueError("phi(x) must be positive")
    lpx = math.log(px)
    c = strip.abscissa

    def line(height, M):
        t = np.linspace(-height, height, int(M) + 1)
        svals = c + 1j * t
        try:
            Fv = np.asarray(F(svals), dtype=complex)
            if Fv.shape != svals.shape:
                raise TypeError
        except (TypeError, ValueError):
            Fv = np.asarray([F(sv) for sv in svals], dtype=complex)
        integ = Fv * np.exp(-svals * lpx)
        return complex(np.trapezoid(integ, t) / (2.0 * math.pi))

    M = max(512, int(24.0 * T * (1.0 + abs(lpx))))
    val = line(T, M)
    err = math.inf
    for _ in range(max_doublings):
        nxt = line(T, 2 * M)
        d_space = abs(nxt - val)
        val, M = nxt, 2 * M
        nxt = line(2.0 * T, 2 * M)
        d_tail = abs(nxt - val)
        val, T, M = nxt, 2.0 * T, 2 * M
        err = d_space + d_tail
        if err <= tol:
            break
    else:
        raise MellinDivergenceError(
            f"vertical-line integrand not settled: increment {err:.3e} > tol {tol:.1e}")
    return val / omega(x)
