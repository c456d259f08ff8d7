"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one summary line (visible under pytest -s) and asserts the
criterion.  Oracles are closed forms, high-precision frozen values, or
independent brute-force evaluations; tolerances are fixed here, not tuned.
"""

import math
import time
import warnings

import numpy as np
import pytest

from wspectral.cli import EXIT_OK, main, parse_config, run_command
from wspectral.fracops import (FractionalOrder, HilferOrder,
                               fractional_laplacian_singular,
                               fractional_laplacian_spectral, generalized_laplace,
                               weighted_fractional_integral,
                               weighted_hilfer_derivative)
from wspectral.geometry import build_grid, make_diffeomorphism, make_spatial_weight, make_temporal_pair
from wspectral.mellin import MellinStrip, mellin_forward, mellin_inverse
from wspectral.profiles import pullback, u_profile
from wspectral.solver import (HilferProblem, UnderResolvedWarning,
                              green_foxh_route, green_mellin_route,
                              green_spectral_route, spectral_error_estimate)
from wspectral.specfun import gamma_complex, mittag_leffler
from wspectral.transform import (GridFunction, forward, inverse, weighted_convolution,
                                 weighted_gradient, weighted_inner, weighted_norm)
from wspectral.uncertainty import commutator_residual, dispersion_report


def report(criterion, detail, ok=True):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    assert ok


GEOMETRY_MATRIX = [
    ("identity", [], "one", []),
    ("cubic", [], "one_plus_sq", []),
    ("sinh", [], "gauss", [0.05]),
    ("log-stretch", [], "const", [2.0]),
    ("affine", [1.7], "one", []),
]

PROFILES_1D = [("gaussian", [1.0]), ("wavelet", []), ("modulated", [2.0])]


def _cases(dim, N):
    for gname, gpar, wname, wpar in GEOMETRY_MATRIX:
        d = make_diffeomorphism(gname, gpar, dim=dim)
        w = make_spatial_weight(wname, wpar)
        g = build_grid(d, [(-12.0, 12.0)] * dim, [N] * dim)
        for pname, ppar in PROFILES_1D:
            f = pullback(g, w, u_profile(pname, ppar))
            yield gname, pname, g, w, f


def test_criterion_1_roundtrip():
    t0 = time.time()
    worst = 0.0
    for dim, N in ((1, 512), (2, 256)):
        for gname, pname, g, w, f in _cases(dim, N):
            back = inverse(forward(f, w), w, g)
            rel = np.linalg.norm(back.values - f.values) / np.linalg.norm(f.values)
            worst = max(worst, rel)
    elapsed = time.time() - t0
    report(1, f"round-trip worst rel L2 = {worst:.2e} (tol 1e-10), "
              f"{elapsed:.1f} s (budget 10 s)",
           worst <= 1e-10 and elapsed <= 10.0)


def test_criterion_2_plancherel_parseval():
    worst = 0.0
    for dim, N in ((1, 512), (2, 256)):
        for gname, pname, g, w, f in _cases(dim, N):
            F = forward(f, w)
            dxi = 1.0
            for n, h in zip(g.shape, g.spacing):
                dxi *= 2.0 * math.pi / (n * h)
            n2 = weighted_norm(f, w) ** 2
            resid = abs(n2 - np.sum(np.abs(F.values) ** 2) * dxi) / n2
            worst = max(worst, resid)
    # polarized form on one pair per dimension
    for dim, N in ((1, 512), (2, 128)):
        d = make_diffeomorphism("cubic", dim=dim)
        w = make_spatial_weight("one_plus_sq")
        g = build_grid(d, [(-12.0, 12.0)] * dim, [N] * dim)
        f1 = pullback(g, w, u_profile("gaussian", [1.0]))
        f2 = pullback(g, w, u_profile("modulated", [1.5]))
        F1, F2 = forward(f1, w), forward(f2, w)
        dxi = 1.0
        for n, h in zip(g.shape, g.spacing):
            dxi *= 2.0 * math.pi / (n * h)
        lhs = weighted_inner(f1, f2, w)
        rhs = np.sum(F1.values * np.conj(F2.values)) * dxi
        scale = weighted_norm(f1, w) * weighted_norm(f2, w)
        worst = max(worst, abs(lhs - rhs) / scale)
    report(2, f"Plancherel/Parseval worst residual = {worst:.2e} (tol 1e-8)",
           worst <= 1e-8)


def test_criterion_3_diagonalization_convolution():
    worst_d = worst_c = 0.0
    for gname, pname, g, w, f in _cases(1, 512):
        F = forward(f, w)
        Fg = forward(weighted_gradient(f, w, 0), w)
        scale = np.max(np.abs(F.values))
        worst_d = max(worst_d, np.max(np.abs(Fg.values - 1j * F.xi_axes[0] * F.values)) / scale)
        conv = weighted_convolution(f, f, w)
        Fc = forward(conv, w)
        worst_c = max(worst_c, np.max(np.abs(Fc.values - F.values ** 2)) / max(scale, scale ** 2))
    report(3, f"diagonalization residual = {worst_d:.2e}, convolution residual = "
              f"{worst_c:.2e} (tol 1e-9)", worst_d <= 1e-9 and worst_c <= 1e-9)


def test_criterion_4_bruteforce_oracle():
    rng = np.random.default_rng(2024)
    d = make_diffeomorphism("cubic", dim=1)
    g = build_grid(d, [(-8.0, 8.0)], [64])
    w = make_spatial_weight("one_plus_sq")
    u = g.u_axes[0]
    prof = sum(c * np.exp(-((u - m) ** 2) / 2) for m, c in zip((-2, 0, 1.5), rng.normal(size=3)))
    f = GridFunction(grid=g, values=prof / w.at(g.x_nodes))
    F = forward(f, w)
    om = w.at(g.x_nodes)
    h = g.spacing[0]
    direct = np.array([np.sum(np.exp(-1j * xi * u) * om * f.values) * h
                       for xi in F.xi_axes[0]]) / math.sqrt(2 * math.pi)
    worst = np.max(np.abs(F.values - direct))
    report(4, f"FFT vs O(N^2) quadrature max abs = {worst:.2e} (tol 1e-10)",
           worst <= 1e-10)


def test_criterion_5_special_functions():
    e1 = abs(mittag_leffler(1.0, 1.0, -1.0) - math.exp(-1.0))
    zs = np.linspace(0.0, 10.0, 101)
    e2 = max(abs(mittag_leffler(2.0, 1.0, -z * z).real - math.cos(z)) for z in zs)
    rng = np.random.default_rng(99)
    pts = rng.uniform(-4, 4, 100) + 1j * rng.uniform(0.05, 4, 100)
    e3 = float(np.max(np.abs(gamma_complex(pts) * gamma_complex(1 - pts)
                             * np.sin(np.pi * pts) / np.pi - 1)))
    report(5, f"|E11(-1)-1/e| = {e1:.1e} (1e-12); max|E21(-z^2)-cos z| = {e2:.1e} "
              f"(1e-10); reflection = {e3:.1e} (1e-11)",
           e1 <= 1e-12 and e2 <= 1e-10 and e3 <= 1e-11)


def test_criterion_6_classical_kernels():
    t0 = time.time()
    d = make_diffeomorphism("identity", dim=1)
    w = make_spatial_weight("one")
    tp = make_temporal_pair("linear", "one")
    p_heat = HilferProblem(order=HilferOrder(1.0, 1.0), s=FractionalOrder(1.0),
                           diffusivity=1.0, geometry=d, weight=w, temporal=tp)
    g = build_grid(d, [(-30.0, 30.0)], [1024])
    worst_heat = 0.0
    for t in (0.5, 1.0, 2.0):
        G = green_spectral_route(g, t, p_heat)
        x = g.x_nodes[..., 0]
        mask = np.abs(x) <= 5
        true = (4 * math.pi * t) ** -0.5 * np.exp(-x[mask] ** 2 / (4 * t))
        worst_heat = max(worst_heat, float(np.max(np.abs(G.values[mask] - true) / true)))
    p_poisson = HilferProblem(order=HilferOrder(1.0, 1.0), s=FractionalOrder(0.5),
                              diffusivity=1.0, geometry=d, weight=w, temporal=tp)
    gp = build_grid(d, [(-2000.0, 2000.0)], [65536])
    Gp = green_spectral_route(gp, 1.0, p_poisson)
    xp = gp.x_nodes[..., 0]
    mask = np.abs(xp) <= 5
    true = 1.0 / (math.pi * (xp[mask] ** 2 + 1.0))
    worst_poisson = float(np.max(np.abs(Gp.values[mask] - true) / true))
    elapsed = time.time() - t0
    report(6, f"heat max rel = {worst_heat:.2e} (1e-6); Poisson max rel = "
              f"{worst_poisson:.2e} (1e-5); {elapsed:.1f} s (budget 5 s)",
           worst_heat <= 1e-6 and worst_poisson <= 1e-5 and elapsed <= 5.0)


def test_criterion_7_three_route_agreement():
    t0 = time.time()
    geometries = [
        ("identity", "one"),
        ("cubic", "one_plus_sq"),
    ]
    L, N = 160.0, 2 ** 17
    worst_sm = 0.0
    worst_fm = 0.0
    checked = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderResolvedWarning)
        for gname, wname in geometries:
            d = make_diffeomorphism(gname, dim=1)
            w = make_spatial_weight(wname)
            tp = make_temporal_pair("linear", "one")
            grid = build_grid(d, [(-L, L)], [N])
            half = build_grid(d, [(-L / 2, L / 2)], [N // 2])  # same spacing
            for alpha in (0.5, 1.0, 1.5):
                for beta in (0.0, 0.5, 1.0):
                    for s in (0.5, 0.75, 1.0):
                        p = HilferProblem(order=HilferOrder(alpha, beta),
                                          s=FractionalOrder(s), diffusivity=1.0,
                                          geometry=d, weight=w, temporal=tp)
                        t = 1.0
                        G = green_spectral_route(grid, t, p)
                        Gh = green_spectral_route(half, t, p)
                        for up in (0.6, 1.0, 1.6, 2.4, 3.4):
                            k = int(round((up + L) / grid.spacing[0]))
                            kh = int(round((grid.u_axes[0][k] + L / 2) / half.spacing[0]))
                            xk = grid.x_nodes[k]
                            ev = green_mellin_route(xk, t, p)
                            ef = green_foxh_route(xk, t, p)
                            est = (spectral_error_estimate(grid, t, p, G, abs(grid.u_axes[0][k]))
                                   + abs(G.values[k] - Gh.values[kh]))
                            tol = max(1e-4 * abs(ev.value), est + ev.error_estimate)
                            dv = abs(ev.value - G.values[k])
                            worst_sm = max(worst_sm, dv / tol)
                            worst_fm = max(worst_fm, abs(ef.value - ev.value))
                            checked += 1
    elapsed = time.time() - t0
    report(7, f"{checked} probe comparisons; spectral-vs-mellin worst = "
              f"{worst_sm:.2f}x tolerance; foxh-vs-mellin worst = {worst_fm:.2e} "
              f"(1e-8); {elapsed:.0f} s (budget 60 s)",
           worst_sm <= 1.0 and worst_fm <= 1e-8 and elapsed <= 60.0)


def test_criterion_8_hypersingular_convergence():
    d = make_diffeomorphism("identity", dim=1)
    w = make_spatial_weight("one")
    lines = []
    ok = True
    for s in (0.3, 0.5, 0.7):
        rels = []
        for N in (256, 512):
            g = build_grid(d, [(-20.0, 20.0)], [N])
            # derivative-of-Gaussian: vanishing moments keep the spectral
            # reference free of box-periodization bias
            f = pullback(g, w, u_profile("gauss_deriv", [4]))
            sp = fractional_laplacian_spectral(f, w, FractionalOrder(s))
            si = fractional_laplacian_singular(f, w, s)
            rels.append(np.linalg.norm(si.values - sp.values) / np.linalg.norm(sp.values))
        order = math.log2(rels[0] / rels[1])
        lines.append(f"s={s}: rel={rels[0]:.1e}, order={order:.2f}")
        ok = ok and rels[0] <= 5e-2 and order >= 1.0
    report(8, "; ".join(lines) + " (tol 5e-2, order >= 1)", ok)


def test_criterion_9_uncertainty():
    d1 = make_diffeomorphism("identity", dim=1)
    w1 = make_spatial_weight("one")
    g1 = build_grid(d1, [(-24.0, 24.0)], [1024])
    d2 = make_diffeomorphism("cubic", dim=1)
    w2 = make_spatial_weight("one_plus_sq")
    g2 = build_grid(d2, [(-24.0, 24.0)], [1024])
    rng = np.random.default_rng(7)
    coef = rng.normal(size=8)

    def band_limited(u):
        r = u[..., 0]
        return sum(c * np.cos((j + 1) * 0.35 * r) for j, c in enumerate(coef)) \
            * np.exp(-r ** 2 / 16.0)

    suite = [(g1, w1, u_profile("normal_gaussian", [1.0])),
             (g1, w1, u_profile("hermite", [1])),
             (g1, w1, u_profile("hermite", [3])),
             (g2, w2, u_profile("normal_gaussian", [1.3])),
             (g2, w2, u_profile("hermite", [2])),
             (g1, w1, band_limited)]
    ok = True
    worst_margin = math.inf
    for g, w, prof in suite:
        f = pullback(g, w, prof)
        f = GridFunction(grid=g, values=f.values / weighted_norm(f, w))
        rep = dispersion_report(f, w)
        ok = ok and rep.product >= rep.bound * (1 - 1e-6)
        ok = ok and all(pj >= 0.5 * (1 - 1e-6) for pj in rep.componentwise_products())
        worst_margin = min(worst_margin, rep.product / rep.bound)
    fgauss = pullback(g1, w1, u_profile("normal_gaussian", [1.0]))
    fgauss = GridFunction(grid=g1, values=fgauss.values / weighted_norm(fgauss, w1))
    rep = dispersion_report(fgauss, w1)
    gauss_err = abs(rep.product - 0.5)
    comm = commutator_residual(fgauss, w1, 0, 0)
    report(9, f"bound margin min = {worst_margin:.3f}; Gaussian product err = "
              f"{gauss_err:.1e} (1e-6); commutator = {comm:.1e} (1e-6)",
           ok and gauss_err <= 1e-6 and comm <= 1e-6)


def test_criterion_10_temporal_operators():
    tp = make_temporal_pair("linear", "one")
    e_pow = abs(weighted_fractional_integral(lambda t: 1.0, 0.5, tp, 1.0)
                - 1.0 / math.gamma(1.5))
    inner = lambda tau: weighted_fractional_integral(lambda t: 1.0, 0.4, tp, tau) \
        if tau > 0 else 0.0
    e_semi = abs(weighted_fractional_integral(inner, 0.35, tp, 1.0)
                 - weighted_fractional_integral(lambda t: 1.0, 0.75, tp, 1.0))
    tpe = make_temporal_pair("linear", "exp")
    e_ann = abs(weighted_hilfer_derivative(lambda t: 2.0 / math.exp(t),
                                           HilferOrder(0.6, 1.0), tpe, 1.2))
    alpha, A = 0.6, 1.3
    psi = lambda t: mittag_leffler(alpha, 1.0, -A * t ** alpha).real
    z = 2.0
    pt = generalized_laplace(psi, tp, z, 200.0, tol=1e-6)
    # operational rule with mu = 1: z^alpha psi~ - z^(alpha-mu) = -A psi~
    e_lap = abs((z ** alpha * pt - z ** (alpha - 1.0)) - (-A * pt))
    report(10, f"power rule = {e_pow:.1e}, semigroup = {e_semi:.1e} (1e-7); "
               f"Caputo annihilation = {e_ann:.1e} (1e-8); operational-rule "
               f"residual = {e_lap:.1e} (1e-4)",
           e_pow <= 1e-7 and e_semi <= 1e-7 and e_ann <= 1e-8 and e_lap <= 1e-4)


def test_criterion_11_mellin_golden_pairs():
    worst = 0.0
    for sig in (0.6, 0.9, 1.3, 1.8, 2.4):
        got = mellin_forward(lambda x: math.exp(-x), complex(sig))
        worst = max(worst, abs(got - complex(gamma_complex(sig))))
    phi = lambda x: x ** 3 + x
    phi_p = lambda x: 3.0 * x ** 2 + 1.0
    f = lambda x: math.exp(-x) / (1.0 + x)
    strip = MellinStrip(0.0, 4.0, 0.8)
    F = lambda s: mellin_forward(f, s, phi=phi, phi_prime=phi_p, tol=1e-10)
    worst_rt = 0.0
    for x in np.linspace(0.4, 2.2, 10):
        got = mellin_inverse(F, strip, float(x), phi=phi, tol=1e-7)
        worst_rt = max(worst_rt, abs(got - f(float(x))))
    report(11, f"Gamma reproduction worst = {worst:.1e} (1e-8); round-trip "
               f"worst = {worst_rt:.1e} (1e-5)",
           worst <= 1e-8 and worst_rt <= 1e-5)


def test_criterion_12_determinism(tmp_path):
    a, b = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert main(["validate", "--output", str(a)]) == EXIT_OK
    assert main(["validate", "--output", str(b)]) == EXIT_OK
    same = a.read_bytes() == b.read_bytes()
    report(12, f"two validate reports byte-identical = {same}", same)
