"""Command-line surface: config parsing, subcommand dispatch, CSV tables,
and the self-validation suite.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical non-convergence.  Output tables are written atomically with a
17-significant-digit decimal format so identical configurations produce
byte-identical files.  WSPECTRAL_MAX_WORKERS caps worker parallelism
(evaluation is currently serial, so any cap >= 1 is honored trivially).
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .fracops import (FractionalOrder, HilferOrder, QuadratureError,
                      fractional_laplacian_singular, fractional_laplacian_spectral,
                      sobolev_norm, weighted_fractional_integral,
                      weighted_hilfer_derivative)
from .geometry import (build_grid, make_diffeomorphism, make_spatial_weight,
                       make_temporal_pair)
from .mellin import MellinDivergenceError, MellinStrip, mellin_forward, mellin_inverse
from .profiles import pullback, u_profile
from .solver import (HilferProblem, UnderResolvedWarning, green_foxh_route,
                     green_mellin_route, green_spectral_route, solve_cauchy)
from .specfun import (ContourError, MittagLefflerError, SpecialFunctionError,
                      fox_h_1232, gamma_complex, mittag_leffler)
from .transform import forward, inverse, sample, weighted_norm
from .uncertainty import commutator_residual, dispersion_report

__all__ = ["RunConfig", "ResultTable", "parse_config", "run_command", "main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

COMMANDS = ("transform", "laplacian", "mlf", "hfun", "mellin", "uncertainty",
            "green", "solve", "hilfer", "validate")

_DEFAULTS = {
    "geometry": {"name": "identity", "params": [], "dim": 1},
    "weight": {"name": "one", "params": []},
    "temporal": {"gamma": "linear", "gamma_params": [], "rho": "one", "rho_params": []},
    "problem": {"alpha": 1.0, "beta": 1.0, "s": 1.0, "lambda": 1.0},
    "grid": {"bounds": [[-12.0, 12.0]], "sizes": [512]},
    "command": {
        "function": "gaussian", "function_params": [1.0],
        "axis": 0, "order": 0.5, "form": "spectral",
        "t": [1.0], "probes": [[1.0]], "routes": ["spectral", "mellin", "foxh"],
        "z": [-1.0, 0.0], "Z": 1.0, "mu": 1.0,
        "mellin_s": [2.0, 0.0], "mellin_function": "exp", "inverse": False,
        "x": 1.0, "abscissa": 1.5, "strip": [0.0, 10.0],
        "signal": "power", "signal_params": [1.0],
        "T_max": 40.0, "laplace_z": [2.0, 0.0],
    },
    "output": {"path": None, "plot": None},
}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    """Validated run configuration (defaults merged with file and flags)."""

    data: dict

    def __getitem__(self, key):
        return self.data[key]

    def hash(self) -> str:
        # identifies the computation: output destinations are excluded
        payload = {k: v for k, v in self.data.items() if k != "output"}
        canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


@dataclass
class ResultTable:
    """Rectangular result set with provenance metadata."""

    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("ragged result table")
            for v in r:
                if isinstance(v, float) and not math.isfinite(v):
                    raise ValueError("non-finite value in result table")

    def format_lines(self):
        lines = ["# " + json.dumps(self.metadata, sort_keys=True, separators=(",", ":"))]
        lines.append(",".join(self.columns))
        for row in self.rows:
            cells = []
            for v in row:
                if isinstance(v, str):
                    cells.append(v)
                elif isinstance(v, (int, np.integer)):
                    cells.append(str(int(v)))
                else:
                    cells.append(f"{float(v):.17g}")
            lines.append(",".join(cells))
        return lines

    def write(self, path: str) -> None:
        """Atomic write: temp file in the target directory, then rename."""
        text = "\n".join(self.format_lines()) + "\n"
        d = os.path.dirname(os.path.abspath(path)) or "."
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".wspectral-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as f:
                f.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _merge(base: dict, upd: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in (upd or {}).items():
        if k not in out:
            raise ConfigError(f"unknown configuration key {k!r}")
        if isinstance(v, dict) and isinstance(out[k], dict):
            for kk, vv in v.items():
                if kk not in out[k] and k != "command":
                    raise ConfigError(f"unknown configuration key {k}.{kk}")
                out[k][kk] = vv
        else:
            out[k] = v
    return out


def _validate_cfg(data: dict) -> None:
    p = data["problem"]
    if not 0.0 < p["alpha"] <= 2.0:
        raise ConfigError("alpha must lie in (0, 2]")
    if not 0.0 <= p["beta"] <= 1.0:
        raise ConfigError("beta must lie in [0, 1]")
    if not 0.0 < p["s"] <= 1.0:
        raise ConfigError("s must lie in (0, 1]")
    if not p["lambda"] > 0.0:
        raise ConfigError("lambda must be positive")
    g = data["grid"]
    for b in g["bounds"]:
        if len(b) != 2 or not b[0] < b[1]:
            raise ConfigError("grid bounds must be increasing pairs")
    for n in g["sizes"]:
        if int(n) < 8:
            raise ConfigError("grid sizes must be at least 8 per axis")
    if data["geometry"]["dim"] < 1:
        raise ConfigError("dim must be a positive integer")
    workers = os.environ.get("WSPECTRAL_MAX_WORKERS")
    if workers is not None:
        try:
            if int(workers) < 1:
                raise ValueError
        except ValueError:
            raise ConfigError("WSPECTRAL_MAX_WORKERS must be a positive integer") from None


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Load defaults, optionally merge a JSON config file, then flag overrides."""
    data = copy.deepcopy(_DEFAULTS)
    if path is not None:
        try:
            with open(path) as f:
                file_cfg = json.load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config parse error at line {exc.lineno}: {exc.msg}") from exc
        data = _merge(data, file_cfg)
    if overrides:
        data = _merge(data, overrides)
    _validate_cfg(data)
    return RunConfig(data=data)


def _context(cfg: RunConfig):
    gd = cfg["geometry"]
    d = make_diffeomorphism(gd["name"], gd["params"], gd["dim"])
    w = make_spatial_weight(cfg["weight"]["name"], cfg["weight"]["params"])
    td = cfg["temporal"]
    tp = make_temporal_pair(td["gamma"], td["rho"], td["gamma_params"], td["rho_params"])
    pr = cfg["problem"]
    problem = HilferProblem(order=HilferOrder(pr["alpha"], pr["beta"]),
                            s=FractionalOrder(pr["s"]), diffusivity=pr["lambda"],
                            geometry=d, weight=w, temporal=tp)
    grid = build_grid(d, cfg["grid"]["bounds"], cfg["grid"]["sizes"])
    return d, w, tp, problem, grid


def _meta(cfg: RunConfig, command: str, **extra) -> dict:
    md = {"tool": "wspectral", "version": __version__,
          "config_hash": cfg.hash(), "command": command}
    md.update(extra)
    return md


def _grid_rows(grid, values_list, labels):
    """One row per node: coordinates u_1..u_n then one column per field."""
    cols = [f"u_{j+1}" for j in range(grid.dim)] + list(labels)
    mesh = grid.u_mesh().reshape(-1, grid.dim)
    flats = [np.asarray(v).reshape(-1) for v in values_list]
    rows = [list(mesh[i]) + [fl[i] for fl in flats] for i in range(mesh.shape[0])]
    return cols, rows


def _cmd_transform(cfg: RunConfig) -> ResultTable:
    d, w, tp, problem, grid = _context(cfg)
    cc = cfg["command"]
    f = pullback(grid, w, u_profile(cc["function"], cc["function_params"]))
    F = forward(f, w)
    mesh = np.meshgrid(*F.xi_axes, indexing="ij")
    xi = np.stack(mesh, axis=-1).reshape(-1, grid.dim)
    order = np.lexsort(tuple(xi[:, j] for j in reversed(range(grid.dim))))
    vals = F.values.reshape(-1)[order]
    cols = [f"xi_{j+1}" for j in range(grid.dim)] + ["re", "im"]
    rows = [list(xi[i]) + [vals[k].real, vals[k].imag]
            for k, i in enumerate(order)]
    return ResultTable(columns=cols, rows=rows, metadata=_meta(cfg, "transform"))


def _cmd_laplacian(cfg: RunConfig) -> ResultTable:
    d, w, tp, problem, grid = _context(cfg)
    cc = cfg["command"]
    f = pullback(grid, w, u_profile(cc["function"], cc["function_params"]))
    s = float(cc["order"])
    if cc["form"] == "spectral":
        out = fractional_laplacian_spectral(f, w, FractionalOrder(s))
    elif cc["form"] == "singular":
        out = fractional_laplacian_singular(f, w, s)
    else:
        raise ConfigError("laplacian form must be 'spectral' or 'singular'")
    cols, rows = _grid_rows(grid, [out.values.real, out.values.imag], ["re", "im"])
    return ResultTable(columns=cols, rows=rows,
                       metadata=_meta(cfg, "laplacian", form=cc["form"], order=s))


def _cmd_mlf(cfg: RunConfig) -> ResultTable:
    cc = cfg["command"]
    pr = cfg["problem"]
    z = complex(cc["z"][0], cc["z"][1] if len(cc["z"]) > 1 else 0.0)
    val = mittag_leffler(pr["alpha"], float(cc["mu"]), z)
    return ResultTable(columns=["alpha", "mu", "z_re", "z_im", "re", "im"],
                       rows=[[pr["alpha"], float(cc["mu"]), z.real, z.imag,
                              val.real, val.imag]],
                       metadata=_meta(cfg, "mlf"))


def _cmd_hfun(cfg: RunConfig) -> ResultTable:
    cc = cfg["command"]
    pr = cfg["problem"]
    order = HilferOrder(pr["alpha"], pr["beta"])
    Z = float(cc["Z"])
    val = fox_h_1232(cfg["geometry"]["dim"], pr["s"], pr["alpha"], order.mu, Z)
    return ResultTable(columns=["alpha", "beta", "s", "dim", "Z", "H"],
                       rows=[[pr["alpha"], pr["beta"], pr["s"],
                              cfg["geometry"]["dim"], Z, val]],
                       metadata=_meta(cfg, "hfun", mu=order.mu))


_MELLIN_FUNCTIONS = {
    "exp": lambda x: math.exp(-x),
    "cauchy": lambda x: 1.0 / (1.0 + x),
}


def _cmd_mellin(cfg: RunConfig) -> ResultTable:
    cc = cfg["command"]
    if cc["inverse"]:
        strip = MellinStrip(cc["strip"][0], cc["strip"][1], float(cc["abscissa"]))
        val = mellin_inverse(lambda sv: complex(gamma_complex(sv)), strip,
                             float(cc["x"]))
        return ResultTable(columns=["x", "abscissa", "re", "im"],
                           rows=[[float(cc["x"]), float(cc["abscissa"]),
                                  val.real, val.imag]],
                           metadata=_meta(cfg, "mellin", mode="inverse",
                                          transform="gamma"))
    name = cc["mellin_function"]
    if name not in _MELLIN_FUNCTIONS:
        raise ConfigError(f"unknown mellin function {name!r}; "
                          f"choose from {sorted(_MELLIN_FUNCTIONS)}")
    s = complex(cc["mellin_s"][0], cc["mellin_s"][1] if len(cc["mellin_s"]) > 1 else 0.0)
    val = mellin_forward(_MELLIN_FUNCTIONS[name], s)
    return ResultTable(columns=["s_re", "s_im", "re", "im"],
                       rows=[[s.real, s.imag, val.real, val.imag]],
                       metadata=_meta(cfg, "mellin", mode="forward", function=name))


def _cmd_uncertainty(cfg: RunConfig) -> ResultTable:
    d, w, tp, problem, grid = _context(cfg)
    cc = cfg["command"]
    f = pullback(grid, w, u_profile("normal_gaussian", cc["function_params"]))
    f = f.__class__(grid=grid, values=f.values / weighted_norm(f, w))
    rep = dispersion_report(f, w)
    rows = []
    for j in range(grid.dim):
        rows.append([j + 1, rep.means_phi[j], rep.means_xi[j],
                     rep.std_phi[j], rep.std_xi[j]])
    table = ResultTable(
        columns=["axis", "mean_phi", "mean_xi", "std_phi", "std_xi"],
        rows=rows,
        metadata=_meta(cfg, "uncertainty", product=rep.product, bound=rep.bound))
    return table


def _cmd_green(cfg: RunConfig) -> ResultTable:
    d, w, tp, problem, grid = _context(cfg)
    cc = cfg["command"]
    routes = list(cc["routes"])
    for r in routes:
        if r not in ("spectral", "mellin", "foxh"):
            raise ConfigError(f"unknown route {r!r}")
    rows = []
    for t in cc["t"]:
        t = float(t)
        spectral_grid = green_spectral_route(grid, t, problem) if "spectral" in routes else None
        for probe in cc["probes"]:
            x = np.atleast_1d(np.asarray(probe, dtype=float))
            # snap to the nearest grid node so every route sees the same point
            u = np.asarray(d.map(x), dtype=float)
            idx = tuple(int(round((u[j] - ax[0]) / grid.spacing[j])) % len(ax)
                        for j, ax in enumerate(grid.u_axes))
            x = np.asarray(grid.x_nodes[idx], dtype=float).reshape(-1)
            row = [t] + list(x)
            vals = {}
            if spectral_grid is not None:
                vals["spectral"] = float(np.asarray(spectral_grid.values)[idx])
            if "mellin" in routes:
                try:
                    vals["mellin"] = green_mellin_route(x, t, problem).value
                except ValueError:
                    vals["mellin"] = "invalid"   # phi(x) = 0: contour route undefined
            if "foxh" in routes:
                try:
                    vals["foxh"] = green_foxh_route(x, t, problem).value
                except ValueError:
                    vals["foxh"] = "invalid"
            for r in routes:
                row.append(vals[r])

            def delta(a, b):
                if isinstance(a, str) or isinstance(b, str):
                    return "invalid"
                return abs(a - b)

            if "mellin" in routes and "foxh" in routes:
                row.append(delta(vals["mellin"], vals["foxh"]))
            if "spectral" in routes and "mellin" in routes:
                row.append(delta(vals["spectral"], vals["mellin"]))
            rows.append(row)
    cols = ["t"] + [f"x_{j+1}" for j in range(grid.dim)] + list(routes)
    if "mellin" in routes and "foxh" in routes:
        cols.append("delta_mellin_foxh")
    if "spectral" in routes and "mellin" in routes:
        cols.append("delta_spectral_mellin")
    return ResultTable(columns=cols, rows=rows, metadata=_meta(cfg, "green"))


def _cmd_solve(cfg: RunConfig) -> ResultTable:
    d, w, tp, problem, grid = _context(cfg)
    cc = cfg["command"]
    f0 = pullback(grid, w, u_profile(cc["function"], cc["function_params"]))
    t = float(cc["t"][0])
    out = solve_cauchy(f0, t, problem)
    cols, rows = _grid_rows(grid, [out.values.real, out.values.imag], ["re", "im"])
    return ResultTable(columns=cols, rows=rows, metadata=_meta(cfg, "solve", t=t))


def _cmd_hilfer(cfg: RunConfig) -> ResultTable:
    d, w, tp, problem, grid = _context(cfg)
    cc = cfg["command"]
    order = problem.order
    left_exp = 0.0
    if cc["signal"] == "power":
        pwr = float(cc["signal_params"][0])
        psi = lambda t: t ** pwr
        left_exp = min(pwr, 0.0)
        expected = None
    elif cc["signal"] == "mlf":
        A = float(cc["signal_params"][0])
        mu = order.mu
        left_exp = min(mu - 1.0, 0.0)

        def psi(t):
            g = tp.gamma(t)
            E = mittag_leffler(order.alpha, mu, -A * g ** order.alpha).real
            return tp.rho_at_zero / tp.rho(t) * g ** (mu - 1.0) * E

        expected = lambda t: -A * psi(t)
    else:
        raise ConfigError("hilfer signal must be 'power' or 'mlf'")
    outer_exp = min(order.alpha - order.m, 0.0) if cc["signal"] == "mlf" else 0.0
    # the eigen-signal check is a diagnostic: with a singular signal the
    # composition is origin-FD-limited to ~1e-3, so spend accordingly
    extra = {"inner_epsabs": 3e-9, "fd_step": 2e-3} if cc["signal"] == "mlf" else {}
    rows = []
    for t in cfg["command"]["t"]:
        t = float(t)
        val = weighted_hilfer_derivative(psi, order, tp, t, left_exponent=left_exp,
                                         outer_left_exponent=outer_exp, **extra)
        row = [t, val]
        if expected is not None:
            row.append(expected(t))
        rows.append(row)
    cols = ["t", "hilfer_derivative"] + (["eigen_expected"] if expected else [])
    return ResultTable(columns=cols, rows=rows,
                       metadata=_meta(cfg, "hilfer", alpha=order.alpha,
                                      beta=order.beta, mu=order.mu))


# ---------------------------------------------------------------------------
# validate: the invariant suite

def _validation_checks():
    """Yield (name, residual, tolerance) for the full invariant suite."""
    from .profiles import pullback as pb

    checks = []

    def add(name, residual, tol):
        checks.append((name, float(residual), float(tol)))

    rng = np.random.default_rng(20240813)

    d_id = make_diffeomorphism("identity", dim=1)
    d_cub = make_diffeomorphism("cubic", dim=1)
    w1 = make_spatial_weight("one")
    wq = make_spatial_weight("one_plus_sq")
    tp = make_temporal_pair("linear", "one")
    g_id = build_grid(d_id, [(-16.0, 16.0)], [512])
    g_cub = build_grid(d_cub, [(-16.0, 16.0)], [512])

    gauss = u_profile("gaussian", [1.0])
    f_id = pb(g_id, w1, gauss)
    f_cub = pb(g_cub, wq, gauss)

    # transform block
    F = forward(f_cub, wq)
    back = inverse(F, wq, g_cub)
    add("roundtrip_deformed",
        np.linalg.norm(back.values - f_cub.values) / np.linalg.norm(f_cub.values), 1e-10)
    dxi = 2.0 * np.pi / (512 * g_cub.spacing[0])
    nrm2 = weighted_norm(f_cub, wq) ** 2
    add("plancherel", abs(nrm2 - np.sum(np.abs(F.values) ** 2) * dxi) / nrm2, 1e-8)
    Fg = forward(f_id, w1)
    xi = Fg.xi_axes[0]
    add("gaussian_spectrum", np.max(np.abs(Fg.values - np.exp(-xi ** 2 / 2.0))), 1e-8)
    from .transform import weighted_gradient, weighted_convolution
    grad = weighted_gradient(f_cub, wq, 0)
    Fgrad = forward(grad, wq)
    add("diagonalization",
        np.max(np.abs(Fgrad.values - 1j * xi * F.values)) / np.max(np.abs(F.values)), 1e-9)
    conv = weighted_convolution(f_cub, f_cub, wq)
    Fconv = forward(conv, wq)
    add("convolution_theorem",
        np.max(np.abs(Fconv.values - F.values ** 2)) / np.max(np.abs(F.values)), 1e-9)

    # special functions
    z = rng.uniform(-4, 4, 64) + 1j * rng.uniform(0.1, 4, 64)
    refl = np.abs(gamma_complex(z) * gamma_complex(1 - z) * np.sin(np.pi * z) / np.pi - 1.0)
    add("gamma_reflection", refl.max(), 1e-11)
    add("mlf_exp", abs(mittag_leffler(1.0, 1.0, -1.0) - math.exp(-1.0)), 1e-12)
    zz = np.linspace(0.0, 10.0, 21)
    add("mlf_cos", max(abs(mittag_leffler(2.0, 1.0, -v * v).real - math.cos(v)) for v in zz), 1e-10)
    add("mlf_at_zero", abs(mittag_leffler(0.7, 1.4, 0.0) - 1.0 / complex(gamma_complex(1.4))), 1e-12)

    # solver block (classical limits and route agreement)
    problem = HilferProblem(order=HilferOrder(1.0, 1.0), s=FractionalOrder(1.0),
                            diffusivity=1.0, geometry=d_id, weight=w1, temporal=tp)
    gk = build_grid(d_id, [(-30.0, 30.0)], [1024])
    G = green_spectral_route(gk, 1.0, problem)
    k0 = int(round(30.0 / gk.spacing[0]))
    add("heat_kernel", abs(G.values[k0] - (4 * math.pi) ** -0.5), 1e-6)
    ev_m = green_mellin_route(1.0, 1.0, problem)
    ev_f = green_foxh_route(1.0, 1.0, problem)
    true = (4 * math.pi) ** -0.5 * math.exp(-0.25)
    add("green_mellin_classical", abs(ev_m.value - true), 1e-6)
    add("green_foxh_vs_mellin", abs(ev_f.value - ev_m.value), 1e-8)
    p_poisson = HilferProblem(order=HilferOrder(1.0, 1.0), s=FractionalOrder(0.5),
                              diffusivity=1.0, geometry=d_id, weight=w1, temporal=tp)
    gp = build_grid(d_id, [(-2000.0, 2000.0)], [65536])
    Gp = green_spectral_route(gp, 1.0, p_poisson)
    kp = int(round(2000.0 / gp.spacing[0]))
    add("poisson_kernel", abs(Gp.values[kp] - 1.0 / math.pi) * math.pi, 1e-5)

    # uncertainty block
    fn = pb(g_id, w1, u_profile("normal_gaussian", [1.0]))
    fn = fn.__class__(grid=g_id, values=fn.values / weighted_norm(fn, w1))
    rep = dispersion_report(fn, w1)
    add("uncertainty_product", abs(rep.product - 0.5), 1e-6)
    add("uncertainty_bound", max(0.0, rep.bound * (1 - 1e-6) - rep.product), 0.0 + 1e-12)
    add("commutator", commutator_residual(fn, w1, 0, 0), 1e-6)

    # fractional operators
    fw = pb(g_id, w1, u_profile("wavelet", []))
    sp = fractional_laplacian_spectral(fw, w1, FractionalOrder(0.5))
    si = fractional_laplacian_singular(fw, w1, 0.5)
    add("hypersingular_vs_spectral",
        np.linalg.norm(si.values - sp.values) / np.linalg.norm(sp.values), 5e-2)
    add("sobolev_s0_is_norm",
        abs(sobolev_norm(f_cub, wq, 0.0) - weighted_norm(f_cub, wq)) / weighted_norm(f_cub, wq),
        1e-10)

    # temporal operators
    add("power_rule",
        abs(weighted_fractional_integral(lambda t: 1.0, 0.5, tp, 1.0)
            - 1.0 / complex(gamma_complex(1.5)).real), 1e-9)
    inner = lambda tau: weighted_fractional_integral(lambda t: 1.0, 0.3, tp, tau) if tau > 0 else 0.0
    add("semigroup",
        abs(weighted_fractional_integral(inner, 0.45, tp, 1.0)
            - weighted_fractional_integral(lambda t: 1.0, 0.75, tp, 1.0)), 1e-7)
    tpe = make_temporal_pair("linear", "exp")
    add("caputo_annihilation",
        abs(weighted_hilfer_derivative(lambda t: 2.0 / math.exp(t),
                                       HilferOrder(0.6, 1.0), tpe, 1.2)), 1e-8)
    add("mu_consistency",
        abs(HilferOrder(0.7, 0.0).mu - 0.7) + abs(HilferOrder(0.7, 1.0).mu - 1.0)
        + abs(HilferOrder(1.5, 1.0).mu - 2.0), 1e-15)

    # phi-Mellin golden pairs
    add("mellin_gamma", abs(mellin_forward(lambda x: math.exp(-x), 2.0) - 1.0), 1e-8)
    add("mellin_sine", abs(mellin_forward(lambda x: 1.0 / (1.0 + x), 0.5) - math.pi), 1e-8)

    return checks


def _cmd_validate(cfg: RunConfig) -> tuple[ResultTable, int]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderResolvedWarning)
        checks = _validation_checks()
    rows = [[name, resid, tol, "pass" if resid <= tol else "FAIL"]
            for name, resid, tol in checks]
    ok = all(r[3] == "pass" for r in rows)
    table = ResultTable(columns=["check", "residual", "tolerance", "status"],
                        rows=rows,
                        metadata=_meta(cfg, "validate", all_pass=ok))
    return table, EXIT_OK if ok else EXIT_VALIDATION


def run_command(cmd: str, cfg: RunConfig):
    """Dispatch a subcommand; returns (ResultTable, exit_status)."""
    handlers = {
        "transform": _cmd_transform, "laplacian": _cmd_laplacian,
        "mlf": _cmd_mlf, "hfun": _cmd_hfun, "mellin": _cmd_mellin,
        "uncertainty": _cmd_uncertainty, "green": _cmd_green,
        "solve": _cmd_solve, "hilfer": _cmd_hilfer,
    }
    if cmd == "validate":
        return _cmd_validate(cfg)
    if cmd not in handlers:
        raise ConfigError(f"unknown command {cmd!r}; choose from {COMMANDS}")
    return handlers[cmd](cfg), EXIT_OK


def _plot_table(table: ResultTable, path: str) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise ConfigError("plot output requires matplotlib "
                          "(install the 'plots' extra)") from exc
    cols = table.columns
    numeric = [[c for c in row] for row in table.rows]
    xs = [row[0] for row in numeric]
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(1, min(len(cols), 4)):
        try:
            ys = [float(row[j]) for row in numeric]
        except (TypeError, ValueError):
            continue
        ax.plot(xs, ys, label=cols[j])
    ax.set_xlabel(cols[0])
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wspectral",
                                 description="weighted spectral calculus toolkit")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON configuration file")
    ap.add_argument("--output", help="output table path (default: stdout)")
    ap.add_argument("--plot", help="write an SVG rendering of the table")
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--beta", type=float)
    ap.add_argument("--s", type=float)
    ap.add_argument("--lambda", dest="lam", type=float)
    ap.add_argument("--dim", type=int)
    ap.add_argument("--geometry")
    ap.add_argument("--geometry-params")
    ap.add_argument("--weight")
    ap.add_argument("--weight-params")
    ap.add_argument("--gamma")
    ap.add_argument("--rho")
    ap.add_argument("--bounds", help="per-axis a,b pairs separated by ';'")
    ap.add_argument("--sizes", help="per-axis node counts, comma separated")
    ap.add_argument("--t", help="comma-separated evaluation times")
    ap.add_argument("--probes", help="probe points: components by ',', points by ';'")
    ap.add_argument("--routes", help="comma-separated subset of spectral,mellin,foxh")
    ap.add_argument("--mu", type=float, help="Mittag-Leffler second parameter")
    ap.add_argument("--z", help="complex argument re[,im]")
    ap.add_argument("--Z", type=float, help="similarity argument for hfun")
    ap.add_argument("--function", help="profile name for grid commands")
    ap.add_argument("--function-params")
    ap.add_argument("--order", type=float, help="fractional order for laplacian")
    ap.add_argument("--form", choices=["spectral", "singular"])
    ap.add_argument("--mellin-s", help="Mellin point re[,im]")
    ap.add_argument("--mellin-function", choices=sorted(_MELLIN_FUNCTIONS))
    ap.add_argument("--inverse", action="store_true", help="Mellin inversion mode")
    ap.add_argument("--x", type=float, help="evaluation point for Mellin inversion")
    ap.add_argument("--abscissa", type=float)
    ap.add_argument("--signal", choices=["power", "mlf"])
    ap.add_argument("--signal-params")
    return ap


def _floats(text):
    return [float(v) for v in text.split(",") if v != ""]


def _overrides_from_args(args) -> dict:
    ov: dict = {}

    def setd(section, key, value):
        if value is not None:
            ov.setdefault(section, {})[key] = value

    setd("problem", "alpha", args.alpha)
    setd("problem", "beta", args.beta)
    setd("problem", "s", args.s)
    setd("problem", "lambda", args.lam)
    setd("geometry", "dim", args.dim)
    setd("geometry", "name", args.geometry)
    if args.geometry_params is not None:
        setd("geometry", "params", _floats(args.geometry_params))
    setd("weight", "name", args.weight)
    if args.weight_params is not None:
        setd("weight", "params", _floats(args.weight_params))
    setd("temporal", "gamma", args.gamma)
    setd("temporal", "rho", args.rho)
    if args.bounds is not None:
        setd("grid", "bounds", [_floats(b) for b in args.bounds.split(";")])
    if args.sizes is not None:
        setd("grid", "sizes", [int(v) for v in args.sizes.split(",")])
    if args.t is not None:
        setd("command", "t", _floats(args.t))
    if args.probes is not None:
        setd("command", "probes", [_floats(p) for p in args.probes.split(";")])
    if args.routes is not None:
        setd("command", "routes", args.routes.split(","))
    setd("command", "mu", args.mu)
    if args.z is not None:
        setd("command", "z", _floats(args.z))
    setd("command", "Z", args.Z)
    setd("command", "function", args.function)
    if args.function_params is not None:
        setd("command", "function_params", _floats(args.function_params))
    setd("command", "order", args.order)
    setd("command", "form", args.form)
    if args.mellin_s is not None:
        setd("command", "mellin_s", _floats(args.mellin_s))
    setd("command", "mellin_function", args.mellin_function)
    if args.inverse:
        setd("command", "inverse", True)
    setd("command", "x", args.x)
    setd("command", "abscissa", args.abscissa)
    setd("command", "signal", args.signal)
    if args.signal_params is not None:
        setd("command", "signal_params", _floats(args.signal_params))
    if args.output is not None:
        setd("output", "path", args.output)
    if args.plot is not None:
        setd("output", "plot", args.plot)
    return ov


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config, _overrides_from_args(args))
    except ConfigError as exc:
        print(f"error: configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default", UnderResolvedWarning)
            result = run_command(args.command, cfg)
    except ConfigError as exc:
        print(f"error: configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ContourError, MittagLefflerError, SpecialFunctionError,
            QuadratureError, MellinDivergenceError) as exc:
        print(f"error: numerical non-convergence: {exc}", file=sys.stderr)
        print(f"detail: {type(exc).__name__}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"detail: {type(exc).__name__}", file=sys.stderr)
        return EXIT_VALIDATION

    table, status = result if isinstance(result, tuple) else (result, EXIT_OK)
    out_path = cfg["output"]["path"]
    if out_path:
        table.write(out_path)
    else:
        print("\n".join(table.format_lines()))
    if cfg["output"]["plot"]:
        try:
            _plot_table(table, cfg["output"]["plot"])
        except ConfigError as exc:
            print(f"error: configuration: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    return status


if __name__ == "__main__":
    sys.exit(main())
