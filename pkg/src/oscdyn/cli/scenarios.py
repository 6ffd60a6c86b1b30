"""Evaluate scenarios and write their CSV and SVG files.

Everything is computed in memory first; files are written only after every
series has been evaluated, so a failing run leaves the output directory
untouched.
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..chain import chain_excitations_series, scaled_excitations
from ..pair import pair_energies_series
from ..phase_space import CoherentInit, husimi_coherent_single, husimi_number_reduced, maxima_trajectory, \
    maxima_trajectory_series
from ..quadrature import QuadratureConfig, QuadratureError
from .config import ConfigError, Scenario, load_config
from .csvio import csv_bytes
from .svg import HeatMap, Series, Style, emit_figure


class ScenarioError(RuntimeError):
    pass


@dataclass
class RunResult:
    files: list
    max_deviation: Optional[float] = None
    tolerance: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.max_deviation is None or self.max_deviation <= self.tolerance


def _stem(sc: Scenario, s) -> str:
    return sc.name if len(sc.series) == 1 and s.ident == sc.name else f"{sc.name}_{s.ident}"


def _scaled(values, params):
    """Multiply by k^2/F^2 when both are non-zero."""
    F = params.drive.constant
    if params.k > 0 and F != 0 and params.drive.profile is None:
        return np.asarray(values) * params.k ** 2 / F ** 2
    return None


# -- kinds ------------------------------------------------------------------

def _pair_energy(sc, s, cfg):
    t = sc.output.time_grid()
    p = s.params
    e1, e2 = pair_energies_series(p, s.envelope, s.initial["n1"], s.initial["n2"], t, cfg)
    cols = {"t": t, "kt": p.k * t, "e1": e1, "e2": e2}
    if _scaled(e2, p) is not None:
        cols.update(e1_scaled=_scaled(e1, p), e2_scaled=_scaled(e2, p))
    return cols


def _maxima_path(sc, s, cfg):
    t = sc.output.time_grid()
    p = s.params
    init = CoherentInit(s.initial["alpha0"], s.initial["beta0"])
    nu1, nu2 = maxima_trajectory_series(p, s.envelope, init, t, cfg)
    # frame co-rotating with the drive removes the trivial e^{-i omegaL t} spin
    rot = np.exp(1j * p.omegaL * t)
    return {"t": t, "kt": p.k * t, "nu1": nu1, "nu2": nu2, "nu1_drive_frame": nu1 * rot, "nu2_drive_frame": nu2 * rot}


def _chain(sc, s, cfg):
    t = sc.output.time_grid()
    p = s.params
    exc = chain_excitations_series(p, s.envelope, t, cfg)
    scaled = scaled_excitations(exc, p.k, p.drive.constant)
    cols = {"t": t, "tau": p.k * t}
    for i in range(p.chain_size):
        cols[f"n{i + 1}"] = scaled[:, i]
    return cols


def _axes(out):
    x = np.linspace(-out.extent, out.extent, out.grid)
    return x, x.copy()


def _husimi_grid(sc, s, cfg, t):
    out = sc.output
    x, y = _axes(out)
    alpha = x[None, :] + 1j * y[:, None]
    init = CoherentInit(s.initial["alpha0"], s.initial["beta0"])
    q = husimi_coherent_single(s.params, s.envelope, init, s.params.nbar_b, t, alpha, out.oscillator, cfg)
    nu = maxima_trajectory(s.params, s.envelope, init, t, cfg)[out.oscillator - 1]
    return x, y, np.asarray(q, float), nu


def _husimi_reduced(sc, s, cfg, t):
    out = sc.output
    x, y = _axes(out)
    alpha = x[None, :] + 1j * y[:, None]
    q = husimi_number_reduced(s.params, s.envelope, s.initial["number"], s.params.nbar_b, t, alpha, cfg)
    return x, y, np.asarray(q, float), None


def _oracle_compare(sc, s, cfg):
    # imported here so that ordinary runs never touch the brute-force engines
    from ..oracle.linear import linear_mode_trajectory, occupations

    t = sc.output.time_grid()
    p = s.params
    n = p.chain_size
    states = linear_mode_trajectory(p, s.envelope, t)
    cols = {"t": t, "kt": p.k * t}
    if n == 2:
        init = [s.initial["n1"], s.initial["n2"], p.nbar_b, p.nbar_c]
        closed = np.column_stack(pair_energies_series(p, s.envelope, s.initial["n1"], s.initial["n2"], t, cfg))
    else:
        init = [0.0] * (2 * n)
        closed = chain_excitations_series(p, s.envelope, t, cfg)
    brute = np.array([occupations(st, init)[:n] for st in states])
    for i in range(n):
        cols[f"closed_n{i + 1}"] = closed[:, i]
        cols[f"oracle_n{i + 1}"] = brute[:, i]
    cols["max_abs_diff"] = np.max(np.abs(closed - brute), axis=1)
    return cols


TIME_SERIES = {
    "pair-energy": _pair_energy,
    "maxima-path": _maxima_path,
    "chain-excitations": _chain,
    "oracle-compare": _oracle_compare,
}
GRIDS = {"husimi-grid": _husimi_grid, "husimi-reduced": _husimi_reduced}


# -- figures ----------------------------------------------------------------

def _time_series_outputs(sc, results):
    files = []
    for s, cols in zip(sc.series, results):
        files.append((f"{_stem(sc, s)}.csv", csv_bytes(cols)))
    kind = sc.kind
    if kind == "pair-energy":
        scaled = all("e2_scaled" in c for c in results)
        key = "e2_scaled" if scaled else "e2"
        xkey = "kt" if all(s.params.k > 0 for s in sc.series) else "t"
        lines = [Series(s.label, c[xkey], c[key]) for s, c in zip(sc.series, results)]
        style = Style(sc.name, xkey, "E₂k²/F²" if scaled else "E₂ (quanta)")
        files.append((f"{sc.name}.svg", emit_figure(lines, style)))
    elif kind == "maxima-path":
        lines = [Series(s.label, c["nu2_drive_frame"].real, c["nu2_drive_frame"].imag)
                 for s, c in zip(sc.series, results)]
        style = Style(sc.name, "Re ν₂ e^{iω_L t}", "Im ν₂ e^{iω_L t}", equal_aspect=True)
        files.append((f"{sc.name}.svg", emit_figure(lines, style)))
    elif kind == "chain-excitations":
        for s, c in zip(sc.series, results):
            lines = [Series(f"n{i + 1}", c["tau"], c[f"n{i + 1}"]) for i in range(s.params.chain_size)]
            title = f"{sc.name} {s.label}"
            files.append((f"{_stem(sc, s)}.svg", emit_figure(lines, Style(title, "k₀t", "n_i"))))
    elif kind == "oracle-compare":
        lines = [Series(s.label, c["kt"], c["max_abs_diff"]) for s, c in zip(sc.series, results)]
        files.append((f"{sc.name}.svg", emit_figure(lines, Style(sc.name, "kt", "|closed − oracle|"))))
    return files


def _grid_outputs(sc, tasks, results):
    files = []
    for (s, idx, t), (x, y, q, nu) in zip(tasks, results):
        stem = f"{_stem(sc, s)}_t{idx}"
        X, Y = np.meshgrid(x, y)
        files.append((f"{stem}.csv", csv_bytes({"re": X.ravel(), "im": Y.ravel(), "q": q.ravel()})))
        marker = None if nu is None else (nu.real, nu.imag)
        osc = sc.output.oscillator if sc.kind == "husimi-grid" else 2
        style = Style(f"{s.label}  kt={s.params.k * t:.6g}", f"Re α{osc}", f"Im α{osc}")
        files.append((f"{stem}.svg", emit_figure(HeatMap(x, y, q, marker), style)))
    return files


# -- driver -----------------------------------------------------------------

def apply_overrides(sc: Scenario, grid: Optional[int] = None, tol: Optional[float] = None,
                    oracle_tol: Optional[float] = None) -> Scenario:
    out = sc.output
    changes = {}
    if grid is not None:
        if grid < 2:
            raise ConfigError(f"--grid must be at least 2, got {grid}")
        changes["grid" if sc.kind in GRIDS else "samples"] = grid
    if tol is not None:
        if not tol > 0:
            raise ConfigError("--tol must be positive")
        changes["quad_tol"] = tol
    if oracle_tol is not None:
        if not oracle_tol > 0:
            raise ConfigError("--tol must be positive")
        changes["tolerance"] = oracle_tol
    if changes:
        sc = dataclasses.replace(sc, output=dataclasses.replace(out, **changes))
    return sc


def evaluate(sc: Scenario, threads: int = 1):
    """(filename, bytes) pairs for every output, and the oracle deviation (or None)."""
    cfg = QuadratureConfig(abs_tol=sc.output.quad_tol, rel_tol=sc.output.quad_tol)
    threads = max(1, int(threads))
    try:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            if sc.kind in TIME_SERIES:
                fn = TIME_SERIES[sc.kind]
                results = list(pool.map(lambda s: fn(sc, s, cfg), sc.series))
                dev = None
                if sc.kind == "oracle-compare":
                    dev = max(float(np.max(c["max_abs_diff"])) for c in results)
                return _time_series_outputs(sc, results), dev
            fn = GRIDS[sc.kind]
            tasks = [(s, i, t) for s in sc.series for i, t in enumerate(sc.output.times)]
            results = list(pool.map(lambda task: fn(sc, task[0], cfg, task[2]), tasks))
            return _grid_outputs(sc, tasks, results), None
    except QuadratureError as exc:
        raise ScenarioError(f"{sc.name}: quadrature accuracy not reached: {exc}") from None


def write_outputs(outputs, directory) -> list:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ScenarioError(f"cannot create output directory {directory}: {exc.strerror}") from None
    paths = []
    for name, data in outputs:
        path = directory / name
        path.write_bytes(data)
        paths.append(path)
    return paths


def run_scenario(config, out_dir=None, threads: int = 1, grid: Optional[int] = None,
                 tol: Optional[float] = None, oracle_tol: Optional[float] = None) -> RunResult:
    """Run a scenario given as a path or a parsed ``Scenario``."""
    sc = config if isinstance(config, Scenario) else load_config(config)
    sc = apply_overrides(sc, grid, tol, oracle_tol)
    outputs, dev = evaluate(sc, threads)
    directory = out_dir if out_dir is not None else sc.output.directory
    paths = write_outputs(outputs, directory)
    if dev is None:
        return RunResult(paths)
    return RunResult(paths, dev, sc.output.tolerance)
