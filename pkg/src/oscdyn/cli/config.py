"""Scenario configuration files.

INI syntax (``configparser``) with a versioned schema.  Every section and key
is checked against the schema; unknown names are errors so that a figure is
always reproduced from exactly the values written down.

    [scenario]       schema_version, name, kind
    [system]         omega0, k, omega_l, drive, nbar_b, nbar_c, chain_size
    [envelope]       model (constant | markovian), g, gamma
    [initial]        n1, n2, alpha0, beta0, number
    [output]         t_start, t_stop, samples, times, grid, extent, oscillator,
                     tolerance, quad_tol, directory
    [series:<id>]    label plus any [system], [envelope] or [initial] key

Each ``[series:<id>]`` section yields one data series whose values override
the base sections.  Without series sections the base values form a single
series named after the scenario.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..core import ConstantG, DampingEnvelope, DomainError, DriveSpec, Markovian, SystemParams

SCHEMA_VERSION = 1
KINDS = ("pair-energy", "maxima-path", "husimi-grid", "husimi-reduced", "chain-excitations", "oracle-compare")
MODELS = ("constant", "markovian")


class ConfigError(ValueError):
    pass


def _float(v):
    return float(v)


def _int(v):
    return int(v)


def _complex(v):
    return complex(v.replace(" ", ""))


def _floats(v):
    return tuple(float(x) for x in v.split(",") if x.strip())


def _str(v):
    return v.strip()


SCHEMA = {
    "scenario": {"schema_version": _int, "name": _str, "kind": _str},
    "system": {"omega0": _float, "k": _float, "omega_l": _float, "drive": _float,
               "nbar_b": _float, "nbar_c": _float, "chain_size": _int},
    "envelope": {"model": _str, "g": _float, "gamma": _float},
    "initial": {"n1": _float, "n2": _float, "alpha0": _complex, "beta0": _complex, "number": _int},
    "output": {"t_start": _float, "t_stop": _float, "samples": _int, "times": _floats, "grid": _int,
               "extent": _float, "oscillator": _int, "tolerance": _float, "quad_tol": _float,
               "directory": _str},
}
SERIES_KEYS = {"label": _str, **SCHEMA["system"], **SCHEMA["envelope"], **SCHEMA["initial"]}

DEFAULTS = {
    "system": {"k": 1.0, "omega_l": 0.0, "drive": 0.0, "nbar_b": 0.0, "nbar_c": 0.0, "chain_size": 2},
    "envelope": {"model": "constant", "g": 0.0, "gamma": 0.0},
    "initial": {"n1": 0.0, "n2": 0.0, "alpha0": 0j, "beta0": 0j, "number": 0},
    "output": {"t_start": 0.0, "samples": 201, "times": (), "grid": 61, "extent": 3.0, "oscillator": 2,
               "tolerance": 1e-8, "quad_tol": 1e-10, "directory": "."},
}


@dataclass
class SeriesSpec:
    ident: str
    label: str
    params: SystemParams
    envelope: DampingEnvelope
    initial: dict


@dataclass
class OutputSpec:
    t_start: float
    t_stop: Optional[float]
    samples: int
    times: tuple
    grid: int
    extent: float
    oscillator: int
    tolerance: float
    quad_tol: float
    directory: str

    def time_grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_stop, self.samples)


@dataclass
class Scenario:
    name: str
    kind: str
    series: list
    output: OutputSpec
    source: Optional[str] = None
    notes: dict = field(default_factory=dict)


def _line_index(text: str) -> dict:
    """(section, key) -> line number, and (section, None) -> header line."""
    out, section = {}, None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"\[(.+)\]$", line)
        if m:
            section = m.group(1).strip()
            out[(section, None)] = i
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", line)
        if m and section is not None:
            out.setdefault((section, m.group(1).strip().lower()), i)
    return out


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = _line_index(text)
        self.cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
        try:
            self.cp.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from None

    def where(self, section, key=None) -> str:
        line = self.lines.get((section, key))
        loc = f"[{section}]" + (f" {key}" if key else "")
        return f"{self.source}:{line}: {loc}" if line else f"{self.source}: {loc}"

    def section(self, name: str, schema: dict) -> dict:
        if not self.cp.has_section(name):
            return {}
        out = {}
        for key, raw in self.cp.items(name):
            if key not in schema:
                raise ConfigError(f"{self.where(name, key)}: unknown key (allowed: {', '.join(schema)})")
            try:
                out[key] = schema[key](raw)
            except ValueError:
                raise ConfigError(f"{self.where(name, key)}: cannot parse {raw!r}") from None
        return out


def _envelope(values: dict, where: str) -> DampingEnvelope:
    model = values["model"]
    if model not in MODELS:
        raise ConfigError(f"{where}: model must be one of {MODELS}, got {model!r}")
    try:
        if model == "markovian":
            return Markovian(values["gamma"])
        return ConstantG(values["g"])
    except (DomainError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _params(values: dict, where: str) -> SystemParams:
    if "omega0" not in values:
        raise ConfigError(f"{where}: omega0 is required")
    try:
        return SystemParams(omega0=values["omega0"], k=values["k"], omegaL=values["omega_l"],
                            drive=DriveSpec(values["drive"]), nbar_b=values["nbar_b"],
                            nbar_c=values["nbar_c"], chain_size=values["chain_size"])
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _validate(sc: Scenario, rd: _Reader) -> None:
    out = sc.output
    needs_range = sc.kind in ("pair-energy", "maxima-path", "chain-excitations", "oracle-compare")
    if needs_range:
        if out.t_stop is None:
            raise ConfigError(f"{rd.where('output')}: t_stop is required for kind {sc.kind}")
        if not out.t_stop > out.t_start or out.t_start < 0:
            raise ConfigError(f"{rd.where('output', 't_stop')}: empty or negative time range "
                              f"[{out.t_start}, {out.t_stop}]")
        if out.samples < 2:
            raise ConfigError(f"{rd.where('output', 'samples')}: need at least 2 samples, got {out.samples}")
    else:
        if not out.times:
            raise ConfigError(f"{rd.where('output')}: times is required for kind {sc.kind}")
        if min(out.times) < 0:
            raise ConfigError(f"{rd.where('output', 'times')}: times must be non-negative")
        if out.grid < 2:
            raise ConfigError(f"{rd.where('output', 'grid')}: grid needs at least 2 points per axis")
        if not out.extent > 0:
            raise ConfigError(f"{rd.where('output', 'extent')}: extent must be positive")
        if out.oscillator not in (1, 2):
            raise ConfigError(f"{rd.where('output', 'oscillator')}: oscillator must be 1 or 2")
    if out.tolerance <= 0 or out.quad_tol <= 0:
        raise ConfigError(f"{rd.where('output')}: tolerances must be positive")
    for s in sc.series:
        p = s.params
        if sc.kind == "chain-excitations" and p.drive.is_zero:
            raise ConfigError(f"series {s.ident}: chain excitations are scaled by F and need drive != 0")
        if sc.kind in ("husimi-grid", "husimi-reduced") and p.nbar_b != p.nbar_c:
            raise ConfigError(f"series {s.ident}: phase-space kinds need equal baths (nbar_b == nbar_c)")
        if sc.kind in ("pair-energy", "maxima-path", "husimi-grid", "husimi-reduced") and p.chain_size != 2:
            raise ConfigError(f"series {s.ident}: kind {sc.kind} describes a pair, chain_size must be 2")
        if p.chain_size > 2 and (p.nbar_b or p.nbar_c):
            raise ConfigError(f"series {s.ident}: the chain closed form assumes vacuum baths")
        if sc.kind == "husimi-reduced" and s.initial["number"] < 0:
            raise ConfigError(f"series {s.ident}: number must be non-negative")
        if min(s.initial["n1"], s.initial["n2"]) < 0:
            raise ConfigError(f"series {s.ident}: initial occupations must be non-negative")


def parse_config(text: str, source: str = "<config>") -> Scenario:
    rd = _Reader(text, source)
    known = set(SCHEMA)
    for name in rd.cp.sections():
        if name not in known and not name.startswith("series:"):
            raise ConfigError(f"{rd.where(name)}: unknown section")
    head = rd.section("scenario", SCHEMA["scenario"])
    for key in ("schema_version", "name", "kind"):
        if key not in head:
            raise ConfigError(f"{rd.where('scenario')}: {key} is required")
    if head["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"{rd.where('scenario', 'schema_version')}: unsupported schema version "
                          f"{head['schema_version']} (expected {SCHEMA_VERSION})")
    if head["kind"] not in KINDS:
        raise ConfigError(f"{rd.where('scenario', 'kind')}: unknown kind {head['kind']!r} (one of {', '.join(KINDS)})")
    if not re.fullmatch(r"[A-Za-z0-9_.-]+", head["name"]):
        raise ConfigError(f"{rd.where('scenario', 'name')}: name may use letters, digits, '_', '.', '-'")

    base = {sec: {**DEFAULTS.get(sec, {}), **rd.section(sec, SCHEMA[sec])} for sec in ("system", "envelope", "initial")}
    out_vals = {**DEFAULTS["output"], "t_stop": None, **rd.section("output", SCHEMA["output"])}
    output = OutputSpec(**out_vals)

    series = []
    series_sections = [s for s in rd.cp.sections() if s.startswith("series:")]
    if not series_sections:
        series_sections = [None]
    for sec in series_sections:
        ident = head["name"] if sec is None else sec.split(":", 1)[1].strip()
        if not re.fullmatch(r"[A-Za-z0-9_.-]+", ident):
            raise ConfigError(f"{rd.where(sec)}: series id may use letters, digits, '_', '.', '-'")
        over = {} if sec is None else rd.section(sec, SERIES_KEYS)
        merged = {name: {**vals, **{k: v for k, v in over.items() if k in SCHEMA[name]}}
                  for name, vals in base.items()}
        where = rd.where(sec) if sec else rd.where("system")
        series.append(SeriesSpec(
            ident=ident,
            label=over.get("label", ident),
            params=_params(merged["system"], where),
            envelope=_envelope(merged["envelope"], where),
            initial=merged["initial"],
        ))
    sc = Scenario(head["name"], head["kind"], series, output, source)
    _validate(sc, rd)
    return sc


def load_config(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))
