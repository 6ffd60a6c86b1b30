"""Scenario runner: INI configs in, CSV and SVG files out."""
from .config import ConfigError, Scenario, load_config, parse_config
from .csvio import read_csv, write_csv
from .scenarios import RunResult, ScenarioError, run_scenario
from .svg import FigureError, HeatMap, Series, Style, emit_figure
