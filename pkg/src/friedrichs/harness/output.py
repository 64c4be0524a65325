"""Run directories: config echo, paired series CSV, flat metrics, gnuplot scripts."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .scenarios import PoleReport, ScenarioReport, Series

__all__ = ["SERIES_COLUMNS", "write_report", "write_pole", "read_series", "read_metrics", "format_metrics"]

SERIES_COLUMNS = ("grid", "re_total", "im_total", "abs2_total",
                  "re_restr", "im_restr", "abs2_restr", "abs2_residual")

_AXES = {
    "survival": ("t", "|<1|exp(-iHt)|1>|^2", True),
    "survival_cn4": ("t", "|<1|exp(-iHt)|1>|^2", True),
    "emission": ("x", "|<x|exp(-iHt)|1>|^2", False),
    "correlation": ("x1", "|<x1|exp(-iHt)|x2>|^2", True),
}


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, complex):
        return f"{value.real:.15g}{value.imag:+.15g}j"
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.15g}"


def format_metrics(metrics: dict) -> str:
    return "".join(f"{key} = {_fmt(value)}\n" for key, value in metrics.items())


def _pole_lines(pole) -> dict:
    return {"pole_z_re": pole.z.real, "pole_z_im": pole.z.imag,
            "pole_N_re": pole.residue_N.real, "pole_N_im": pole.residue_N.imag}


def _series_text(s: Series) -> str:
    rows = np.column_stack([
        s.grid,
        s.total.real, s.total.imag, np.abs(s.total) ** 2,
        s.restricted.real, s.restricted.imag, np.abs(s.restricted) ** 2,
        np.abs(s.residual) ** 2,
    ])
    body = "\n".join(",".join(f"{v:.15g}" for v in row) for row in rows)
    return ",".join(SERIES_COLUMNS) + "\n" + body + "\n"


def _gnuplot(s: Series) -> str:
    xlabel, ylabel, logscale = _AXES.get(s.name, ("grid", "|amplitude|^2", False))
    lines = [
        "set datafile separator ','",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set key top right",
    ]
    if logscale:
        lines.append("set logscale y")
    lines += [
        "set terminal pngcairo size 900,600",
        f"set output 'series_{s.name}.png'",
        f"plot 'series_{s.name}.csv' using 1:4 with lines title 'total', \\",
        f"     'series_{s.name}.csv' using 1:7 with lines dashtype 2 title 'restricted'",
    ]
    return "\n".join(lines) + "\n"


def write_report(report: ScenarioReport, out_dir) -> Path:
    """Write one run directory and return its path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.echo").write_text(report.config_echo)
    for s in report.series:
        (out / f"series_{s.name}.csv").write_text(_series_text(s))
        (out / f"plot_{s.name}.gp").write_text(_gnuplot(s))
    text = f"scenario = {report.scenario}\n" + format_metrics({**_pole_lines(report.pole), **report.metrics})
    (out / "metrics.txt").write_text(text)
    return out


def write_pole(report: PoleReport, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.echo").write_text(report.config_echo)
    (out / "metrics.txt").write_text(format_metrics(report.metrics))
    return out


def read_series(path) -> dict:
    """Columns of a series CSV as float arrays keyed by name."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(SERIES_COLUMNS)}


def read_metrics(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        key, _, value = line.partition(" = ")
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out
