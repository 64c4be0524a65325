"""The three decay scenarios and the pole report.

Each scenario pairs the total evolution of the discretized model with the
restricted pole prediction on one grid.  Metrics are computed from the
stored series only, so a report can be re-checked from its CSV files.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..evolution import cn4_amplitudes, diagonalize, exact_amplitudes, make_state, select_dt
from ..model import assemble_hamiltonian, discretize, form_factor, position_row
from ..restriction import (
    free_field_correlation,
    restricted_correlation,
    restricted_emission,
    restricted_survival,
)
from ..spectral import LevelShift, ResonancePole, default_guess, find_pole
from .config import RunConfig, parse_dt_policy

__all__ = [
    "Series",
    "ScenarioReport",
    "PoleReport",
    "run_survival",
    "run_emission",
    "run_correlation",
    "report_pole",
    "uniform_grid",
    "fitted_decay_rate",
    "front_position",
    "local_peaks",
]


@dataclass(frozen=True)
class Series:
    """Total and restricted amplitudes on one grid, plus the free part."""

    name: str
    grid: np.ndarray = field(repr=False)
    total: np.ndarray = field(repr=False)
    restricted: np.ndarray = field(repr=False)
    free: np.ndarray | None = field(default=None, repr=False)

    @property
    def residual(self) -> np.ndarray:
        free = 0.0 if self.free is None else self.free
        return self.total - free - self.restricted


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    config_echo: str
    pole: ResonancePole
    series: tuple
    metrics: dict

    def get(self, name: str) -> Series:
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True)
class PoleReport:
    config_echo: str
    pole: ResonancePole
    metrics: dict


def uniform_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Integer multiples of ``step`` inside [lo, hi]; symmetric ranges stay symmetric."""
    k0 = math.ceil(lo / step - 1e-9)
    k1 = math.floor(hi / step + 1e-9)
    return step * np.arange(k0, k1 + 1)


def _rel_l2(p, q) -> float:
    den = np.linalg.norm(p)
    return float(np.linalg.norm(p - q) / den) if den > 0 else float(np.linalg.norm(q))


def _fraction(part, whole) -> float:
    den = np.linalg.norm(whole)
    return float(np.linalg.norm(part) / den) if den > 0 else math.nan


def fitted_decay_rate(t, prob) -> float:
    """Minus the least-squares slope of log(prob) against t."""
    slope = np.polyfit(np.asarray(t, float), np.log(np.asarray(prob, float)), 1)[0]
    return float(-slope)


def front_position(x, prob) -> float:
    """Position of the steepest drop of ``prob`` (centered differences) on x > 0."""
    x = np.asarray(x, float)
    p = np.asarray(prob, float)
    d = np.full(p.shape, np.inf)
    d[1:-1] = (p[2:] - p[:-2]) / (x[2:] - x[:-2])
    d[x <= 0] = np.inf
    return float(x[np.argmin(d)])


def local_peaks(x, values, count: int) -> np.ndarray:
    """x at the ``count`` largest strict local maxima, sorted by position."""
    v = np.asarray(values, float)
    inner = np.flatnonzero((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:])) + 1
    best = inner[np.argsort(-v[inner], kind="stable")[:count]]
    return np.sort(np.asarray(x, float)[best])


def _pole(cfg: RunConfig) -> ResonancePole:
    return find_pole(LevelShift(cfg.params), tol=cfg.pole_tol)


def _model(cfg: RunConfig):
    dm = discretize(cfg.params, cfg.box_L, cfg.n_modes)
    return dm, assemble_hamiltonian(dm)


# ---------------------------------------------------------------------------

def run_survival(cfg: RunConfig) -> ScenarioReport:
    """<1|e^{-iHt}|1>: exact on the full t-grid, CN4 forward, restricted pole terms."""
    pole = _pole(cfg)
    dm, H = _model(cfg)
    t = uniform_grid(cfg.survival_t_min, cfg.survival_t_max, cfg.survival_t_step)

    started = time.perf_counter()
    sd = diagonalize(H)
    one = make_state("discrete", dm)
    total = exact_amplitudes(sd, one, one, t).values
    restr = restricted_survival(pole, t)
    exact_seconds = time.perf_counter() - started

    # CN4 runs forward only; its samples are the grid points t >= 0
    fixed = parse_dt_policy(cfg.dt_policy)
    t_fwd = t[t >= -1e-12]
    t_max = float(t_fwd[-1])
    if fixed is None:
        sel = select_dt(H, one, one, t_max, dt0=cfg.dt0, tol=cfg.dt_tol)
        dt, halvings = sel.dt, len(sel.deviations)
    else:
        dt, halvings = fixed, 0
    stride = t_fwd / dt
    if np.max(np.abs(stride - np.round(stride))) > 1e-6:
        raise ValueError(f"survival t-step must be a multiple of dt={dt:g}")
    n_steps = int(round(t_max / dt))
    cn4, drift = cn4_amplitudes(H, one, one, dt, n_steps)
    cn4_fine, drift_fine = cn4_amplitudes(H, one, one, dt / 2, 2 * n_steps)
    ref = exact_amplitudes(sd, one, one, cn4.grid).values
    dev = float(np.max(np.abs(cn4.values - ref)))
    dev_fine = float(np.max(np.abs(cn4_fine.values[::2] - ref)))
    idx = np.round(t_fwd / dt).astype(int)

    series = (
        Series("survival", t, total, restr),
        Series("survival_cn4", t_fwd, cn4.values[idx], restricted_survival(pole, t_fwd)),
    )

    p_tot = np.abs(total) ** 2
    p_res = np.abs(restr) ** 2
    win = (t >= cfg.fit_t_min) & (t <= cfg.fit_t_max)
    neg = (t <= -cfg.fit_t_min) & (t >= -cfg.fit_t_max)
    i0 = int(np.argmin(np.abs(t)))
    mirror = t[::-1]
    symmetric = np.allclose(mirror, -t, atol=1e-9)
    metrics = {
        "z_re": pole.z.real,
        "z_im": pole.z.imag,
        "decay_rate_pole": pole.decay_rate,
        "fitted_decay_rate": fitted_decay_rate(t[win], p_tot[win]),
        "max_rel_error": float(np.max(np.abs(p_tot[win] - p_res[win]) / p_res[win])),
        "max_rel_error_negative": float(np.max(np.abs(p_tot[neg] - p_res[neg]) / p_res[neg])) if neg.any() else math.nan,
        "rest_to_pole_max": float(np.max(np.abs(total[win] - restr[win]) / np.abs(restr[win]))),
        "l2_error": _rel_l2(p_tot[win], p_res[win]),
        "total_at_zero": float(p_tot[i0]) if abs(t[i0]) < 1e-12 else math.nan,
        "time_reversal_error": float(np.max(np.abs(total[::-1] - np.conj(total)))) if symmetric else math.nan,
        "cn4_dt": dt,
        "cn4_halvings": halvings,
        "cn4_max_deviation": dev,
        "cn4_max_deviation_half_dt": dev_fine,
        "cn4_halving_ratio": dev / dev_fine if dev_fine > 0 else math.inf,
        "cn4_step_norm_drift": max(drift, drift_fine),
        "exact_seconds": exact_seconds,
    }
    return ScenarioReport("survival", cfg.echo(), pole, series, metrics)


def run_emission(cfg: RunConfig) -> ScenarioReport:
    """<x|e^{-iHt}|1> at fixed t over the x-grid."""
    pole = _pole(cfg)
    dm, H = _model(cfg)
    t = cfg.emission_t
    x = uniform_grid(cfg.emission_x_min, cfg.emission_x_max, cfg.x_step)

    sd = diagonalize(H)
    V = sd.eigenvectors
    psi_t = V @ (np.exp(-1j * sd.eigenvalues * t) * V[0])
    total = position_row(dm, x) @ psi_t[1:]
    restr = restricted_emission(pole, t, x)
    series = (Series("emission", x, total, restr, np.zeros_like(total)),)

    p_tot = np.abs(total) ** 2
    p_res = np.abs(restr) ** 2
    a = np.abs(x)
    win = a <= t - cfg.emission_window_margin
    tail = a >= 2 * t
    symmetric = np.allclose(x[::-1], -x, atol=1e-9)
    metrics = {
        "z_re": pole.z.real,
        "z_im": pole.z.imag,
        "t": t,
        "grid_spacing": cfg.x_step,
        "tail_ratio": float(np.max(p_tot[tail]) / np.max(p_tot)) if tail.any() else math.nan,
        "l2_error": _rel_l2(p_tot[win], p_res[win]),
        "max_rel_error": float(np.max(np.abs(p_tot[win] - p_res[win]) / p_res[win])),
        "front_total": front_position(x, p_tot),
        "front_restricted": front_position(x, p_res),
        "front_total_negative": -front_position(-x[::-1], p_tot[::-1]),
        "front_restricted_negative": -front_position(-x[::-1], p_res[::-1]),
        "parity_error_total": float(np.max(np.abs(total - total[::-1]))) if symmetric else math.nan,
        "parity_error_restricted": float(np.max(np.abs(restr - restr[::-1]))) if symmetric else math.nan,
        "rest_fraction_window": _fraction(series[0].residual[win], total[win]),
    }
    return ScenarioReport("emission", cfg.echo(), pole, series, metrics)


def run_correlation(cfg: RunConfig) -> ScenarioReport:
    """<x1|e^{-iHt}|x2> at fixed t and x2 over the x1-grid."""
    pole = _pole(cfg)
    dm, H = _model(cfg)
    t, x2 = cfg.correlation_t, cfg.correlation_x2
    x1 = uniform_grid(cfg.correlation_x1_min, cfg.correlation_x1_max, cfg.x1_step)

    sd = diagonalize(H)
    V, E = sd.eigenvectors, sd.eigenvalues
    phase = np.exp(-1j * E * t)
    rows = np.zeros((x1.size, dm.dim))
    rows[:, 1:] = position_row(dm, x1)
    col = np.zeros(dm.dim)
    col[1:] = position_row(dm, x2)
    total = rows @ (V @ (phase * (V.T @ col)))
    swapped = ((rows @ V) * phase) @ (V.T @ col)  # <x2|...|x1> read through the transpose
    free = rows[:, 1:] @ (col[1:] * np.exp(-1j * dm.omega_grid * t))
    restr = restricted_correlation(pole, t, x1, x2)
    series = (Series("correlation", x1, total, restr, free),)

    p_tot = np.abs(total) ** 2
    p_res = np.abs(restr) ** 2
    expected = np.sort(free_field_correlation(t, 0.0, x2).x1_positions)
    found = local_peaks(x1, p_tot, 4)
    dist = np.min(np.abs(x1[:, None] - expected[None, :]), axis=1)
    inner = t - abs(x2)
    win = (np.abs(x1) < inner) & (dist > cfg.correlation_peak_exclusion)
    P, Q = p_tot[win], p_res[win]
    scale = float(P @ Q / (Q @ Q)) if Q.size and Q @ Q > 0 else math.nan
    off = cfg.correlation_front_offset
    r_in = np.abs(restricted_correlation(pole, t, inner - off, x2))
    r_out = np.abs(restricted_correlation(pole, t, inner + off, x2))
    outside = (np.abs(x1) > inner + 1.0) & (dist > cfg.correlation_peak_exclusion)
    metrics = {
        "z_re": pole.z.real,
        "z_im": pole.z.imag,
        "t": t,
        "x2": x2,
        "grid_spacing": cfg.x1_step,
        "peak_1": found[0] if found.size > 0 else math.nan,
        "peak_2": found[1] if found.size > 1 else math.nan,
        "peak_3": found[2] if found.size > 2 else math.nan,
        "peak_4": found[3] if found.size > 3 else math.nan,
        "peak_max_offset": float(np.max(np.abs(found - expected))) if found.size == 4 else math.inf,
        "front_ratio_restricted": float(r_in / r_out) if r_out > 0 else math.inf,
        "best_fit_scale": scale,
        "l2_error": _rel_l2(P, Q),
        "l2_error_scaled": _rel_l2(P, scale * Q),
        "exchange_error": float(np.max(np.abs(total - swapped))),
        "free_off_peak_max": float(np.max(np.abs(free[dist > cfg.correlation_peak_exclusion]))),
        "rest_fraction_window": _fraction(series[0].residual[win], total[win]),
        "outside_to_inside": _fraction(total[outside], total[win]) if outside.any() else math.nan,
    }
    return ScenarioReport("correlation", cfg.echo(), pole, series, metrics)


# ---------------------------------------------------------------------------

def report_pole(cfg: RunConfig) -> PoleReport:
    """Pole, residue and cross-checks against a second, differently tuned solve."""
    params = cfg.params
    ls = LevelShift(params)
    started = time.perf_counter()
    pole = find_pole(ls, tol=cfg.pole_tol)
    seconds = time.perf_counter() - started

    # cross-check: tighter quadrature, moved split point, perturbed start
    alt_ls = LevelShift(params, epsabs=1e-14, epsrel=1e-13, omega_split=3.0 * params.cutoff_M)
    alt = find_pole(alt_ls, default_guess(params) + 0.01 - 0.005j, tol=cfg.pole_tol)
    deriv = ls.eta_derivative(pole.z, "second")
    v1 = complex(form_factor(params.omega1, params))
    metrics = {
        "z_re": pole.z.real,
        "z_im": pole.z.imag,
        "N_re": pole.residue_N.real,
        "N_im": pole.residue_N.imag,
        "decay_rate": pole.decay_rate,
        "abs_N_minus_1": abs(pole.residue_N - 1.0),
        "eta_residual": pole.eta_residual,
        "residue_identity_error": abs(pole.residue_N * deriv - 1.0),
        "iterations": pole.iterations,
        "perturbative_im_z": -math.pi * params.lam**2 * (v1 * v1).real,
        "crosscheck_dz": abs(alt.z - pole.z),
        "crosscheck_dN": abs(alt.residue_N - pole.residue_N),
        "seconds": seconds,
    }
    return PoleReport(cfg.echo(), pole, metrics)
