"""Invariant suites for the Hardy projector and the T restriction operators."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..errors import GridTooNarrowWarning
from ..hardy import SampledFunction, eval_complex, paley_wiener_residual, project, symmetric_grid
from ..model import form_factor
from ..restriction import CASE_TAGS, RestrictionCase, t_restrict
from ..spectral import LevelShift, ResonancePole, find_pole
from .config import RunConfig

__all__ = ["Check", "SelftestSummary", "gaussian_corpus", "hardy_suite", "restriction_suite", "run_selftests"]

HARDY_OMEGA_MAX = 3276.8
HARDY_POINTS = 2**16
T_OMEGA_MAX = 200.0
T_POINTS = 2**14
PW_TOL = 1e-6
EVAL_TOL = 1e-6


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance or self.residual == 0.0)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        bound = f"< {self.tolerance:.0e}" if self.tolerance > 0 else "= 0"
        return f"{flag}  {self.suite:<12} {self.name:<44} {self.residual:.3e}  ({bound})"


@dataclass(frozen=True)
class SelftestSummary:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def table(self) -> str:
        return "\n".join(c.line() for c in self.checks)

    def worst(self, suite: str, prefix: str) -> float:
        vals = [c.residual for c in self.checks if c.suite == suite and c.name.startswith(prefix)]
        return max(vals) if vals else math.nan


@dataclass(frozen=True)
class Gaussian:
    """c exp(-(w - mu)^2 / (2 s^2)) exp(i k w)."""

    c: complex
    mu: float
    s: float
    k: float

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return self.c * np.exp(-((w - self.mu) ** 2) / (2 * self.s**2) + 1j * self.k * w)


def gaussian_corpus(seed: int, size: int) -> list:
    """``size`` random modulated Gaussians followed by the zero function (None)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(size):
        c = complex(rng.normal(), rng.normal())
        out.append(Gaussian(c, rng.uniform(-20, 20), rng.uniform(0.5, 4.0), rng.uniform(-5, 5)))
    out.append(None)
    return out


def _ratio(num, den) -> float:
    n = float(np.linalg.norm(num))
    d = float(np.linalg.norm(den))
    return n / d if d > 0 else n


def _cauchy_oracle(g: Gaussian, sign: str, y: complex) -> complex:
    """Direct quadrature of the Cauchy integral defining [g]^sign(y)."""
    lo, hi = g.mu - 12 * g.s, g.mu + 12 * g.s
    val, _ = integrate.quad(lambda w: g(w) / (y - w), lo, hi, complex_func=True,
                            limit=400, epsabs=1e-13, epsrel=1e-11)
    val /= 2j * math.pi
    return val if sign == "-" else -val


def _hardy_residuals(f, plus, minus) -> dict:
    vals = f.values
    return {
        "completeness": _ratio(plus.values + minus.values - vals, vals),
        "idempotence": max(_ratio(project(plus, "+").values - plus.values, vals),
                           _ratio(project(minus, "-").values - minus.values, vals)),
        "orthogonality": max(_ratio(project(plus, "-").values, vals),
                             _ratio(project(minus, "+").values, vals)),
        "conjugation": _ratio(np.conj(plus.values) - project(f.with_values(np.conj(vals)), "-").values, vals),
        "paley_wiener": max(paley_wiener_residual(plus, "+"), paley_wiener_residual(minus, "-")),
    }


def hardy_suite(seed: int, size: int = 20, tol: float = 1e-8) -> list:
    grid = symmetric_grid(HARDY_OMEGA_MAX, HARDY_POINTS)
    rng = np.random.default_rng(seed + 1)
    checks = []
    worst = dict.fromkeys(("completeness", "idempotence", "orthogonality", "conjugation", "paley_wiener"), 0.0)
    eval_err = 0.0
    zero_total = 0.0
    for g in gaussian_corpus(seed, size):
        vals = np.zeros_like(grid, dtype=complex) if g is None else g(grid)
        f = SampledFunction(grid, vals)
        plus, minus = project(f, "+"), project(f, "-")
        # projected parts decay like 1/w; the edge warning is expected there
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GridTooNarrowWarning)
            res = _hardy_residuals(f, plus, minus)
        if g is None:
            zero_total = sum(res.values())
            continue
        for key, value in res.items():
            worst[key] = max(worst[key], value)
        sign = "-" if rng.random() < 0.5 else "+"
        y = complex(g.mu + rng.uniform(-2, 2) * g.s, rng.uniform(0.5, 2.0) * (-1 if sign == "-" else 1))
        got = eval_complex(f, sign, y)
        want = _cauchy_oracle(g, sign, y)
        eval_err = max(eval_err, abs(got - want) / max(abs(want), 1.0))

    for key in ("completeness", "idempotence", "orthogonality", "conjugation"):
        checks.append(Check("hardy", f"{key} (worst of {size})", worst[key], tol))
    checks.append(Check("hardy", f"paley_wiener (worst of {size})", worst["paley_wiener"], PW_TOL))
    checks.append(Check("hardy", f"eval_complex vs quadrature ({size} points)", eval_err, EVAL_TOL))
    checks.append(Check("hardy", "zero function, all residuals", zero_total, 0.0))
    return checks


def _t_functions(pole: ResonancePole):
    grid = symmetric_grid(T_OMEGA_MAX, T_POINTS)
    p = pole.params
    pos = np.where(grid > 0, grid, 1.0)
    v = np.where(grid > 0, form_factor(pos, p).real, 0.0)
    f = SampledFunction(grid, v * np.exp(-pos / 4), "f")
    g = SampledFunction(grid, np.where(grid > 0, grid * np.exp(-pos / 3), 0.0), "g")
    return f, g


def restriction_suite(pole: ResonancePole, times=(3.0, -2.0), tol: float = 1e-8) -> list:
    f, g = _t_functions(pole)
    checks = []
    worst = {"completeness": 0.0, "orthogonality": 0.0, "idempotence": 0.0}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridTooNarrowWarning)  # re-projected parts decay like 1/w
        for side in ("z", "z_cc"):
            for tag in CASE_TAGS:
                for t in times:
                    case = RestrictionCase(tag, t, pole, f, g, pole_side=side)
                    F = case.original()
                    s = case.sign
                    o = "+" if s == "-" else "-"
                    Ts, To = t_restrict(case, s), t_restrict(case, o)
                    worst["completeness"] = max(worst["completeness"],
                                                _ratio(Ts.values() + To.values() - F, F))
                    worst["orthogonality"] = max(worst["orthogonality"],
                                                 _ratio(Ts.restrict(o).values(), F),
                                                 _ratio(To.restrict(s).values(), F))
                    worst["idempotence"] = max(worst["idempotence"],
                                               _ratio(Ts.restrict(s).values() - Ts.values(), F))
            for key, value in worst.items():
                checks.append(Check("restriction", f"{key}, pole {side}, 4 cases", value, tol))
            worst = dict.fromkeys(worst, 0.0)

        # collapse: every constituent already in the kept class
        grid = f.grid
        for side, t, h in (("z", 3.0, 1.0 / (grid - 1j) ** 5), ("z_cc", -2.0, 1.0 / (grid + 1j) ** 5)):
            hf = SampledFunction(grid, h)
            err = 0.0
            for tag in CASE_TAGS:
                case = RestrictionCase(tag, t, pole, hf, hf, pole_side=side)
                F = case.original()
                err = max(err, _ratio(t_restrict(case, case.sign).values() - F, F))
            checks.append(Check("restriction", f"collapse, pole {side}, 4 cases", err, tol))
    return checks


def run_selftests(cfg: RunConfig) -> SelftestSummary:
    pole = find_pole(LevelShift(cfg.params), tol=cfg.pole_tol)
    checks = (hardy_suite(cfg.seed, cfg.corpus_size, cfg.tolerance)
              + restriction_suite(pole, tol=cfg.tolerance))
    return SelftestSummary(tuple(checks))
