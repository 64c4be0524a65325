"""Hardy-class decomposition of functions sampled on a uniform frequency grid.

With g(t) = int exp(-i w t) f(w) dw, the H+ part of f has g supported on
t > 0 and the H- part on t < 0.  Projection multiplies the discrete
transform by a half-line mask.

The transform is evaluated on the staggered times t_m = (m + 1/2) dt, which
is the DFT of f(w_k) exp(-i w_k dt / 2).  No sample sits at t = 0, so the
zero cell is shared evenly between the two half-lines, and the masks are
exact complementary projectors: idempotent, orthogonal, and mapped into
each other by complex conjugation.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, GridTooNarrowWarning, NumericalError, ResolutionWarning

__all__ = [
    "SampledFunction",
    "HardyPair",
    "project",
    "decompose",
    "eval_complex",
    "paley_wiener_residual",
    "staggered_transform",
    "symmetric_grid",
]

EDGE_FRACTION = 1e-6


def symmetric_grid(omega_max: float, n_pts: int) -> np.ndarray:
    """n_pts uniform points w_k = -omega_max + k dw on [-omega_max, omega_max)."""
    if n_pts < 2 or omega_max <= 0:
        raise ValueError("need omega_max > 0 and at least two points")
    return -omega_max + (2.0 * omega_max / n_pts) * np.arange(n_pts)


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples of f on a uniform real grid."""

    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise GridMismatchError("grid and values must be 1-d arrays of equal length")
        if grid.size < 2:
            raise GridMismatchError("a sampled function needs at least two points")
        steps = np.diff(grid)
        if steps[0] <= 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise GridMismatchError("grid must be strictly increasing and uniform")
        if not np.all(np.isfinite(grid)):
            raise NumericalError("grid contains non-finite entries")
        if not np.all(np.isfinite(values)):
            raise NumericalError("values contain NaN or Inf")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, fn, omega_max: float, n_pts: int, label: str = "") -> "SampledFunction":
        grid = symmetric_grid(omega_max, n_pts)
        return cls(grid, np.asarray(fn(grid), dtype=complex) * np.ones_like(grid), label)

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def n_pts(self) -> int:
        return self.grid.size

    def with_values(self, values, label: str | None = None) -> "SampledFunction":
        return SampledFunction(self.grid, values, self.label if label is None else label)

    def same_grid(self, other: "SampledFunction") -> bool:
        return self.grid.shape == other.grid.shape and np.array_equal(self.grid, other.grid)

    def norm(self) -> float:
        return float(np.sqrt(self.spacing * np.sum(np.abs(self.values) ** 2)))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["omega", "re", "im"])
            for x, v in zip(self.grid, self.values):
                w.writerow([f"{x:.15g}", f"{v.real:.15g}", f"{v.imag:.15g}"])

    @classmethod
    def from_csv(cls, path, label: str = "") -> "SampledFunction":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2], label)


def _phase(grid: np.ndarray) -> np.ndarray:
    period = grid.size * (grid[1] - grid[0])
    return np.exp(-1j * math.pi * grid / period)


def staggered_transform(f: SampledFunction):
    """(times, g) with g(t_m) on the staggered grid t_m = (m + 1/2) dt.

    Values are in FFT order; ``times`` gives the matching t for each bin.
    """
    n = f.n_pts
    dt = 2.0 * math.pi / (n * f.spacing)
    m = np.fft.fftfreq(n) * n
    k = np.arange(n)
    g = np.fft.fft(f.values * np.exp(-1j * math.pi * k / n)) * f.spacing * np.exp(-1j * f.grid[0] * dt * (m + 0.5))
    return (m + 0.5) * dt, g


def _mask(n: int, sign: str) -> np.ndarray:
    m = np.fft.fftfreq(n) * n
    return (m >= 0) if sign == "+" else (m < 0)


def _check_sign(sign: str):
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")


def _check_edges(values: np.ndarray, what: str, peak: float | None = None):
    if peak is None:
        peak = np.max(np.abs(values))
    edge = max(abs(values[0]), abs(values[-1]))
    if peak > 0 and edge >= EDGE_FRACTION * peak:
        warnings.warn(
            f"{what} is {edge / peak:.1e} of its peak at the grid edge; widen the grid",
            GridTooNarrowWarning,
            stacklevel=3,
        )


def _raw_project(grid: np.ndarray, values: np.ndarray, sign: str) -> np.ndarray:
    ph = _phase(grid)
    spectrum = np.fft.fft(values * ph)
    return np.fft.ifft(spectrum * _mask(values.size, sign)) / ph


def _tail_coefficient(f: SampledFunction) -> complex:
    return 0.5 * (f.grid[-1] * f.values[-1] + f.grid[0] * f.values[0])


def project(f: SampledFunction, sign: str, *, tail_correction: bool = False) -> SampledFunction:
    """[f]^+ or [f]^- by half-line masking of the staggered transform.

    ``tail_correction`` peels off a 1/w tail as a/(w - i), whose H- part is
    known exactly, before masking; use it for inputs that decay only like
    1/w.  It trades exact idempotence for accuracy on such inputs.
    """
    _check_sign(sign)
    values = f.values
    if not np.all(np.isfinite(values)):
        raise NumericalError("cannot project a function containing NaN or Inf")
    if tail_correction:
        a = _tail_coefficient(f)
        ref = a / (f.grid - 1j)
        rest = values - ref
        # measured against f itself: the remainder is small everywhere
        _check_edges(rest, "tail-corrected function", np.max(np.abs(values)))
        out = _raw_project(f.grid, rest, sign)
        if sign == "-":
            out = out + ref
    else:
        _check_edges(values, "function")
        out = _raw_project(f.grid, values, sign)
    return f.with_values(out, f"[{f.label}]{sign}" if f.label else "")


@dataclass(frozen=True)
class HardyPair:
    plus: SampledFunction
    minus: SampledFunction
    recon_residual: float


def decompose(f: SampledFunction, **kwargs) -> HardyPair:
    """Both Hardy parts of f and the relative reconstruction residual."""
    plus = project(f, "+", **kwargs)
    minus = project(f, "-", **kwargs)
    norm = np.linalg.norm(f.values)
    diff = np.linalg.norm(plus.values + minus.values - f.values)
    return HardyPair(plus, minus, float(diff / norm) if norm > 0 else float(diff))


def eval_complex(f: SampledFunction, sign: str, y: complex, *, tail_correction: bool = False) -> complex:
    """Value of [f]^sign at complex y via its Cauchy integral.

    For sign '-' and Im y < 0 this is (1/2 pi i) int f(w)/(y - w) dw, for
    sign '+' and Im y > 0 the same with a minus sign; either integral sees
    only the matching Hardy part of f.  A request on the wrong side of the
    axis returns 0.

    The grid is read the same way :func:`project` reads it, as one period of
    an anti-periodic function, so 1/(y - w) is summed over all periods:
    (pi/P) / sin(pi (y - w) / P).  Beyond the grid this supplies the tails
    implied by the projector.  ``tail_correction`` first peels off a/(w - i)
    exactly as :func:`project` does.
    """
    _check_sign(sign)
    y = complex(y)
    if (sign == "-" and y.imag >= 0) or (sign == "+" and y.imag <= 0):
        return 0j
    if abs(y.imag) < 3.0 * f.spacing:
        warnings.warn(
            f"|Im y| = {abs(y.imag):.2e} is within three grid spacings of the axis",
            ResolutionWarning,
            stacklevel=2,
        )
    grid, vals = f.grid, f.values
    ref_value = 0j
    if tail_correction:
        a = _tail_coefficient(f)
        vals = vals - a / (grid - 1j)
        if sign == "-":
            ref_value = a / (y - 1j)
    period = f.n_pts * f.spacing
    kernel = (math.pi / period) / np.sin(math.pi * (y - grid) / period)
    total = f.spacing * np.sum(vals * kernel) / (2j * math.pi)
    return complex((total if sign == "-" else -total) + ref_value)


def paley_wiener_residual(f: SampledFunction, sign: str) -> float:
    """max |g(t)| on the half-line forbidden for class ``sign``, over max |g|."""
    _check_sign(sign)
    times, g = staggered_transform(f)
    peak = np.max(np.abs(g))
    if peak == 0:
        return 0.0
    forbidden = times < 0 if sign == "+" else times > 0
    return float(np.max(np.abs(g[forbidden])) / peak)
