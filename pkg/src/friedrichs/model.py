"""Friedrichs model: parameters, form factor, box discretization, Hamiltonian.

One discrete level |1> at energy omega1 couples with strength lambda to a
continuum of field modes |omega>, omega >= 0.  In a box of length L the
symmetric field modes become omega_n = 2 pi n / L with couplings V_n, and the
Hamiltonian is an arrowhead matrix: diagonal (omega1, omega_1 .. omega_N) plus
one bordering row and column holding lambda * V_n.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OutOfBoxError, ParameterError, PoleError, ResolutionWarning

__all__ = [
    "ModelParams",
    "DiscreteModel",
    "HermitianMatrix",
    "PRESETS",
    "form_factor",
    "form_factor_sq",
    "form_factor_sq_derivative",
    "discretize",
    "discretize_preset",
    "preset_params",
    "assemble_hamiltonian",
    "position_overlap",
    "position_row",
]

SQRT_BRANCH = "cut-on-negative-real-axis"
LAMBDA_LIMIT = 0.5


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the model.

    ``lam`` may be zero (the free model); values at or above 0.5 leave the
    weak-coupling regime the numerics are validated for and are rejected.
    """

    omega1: float = 2.0
    lam: float = 0.1
    cutoff_M: float = 5.0
    sqrt_branch: str = SQRT_BRANCH

    def __post_init__(self):
        for name in ("omega1", "lam", "cutoff_M"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.omega1 <= 0:
            raise ParameterError(f"omega1 must be positive, got {self.omega1}")
        if self.cutoff_M <= 0:
            raise ParameterError(f"cutoff_M must be positive, got {self.cutoff_M}")
        if self.lam < 0:
            raise ParameterError(f"lam must be non-negative, got {self.lam}")
        if self.lam >= LAMBDA_LIMIT:
            raise ParameterError(
                f"lam={self.lam} is outside the weak-coupling regime (lam < {LAMBDA_LIMIT})"
            )
        if self.sqrt_branch != SQRT_BRANCH:
            raise ParameterError(f"unsupported branch convention {self.sqrt_branch!r}")

    def replace(self, **changes) -> "ModelParams":
        values = {k: getattr(self, k) for k in ("omega1", "lam", "cutoff_M", "sqrt_branch")}
        values.update(changes)
        return ModelParams(**values)


PRESETS = {
    "paper": {"omega1": 2.0, "lam": 0.1, "cutoff_M": 5.0, "box_L": 100.0, "n_modes": 1200},
}


def preset_params(name: str) -> tuple[ModelParams, float, int]:
    """Return ``(params, box_L, n_modes)`` for a named preset."""
    try:
        p = PRESETS[name]
    except KeyError:
        raise ParameterError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
    return ModelParams(p["omega1"], p["lam"], p["cutoff_M"]), p["box_L"], p["n_modes"]


def _check_poles(w, M):
    w = np.asarray(w)
    near = np.abs(w * w + M * M) <= 1e-14 * M * M
    if np.any(near):
        raise PoleError(f"form factor squared has a double pole at +-i*M (M={M})")


def form_factor_sq(w, params: ModelParams):
    """v(w)^2 = 2w / (1 + (w/M)^2)^2, rational and single valued.

    Accepts scalars or arrays, real or complex.
    """
    M = params.cutoff_M
    _check_poles(w, M)
    w = np.asarray(w)
    u = 1.0 + (w / M) ** 2
    out = 2.0 * w / (u * u)
    return out[()] if out.ndim == 0 else out


def form_factor_sq_derivative(w, params: ModelParams):
    """d/dw of :func:`form_factor_sq`."""
    M = params.cutoff_M
    _check_poles(w, M)
    w = np.asarray(w)
    u = 1.0 + (w / M) ** 2
    out = 2.0 / u**2 - 8.0 * w * w / (M * M * u**3)
    return out[()] if out.ndim == 0 else out


def form_factor(w, params: ModelParams):
    """v(w) = sqrt(2) sqrt(w) / (1 + (w/M)^2), principal square root.

    The cut runs along the negative real axis; requesting a value there is a
    :class:`DomainError`.  Real input gives real output, complex input complex.
    """
    M = params.cutoff_M
    w = np.asarray(w)
    on_cut = (w.imag == 0) & (w.real < 0)
    if np.any(on_cut):
        raise DomainError("form factor requested on its branch cut (negative real axis)")
    _check_poles(w, M)
    root = np.sqrt(w) if np.iscomplexobj(w) else np.sqrt(w.astype(float))
    out = math.sqrt(2.0) * root / (1.0 + (w / M) ** 2)
    return out[()] if out.ndim == 0 else out


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteModel:
    """Box-discretized field modes n = 1..n_modes and their couplings."""

    params: ModelParams
    box_L: float
    n_modes: int
    omega_grid: np.ndarray = field(repr=False)
    coupling: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.n_modes + 1

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.box_L

    @property
    def omega_max(self) -> float:
        return float(self.omega_grid[-1])

    @property
    def recurrence_time(self) -> float:
        """Rough horizon for box revivals: emitted wave fronts return after t ~ L."""
        return self.box_L


def discretize(params: ModelParams, box_L: float = 100.0, n_modes: int = 1200) -> DiscreteModel:
    """Build the mode grid omega_n = 2 pi n / L and couplings V_n."""
    if not (isinstance(box_L, (int, float)) and math.isfinite(box_L) and box_L > 0):
        raise ParameterError(f"box_L must be a positive number, got {box_L!r}")
    if isinstance(n_modes, bool) or int(n_modes) != n_modes or n_modes < 1:
        raise ParameterError(f"n_modes must be a positive integer, got {n_modes!r}")
    n_modes = int(n_modes)
    box_L = float(box_L)
    omega = 2.0 * math.pi * np.arange(1, n_modes + 1) / box_L
    M = params.cutoff_M
    coupling = 2.0 * math.sqrt(math.pi / box_L) * np.sqrt(omega) / ((omega / M) ** 2 + 1.0)
    if omega[-1] < 10.0 * M:
        warnings.warn(
            f"omega_max={omega[-1]:.4g} is below 10*M={10 * M:.4g}; the cutoff is under-resolved",
            ResolutionWarning,
            stacklevel=2,
        )
    return DiscreteModel(params, box_L, n_modes, _frozen(omega), _frozen(coupling))


def discretize_preset(name: str = "paper") -> DiscreteModel:
    params, box_L, n_modes = preset_params(name)
    return discretize(params, box_L, n_modes)


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense Hamiltonian; index 0 is |1>, indices 1..N the field modes.

    ``diagonal`` and ``border`` keep the arrowhead structure for O(dim)
    solves; ``entries`` is the dense matrix.
    """

    diagonal: np.ndarray = field(repr=False)
    border: np.ndarray = field(repr=False)
    entries: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.diagonal.shape[0]

    def matvec(self, x):
        """H @ x using the arrowhead structure; x may carry trailing axes."""
        x = np.asarray(x)
        d = self.diagonal.reshape((-1,) + (1,) * (x.ndim - 1))
        c = self.border.reshape((-1,) + (1,) * (x.ndim - 1))
        y = d * x
        y[0] = y[0] + np.sum(c * x[1:], axis=0)
        y[1:] = y[1:] + c * x[0]
        return y


def assemble_hamiltonian(dm: DiscreteModel) -> HermitianMatrix:
    """Arrowhead matrix diag(omega1, omega_n) with border lambda * V_n."""
    dim = dm.dim
    diagonal = np.empty(dim)
    diagonal[0] = dm.params.omega1
    diagonal[1:] = dm.omega_grid
    border = dm.params.lam * np.asarray(dm.coupling)
    H = np.diag(diagonal)
    H[0, 1:] = border
    H[1:, 0] = border
    return HermitianMatrix(_frozen(diagonal), _frozen(border), _frozen(H))


def _check_box(dm: DiscreteModel, x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > dm.box_L / 2 * (1 + 1e-12)):
        raise OutOfBoxError(f"|x| must not exceed box_L/2 = {dm.box_L / 2}")
    return x


def position_overlap(dm: DiscreteModel, n: int, x):
    """<omega_n|x> = sqrt(2/L) cos(omega_n x) for mode index 1 <= n <= N."""
    if int(n) != n or not 1 <= n <= dm.n_modes:
        raise ParameterError(f"mode index must lie in 1..{dm.n_modes}, got {n!r}")
    x = _check_box(dm, x)
    out = math.sqrt(2.0 / dm.box_L) * np.cos(dm.omega_grid[int(n) - 1] * x)
    return out[()] if out.ndim == 0 else out


def position_row(dm: DiscreteModel, x):
    """All overlaps <omega_n|x>; shape (N,) for scalar x or (len(x), N)."""
    x = _check_box(dm, x)
    return math.sqrt(2.0 / dm.box_L) * np.cos(np.multiply.outer(x, dm.omega_grid))
