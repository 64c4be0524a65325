"""Time evolution on the discretized model.

Ground truth comes from a full eigendecomposition.  The fourth-order
Crank-Nicolson propagator applies the (2,2) Pade approximant of exp(-iH dt),

    R(x) = (1 + x/2 + x^2/12) / (1 - x/2 + x^2/12),    x = -i H dt,

factored over the roots r = -3 +- i sqrt(3) of 1 + r/2 + r^2/12 into two
Cayley-like factors (1 + iH dt/r) / (1 - iH dt/r).  Each solve exploits the
arrowhead shape of H and costs O(dim).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import ConvergenceError, GridMismatchError, NumericalError, ParameterError
from .model import DiscreteModel, HermitianMatrix, position_row

__all__ = [
    "SpectralDecomposition",
    "StateVector",
    "Trajectory",
    "AmplitudeSeries",
    "DtSelection",
    "diagonalize",
    "make_state",
    "propagate_exact",
    "exact_amplitudes",
    "propagate_cn4",
    "cn4_amplitudes",
    "amplitude",
    "select_dt",
]

PADE_ROOTS = (complex(-3.0, math.sqrt(3.0)), complex(-3.0, -math.sqrt(3.0)))


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def diagonalize(H: HermitianMatrix, *, check: bool = True) -> SpectralDecomposition:
    """Full eigendecomposition of the real symmetric Hamiltonian."""
    A = np.asarray(H.entries)
    try:
        vals, vecs = linalg.eigh(A)
    except linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    if check:
        scale = max(np.max(np.abs(vals)), 1.0)
        resid = np.max(np.linalg.norm(A @ vecs - vecs * vals, axis=0))
        ortho = np.max(np.abs(vecs.T @ vecs - np.eye(vals.size)))
        if resid > 1e-10 * scale or ortho > 1e-10:
            raise ConvergenceError(
                f"eigendecomposition inaccurate: residual {resid:.1e}, orthogonality {ortho:.1e}"
            )
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralDecomposition(vals, vecs)


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray = field(repr=False)
    label: str = ""
    norm: float = field(init=False)

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 1:
            raise ValueError("a state vector is one-dimensional")
        if not np.all(np.isfinite(a)):
            raise NumericalError("state vector has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "norm", float(np.linalg.norm(a)))

    @property
    def dim(self) -> int:
        return self.amplitudes.size


def make_state(label: str, dm: DiscreteModel, x: float | None = None) -> StateVector:
    """'discrete' gives e_0; 'position' gives (0, sqrt(2/L) cos(w_n x)).

    Sums over the position vector reproduce continuum <...|x> amplitudes
    directly: the sqrt(2 pi/L) factors of bra and ket cancel.
    """
    amps = np.zeros(dm.dim, dtype=complex)
    if label == "discrete":
        amps[0] = 1.0
        return StateVector(amps, "1")
    if label == "position":
        if x is None:
            raise ParameterError("a position state needs x")
        amps[1:] = position_row(dm, float(x))
        return StateVector(amps, f"x={float(x):g}")
    raise ParameterError(f"unknown state label {label!r}; use 'discrete' or 'position'")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)
    method: str
    step_drift: float = 0.0

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


@dataclass(frozen=True)
class AmplitudeSeries:
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    bra: str
    ket: str
    method: str

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if g.shape != v.shape:
            raise GridMismatchError("one amplitude per grid point is required")
        if g.size > 1 and np.any(np.diff(g) < 0):
            raise ValueError("amplitude grid must be sorted")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)


def _times(times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1:
        raise ValueError("times must be one-dimensional")
    return t


def propagate_exact(sd: SpectralDecomposition, psi0: StateVector, times) -> Trajectory:
    """psi(t) = V exp(-i Lambda t) V^T psi0 for each requested time."""
    if psi0.dim != sd.dim:
        raise GridMismatchError("state and decomposition dimensions differ")
    t = _times(times)
    V = sd.eigenvectors
    coeff = V.T @ psi0.amplitudes
    phases = np.exp(-1j * np.multiply.outer(t, sd.eigenvalues))
    states = (phases * coeff) @ V.T
    return Trajectory(t, states, "exact")


def exact_amplitudes(sd: SpectralDecomposition, bra: StateVector, ket: StateVector, times) -> AmplitudeSeries:
    """<bra|exp(-iHt)|ket> without forming the states."""
    if bra.dim != sd.dim or ket.dim != sd.dim:
        raise GridMismatchError("state and decomposition dimensions differ")
    t = _times(times)
    V = sd.eigenvectors
    weights = (V.T @ bra.amplitudes).conj() * (V.T @ ket.amplitudes)
    values = np.exp(-1j * np.multiply.outer(t, sd.eigenvalues)) @ weights
    return AmplitudeSeries(t, values, bra.label, ket.label, "exact")


class _ArrowheadFactor:
    """Solve (I - c H) y = b and apply (I + c H) for one Pade root."""

    def __init__(self, H: HermitianMatrix, c: complex):
        self.c = c
        self.H = H
        d = 1.0 - c * H.diagonal
        if np.any(d == 0):
            raise NumericalError("singular Pade shift")
        self.d0 = d[0]
        self.dn = d[1:]
        self.beta = -c * H.border
        self.ratio = self.beta / self.dn
        self.schur = self.d0 - np.sum(self.beta * self.ratio)
        if self.schur == 0:
            raise NumericalError("singular Pade shift")

    def solve(self, b):
        y = np.empty_like(b)
        y[0] = (b[0] - np.sum(self.ratio * b[1:])) / self.schur
        y[1:] = (b[1:] - self.beta * y[0]) / self.dn
        return y

    def apply(self, x):
        return x + self.c * self.H.matvec(x)


def _cn4_factors(H: HermitianMatrix, dt: float):
    return [_ArrowheadFactor(H, 1j * dt / r) for r in PADE_ROOTS]


def _cn4_step(factors, psi):
    for fac in factors:
        psi = fac.solve(fac.apply(psi))
    return psi


def _check_dt(dt, n_steps):
    if not (dt > 0 and math.isfinite(dt)):
        raise ParameterError(f"dt must be positive, got {dt}")
    if int(n_steps) != n_steps or n_steps < 0:
        raise ParameterError(f"n_steps must be a non-negative integer, got {n_steps}")


def propagate_cn4(H: HermitianMatrix, psi0: StateVector, dt: float, n_steps: int,
                  *, record_every: int = 1) -> Trajectory:
    """Fourth-order Crank-Nicolson trajectory, one state per ``record_every`` steps."""
    _check_dt(dt, n_steps)
    if psi0.dim != H.dim:
        raise GridMismatchError("state and Hamiltonian dimensions differ")
    factors = _cn4_factors(H, dt)
    psi = psi0.amplitudes.copy()
    norm = np.linalg.norm(psi)
    drift = 0.0
    times, states = [0.0], [psi.copy()]
    for k in range(1, int(n_steps) + 1):
        psi = _cn4_step(factors, psi)
        new = np.linalg.norm(psi)
        drift = max(drift, abs(new - norm))
        norm = new
        if k % record_every == 0:
            times.append(k * dt)
            states.append(psi.copy())
    return Trajectory(np.array(times), np.array(states), "cn4", drift)


def cn4_amplitudes(H: HermitianMatrix, bra: StateVector, psi0: StateVector, dt: float,
                   n_steps: int) -> tuple[AmplitudeSeries, float]:
    """<bra|psi(k dt)> for k = 0..n_steps and the largest per-step norm change."""
    _check_dt(dt, n_steps)
    factors = _cn4_factors(H, dt)
    b = bra.amplitudes.conj()
    psi = psi0.amplitudes.copy()
    norm = np.linalg.norm(psi)
    drift = 0.0
    out = np.empty(int(n_steps) + 1, dtype=complex)
    out[0] = b @ psi
    for k in range(1, int(n_steps) + 1):
        psi = _cn4_step(factors, psi)
        new = np.linalg.norm(psi)
        drift = max(drift, abs(new - norm))
        norm = new
        out[k] = b @ psi
    series = AmplitudeSeries(dt * np.arange(int(n_steps) + 1), out, bra.label, psi0.label, "cn4")
    return series, drift


def amplitude(bra: StateVector, trajectory: Trajectory) -> AmplitudeSeries:
    """<bra|psi(t)> along a stored trajectory."""
    if trajectory.states.shape[1] != bra.dim:
        raise GridMismatchError("bra and trajectory dimensions differ")
    values = trajectory.states @ bra.amplitudes.conj()
    return AmplitudeSeries(trajectory.times, values, bra.label, "psi", trajectory.method)


@dataclass(frozen=True)
class DtSelection:
    dt: float
    deviations: tuple  # (dt, max |coarse - fine|) for each comparison


def select_dt(H: HermitianMatrix, bra: StateVector, psi0: StateVector, t_max: float,
              *, dt0: float = 0.02, tol: float = 1e-6, max_halvings: int = 8) -> DtSelection:
    """Halve dt from ``dt0`` until successive CN4 amplitude series agree within ``tol``.

    Returns the finer dt of the first pair that agrees.
    """
    dt = dt0
    coarse, _ = cn4_amplitudes(H, bra, psi0, dt, int(round(t_max / dt)))
    history = []
    for _ in range(max_halvings):
        fine, _ = cn4_amplitudes(H, bra, psi0, dt / 2, int(round(t_max / (dt / 2))))
        dev = float(np.max(np.abs(fine.values[::2] - coarse.values)))
        history.append((dt, dev))
        dt /= 2
        if dev < tol:
            return DtSelection(dt, tuple(history))
        coarse = fine
    raise ConvergenceError(f"dt auto-selection did not reach {tol} after {max_halvings} halvings")
