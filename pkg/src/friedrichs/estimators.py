"""scikit-learn style wrappers around the functional core.

Only objects with a natural fit/transform or fit/predict reading get one:
the Hardy projector (a stateless transformer over rows of samples), the two
propagators (fit a Hamiltonian, predict amplitudes) and the pole finder (fit
model parameters, predict the restricted survival amplitude).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .evolution import StateVector, cn4_amplitudes, diagonalize, exact_amplitudes, select_dt
from .hardy import SampledFunction, project, symmetric_grid
from .model import HermitianMatrix, ModelParams
from .restriction import restricted_survival
from .spectral import LevelShift, find_pole

__all__ = ["HardyProjector", "SpectralPropagator", "CN4Propagator", "PoleEstimator"]


def _rows(X):
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError("expected a 2-d array of samples, one function per row")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains NaN or Inf")
    return X


class HardyProjector(TransformerMixin, BaseEstimator):
    """Project each row, sampled on symmetric_grid(omega_max, n_pts), onto H+ or H-."""

    def __init__(self, sign="-", omega_max=100.0, tail_correction=False):
        self.sign = sign
        self.omega_max = omega_max
        self.tail_correction = tail_correction

    def fit(self, X, y=None):
        X = _rows(X)
        if self.sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        self.n_features_in_ = X.shape[1]
        self.grid_ = symmetric_grid(self.omega_max, self.n_features_in_)
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = _rows(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} samples per row, got {X.shape[1]}")
        out = np.empty_like(X)
        for i, row in enumerate(X):
            f = SampledFunction(self.grid_, row)
            out[i] = project(f, self.sign, tail_correction=self.tail_correction).values
        return out


def _hamiltonian(H):
    if not isinstance(H, HermitianMatrix):
        raise TypeError("fit expects a HermitianMatrix from assemble_hamiltonian")
    return H


class SpectralPropagator(BaseEstimator):
    """Exact propagation through a full eigendecomposition."""

    def __init__(self, check=True):
        self.check = check

    def fit(self, H, y=None):
        sd = diagonalize(_hamiltonian(H), check=self.check)
        self.decomposition_ = sd
        self.eigenvalues_ = sd.eigenvalues
        return self

    def predict(self, times, psi0: StateVector, bra: StateVector | None = None):
        """<bra|exp(-iHt)|psi0> at ``times``; bra defaults to psi0."""
        check_is_fitted(self, "decomposition_")
        series = exact_amplitudes(self.decomposition_, psi0 if bra is None else bra, psi0, times)
        return series.values


class CN4Propagator(BaseEstimator):
    """Fourth-order Crank-Nicolson propagation on a uniform time grid."""

    def __init__(self, dt_policy="auto", dt0=0.02, tol=1e-6):
        self.dt_policy = dt_policy
        self.dt0 = dt0
        self.tol = tol

    def fit(self, H, y=None):
        self.hamiltonian_ = _hamiltonian(H)
        return self

    def predict(self, t_max, psi0: StateVector, bra: StateVector | None = None):
        """Amplitudes at k*dt for k = 0..round(t_max/dt); sets ``dt_``."""
        check_is_fitted(self, "hamiltonian_")
        bra = psi0 if bra is None else bra
        if self.dt_policy == "auto":
            self.dt_ = select_dt(self.hamiltonian_, bra, psi0, t_max, dt0=self.dt0, tol=self.tol).dt
        else:
            self.dt_ = float(self.dt_policy)
        series, self.norm_drift_ = cn4_amplitudes(
            self.hamiltonian_, bra, psi0, self.dt_, int(round(t_max / self.dt_))
        )
        self.times_ = series.grid
        return series.values


class PoleEstimator(BaseEstimator):
    """Fit the second-sheet pole for ModelParams; predict restricted survival."""

    def __init__(self, guess=None, tol=1e-10):
        self.guess = guess
        self.tol = tol

    def fit(self, params: ModelParams, y=None):
        if not isinstance(params, ModelParams):
            raise TypeError("fit expects ModelParams")
        self.pole_ = find_pole(LevelShift(params), self.guess, tol=self.tol)
        self.z_ = self.pole_.z
        self.residue_ = self.pole_.residue_N
        return self

    def predict(self, t):
        check_is_fitted(self, "pole_")
        return restricted_survival(self.pole_, t)
