"""Least-squares linear regression through the SVD pseudo-inverse.

All fits include an intercept. Singular values below ``rtol * sigma_max``
are treated as zero, which yields the minimum-norm solution when the
design is rank deficient (duplicated or collinear columns).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_RTOL = 1e-12


class UndefinedCorrelation(ValueError):
    """Raised when a correlation is requested for a constant vector."""


@dataclass(frozen=True)
class LinearModel:
    coefficients: np.ndarray
    intercept: float

    @property
    def n_features(self) -> int:
        return int(self.coefficients.shape[0])


def _pinv_solve(A: np.ndarray, b: np.ndarray, rtol: float) -> np.ndarray:
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(A.shape[1])
    keep = s > rtol * s[0]
    Ub = U[:, keep].T @ b
    return Vt[keep].T @ (Ub / s[keep])


def fit_pseudoinverse(X, y, rtol: float = DEFAULT_RTOL) -> LinearModel:
    """Fit ``y ~ X @ beta + intercept`` by the minimum-norm least-squares solution.

    Parameters
    ----------
    X : array_like, shape (n_samples, n_features)
        Design matrix. ``n_features`` may be zero (intercept-only model).
    y : array_like, shape (n_samples,)
    rtol : float
        Relative cutoff applied to the singular values.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] == 0:
        raise ValueError("cannot fit a model with zero rows")
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("X and y must contain only finite values")
    A = np.hstack([np.ones((X.shape[0], 1)), X])
    beta = _pinv_solve(A, y, rtol)
    return LinearModel(coefficients=beta[1:], intercept=float(beta[0]))


def predict(model: LinearModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != model.n_features:
        raise ValueError(
            f"model has {model.n_features} coefficients but X has {X.shape[1]} columns"
        )
    return X @ model.coefficients + model.intercept


def rmse(yhat, y) -> float:
    yhat = np.asarray(yhat, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if yhat.shape != y.shape:
        raise ValueError(f"length mismatch: {yhat.shape} vs {y.shape}")
    if y.size == 0:
        raise ValueError("rmse of empty vectors is undefined")
    return float(np.sqrt(np.mean((yhat - y) ** 2)))


def corrcoef(yhat, y) -> float:
    """Pearson correlation. Raises :class:`UndefinedCorrelation` for constant input."""
    yhat = np.asarray(yhat, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if yhat.shape != y.shape:
        raise ValueError(f"length mismatch: {yhat.shape} vs {y.shape}")
    if y.size < 2:
        raise ValueError("correlation needs at least two points")
    a = yhat - yhat.mean()
    b = y - y.mean()
    na = np.sqrt(a @ a)
    nb = np.sqrt(b @ b)
    if na == 0.0 or nb == 0.0:
        raise UndefinedCorrelation("correlation is undefined for a constant vector")
    return float(np.clip((a @ b) / (na * nb), -1.0, 1.0))


class CompressedDesign:
    """Reusable least-squares setup for fitting many column subsets of one design.

    The full design ``[1, X]`` is factored once as ``Q R``. Fitting a subset
    of columns ``S`` only needs the SVD of ``R[:, S]``, since ``A[:, S] = Q R[:, S]``
    with orthonormal ``Q`` has the same singular values and the same
    minimum-norm least-squares solution.
    """

    def __init__(self, X, y, rtol: float = DEFAULT_RTOL):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.shape[0] == 0:
            raise ValueError("cannot fit a model with zero rows")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("X and y must contain only finite values")
        self.A = np.hstack([np.ones((X.shape[0], 1)), X])
        self.y = y
        self.rtol = rtol
        if self.A.shape[0] >= self.A.shape[1]:
            Q, self._R = np.linalg.qr(self.A)
            self._qty = Q.T @ y
        else:
            self._R = self.A
            self._qty = y

    def fit(self, columns) -> tuple[LinearModel, np.ndarray]:
        """Fit on the given feature columns; returns the model and in-sample predictions."""
        cols = np.concatenate([[0], np.asarray(columns, dtype=np.intp) + 1])
        beta = _pinv_solve(self._R[:, cols], self._qty, self.rtol)
        yhat = self.A[:, cols] @ beta
        return LinearModel(coefficients=beta[1:], intercept=float(beta[0])), yhat
