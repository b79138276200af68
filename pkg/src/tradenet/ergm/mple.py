"""Maximum pseudo-likelihood estimation by Newton-Raphson logistic regression."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from ..errors import ConvergenceError, ModelError, NumericalError, TradenetWarning
from ..graph import TradeGraph
from . import _kernels
from .statistics import ToggleState
from .terms import ModelSpec

SE_METHOD = "inverse observed information of the pseudo-likelihood (approximate)"


@dataclass(frozen=True)
class ErgmFit:
    names: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    pseudo_loglik: float
    aic: float
    converged: bool
    iterations: int
    n_dyads: int
    se_method: str = field(default=SE_METHOD)

    def table(self) -> list[tuple[str, float, float]]:
        return [(n, float(c), float(s)) for n, c, s in zip(self.names, self.coefficients, self.standard_errors)]


def mple_design(graph: TradeGraph, model: ModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Change-statistic rows and tie indicators for every ordered dyad ``i != j``."""
    state = ToggleState(graph, model)
    n = graph.n
    rows = n * (n - 1)
    x = np.empty((rows, model.n_stats), dtype=np.float64)
    y = np.empty(rows, dtype=np.float64)
    if rows:
        _kernels.design_matrix(state.adj, state.sp, state.outdeg, state.indeg, model.labels, model.codes,
                               model.params, model.label_index, x, y)
    return x, y


def _collinear_columns(x: np.ndarray, names) -> list[str]:
    scale = np.abs(x).max(axis=0)
    scale[scale == 0] = 1.0
    xs = x / scale
    _, s, vt = np.linalg.svd(xs, full_matrices=False)
    tol = s.max(initial=0.0) * max(xs.shape) * np.finfo(float).eps
    null = vt[s <= tol]
    if null.size == 0:
        return []
    involved = np.abs(null).max(axis=0) > 1e-8
    return [n for n, flag in zip(names, involved) if flag]


def _loglik(eta: np.ndarray, y: np.ndarray) -> float:
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def logistic_newton(x: np.ndarray, y: np.ndarray, tol: float = 1e-8, max_iter: int = 50):
    """Newton-Raphson with step halving. Returns ``(theta, information, loglik, converged, iterations)``."""
    k = x.shape[1]
    theta = np.zeros(k)
    ll = _loglik(x @ theta, y)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        p = expit(x @ theta)
        grad = x.T @ (y - p)
        info = (x * (p * (1.0 - p))[:, None]).T @ x
        try:
            step = np.linalg.solve(info, grad)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"singular information matrix at iteration {it}: {exc}") from None
        if not np.all(np.isfinite(step)):
            raise ConvergenceError(f"non-finite Newton step at iteration {it}")
        t = 1.0
        while True:
            cand = theta + t * step
            ll_new = _loglik(x @ cand, y)
            if ll_new >= ll - 1e-12 * abs(ll):
                break
            t *= 0.5
            if t < 1e-10:
                # no ascent left at floating-point resolution
                converged = bool(np.max(np.abs(step)) < 1e-6)
                break
        if t < 1e-10:
            break
        theta, ll = cand, ll_new
        if np.max(np.abs(t * step)) < tol:
            converged = True
            break
    p = expit(x @ theta)
    info = (x * (p * (1.0 - p))[:, None]).T @ x
    return theta, info, ll, converged, it


def fit_mple(graph: TradeGraph, model: ModelSpec, tol: float = 1e-8, max_iter: int = 50) -> ErgmFit:
    """Fit ``model`` to ``graph`` by maximum pseudo-likelihood.

    Raises ``ModelError`` when the design is rank deficient (naming the
    collinear statistics) and ``ConvergenceError`` on separation.
    """
    if graph.n < 2:
        raise ModelError("MPLE needs at least 2 nodes")
    x, y = mple_design(graph, model)
    if y.min() == y.max():
        raise ConvergenceError(
            "perfect separation: every dyad is " + ("absent" if y.max() == 0 else "present")
            + "; the pseudo-likelihood has no finite maximiser"
        )
    rank = np.linalg.matrix_rank(x)
    if rank < model.n_stats:
        bad = _collinear_columns(x, model.names)
        raise ModelError(f"rank-deficient design (rank {rank} < {model.n_stats}); collinear statistics: {bad}")
    theta, info, ll, converged, iters = logistic_newton(x, y, tol=tol, max_iter=max_iter)
    if not np.all(np.isfinite(theta)) or not np.isfinite(ll):
        raise ConvergenceError("non-finite coefficients or pseudo-likelihood")
    if not converged:
        if np.max(np.abs(theta)) > 25:
            raise ConvergenceError(
                f"coefficients diverging after {iters} iterations (max |theta| = {np.max(np.abs(theta)):.3g}); "
                "likely (quasi-)separation"
            )
        warnings.warn(f"MPLE did not converge in {iters} iterations", TradenetWarning, stacklevel=2)
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"cannot invert information matrix: {exc}") from None
    var = np.diag(cov)
    if np.any(var <= 0) or not np.all(np.isfinite(var)):
        raise NumericalError("information matrix is not positive definite at the estimate")
    se = np.sqrt(var)
    k = model.n_stats
    return ErgmFit(
        names=model.names,
        coefficients=theta,
        standard_errors=se,
        pseudo_loglik=ll,
        aic=2 * k - 2 * ll,
        converged=converged,
        iterations=iters,
        n_dyads=len(y),
    )
