"""Discrete complex Chebyshev approximation by Lawson's reweighted least squares.

Solves ``min_c max_i |y_i - (A c)_i|`` approximately.  Each sweep solves a
weighted least-squares problem through the normal equations (with a small
Tikhonov floor) and then multiplies every weight by the modulus of its
residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LawsonResult:
    coef: np.ndarray
    sup_error: float
    iterations: int
    converged: bool
    oscillating: bool


def _solve(A, y, weights, ridge):
    G = A.conj().T @ (A * weights[:, None])
    rhs = A.conj().T @ (weights * y)
    lam = ridge * max(float(np.real(np.trace(G))) / G.shape[0], np.finfo(float).tiny)
    G[np.diag_indices_from(G)] += lam
    return np.linalg.solve(G, rhs)


def lawson(
    A,
    y,
    max_iter: int = 200,
    tol: float = 1e-8,
    ridge: float = 1e-12,
    x0=None,
    swing_tol: float = 1e-4,
) -> LawsonResult:
    """Return the best iterate found.

    ``x0`` seeds the best-so-far, so the returned error never exceeds the
    error of ``x0``.  ``converged`` is False only when the iteration cap is
    hit while the error still swings by more than ``swing_tol`` relative.
    """
    A = np.asarray(A, dtype=complex)
    y = np.asarray(y, dtype=complex).ravel()
    n, m = A.shape
    if n == 0:
        raise ValueError("empty sample grid")
    if y.shape != (n,):
        raise ValueError("target length does not match the design matrix")
    if m == 0:
        c = np.zeros(0, dtype=complex)
        return LawsonResult(c, float(np.max(np.abs(y))), 0, True, False)

    # column equilibration; undone on return
    norms = np.max(np.abs(A), axis=0)
    norms = np.where(norms > 0, norms, 1.0)
    As = A / norms

    best_c = None
    best_e = np.inf
    if x0 is not None:
        x0 = np.asarray(x0, dtype=complex)
        best_c = x0 * norms
        best_e = float(np.max(np.abs(y - As @ best_c)))

    w = np.full(n, 1.0 / n)
    history = []
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        c = _solve(As, y, w, ridge)
        r = np.abs(y - As @ c)
        e = float(np.max(r))
        if e < best_e:
            best_e, best_c = e, c
        history.append(e)
        scale = max(float(np.max(np.abs(y))), 1.0)
        if e <= 1e-14 * scale:
            converged = True
            break
        if len(history) > 1 and abs(history[-1] - history[-2]) <= tol * history[-1]:
            converged = True
            break
        w = w * r
        total = w.sum()
        if not total > 0:
            converged = True
            break
        w = w / total
    oscillating = False
    if not converged:
        tail = np.array(history[-10:])
        oscillating = bool((tail.max() - tail.min()) > swing_tol * tail.max())
        converged = not oscillating
    return LawsonResult(best_c / norms, best_e, it, converged, oscillating)
