"""Input coercion for the estimator classes."""

import numpy as np


def as_complex_points(X, name="X"):
    """Accept complex ``(n,)``/``(n, 1)`` or real ``(n, 2)`` arrays of plane points."""
    X = np.asarray(X)
    if X.ndim == 2 and X.shape[1] == 2 and not np.iscomplexobj(X):
        X = X[:, 0] + 1j * X[:, 1]
    elif X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    if X.ndim != 1:
        raise ValueError(f"{name} must be complex (n,) or real (n, 2); got shape {X.shape}")
    X = X.astype(complex)
    if X.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def as_c2_points(X, name="X"):
    """Accept complex ``(n, 2)`` or real ``(n, 4)`` arrays of points of C^2."""
    X = np.asarray(X)
    if X.ndim == 1 and X.size in (2, 4):
        X = X[None, :]
    if X.ndim == 2 and X.shape[1] == 4 and not np.iscomplexobj(X):
        X = np.stack([X[:, 0] + 1j * X[:, 1], X[:, 2] + 1j * X[:, 3]], axis=1)
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError(f"{name} must be complex (n, 2) or real (n, 4); got shape {X.shape}")
    X = X.astype(complex)
    if X.shape[0] == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X
