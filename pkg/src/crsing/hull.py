"""Numerical probe of the polynomial hull of a sampled compact set in C^2.

For a probe point ``p`` and degree ``d`` we estimate

    m_d = min { max_K |P| : P(p) = 1, deg P <= d }

over complex polynomials in ``(z, w)``.  ``P = 1`` is feasible, so
``m_d <= 1``; a value clearly below 1 exhibits a separating polynomial and
proves ``p`` lies outside the hull.  The converse is never claimed.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_c2_points
from .lawson import lawson
from .surface import CRSurface, normalize

OUTSIDE = "OUTSIDE"
UNRESOLVED = "UNRESOLVED"


def monomials(d: int) -> list[tuple[int, int]]:
    """Non-constant exponents ``(alpha, beta)`` with ``alpha + beta <= d``, graded."""
    return [(t - b, b) for t in range(1, d + 1) for b in range(t + 1)]


def _design(samples, probe, exps):
    z, w = samples[:, 0], samples[:, 1]
    zp, wp = probe
    cols = [z**a * w**b - zp**a * wp**b for a, b in exps]
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class HullProbeResult:
    probePoint: tuple
    degrees: tuple
    mValues: tuple
    converged: tuple
    verdict: str
    witnessDegree: int | None

    def to_dict(self) -> dict:
        z, w = self.probePoint
        return {
            "probe": [z.real, z.imag, w.real, w.imag],
            "degrees": list(self.degrees),
            "mValues": list(self.mValues),
            "converged": list(self.converged),
            "verdict": self.verdict,
            "witnessDegree": self.witnessDegree,
        }


def hull_probe(
    samples,
    probe,
    d_max: int = 8,
    threshold: float = 1e-3,
    max_iter: int = 200,
    allow_member: bool = False,
) -> HullProbeResult:
    """Degree-graded constrained minimax values for one probe point.

    Each degree is warm-started from the previous optimum, so the sequence
    is non-increasing by construction.
    """
    K = as_c2_points(samples, "samples")
    p = tuple(complex(x) for x in np.asarray(probe, dtype=complex).ravel())
    if len(p) != 2:
        raise ValueError("probe must be a point of C^2")
    member = bool(np.any(np.all(K == np.array(p), axis=1)))
    if member and not allow_member:
        raise ValueError("probe point is one of the samples")
    m_vals, conv = [], []
    prev = np.zeros(0, dtype=complex)
    for d in range(1, d_max + 1):
        exps = monomials(d)
        A = _design(K, p, exps)
        x0 = np.concatenate([prev, np.zeros(len(exps) - prev.size, dtype=complex)])
        if member:
            # P(probe) = 1 is attained on K itself
            m_vals.append(1.0)
            conv.append(True)
            prev = x0
            continue
        res = lawson(A, -np.ones(K.shape[0]), max_iter=max_iter, x0=x0)
        prev = res.coef
        m_vals.append(min(res.sup_error, 1.0))
        conv.append(res.converged)
    below = [d for d, m in zip(range(1, d_max + 1), m_vals) if m < 1 - threshold]
    verdict = OUTSIDE if below else UNRESOLVED
    return HullProbeResult(
        p, tuple(range(1, d_max + 1)), tuple(m_vals), tuple(conv), verdict, below[0] if below else None
    )


def graph_samples(F, radius: float, n_radii: int = 48, n_angles: int = 192, center: complex = 0j):
    """Points ``(z, F(z))`` on a polar grid over the closed disc, centre included."""
    r = radius * np.arange(1, n_radii + 1) / n_radii
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    z = np.append(0j, (r[:, None] * np.exp(1j * t)[None, :]).ravel()) + center
    return np.stack([z, np.asarray(F(z), dtype=complex)], axis=1)


def probe_lattice(F, eps: float, n_probes: int, tube: float = 0.5):
    """Deterministic probes ``(z_m, F(z_m) + offset_m)`` near but off the graph.

    Base points spiral through ``|z| <= eps/2``; offsets have modulus
    ``tube * max|F|`` on the disc and rotating phases.
    """
    if n_probes == 0:
        return np.zeros((0, 2), dtype=complex)
    m = np.arange(n_probes)
    golden = np.pi * (3 - np.sqrt(5))
    z = 0.5 * eps * np.sqrt((m + 0.5) / n_probes) * np.exp(1j * golden * m)
    ring = eps * np.exp(2j * np.pi * np.arange(256) / 256)
    size = tube * max(float(np.max(np.abs(F(ring)))), 1e-12)
    w = np.asarray(F(z), dtype=complex) + size * np.exp(2j * np.pi * (m + 0.25) / max(n_probes, 1))
    return np.stack([z, w], axis=1)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CRSING_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ConvexityScanReport:
    eps: float
    results: tuple

    @property
    def n_outside(self) -> int:
        return sum(r.verdict == OUTSIDE for r in self.results)

    @property
    def unresolved(self) -> tuple:
        return tuple(r for r in self.results if r.verdict == UNRESOLVED)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "nProbes": len(self.results),
            "nOutside": self.n_outside,
            "unresolved": [
                {"probe": r.to_dict()["probe"], "mMax": r.mValues[-1]} for r in self.unresolved
            ],
            "probes": [r.to_dict() for r in self.results],
        }


def convexity_scan(
    s: CRSurface,
    eps: float,
    n_probes: int = 20,
    d_max: int = 8,
    tube: float = 0.5,
    n_radii: int = 48,
    n_angles: int = 192,
    max_iter: int = 200,
) -> ConvexityScanReport:
    """Probe the hull of the graph of ``Sigma + G`` over the disc of radius ``eps``."""
    F = normalize(s).frak
    K = graph_samples(F, eps, n_radii, n_angles)
    probes = probe_lattice(F, eps, n_probes, tube)

    def run(p):
        return hull_probe(K, p, d_max=d_max, max_iter=max_iter)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = tuple(pool.map(run, list(probes)))
    return ConvexityScanReport(eps, results)


class HullProbe(BaseEstimator):
    """Estimator wrapper: ``fit`` on samples of a compact set in C^2.

    ``decision_function`` returns ``m_{max_degree}`` for each probe and
    ``predict`` the verdict strings.
    """

    def __init__(self, max_degree=8, threshold=1e-3, max_iter=200):
        self.max_degree = max_degree
        self.threshold = threshold
        self.max_iter = max_iter

    def fit(self, X, y=None):
        self.samples_ = as_c2_points(X, "X")
        self.n_samples_ = self.samples_.shape[0]
        return self

    def probe(self, point) -> HullProbeResult:
        check_is_fitted(self, "samples_")
        return hull_probe(self.samples_, point, self.max_degree, self.threshold, self.max_iter)

    def decision_function(self, X):
        P = as_c2_points(X, "probes")
        return np.array([self.probe(p).mValues[-1] for p in P])

    def predict(self, X):
        P = as_c2_points(X, "probes")
        return np.array([self.probe(p).verdict for p in P])
