"""Density of the algebra generated by ``z`` and ``F`` on a disc.

Three pieces live here:

* ``sector_scan`` samples the value-distribution condition: for each base
  point ``zeta`` the products ``(z - zeta)(F(z) - F(zeta))`` must fit in an
  open sector at 0 of angle below ``2 pi``.
* ``qn_eval``/``fn_eval`` build the functions that converge boundedly to
  ``1/(z - zeta)`` once such a sector is known.
* ``minimax_fit``/``approx_report`` (and ``MinimaxRegressor``) fit targets
  in the span of ``z^a F^b`` in the discrete sup norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_complex_points
from .complexcore import (
    TWO_PI,
    Disc,
    Sector,
    angular_spread,
    grad_norm,
    minimal_enclosing_sector,
    wirtinger_fd,
)
from .lawson import lawson
from .polys import Poly2

# -- sector scan ------------------------------------------------------------


@dataclass(frozen=True)
class SectorWitness:
    zeta: complex
    sector: Sector
    phi: float
    nu: int

    def check(self, n_rays: int = 64) -> bool:
        """Branch condition on rays just inside the sector's boundary."""
        lo, hi = self.sector.theta_lo, self.sector.theta_hi
        shrink = 1e-9 * (hi - lo)
        t = np.linspace(lo + shrink, hi - shrink, n_rays)
        w = np.exp(1j * t)
        return bool(np.all(np.real((np.exp(1j * self.phi) * w) ** (1.0 / self.nu)) > 0))


@dataclass(frozen=True)
class ScanReport:
    passed: bool
    maxSpread: float
    witnesses: tuple = field(repr=False)
    violatingZeta: tuple
    fiberFlags: tuple
    n_zeta: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "maxSpread": self.maxSpread,
            "nZeta": self.n_zeta,
            "nWitnesses": len(self.witnesses),
            "violatingZeta": [[z.real, z.imag] for z in self.violatingZeta],
            "fiberFlags": [[z.real, z.imag] for z in self.fiberFlags],
        }


def lattice_in_disc(disc: Disc, n: int):
    """Square lattice with ``n`` nodes per side, clipped to the disc.

    Returns the points and the lattice spacing.
    """
    h = 2 * disc.radius / (n - 1)
    g = np.linspace(-disc.radius, disc.radius, n)
    X, Y = np.meshgrid(g, g)
    z = (X + 1j * Y).ravel()
    z = z[np.abs(z) <= disc.radius * (1 + 1e-12)]
    return z + disc.center, h


def sector_scan(
    F,
    disc: Disc,
    n: int = 41,
    exclude=(),
    padding: float = 1.05,
    tol: float = 1e-12,
    fiber_factor: float = 4.0,
) -> ScanReport:
    """Sample the sector condition of ``F`` over a lattice in ``disc``.

    Base points within ``tol`` of an ``exclude`` point are skipped (the
    declared null set).  The fibre test counts lattice nodes with
    ``|F(z) - F(zeta)| < h * ||grad F(zeta)||``; a transversal fibre point
    catches about ``pi`` of them, so counts beyond ``fiber_factor * pi``
    mean the fibre looks like a curve or worse.  This is a heuristic: a
    finite grid cannot tell countable from uncountable.
    """
    pts, h = lattice_in_disc(disc, n)
    vals = np.asarray(F(pts), dtype=complex)
    excl = np.asarray(exclude, dtype=complex).ravel()
    d_z, d_zbar = wirtinger_fd(F, pts)
    gnorm = grad_norm(d_z, d_zbar)
    expected_hits = math.pi

    witnesses, bad, flags = [], [], []
    max_spread = 0.0
    n_zeta = 0
    for i, zeta in enumerate(pts):
        if excl.size and np.min(np.abs(excl - zeta)) <= tol:
            continue
        n_zeta += 1
        diff = vals - vals[i]
        mask = np.abs(diff) > tol
        hits = int(np.count_nonzero(np.abs(diff) < h * max(gnorm[i], 1e-12)))
        if hits > fiber_factor * expected_hits:
            flags.append(complex(zeta))
        if not np.any(mask):
            continue
        prods = (pts[mask] - zeta) * diff[mask]
        spread, _ = angular_spread(prods)
        max_spread = max(max_spread, spread)
        sec = minimal_enclosing_sector(prods, padding)
        if sec is None:
            bad.append(complex(zeta))
            continue
        phi, nu = choose_branch(sec)
        witnesses.append(SectorWitness(complex(zeta), sec, phi, nu))
    passed = not bad and not flags
    return ScanReport(passed, max_spread, tuple(witnesses), tuple(bad), tuple(flags), n_zeta)


def choose_branch(sector: Sector) -> tuple[float, int]:
    """Rotation ``phi`` and root order ``nu`` making ``Re[(e^{i phi} w)^{1/nu}] > 0``."""
    if not 0 < sector.width < TWO_PI:
        raise ValueError("sector angular length must lie in (0, 2pi)")
    phi = -sector.bisector
    phi = (phi + math.pi) % TWO_PI - math.pi
    nu = 1 if sector.width <= math.pi else 2
    return phi, nu


# -- bounded approximants of 1/(z - zeta) ------------------------------


def _rotated_root(phi, nu, w):
    x = np.exp(1j * phi) * w
    if nu == 1:
        return x, np.all(x.real >= -1e-12 * np.abs(x))
    on_cut = (np.abs(x.imag) <= 1e-12 * np.abs(x)) & (x.real < 0)
    return np.sqrt(x), not np.any(on_cut)


def qn_eval(phi: float, nu: int, n: int, w):
    """``Q_n(w) = {1 - [1 + (e^{i phi} w)^{1/nu}]^{-n}}^nu / w``, and ``e^{i phi} n`` at 0."""
    if nu not in (1, 2):
        raise ValueError("nu must be 1 or 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    zero = w == 0
    out[zero] = np.exp(1j * phi) * n
    wn = w[~zero]
    root, ok = _rotated_root(phi, nu, wn)
    if not ok:
        raise ValueError("w lies outside the closed sector where the chosen branch is valid")
    out[~zero] = (1 - (1 + root) ** (-n)) ** nu / wn
    return complex(out) if out.ndim == 0 else out


def fn_eval(F, zeta: complex, witness: SectorWitness, n: int, z, tol: float = 1e-12):
    """``f_n(z) = W(z) Q_n((z - zeta) W(z))`` with ``W = F - F(zeta)``."""
    z = np.asarray(z, dtype=complex)
    W = np.asarray(F(z), dtype=complex) - complex(F(np.asarray(zeta, dtype=complex)))
    W = np.where(np.abs(W) <= tol, 0, W)
    s = (z - zeta) * W
    nz = s != 0
    inside = np.asarray(
        np.mod(np.angle(s[nz]) - witness.sector.theta_lo, TWO_PI) <= witness.sector.width + 1e-12
    )
    if not np.all(inside):
        raise ValueError("(z - zeta) W(z) leaves the witness sector")
    return W * qn_eval(witness.phi, witness.nu, n, s)


def witness_for(F, zeta: complex, points, padding: float = 1.05, tol: float = 1e-12) -> SectorWitness:
    """Build a sector witness at ``zeta`` from sampled points."""
    z = np.asarray(points, dtype=complex).ravel()
    W = np.asarray(F(z), dtype=complex) - complex(F(np.asarray(zeta, dtype=complex)))
    prods = (z - zeta) * W
    prods = prods[(np.abs(W) > tol) & (z != zeta)]
    sec = minimal_enclosing_sector(prods, padding)
    if sec is None:
        raise ValueError(f"no open sector contains the sampled products at zeta={zeta}")
    phi, nu = choose_branch(sec)
    return SectorWitness(complex(zeta), sec, phi, nu)


# -- density engine -------------------------------------------------------------


class AlgebraBasis:
    """Functions ``z^a F(z)^b``, ``a <= a_max``, ``b <= b_max``, ordered by ``b`` then ``a``."""

    def __init__(self, F, a_max: int, b_max: int):
        if a_max < 0 or b_max < 0:
            raise ValueError("degrees must be non-negative")
        self.F = F
        self.a_max, self.b_max = a_max, b_max
        self.exponents = [(a, b) for b in range(b_max + 1) for a in range(a_max + 1)]

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex).ravel()
        Fz = np.asarray(self.F(z), dtype=complex) if self.b_max else np.ones_like(z)
        return np.stack([z**a * Fz**b for a, b in self.exponents], axis=1)

    def functions(self):
        return [lambda z, a=a, b=b: np.asarray(z) ** a * np.asarray(self.F(z)) ** b for a, b in self.exponents]


def algebra_basis(F, a_max: int, b_max: int) -> AlgebraBasis:
    return AlgebraBasis(F, a_max, b_max)


@dataclass(frozen=True)
class FitResult:
    coefficients: dict
    supError: float
    converged: bool
    iterations: int


def _values(target, z):
    return np.asarray(target(z) if callable(target) else target, dtype=complex).ravel()


def minimax_fit(target, basis: AlgebraBasis, points, max_iter: int = 200, tol: float = 1e-8, x0=None) -> FitResult:
    """Discrete Chebyshev fit of ``target`` on ``points`` from ``basis``."""
    z = np.asarray(points, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("empty grid")
    res = lawson(basis(z), _values(target, z), max_iter=max_iter, tol=tol, x0=x0)
    coef = {e: complex(c) for e, c in zip(basis.exponents, res.coef)}
    return FitResult(coef, res.sup_error, res.converged, res.iterations)


def polar_disc_grid(disc: Disc, n_radii: int = 64, n_angles: int = 256):
    """Tensor polar grid plus the centre."""
    r = disc.radius * np.arange(1, n_radii + 1) / n_radii
    t = TWO_PI * np.arange(n_angles) / n_angles
    z = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    return np.append(disc.center, z + disc.center)


@dataclass(frozen=True)
class ApproxReport:
    schedule: tuple
    errors: tuple
    coefficients: dict
    converged: tuple

    def as_poly(self) -> Poly2:
        """Final fit as a polynomial in ``(z, w)`` with ``w`` standing for ``F``."""
        return Poly2(self.coefficients)

    def to_dict(self) -> dict:
        return {
            "schedule": [list(s) for s in self.schedule],
            "errors": list(self.errors),
            "converged": list(self.converged),
            "coefficients": [
                [a, b, c.real, c.imag] for (a, b), c in sorted(self.coefficients.items())
            ],
        }

    def to_csv(self) -> str:
        lines = ["a_max,b_max,sup_error"]
        lines += [f"{a},{b},{e!r}" for (a, b), e in zip(self.schedule, self.errors)]
        return "\n".join(lines) + "\n"


def approx_report(F, target, schedule, points, max_iter: int = 200) -> ApproxReport:
    """Fit along a nested schedule of ``(a_max, b_max)``, warm-starting each step."""
    schedule = [tuple(map(int, s)) for s in schedule]
    for (a0, b0), (a1, b1) in zip(schedule, schedule[1:]):
        if a1 < a0 or b1 < b0:
            raise ValueError("schedule must be nested")
    z = np.asarray(points, dtype=complex).ravel()
    y = _values(target, z)
    errors, flags = [], []
    prev = {}
    fit = None
    for a_max, b_max in schedule:
        basis = algebra_basis(F, a_max, b_max)
        x0 = np.array([prev.get(e, 0j) for e in basis.exponents]) if prev else None
        fit = minimax_fit(y, basis, z, max_iter=max_iter, x0=x0)
        errors.append(fit.supError)
        flags.append(fit.converged)
        prev = fit.coefficients
    return ApproxReport(tuple(schedule), tuple(errors), dict(fit.coefficients) if fit else {}, tuple(flags))


class MinimaxRegressor(BaseEstimator):
    """Sup-norm regression of complex targets on ``z^a F(z)^b``.

    Parameters
    ----------
    generator : callable or None
        The second generator ``F``; ``None`` means holomorphic polynomials only.
    a_max, b_max : int
        Degree caps in ``z`` and ``F``.
    max_iter, tol : Lawson iteration cap and stagnation tolerance.
    """

    def __init__(self, generator=None, a_max=4, b_max=4, max_iter=200, tol=1e-8):
        self.generator = generator
        self.a_max = a_max
        self.b_max = b_max
        self.max_iter = max_iter
        self.tol = tol

    def _basis(self):
        F = self.generator if self.generator is not None else (lambda z: np.zeros_like(z))
        return algebra_basis(F, self.a_max, self.b_max if self.generator is not None else 0)

    def fit(self, X, y):
        z = as_complex_points(X)
        y = np.asarray(y, dtype=complex).ravel()
        if y.shape != z.shape:
            raise ValueError("X and y have inconsistent lengths")
        basis = self._basis()
        res = minimax_fit(y, basis, z, max_iter=self.max_iter, tol=self.tol)
        self.exponents_ = list(basis.exponents)
        self.coef_ = np.array([res.coefficients[e] for e in self.exponents_])
        self.sup_error_ = res.supError
        self.converged_ = res.converged
        self.n_iter_ = res.iterations
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        z = as_complex_points(X)
        return self._basis()(z) @ self.coef_

    def score(self, X, y):
        """Negative sup-norm residual (greater is better)."""
        y = np.asarray(y, dtype=complex).ravel()
        return -float(np.max(np.abs(self.predict(X) - y)))
