"""Wedge geometry for gluing the sheets back together.

The polynomial ``p(z, w) = z w / C_*`` sends sheet ``j`` into a closed
wedge around the ray at angle ``2 pi (j-1) / D``.  Wedges of half-angle
``arctan(C / (1 - C))`` are pairwise disjoint away from 0 exactly when
``C`` stays below the size bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approx import sector_scan
from .complexcore import Disc
from .polys import Poly2
from .sheets import SheetSystem, f0_unchecked, all_sheets, jacobian_gap, annulus_grid
from .surface import size_rhs


def choose_C(A: float, delta: int) -> float:
    """Midpoint of the admissible interval ``(A, size_rhs(delta))``."""
    hi = size_rhs(delta)
    if not A < hi:
        raise ValueError(f"empty interval for C: A = {A:.6g} >= {hi:.6g}")
    return 0.5 * (A + hi)


def vertex_angle(C: float) -> float:
    return 2.0 * math.atan2(C, 1.0 - C)


def wedges_disjoint(C: float, delta: int) -> bool:
    """Rotated copies of the wedge meet only at 0."""
    if delta < 2:
        return True
    return 0.5 * vertex_angle(C) < math.pi / delta


def p_eval(sys: SheetSystem, z, w):
    return np.asarray(z) * np.asarray(w) / sys.cStar


def disc_grid(eps: float, n_radii: int = 24, n_angles: int = 96):
    """Polar grid on ``0 < |z| <= eps`` (origin excluded)."""
    r = eps * np.arange(1, n_radii + 1) / n_radii
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


@dataclass(frozen=True)
class SheetMargins:
    sheet: int
    real: float
    imag: float

    @property
    def positive(self) -> bool:
        return self.real > 0 and self.imag > 0


def containment_margins(sys: SheetSystem, C: float, eps: float, grid=None) -> list[SheetMargins]:
    """Relative wedge-containment margins per sheet.

    For sheet ``j`` the image ``p`` is rotated back by ``omega_j`` and the
    minima of ``(Re p - (1-C)|z|^e) / |z|^e`` and ``(C|z|^e - |Im p|) / |z|^e``
    are reported, with ``e = k/D + 1``.
    """
    if eps > sys.validityRadius * (1 + 1e-12):
        raise ValueError("eps exceeds the sheets' validity radius")
    z = disc_grid(eps) if grid is None else np.asarray(grid, dtype=complex)
    z = z[z != 0]
    scale = np.abs(z) ** (sys.exponent + 1)
    out = []
    for j, (w_j, F) in enumerate(zip(sys.omegas, all_sheets(sys, z)), start=1):
        q = p_eval(sys, z, F) / w_j
        re = (q.real - (1 - C) * scale) / scale
        im = (C * scale - np.abs(q.imag)) / scale
        out.append(SheetMargins(j, float(np.min(re)), float(np.min(im))))
    return out


@dataclass(frozen=True)
class KallinReport:
    C: float
    epsilon: float
    vertexAngle: float
    containmentMargins: tuple = field(default=())
    wedgeDisjoint: bool = True
    jacobianMin: float | None = None
    sectorMaxSpread: float | None = None

    def to_dict(self) -> dict:
        return {
            "C": self.C,
            "epsilon": self.epsilon,
            "vertexAngle": self.vertexAngle,
            "wedgeDisjoint": self.wedgeDisjoint,
            "containmentMargins": [
                {"sheet": m.sheet, "real": m.real, "imag": m.imag} for m in self.containmentMargins
            ],
            "jacobianMin": self.jacobianMin,
            "sectorMaxSpread": self.sectorMaxSpread,
        }


class EpsilonSearchError(RuntimeError):
    pass


def _checks(sys: SheetSystem, C: float, eps: float, scan_n: int):
    """Run the three radius-dependent checks; return (failures, details)."""
    failures = []
    margins = containment_margins(sys, C, eps)
    if not all(m.positive for m in margins):
        failures.append("containment")
    # Jacobian radius is twice the working radius, capped at the sheet disc
    r_jac = min(2 * eps, sys.validityRadius)
    jmin = float(np.min(jacobian_gap(sys, annulus_grid(r_jac / 100, r_jac, 16, 64))))
    if not jmin > 0:
        failures.append("jacobian")
    scan = sector_scan(lambda x: f0_unchecked(sys, x), Disc(0j, eps), n=scan_n, exclude=(0j,))
    if not scan.passed:
        failures.append("sector")
    return failures, (margins, jmin, scan.maxSpread)


def epsilon_search(
    sys: SheetSystem, C: float, A: float | None = None, iterations: int = 20, scan_n: int = 25
) -> KallinReport:
    """Largest working radius on which containment, Jacobian and sector checks all pass."""
    if A is not None and not A < C < size_rhs(sys.delta):
        raise ValueError(f"C = {C:.6g} outside the admissible interval ({A:.6g}, {size_rhs(sys.delta):.6g})")
    delta_r = sys.validityRadius
    fails, det = _checks(sys, C, delta_r, scan_n)
    if not fails:
        eps = delta_r
    else:
        lo, hi = 0.0, delta_r
        best = None
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            f, d = _checks(sys, C, mid, scan_n)
            if f:
                hi, fails = mid, f
            else:
                lo, best = mid, d
        if best is None:
            raise EpsilonSearchError(f"no working radius found; failing checks at eps={hi:.3g}: {fails}")
        eps, det = lo, best
    margins, jmin, spread = det
    return KallinReport(
        C=C,
        epsilon=eps,
        vertexAngle=vertex_angle(C),
        containmentMargins=tuple(margins),
        wedgeDisjoint=wedges_disjoint(C, sys.delta),
        jacobianMin=jmin,
        sectorMaxSpread=spread,
    )


def symmetrize(g: Poly2, delta: int) -> Poly2:
    """``P`` with ``P(z, w^D) = (1/D) sum_j g(z, omega_j w)``.

    Averaging over the ``D``-th roots of unity kills every ``w``-power not
    divisible by ``D``.
    """
    if int(delta) != delta or delta < 1:
        raise ValueError("delta must be a positive integer")
    return Poly2({(mu, nu // delta): c for (mu, nu), c in g.terms.items() if nu % delta == 0})


def average_over_roots(g: Poly2, delta: int, z, w):
    """Direct evaluation of ``(1/D) sum_j g(z, omega_j w)``."""
    omegas = np.exp(2j * np.pi * np.arange(delta) / delta)
    return sum(g(z, om * np.asarray(w)) for om in omegas) / delta
