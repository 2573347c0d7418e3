"""Plane geometry shared by every other module: discs, open sectors, circle
grids and finite-difference Wirtinger derivatives."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disc radius must be positive, got {self.radius}")

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) <= self.radius


@dataclass(frozen=True)
class Sector:
    """Open sector ``{vertex + r e^{it} : r > 0, theta_lo < t < theta_hi}``.

    The bounds are kept exactly as given, so an interval may straddle the
    branch cut of the principal argument.
    """

    vertex: complex
    theta_lo: float
    theta_hi: float

    def __post_init__(self):
        width = self.theta_hi - self.theta_lo
        if not 0.0 < width < TWO_PI:
            raise ValueError(f"sector angular length must lie in (0, 2pi), got {width}")

    @property
    def width(self) -> float:
        return self.theta_hi - self.theta_lo

    @property
    def bisector(self) -> float:
        return 0.5 * (self.theta_lo + self.theta_hi)

    def rotated(self, angle: float) -> "Sector":
        return Sector(self.vertex, self.theta_lo + angle, self.theta_hi + angle)


@dataclass(frozen=True)
class CircleGrid:
    n: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 8:
            raise ValueError(f"circle grid needs at least 8 points, got {self.n}")
        pts = np.exp(1j * TWO_PI * np.arange(self.n) / self.n)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def half_spacing(self) -> float:
        """Half the arc length between neighbouring samples."""
        return np.pi / self.n


def sector_contains(s: Sector, w):
    """Membership in the open sector ``s``; vectorised over ``w``."""
    w = np.asarray(w, dtype=complex)
    d = w - s.vertex
    t = np.mod(np.angle(d) - s.theta_lo, TWO_PI)
    inside = (d != 0) & (t > 0) & (t < s.width)
    return bool(inside) if inside.ndim == 0 else inside


def angular_spread(values) -> tuple[float, float]:
    """Circular spread of the arguments of ``values``.

    Returns ``(spread, start)``: the arguments all lie on the arc
    ``[start, start + spread]`` and no shorter arc contains them.
    """
    values = np.asarray(values, dtype=complex).ravel()
    if values.size == 0:
        raise ValueError("need at least one value")
    if np.any(values == 0):
        raise ValueError("zero value has no argument; a point of the fibre was passed in")
    ang = np.sort(np.angle(values))
    gaps = np.diff(np.append(ang, ang[0] + TWO_PI))
    i = int(np.argmax(gaps))
    spread = TWO_PI - gaps[i]
    start = ang[(i + 1) % ang.size]
    return max(float(spread), 0.0), float(start)


def minimal_enclosing_sector(values, padding: float = 1.05, min_width: float = 1e-9):
    """Smallest open sector at the origin containing every value, or ``None``.

    The exact spread is widened by ``padding`` (and at least ``min_width``)
    so that every value lies strictly inside.  ``None`` means the padded
    spread reaches ``2*pi``.
    """
    if padding < 1.0:
        raise ValueError("padding must be >= 1")
    spread, start = angular_spread(values)
    width = max(spread * padding, spread + min_width)
    if width >= TWO_PI:
        return None
    mid = start + 0.5 * spread
    return Sector(0j, mid - 0.5 * width, mid + 0.5 * width)


def default_step(z):
    return 1e-5 * np.maximum(1.0, np.abs(z))


def wirtinger_fd(phi, z, h: float | None = None):
    """Central-difference estimates of ``(dphi/dz, dphi/dzbar)`` at ``z``.

    ``phi`` is called on arrays of shifted points, so vectorised callables
    get the whole stencil in four calls.
    """
    z = np.asarray(z, dtype=complex)
    h = default_step(z) if h is None else np.asarray(h, dtype=float)
    if not np.all(h > 0):
        raise ValueError("step must be positive")
    phi_x = (np.asarray(phi(z + h)) - np.asarray(phi(z - h))) / (2 * h)
    phi_y = (np.asarray(phi(z + 1j * h)) - np.asarray(phi(z - 1j * h))) / (2 * h)
    d_z = 0.5 * (phi_x - 1j * phi_y)
    d_zbar = 0.5 * (phi_x + 1j * phi_y)
    if d_z.ndim == 0:
        return complex(d_z), complex(d_zbar)
    return d_z, d_zbar


def grad_norm(d_z, d_zbar):
    """``|dphi/dz| + |dphi/dzbar|``."""
    return np.abs(d_z) + np.abs(d_zbar)
