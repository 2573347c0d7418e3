"""Sheets of the pullback under ``(z, w) -> (z, w**D)``, ``D = 2M - k``.

Over a punctured disc where ``|u| < 1`` the function ``Sigma + G`` has ``D``
distinct ``D``-th roots.  Each is evaluated in polar form as

    F_j(z) = C_* w_j |z|^{k/D} e^{-i theta} (1 + u(z))^{1/D}

with the principal root of ``1 + u``, so no binomial series is truncated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexcore import default_step, wirtinger_fd
from .surface import Certificate, CRSurface, normalize, tau_eval, tau_wirtinger


class SheetDomainError(ValueError):
    """Evaluation requested outside the validity disc."""


def u_eval(s: CRSurface, M: int, z):
    """``tau_M(z) + G(z) / (C_M z^{k-M} zbar^M)`` for ``z != 0``."""
    z = np.asarray(z, dtype=complex)
    return tau_eval(s, M, z) + s.G(z) / s.monomial(M)(z)


def _polar_grid(radius, n_angles, n_radii):
    r = radius * np.arange(1, n_radii + 1) / n_radii
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


def delta_radius(
    s: CRSurface,
    M: int,
    n_angles: int = 2048,
    n_radii: int = 64,
    margin: float = 0.05,
    iterations: int = 40,
) -> float:
    """Largest sampled radius on whose punctured disc ``|u| <= 1 - margin``."""
    bound = 1.0 - margin

    def worst(r):
        return float(np.max(np.abs(u_eval(s, M, _polar_grid(r, n_angles, n_radii)))))

    if worst(s.radius) <= bound:
        return float(s.radius)
    lo, hi = 0.0, float(s.radius)
    tiny = s.radius * 2.0**-iterations
    w_tiny = worst(tiny)
    if w_tiny > bound:
        raise ValueError(
            f"no admissible radius: sup|u| = {w_tiny:.6g} > {bound:g} even at radius {tiny:.3g}"
        )
    lo = tiny
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if worst(mid) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class SheetSystem:
    base: CRSurface
    M: int
    delta: int
    cStar: complex
    omegas: tuple
    validityRadius: float

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def exponent(self) -> float:
        """``k / D``: homogeneity degree of every sheet."""
        return self.base.k / self.delta

    def frak(self, z):
        return self.base.frak(z)

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "delta": self.delta,
            "cStar": [self.cStar.real, self.cStar.imag],
            "omegas": [[w.real, w.imag] for w in self.omegas],
            "validityRadius": self.validityRadius,
        }


def c_star(c_m: complex, delta: int) -> complex:
    """Principal ``delta``-th root ``|C_M|^{1/D} exp(i Arg(C_M) / D)``."""
    c_m = complex(c_m)
    return abs(c_m) ** (1.0 / delta) * np.exp(1j * np.angle(c_m) / delta)


def build_sheets(s: CRSurface, cert: Certificate, **radius_kw) -> SheetSystem:
    if not cert.passed:
        raise ValueError(f"certificate did not pass: {cert.reason}")
    s = normalize(s)
    M = cert.M
    delta = 2 * M - s.k
    omegas = tuple(complex(np.exp(2j * np.pi * j / delta)) for j in range(delta))
    # exact values on the axes keep omega_j symmetric checks free of roundoff
    omegas = tuple(complex(round(w.real, 15) + 0.0, round(w.imag, 15) + 0.0) for w in omegas)
    return SheetSystem(
        base=s,
        M=M,
        delta=delta,
        cStar=complex(c_star(s.C[M], delta)),
        omegas=omegas,
        validityRadius=delta_radius(s, M, **radius_kw),
    )


def _check_domain(sys: SheetSystem, z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > sys.validityRadius * (1 + 1e-12)):
        raise SheetDomainError(
            f"|z| = {float(np.max(np.abs(z))):.6g} exceeds validity radius {sys.validityRadius:.6g}"
        )
    return z


def f0_unchecked(sys: SheetSystem, z):
    """``F_0`` without the validity-disc check (finite-difference stencils)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    nz = z != 0
    zn = z[nz]
    r = np.abs(zn)
    u = u_eval(sys.base, sys.M, zn)
    out[nz] = r ** sys.exponent * np.exp(-1j * np.angle(zn)) * (1 + u) ** (1.0 / sys.delta)
    return complex(out) if out.ndim == 0 else out


def f0_eval(sys: SheetSystem, z):
    """Sheet with the ``C_* omega_j`` factor stripped."""
    return f0_unchecked(sys, _check_domain(sys, z))


def sheet_eval(sys: SheetSystem, j: int, z):
    """``F_j(z)`` for ``1 <= j <= D``."""
    if not 1 <= j <= sys.delta:
        raise ValueError(f"sheet index must lie in 1..{sys.delta}, got {j}")
    return sys.cStar * sys.omegas[j - 1] * f0_eval(sys, z)


def all_sheets(sys: SheetSystem, z):
    """Array of shape ``(D,) + z.shape``."""
    f0 = f0_eval(sys, z)
    return np.array([sys.cStar * w * f0 for w in sys.omegas])


def verify_product(sys: SheetSystem, z_samples, w_samples) -> float:
    """Relative residual of ``prod_j (w - F_j(z)) = w^D - (Sigma + G)(z)``.

    Each pair is scaled by ``(|w| + max_j |F_j(z)|)^D``, which bounds every
    term of the expanded product.
    """
    z = np.asarray(z_samples, dtype=complex).ravel()
    w = np.asarray(w_samples, dtype=complex).ravel()
    if z.shape != w.shape:
        raise ValueError("z and w samples must have the same length")
    F = all_sheets(sys, z)
    prod = np.prod(w[None, :] - F, axis=0)
    rhs = w**sys.delta - sys.frak(z)
    scale = (np.abs(w) + np.max(np.abs(F), axis=0)) ** sys.delta
    scale = np.where(scale > 0, scale, 1.0)
    return float(np.max(np.abs(prod - rhs) / scale))


def f0_wirtinger_closed(sys: SheetSystem, z):
    """Exact ``(dF_0/dz, dF_0/dzbar)`` when the residual ``G`` vanishes."""
    if sys.base.G:
        raise ValueError("closed-form derivatives need G = 0")
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("F_0 derivatives are taken off the origin")
    r, e = np.abs(z), np.exp(-1j * np.angle(z))
    p, D = sys.exponent, sys.delta
    g = r**p * e
    g_z = 0.5 * e * e * (p - 1) * r ** (p - 1)
    g_zbar = 0.5 * (p + 1) * r ** (p - 1)
    tau = tau_eval(sys.base, sys.M, z)
    t_z, t_zbar = tau_wirtinger(sys.base, sys.M, z)
    h = (1 + tau) ** (1.0 / D)
    dh = (1.0 / D) * (1 + tau) ** (1.0 / D - 1)
    return g_z * h + g * dh * t_z, g_zbar * h + g * dh * t_zbar


def jacobian_gap(sys: SheetSystem, z, h: float | None = None, closed_form: bool = False):
    """``|dF_0/dzbar| - |dF_0/dz|``; positive means orientation reversing."""
    z = _check_domain(sys, z)
    if np.any(z == 0):
        raise ValueError("the Jacobian test excludes z = 0")
    if closed_form:
        d_z, d_zbar = f0_wirtinger_closed(sys, z)
    else:
        if h is None:
            # keep the stencil well inside the punctured disc
            h = np.minimum(default_step(z), 1e-2 * np.abs(z))
        d_z, d_zbar = wirtinger_fd(lambda x: f0_unchecked(sys, x), z, h)
    gap = np.abs(d_zbar) - np.abs(d_z)
    return float(gap) if np.ndim(gap) == 0 else gap


def annulus_grid(r_in: float, r_out: float, n_radii: int = 32, n_angles: int = 128):
    r = np.linspace(r_in, r_out, n_radii)
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


def jacobian_sweep(sys: SheetSystem, r_out: float | None = None, n_radii: int = 32, n_angles: int = 128):
    """Minimum Jacobian gap on the annulus ``r_out/100 <= |z| <= r_out``."""
    r_out = sys.validityRadius if r_out is None else r_out
    gaps = jacobian_gap(sys, annulus_grid(r_out / 100, r_out, n_radii, n_angles))
    return float(np.min(gaps))


def series_tail_bound(A: float, n_terms: int) -> float:
    """Tail of the binomial series ``sum_{nu > N} |alpha_nu| A^nu <= A^{N+1}/(1-A)``."""
    if not 0 <= A < 1:
        raise ValueError("need 0 <= A < 1")
    return A ** (n_terms + 1) / (1 - A)


def binomial_coefficients(delta: int, n_terms: int) -> list[float]:
    """Taylor coefficients ``alpha_1..alpha_N`` of ``(1 + x)^{1/delta}``."""
    out, a = [], 1.0
    for nu in range(1, n_terms + 1):
        a *= (1.0 / delta - (nu - 1)) / nu
        out.append(a)
    return out


def sheet_magnitude_bound(sys: SheetSystem) -> float:
    """Constant ``|C_*| 2^{1/D}`` in ``|F_j(z)| <= const |z|^{k/D}``."""
    return abs(sys.cStar) * 2 ** (1.0 / sys.delta)


