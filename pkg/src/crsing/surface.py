"""Surface germs ``w = C_0 z^k + Sigma(z) + G(z)`` and their convexity certificate.

For each admissible index ``M`` the ratio ``tau_M`` of the off-diagonal part
of ``Sigma`` to the ``z^{k-M} zbar^M`` term is sampled on the unit circle.
Sup-norm estimates are inflated by a Lipschitz correction so that they are
upper bounds up to the grid resolution, which is the safe direction for
the strict inequalities being checked.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .complexcore import CircleGrid, grad_norm
from .polys import BihomPoly

DEFAULT_CIRCLE_N = 4096


class SurfaceSchemaError(ValueError):
    """Malformed surface description."""


@dataclass(frozen=True)
class CRSurface:
    k: int
    C: tuple
    G: BihomPoly = field(default_factory=BihomPoly)
    radius: float = 1.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k <= 2:
            raise ValueError(f"degree k must be an integer > 2, got {self.k}")
        C = tuple(complex(c) for c in self.C)
        if len(C) != self.k + 1:
            raise ValueError(f"expected {self.k + 1} coefficients C_0..C_k, got {len(C)}")
        object.__setattr__(self, "C", C)
        if not isinstance(self.G, BihomPoly):
            object.__setattr__(self, "G", BihomPoly(self.G))
        low = [t for t in self.G.terms if sum(t) <= self.k]
        if low:
            raise ValueError(f"residual terms must have total degree >= k+1, got {sorted(low)}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @classmethod
    def from_terms(cls, k: int, coefficients: dict, residual: dict | None = None, radius: float = 1.0):
        """Build from a sparse ``{j: C_j}`` map."""
        C = [0j] * (k + 1)
        for j, c in coefficients.items():
            if not 0 <= j <= k:
                raise ValueError(f"coefficient index {j} outside 0..{k}")
            C[j] = complex(c)
        return cls(k, tuple(C), BihomPoly(residual or {}), radius)

    def monomial(self, j: int) -> BihomPoly:
        return BihomPoly({(self.k - j, j): self.C[j]})

    @property
    def sigma(self) -> BihomPoly:
        return BihomPoly({(self.k - j, j): self.C[j] for j in range(1, self.k + 1)})

    @property
    def phi(self) -> BihomPoly:
        """Right-hand side of the defining equation, ``C_0 z^k + Sigma + G``."""
        return self.monomial(0) + self.sigma + self.G

    @property
    def frak(self) -> BihomPoly:
        """``Sigma + G``: the defining function after normalisation."""
        return self.sigma + self.G

    # -- JSON -------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "coefficients": [
                {"j": j, "re": c.real, "im": c.imag} for j, c in enumerate(self.C) if c != 0
            ],
            "residual": [
                {"a": a, "b": b, "re": c.real, "im": c.imag} for (a, b), c in self.G.sorted_terms()
            ],
            "radius": self.radius,
        }

    @classmethod
    def from_dict(cls, data) -> "CRSurface":
        if not isinstance(data, dict):
            raise SurfaceSchemaError("surface must be a JSON object")
        _only_keys(data, {"k", "coefficients", "residual", "radius"}, "surface")
        for key in ("k", "coefficients"):
            if key not in data:
                raise SurfaceSchemaError(f"missing required field '{key}'")
        k = data["k"]
        if not isinstance(k, int) or isinstance(k, bool) or k <= 2:
            raise SurfaceSchemaError(f"'k' must be an integer > 2, got {k!r}")
        coeffs = {}
        for i, rec in enumerate(_as_list(data["coefficients"], "coefficients")):
            where = f"coefficients[{i}]"
            _only_keys(rec, {"j", "re", "im"}, where)
            j = _int_field(rec, "j", where)
            if not 0 <= j <= k:
                raise SurfaceSchemaError(f"{where}: j={j} outside 0..{k}")
            if j in coeffs:
                raise SurfaceSchemaError(f"{where}: duplicate j={j}")
            coeffs[j] = _complex_field(rec, where)
        residual = {}
        for i, rec in enumerate(_as_list(data.get("residual", []), "residual")):
            where = f"residual[{i}]"
            _only_keys(rec, {"a", "b", "re", "im"}, where)
            a, b = _int_field(rec, "a", where), _int_field(rec, "b", where)
            if a < 0 or b < 0:
                raise SurfaceSchemaError(f"{where}: negative exponent")
            if a + b <= k:
                raise SurfaceSchemaError(f"{where}: total degree {a + b} must exceed k={k}")
            if (a, b) in residual:
                raise SurfaceSchemaError(f"{where}: duplicate term ({a}, {b})")
            residual[(a, b)] = _complex_field(rec, where)
        radius = data.get("radius", 1.0)
        if not isinstance(radius, (int, float)) or isinstance(radius, bool) or not radius > 0:
            raise SurfaceSchemaError(f"'radius' must be a positive number, got {radius!r}")
        return cls.from_terms(k, coeffs, residual, float(radius))

    @classmethod
    def from_json(cls, text: str) -> "CRSurface":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SurfaceSchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)


def _as_list(v, name):
    if not isinstance(v, list):
        raise SurfaceSchemaError(f"'{name}' must be a list")
    return v


def _only_keys(rec, allowed, where):
    if not isinstance(rec, dict):
        raise SurfaceSchemaError(f"{where}: expected an object")
    extra = set(rec) - allowed
    if extra:
        raise SurfaceSchemaError(f"{where}: unknown field(s) {sorted(extra)}")


def _int_field(rec, key, where):
    v = rec.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SurfaceSchemaError(f"{where}: '{key}' must be an integer")
    return v


def _complex_field(rec, where):
    vals = []
    for key in ("re", "im"):
        v = rec.get(key, 0.0)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise SurfaceSchemaError(f"{where}: '{key}' must be a finite number")
        vals.append(float(v))
    return complex(*vals)


# -- basic evaluations -------------------------------------------------------


def normalize(s: CRSurface) -> CRSurface:
    """Absorb the holomorphic ``C_0 z^k`` term into the ``w`` coordinate."""
    return replace(s, C=(0j,) + s.C[1:])


def sigma_eval(s: CRSurface, z):
    return s.sigma(z)


def index_set(s: CRSurface) -> set[int]:
    return {j for j in range(1, s.k + 1) if 2 * j > s.k and s.C[j] != 0}


def _check_index(s: CRSurface, M: int):
    if M not in index_set(s):
        raise ValueError(f"M={M} is not in the index set {sorted(index_set(s))}")


def _check_nonzero(z):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("tau is undefined at z = 0")
    return z


def tau_eval(s: CRSurface, M: int, z):
    _check_index(s, M)
    z = _check_nonzero(z)
    lead = s.monomial(M)(z)
    return (s.sigma(z) - lead) / lead


def tau_wirtinger(s: CRSurface, M: int, z):
    """Closed-form ``(dtau/dz, dtau/dzbar)`` by the quotient rule."""
    _check_index(s, M)
    z = _check_nonzero(z)
    D = s.monomial(M)
    N = s.sigma - D
    Dv, Nv = D(z), N(z)
    den = Dv * Dv
    d_z = (N.d_z()(z) * Dv - Nv * D.d_z()(z)) / den
    d_zbar = (N.d_zbar()(z) * Dv - Nv * D.d_zbar()(z)) / den
    return d_z, d_zbar


def _grid(grid):
    if grid is None:
        return CircleGrid(DEFAULT_CIRCLE_N)
    if isinstance(grid, int):
        return CircleGrid(grid)
    return grid


@dataclass(frozen=True)
class TauProfile:
    M: int
    values: np.ndarray = field(repr=False)
    A: float
    gradSup: float


def tau_profile(s: CRSurface, M: int, grid=None) -> TauProfile:
    grid = _grid(grid)
    pts = grid.points
    tau = tau_eval(s, M, pts)
    g = np.abs(pts) * grad_norm(*tau_wirtinger(s, M, pts))
    # tangential derivative along |z|=1 is bounded by |z|*||grad tau||
    A = float(np.max(np.abs(tau)) + np.max(g) * grid.half_spacing)
    dg = np.abs(np.diff(np.append(g, g[0])))
    grad_sup = float(np.max(g) + 0.5 * np.max(dg))
    return TauProfile(M, tau, A, grad_sup)


def tau_sup(s: CRSurface, M: int, grid=None) -> float:
    return tau_profile(s, M, grid).A


def grad_tau_sup(s: CRSurface, M: int, grid=None) -> float:
    return tau_profile(s, M, grid).gradSup


def size_rhs(delta: int) -> float:
    """``tan(pi/D) / (1 + tan(pi/D))`` extended continuously through ``D = 2``."""
    if int(delta) != delta or delta <= 0:
        raise ValueError(f"delta must be a positive integer, got {delta}")
    if delta == 1:
        return 0.0
    if delta == 2:
        return 1.0
    t = math.pi / delta
    return math.sin(t) / (math.sin(t) + math.cos(t))


# -- certificate ---------------------------------------------------------------


@dataclass(frozen=True)
class MDiagnostics:
    M: int
    delta: int
    A: float
    gradSup: float
    sizeRhs: float
    derivLhs: float
    B: float
    sizeOk: bool
    derivOk: bool
    boundary: bool
    vacuous: bool

    @property
    def passed(self) -> bool:
        return self.sizeOk and self.derivOk

    @property
    def sizeMargin(self) -> float:
        return self.sizeRhs - self.A

    @property
    def derivMargin(self) -> float:
        return self.delta - self.derivLhs

    @property
    def relDerivMargin(self) -> float:
        return self.derivMargin / self.delta

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "delta": self.delta,
            "A": self.A,
            "gradSup": self.gradSup,
            "sizeRhs": self.sizeRhs,
            "derivLhs": _finite(self.derivLhs),
            "B": _finite(self.B),
            "sizeOk": self.sizeOk,
            "derivOk": self.derivOk,
            "sizeMargin": self.sizeMargin,
            "derivMargin": _finite(self.derivMargin),
            "boundary": self.boundary,
            "vacuousBound": self.vacuous,
            "passed": self.passed,
        }


def _finite(x):
    return x if math.isfinite(x) else None


def diagnose(s: CRSurface, M: int, grid=None) -> MDiagnostics:
    prof = tau_profile(s, M, grid)
    delta = 2 * M - s.k
    A, g = prof.A, prof.gradSup
    rhs = size_rhs(delta)
    lhs = s.k * A + g / (1.0 - A) if A < 1 else math.inf
    return MDiagnostics(
        M=M,
        delta=delta,
        A=A,
        gradSup=g,
        sizeRhs=rhs,
        derivLhs=lhs,
        B=lhs / delta,
        sizeOk=A < rhs,
        derivOk=lhs < delta,
        boundary=A == rhs,
        vacuous=delta == 1,
    )


@dataclass(frozen=True)
class Certificate:
    passed: bool
    M: int | None
    reason: str | None
    perM: tuple = ()

    @property
    def selected(self) -> MDiagnostics | None:
        for d in self.perM:
            if d.M == self.M:
                return d
        return None

    def _get(self, name):
        d = self.selected
        return None if d is None else getattr(d, name)

    delta = property(lambda self: self._get("delta"))
    A = property(lambda self: self._get("A"))
    B = property(lambda self: self._get("B"))
    gradSup = property(lambda self: self._get("gradSup"))
    sizeRhs = property(lambda self: self._get("sizeRhs"))
    derivLhs = property(lambda self: self._get("derivLhs"))
    sizeOk = property(lambda self: bool(self._get("sizeOk")))
    derivOk = property(lambda self: bool(self._get("derivOk")))
    sizeMargin = property(lambda self: self._get("sizeMargin"))
    derivMargin = property(lambda self: self._get("derivMargin"))

    @property
    def cRange(self):
        d = self.selected
        if d is None or not d.sizeOk:
            return None
        return (d.A, d.sizeRhs)

    def to_dict(self) -> dict:
        sel = self.selected
        return {
            "passed": self.passed,
            "reason": self.reason,
            "M": self.M,
            "selected": None if sel is None else sel.to_dict(),
            "cRange": None if self.cRange is None else list(self.cRange),
            "perM": [d.to_dict() for d in self.perM],
        }


def certify(s: CRSurface, grid=None, force_M: int | None = None) -> Certificate:
    """Check the size and derivative conditions for every admissible ``M``.

    The certificate passes if some ``M`` satisfies both; among passing
    indices the one with the widest relative derivative margin is chosen
    unless ``force_M`` pins it.
    """
    grid = _grid(grid)
    s = normalize(s)
    idx = sorted(index_set(s))
    if not idx:
        return Certificate(False, None, "empty index set", ())
    if force_M is not None and force_M not in idx:
        raise ValueError(f"forced M={force_M} is not in the index set {idx}")
    diags = tuple(diagnose(s, M, grid) for M in idx)
    pool = [d for d in diags if force_M is None or d.M == force_M]
    passing = [d for d in pool if d.passed]
    if passing:
        best = max(passing, key=lambda d: d.relDerivMargin)
        return Certificate(True, best.M, None, diags)
    best = max(pool, key=lambda d: (d.sizeMargin, d.relDerivMargin))
    reasons = []
    for d in pool:
        if d.vacuous and not d.sizeOk:
            reasons.append(f"M={d.M}: vacuous bound (delta=1)")
        elif d.boundary:
            reasons.append(f"M={d.M}: boundary (A equals the size bound)")
        elif not d.sizeOk:
            reasons.append(f"M={d.M}: size condition fails")
        else:
            reasons.append(f"M={d.M}: derivative condition fails")
    return Certificate(False, best.M, "; ".join(reasons), diags)
