"""Sparse polynomials.

``BihomPoly`` is a polynomial in ``z`` and ``conj(z)``; ``Poly2`` is a
holomorphic polynomial in two variables ``(z, w)``.  Both store a mapping
from exponent pairs to nonzero complex coefficients.
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np


def _clean(terms) -> dict:
    out = {}
    for key, c in dict(terms).items():
        a, b = (int(key[0]), int(key[1]))
        if a < 0 or b < 0:
            raise ValueError(f"negative exponent in term {key}")
        c = complex(c)
        if c != 0:
            out[(a, b)] = out.get((a, b), 0j) + c
            if out[(a, b)] == 0:
                del out[(a, b)]
    return out


class _SparsePoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = _clean(terms or {})

    def __eq__(self, other):
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __repr__(self):
        inner = ", ".join(f"{k}: {v:g}" for k, v in sorted(self.terms.items()))
        return f"{type(self).__name__}({{{inner}}})"

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0j) + c
        return type(self)(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s: complex):
        return type(self)({k: s * c for k, c in self.terms.items()})

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items())


class BihomPoly(_SparsePoly):
    """``sum c[a, b] z**a conj(z)**b``."""

    __slots__ = ()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        out = np.zeros_like(z)
        for (a, b), c in self.terms.items():
            out = out + c * z**a * zc**b
        return complex(out) if out.ndim == 0 else out

    def __mul__(self, other):
        if not isinstance(other, BihomPoly):
            return self.scale(other)
        t = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                t[k] = t.get(k, 0j) + c1 * c2
        return BihomPoly(t)

    def d_z(self) -> "BihomPoly":
        return BihomPoly({(a - 1, b): a * c for (a, b), c in self.terms.items() if a > 0})

    def d_zbar(self) -> "BihomPoly":
        return BihomPoly({(a, b - 1): b * c for (a, b), c in self.terms.items() if b > 0})

    def conj(self) -> "BihomPoly":
        return BihomPoly({(b, a): np.conj(c) for (a, b), c in self.terms.items()})


class Poly2(_SparsePoly):
    """Holomorphic ``sum c[mu, nu] z**mu w**nu``."""

    __slots__ = ()

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for (mu, nu), c in self.terms.items():
            out = out + c * z**mu * w**nu
        return complex(out) if out.ndim == 0 else out

    def to_records(self) -> list[dict]:
        return [{"a": a, "b": b, "re": c.real, "im": c.imag} for (a, b), c in self.sorted_terms()]
