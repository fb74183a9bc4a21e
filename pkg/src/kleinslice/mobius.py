"""Arithmetic on SL(2,C) lifts of Mobius transformations.

Matrices are kept as determinant-one lifts; the sign ambiguity of PSL(2,C)
is only resolved when comparing, through :func:`psl_distance`.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

DET_TOL = 1e-9


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("kleinslice.infinity")

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(z) -> bool:
    return z is INFINITY


@dataclass(frozen=True)
class UnitDetMatrix:
    """A 2x2 complex matrix [[a, b], [c, d]] with ad - bc = 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = complex(getattr(self, name))
            if not (cmath.isfinite(v)):
                raise ValueError(f"non-finite matrix entry {name}={v}")
            object.__setattr__(self, name, v)
        if abs(self.a * self.d - self.b * self.c - 1) > DET_TOL * max(1.0, self.norm() ** 2):
            raise ValueError(f"determinant {self.det()} is not 1")

    @classmethod
    def from_rows(cls, rows) -> "UnitDetMatrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def trace(self) -> complex:
        return self.a + self.d

    def norm(self) -> float:
        """Max-entry norm."""
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def __neg__(self):
        return UnitDetMatrix(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: "UnitDetMatrix") -> "UnitDetMatrix":
        return compose(self, other)

    def __call__(self, z):
        """Act on a point of the Riemann sphere."""
        if is_infinity(z):
            return INFINITY if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return INFINITY
        return (self.a * z + self.b) / den


IDENTITY = UnitDetMatrix(1, 0, 0, 1)


def _product(m: UnitDetMatrix, n: UnitDetMatrix):
    return (
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def compose(m: UnitDetMatrix, n: UnitDetMatrix) -> UnitDetMatrix:
    return UnitDetMatrix(*_product(m, n))


def inverse(m: UnitDetMatrix) -> UnitDetMatrix:
    return UnitDetMatrix(m.d, -m.b, -m.c, m.a)


def power(m: UnitDetMatrix, k: int) -> UnitDetMatrix:
    """m**k by repeated squaring; negative k uses the inverse."""
    k = int(k)
    if abs(k) > 2**31:
        raise ValueError(f"exponent {k} out of range")
    if k < 0:
        m, k = inverse(m), -k
    # intermediate products skip the determinant check; only the result is validated
    result = (1 + 0j, 0j, 0j, 1 + 0j)
    base = (m.a, m.b, m.c, m.d)
    while k:
        if k & 1:
            result = _mul4(result, base)
        k >>= 1
        if k:
            base = _mul4(base, base)
    return UnitDetMatrix(*result)


def _mul4(p, q):
    return (
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    )


def commutator(m: UnitDetMatrix, n: UnitDetMatrix) -> UnitDetMatrix:
    """[m, n] = m n m^-1 n^-1."""
    return compose(compose(m, n), compose(inverse(m), inverse(n)))


def max_entry_diff(m: UnitDetMatrix, n: UnitDetMatrix) -> float:
    return max(abs(m.a - n.a), abs(m.b - n.b), abs(m.c - n.c), abs(m.d - n.d))


def psl_distance(m: UnitDetMatrix, n: UnitDetMatrix) -> float:
    """Entrywise max distance between m and n modulo the sign of the lift."""
    plus = max(abs(m.a + n.a), abs(m.b + n.b), abs(m.c + n.c), abs(m.d + n.d))
    return min(max_entry_diff(m, n), plus)


def parabolic(translation: complex) -> UnitDetMatrix:
    """z -> z + translation."""
    return UnitDetMatrix(1, translation, 0, 1)


def diagonal(eigenvalue: complex) -> UnitDetMatrix:
    return UnitDetMatrix(eigenvalue, 0, 0, 1 / eigenvalue)
