"""Coordinate systems on once-punctured torus representations.

Trace triples on the Markov surface x^2 + y^2 + z^2 = xyz, the linear-slice
trace coordinates (alpha, beta) with the continued branch of the third
trace, the Maskit and horizontal-slice parabolic families, and complex
Fenchel-Nielsen coordinates.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numba

from .mobius import INFINITY, UnitDetMatrix, commutator, compose, parabolic, power

TWO_PI_I = 2j * math.pi


class DomainError(ValueError):
    """Argument outside the domain of a coordinate map."""


class BranchError(DomainError):
    """Continuation of the square-root branch met the critical locus."""


class DegenerateError(DomainError):
    """Construction is numerically degenerate at this parameter."""


def markov_residual(x: complex, y: complex, z: complex) -> complex:
    return x * x + y * y + z * z - x * y * z


@dataclass(frozen=True)
class TraceTriple:
    x: complex
    y: complex
    z: complex

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))
            if not cmath.isfinite(getattr(self, name)):
                raise DomainError(f"non-finite trace in {self}")
        scale = 1 + abs(self.x) ** 2 + abs(self.y) ** 2 + abs(self.z) ** 2
        if abs(markov_residual(self.x, self.y, self.z)) > 1e-6 * scale:
            raise DomainError(f"{self} is not on the Markov surface")
        if max(abs(self.x), abs(self.y), abs(self.z)) <= 1e-9:
            raise DomainError("the triple (0, 0, 0) is excluded")

    def as_tuple(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class PuncturedTorusRep:
    """Images A, B of the generators a, b; [A, B] is parabolic with trace -2."""

    A: UnitDetMatrix
    B: UnitDetMatrix

    def __post_init__(self):
        t = commutator(self.A, self.B).trace()
        scale = max(1.0, self.A.norm() * self.B.norm()) ** 2
        if abs(t + 2) > 1e-7 * scale:
            raise DomainError(f"commutator trace {t} != -2")

    def traces(self) -> TraceTriple:
        return TraceTriple(self.A.trace(), self.B.trace(), compose(self.A, self.B).trace())


@dataclass(frozen=True)
class FNCoords:
    lam: complex
    tau: complex

    def __post_init__(self):
        lam = complex(self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "tau", complex(self.tau))
        k = round(lam.imag / (2 * math.pi))
        if abs(lam - k * TWO_PI_I) <= 1e-9:
            raise DomainError(f"length parameter {lam} lies on 2*pi*i*Z")


def in_length_strip(w: complex) -> bool:
    return w.real > 0 and -math.pi < w.imag <= math.pi


def complex_length(z: complex) -> complex:
    """Inverse of w -> 2 cosh(w/2) from the right half-plane minus (0, 2] to the strip."""
    z = complex(z)
    if not cmath.isfinite(z) or z.real <= 0 or (z.imag == 0 and z.real <= 2):
        raise DomainError(f"complex length undefined at {z}")
    h = z / 2
    w = 2 * cmath.log(h + cmath.sqrt(h * h - 1))
    if w.real < 0:
        w = -w
    # 2cosh(w/2) has period 4*pi*i; fold into (-2pi, 2pi], which lands in the strip for Re z > 0
    w = complex(w.real, math.remainder(w.imag, 4 * math.pi))
    if w.imag == -2 * math.pi:
        w = complex(w.real, 2 * math.pi)
    return w


def trace_from_length(w: complex) -> complex:
    return 2 * cmath.cosh(w / 2)


def critical_discriminant(alpha: complex, beta: complex) -> complex:
    return alpha * alpha * beta * beta - 4 * (alpha * alpha + beta * beta)


@numba.njit(cache=True, nogil=True)
def gamma_core(alpha, beta, steps):
    """Compiled branch continuation; returns (gamma, ok).

    Steps of 1/steps along the segment are halved (up to 2^-20 of the
    segment) whenever the choice between the two square roots is ambiguous.
    """
    root = -4j
    a2 = alpha * alpha
    t = 0.0
    h_max = 1.0 / steps
    h = h_max
    while t < 1.0:
        if t + h > 1.0:
            h = 1.0 - t
        b = 2.0 + (beta - 2.0) * (t + h)
        disc = a2 * (b * b) - 4.0 * (a2 + b * b)
        s = cmath.sqrt(disc)
        if abs(s - root) <= abs(s + root):
            near = s
            far = -s
        else:
            near = -s
            far = s
        if abs(near - root) >= 0.5 * abs(far - root) or disc == 0:
            h *= 0.5
            if h < h_max * 2.0 ** -20:
                return 0j, False
            continue
        root = near
        t += h
        if h < h_max:
            h = min(2.0 * h, h_max)
    return (alpha * beta + root) / 2.0, True


def gamma_branch(alpha: complex, beta: complex, steps: int = 64) -> complex:
    """Third trace gamma(alpha, beta) on the branch through gamma(alpha, 2) = alpha - 2i.

    The square root of the discriminant starts at -4i for beta = 2 and is
    carried continuously along the segment from 2 to beta.
    """
    alpha, beta = complex(alpha), complex(beta)
    if not beta.real > 0:
        raise DomainError(f"need Re beta > 0, got {beta}")
    gamma, ok = gamma_core(alpha, beta, steps)
    if not ok:
        raise BranchError(f"branch tracking lost between beta=2 and beta={beta} (alpha={alpha})")
    return complex(gamma)


def other_gamma(alpha: complex, beta: complex, gamma: complex) -> complex:
    """The second root of the Markov equation in the third slot."""
    return alpha * beta - gamma


def realize_triple(t: TraceTriple) -> PuncturedTorusRep:
    """Some representation whose generator traces are (x, y, z)."""
    x, y, z = t.as_tuple()
    if min(abs(z - 2), abs(z + 2)) <= 1e-12:
        raise DegenerateError("third trace is +-2")
    disc = cmath.sqrt(z * z - 4)
    r1, r2 = (-z + disc) / 2, (-z - disc) / 2
    xi = r1 if abs(r1) >= abs(r2) else r2
    if not (1e-8 <= abs(xi) <= 1e8):
        raise DegenerateError(f"construction parameter {xi} out of range")
    A = UnitDetMatrix(x, 1, -1, 0)
    B = UnitDetMatrix(0, xi, -1 / xi, y)
    return PuncturedTorusRep(A, B)


def rho_alpha(alpha: complex) -> PuncturedTorusRep:
    return PuncturedTorusRep(UnitDetMatrix(alpha, -1j, -1j, 0), parabolic(2))


def sigma_mu(mu: complex) -> PuncturedTorusRep:
    """Maskit slice parametrization; same matrices as rho_alpha(-i mu)."""
    return rho_alpha(-1j * complex(mu))


def hat_sigma(mu: complex, zeta: complex):
    """sigma_mu together with the parabolic C = [[1, zeta], [0, 1]] commuting with B."""
    return sigma_mu(mu), parabolic(zeta)


def translated_generator(mu: complex, zeta: complex, k: int) -> UnitDetMatrix:
    """Image of c^-k a, which equals the Maskit generator at mu - k zeta."""
    rep, C = hat_sigma(mu, zeta)
    return compose(power(C, -k), rep.A)


def eta(fn: FNCoords) -> PuncturedTorusRep:
    lam, tau = fn.lam, fn.tau
    sh = cmath.sinh(lam / 2)
    if abs(sh) < 1e-12:
        raise DegenerateError(f"sinh(lam/2) vanishes at lam={lam}")
    ch = cmath.cosh(lam / 2)
    et = cmath.exp(tau / 2)
    # diag(e^{tau/2}, e^{-tau/2}) times the untwisted generator, multiplied out
    A = UnitDetMatrix(et * ch / sh, -et / sh, -1 / (et * sh), ch / (et * sh))
    el = cmath.exp(lam / 2)
    B = UnitDetMatrix(el, 0, 0, 1 / el)
    return PuncturedTorusRep(A, B)


@numba.njit(cache=True, nogil=True)
def eta_traces_core(lam, tau):
    sh = cmath.sinh(lam / 2.0)
    ch = cmath.cosh(lam / 2.0)
    x = 2.0 * cmath.cosh(tau / 2.0) * ch / sh
    y = 2.0 * ch
    # AB has diagonal e^{(tau+lam)/2} ch/sh, e^{-(tau+lam)/2} ch/sh
    z = 2.0 * cmath.cosh((tau + lam) / 2.0) * ch / sh
    return x, y, z


def eta_traces(fn: FNCoords) -> tuple[complex, complex, complex]:
    """Traces of A, B and AB under eta, without building the matrices."""
    if abs(cmath.sinh(fn.lam / 2)) < 1e-12:
        raise DegenerateError(f"sinh(lam/2) vanishes at lam={fn.lam}")
    return tuple(complex(t) for t in eta_traces_core(fn.lam, fn.tau))


def theta(fn: FNCoords) -> tuple[complex, complex]:
    lam, tau = fn.lam, fn.tau
    sh = cmath.sinh(lam / 2)
    if abs(sh) < 1e-12:
        raise DegenerateError(f"sinh(lam/2) vanishes at lam={lam}")
    coth = cmath.cosh(lam / 2) / sh
    return 2 * coth * cmath.cosh(tau / 2), 2 * cmath.cosh(lam / 2)


def f_lam(lam: complex, z: complex) -> complex:
    return 2 * cmath.cosh(lam / 2) / cmath.sinh(lam / 2) * cmath.cosh(z / 2)


def g_lam(lam: complex, z: complex) -> complex:
    """Normalization sending the twist period lam to 2."""
    return 2 / lam * (z - math.pi * 1j)


def g_lam_inverse(lam: complex, z: complex) -> complex:
    return lam * z / 2 + math.pi * 1j


def h_lam(lam: complex, z: complex) -> complex:
    return 2j * cmath.cosh(lam / 2) / cmath.sinh(lam / 2) * cmath.sinh(lam * z / 4)


def map_F(z: complex, w: complex):
    """(z, w) -> (iz, 4 pi i / lambda(w)), with w = 2 sent to infinity."""
    z, w = complex(z), complex(w)
    if w == 2:
        return 1j * z, INFINITY
    if w.real <= 0 or (w.imag == 0 and 0 < w.real < 2):
        raise DomainError(f"map_F undefined at w={w}")
    return 1j * z, 4j * math.pi / complex_length(w)
