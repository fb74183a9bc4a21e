import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from kleinslice.coords import (
    BranchError, DegenerateError, DomainError, FNCoords, PuncturedTorusRep, TraceTriple,
    complex_length, eta, eta_traces, g_lam, g_lam_inverse, gamma_branch, h_lam, hat_sigma,
    in_length_strip, map_F, markov_residual, other_gamma, realize_triple, rho_alpha, sigma_mu,
    theta, trace_from_length, translated_generator,
)
from kleinslice.mobius import (
    INFINITY, UnitDetMatrix, commutator, compose, max_entry_diff, parabolic,
)

finite = st.floats(-5, 5, allow_nan=False)
cplx = st.builds(complex, finite, finite)


# complex length

def test_complex_length_at_one():
    assert abs(complex_length(2.2552519304127342) - 1.0) < 1e-12


def test_complex_length_roundtrip_example():
    w = 0.3 + 0.3j
    assert abs(complex_length(2 * cmath.cosh(w / 2)) - w) < 1e-12


@pytest.mark.parametrize("eps", [1e-4, 1e-6])
def test_complex_length_square_root_asymptotics(eps):
    for direction in (1, 1j, cmath.exp(0.4j)):
        z = 2 + eps * direction
        if z.imag == 0 and z.real <= 2:
            continue
        lead = 2 * cmath.sqrt(z - 2)
        ratio = complex_length(z) / lead
        # correction term is of relative order |z - 2|
        assert abs(ratio - 1) < 10 * eps


@pytest.mark.parametrize("z", [0, -1 + 1j, 1.5, 2, 0.2, 1j * 3 - 0.001])
def test_complex_length_domain(z):
    with pytest.raises(DomainError):
        complex_length(z)


@given(st.floats(1e-3, 6), st.floats(-math.pi + 1e-6, math.pi - 1e-6))
def test_complex_length_inverse(re, im):
    w = complex(re, im)
    z = trace_from_length(w)
    assume(z.real > 0)
    got = complex_length(z)
    assert in_length_strip(got)
    assert abs(got - w) < 1e-10 * (1 + abs(z)) / min(1, abs(w))


@given(st.floats(-8, 8), st.floats(-8, 8))
def test_complex_length_forward(re, im):
    z = complex(re, im)
    assume(z.real > 1e-9 and not (z.imag == 0 and z.real <= 2))
    w = complex_length(z)
    assert in_length_strip(w)
    assert abs(trace_from_length(w) - z) < 1e-10 * (1 + abs(z))


# gamma branch

def test_gamma_anchor(rng):
    for _ in range(100):
        a = complex(*rng.uniform(-10, 10, 2))
        assert abs(gamma_branch(a, 2) - (a - 2j)) < 1e-10


@pytest.mark.parametrize("beta", [2, 3, 0.5 + 1j, 7 - 4j, 0.01 + 0.1j])
def test_gamma_at_zero_alpha(beta):
    assert abs(gamma_branch(0, beta) - (-1j * beta)) < 1e-10


@given(cplx, st.builds(complex, st.floats(0.05, 6), st.floats(-6, 6)))
def test_gamma_on_surface(a, b):
    try:
        g = gamma_branch(a, b)
    except BranchError:
        return
    assert abs(markov_residual(a, b, g)) < 1e-8 * (1 + abs(a) * abs(b)) ** 2
    # the other root of the quadratic
    g2 = other_gamma(a, b, g)
    assert abs(g + g2 - a * b) < 1e-8 * (1 + abs(a * b))


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma_branch(1, -1)
    with pytest.raises(DomainError):
        gamma_branch(1, 1j)


def test_gamma_branch_error_on_critical_locus():
    # alpha^2 beta^2 = 4(alpha^2 + beta^2) at beta = 3 means alpha^2 = 36/5
    a = math.sqrt(36 / 5)
    with pytest.raises(BranchError):
        gamma_branch(a, 3)


def test_gamma_continuous_along_segment():
    a = 1.3 - 0.7j
    prev = gamma_branch(a, 2)
    for t in np.linspace(2, 4 + 3j, 80)[1:]:
        g = gamma_branch(a, t)
        assert abs(g - prev) < 0.5
        prev = g


# realizations

def test_realize_examples():
    for t in [(2j, 2, 0), (0, 2, -2j)]:
        rep = realize_triple(TraceTriple(*t))
        got = rep.traces()
        assert max(abs(u - v) for u, v in zip(got.as_tuple(), t)) < 1e-8
        assert abs(commutator(rep.A, rep.B).trace() + 2) < 1e-7


@given(cplx, st.builds(complex, st.floats(0.1, 5), finite))
def test_realize_roundtrip(a, b):
    try:
        g = gamma_branch(a, b)
        rep = realize_triple(TraceTriple(a, b, g))
    except DomainError:
        return
    got = rep.traces().as_tuple()
    scale = 1 + abs(a) + abs(b) + abs(g)
    assert max(abs(u - v) for u, v in zip(got, (a, b, g))) < 1e-8 * scale


def test_realize_degenerate():
    with pytest.raises(DegenerateError):
        realize_triple(TraceTriple(0, 2j, 2))


def test_triple_validation():
    with pytest.raises(DomainError):
        TraceTriple(1, 1, 1)
    with pytest.raises(DomainError):
        TraceTriple(0, 0, 0)


def test_rho_alpha():
    rep = rho_alpha(0)
    assert rep.A == UnitDetMatrix(0, -1j, -1j, 0)
    assert rep.A.det() == 1
    a = 0.4 + 2.2j
    rep = rho_alpha(a)
    assert abs(compose(rep.A, rep.B).trace() - (a - 2j)) < 1e-14
    assert abs(commutator(rep.A, rep.B).trace() + 2) < 1e-12


def test_rep_validation():
    with pytest.raises(DomainError):
        PuncturedTorusRep(parabolic(1), parabolic(2))


def test_sigma_mu(rng):
    for _ in range(100):
        mu = complex(*rng.uniform(-5, 5, 2))
        s, r = sigma_mu(mu), rho_alpha(-1j * mu)
        assert s.A == r.A and s.B == r.B
        assert s.A.trace() == -1j * mu
    assert sigma_mu(0).A == UnitDetMatrix(0, -1j, -1j, 0)


def test_hat_sigma():
    mu, zeta = 0.7 + 3.1j, 1.2 + 2.5j
    rep, C = hat_sigma(mu, zeta)
    assert C == parabolic(zeta)
    assert hat_sigma(mu, 0)[1] == UnitDetMatrix(1, 0, 0, 1)
    assert translated_generator(mu, zeta, 0) == rep.A
    for k in range(-100, 101, 7):
        want = UnitDetMatrix(-1j * (mu - k * zeta), -1j, -1j, 0)
        assert max_entry_diff(translated_generator(mu, zeta, k), want) < 1e-10


# Fenchel-Nielsen family

def test_eta_example():
    rep = eta(FNCoords(1, 0))
    assert abs(rep.B.trace() - 2 * math.cosh(0.5)) < 1e-14
    assert abs(rep.A.det() - 1) < 1e-12


def test_eta_commutator(rng):
    for _ in range(100):
        lam = complex(rng.uniform(0.05, 3), rng.uniform(-3, 3))
        tau = complex(*rng.uniform(-3, 3, 2))
        rep = eta(FNCoords(lam, tau))
        assert abs(commutator(rep.A, rep.B).trace() + 2) < 1e-8


def test_fn_domain():
    with pytest.raises(DomainError):
        FNCoords(2j * math.pi, 0)
    with pytest.raises(DomainError):
        FNCoords(0, 1)


def test_theta_examples():
    x, _ = theta(FNCoords(0.4 + 0.2j, math.pi * 1j))
    assert abs(x) < 1e-14
    x, y = theta(FNCoords(0.8, 0))
    assert abs(x.imag) < 1e-15 and abs(y.imag) < 1e-15 and x.real > 2 and y.real > 2


@given(st.builds(complex, st.floats(0.05, 3), st.floats(-3, 3)), cplx)
def test_theta_eta_consistency(lam, tau):
    fn = FNCoords(lam, tau)
    rep = eta(fn)
    x, y = theta(fn)
    tx, ty, tz = eta_traces(fn)
    scale = 1 + abs(x) ** 2
    assert abs(rep.A.trace() ** 2 - x ** 2) < 1e-8 * scale
    assert abs(rep.B.trace() ** 2 - y ** 2) < 1e-8 * (1 + abs(y) ** 2)
    assert abs(compose(rep.A, rep.B).trace() - tz) < 1e-8 * (1 + abs(tz))
    assert abs(markov_residual(tx, ty, tz)) < 1e-8 * (1 + abs(tx) ** 2 + abs(ty) ** 2 + abs(tz) ** 2)


def test_g_and_h():
    lam = 0.3 + 0.2j
    assert g_lam(lam, math.pi * 1j) == 0
    assert h_lam(lam, 0) == 0
    assert abs(g_lam_inverse(lam, g_lam(lam, 1.5 - 2j)) - (1.5 - 2j)) < 1e-14


@given(st.builds(complex, st.floats(0.05, 2), st.floats(-2, 2)), st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)))
def test_h_of_g_is_theta(lam, tau):
    x, _ = theta(FNCoords(lam, tau))
    assert abs(h_lam(lam, g_lam(lam, tau)) - x) < 1e-9 * (1 + abs(x))


def test_h_close_to_rotation():
    lam = 0.01 + 0.01j
    r = np.linspace(0, 10, 101)
    t = np.linspace(0, 2 * math.pi, 181)
    zs = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    dev = max(abs(h_lam(lam, complex(z)) - 1j * z) for z in zs)
    assert dev < 0.05


def test_map_F():
    z, w = map_F(0.5 + 1j, 2)
    assert z == 1j * (0.5 + 1j) and w is INFINITY
    z, w = map_F(0, 2 * math.cosh(0.5))
    assert z == 0 and abs(w - 4j * math.pi) < 1e-10
    assert map_F(1, 3 + 1j)[0] == 1j
    for bad in (-1, 1.0, 1j):
        with pytest.raises(DomainError):
            map_F(0, bad)
