"""Markov trace-tree scan: a semi-decision test for discreteness.

Every vertex of the trace tree is a triple (x, y, z) on the Markov surface;
its three neighbours replace one coordinate using the trace identity
tr(AB^-1) = tr A tr B - tr AB.  A parameter is certified outside the
deformation space as soon as some primitive element has a real trace in
(-2, 2) (an elliptic element).  Branches whose traces are forced to grow are
pruned; if everything is pruned the parameter is presumed to be a member.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numba
import numpy as np

from .coords import TraceTriple

MEMBER, LIKELY, CERTIFIED, ERROR = 0, 1, 2, 3
SLOTS = ("x", "y", "z")


@dataclass(frozen=True)
class ScanParams:
    max_depth: int = 60
    delta: float = 0.01
    tau_real: float = 1e-3
    trace_cap: float = 1e12
    # Not part of the classic parameter set: bounds on the work per point.
    max_nodes: int = 4096
    descent_steps: int = 2048

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.delta <= 0 or self.tau_real <= 0:
            raise ValueError("delta and tau_real must be positive")
        if self.max_nodes < 8:
            raise ValueError("max_nodes must be >= 8")

    def as_dict(self):
        return {
            "max_depth": self.max_depth,
            "delta": self.delta,
            "tau_real": self.tau_real,
            "trace_cap": self.trace_cap,
            "max_nodes": self.max_nodes,
            "descent_steps": self.descent_steps,
        }


@dataclass(frozen=True)
class ExteriorCertified:
    witness_triple: TraceTriple
    path: tuple = field(default=())
    code = CERTIFIED


@dataclass(frozen=True)
class ExteriorLikely:
    frontier_size: int
    flagged: bool = False
    reason: str = ""

    @property
    def code(self):
        return ERROR if self.flagged else LIKELY


@dataclass(frozen=True)
class PresumedMember:
    depth_scanned: int
    code = MEMBER


@dataclass(frozen=True)
class FareyNode:
    triple: TraceTriple
    depth: int
    entered_via: int  # slot index replaced to reach this node, -1 at the root


def neighbor(t: TraceTriple, slot) -> TraceTriple:
    """Replace one coordinate by the other root of the Markov equation."""
    s = SLOTS.index(slot) if isinstance(slot, str) else int(slot)
    v = list(t.as_tuple())
    u, w = v[(s + 1) % 3], v[(s + 2) % 3]
    v[s] = u * w - v[s]
    return TraceTriple(*v)


@numba.njit(cache=True, nogil=True)
def _certifies(t, tau):
    return abs(t.imag) <= tau and -2.0 + tau < t.real < 2.0 - tau


@numba.njit(cache=True, nogil=True)
def _chain_stays_large(r, prev, cur, big):
    """True if the chain c_0 = prev, c_1 = cur, c_{j+1} = r c_j - c_{j-1}
    satisfies |c_j| >= big for every j >= 1 (sufficient test).

    For r = +-2 the chain is (+-1)^j (c_0 + j d) and the closest approach to
    0 over real j >= 1 is computed exactly.  Otherwise c_j = A rho^j + B rho^-j
    with |rho| > 1, so |c_j| >= |A| |rho|^j - |B| |rho|^-j, which increases in
    j; checking j = 1 suffices.
    """
    if abs(cur) < big:
        return False
    if r == 2.0 or r == -2.0:
        sign = 1.0 if r == 2.0 else -1.0
        c0 = prev
        d = sign * cur - c0
        dd = d.real * d.real + d.imag * d.imag
        if dd == 0.0:
            return True
        j = -(c0.real * d.real + c0.imag * d.imag) / dd
        if j <= 1.0:
            return True
        return abs(c0 + j * d) >= big
    disc = cmath.sqrt(r * r - 4.0)
    rho = (r + disc) / 2.0
    if abs(rho) < 1.0:
        rho = (r - disc) / 2.0
    m = abs(rho)
    if not m > 1.0:
        return False
    s = rho - 1.0 / rho
    A = (cur - prev / rho) / s
    B = (prev * rho - cur) / s
    return abs(A) * m - abs(B) / m >= big


@numba.njit(cache=True, nogil=True)
def _escaping(u, v, w, w2, big):
    aw2 = abs(w2)
    if aw2 < abs(w) or aw2 < big:
        return False
    au = abs(u)
    av = abs(v)
    if au >= big and av >= big:
        return True
    if au < big and av < big:
        return False
    # One small retained trace r: the subtree is the rest of the chain of
    # traces around r plus subtrees that escape by the two-large rule.
    if au < big:
        return _chain_stays_large(u, v, w2, big)
    return _chain_stays_large(v, u, w2, big)


@numba.njit(cache=True, nogil=True)
def _store(T, parent, via, n, src, s, w2):
    T[n, s] = w2
    T[n, (s + 1) % 3] = T[src, (s + 1) % 3]
    T[n, (s + 2) % 3] = T[src, (s + 2) % 3]
    parent[n] = src
    via[n] = s


@numba.njit(cache=True, nogil=True)
def scan_kernel(x, y, z, max_depth, delta, tau, cap, descent_steps, T, parent, via):
    """Scan of the trace tree from (x, y, z).

    The root first descends along strictly decreasing edges to a local sink
    (stopping at ties); the tree is then explored breadth first from the
    sink.  Moves along the chain of neighbours of a trace of modulus below
    2 + delta stay in the current level, so depth counts the other moves.
    Children are visited in order of increasing new-trace modulus.

    T (n, 3), parent (n,) and via (n,) are caller-owned workspace; n bounds
    the number of stored nodes.  Returns (code, depth, frontier, witness).
    """
    max_nodes = T.shape[0]
    big = 2.0 + delta
    T[0, 0] = x
    T[0, 1] = y
    T[0, 2] = z
    parent[0] = -1
    via[0] = -1
    for s in range(3):
        t = T[0, s]
        if not (np.isfinite(t.real) and np.isfinite(t.imag)):
            return ERROR, 0, 0, -1
        if _certifies(t, tau):
            return CERTIFIED, 0, 0, 0
    cur = 0
    n = 1
    for _ in range(min(descent_steps, max_nodes - 4)):
        best = 0
        best_drop = 0.0
        tie = False
        for s in range(3):
            w2 = T[cur, (s + 1) % 3] * T[cur, (s + 2) % 3] - T[cur, s]
            if _certifies(w2, tau):
                _store(T, parent, via, n, cur, s, w2)
                return CERTIFIED, 0, 0, n
            drop = abs(w2) - abs(T[cur, s])
            if drop < best_drop:
                best = s
                best_drop = drop
                tie = False
            elif drop == best_drop and drop < 0.0:
                tie = True
        if best_drop >= 0.0 or tie:
            break
        s = best
        _store(T, parent, via, n, cur, s, T[cur, (s + 1) % 3] * T[cur, (s + 2) % 3] - T[cur, s])
        cur = n
        n += 1
    # breadth-first exploration from a copy of the sink, in all three directions
    for s in range(3):
        T[n, s] = T[cur, s]
    parent[n] = cur
    via[n] = -1
    level = np.empty(max_nodes, dtype=np.int64)
    nxt = np.empty(max_nodes, dtype=np.int64)
    level[0] = n
    n_level = 1
    n += 1
    depth = 0
    kid_w = np.empty(3, dtype=np.complex128)
    kid_s = np.empty(3, dtype=np.int64)
    while True:
        if n_level == 0:
            return MEMBER, depth, 0, -1
        if depth >= max_depth:
            return LIKELY, depth, n_level, -1
        n_next = 0
        q = 0
        while q < n_level:
            i = level[q]
            q += 1
            nk = 0
            for s in range(3):
                if s == via[i]:
                    continue
                w2 = T[i, (s + 1) % 3] * T[i, (s + 2) % 3] - T[i, s]
                # insertion by modulus keeps the visiting order independent of slot labels
                k = nk
                while k > 0 and abs(kid_w[k - 1]) > abs(w2):
                    kid_w[k] = kid_w[k - 1]
                    kid_s[k] = kid_s[k - 1]
                    k -= 1
                kid_w[k] = w2
                kid_s[k] = s
                nk += 1
            for k in range(nk):
                s = kid_s[k]
                w2 = kid_w[k]
                u = T[i, (s + 1) % 3]
                v = T[i, (s + 2) % 3]
                if _certifies(w2, tau):
                    _store(T, parent, via, n, i, s, w2)
                    return CERTIFIED, depth + 1, n_level - q, n
                if not (abs(w2) <= cap):
                    continue
                if _escaping(u, v, T[i, s], w2, big):
                    continue
                if n >= max_nodes:
                    return LIKELY, depth, n_level - q + n_next, -1
                _store(T, parent, via, n, i, s, w2)
                if abs(u) < big or abs(v) < big:
                    level[n_level] = n
                    n_level += 1
                else:
                    nxt[n_next] = n
                    n_next += 1
                n += 1
        for k in range(n_next):
            level[k] = nxt[k]
        n_level = n_next
        depth += 1


@numba.njit(cache=True, nogil=True)
def scan_block(roots, valid, max_depth, delta, tau, cap, descent_steps, max_nodes, out):
    """Scan every root triple; roots has shape (m, 3), out receives codes."""
    T = np.empty((max_nodes, 3), dtype=np.complex128)
    parent = np.empty(max_nodes, dtype=np.int64)
    via = np.empty(max_nodes, dtype=np.int64)
    for i in range(roots.shape[0]):
        if not valid[i]:
            out[i] = ERROR
            continue
        code, _, _, _ = scan_kernel(
            roots[i, 0], roots[i, 1], roots[i, 2],
            max_depth, delta, tau, cap, descent_steps, T, parent, via,
        )
        out[i] = code


@numba.njit(cache=True, nogil=True)
def scan_intersection_block(roots, valid, max_depth, delta, tau, cap, descent_steps, max_nodes, out):
    """Combined verdict over roots of shape (m, k, 3).

    A point is a member only if every one of its k root triples is; otherwise
    it gets the strongest exclusion seen, stopping at the first certificate.
    """
    T = np.empty((max_nodes, 3), dtype=np.complex128)
    parent = np.empty(max_nodes, dtype=np.int64)
    via = np.empty(max_nodes, dtype=np.int64)
    for i in range(roots.shape[0]):
        if not valid[i]:
            out[i] = ERROR
            continue
        best = MEMBER
        for j in range(roots.shape[1]):
            code, _, _, _ = scan_kernel(
                roots[i, j, 0], roots[i, j, 1], roots[i, j, 2],
                max_depth, delta, tau, cap, descent_steps, T, parent, via,
            )
            if code == CERTIFIED or code == ERROR:
                best = code
                break
            if code == LIKELY:
                best = LIKELY
        out[i] = best


def scan(t: TraceTriple, p: ScanParams = ScanParams()):
    """Scan the trace tree rooted at t and return a verdict."""
    T = np.empty((p.max_nodes, 3), dtype=np.complex128)
    parent = np.empty(p.max_nodes, dtype=np.int64)
    via = np.empty(p.max_nodes, dtype=np.int64)
    code, depth, frontier, witness = scan_kernel(
        t.x, t.y, t.z, p.max_depth, p.delta, p.tau_real, p.trace_cap,
        p.descent_steps, T, parent, via,
    )
    if code == MEMBER:
        return PresumedMember(int(depth))
    if code == LIKELY:
        return ExteriorLikely(int(frontier))
    if code == ERROR:
        return ExteriorLikely(0, flagged=True, reason="non-finite trace")
    path = []
    node = int(witness)
    while parent[node] >= 0:
        if via[node] >= 0:
            path.append(SLOTS[via[node]])
        node = int(parent[node])
    w = T[int(witness)]
    return ExteriorCertified(
        TraceTriple(complex(w[0]), complex(w[1]), complex(w[2])), tuple(reversed(path))
    )


def maskit_root(mu: complex) -> tuple[complex, complex, complex]:
    x = -1j * complex(mu)
    return x, 2 + 0j, x - 2j


def _flagged(err: Exception) -> ExteriorLikely:
    return ExteriorLikely(0, flagged=True, reason=str(err))


def membership_trace(alpha: complex, beta: complex, p: ScanParams = ScanParams()):
    """Verdict for the trace coordinates (alpha, beta) of a linear slice."""
    from .coords import DomainError, gamma_branch

    try:
        gamma = gamma_branch(alpha, beta)
        root = TraceTriple(alpha, beta, gamma)
    except DomainError as err:
        return _flagged(err)
    return scan(root, p)


def membership_maskit(mu: complex, p: ScanParams = ScanParams()):
    return scan(TraceTriple(*maskit_root(mu)), p)


def membership_fn(lam: complex, tau: complex, p: ScanParams = ScanParams()):
    from .coords import DomainError, FNCoords, eta_traces

    try:
        root = TraceTriple(*eta_traces(FNCoords(lam, tau)))
    except DomainError as err:
        return _flagged(err)
    return scan(root, p)
