"""Exclusion-process and spin-chain constructors: ASEP generators with open
or closed boundaries, the XXZ Hamiltonian, symmetry commutators, gauge
conjugation between the two, ground-state transforms, and the N-particle
contour-integral transition probability with a master-equation oracle.

Rate conventions: the bulk hop matrix w uses right rate q and left rate 1
(the convention matching the matrix-product relations); the standalone
two-site generator uses rates (1, q^2). The contour formula describes the
infinite-lattice ASEP with right rate 1 and left rate q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .tensor import (
    DimensionMismatch,
    Operator,
    embed_local,
    is_generator,
    transition_semigroup,
)


class ModelsError(Exception):
    pass


class SingularGauge(ModelsError):
    pass


class ZeroEntryInGroundState(ModelsError):
    pass


class NotAnEigenvector(ModelsError):
    pass


class NegativeOffDiagonal(ModelsError):
    pass


class ContourHitsPole(ModelsError):
    pass


class NonConvergedQuadrature(ModelsError):
    pass


class WindowTooSmall(ModelsError):
    pass


@dataclass(frozen=True)
class AsepParams:
    """Asymmetry q, boundary rates (alpha, gamma) on the left and
    (beta, delta) on the right, and the site count L."""

    q: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    L: int = 2

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError(f"q must be positive, got {self.q}")
        for name in ("alpha", "beta", "gamma", "delta"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")


@dataclass(frozen=True)
class XxzParams:
    Jx: float
    Jy: float
    Jz: float
    h_field: float = 0.0
    N: int = 2
    periodic: bool = True

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N must be >= 2, got {self.N}")


SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {1: SIGMA1, 2: SIGMA2, 3: SIGMA3}


def asep_local_generator(q: float) -> Operator:
    """Two-site exclusion generator with hop rates (1, q^2): occupied-empty
    swaps at rate 1, empty-occupied at rate q^2. Overall time scale fixed
    to 1."""
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    mat = np.zeros((4, 4), dtype=complex)
    mat[1, 1], mat[1, 2] = -1.0, 1.0
    mat[2, 1], mat[2, 2] = q**2, -(q**2)
    return Operator((2, 2), mat)


def asep_bulk_w(q: float) -> Operator:
    """Bulk hop matrix with right rate q and left rate 1: the 10 -> 01 move
    (particle hops right) carries rate q."""
    mat = np.zeros((4, 4), dtype=complex)
    mat[1, 1], mat[1, 2] = -q, q
    mat[2, 1], mat[2, 2] = 1.0, -1.0
    return Operator((2, 2), mat)


def boundary_b(alpha: float, gamma: float) -> Operator:
    """Left-boundary generator: injection at rate alpha, ejection at gamma."""
    return Operator((2,), np.array([[-alpha, alpha], [gamma, -gamma]], dtype=complex))


def boundary_bbar(beta: float, delta: float) -> Operator:
    """Right-boundary generator: injection at rate delta, ejection at beta."""
    return Operator((2,), np.array([[-delta, delta], [beta, -beta]], dtype=complex))


def asep_generator(p: AsepParams, open_boundary: bool = False) -> Operator:
    """Full-chain generator: sum of embedded bulk hop matrices, plus
    boundary terms B at site 1 and B-bar at site L when open."""
    L = p.L
    dims = (2,) * L
    total = np.zeros((2**L, 2**L), dtype=complex)
    w = asep_bulk_w(p.q)
    for i in range(1, L):
        total += embed_local(w, i, L, dims).entries
    if open_boundary:
        total += embed_local(boundary_b(p.alpha, p.gamma), 1, L, dims).entries
        total += embed_local(boundary_bbar(p.beta, p.delta), L, L, dims).entries
    return Operator(dims, total)


def xxz_local_block(p: XxzParams) -> Operator:
    """The 4x4 summand J_x s1s1 + J_y s2s2 + J_z s3s3 + h(s3 (x) 1 + 1 (x) s3):
    corners Jz + 2h and Jz - 2h, anti-corners Jx - Jy."""
    mat = (
        p.Jx * np.kron(SIGMA1, SIGMA1)
        + p.Jy * np.kron(SIGMA2, SIGMA2)
        + p.Jz * np.kron(SIGMA3, SIGMA3)
        + p.h_field * (np.kron(SIGMA3, np.eye(2)) + np.kron(np.eye(2), SIGMA3))
    )
    return Operator((2, 2), mat)


def xxz_hamiltonian(p: XxzParams) -> Operator:
    """H = -1/2 sum_j (Jx s1_j s1_{j+1} + Jy s2_j s2_{j+1} + Jz s3_j s3_{j+1}
    - h s3_j), with the periodic wrap s_{N+1} = s_1 when requested."""
    N = p.N
    dims = (2,) * N
    total = np.zeros((2**N, 2**N), dtype=complex)
    bonds = list(range(1, N)) + ([N] if p.periodic else [])
    for j in bonds:
        for J, s in ((p.Jx, SIGMA1), (p.Jy, SIGMA2), (p.Jz, SIGMA3)):
            if j < N:
                op = Operator((2, 2), np.kron(s, s))
                total += J * embed_local(op, j, N, dims).entries
            else:
                a = embed_local(Operator((2,), s), N, N, dims).entries
                b = embed_local(Operator((2,), s), 1, N, dims).entries
                total += J * (a @ b)
    for j in range(1, N + 1):
        total -= p.h_field * embed_local(Operator((2,), SIGMA3), j, N, dims).entries
    return Operator(dims, -0.5 * total)


def symmetry_commutator(H: Operator, a: int) -> float:
    """Max-norm of [H, sum_j sigma_j^a]."""
    if a not in PAULI:
        raise ValueError(f"a must be 1, 2 or 3, got {a}")
    dims = H.site_dims
    if any(d != 2 for d in dims):
        raise DimensionMismatch("symmetry commutator needs qubit sites")
    N = len(dims)
    S = np.zeros_like(H.entries)
    for j in range(1, N + 1):
        S += embed_local(Operator((2,), PAULI[a]), j, N, dims).entries
    comm = H.entries @ S - S @ H.entries
    return float(np.max(np.abs(comm)))


def gauge_conjugate(H: Operator, G: Operator) -> Operator:
    """G^{-1} H G."""
    mat = G.entries
    try:
        inv = np.linalg.inv(mat)
    except np.linalg.LinAlgError as exc:
        raise SingularGauge("gauge matrix is singular") from exc
    if np.linalg.cond(mat) > 1e12:
        raise SingularGauge("gauge matrix is numerically singular")
    return Operator(H.site_dims, inv @ H.entries @ mat)


def xxz_gauge_matrix(gamma: float) -> Operator:
    """The two-site change of basis with middle block [[1, gamma-1], [0, gamma]]."""
    mat = np.eye(4, dtype=complex)
    mat[1, 2] = gamma - 1.0
    mat[2, 2] = gamma
    return Operator((2, 2), mat)


def xxz_to_asep_search(q: float, grid: int = 41) -> dict:
    """Search (Jx, gamma) so that conjugating the two-site XXZ block at
    Jz=1, h=0 by the gauge matrix reproduces the two-site exclusion
    generator up to the trace-fixed scale c = 4/(1+q^2).

    Coarse grid search refined by Nelder-Mead. Returns the best point and
    the final residual.
    """
    from scipy.optimize import minimize

    target = asep_local_generator(q).entries.real
    c = 4.0 / (1.0 + q**2)

    def residual(params):
        Jx, gamma = params
        if abs(gamma) < 1e-9:
            return 1e6
        block = xxz_local_block(XxzParams(Jx=Jx, Jy=Jx, Jz=1.0, h_field=0.0)).entries
        # drop the Jz=1 diagonal shift: block = Id + W
        W = block - np.eye(4)
        conj = gauge_conjugate(Operator((2, 2), W), xxz_gauge_matrix(gamma)).entries
        return float(np.max(np.abs(conj.real - c * target)))

    best = None
    for Jx in np.linspace(0.2, 2.0, grid):
        for gamma in np.linspace(0.2, 3.0, grid):
            r = residual((Jx, gamma))
            if best is None or r < best[1]:
                best = ((Jx, gamma), r)
    res = minimize(residual, best[0], method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    Jx, gamma = res.x
    return {
        "Jx": float(Jx),
        "gamma": float(gamma),
        "scale": c,
        "residual": float(residual(res.x)),
    }


def ground_state_transform(H: Operator, g: np.ndarray, tol: float = 1e-8) -> Operator:
    """diag(g)^{-1} H diag(g) - c Id for the eigenvalue c of the positive
    eigenvector g; returns a CTMC generator or raises."""
    g = np.asarray(g, dtype=float)
    if g.shape != (H.dim,):
        raise DimensionMismatch(f"vector length {g.shape} vs operator dim {H.dim}")
    if np.min(np.abs(g)) < 1e-14:
        raise ZeroEntryInGroundState("vector has (near-)zero entries")
    mat = H.entries.real
    c = float(g @ (mat @ g) / (g @ g))
    if np.max(np.abs(mat @ g - c * g)) > tol * max(1.0, np.max(np.abs(g))):
        raise NotAnEigenvector(f"g is not an eigenvector at tolerance {tol}")
    conj = mat * (g[None, :] / g[:, None])
    out = conj - c * np.eye(H.dim)
    off = out - np.diag(np.diag(out))
    if off.min() < -1e-10:
        raise NegativeOffDiagonal(
            f"transform produced off-diagonal entry {off.min()}"
        )
    return Operator(H.site_dims, np.clip(off, 0.0, None) + np.diag(np.diag(out)))


def _epsilon(xi: np.ndarray, q: float) -> np.ndarray:
    """Jump-rate symbol of the single-particle generator: right rate 1,
    left rate q."""
    return 1.0 / xi + q * xi - (1.0 + q)


def _scattering(xa: np.ndarray, xb: np.ndarray, q: float) -> np.ndarray:
    num = 1.0 + q * xa * xb - (1.0 + q) * xa
    den = 1.0 + q * xa * xb - (1.0 + q) * xb
    return -num / den


def tw_transition_probability(
    y,
    x,
    t: float,
    q: float,
    radius: float = 0.5,
    n_quad: int | None = None,
) -> float:
    """N-particle transition probability by the Bethe-ansatz contour
    formula: a sum over permutations of N-fold contour integrals with
    scattering factors over inversions.

    Contours are circles of the given radius around the origin, integrated
    by the trapezoid rule; the result must be stable under doubling the
    node count.
    """
    y = tuple(int(v) for v in y)
    x = tuple(int(v) for v in x)
    N = len(y)
    if len(x) != N:
        raise ValueError("x and y must have equal length")
    if N > 3:
        raise ValueError("N <= 3 only; the permutation sum grows as N!")
    if any(y[i] >= y[i + 1] for i in range(N - 1)) or any(
        x[i] >= x[i + 1] for i in range(N - 1)
    ):
        raise ValueError("positions must be strictly increasing")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if n_quad is None:
        n_quad = 256

    val1 = _tw_eval(y, x, t, q, radius, n_quad)
    val2 = _tw_eval(y, x, t, q, radius, 2 * n_quad)
    if abs(val1 - val2) > 1e-8:
        raise NonConvergedQuadrature(
            f"doubling nodes moved the value by {abs(val1 - val2)}"
        )
    if abs(val2.imag) > 1e-10:
        raise NonConvergedQuadrature(f"imaginary residue {val2.imag}")
    return float(val2.real)


def _tw_eval(y, x, t, q, radius, n):
    N = len(y)
    theta = 2.0 * np.pi * np.arange(n) / n
    nodes = radius * np.exp(1j * theta)
    # pole scan for the scattering denominators on the product torus
    if N > 1:
        xa = nodes[:, None]
        xb = nodes[None, :]
        den = 1.0 + q * xa * xb - (1.0 + q) * xb
        if np.min(np.abs(den)) < 1e-6:
            raise ContourHitsPole(
                f"scattering denominator within 1e-6 of zero at radius {radius}"
            )
    weights = nodes / n  # node value times dxi/(2 pi i) per trapezoid node
    ephase = np.exp(_epsilon(nodes, q) * t)

    # Per permutation the integrand factors into one vector per contour
    # variable and one matrix per inversion pair, so the N-fold sum is a
    # small einsum contraction (memory O(n^2) instead of O(n^N)).
    letters = "abc"
    total = np.zeros((), dtype=complex)
    for sigma in itertools.permutations(range(N)):
        inv_sigma = [0] * N
        for j, a in enumerate(sigma):
            inv_sigma[a] = j
        operands = []
        subs = []
        for a in range(N):
            operands.append(
                weights * ephase * nodes ** (x[inv_sigma[a]] - y[a] - 1)
            )
            subs.append(letters[a])
        for j in range(N):
            for k in range(j + 1, N):
                if sigma[j] > sigma[k]:
                    mat = _scattering(nodes[:, None], nodes[None, :], q)
                    operands.append(mat)
                    subs.append(letters[sigma[j]] + letters[sigma[k]])
        total = total + np.einsum(
            ",".join(subs) + "->", *operands, optimize=True
        )
    return complex(total)


def _window_generator(positions, q, lo, hi):
    """Dense generator of N-particle ASEP (right rate 1, left rate q) with
    blocking, on the integer window [lo, hi]."""
    states = list(itertools.combinations(range(lo, hi + 1), len(positions)))
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    G = np.zeros((n, n))
    for s, i in index.items():
        occ = set(s)
        for pos in s:
            if pos + 1 <= hi and pos + 1 not in occ:
                j = index[tuple(sorted(occ - {pos} | {pos + 1}))]
                G[i, j] += 1.0
                G[i, i] -= 1.0
            if pos - 1 >= lo and pos - 1 not in occ:
                j = index[tuple(sorted(occ - {pos} | {pos - 1}))]
                G[i, j] += q
                G[i, i] -= q
    return states, index, G


def ctmc_oracle_probability(y, x, t: float, q: float, window: int = 6) -> float:
    """Master-equation probability on a truncated lattice via
    uniformization; the window grows until the value is stable to 1e-9."""
    y = tuple(int(v) for v in y)
    x = tuple(int(v) for v in x)
    if len(y) != len(x):
        raise ValueError("x and y must have equal length")
    if len(y) > 3:
        raise ValueError("N <= 3 only")
    prev = None
    margin = window
    for _ in range(8):
        lo = min(min(x), min(y)) - margin
        hi = max(max(x), max(y)) + margin
        states, index, G = _window_generator(y, q, lo, hi)
        if len(states) > 6000:
            break
        op = Operator((len(states),), G.astype(complex))
        P = transition_semigroup(op, t, tol=1e-13).entries.real
        val = float(P[index[y], index[x]])
        if prev is not None and abs(val - prev) <= 1e-9:
            return val
        prev = val
        margin *= 2
    raise WindowTooSmall("probability did not stabilize to 1e-9")


def symmetric_heat_kernel(d: int, t: float) -> float:
    """One-particle symmetric-walk kernel e^{-2t} I_d(2t)."""
    from scipy.special import iv

    return float(math.exp(-2.0 * t) * iv(abs(d), 2.0 * t))
