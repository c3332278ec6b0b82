"""Classical harmonic-oscillator toolkit: Hermite polynomials, ladder
operators on a truncated Fock space, and the Jordan-Schwinger map sending a
matrix M to sum_{ij} a_i' M_ij a_j on a multi-mode Fock space.

Commutator identities hold exactly only away from the truncation edge: a'
maps the top level out of the space, so every check restricts to states
with total occupation at most cutoff - 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import Operator, StateSpaceTooLarge

# Fixed quadrature for Gaussian-weight orthogonality checks: 200-node
# Gauss-Legendre on [-10, 10] with exp(-x^2) folded into the integrand.
QUAD_NODES = 200
QUAD_HALF_WIDTH = 10.0

MAX_STATES = 2**16


class OscillatorError(Exception):
    pass


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence
    H_{k+1} = 2x H_k - 2k H_{k-1} from H_0 = 1, H_1 = 2x."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    h_prev, h = 1.0, 2.0 * x
    if n == 0:
        return h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h


def hermite_overlap(m: int, n: int) -> float:
    """Quadrature value of the weighted overlap of H_m and H_n.

    Equals sqrt(pi) 2^n n! delta_{mn} up to quadrature error (small for
    degrees up to about 8 at the fixed node count).
    """
    nodes, weights = np.polynomial.legendre.leggauss(QUAD_NODES)
    x = QUAD_HALF_WIDTH * nodes
    w = QUAD_HALF_WIDTH * weights
    hm = np.array([hermite(m, xi) for xi in x])
    hn = np.array([hermite(n, xi) for xi in x])
    return float(np.sum(w * hm * hn * np.exp(-(x**2))))


@dataclass(frozen=True)
class TruncatedFock:
    """Single-mode ladder operators on the basis |0>, ..., |cutoff-1>."""

    cutoff: int
    a: np.ndarray
    adag: np.ndarray
    number_op: np.ndarray

    def commutator_violation(self) -> float:
        """max |[a, a'] - 1| away from the top level."""
        C = self.a @ self.adag - self.adag @ self.a - np.eye(self.cutoff)
        return float(np.max(np.abs(C[: self.cutoff - 1, : self.cutoff - 1])))


def truncated_fock(cutoff: int) -> TruncatedFock:
    """Ladder pair with a|n> = sqrt(n)|n-1>, a'|n> = sqrt(n+1)|n+1>."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    adag = np.zeros((cutoff, cutoff))
    for n in range(cutoff - 1):
        adag[n + 1, n] = np.sqrt(n + 1.0)
    a = adag.T.copy()
    return TruncatedFock(cutoff=cutoff, a=a, adag=adag, number_op=adag @ a)


def jordan_schwinger(mat: np.ndarray, cutoff: int) -> Operator:
    """Image of an n x n matrix under M -> sum_{ij} a_i' M_ij a_j on the
    n-mode truncated Fock space (site dims all equal to cutoff)."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"need a square matrix, got shape {mat.shape}")
    n = mat.shape[0]
    if cutoff**n > MAX_STATES:
        raise StateSpaceTooLarge(
            f"{n} modes at cutoff {cutoff} give {cutoff**n} states"
        )
    f = truncated_fock(cutoff)
    dims = (cutoff,) * n
    total = np.zeros((cutoff**n, cutoff**n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if mat[i, j] == 0:
                continue
            factors = []
            for site in range(n):
                if site == i == j:
                    factors.append(f.adag @ f.a)
                elif site == i:
                    factors.append(f.adag)
                elif site == j:
                    factors.append(f.a)
                else:
                    factors.append(np.eye(cutoff))
            term = factors[0]
            for fac in factors[1:]:
                term = np.kron(term, fac)
            total += mat[i, j] * term
    return Operator(dims, total)


def shell_projector(n_modes: int, cutoff: int, max_total: int) -> np.ndarray:
    """Diagonal projector onto states with total occupation <= max_total."""
    dims = (cutoff,) * n_modes
    diag = np.zeros(cutoff**n_modes)
    for idx in range(cutoff**n_modes):
        rem, total = idx, 0
        for d in reversed(dims):
            total += rem % d
            rem //= d
        if total <= max_total:
            diag[idx] = 1.0
    return np.diag(diag)


def js_homomorphism_violation(A: np.ndarray, B: np.ndarray, cutoff: int) -> float:
    """‖[JS(A), JS(B)] - JS([A, B])‖ restricted to total number <= cutoff-2.

    The restriction is necessary: the raising operator leaks out of the
    truncated space at the top shell.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    ja = jordan_schwinger(A, cutoff).entries
    jb = jordan_schwinger(B, cutoff).entries
    jc = jordan_schwinger(A @ B - B @ A, cutoff).entries
    P = shell_projector(n, cutoff, cutoff - 2)
    resid = P @ (ja @ jb - jb @ ja - jc) @ P
    return float(np.max(np.abs(resid)))
