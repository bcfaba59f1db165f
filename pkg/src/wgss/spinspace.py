"""Spin operators and states in the collective Dicke basis and the full product basis.

The collective (Dicke) basis spans the maximal-spin multiplet j = N/2 with
dimension N+1, ordered by increasing magnetic quantum number m = -j..j.
The full basis is the 2^N product space with site 0 as the most significant
tensor factor and the single-site ordering |g> = index 0, |e> = index 1.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import comb

DICKE = "dicke"
FULL = "full"

# Largest N for which we build product-space operators (density matrix 2^N x 2^N).
N_MAX_FULL = 8


class BasisMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SpinOps:
    """Collective spin matrices in one basis; `sites` holds the per-site
    lowering operators when built on the product space."""

    basis: str
    N: int
    sp: np.ndarray
    sm: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    sites: tuple | None = None

    @property
    def dim(self) -> int:
        return self.sp.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    data: np.ndarray
    basis: str
    N: int

    @property
    def dim(self) -> int:
        return self.data.shape[0]


def dicke_m_values(N: int) -> np.ndarray:
    """m = -j..j for j = N/2, ascending."""
    j = N / 2.0
    return -j + np.arange(N + 1)


def collective_ops(N: int) -> SpinOps:
    """Spin-j = N/2 ladder and Cartesian operators on the (N+1)-dim Dicke space."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    j = N / 2.0
    m = dicke_m_values(N)
    dim = N + 1
    sp = np.zeros((dim, dim), dtype=complex)
    # <j, m+1| S+ |j, m> = sqrt(j(j+1) - m(m+1))
    coeff = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    sp[np.arange(1, dim), np.arange(dim - 1)] = coeff
    sm = sp.conj().T
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    sz = np.diag(m).astype(complex)
    return SpinOps(basis=DICKE, N=N, sp=sp, sm=sm, sx=sx, sy=sy, sz=sz)


def _site_operator(N: int, i: int, op: np.ndarray) -> np.ndarray:
    """Embed a 2x2 operator at site i into the 2^N product space."""
    out = np.array([[1.0 + 0j]])
    for k in range(N):
        out = np.kron(out, op if k == i else np.eye(2))
    return out


def full_ops(N: int) -> SpinOps:
    """Per-site lowering operators and their collective sums on the product space."""
    if not 1 <= N <= N_MAX_FULL:
        raise ValueError(f"full basis supports 1 <= N <= {N_MAX_FULL}, got {N}")
    sigma = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
    sites = tuple(_site_operator(N, i, sigma) for i in range(N))
    sm = sum(sites)
    sp = sm.conj().T
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    # S_z = sum_i (sigma_i^dag sigma_i - 1/2)
    dim = 2**N
    sz = sum(s.conj().T @ s for s in sites) - (N / 2.0) * np.eye(dim)
    return SpinOps(basis=FULL, N=N, sp=sp, sm=sm, sx=sx, sy=sy, sz=sz, sites=sites)


def dicke_state(N: int, m: float) -> DensityMatrix:
    """Pure-state density matrix |j,m><j,m| in the Dicke basis."""
    m_vals = dicke_m_values(N)
    # compare in twice-integer units to avoid half-integer float bookkeeping
    idx = np.flatnonzero(np.rint(2 * m_vals).astype(int) == int(round(2 * m)))
    if idx.size != 1:
        raise ValueError(f"m={m} not in -{N/2}..{N/2} for N={N}")
    rho = np.zeros((N + 1, N + 1), dtype=complex)
    rho[idx[0], idx[0]] = 1.0
    return DensityMatrix(data=rho, basis=DICKE, N=N)


def symmetric_isometry(N: int) -> np.ndarray:
    """Isometry V (2^N x (N+1)) from the j = N/2 multiplet into the product space.

    Column k (m = -j + k) is the normalized symmetric superposition of all
    product states with k excitations.
    """
    if N > N_MAX_FULL:
        raise ValueError(f"N={N} exceeds N_MAX_FULL={N_MAX_FULL}")
    dim = 2**N
    V = np.zeros((dim, N + 1), dtype=complex)
    for state in range(dim):
        k = bin(state).count("1")
        V[state, k] = 1.0
    for k in range(N + 1):
        V[:, k] /= np.sqrt(comb(N, k, exact=True))
    return V


def embed_symmetric(rho_dicke: DensityMatrix, N: int) -> DensityMatrix:
    """Map a Dicke-basis state into the product basis: V rho V^dag."""
    if rho_dicke.basis != DICKE:
        raise BasisMismatchError(f"expected Dicke basis, got {rho_dicke.basis}")
    if rho_dicke.N != N:
        raise BasisMismatchError(f"state has N={rho_dicke.N}, requested N={N}")
    V = symmetric_isometry(N)
    return DensityMatrix(data=V @ rho_dicke.data @ V.conj().T, basis=FULL, N=N)


def validate_state(rho: DensityMatrix, herm_tol: float = 1e-10,
                   trace_tol: float = 1e-10, pos_tol: float = 1e-8) -> None:
    """Raise if rho violates Hermiticity, unit trace, or positivity tolerances."""
    d = rho.data
    herm = np.linalg.norm(d - d.conj().T)
    if herm > herm_tol:
        raise ValueError(f"non-Hermitian state: ||rho - rho^dag|| = {herm:.3e}")
    tr = np.trace(d).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    w = np.linalg.eigvalsh((d + d.conj().T) / 2)
    if w.min() < -pos_tol:
        raise ValueError(f"negative eigenvalue {w.min():.3e}")
