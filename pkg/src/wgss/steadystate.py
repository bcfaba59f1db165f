"""Analytic steady state of the collective master equation.

The non-Hermitian operator

    R_z = i (4|M|)^{-1/2} ( S+ e^{i alpha/2} sinh r - S- e^{-i alpha/2} cosh r )

has right/left eigenvectors |psi_m>, |phi_m> forming a biorthogonal basis,

    |psi_m> = e^{+theta S_z} e^{-(pi/4)(Sb+ - Sb-)} |j, m>,
    |phi_m> = e^{-theta S_z} e^{-(pi/4)(Sb+ - Sb-)} |j, m>,

with Sb+- = S+- e^{+-i(alpha+pi)/2} and theta = ln sqrt(tanh r).  The steady
state is sum_{mn} p_m p_n* <phi_m|phi_n> |psi_m><psi_n| with p obeying
p_{m+1} (A(m+1) + i Delta_N) = (A m - i Delta_N) p_m, normalized to unit trace.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import SqueezedReservoir
from .spinspace import DICKE, DensityMatrix, collective_ops, dicke_m_values, dicke_state


class BiorthogonalityError(RuntimeError):
    """Numerical loss of biorthogonality (extreme r * N)."""


@dataclass(frozen=True)
class BiorthogonalBasis:
    """Columns of psi/phi are the right/left eigenvectors, ordered by m."""

    N: int
    reservoir: SqueezedReservoir
    psi: np.ndarray
    phi: np.ndarray
    m_values: np.ndarray
    gram_phi: np.ndarray


@dataclass(frozen=True)
class SteadyCoefficients:
    N: int
    p: np.ndarray


def rz_operator(N: int, reservoir: SqueezedReservoir) -> np.ndarray:
    ops = collective_ops(N)
    r, alpha = reservoir.r, reservoir.alpha
    m_abs = abs(reservoir.m_complex)
    return 1j / np.sqrt(4 * m_abs) * (
        ops.sp * np.exp(1j * alpha / 2) * np.sinh(r)
        - ops.sm * np.exp(-1j * alpha / 2) * np.cosh(r)
    )


def build_basis(N: int, reservoir: SqueezedReservoir,
                biorth_tol: float = 1e-6) -> BiorthogonalBasis:
    """Right/left eigenbasis of R_z; rejects r = 0 (dark-state special case
    handled by the caller)."""
    if reservoir.r <= 0:
        raise ValueError("r = 0 has no squeezed basis; use the dark state")
    ops = collective_ops(N)
    alpha = reservoir.alpha
    phase = np.exp(1j * (alpha + np.pi) / 2)
    sb_plus = ops.sp * phase
    sb_minus = ops.sm / phase
    # exp(-(pi/4)(Sb+ - Sb-)) is unitary; build it from the Hermitian i(Sb+ - Sb-)
    h = 1j * (np.pi / 4) * (sb_plus - sb_minus)
    evals, vecs = np.linalg.eigh(h)
    rot = (vecs * np.exp(1j * evals)) @ vecs.conj().T
    theta = np.log(np.sqrt(np.tanh(reservoir.r)))
    m = dicke_m_values(N)
    with np.errstate(over="ignore", invalid="ignore"):
        psi = np.exp(theta * m)[:, None] * rot
        phi = np.exp(-theta * m)[:, None] * rot
        if not (np.all(np.isfinite(psi)) and np.all(np.isfinite(phi))):
            raise BiorthogonalityError(
                f"basis weights overflow for N={N}, r={reservoir.r}")
        resid = np.linalg.norm(phi.conj().T @ psi - np.eye(N + 1), ord=np.inf)
    if not np.isfinite(resid) or resid > biorth_tol:
        raise BiorthogonalityError(
            f"biorthogonality residual {resid:.3e} for N={N}, r={reservoir.r}")
    with np.errstate(over="ignore", invalid="ignore"):
        gram = phi.conj().T @ phi
    if not np.all(np.isfinite(gram)):
        raise BiorthogonalityError(
            f"left-basis overlaps overflow for N={N}, r={reservoir.r}")
    return BiorthogonalBasis(N=N, reservoir=reservoir, psi=psi, phi=phi,
                             m_values=m, gram_phi=gram)


def steady_coefficients(N: int, A: float, delta_N: float) -> SteadyCoefficients:
    """Expansion coefficients p_m from the two-term recurrence.

    For delta_N = 0 and integer j the upward step at m = -1 degenerates; the
    consistent solution is p_m = delta_{m,0} (zero propagation), which the
    nullspace oracle confirms.
    """
    if A <= 0:
        raise ValueError(f"A must be > 0, got {A}")
    m = dicke_m_values(N)
    p = np.zeros(N + 1, dtype=complex)
    if delta_N == 0 and N % 2 == 0:
        p[N // 2] = 1.0  # m = 0 slot
        return SteadyCoefficients(N=N, p=p)
    p[0] = 1.0
    for k in range(N):
        num = A * m[k] - 1j * delta_N
        den = A * m[k + 1] + 1j * delta_N
        with np.errstate(over="ignore", invalid="ignore"):
            p[k + 1] = num / den * p[k]
        # only the direction of p matters (the assembled state is
        # renormalized), so rescale before near-degenerate steps overflow;
        # an infinite step means every earlier entry is negligible
        top = abs(p[k + 1])
        if not np.isfinite(top):
            p[: k + 1] = 0.0
            p[k + 1] = 1.0
        elif top > 1e100:
            p[: k + 2] /= top
    return SteadyCoefficients(N=N, p=p)


def assemble_steady(basis: BiorthogonalBasis,
                    coeffs: SteadyCoefficients) -> DensityMatrix:
    """Assemble and normalize the steady state; aborts on a positivity
    violation beyond -1e-6, which signals a basis/coefficient bug."""
    if basis.N != coeffs.N:
        raise ValueError("basis and coefficients have different N")
    p = coeffs.p
    c = (p[:, None] * p[None, :].conj()) * basis.gram_phi
    rho = basis.psi @ c @ basis.psi.conj().T
    rho = (rho + rho.conj().T) / 2
    tr = np.trace(rho).real
    rho /= tr
    w = np.linalg.eigvalsh(rho)
    if w.min() < -1e-6:
        raise RuntimeError(f"assembled steady state has eigenvalue {w.min():.3e}")
    return DensityMatrix(data=rho, basis=DICKE, N=basis.N)


def steady_state_analytic(N: int, reservoir: SqueezedReservoir,
                          A: float = 1.0,
                          delta_N: float | None = None,
                          delta: float | None = None) -> DensityMatrix:
    """Closed-form steady state; give either delta_N directly or the shift
    parameter delta (then delta_N = (2 n_bar + 1) delta).  r = 0 returns the
    dark state |j,-j><j,-j|."""
    if delta_N is None:
        if delta is None:
            raise ValueError("provide delta_N or delta")
        delta_N = (2 * reservoir.n_bar + 1) * delta
    if reservoir.r == 0:
        return dicke_state(N, -N / 2)
    basis = build_basis(N, reservoir)
    coeffs = steady_coefficients(N, A, delta_N)
    return assemble_steady(basis, coeffs)
