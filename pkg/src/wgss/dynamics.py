"""Time evolution and numeric steady states of the dissipative spin model.

Two equivalent descriptions are implemented.  The collective path evolves the
(N+1)-dim Dicke-sector density matrix under

    drho/dt = -i Delta_N [S_z, rho]
              + (A/2) [ N_bar D(S+,S-) + (N_bar+1) D(S-,S+)
                        - M D(S+,S+) - M* D(S-,S-) ] rho,

with D(A,B) rho = 2 A rho B - rho B A - B A rho.  The full path evolves the
2^N product-space density matrix with per-pair rates gamma+-_ij and the
dipole-dipole Hamiltonian built from Delta_ij; for ideal placements the two
agree on symmetric states.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .couplings import CouplingSet, collective_couplings
from .spinspace import (DICKE, FULL, DensityMatrix, SpinOps, collective_ops,
                        full_ops)

COLLECTIVE = "collective"
FULL_MODE = "full"


class SolverError(RuntimeError):
    pass


class DegenerateSteadyStateError(SolverError):
    """Liouvillian nullspace has dimension > 1."""


@dataclass(frozen=True)
class SqueezedReservoir:
    """Broadband squeezed vacuum characterized by strength r and angle alpha."""

    r: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"squeezing strength must be >= 0, got {self.r}")

    @property
    def n_bar(self) -> float:
        return np.sinh(self.r) ** 2

    @property
    def m_complex(self) -> complex:
        n = self.n_bar
        return np.sqrt(n * (n + 1)) * np.exp(1j * self.alpha)


@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to evaluate the master equation in one mode."""

    mode: str
    N: int
    reservoir: SqueezedReservoir
    delta: float = 1.0  # reservoir-induced shift parameter, units of A
    A: float = 1.0
    couplings: CouplingSet | None = None  # full mode only

    def __post_init__(self):
        if self.mode not in (COLLECTIVE, FULL_MODE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == FULL_MODE and self.couplings is None:
            object.__setattr__(self, "couplings",
                               collective_couplings(self.N, self.A))
        if self.couplings is not None and self.couplings.N != self.N:
            raise ValueError("coupling matrices do not match N")

    @property
    def delta_N(self) -> float:
        """Squeezing-enhanced frequency shift (2 n_bar + 1) * delta."""
        return (2 * self.reservoir.n_bar + 1) * self.delta

    @property
    def basis(self) -> str:
        return DICKE if self.mode == COLLECTIVE else FULL

    @property
    def dim(self) -> int:
        return self.N + 1 if self.mode == COLLECTIVE else 2**self.N


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    reports: list  # per-time SqueezingReport, None where the mean spin vanishes
    spec: ModelSpec

    def inv_xi(self) -> np.ndarray:
        """1/xi_R^2 per sample; nan where the report is undefined."""
        return np.array([np.nan if rep is None else 1.0 / rep.xi_R_sq
                         for rep in self.reports])


def _dissipator(a: np.ndarray, b: np.ndarray, rho: np.ndarray) -> np.ndarray:
    ba = b @ a
    return 2.0 * (a @ rho @ b) - rho @ ba - ba @ rho


class _Generator:
    """Precompiled jump operators for one ModelSpec; rho -> drho/dt."""

    def __init__(self, spec: ModelSpec):
        self.spec = spec
        res = spec.reservoir
        self.n_bar = res.n_bar
        self.m_c = res.m_complex
        if spec.mode == COLLECTIVE:
            ops = collective_ops(spec.N)
            self.ops = ops
            self.h_eff = spec.delta_N * ops.sz
            # (rate, A_op, B_op) triples of the Lindblad sum
            self.terms = [
                (spec.A / 2 * self.n_bar, ops.sp, ops.sm),
                (spec.A / 2 * (self.n_bar + 1), ops.sm, ops.sp),
                (-spec.A / 2 * self.m_c, ops.sp, ops.sp),
                (-spec.A / 2 * np.conj(self.m_c), ops.sm, ops.sm),
            ]
        else:
            ops = full_ops(spec.N)
            self.ops = ops
            cs = spec.couplings
            number_op = sum(s.conj().T @ s for s in ops.sites)
            h_dd = np.zeros_like(number_op)
            for i in range(spec.N):
                for j in range(spec.N):
                    if i == j:
                        continue
                    sij = ops.sites[i].conj().T @ ops.sites[j]
                    h_dd -= cs.delta[i, j] / 2 * (sij + sij.conj().T)
            self.h_eff = spec.delta_N * number_op + h_dd
            # diagonalize the symmetric rate matrices to get O(N) collective
            # jump operators instead of O(N^2) pair terms
            self.terms = []
            wm, vm = np.linalg.eigh(cs.gamma_minus)
            for lam, vec in zip(wm, vm.T):
                if abs(lam) < 1e-14:
                    continue
                c = sum(v * s for v, s in zip(vec, ops.sites))
                cd = c.conj().T
                self.terms.append((lam / 2 * self.n_bar, cd, c))
                self.terms.append((lam / 2 * (self.n_bar + 1), c, cd))
            wp, vp = np.linalg.eigh(cs.gamma_plus)
            for lam, vec in zip(wp, vp.T):
                if abs(lam) < 1e-14:
                    continue
                c = sum(v * s for v, s in zip(vec, ops.sites))
                cd = c.conj().T
                self.terms.append((-lam / 2 * self.m_c, cd, cd))
                self.terms.append((-lam / 2 * np.conj(self.m_c), c, c))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * (self.h_eff @ rho - rho @ self.h_eff)
        for rate, a, b in self.terms:
            out += rate * _dissipator(a, b, rho)
        return out

    def matrix(self) -> np.ndarray:
        """Dense superoperator on the row-major vectorized density matrix."""
        dim = self.h_eff.shape[0]
        eye = np.eye(dim)
        L = -1j * (np.kron(self.h_eff, eye) - np.kron(eye, self.h_eff.T))
        for rate, a, b in self.terms:
            ba = b @ a
            L += rate * (2 * np.kron(a, b.T)
                         - np.kron(eye, ba.T) - np.kron(ba, eye))
        return L


def _check_mode(spec: ModelSpec, rho: DensityMatrix, mode: str) -> None:
    if spec.mode != mode:
        raise ValueError(f"spec mode is {spec.mode!r}, expected {mode!r}")
    if rho.basis != spec.basis or rho.N != spec.N:
        raise ValueError(
            f"state basis/N ({rho.basis}, {rho.N}) does not match spec "
            f"({spec.basis}, {spec.N})"
        )


def lindblad_rhs_collective(spec: ModelSpec, rho: DensityMatrix) -> np.ndarray:
    """drho/dt of the collective master equation."""
    _check_mode(spec, rho, COLLECTIVE)
    return _Generator(spec)(rho.data)


def lindblad_rhs_full(spec: ModelSpec, rho: DensityMatrix) -> np.ndarray:
    """drho/dt of the full product-space master equation."""
    _check_mode(spec, rho, FULL_MODE)
    return _Generator(spec)(rho.data)


def liouvillian_matrix(spec: ModelSpec) -> np.ndarray:
    """Dense dim^2 x dim^2 Liouvillian (row-major vectorization)."""
    return _Generator(spec).matrix()


def evolve(spec: ModelSpec, rho0: DensityMatrix, t_end: float,
           dt_hint: float | None = None, n_samples: int = 201,
           t_eval: np.ndarray | None = None, rtol: float = 1e-10,
           atol: float = 1e-12, method: str = "DOP853",
           compute_reports: bool = True, check_tol: float = 1e-9) -> Trajectory:
    """Integrate the master equation and sample states along the way.

    Aborts with SolverError if the integrator fails or a sampled state drifts
    beyond the trace/Hermiticity tolerance `check_tol`.
    """
    from .observables import squeezing_report, UndefinedMeanSpinError

    if rho0.basis != spec.basis or rho0.N != spec.N:
        raise ValueError("initial state does not match spec mode")
    if t_eval is None:
        t_eval = np.linspace(0.0, float(t_end), n_samples)
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval[0] < 0:
        raise ValueError("sample times must be nonnegative")
    if t_eval[-1] == 0.0:
        states = [rho0] * t_eval.size
    elif np.any(np.diff(t_eval) <= 0):
        raise ValueError("sample times must be increasing")
    else:
        gen = _Generator(spec)
        dim = spec.dim

        def rhs(_t, y):
            return gen(y.reshape(dim, dim)).ravel()

        sol = solve_ivp(rhs, (0.0, t_eval[-1]), rho0.data.ravel(),
                        t_eval=t_eval, method=method, rtol=rtol, atol=atol,
                        first_step=dt_hint)
        if not sol.success:
            raise SolverError(f"integration failed: {sol.message}")
        states = []
        for col in sol.y.T:
            mat = col.reshape(dim, dim)
            mat = (mat + mat.conj().T) / 2  # discard anti-Hermitian roundoff
            states.append(DensityMatrix(data=mat, basis=spec.basis, N=spec.N))
        for t, st in zip(t_eval, states):
            err_t = abs(np.trace(st.data).real - 1.0)
            if err_t > check_tol:
                raise SolverError(
                    f"trace drifted by {err_t:.3e} at t={t:g}")

    reports = []
    if compute_reports:
        ops = collective_ops(spec.N) if spec.mode == COLLECTIVE else full_ops(spec.N)
        for st in states:
            try:
                reports.append(squeezing_report(st, ops, spec.N))
            except UndefinedMeanSpinError:
                reports.append(None)
    else:
        reports = [None] * len(states)
    return Trajectory(times=t_eval, states=states, reports=reports, spec=spec)


def steady_state_numeric(spec: ModelSpec, check_unique: bool = False,
                         residual_tol: float = 1e-10) -> DensityMatrix:
    """Steady state from the Liouvillian nullspace.

    Solves L(rho) = 0 with one equation replaced by the unit-trace condition;
    falls back to the smallest singular vector if that system is
    ill-conditioned.  With check_unique the two smallest singular values of L
    are inspected and a degenerate nullspace raises instead of being silently
    resolved.
    """
    L = liouvillian_matrix(spec)
    dim = spec.dim
    n2 = dim * dim
    scale = np.linalg.norm(L, ord=np.inf)

    # trace of vec-rho reads the diagonal entries (row-major)
    trace_row = np.zeros(n2, dtype=complex)
    trace_row[:: dim + 1] = 1.0

    M = L.copy()
    M[0, :] = trace_row
    b = np.zeros(n2, dtype=complex)
    b[0] = 1.0
    try:
        vec = np.linalg.solve(M, b)
    except np.linalg.LinAlgError:
        vec = None
    if vec is None or np.linalg.norm(L @ vec) > residual_tol * scale:
        # ill-conditioned replacement row; take the smallest singular vector
        _, s, vh = np.linalg.svd(L)
        vec = vh[-1].conj()
        vec /= np.trace(vec.reshape(dim, dim))

    if check_unique:
        s = np.linalg.svd(L, compute_uv=False)
        if s[-2] < 1e-10 * max(s[0], 1.0):
            raise DegenerateSteadyStateError(
                f"nullspace dimension > 1 (sigma = {s[-2]:.3e}, {s[-1]:.3e})")

    rho = vec.reshape(dim, dim)
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    resid = np.linalg.norm(L @ rho.ravel())
    if resid > residual_tol * scale:
        raise SolverError(f"steady-state residual {resid:.3e} exceeds "
                          f"{residual_tol:.1e} * ||L||")
    return DensityMatrix(data=rho, basis=spec.basis, N=spec.N)
