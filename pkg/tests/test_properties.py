"""Randomized invariant suite: every spec-level guarantee that should hold
for arbitrary admissible inputs, exercised with >= 200 generated cases."""

import numpy as np
from hypothesis import given, settings, strategies as st

from wgss.dynamics import COLLECTIVE, ModelSpec, SqueezedReservoir, evolve
from wgss.observables import husimi_q
from wgss.spinspace import DICKE, DensityMatrix, collective_ops, dicke_state
from wgss.steadystate import build_basis, steady_state_analytic

r_values = st.floats(0.0, 1.8)
alpha_values = st.floats(0.0, 2 * np.pi)
delta_values = st.floats(-2.0, 2.0)


def random_density(seed, dim):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


@settings(max_examples=60, deadline=None)
@given(N=st.integers(2, 5), r=r_values, alpha=alpha_values,
       delta=delta_values, t_end=st.floats(0.1, 3.0), seed=st.integers(0, 2**31))
def test_trajectory_invariants(N, r, alpha, delta, t_end, seed):
    spec = ModelSpec(mode=COLLECTIVE, N=N,
                     reservoir=SqueezedReservoir(r, alpha), delta=delta)
    rho0 = DensityMatrix(random_density(seed, N + 1), basis=DICKE, N=N)
    traj = evolve(spec, rho0, t_end, n_samples=4)
    ops = collective_ops(N)
    s2 = ops.sx @ ops.sx + ops.sy @ ops.sy + ops.sz @ ops.sz
    j = N / 2
    for st_ in traj.states:
        d = st_.data
        assert abs(np.trace(d).real - 1.0) <= 1e-9
        assert np.linalg.norm(d - d.conj().T) <= 1e-9
        assert np.linalg.eigvalsh(d).min() >= -1e-8
        assert abs(np.trace(s2 @ d).real - j * (j + 1)) <= 1e-8


@settings(max_examples=200, deadline=None)
@given(N=st.integers(1, 25), r=st.floats(0.01, 2.5), alpha=alpha_values,
       delta=delta_values)
def test_analytic_steady_state_is_physical(N, r, alpha, delta):
    rho = steady_state_analytic(N, SqueezedReservoir(r, alpha), delta=delta)
    d = rho.data
    assert abs(np.trace(d).real - 1.0) <= 1e-10
    assert np.linalg.norm(d - d.conj().T) <= 1e-10
    assert np.linalg.eigvalsh(d).min() >= -1e-8


@settings(max_examples=200, deadline=None)
@given(N=st.integers(1, 30), r=st.floats(0.01, 3.0), alpha=alpha_values)
def test_biorthogonality_residual(N, r, alpha):
    b = build_basis(N, SqueezedReservoir(r, alpha))
    resid = b.phi.conj().T @ b.psi - np.eye(N + 1)
    assert np.linalg.norm(resid, ord=np.inf) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(N=st.integers(1, 12), seed=st.integers(0, 2**31))
def test_q_function_normalization(N, seed):
    rho = DensityMatrix(random_density(seed, N + 1), basis=DICKE, N=N)
    q = husimi_q(rho, n_theta=241, n_phi=241)
    assert abs(q.integral() - 1.0) <= 1e-6
    assert np.all(q.values >= 0.0)


@settings(max_examples=200, deadline=None)
@given(N=st.integers(1, 20),
       r=st.one_of(st.just(0.0), st.floats(0.01, 2.0)),
       alpha=alpha_values, delta=delta_values, scale=st.floats(0.1, 10.0))
def test_steady_state_depends_only_on_rate_ratio(N, r, alpha, delta, scale):
    res = SqueezedReservoir(r, alpha)
    rho1 = steady_state_analytic(N, res, A=1.0, delta=delta)
    rho2 = steady_state_analytic(N, res, A=scale, delta=scale * delta)
    assert np.linalg.norm(rho1.data - rho2.data) <= 1e-9
