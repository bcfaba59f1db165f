"""Experiment orchestration: r sweeps, optimal-r scaling fits, and position
disorder ensembles."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .couplings import (Placement, WaveguideGeometry, build_couplings,
                        ideal_placement)
from .dynamics import (COLLECTIVE, FULL_MODE, ModelSpec, SolverError,
                       SqueezedReservoir, evolve, steady_state_numeric)
from .observables import squeezing_report
from .spinspace import collective_ops, dicke_state, embed_symmetric, full_ops
from .steadystate import steady_state_analytic

DEFAULT_R_GRID = np.round(np.arange(0.0, 2.0 + 1e-9, 0.02), 10)
DEFAULT_N_GRID = tuple(range(4, 61, 2))


@dataclass(frozen=True)
class DisorderSpec:
    """Ensemble of placements z_i + w * pi * zeta * chi_i, chi uniform in
    [-1, 1]; w is measured in units of pi * zeta."""

    w: float
    n_configs: int
    seed: int
    base_placement: Placement

    def __post_init__(self):
        if self.w < 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.w}")
        if self.n_configs < 1:
            raise ValueError("need at least one configuration")


@dataclass(frozen=True)
class ScalingFit:
    """Power law y = a x^b (fit in log-log) or log law y = a ln x + b."""

    model: str
    param_a: float
    param_b: float
    residual_rms: float
    points: np.ndarray


@dataclass
class EnsembleResult:
    mean: np.ndarray
    std: np.ndarray
    n_ok: int
    n_failed: int
    failures: list


def steady_inverse_xi(N: int, r: float, alpha: float, delta: float,
                      A: float = 1.0) -> float:
    """1/xi_R^2 of the analytic collective steady state (1.0 exactly at r=0)."""
    if r == 0:
        return 1.0  # dark state |j,-j> is spin coherent
    rho = steady_state_analytic(N, SqueezedReservoir(r=r, alpha=alpha),
                                A=A, delta=delta)
    rep = squeezing_report(rho, collective_ops(N), N)
    return 1.0 / rep.xi_R_sq


def sweep_r(N: int, r_grid=DEFAULT_R_GRID, alpha: float = 0.5,
            delta: float = 1.0, A: float = 1.0):
    """Per-r steady 1/xi_R^2 plus the contiguous squeezing window where it
    exceeds 1.  Returns (points, window) with points an (len, 2) array."""
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid < 0):
        raise ValueError("r grid must be nonnegative")
    inv = np.array([steady_inverse_xi(N, r, alpha, delta, A) for r in r_grid])
    above = inv > 1.0
    window = None
    if above.any():
        idx = np.flatnonzero(above)
        window = (r_grid[idx[0]], r_grid[idx[-1]])
    return np.column_stack([r_grid, inv]), window


def optimize_r(N: int, alpha: float = 0.5, delta: float = 1.0, A: float = 1.0,
               r_grid=DEFAULT_R_GRID, xatol: float = 1e-5):
    """Refine the sweep maximum of 1/xi_R^2 to r resolution <= 1e-4."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    pts, _ = sweep_r(N, r_grid, alpha, delta, A)
    r, inv = pts[:, 0], pts[:, 1]
    interior = inv[1:-1]
    n_peaks = int(np.sum((interior > inv[:-2]) & (interior >= inv[2:])))
    if n_peaks > 1:
        raise SolverError(f"non-unimodal r sweep for N={N}: {n_peaks} peaks")
    k = int(np.argmax(inv))
    lo = r[max(k - 1, 0)]
    hi = r[min(k + 1, r.size - 1)]
    res = minimize_scalar(lambda x: -steady_inverse_xi(N, x, alpha, delta, A),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol})
    return float(res.x), float(-res.fun)


def fit_scaling(points, model: str) -> ScalingFit:
    """Least squares in the transformed space: power fits log y on log x,
    log fits y on ln x."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] < 3:
        raise ValueError("need at least 3 points")
    x, y = pts[:, 0], pts[:, 1]
    if model == "power":
        if np.any(x <= 0) or np.any(y <= 0):
            raise ValueError("power model needs positive x and y")
        b, loga = np.polyfit(np.log(x), np.log(y), 1)
        a = float(np.exp(loga))
        resid = np.log(y) - (loga + b * np.log(x))
    elif model == "log":
        if np.any(x <= 0):
            raise ValueError("log model needs positive x")
        a, b = np.polyfit(np.log(x), y, 1)
        resid = y - (a * np.log(x) + b)
    else:
        raise ValueError(f"unknown model {model!r}")
    if not np.all(np.isfinite([a, b])):
        raise ValueError("degenerate design matrix")
    return ScalingFit(model=model, param_a=float(a), param_b=float(b),
                      residual_rms=float(np.sqrt(np.mean(resid**2))),
                      points=pts)


def scaling_study(N_values=DEFAULT_N_GRID, alpha: float = 0.5,
                  delta: float = 1.0, A: float = 1.0):
    """Optimal r and squeezing per N plus the two headline fits.

    Returns (table, xi_fit, ropt_fit) with table rows
    (N, r_opt, inv_xi_max, xi_min)."""
    rows = []
    for N in N_values:
        r_opt, inv_max = optimize_r(N, alpha, delta, A)
        rows.append((N, r_opt, inv_max, 1.0 / inv_max))
    table = np.array(rows)
    xi_fit = fit_scaling(table[:, [0, 3]], "power")
    ropt_fit = fit_scaling(table[:, [0, 1]], "log")
    return table, xi_fit, ropt_fit


def disordered_placement(spec: DisorderSpec, zeta: float,
                         config_index: int) -> Placement:
    """Placement of one ensemble member; the per-config substream makes every
    configuration reproducible independent of execution order."""
    rng = np.random.default_rng([spec.seed, config_index])
    chi = rng.uniform(-1.0, 1.0, spec.base_placement.N)
    return Placement(z=spec.base_placement.z + spec.w * np.pi * zeta * chi)


def _config_model(spec: DisorderSpec, geom: WaveguideGeometry,
                  reservoir: SqueezedReservoir, delta: float,
                  config_index: int) -> ModelSpec:
    placement = disordered_placement(spec, geom.zeta, config_index)
    cs = build_couplings(geom, placement)
    return ModelSpec(mode=FULL_MODE, N=placement.N, reservoir=reservoir,
                     delta=delta, A=geom.collective_rate, couplings=cs)


def disorder_ensemble(spec: DisorderSpec, geom: WaveguideGeometry,
                      reservoir: SqueezedReservoir, delta: float = 1.0,
                      t_grid: np.ndarray | None = None, steady: bool = False,
                      max_failure_frac: float = 0.05) -> EnsembleResult:
    """Mean and standard deviation of 1/xi_R^2 over random configurations.

    Either trajectory statistics on t_grid or steady-state statistics
    (steady=True).  Individual solver failures are excluded and counted; more
    than max_failure_frac failures aborts the ensemble.
    """
    if steady == (t_grid is not None):
        raise ValueError("give exactly one of t_grid or steady=True")
    N = spec.base_placement.N
    ops = full_ops(N)
    ground_full = embed_symmetric(dicke_state(N, -N / 2), N)
    samples = []
    failures = []
    for idx in range(spec.n_configs):
        try:
            model = _config_model(spec, geom, reservoir, delta, idx)
            if steady:
                rho = steady_state_numeric(model)
                rep = squeezing_report(rho, ops, N)
                samples.append(np.array([1.0 / rep.xi_R_sq]))
            else:
                traj = evolve(model, ground_full, t_grid[-1], t_eval=t_grid,
                              compute_reports=True)
                samples.append(traj.inv_xi())
        except (SolverError, np.linalg.LinAlgError) as exc:
            failures.append((idx, repr(exc)))
    n_failed = len(failures)
    if n_failed > max_failure_frac * spec.n_configs:
        raise SolverError(
            f"{n_failed}/{spec.n_configs} configurations failed: {failures[:3]}")
    data = np.array(samples)
    return EnsembleResult(mean=data.mean(axis=0), std=data.std(axis=0),
                          n_ok=len(samples), n_failed=n_failed,
                          failures=failures)


def ideal_reference(N: int, reservoir: SqueezedReservoir, delta: float,
                    A: float, t_grid: np.ndarray) -> np.ndarray:
    """Collective-model 1/xi_R^2 trajectory from the ground state, used as the
    w = 0 baseline of the disorder figures."""
    spec = ModelSpec(mode=COLLECTIVE, N=N, reservoir=reservoir, delta=delta, A=A)
    traj = evolve(spec, dicke_state(N, -N / 2), t_grid[-1], t_eval=t_grid)
    return traj.inv_xi()
