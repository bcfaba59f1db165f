"""Squeezing diagnostics: Wineland parameter, Husimi Q function, and the
large-N Gaussian closed form used as an asymptotic oracle."""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import gammaln

from .spinspace import DICKE, DensityMatrix, SpinOps


class UndefinedMeanSpinError(ValueError):
    """The mean spin vector is (numerically) zero, so no mean direction and
    no perpendicular plane exist."""


@dataclass(frozen=True)
class SqueezingReport:
    mean_spin: np.ndarray
    theta0: float
    phi0: float
    n1: np.ndarray
    n2: np.ndarray
    cov: np.ndarray
    var_min: float
    theta_min: float
    xi_R_sq: float


@dataclass(frozen=True)
class QGrid:
    theta: np.ndarray
    phi: np.ndarray
    values: np.ndarray  # shape (theta, phi)
    j: float

    def integral(self) -> float:
        """Spherical integral via Simpson's rule."""
        from scipy.integrate import simpson

        w = self.values * np.sin(self.theta)[:, None]
        return simpson(simpson(w, x=self.phi, axis=1), x=self.theta)


@dataclass(frozen=True)
class PlanarQGrid:
    u: np.ndarray
    v: np.ndarray
    values: np.ndarray  # nan outside the unit disk


def _expect(rho: np.ndarray, op: np.ndarray) -> complex:
    return np.trace(rho @ op)


def squeezing_report(rho: DensityMatrix, ops: SpinOps, N: int) -> SqueezingReport:
    """Mean spin direction, minimal perpendicular variance and xi_R^2.

    The off-diagonal covariance uses the symmetrized product
    <(S_a S_b + S_b S_a)/2> - <S_a><S_b>.
    """
    if ops.basis != rho.basis:
        raise ValueError(f"operator basis {ops.basis} != state basis {rho.basis}")
    d = rho.data
    mean = np.array([_expect(d, ops.sx).real, _expect(d, ops.sy).real,
                     _expect(d, ops.sz).real])
    norm = np.linalg.norm(mean)
    if norm <= 1e-10 * N:
        raise UndefinedMeanSpinError(f"|<S>| = {norm:.3e}")
    n = mean / norm
    theta0 = np.arccos(np.clip(n[2], -1.0, 1.0))
    # pin the azimuth at the poles where it is numerically arbitrary
    phi0 = np.arctan2(n[1], n[0]) if np.hypot(n[0], n[1]) > 1e-12 else 0.0
    n1 = np.array([np.cos(theta0) * np.cos(phi0),
                   np.cos(theta0) * np.sin(phi0), -np.sin(theta0)])
    n2 = np.array([-np.sin(phi0), np.cos(phi0), 0.0])
    cart = (ops.sx, ops.sy, ops.sz)
    s1 = sum(c * op for c, op in zip(n1, cart))
    s2 = sum(c * op for c, op in zip(n2, cart))
    m1 = _expect(d, s1).real
    m2 = _expect(d, s2).real
    c11 = _expect(d, s1 @ s1).real - m1 * m1
    c22 = _expect(d, s2 @ s2).real - m2 * m2
    c12 = _expect(d, (s1 @ s2 + s2 @ s1) / 2).real - m1 * m2
    cov = np.array([[c11, c12], [c12, c22]])
    half_diff = (c11 - c22) / 2
    var_min = (c11 + c22) / 2 - np.hypot(half_diff, c12)
    # in-plane angle measured from n1 toward n2; minimizing
    # Var(cos t S_n1 + sin t S_n2) = (c11+c22)/2 + half_diff cos 2t + c12 sin 2t
    theta_min = 0.5 * np.arctan2(-c12, -half_diff) % np.pi
    xi = N * var_min / norm**2
    return SqueezingReport(mean_spin=mean, theta0=theta0, phi0=phi0, n1=n1,
                           n2=n2, cov=cov, var_min=var_min,
                           theta_min=theta_min, xi_R_sq=xi)


def coherent_amplitudes(j: float, theta, phi) -> np.ndarray:
    """<j,m|theta,phi> over m = -j..j (last axis), in the stable
    trig form cos(theta/2)^(j+m) sin(theta/2)^(j-m) sqrt(C(2j, j-m))."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = int(round(2 * j))
    k = np.arange(n + 1)  # k = j + m
    logc = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    c = np.exp(0.5 * logc)
    ct = np.cos(theta / 2)[..., None]
    st = np.sin(theta / 2)[..., None]
    amp = c * ct**k * st**(n - k)
    return amp * np.exp(1j * (n - k) * phi[..., None])


def husimi_q(rho: DensityMatrix, n_theta: int = 181, n_phi: int = 361) -> QGrid:
    """Q(theta, phi) = (2j+1)/(4 pi) <theta,phi| rho |theta,phi> on a regular
    grid including both phi endpoints."""
    if rho.basis != DICKE:
        raise ValueError("Husimi Q is computed in the Dicke basis")
    j = rho.N / 2.0
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2 * np.pi, n_phi)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    amp = coherent_amplitudes(j, tt, pp)  # (theta, phi, m)
    vals = np.einsum("tpm,mn,tpn->tp", amp.conj(), rho.data, amp).real
    vals = np.maximum(vals, 0.0) * (2 * j + 1) / (4 * np.pi)
    return QGrid(theta=theta, phi=phi, values=vals, j=j)


def project_q_perp(qgrid: QGrid, report: SqueezingReport,
                   n_grid: int = 201) -> PlanarQGrid:
    """Orthographic projection of the hemisphere around the mean-spin
    direction onto the perpendicular plane with planar axes (n1, n2),
    matching the in-plane angle convention of squeezing_report; points
    outside the unit disk are nan."""
    interp = RegularGridInterpolator((qgrid.theta, qgrid.phi), qgrid.values,
                                     bounds_error=False, fill_value=None)
    u = np.linspace(-1.0, 1.0, n_grid)
    v = np.linspace(-1.0, 1.0, n_grid)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    rr = uu**2 + vv**2
    inside = rr <= 1.0
    n = report.mean_spin / np.linalg.norm(report.mean_spin)
    w = np.sqrt(np.clip(1.0 - rr, 0.0, None))
    pts = (uu[..., None] * report.n1 + vv[..., None] * report.n2
           + w[..., None] * n)
    theta = np.arccos(np.clip(pts[..., 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(pts[..., 1], pts[..., 0]), 2 * np.pi)
    vals = np.full_like(uu, np.nan)
    vals[inside] = interp(np.stack([theta[inside], phi[inside]], axis=-1))
    return PlanarQGrid(u=u, v=v, values=vals)


def hp_inverse_xi(r: float) -> float:
    """Large-N Gaussian closed form 1/xi_R^2 = [2n+1 - 2 sqrt(n(n+1))]^{-1}
    with n = sinh^2 r."""
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    n = np.sinh(r) ** 2
    return 1.0 / (2 * n + 1 - 2 * np.sqrt(n * (n + 1)))
