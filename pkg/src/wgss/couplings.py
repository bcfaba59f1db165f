"""Reservoir-induced couplings of emitters along a rectangular hollow waveguide.

Only the dominant (1,1) transverse mode is kept.  With the cutoff frequency
omega11 below the emitter transition frequency omega0, the propagating mode
mediates dipole-dipole shifts and correlated decay/squeezing rates that
oscillate on the length scale zeta = c / sqrt(omega0^2 - omega11^2):

    Delta_ij     = -(A/2) sin(|z_i - z_j| / zeta)
    gamma-_ij    =   A    cos(|z_i - z_j| / zeta)
    gamma+_ij    =   A    cos(|z_i + z_j| / zeta)

with the collective rate A = Gamma11 * zeta * omega11 / c.  Everything here is
a pure function of immutable inputs.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class WaveguideGeometry:
    """Transverse geometry and rate prefactor of the (1,1) waveguide mode.

    All frequencies are in units of the collective rate A unless stated
    otherwise; c = 1 in natural units.
    """

    a: float
    b: float
    omega0: float
    gamma11: float
    c: float = 1.0

    def __post_init__(self):
        if self.omega0 <= self.omega11:
            raise ValueError(
                f"propagating regime requires omega0 > omega11 "
                f"(omega0={self.omega0}, omega11={self.omega11:.6g})"
            )

    @property
    def omega11(self) -> float:
        """Cutoff frequency of the (1,1) mode."""
        return self.c * np.sqrt((np.pi / self.a) ** 2 + (np.pi / self.b) ** 2)

    @property
    def zeta(self) -> float:
        return self.c / np.sqrt(self.omega0**2 - self.omega11**2)

    @property
    def collective_rate(self) -> float:
        """A = Gamma11 * zeta * omega11 / c."""
        return self.gamma11 * self.zeta * self.omega11 / self.c

    @classmethod
    def for_collective_rate(cls, A: float = 1.0, omega0: float = 1.0,
                            cutoff_ratio: float = 1.0 / np.sqrt(2.0),
                            c: float = 1.0) -> "WaveguideGeometry":
        """Square geometry with omega11 = cutoff_ratio * omega0, sized so the
        ideal-placement collective rate equals A."""
        if not 0 < cutoff_ratio < 1:
            raise ValueError("cutoff_ratio must lie in (0, 1)")
        omega11 = cutoff_ratio * omega0
        side = c * np.pi * np.sqrt(2.0) / omega11
        zeta = c / np.sqrt(omega0**2 - omega11**2)
        gamma11 = A * c / (zeta * omega11)
        return cls(a=side, b=side, omega0=omega0, gamma11=gamma11, c=c)


@dataclass(frozen=True)
class Placement:
    """Longitudinal emitter coordinates along the waveguide axis."""

    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.atleast_1d(np.asarray(self.z, dtype=float)))
        if self.z.ndim != 1 or self.z.size < 1:
            raise ValueError("placement needs at least one coordinate")

    @property
    def N(self) -> int:
        return self.z.size


@dataclass(frozen=True)
class CouplingSet:
    """Coupling matrices for one placement; all symmetric, rates in units of A."""

    delta: np.ndarray
    gamma_minus: np.ndarray
    gamma_plus: np.ndarray
    A: float

    @property
    def N(self) -> int:
        return self.delta.shape[0]


def spectral_density(geom: WaveguideGeometry, zi: float, zj: float,
                     omega, sign: str) -> float:
    """Correlated spectral density G^{+/-}_ij(omega) of the (1,1) mode.

    Vanishes identically below the cutoff; sign selects z_i + z_j ('+') or
    z_i - z_j ('-').
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    omega = np.asarray(omega, dtype=float)
    w11 = geom.omega11
    zsum = zi + zj if sign == "+" else zi - zj
    out = np.zeros_like(omega)
    above = omega > w11
    k = np.sqrt(np.maximum(omega**2 - w11**2, 0.0)) / geom.c
    denom = np.sqrt(np.maximum((omega / w11) ** 2 - 1.0, 0.0))
    np.divide(geom.gamma11 / (2 * np.pi) * np.cos(k * zsum), denom,
              out=out, where=above)
    return out if out.ndim else float(out)


def build_couplings(geom: WaveguideGeometry, placement: Placement) -> CouplingSet:
    """Delta_ij and gamma+-_ij matrices for a placement, per the (1,1)-mode
    closed forms."""
    zeta = geom.zeta
    if not np.isfinite(zeta) or zeta <= 0:
        raise ValueError(f"non-finite coupling length zeta={zeta}")
    A = geom.collective_rate
    z = placement.z
    dz = np.abs(z[:, None] - z[None, :])
    sz = np.abs(z[:, None] + z[None, :])
    delta = -(A / 2.0) * np.sin(dz / zeta)
    gamma_minus = A * np.cos(dz / zeta)
    gamma_plus = A * np.cos(sz / zeta)
    return CouplingSet(delta=delta, gamma_minus=gamma_minus,
                       gamma_plus=gamma_plus, A=A)


def ideal_placement(N: int, geom: WaveguideGeometry) -> Placement:
    """z_i = 2 i pi zeta, which zeroes every Delta_ij and makes every
    gamma+-_ij equal to A."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return Placement(z=2.0 * np.pi * geom.zeta * np.arange(1, N + 1))


def collective_couplings(N: int, A: float = 1.0) -> CouplingSet:
    """Ideal couplings without going through a geometry: gamma = A, delta = 0."""
    ones = np.full((N, N), float(A))
    return CouplingSet(delta=np.zeros((N, N)), gamma_minus=ones.copy(),
                       gamma_plus=ones.copy(), A=float(A))
