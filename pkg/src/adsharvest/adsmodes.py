"""Global AdS4 geometry, the conformal scalar's normal modes, and its two-point functions.

Conventions
-----------
Metric ``ds^2 = L^2 sec^2(rho) (dt^2 - drho^2 - sin^2(rho) dOmega^2)`` with
dimensionless coordinate time ``t`` and ``rho`` in [0, pi/2). Modes are

    phi_nlm = sqrt(2)^(eps^2) N_wl cos(rho) sin(rho)^l C_{w-l-1}^{(l+1)}(cos rho) Y_lm

normalised so that ``W = sum 1/(2w) exp(-i w (t - t')) phi phi*``. Only m = 0
modes are ever needed: detector A sits at the centre and a static detector B
sits on the z axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import specfun
from .specfun import DomainError

_LOG_MAX = 700.0


class BoundaryCondition(enum.IntEnum):
    """Conformal boundary condition at rho = pi/2, valued by epsilon."""

    DIRICHLET = -1
    TRANSPARENT = 0
    NEUMANN = 1

    @property
    def epsilon(self) -> int:
        return int(self)

    @classmethod
    def parse(cls, value) -> "BoundaryCondition":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            names = {"dirichlet": cls.DIRICHLET, "transparent": cls.TRANSPARENT,
                     "neumann": cls.NEUMANN}
            if key in names:
                return names[key]
            value = int(key)
        if value not in (-1, 0, 1):
            raise ValueError(f"epsilon must be -1, 0 or +1, got {value!r}")
        return cls(int(value))


class Motion(str, enum.Enum):
    GEODESIC = "geodesic"
    STATIC = "static"


@dataclass(frozen=True)
class AdsGeometry:
    """AdS length ``L`` in units of the reference width sigma."""

    L: float

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"AdS length must be positive, got {self.L!r}")


@dataclass(frozen=True)
class ModeIndex:
    n: int
    l: int
    bc: BoundaryCondition

    @property
    def omega(self) -> int:
        return omega_of(self.bc, self.n, self.l)


def omega_of(bc, n, l):
    """Integer frequency of mode (n, l); works elementwise on arrays."""
    bc = BoundaryCondition.parse(bc)
    if bc is BoundaryCondition.TRANSPARENT:
        return l + n + 1
    if bc is BoundaryCondition.NEUMANN:
        return l + 2 * n + 1
    return l + 2 * n + 2


def _log_norm_times_c1(geom: AdsGeometry, omega, l):
    """log(N_wl) + log(C_{w-l-1}^{(l+1)}(1)), both via log-factorials."""
    omega = np.asarray(omega)
    l = np.asarray(l)
    lf = specfun.log_factorial
    return (l * math.log(2.0) + lf(l) - math.log(geom.L)
            + 0.5 * np.log(2.0 * omega / math.pi)
            + 0.5 * lf(omega + l) - 0.5 * lf(omega - l - 1) - lf(2 * l + 1))


def log_normalization(geom: AdsGeometry, omega, l):
    lf = specfun.log_factorial
    omega = np.asarray(omega)
    l = np.asarray(l)
    return (l * math.log(2.0) + lf(l) - math.log(geom.L)
            + 0.5 * (np.log(2.0 * omega / math.pi) + lf(omega - l - 1) - lf(omega + l)))


def normalization(geom: AdsGeometry, omega: int, l: int) -> float:
    """N_wl = (2^l l!/L) sqrt(2 w (w-l-1)! / (pi (w+l)!))."""
    if omega < l + 1:
        raise DomainError(f"need omega >= l+1, got omega={omega}, l={l}")
    log_n = float(log_normalization(geom, omega, l))
    if abs(log_n) > _LOG_MAX:
        raise OverflowError(f"N_wl out of double range (log = {log_n:.1f})")
    return math.exp(log_n)


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho < math.pi / 2:
        raise DomainError(f"rho={rho!r} outside [0, pi/2)")


def mode_value(geom: AdsGeometry, bc, n: int, l: int, rho: float, cos_theta: float) -> float:
    """Real m = 0 mode amplitude phi_{n l 0}(rho, theta)."""
    _check_rho(rho)
    bc = BoundaryCondition.parse(bc)
    if l > 0 and rho == 0.0:
        return 0.0
    omega = omega_of(bc, n, l)
    degree = omega - l - 1
    g = specfun.normalized_gegenbauer_table(degree, np.array([l]), math.cos(rho))[degree, 0]
    log_amp = float(_log_norm_times_c1(geom, omega, l)) + math.log(math.cos(rho))
    if l:
        log_amp += l * math.log(math.sin(rho))
    bc_factor = math.sqrt(2.0) if bc.epsilon else 1.0
    return bc_factor * math.exp(log_amp) * g * specfun.y_l0(l, cos_theta)


def radial_modes(geom: AdsGeometry, bc, rho: float, n_max: int, l: int = 0):
    """Frequencies and on-axis mode values phi_{n l 0}(rho, theta=0) for n < n_max.

    Returns ``(omega, phi)`` as arrays of length ``n_max``.
    """
    omegas, table = mode_table(geom, bc, rho, n_max, l + 1)
    return omegas[:, l], table[:, l]


def mode_table(geom: AdsGeometry, bc, rho: float, n_max: int, l_max: int):
    """On-axis values phi_{n l 0}(rho, theta=0) for n < n_max, l < l_max.

    Returns ``(omega, phi)`` with shape ``(n_max, l_max)``. Computed in log
    space against the normalised Gegenbauer recurrence so that large l does
    not overflow.
    """
    _check_rho(rho)
    bc = BoundaryCondition.parse(bc)
    ls = np.arange(l_max)
    ns = np.arange(n_max)
    omegas = omega_of(bc, ns[:, None], ls[None, :])
    degrees = omegas - ls[None, :] - 1
    x = math.cos(rho)
    g = specfun.normalized_gegenbauer_table(int(degrees.max()), ls, x)
    g_sel = np.take_along_axis(g, degrees, axis=0)
    log_amp = _log_norm_times_c1(geom, omegas, ls[None, :]) + math.log(x)
    if rho > 0:
        log_amp = log_amp + ls[None, :] * math.log(math.sin(rho))
    else:
        log_amp = np.where(ls[None, :] > 0, -np.inf, log_amp)
    harmonic = np.sqrt((2 * ls + 1) / (4.0 * math.pi))
    bc_factor = math.sqrt(2.0) if bc.epsilon else 1.0
    phi = bc_factor * np.exp(log_amp) * g_sel * harmonic[None, :]
    return omegas, phi


def proper_to_coord(geom: AdsGeometry, delta_x: float) -> float:
    """rho = arctan(sinh(dx/L)), written as the Gudermannian to avoid overflow."""
    if delta_x < 0:
        raise DomainError(f"proper distance must be >= 0, got {delta_x!r}")
    rho = 2.0 * math.atan(math.tanh(delta_x / (2.0 * geom.L)))
    # far out the float result rounds onto the boundary itself
    return min(rho, math.nextafter(math.pi / 2, 0.0))


def coord_to_proper(geom: AdsGeometry, rho: float) -> float:
    """dx = L log(tan rho + sec rho) = L asinh(tan rho)."""
    _check_rho(rho)
    return geom.L * math.asinh(math.tan(rho))


def redshift_dtau_dt(geom: AdsGeometry, motion, rho: float) -> float:
    """dtau/dt: L on every circular geodesic, L sec(rho) for a static observer."""
    _check_rho(rho)
    if Motion(motion) is Motion.GEODESIC:
        return geom.L
    return geom.L / math.cos(rho)


def sigma0(delta_t, rho: float):
    """Half the embedding-space squared distance (units L^2) to a point at the centre."""
    return 1.0 - np.cos(delta_t) / math.cos(rho)


def wightman_analytic(geom: AdsGeometry, bc, sigma_0: complex) -> complex:
    """Closed-form Wightman function with one point at the centre.

    Uses ``8 pi^2 L^2 W = X (1 + eps/(1 + 2X))`` with ``X = -1/sigma0``, i.e.
    ``8 pi^2 L^2 W = -1/sigma0 + eps/(2 - sigma0)``. The caller supplies an
    i-epsilon shifted time so that sigma0 stays off the light cone.
    """
    eps = BoundaryCondition.parse(bc).epsilon
    s0 = complex(sigma_0)
    if abs(s0) < 1e-14 or (eps and abs(2.0 - s0) < 1e-14):
        raise ZeroDivisionError(f"Wightman function singular at sigma0={s0!r}")
    value = -1.0 / s0
    if eps:
        value += eps / (2.0 - s0)
    return value / (8.0 * math.pi ** 2 * geom.L ** 2)


def wightman_analytic_array(geom: AdsGeometry, bc, delta_t: np.ndarray, rho: float) -> np.ndarray:
    """Vectorised :func:`wightman_analytic` over (complex) coordinate time differences."""
    eps = BoundaryCondition.parse(bc).epsilon
    s0 = sigma0(np.asarray(delta_t, dtype=complex), rho)
    value = -1.0 / s0
    if eps:
        value = value + eps / (2.0 - s0)
    return value / (8.0 * math.pi ** 2 * geom.L ** 2)


# Event families: location sign*rho + k*pi (mod 2pi), weight a + b*eps.
_FAMILIES = ((+1, 0, 1, 0), (-1, 1, 0, 1), (+1, 1, 0, -1), (-1, 2, -1, 0))


def commutator_events(geom: AdsGeometry, bc, rho: float,
                      window: tuple[float, float]) -> list[tuple[float, float]]:
    """Light-cone support of the commutator between the centre and radius rho.

    Returns ``(dt, w)`` pairs, sorted by ``dt`` and restricted to
    ``window[0] <= dt <= window[1]``, such that

        [Phi(t, x_rho), Phi(t', 0)] = i * sum_k w_k delta(t - t' - dt_k).

    Locations are rho + 2N pi, -rho + (2N+1) pi, rho + (2N+1) pi and
    -rho + (2N+2) pi for every integer N, weighted by
    -(1, eps, -eps, -1) / (4 pi L^2 tan rho). Zero-weight events (eps = 0)
    are dropped.
    """
    if not 0.0 < rho < math.pi / 2:
        raise DomainError(f"commutator events need 0 < rho < pi/2, got {rho!r}")
    lo, hi = window
    eps = BoundaryCondition.parse(bc).epsilon
    scale = -1.0 / (4.0 * math.pi * geom.L ** 2 * math.tan(rho))
    events = []
    if hi < lo:
        return events
    for sign, k, a, b in _FAMILIES:
        weight = a + b * eps
        if weight == 0:
            continue
        base = sign * rho + k * math.pi
        n_lo = math.ceil((lo - base) / (2.0 * math.pi))
        n_hi = math.floor((hi - base) / (2.0 * math.pi))
        for big_n in range(n_lo, n_hi + 1):
            events.append((base + 2.0 * math.pi * big_n, weight * scale))
    events.sort()
    return events


def spectrum(bc, l: int, omega_max: int) -> list[int]:
    """Sorted list of frequencies <= omega_max for angular momentum l."""
    out = []
    n = 0
    while True:
        w = omega_of(bc, n, l)
        if w > omega_max:
            return out
        out.append(w)
        n += 1


def iter_bcs() -> Iterable[BoundaryCondition]:
    return iter(BoundaryCondition)
