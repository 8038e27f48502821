"""Gaussian switching functions and their coordinate-time ("tilde") frames."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .adsmodes import AdsGeometry, Motion, redshift_dtau_dt


@dataclass(frozen=True)
class DetectorConfig:
    """One pointlike detector.

    All proper quantities are in units of the reference width: ``gap_omega``
    in 1/sigma, ``width_sigma`` and ``center_tau0`` in sigma. ``rho`` is the
    global radial coordinate of the detector.
    """

    gap_omega: float
    width_sigma: float = 1.0
    center_tau0: float = 0.0
    coupling_lambda: float = 0.01
    rho: float = 0.0
    motion: Motion = Motion.GEODESIC

    def __post_init__(self):
        if not self.width_sigma > 0:
            raise ValueError(f"switching width must be positive, got {self.width_sigma!r}")
        if not 0.0 <= self.rho < math.pi / 2:
            raise ValueError(f"rho={self.rho!r} outside [0, pi/2)")
        object.__setattr__(self, "motion", Motion(self.motion))

    def with_gap(self, gap: float) -> "DetectorConfig":
        return replace(self, gap_omega=gap)


@dataclass(frozen=True)
class TildeFrame:
    """A detector's gap, width and centre re-expressed in coordinate time."""

    dtau_dt: float
    gap_tilde: float
    width_tilde: float
    center_t0: float


def chi(cfg: DetectorConfig, tau):
    """Gaussian switching exp(-(tau - tau0)^2 / 2 sigma^2)."""
    return np.exp(-((np.asarray(tau) - cfg.center_tau0) ** 2) / (2.0 * cfg.width_sigma ** 2))


def chi_hat(cfg: DetectorConfig, k):
    """Proper-time Fourier transform sigma exp(-k^2 sigma^2/2 + i k tau0).

    Convention: chi_hat(k) = (2 pi)^(-1/2) * integral chi(tau) exp(i k tau) dtau.
    """
    k = np.asarray(k, dtype=float)
    s = cfg.width_sigma
    return s * np.exp(-0.5 * (k * s) ** 2 + 1j * k * cfg.center_tau0)


def to_tilde(cfg: DetectorConfig, geom: AdsGeometry) -> TildeFrame:
    z = redshift_dtau_dt(geom, cfg.motion, cfg.rho)
    return TildeFrame(dtau_dt=z, gap_tilde=cfg.gap_omega * z,
                      width_tilde=cfg.width_sigma / z, center_t0=cfg.center_tau0 / z)


def coordinate_profile(frame: TildeFrame, t):
    """Coordinate switching function including the dtau/dt Jacobian."""
    t = np.asarray(t)
    return frame.dtau_dt * np.exp(-((t - frame.center_t0) ** 2) / (2.0 * frame.width_tilde ** 2))
