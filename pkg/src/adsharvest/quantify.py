"""Two-detector density matrix, negativity and mutual information at order lambda^2."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .elements import ElementSet
from .specfun import DomainError

PERTURBATIVE_LIMIT = 0.1
CAUCHY_SCHWARZ_SLACK = 1e-12


class PerturbativityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TwoDetectorState:
    """rho in the basis |gg>, |eg>, |ge>, |ee> (A listed first)."""

    rho: np.ndarray
    lambda_product: float

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.rho))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)


def density_matrix(es: ElementSet, lambda_a: float = 0.01, lambda_b: float = 0.01) -> TwoDetectorState:
    values = (es.l_aa, es.l_bb, es.l_ab, es.m)
    if not all(np.isfinite(complex(v)) for v in values):
        raise ValueError("density matrix needs finite elements")
    la2, lb2, lab = lambda_a ** 2, lambda_b ** 2, lambda_a * lambda_b
    if la2 * es.l_aa + lb2 * es.l_bb > PERTURBATIVE_LIMIT:
        warnings.warn("second-order truncation is unreliable at these couplings",
                      PerturbativityWarning, stacklevel=2)
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = la2 * es.l_aa
    rho[2, 2] = lb2 * es.l_bb
    rho[0, 0] = 1.0 - rho[1, 1] - rho[2, 2]
    rho[1, 2] = lab * es.l_ab
    rho[2, 1] = np.conj(rho[1, 2])
    rho[3, 0] = lab * es.m
    rho[0, 3] = np.conj(rho[3, 0])
    return TwoDetectorState(rho, lab)


def negativity2(es: ElementSet) -> float:
    """-(L_AA + L_BB - sqrt((L_AA - L_BB)^2 + 4|M|^2)) / 2, in units of lambda^2."""
    l_aa, l_bb = es.l_aa, es.l_bb
    if l_aa == l_bb:
        return abs(es.m) - l_aa
    return -0.5 * (l_aa + l_bb - math.sqrt((l_aa - l_bb) ** 2 + 4.0 * abs(es.m) ** 2))


def negativity(es: ElementSet) -> float:
    return max(negativity2(es), 0.0)


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def mutual_information(es: ElementSet) -> float:
    """L+ ln L+ + L- ln L- - L_AA ln L_AA - L_BB ln L_BB (natural log, 0 ln 0 = 0)."""
    l_aa, l_bb = es.l_aa, es.l_bb
    if l_aa < 0 or l_bb < 0:
        raise DomainError("local terms must be nonnegative")
    ab2 = abs(es.l_ab) ** 2
    if ab2 > l_aa * l_bb + CAUCHY_SCHWARZ_SLACK:
        raise DomainError("|L_AB|^2 exceeds L_AA L_BB: elements are inconsistent")
    if ab2 == 0.0:
        return 0.0
    root = math.sqrt((l_aa - l_bb) ** 2 + 4.0 * ab2)
    l_plus = 0.5 * (l_aa + l_bb + root)
    # product form avoids cancellation when |L_AB|^2 is close to L_AA L_BB
    l_minus = max((l_aa * l_bb - ab2) / l_plus, 0.0)
    return _xlogx(l_plus) + _xlogx(l_minus) - _xlogx(l_aa) - _xlogx(l_bb)
