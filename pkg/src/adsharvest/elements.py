"""Second-order density-matrix ingredients for two detectors in AdS4.

Everything here is returned in units of lambda_A * lambda_B. Detector A sits
at the centre of AdS. Detector B is either on a circular geodesic of radius
rho_B (``geodesic``) or held at fixed rho_B on the z axis (``static``).

Time centres follow t_{0A} = -t0/2, t_{0B} = +t0/2 in coordinate time, with
tau0 = L * t0 the delay measured by a clock at the centre. Positive tau0
means A switches on first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .adsmodes import (AdsGeometry, BoundaryCondition, Motion, mode_table,
                       proper_to_coord, radial_modes, redshift_dtau_dt)
from .specfun import DomainError
from .switching import DetectorConfig, TildeFrame, chi_hat, to_tilde

SQRT_PI = math.sqrt(math.pi)


class TruncationNotConverged(RuntimeError):
    """A series hit its hard cap before the stopping rule was satisfied."""


@dataclass(frozen=True)
class Truncation:
    tol: float = 1e-10
    n_max: int = 512
    l_max: int = 256
    image_n_max: int = 64
    consecutive_below: int = 3

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise ValueError(f"tol must lie in (0, 1), got {self.tol!r}")
        for name in ("n_max", "l_max", "image_n_max", "consecutive_below"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def doubled(self) -> "Truncation":
        return replace(self, n_max=2 * self.n_max, l_max=2 * self.l_max,
                       image_n_max=2 * self.image_n_max)


@dataclass(frozen=True)
class SumReport:
    terms: int
    last_term: float


@dataclass(frozen=True)
class Scenario:
    geom: AdsGeometry
    bc: BoundaryCondition
    det_a: DetectorConfig
    det_b: DetectorConfig
    kind: Motion

    def __post_init__(self):
        object.__setattr__(self, "bc", BoundaryCondition.parse(self.bc))
        object.__setattr__(self, "kind", Motion(self.kind))
        if self.det_a.rho != 0.0:
            raise ValueError("detector A must sit at the centre (rho = 0)")

    @classmethod
    def build(cls, kind, bc, L: float, gap: float, delta_x: float, tau0: float = 0.0,
              sigma: float = 1.0, coupling: float = 0.01) -> "Scenario":
        """Two identical detectors, B at proper distance ``delta_x`` from A."""
        geom = AdsGeometry(L)
        kind = Motion(kind)
        rho_b = proper_to_coord(geom, delta_x)
        t0 = tau0 / L
        det_a = DetectorConfig(gap, sigma, -0.5 * L * t0, coupling, 0.0, kind)
        z_b = redshift_dtau_dt(geom, kind, rho_b)
        det_b = DetectorConfig(gap, sigma, 0.5 * z_b * t0, coupling, rho_b, kind)
        return cls(geom, BoundaryCondition.parse(bc), det_a, det_b, kind)

    @property
    def rho_b(self) -> float:
        return self.det_b.rho

    @property
    def frame_a(self) -> TildeFrame:
        return to_tilde(self.det_a, self.geom)

    @property
    def frame_b(self) -> TildeFrame:
        return to_tilde(self.det_b, self.geom)

    @property
    def t0(self) -> float:
        """Coordinate-time delay t_{0B} - t_{0A}."""
        return self.frame_b.center_t0 - self.frame_a.center_t0

    @property
    def tau0(self) -> float:
        return self.geom.L * self.t0

    def detector(self, which: str) -> DetectorConfig:
        return {"A": self.det_a, "B": self.det_b}[which]


@dataclass
class ElementSet:
    l_aa: float
    l_bb: float
    l_ab: complex
    m: complex
    m_plus: complex
    m_minus: complex
    c_ab: complex
    c_ba: complex
    truncation_report: dict = field(default_factory=dict)
    flags: tuple = ()


# ---------------------------------------------------------------- truncation


def _first_stop(terms: np.ndarray, order: np.ndarray, peak: float, tol: float, k: int):
    """Index after which a series may be cut, or None.

    Scans along axis 0. A stop is allowed at the first index where ``k``
    successive terms each fall below ``tol * |running sum|`` and the
    ordering variable is already past the peak of the envelope.
    """
    partial = np.cumsum(terms, axis=0)
    small = (np.abs(terms) <= tol * np.abs(partial)) & (order >= peak)
    run = np.cumsum(small, axis=0, dtype=np.int64)
    lagged = np.zeros_like(run)
    lagged[k:] = run[:-k]
    hit = (run - lagged) >= k
    idx = np.argmax(hit, axis=0)
    found = hit.max(axis=0) if hit.size else np.zeros(terms.shape[1:], dtype=bool)
    return idx, found


def _mode_sum(term_fn, n_max: int, trunc: Truncation, peak_omega: float, name: str, report: dict):
    """Sum ``term_fn(n_try) -> (omegas, terms)`` with chunked doubling up to ``n_max``."""
    n_try = min(64, n_max)
    while True:
        omegas, terms = term_fn(n_try)
        idx, found = _first_stop(terms, omegas, peak_omega, trunc.tol, trunc.consecutive_below)
        if found:
            stop = int(idx) + 1
            report[name] = SumReport(stop, float(abs(terms[stop - 1])))
            return complex(terms[:stop].sum())
        if n_try >= n_max:
            raise TruncationNotConverged(
                f"{name}: no convergence within n_max={n_max} (last |term| = "
                f"{abs(terms[-1]):.3e})")
        n_try = min(2 * n_try, n_max)


def _gauss_peak(pairs) -> float:
    """Frequency maximising prod exp(-s^2 (w/z + gap)^2 / 2) over (s, z, gap) pairs."""
    num = sum(s * s * gap / z for s, z, gap in pairs)
    den = sum(s * s / (z * z) for s, z, gap in pairs)
    return -num / den


# ------------------------------------------------------------- local and L_IJ


def _l0_modes(scen: Scenario, rho: float, n: int):
    return radial_modes(scen.geom, scen.bc, rho, n, 0)


def l_ij(scen: Scenario, first: str, second: str, trunc: Truncation = Truncation(),
         gap_first: float | None = None, gap_second: float | None = None,
         report: dict | None = None) -> complex:
    """L_IJ = sum (pi/w) phi(x_I) phi(x_J) chi_I^(w/z_I + Omega_I) conj(chi_J^(w/z_J + Omega_J)).

    Only l = 0 modes enter, so at least one detector must be at the centre
    (or the pair must be geodesic, where every circular orbit is equivalent
    to the centre for the local term). ``gap_*`` override the proper gaps,
    which is how the M+ identity is evaluated at (Omega, -Omega).
    """
    report = {} if report is None else report
    det_i = scen.detector(first)
    det_j = scen.detector(second)
    if gap_first is not None:
        det_i = det_i.with_gap(gap_first)
    if gap_second is not None:
        det_j = det_j.with_gap(gap_second)
    z_i = redshift_dtau_dt(scen.geom, scen.kind, det_i.rho)
    z_j = redshift_dtau_dt(scen.geom, scen.kind, det_j.rho)
    if first == second:
        rho_i = rho_j = 0.0
        if scen.kind is Motion.STATIC and det_i.rho > 0:
            raise ValueError("static local term away from the centre needs l_local_static")
    else:
        rho_i, rho_j = det_i.rho, det_j.rho

    def terms(n):
        omega, phi_i = _l0_modes(scen, rho_i, n)
        phi_j = phi_i if rho_j == rho_i else _l0_modes(scen, rho_j, n)[1]
        w = omega.astype(float)
        t = (math.pi / w) * phi_i * phi_j * chi_hat(det_i, w / z_i + det_i.gap_omega) \
            * np.conj(chi_hat(det_j, w / z_j + det_j.gap_omega))
        return w, t

    peak = _gauss_peak([(det_i.width_sigma, z_i, det_i.gap_omega),
                        (det_j.width_sigma, z_j, det_j.gap_omega)])
    return _mode_sum(terms, trunc.n_max, trunc, peak, f"L_{first}{second}", report)


def l_local_geodesic(scen: Scenario, trunc: Truncation = Truncation(), which: str = "A",
                     report: dict | None = None) -> float:
    """sigma^2 sum_n (pi/w_n) phi_n(0)^2 exp(-(w_n/L + Omega)^2 sigma^2)."""
    report = {} if report is None else report
    det = scen.detector(which)
    L = scen.geom.L
    s = det.width_sigma

    def terms(n):
        omega, phi = _l0_modes(scen, 0.0, n)
        w = omega.astype(float)
        return w, (math.pi / w) * phi ** 2 * s * s * np.exp(-((w / L + det.gap_omega) * s) ** 2)

    peak = -det.gap_omega * L
    return _mode_sum(terms, trunc.n_max, trunc, peak, f"L_{which}{which}", report).real


def l_ab_geodesic(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    _require(scen, Motion.GEODESIC)
    _require_equal(scen)
    return l_ij(scen, "A", "B", trunc, report=report)


def m_plus_geodesic(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    """-sigma^2 sum_n (pi/w) phi_n(x_B) phi_n(0) cos(w tau0/L) exp(-(Omega^2 + w^2/L^2) sigma^2)."""
    _require(scen, Motion.GEODESIC)
    _require_equal(scen)
    report = {} if report is None else report
    L = scen.geom.L
    s = scen.det_a.width_sigma
    gap = scen.det_a.gap_omega
    tau0 = scen.tau0

    def terms(n):
        omega, phi_a = _l0_modes(scen, 0.0, n)
        phi_b = _l0_modes(scen, scen.rho_b, n)[1]
        w = omega.astype(float)
        return w, -(math.pi / w) * phi_a * phi_b * s * s * np.cos(w * tau0 / L) \
            * np.exp(-(gap ** 2 + (w / L) ** 2) * s * s)

    return complex(_mode_sum(terms, trunc.n_max, trunc, 0.0, "M+", report).real, 0.0)


def m_plus_via_lbaab(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    """M+ = -1/2 [L_AB(Omega_A, -Omega_B) + L_BA(Omega_B, -Omega_A)]."""
    report = {} if report is None else report
    ga, gb = scen.det_a.gap_omega, scen.det_b.gap_omega
    l_ab = l_ij(scen, "A", "B", trunc, ga, -gb, report)
    l_ba = l_ij(scen, "B", "A", trunc, gb, -ga, report)
    return -0.5 * (l_ab + l_ba)


# ----------------------------------------------------------------- image sums


def _image_terms(scen: Scenario, trunc: Truncation, envelope_fn, name: str, report: dict):
    """Image indices M, offsets D = rho + M pi and weights sgn(M+1/2) (-eps)^(M mod 2).

    ``envelope_fn(D)`` bounds each term's magnitude; images are kept when
    their envelope exceeds ``tol`` times the largest envelope.
    """
    eps = scen.bc.epsilon
    cap = trunc.image_n_max
    big_m = np.arange(-cap, cap + 1)
    d = scen.rho_b + big_m * math.pi
    weight = np.where(big_m >= 0, 1.0, -1.0)
    odd = (big_m % 2) == 1
    weight = np.where(odd, weight * (-eps), weight)
    env = envelope_fn(d)
    env_max = env.max()
    if env_max == 0.0:
        report[name] = SumReport(0, 0.0)
        return big_m[:0], d[:0], weight[:0]
    keep = (env >= trunc.tol * env_max) & (weight != 0)
    if env[0] >= trunc.tol * env_max or env[-1] >= trunc.tol * env_max:
        raise TruncationNotConverged(f"{name}: image sum not converged at |N| = {cap}")
    report[name] = SumReport(int(keep.sum()), float(env[keep].min() / env_max) if keep.any() else 0.0)
    return big_m[keep], d[keep], weight[keep]


def _check_separated(scen: Scenario) -> None:
    if not scen.rho_b > 0:
        raise DomainError("commutator terms are singular for coincident detectors (rho_B = 0)")


def m_minus_geodesic(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    """i sigma e^{-sigma^2 Omega^2} / (4 sqrt(pi) L tan rho) times the image sum

    sum_N sgn(N+1/2) (-eps)^{p(N)} exp(-((rho+N pi)^2 L^2 + tau0^2)/4 sigma^2)
        * cosh(2 (rho+N pi) L tau0 / 4 sigma^2).
    """
    _require(scen, Motion.GEODESIC)
    _require_equal(scen)
    _check_separated(scen)
    report = {} if report is None else report
    L = scen.geom.L
    s = scen.det_a.width_sigma
    gap = scen.det_a.gap_omega
    tau0 = scen.tau0
    four_s2 = 4.0 * s * s

    def env(d):
        return np.exp(-((np.abs(d) * L - abs(tau0)) ** 2) / four_s2)

    _, d, weight = _image_terms(scen, trunc, env, "M-", report)
    # exp(-(a^2 + b^2)/4s^2) cosh(2ab/4s^2) written without overflow
    images = 0.5 * (np.exp(-((d * L - tau0) ** 2) / four_s2) + np.exp(-((d * L + tau0) ** 2) / four_s2))
    total = float(np.sum(weight * images))
    prefactor = s * math.exp(-(s * gap) ** 2) / (4.0 * SQRT_PI * L * math.tan(scen.rho_b))
    return complex(0.0, prefactor * total)


def c_geodesic(scen: Scenario, trunc: Truncation = Truncation(), direction: str = "AB",
               report=None) -> complex:
    """Causality estimator C_AB (or C_BA, via tau0 -> -tau0).

    i sigma / (8 sqrt(pi) L tan rho) sum over light-cone events s > 0 of
    w_s (e^{-sigma^2 Omega^2} + e^{i Omega s L}) e^{-(s L + tau0)^2 / 4 sigma^2}.
    """
    _require(scen, Motion.GEODESIC)
    _require_equal(scen)
    _check_separated(scen)
    report = {} if report is None else report
    L = scen.geom.L
    s = scen.det_a.width_sigma
    gap = scen.det_a.gap_omega
    tau0 = scen.tau0 if direction == "AB" else -scen.tau0
    four_s2 = 4.0 * s * s

    def env(d):
        return np.exp(-((np.abs(d) * L + tau0) ** 2) / four_s2)

    _, d, weight = _image_terms(scen, trunc, env, f"C_{direction}", report)
    sl = np.abs(d) * L
    terms = weight * (math.exp(-(s * gap) ** 2) + np.exp(1j * gap * sl)) \
        * np.exp(-((sl + tau0) ** 2) / four_s2)
    prefactor = 1j * s / (8.0 * SQRT_PI * L * math.tan(scen.rho_b))
    return complex(prefactor * np.sum(terms))


# -------------------------------------------------------------------- static


def l_local_static(scen: Scenario, trunc: Truncation = Truncation(), which: str = "B",
                   report=None) -> float:
    """sigma^2 sum_{n,l} (pi/w) phi_{nl0}(x_I)^2 exp(-sigma^2 (Omega + w/(L sec rho_I))^2).

    The inner n sum of each l block is cut by the usual rule; the outer l sum
    stops once whole blocks fall below tolerance past the largest block.
    """
    report = {} if report is None else report
    det = scen.detector(which)
    if det.rho == 0.0:
        return l_local_geodesic(scen, trunc, which, report)
    z = redshift_dtau_dt(scen.geom, Motion.STATIC, det.rho)
    s = det.width_sigma
    gap = det.gap_omega
    peak = -gap * z
    tol, k = trunc.tol, trunc.consecutive_below
    n_try = min(64, trunc.n_max)
    l_try = min(32, trunc.l_max)
    name = f"L_{which}{which}"
    while True:
        omega, phi = mode_table(scen.geom, scen.bc, det.rho, n_try, l_try)
        w = omega.astype(float)
        t = (math.pi / w) * phi ** 2 * s * s * np.exp(-((gap + w / z) * s) ** 2)
        idx, found = _first_stop(t, w, peak, tol, k)
        mask = np.arange(n_try)[:, None] <= np.where(found, idx, n_try - 1)[None, :]
        blocks = np.where(mask, t, 0.0).sum(axis=0)
        ls = np.arange(l_try)
        l_peak = float(np.argmax(np.abs(blocks)))
        l_idx, l_found = _first_stop(blocks, ls, l_peak, tol, k)
        need_l = int(l_idx) + 1 if l_found else l_try
        if not found[:need_l].all():
            if n_try >= trunc.n_max:
                raise TruncationNotConverged(f"{name}: inner sum not converged within n_max={trunc.n_max}")
            n_try = min(2 * n_try, trunc.n_max)
            continue
        if not l_found:
            if l_try >= trunc.l_max:
                raise TruncationNotConverged(f"{name}: l sum not converged within l_max={trunc.l_max}")
            l_try = min(2 * l_try, trunc.l_max)
            continue
        report[name] = SumReport(int((idx[:need_l] + 1).sum()), float(abs(blocks[need_l - 1])))
        return float(blocks[:need_l].sum())


def l_ab_static(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    _require(scen, Motion.STATIC)
    return l_ij(scen, "A", "B", trunc, report=report)


def m_plus_static(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    """Static M+ for equal proper gaps and widths.

    -sigma^2 e^{-sigma^2 Omega^2 + i Omega tau0 (sec rho - 1)/2}
      * sum_n (pi/w) phi_n(x_B) phi_n(0) e^{-sigma^2 w^2 (1 + cos^2 rho)/2L^2}
      * cosh(sigma^2 Omega w (1 - cos rho)/L + i w tau0/L)
    """
    _require(scen, Motion.STATIC)
    _require_equal(scen)
    report = {} if report is None else report
    L = scen.geom.L
    s = scen.det_a.width_sigma
    gap = scen.det_a.gap_omega
    tau0 = scen.tau0
    c = math.cos(scen.rho_b)

    def terms(n):
        omega, phi_a = _l0_modes(scen, 0.0, n)
        phi_b = _l0_modes(scen, scen.rho_b, n)[1]
        w = omega.astype(float)
        g = s * s * w * w * (1.0 + c * c) / (2.0 * L * L)
        x = s * s * gap * w * (1.0 - c) / L + 1j * w * tau0 / L
        cosh_g = 0.5 * (np.exp(x - g) + np.exp(-x - g))
        return w, -(math.pi / w) * phi_a * phi_b * s * s * cosh_g

    total = _mode_sum(terms, trunc.n_max, trunc, 0.0, "M+", report)
    phase = -(s * gap) ** 2 + 0.5j * gap * tau0 * (1.0 / c - 1.0)
    return complex(np.exp(phase) * total)


def _frames(scen: Scenario):
    fa, fb = scen.frame_a, scen.frame_b
    return fa, fb


def m_minus_static(scen: Scenario, trunc: Truncation = Truncation(), report=None) -> complex:
    """Commutator part of M for arbitrary coordinate frames.

    With s_I, w_I the coordinate widths and gaps, S^2 = s_A^2 + s_B^2,
    s_AB^2 = s_A^2 s_B^2 / S^2, wbar = (w_A + w_B)/2 and D = rho + N pi:

      i z_A z_B / (8 pi L^2 tan rho) sqrt(2 pi) s_AB
        * exp(-2 wbar^2 s_AB^2 + i wbar t0 (s_A^2 - s_B^2)/S^2)
        * sum_N sgn(N+1/2) (-eps)^{p(N)} exp(-(D^2 + t0^2)/2S^2)
              * 2 cosh[(D/S^2)(t0 - i(w_A s_A^2 - w_B s_B^2))]

    where z_I = dtau_I/dt. For static detectors z_A z_B/(L^2 tan rho) = 1/sin rho.
    """
    _check_separated(scen)
    report = {} if report is None else report
    fa, fb = _frames(scen)
    L = scen.geom.L
    t0 = scen.t0
    sa2, sb2 = fa.width_tilde ** 2, fb.width_tilde ** 2
    big_s2 = sa2 + sb2
    s_ab = math.sqrt(sa2 * sb2 / big_s2)
    wbar = 0.5 * (fa.gap_tilde + fb.gap_tilde)
    b = (fa.gap_tilde * sa2 - fb.gap_tilde * sb2) / big_s2

    def env(d):
        return np.exp(-((np.abs(d) - abs(t0)) ** 2) / (2.0 * big_s2))

    _, d, weight = _image_terms(scen, trunc, env, "M-", report)
    images = np.exp(-((d - t0) ** 2) / (2.0 * big_s2) - 1j * b * d) \
        + np.exp(-((d + t0) ** 2) / (2.0 * big_s2) + 1j * b * d)
    total = np.sum(weight * images)
    prefactor = 1j * fa.dtau_dt * fb.dtau_dt / (8.0 * math.pi * L * L * math.tan(scen.rho_b)) \
        * math.sqrt(2.0 * math.pi) * s_ab
    common = np.exp(-2.0 * wbar ** 2 * s_ab ** 2 + 1j * wbar * t0 * (sa2 - sb2) / big_s2)
    return complex(prefactor * common * total)


def _overlap(z_i, t_i, s_i, w_i, t_j, s_j, k, shift):
    """Integral over t of f_I(t + shift) * g_J(t) for Gaussian coordinate profiles.

    f_I(t) = z_I exp(-(t - t_I)^2 / 2 s_I^2 + i w_I t); g_J carries width s_J,
    centre t_J and the jacobian; ``k`` is the total linear phase rate.
    """
    big_s2 = s_i * s_i + s_j * s_j
    s12 = s_i * s_j / math.sqrt(big_s2)
    c1 = t_i - shift
    cbar = (c1 * s_j * s_j + t_j * s_i * s_i) / big_s2
    return z_i * math.sqrt(2.0 * math.pi) * s12 * np.exp(
        -((c1 - t_j) ** 2) / (2.0 * big_s2) + 1j * w_i * shift + 1j * k * cbar - 0.5 * (k * s12) ** 2)


def c_static(scen: Scenario, trunc: Truncation = Truncation(), direction: str = "AB",
             report=None) -> complex:
    """Causality estimator for arbitrary coordinate frames.

    C_IJ = i/(4 pi L^2 tan rho) sum over events s > 0 of w_s * 1/2 [G_+(s) + G_-(s)],
    G_pm(s) = integral f_I(t + s) f_J^{(pm)}(t) dt, where f_J^{(-)} is the
    conjugate profile. Each G is a closed Gaussian product with one Gaussian in
    w_I + w_J and one in w_I - w_J.
    """
    _check_separated(scen)
    report = {} if report is None else report
    fa, fb = _frames(scen)
    fi, fj = (fa, fb) if direction == "AB" else (fb, fa)
    L = scen.geom.L
    big_s2 = fi.width_tilde ** 2 + fj.width_tilde ** 2
    lag = fi.center_t0 - fj.center_t0

    def env(d):
        return np.exp(-((np.abs(d) - lag) ** 2) / (2.0 * big_s2))

    _, d, weight = _image_terms(scen, trunc, env, f"C_{direction}", report)
    shift = np.abs(d)
    args = (fi.dtau_dt, fi.center_t0, fi.width_tilde, fi.gap_tilde, fj.center_t0, fj.width_tilde)
    g_plus = _overlap(*args, fi.gap_tilde + fj.gap_tilde, shift)
    g_minus = _overlap(*args, fi.gap_tilde - fj.gap_tilde, shift)
    total = np.sum(weight * 0.5 * (g_plus + g_minus)) * fj.dtau_dt
    return complex(1j * total / (4.0 * math.pi * L * L * math.tan(scen.rho_b)))


# ------------------------------------------------------------------- bundles


def _require(scen: Scenario, kind: Motion) -> None:
    if scen.kind is not kind:
        raise ValueError(f"expected a {kind.value} scenario, got {scen.kind.value}")


def _require_equal(scen: Scenario) -> None:
    a, b = scen.det_a, scen.det_b
    if a.gap_omega != b.gap_omega or a.width_sigma != b.width_sigma:
        raise ValueError("closed form assumes equal proper gaps and widths")


def element_set(scen: Scenario, trunc: Truncation = Truncation()) -> ElementSet:
    report: dict = {}
    flags = []
    if scen.kind is Motion.GEODESIC:
        l_aa = l_local_geodesic(scen, trunc, "A", report)
        l_bb = l_local_geodesic(scen, trunc, "B", report)
        l_ab = l_ab_geodesic(scen, trunc, report)
        m_plus = m_plus_geodesic(scen, trunc, report)
        minus_fn, c_fn = m_minus_geodesic, c_geodesic
    else:
        l_aa = l_local_static(scen, trunc, "A", report)
        l_bb = l_local_static(scen, trunc, "B", report)
        l_ab = l_ab_static(scen, trunc, report)
        m_plus = m_plus_static(scen, trunc, report)
        minus_fn, c_fn = m_minus_static, c_static
    if scen.rho_b > 0:
        m_minus = minus_fn(scen, trunc, report)
        c_ab = c_fn(scen, trunc, "AB", report)
        c_ba = c_fn(scen, trunc, "BA", report)
    else:
        # pointlike detectors on top of each other: the light-cone term diverges
        nan = complex(math.nan, math.nan)
        m_minus = c_ab = c_ba = nan
        flags.append("coincident")
    return ElementSet(l_aa=l_aa, l_bb=l_bb, l_ab=l_ab, m=m_plus + m_minus, m_plus=m_plus,
                      m_minus=m_minus, c_ab=c_ab, c_ba=c_ba, truncation_report=report,
                      flags=tuple(flags))
