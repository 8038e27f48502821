"""Brute-force reference values for the second-order elements.

This path deliberately avoids the closed forms in :mod:`adsharvest.elements`:

* mode values are rebuilt here from the plain Gegenbauer recurrence and
  log-factorials in :mod:`adsharvest.specfun`;
* every mode's time integral is done by trapezoid quadrature of the
  coordinate switching profile, on a grid fine enough to resolve the
  highest retained frequency (so the double integral over the (t, t')
  plane factorises into two quadratures per mode);
* mode sums use a fixed cut (n_max = 400, no adaptive stop);
* the commutator part of M is rebuilt event by event from
  :func:`adsharvest.adsmodes.commutator_events` with Gaussian products.

A second, weaker path integrates the closed-form Wightman function with an
i-epsilon shift and Richardson-extrapolates epsilon -> 0. With one point at
the centre, the embedding-space relation gives X = -1/sigma0 where
sigma0 = 1 - cos(dt) sec(rho); this dictionary reproduces the mode sum to
round-off for all three boundary conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import specfun
from .adsmodes import AdsGeometry, commutator_events, proper_to_coord, wightman_analytic_array
from .elements import Scenario

ORACLE_N_MAX = 400
ORACLE_L_MAX = 64
PINS_PATH = Path(__file__).with_name("data") / "pins.txt"


@dataclass(frozen=True)
class QuadratureSpec:
    half_width: float = 8.0          # in units of the coordinate width
    points_per_axis: int = 801
    epsilon_reg: tuple = (1 / 50, 1 / 100, 1 / 200)   # in units of sigma

    def __post_init__(self):
        if self.points_per_axis % 2 == 0:
            raise ValueError("points_per_axis must be odd")
        if any(a <= b for a, b in zip(self.epsilon_reg, self.epsilon_reg[1:])):
            raise ValueError("epsilon_reg must be strictly decreasing")

    def finer(self) -> "QuadratureSpec":
        return QuadratureSpec(self.half_width, 2 * self.points_per_axis - 1, self.epsilon_reg)


class OracleNotConverged(RuntimeError):
    pass


# ------------------------------------------------------------------ modes


def oracle_mode(L: float, eps: int, omega: int, l: int, rho: float) -> float:
    """phi_{omega l 0}(rho, theta = 0) straight from the defining formula."""
    x = math.cos(rho)
    if l > 0 and rho == 0.0:
        return 0.0
    lf = specfun.log_factorial
    log_n = (l * math.log(2.0) + lf(l) - math.log(L)
             + 0.5 * (math.log(2.0 * omega / math.pi) + lf(omega - l - 1) - lf(omega + l)))
    c = specfun.gegenbauer_sequence(omega - l - 1, l + 1.0, x)[-1]
    radial = x * math.sin(rho) ** l * c
    weight = math.sqrt(2.0) if eps else 1.0
    return weight * math.exp(log_n) * radial * specfun.y_l0(l, 1.0)


def _mode_columns(L, eps, rho, n_max, l):
    """(omegas, phi) for n < n_max at fixed l, one recurrence pass."""
    step, offset = (1, 1) if eps == 0 else (2, 1 if eps == 1 else 2)
    omegas = l + offset + step * np.arange(n_max)
    if l > 0 and rho == 0.0:
        return omegas, np.zeros(n_max)
    x = math.cos(rho)
    lf = specfun.log_factorial
    c = specfun.gegenbauer_sequence(int(omegas[-1] - l - 1), l + 1.0, x)[omegas - l - 1]
    log_n = (l * math.log(2.0) + lf(l) - math.log(L)
             + 0.5 * (np.log(2.0 * omegas / math.pi) + lf(omegas - l - 1) - lf(omegas + l)))
    weight = math.sqrt(2.0) if eps else 1.0
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        phi = weight * np.exp(log_n) * x * math.sin(rho) ** l * c * specfun.y_l0(l, 1.0)
    return omegas, np.nan_to_num(phi, nan=0.0, posinf=0.0, neginf=0.0)


# --------------------------------------------------------- time integrals


def _profile(scen: Scenario, which: str):
    frame = scen.frame_a if which == "A" else scen.frame_b
    return frame


def _time_transform(frame, ks: np.ndarray, spec: QuadratureSpec) -> np.ndarray:
    """Q(k) = integral dt chi~(t) exp(i (w~ + k) t) by the trapezoid rule."""
    s = frame.width_tilde
    hw = spec.half_width * s
    k_top = float(np.max(np.abs(ks))) + abs(frame.gap_tilde)
    h = min(2.0 * hw / (spec.points_per_axis - 1), 2.0 * math.pi / (k_top + 12.0 / s))
    n = int(math.ceil(hw / h))
    t = frame.center_t0 + h * np.arange(-n, n + 1)
    prof = frame.dtau_dt * np.exp(-((t - frame.center_t0) ** 2) / (2.0 * s * s))
    out = np.empty(ks.size, dtype=complex)
    for i, k in enumerate(ks):
        out[i] = h * np.sum(prof * np.exp(1j * (frame.gap_tilde + k) * t))
    return out


def _l0_pair(scen: Scenario, rho_i, rho_j, n_max):
    L, eps = scen.geom.L, scen.bc.epsilon
    omegas, phi_i = _mode_columns(L, eps, rho_i, n_max, 0)
    _, phi_j = _mode_columns(L, eps, rho_j, n_max, 0)
    return omegas, phi_i, phi_j


def l_ij_quadrature(scen: Scenario, spec: QuadratureSpec = QuadratureSpec(),
                    which_pair: str = "AB", n_max: int = ORACLE_N_MAX,
                    l_max: int = ORACLE_L_MAX) -> complex:
    """L_IJ from sum_modes (1/2w) phi_I phi_J Q_I(w) conj(Q_J(w))."""
    first, second = which_pair[0], which_pair[1]
    fi, fj = _profile(scen, first), _profile(scen, second)
    rho_i = scen.det_a.rho if first == "A" else scen.det_b.rho
    rho_j = scen.det_a.rho if second == "A" else scen.det_b.rho
    if first == second and scen.kind.value == "geodesic":
        rho_i = rho_j = 0.0
    l_top = l_max if (first == second and rho_i > 0) else 1
    total = 0.0 + 0.0j
    for l in range(l_top):
        omegas, phi_i = _mode_columns(scen.geom.L, scen.bc.epsilon, rho_i, n_max, l)
        phi_j = phi_i if rho_j == rho_i else _mode_columns(scen.geom.L, scen.bc.epsilon, rho_j, n_max, l)[1]
        w = omegas.astype(float)
        qi = _time_transform(fi, w, spec)
        qj = qi if fj is fi else _time_transform(fj, w, spec)
        total += np.sum(phi_i * phi_j * qi * np.conj(qj) / (2.0 * w))
    return complex(total)


def _gauss_product(c1, s1, c2, s2, k):
    """Integral of exp(-(t-c1)^2/2s1^2 - (t-c2)^2/2s2^2 + i k t) over the real line."""
    v = s1 * s1 + s2 * s2
    s12sq = s1 * s1 * s2 * s2 / v
    mean = (c1 * s2 * s2 + c2 * s1 * s1) / v
    return math.sqrt(2.0 * math.pi * s12sq) * np.exp(-((c1 - c2) ** 2) / (2.0 * v)
                                                    + 1j * k * mean - 0.5 * k * k * s12sq)


def m_plus_quadrature(scen: Scenario, spec: QuadratureSpec = QuadratureSpec(),
                      n_max: int = ORACLE_N_MAX) -> complex:
    """-1/2 of the full-plane integral of f_B(t) f_A(t') [W(B t; A t') + W(A t'; B t)]."""
    fa, fb = scen.frame_a, scen.frame_b
    omegas, phi_a, phi_b = _l0_pair(scen, 0.0, scen.rho_b, n_max)
    w = omegas.astype(float)
    both = np.concatenate([w, -w])
    qa = _time_transform(fa, both, spec)
    qb = _time_transform(fb, both, spec)
    n = w.size
    pair = qb[n:] * qa[:n] + qb[:n] * qa[n:]
    return complex(-0.5 * np.sum(phi_a * phi_b * pair / (2.0 * w)))


def m_minus_events(scen: Scenario, reach: float = 40.0) -> complex:
    """-(i/2) sum over events s > 0 of c_s [int f_B(t+s) f_A(t) + int f_A(t+s) f_B(t)]."""
    fa, fb = scen.frame_a, scen.frame_b
    span = abs(scen.t0) + reach * max(fa.width_tilde, fb.width_tilde)
    total = 0.0 + 0.0j
    for s, c in commutator_events(scen.geom, scen.bc, scen.rho_b, (1e-300, span)):
        total += c * _shifted_overlap(fb, fa, s)
        total += c * _shifted_overlap(fa, fb, s)
    return complex(-0.5j * total)


def _shifted_overlap(later, earlier, s):
    """Integral of f_later(t + s) f_earlier(t) dt with f = chi~ exp(i w~ t)."""
    amp = later.dtau_dt * earlier.dtau_dt * np.exp(1j * later.gap_tilde * s)
    return amp * _gauss_product(later.center_t0 - s, later.width_tilde,
                                earlier.center_t0, earlier.width_tilde,
                                later.gap_tilde + earlier.gap_tilde)


def causality_events(scen: Scenario, direction: str = "AB", reach: float = 40.0) -> complex:
    """C_IJ = -i sum_{s>0} c_s int f_I(t+s) Re f_J(t) dt, rebuilt from events."""
    fa, fb = scen.frame_a, scen.frame_b
    fi, fj = (fa, fb) if direction == "AB" else (fb, fa)
    span = abs(scen.t0) + reach * max(fa.width_tilde, fb.width_tilde)
    total = 0.0 + 0.0j
    for s, c in commutator_events(scen.geom, scen.bc, scen.rho_b, (1e-300, span)):
        amp = fi.dtau_dt * fj.dtau_dt * np.exp(1j * fi.gap_tilde * s)
        for sign in (1.0, -1.0):
            total += 0.5 * c * amp * _gauss_product(fi.center_t0 - s, fi.width_tilde, fj.center_t0,
                                                    fj.width_tilde, fi.gap_tilde + sign * fj.gap_tilde)
    return complex(-1j * total)


def m_quadrature(scen: Scenario, spec: QuadratureSpec = QuadratureSpec(),
                 n_max: int = ORACLE_N_MAX) -> complex:
    m_plus = m_plus_quadrature(scen, spec, n_max)
    m_minus = m_minus_events(scen) if scen.rho_b > 0 else complex(math.nan, math.nan)
    return m_plus + m_minus


def converged(fn, scen: Scenario, spec: QuadratureSpec = QuadratureSpec(), tol: float = 1e-4, **kw):
    """Evaluate at ``spec`` and at doubled resolution; fail if they disagree."""
    a = fn(scen, spec, **kw)
    b = fn(scen, spec.finer(), **kw)
    if abs(a - b) > 10.0 * tol * max(abs(b), 1e-300):
        raise OracleNotConverged(f"resolution doubling moved the result by {abs(a - b) / abs(b):.2e}")
    return b


# ------------------------------------------------- analytic Wightman path


def l_local_analytic(scen: Scenario, spec: QuadratureSpec = QuadratureSpec(),
                     which: str = "A") -> complex:
    """L_II at the centre from the closed-form Wightman function.

    L = sqrt(pi) sigma * integral du exp(-i Omega u - u^2/4 sigma^2) W((u - i eps)/L),
    evaluated at each regulator in ``spec.epsilon_reg`` and extrapolated to
    eps = 0 with a quadratic Richardson step.
    """
    det = scen.detector(which)
    s = det.width_sigma
    L = scen.geom.L
    reach = spec.half_width * s * 1.5
    values = []
    for e in spec.epsilon_reg:
        e = e * s
        h = e / 8.0
        u = h * np.arange(-int(reach / h), int(reach / h) + 1)
        w = wightman_analytic_array(scen.geom, scen.bc, (u - 1j * e) / L, 0.0)
        values.append(math.sqrt(math.pi) * s * h * np.sum(
            np.exp(-1j * det.gap_omega * u - u * u / (4.0 * s * s)) * w))
    xs = np.array([e * s for e in spec.epsilon_reg])
    coeffs = np.polyfit(xs, np.array(values), len(xs) - 1)
    return complex(coeffs[-1])


# -------------------------------------------------------------- pin file


def fingerprint(quantity: str, scen: Scenario) -> str:
    a, b = scen.det_a, scen.det_b
    return (f"{quantity}|{scen.kind.value}|eps={scen.bc.epsilon:+d}|L={scen.geom.L:.12g}"
            f"|gap={a.gap_omega:.12g}|sigma={a.width_sigma:.12g}|rho={b.rho:.12g}"
            f"|tau0={scen.tau0:.12g}")


def pinned_scenarios():
    """The fixed sample points whose oracle values are frozen."""
    build = Scenario.build
    pts = []
    for eps in (-1, 0, 1):
        pts.append(("L_AA", build("geodesic", eps, 1.0, 2.0, 0.0)))
        pts.append(("L_BB", build("static", eps, 1.0, 2.0, 2.0)))
    for tau0 in (0.0, 2.0):
        pts.append(("M", build("geodesic", -1, 5.0, 3.0, 2.0, tau0)))
        pts.append(("M", build("static", -1, 1.0, 2.0, 2.0, tau0)))
    pts.append(("L_AB", build("geodesic", -1, 5.0, 3.0, 2.0)))
    pts.append(("L_AB", build("static", -1, 5.0, 3.0, 2.0, 1.0)))
    pts.append(("M+", build("geodesic", -1, 5.0, 3.0, 2.0)))
    pts.append(("M+", build("static", 1, 1.0, 2.0, 2.0)))
    pts.append(("M-", build("static", -1, 1.0, 2.0, 2.0, 2.0)))
    rho = proper_to_coord(AdsGeometry(5.0), 2.0)
    pts.append(("M-", build("geodesic", -1, 5.0, 3.0, 2.0, rho * 5.0)))
    pts.append(("C_AB", build("static", -1, 1.0, 2.0, 2.0, 1.0)))
    pts.append(("C_AB", build("geodesic", -1, 5.0, 3.0, 2.0, -2.0)))
    return pts


def oracle_value(quantity: str, scen: Scenario, spec: QuadratureSpec = QuadratureSpec()) -> complex:
    if quantity in ("L_AA", "L_BB", "L_AB"):
        return l_ij_quadrature(scen, spec, quantity[2:])
    if quantity == "M":
        return m_quadrature(scen, spec)
    if quantity == "M+":
        return m_plus_quadrature(scen, spec)
    if quantity == "M-":
        return m_minus_events(scen)
    if quantity in ("C_AB", "C_BA"):
        return causality_events(scen, quantity[2:])
    raise KeyError(quantity)


def write_pins(path: Path = PINS_PATH, spec: QuadratureSpec = QuadratureSpec()) -> dict:
    pins = {fingerprint(q, sc): oracle_value(q, sc, spec) for q, sc in pinned_scenarios()}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# oracle reference values: fingerprint  real  imag"]
    lines += [f"{key}  {val.real:.17e}  {val.imag:.17e}" for key, val in pins.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return pins


def read_pins(path: Path = PINS_PATH) -> dict:
    pins = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, re_part, im_part = line.split()
        pins[key] = complex(float(re_part), float(im_part))
    return pins
