"""Command line: single-point evaluation, parameter sweeps to CSV, and self-checks.

Config files are INI-style with four sections::

    [scenario]
    kind = geodesic          ; geodesic | static
    bc = dirichlet           ; dirichlet | transparent | neumann | -1 | 0 | 1
    L = 5                    ; AdS length, units of sigma
    gap = 3                  ; proper gap Omega, units of 1/sigma
    delta_x = 2              ; proper separation, units of sigma
    tau0 = 0                 ; switching delay, units of sigma
    lambda = 0.01

    [sweep]
    axis1 = delta_x 0.5 6 41 ; name min max count
    axis2 = gap 0 5 41       ; optional

    [truncation]             ; optional overrides
    tol = 1e-10
    n_max = 512
    l_max = 256
    image_n_max = 64
    consecutive_below = 3

    [output]
    path = out.csv
    workers = 4

Sweep axes may be any of gap, delta_x, L, tau0. Rows are written in
row-major order over (axis1, axis2), independent of the worker count.
"""

from __future__ import annotations

import argparse
import configparser
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import elements, oracle, quantify
from .adsmodes import BoundaryCondition, Motion, omega_of
from .elements import Scenario, Truncation, TruncationNotConverged

AXES = ("gap", "delta_x", "L", "tau0")
SCENARIO_KEYS = {"kind", "bc", "l", "gap", "delta_x", "tau0", "lambda", "sigma"}
SECTIONS = {
    "scenario": SCENARIO_KEYS,
    "sweep": {"axis1", "axis2", "axis3"},  # axis3 reaches validation, which reports the axis count
    "truncation": {"tol", "n_max", "l_max", "image_n_max", "consecutive_below"},
    "output": {"path", "workers"},
}
COLUMNS = ("L_AA", "L_BB", "Re_L_AB", "Im_L_AB", "Re_M_plus", "Im_M_plus", "Re_M_minus",
           "Im_M_minus", "Re_M", "Im_M", "N2", "negativity", "mutual_info", "abs_C_AB",
           "abs_C_BA", "N2_minus_Cab", "flags")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class SweepSpec:
    kind: Motion
    bc: BoundaryCondition
    fixed: dict
    axes: tuple
    truncation: Truncation = Truncation()
    output: str | None = None
    workers: int = 1
    coupling: float = 0.01

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError(f"a sweep needs one or two axes, got {len(self.axes)}")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("sweep axes must be distinct")
        for ax in self.axes:
            if ax.name not in AXES:
                raise ConfigError(f"unknown axis {ax.name!r}; choose from {', '.join(AXES)}")
            if ax.count < 2:
                raise ConfigError(f"axis {ax.name}: count must be at least 2")
            if ax.name == "L" and min(ax.lo, ax.hi) <= 0:
                raise ConfigError("axis L: values must be positive")
            if ax.name == "delta_x" and min(ax.lo, ax.hi) < 0:
                raise ConfigError("axis delta_x: values must be nonnegative")
        if self.fixed["L"] <= 0:
            raise ConfigError("L must be positive")
        if self.fixed["delta_x"] < 0:
            raise ConfigError("delta_x must be nonnegative")
        if self.fixed["sigma"] <= 0:
            raise ConfigError("sigma must be positive")

    def grid(self):
        """Parameter dicts in row-major order over the axes."""
        if len(self.axes) == 1:
            combos = [(v,) for v in self.axes[0].values()]
        else:
            combos = [(u, v) for u in self.axes[0].values() for v in self.axes[1].values()]
        for combo in combos:
            params = dict(self.fixed)
            for ax, v in zip(self.axes, combo):
                params[ax.name] = float(v)
            yield combo, params

    def fingerprint(self) -> str:
        axes = "; ".join(f"{a.name}={a.lo:g}..{a.hi:g}x{a.count}" for a in self.axes)
        fixed = ", ".join(f"{k}={v:g}" for k, v in sorted(self.fixed.items()))
        trunc = ", ".join(f"{k}={v}" for k, v in asdict(self.truncation).items())
        return (f"kind={self.kind.value} eps={self.bc.epsilon:+d} | {fixed} | axes: {axes}"
                f" | truncation: {trunc}")


def _parse_axis(text: str, key: str) -> Axis:
    parts = text.split()
    if len(parts) != 4:
        raise ConfigError(f"[sweep] {key}: expected 'name min max count', got {text!r}")
    name, lo, hi, count = parts
    try:
        return Axis(name, float(lo), float(hi), int(count))
    except ValueError as exc:
        raise ConfigError(f"[sweep] {key}: {exc}") from None


def parse_config(text: str) -> SweepSpec:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    for section in cp.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp[section]:
            if key not in SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
    if "scenario" not in cp or "sweep" not in cp:
        raise ConfigError("config needs [scenario] and [sweep] sections")
    sc = cp["scenario"]

    def num(key, default=None):
        if key not in sc:
            if default is None:
                raise ConfigError(f"[scenario] missing {key}")
            return default
        try:
            return float(sc[key])
        except ValueError:
            raise ConfigError(f"[scenario] {key}: not a number: {sc[key]!r}") from None

    try:
        kind = Motion(sc.get("kind", "geodesic").strip().lower())
        bc = BoundaryCondition.parse(sc.get("bc", "dirichlet"))
    except ValueError as exc:
        raise ConfigError(f"[scenario] {exc}") from None
    axes = tuple(_parse_axis(cp["sweep"][k], k) for k in ("axis1", "axis2", "axis3")
                 if k in cp["sweep"])
    # a swept quantity need not be given a fixed value
    swept = {ax.name: ax.lo for ax in axes}
    fixed = {"L": num("l", swept.get("L")), "gap": num("gap", swept.get("gap")),
             "delta_x": num("delta_x", swept.get("delta_x", 0.0)),
             "tau0": num("tau0", swept.get("tau0", 0.0)), "sigma": num("sigma", 1.0)}
    coupling = num("lambda", 0.01)
    trunc_kw = {}
    if "truncation" in cp:
        for key, raw in cp["truncation"].items():
            try:
                trunc_kw[key] = float(raw) if key == "tol" else int(raw)
            except ValueError:
                raise ConfigError(f"[truncation] {key}: bad value {raw!r}") from None
    try:
        trunc = Truncation(**trunc_kw)
    except ValueError as exc:
        raise ConfigError(f"[truncation] {exc}") from None
    out = cp["output"] if "output" in cp else {}
    workers = int(out.get("workers", 1))
    return SweepSpec(kind, bc, fixed, axes, trunc, out.get("path"), workers, coupling)


# ------------------------------------------------------------------ sweeps


def _fmt(x: float) -> str:
    return format(float(x), ".10e")


def evaluate_point(kind, bc, params: dict, trunc: Truncation, coupling: float = 0.01) -> list:
    """One CSV row (without axis values) for a parameter dict."""
    flags = []
    try:
        scen = Scenario.build(kind, bc, params["L"], params["gap"], params["delta_x"],
                              params["tau0"], params["sigma"], coupling)
        es = elements.element_set(scen, trunc)
        flags.extend(es.flags)
    except (TruncationNotConverged, OverflowError, ValueError) as exc:
        tag = type(exc).__name__
        return [_fmt(math.nan)] * (len(COLUMNS) - 1) + [tag]
    n2 = quantify.negativity2(es)
    try:
        mi = quantify.mutual_information(es)
    except ValueError:
        mi = math.nan
        flags.append("cauchy_schwarz")
    c_ab, c_ba = abs(es.c_ab), abs(es.c_ba)
    row = [es.l_aa, es.l_bb, es.l_ab.real, es.l_ab.imag, es.m_plus.real, es.m_plus.imag,
           es.m_minus.real, es.m_minus.imag, es.m.real, es.m.imag, n2, max(n2, 0.0), mi,
           c_ab, c_ba, n2 - c_ab]
    return [_fmt(v) for v in row] + ["|".join(flags) or "ok"]


def _evaluate_task(task):
    kind, bc, params, trunc, coupling = task
    return evaluate_point(kind, bc, params, trunc, coupling)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> str:
    """Evaluate the full grid and return the CSV text."""
    workers = spec.workers if workers is None else workers
    grid = list(spec.grid())
    tasks = [(spec.kind, spec.bc, params, spec.truncation, spec.coupling) for _, params in grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        rows = [_evaluate_task(t) for t in tasks]
    buf = io.StringIO()
    buf.write(f"# {spec.fingerprint()}\n")
    buf.write(f"# lambda_A = lambda_B = {spec.coupling:g}; element columns in units of lambda^2;"
              " mutual_info uses the natural log\n")
    buf.write(",".join([ax.name for ax in spec.axes] + list(COLUMNS)) + "\n")
    for (combo, _), row in zip(grid, rows):
        buf.write(",".join([_fmt(v) for v in combo] + row) + "\n")
    return buf.getvalue()


def read_csv(path_or_text) -> tuple[list, np.ndarray, list]:
    """Parse a sweep CSV into (header, numeric array, flags)."""
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else path_or_text
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    body = [ln.split(",") for ln in lines[1:]]
    data = np.array([[float(x) for x in r[:-1]] for r in body])
    return header, data, [r[-1] for r in body]


# ------------------------------------------------------------------ checks


@dataclass
class GateResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CheckReport:
    gates: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.gates)

    def text(self) -> str:
        return "\n".join(f"{'PASS' if g.passed else 'FAIL'}  {g.name}  {g.detail}" for g in self.gates)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _element_value(quantity: str, scen: Scenario) -> complex:
    es = elements.element_set(scen)
    return {"L_AA": es.l_aa, "L_BB": es.l_bb, "L_AB": es.l_ab, "M": es.m, "M+": es.m_plus,
            "M-": es.m_minus, "C_AB": es.c_ab, "C_BA": es.c_ba}[quantity]


def gate_pins(pins_path: Path, regen: bool = False) -> GateResult:
    pins_path = Path(pins_path)
    if regen or not pins_path.exists():
        oracle.write_pins(pins_path)
    pins = oracle.read_pins(pins_path)
    worst, missing = 0.0, 0
    for quantity, scen in oracle.pinned_scenarios():
        key = oracle.fingerprint(quantity, scen)
        if key not in pins:
            missing += 1
            continue
        worst = max(worst, _rel(_element_value(quantity, scen), pins[key]))
    ok = missing == 0 and worst < 1e-3
    return GateResult("oracle pins", ok, f"worst rel = {worst:.2e}, missing = {missing}")


def _random_scenarios(kind: str, count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield Scenario.build(kind, int(rng.integers(-1, 2)), rng.uniform(0.5, 8.0),
                             rng.uniform(0.0, 4.0), rng.uniform(0.2, 4.0), rng.uniform(-4.0, 4.0))


def gate_lbaab(count: int = 20, seed: int = 7) -> GateResult:
    worst = 0.0
    for kind, direct in (("geodesic", "m_plus_geodesic"), ("static", "m_plus_static")):
        for scen in _random_scenarios(kind, count, seed):
            a = getattr(elements, direct)(scen)
            b = elements.m_plus_via_lbaab(scen)
            worst = max(worst, _rel(a, b))
    return GateResult("M+ identity", worst < 1e-10, f"worst rel = {worst:.2e}")


def gate_phase_purity(count: int = 10, seed: int = 11) -> GateResult:
    worst = 0.0
    for scen in _random_scenarios("geodesic", count, seed):
        mp = elements.m_plus_geodesic(scen)
        mm = elements.m_minus_geodesic(scen)
        worst = max(worst, abs(mp.imag) / max(abs(mp), 1e-300), abs(mm.real) / max(abs(mm), 1e-300))
    return GateResult("geodesic phase purity", worst <= 1e-12, f"worst = {worst:.2e}")


def gate_spectrum_union(l_top: int = 20, omega_top: int = 100) -> GateResult:
    ok = True
    for l in range(l_top + 1):
        def spec(bc):
            out = []
            n = 0
            while omega_of(bc, n, l) <= omega_top:
                out.append(omega_of(bc, n, l))
                n += 1
            return out
        plus, minus, zero = spec(1), spec(-1), spec(0)
        ok &= sorted(plus + minus) == zero and not set(plus) & set(minus)
    return GateResult("spectrum union", ok)


def gate_density_matrix() -> GateResult:
    worst_herm, worst_eig, worst_trace = 0.0, 0.0, 0.0
    for quantity, scen in oracle.pinned_scenarios():
        if scen.rho_b == 0.0:
            continue
        state = quantify.density_matrix(elements.element_set(scen), 0.01, 0.01)
        worst_trace = max(worst_trace, abs(state.trace - 1.0))
        worst_herm = max(worst_herm, float(np.abs(state.rho - state.rho.conj().T).max()))
        worst_eig = min(worst_eig, float(state.eigenvalues().min()))
    ok = worst_trace == 0.0 and worst_herm <= 1e-14 and worst_eig >= -1e-10
    return GateResult("density matrix health", ok,
                      f"trace err = {worst_trace:.1e}, herm = {worst_herm:.1e}, min eig = {worst_eig:.1e}")


def check(pins_path: Path = oracle.PINS_PATH, regen: bool = False) -> CheckReport:
    report = CheckReport()
    for gate in (lambda: gate_pins(pins_path, regen), gate_lbaab, gate_phase_purity,
                 gate_spectrum_union, gate_density_matrix):
        try:
            report.gates.append(gate())
        except Exception as exc:  # a crashing gate is a failing gate
            report.gates.append(GateResult(getattr(gate, "__name__", "gate"), False, repr(exc)))
    return report


# -------------------------------------------------------------------- main


def _add_point_args(p):
    p.add_argument("--kind", default="geodesic", choices=[m.value for m in Motion])
    p.add_argument("--bc", default="dirichlet")
    p.add_argument("--L", type=float, default=1.0, help="AdS length in units of sigma")
    p.add_argument("--gap", type=float, default=2.0)
    p.add_argument("--delta-x", type=float, default=0.0)
    p.add_argument("--tau0", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)


def _truncation_from(args) -> Truncation:
    return Truncation(n_max=args.n_max, l_max=args.l_max)


def cmd_rate(args) -> int:
    gaps = np.linspace(*args.gap_range[:2], int(args.gap_range[2])) if args.gap_range else [args.gap]
    which = "B" if args.kind == "static" and args.delta_x > 0 else "A"
    print(f"# kind={args.kind} bc={args.bc} L={args.L:g} delta_x={args.delta_x:g} detector={which}")
    print("gap,L_II")
    for gap in gaps:
        scen = Scenario.build(args.kind, args.bc, args.L, float(gap), args.delta_x, 0.0, args.sigma)
        trunc = _truncation_from(args)
        if which == "B":
            value = elements.l_local_static(scen, trunc, "B")
        else:
            value = elements.l_local_geodesic(scen, trunc, "A")
        print(f"{_fmt(gap)},{_fmt(value)}")
    return 0


def cmd_elements(args) -> int:
    scen = Scenario.build(args.kind, args.bc, args.L, args.gap, args.delta_x, args.tau0, args.sigma)
    es = elements.element_set(scen, _truncation_from(args))
    for name in ("l_aa", "l_bb", "l_ab", "m_plus", "m_minus", "m", "c_ab", "c_ba"):
        print(f"{name:8s} {getattr(es, name)}")
    if not es.flags:
        print(f"{'N2':8s} {quantify.negativity2(es)}")
        print(f"{'I':8s} {quantify.mutual_information(es)}")
    for key, rep in es.truncation_report.items():
        print(f"# {key}: {rep.terms} terms, last {rep.last_term:.2e}")
    if es.flags:
        print("# flags: " + ",".join(es.flags))
    return 0


def cmd_sweep(args) -> int:
    spec = parse_config(Path(args.config).read_text(encoding="utf-8"))
    text = run_sweep(spec, args.workers)
    out = args.out or spec.output
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args) -> int:
    report = check(Path(args.pins), args.regen_pins)
    print(report.text())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adsharvest", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="local excitation probability L_II")
    _add_point_args(p)
    p.add_argument("--gap-range", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--n-max", type=int, default=512)
    p.add_argument("--l-max", type=int, default=256)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("elements", help="all second-order elements at one point")
    _add_point_args(p)
    p.add_argument("--n-max", type=int, default=512)
    p.add_argument("--l-max", type=int, default=256)
    p.set_defaults(func=cmd_elements)

    p = sub.add_parser("sweep", help="evaluate a config grid to CSV")
    p.add_argument("config")
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="oracle and invariant gates")
    p.add_argument("--pins", default=str(oracle.PINS_PATH))
    p.add_argument("--regen-pins", action="store_true")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
