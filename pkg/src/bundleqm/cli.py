"""Batch command-line front end.

    bundleqm spectrum  [--config FILE] --n-max N
    bundleqm simulate  [--config FILE] --z0 Z [--charge Q] [--periods K] [--samples S]
    bundleqm husimi    [--config FILE] --n N [--charge Q] [--resolution R] [--ascii]
    bundleqm verify    [--config FILE] [--suite NAME]

All outputs land under a run-stamped subdirectory of the output directory
(config "output_dir", overridden by $BUNDLEQM_OUT).  The stamp is a hash of
the command and configuration, so identical invocations rewrite identical
bytes.  Floats are emitted with 17 significant digits; JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bundles, classical, orbifold, oscillator, polarizations
from .classical import OscillatorParams
from .errors import BundleqmError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    m: float = 1.0
    omega: float = 1.0
    grid_half_width: float = 8.0
    grid_points: int = 257
    fock_truncation: int = 32
    quad_order: int = 128
    tolerances: dict = field(default_factory=dict)
    output_dir: str = "out"
    frequency_sign: int = +1

    def __post_init__(self):
        if not (self.m > 0 and self.omega > 0):
            raise ConfigError("m and omega must be positive")
        if self.grid_points < 3:
            raise ConfigError("grid_points must be >= 3")
        if self.grid_half_width <= 0:
            raise ConfigError("grid_half_width must be positive")
        if self.fock_truncation < 0:
            raise ConfigError("fock_truncation must be >= 0")
        if self.quad_order < 2 * self.fock_truncation + 2:
            raise ConfigError("quad_order must be >= 2N+2 for truncation N")
        if self.frequency_sign not in (+1, -1):
            raise ConfigError("frequency_sign must be +1 or -1")

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            doc = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    @property
    def params(self) -> OscillatorParams:
        return OscillatorParams(m=self.m, omega=self.omega)

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def as_dict(self) -> dict:
        return {
            "m": self.m, "omega": self.omega,
            "grid_half_width": self.grid_half_width, "grid_points": self.grid_points,
            "fock_truncation": self.fock_truncation, "quad_order": self.quad_order,
            "tolerances": dict(self.tolerances), "output_dir": self.output_dir,
            "frequency_sign": self.frequency_sign,
        }


# ---------------------------------------------------------------------------
# Deterministic serialization: 17 significant digits, lowercase exponent
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    if isinstance(x, bool) or not isinstance(x, float):
        return str(x)
    return f"{x:.17g}"


def canonical_json(obj, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(obj, dict):
        items = [f'{pad}  "{k}": {canonical_json(obj[k], indent + 2).lstrip()}'
                 for k in sorted(obj)]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [canonical_json(v, indent + 2) for v in obj]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return pad + json.dumps(obj)
    if isinstance(obj, float):
        return pad + format_float(obj)
    if isinstance(obj, (int, str)):
        return pad + json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def run_directory(config: RunConfig, command: str, args_doc: dict) -> Path:
    root = os.environ.get("BUNDLEQM_OUT", config.output_dir)
    payload = canonical_json({"command": command, "config": config.as_dict(),
                              "args": args_doc})
    stamp = hashlib.sha256(payload.encode()).hexdigest()[:10]
    out = Path(root) / f"{command}-{stamp}"
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_pgm(path, field2d: np.ndarray, ascii_mode: bool = False) -> None:
    """Grayscale PGM scaled to [0, max]; P5 by default, P2 with ascii_mode."""
    vmax = float(np.max(field2d))
    scaled = np.zeros_like(field2d) if vmax == 0 else field2d / vmax
    pixels = np.rint(255 * np.clip(scaled, 0.0, 1.0)).astype(np.uint8)
    ny, nx = pixels.shape
    if ascii_mode:
        with open(path, "w") as fh:
            fh.write(f"P2\n{nx} {ny}\n255\n")
            for row in pixels:
                fh.write(" ".join(str(int(v)) for v in row) + "\n")
    else:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{nx} {ny}\n255\n".encode())
            fh.write(pixels.tobytes())


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(config: RunConfig, n_max: int) -> Path:
    if n_max < 0:
        raise ConfigError("n_max must be >= 0")
    levels = oscillator.spectrum(n_max, config.params)
    doc = [{"n": lv.n, "E": lv.E, "q_l": lv.q_l, "q_v": lv.q_v} for lv in levels]
    out = run_directory(config, "spectrum", {"n_max": n_max})
    path = out / "spectrum.json"
    path.write_text(canonical_json(doc) + "\n")
    print(f"wrote {path}")
    return path


def cmd_simulate(config: RunConfig, z0: complex, charge: int, periods: float,
                 samples: int) -> Path:
    if samples < 2:
        raise ConfigError("samples must be >= 2")
    if z0 == 0:
        raise ConfigError("z0 = 0 is the excluded point of the punctured phase space")
    if charge not in (+1, -1):
        raise ConfigError("charge must be +1 or -1")
    params = config.params
    state = classical.ClassicalState(z0=z0, charge=charge)
    times = classical.trajectory_times(periods, samples, params)
    zs = classical.evolve_classical(state, times, params,
                                    frequency_sign=config.frequency_sign)
    xs = np.sqrt(2.0) * zs.real
    ps = -charge * np.sqrt(2.0) * zs.imag / params.w2
    out = run_directory(config, "simulate",
                        {"z0": [z0.real, z0.imag], "charge": charge,
                         "periods": periods, "samples": samples})
    path = out / "trajectory.csv"
    with open(path, "w") as fh:
        fh.write("t,x,p,re_z,im_z\n")
        for row in zip(times, xs, ps, zs.real, zs.imag):
            fh.write(",".join(format_float(float(v)) for v in row) + "\n")
    try:
        print(f"winding number: {classical.winding_number(zs)}")
    except BundleqmError as exc:
        print(f"winding number: n/a ({exc})")
    print(f"wrote {path}")
    return path


def cmd_husimi(config: RunConfig, n: int, charge: int, resolution: int,
               ascii_mode: bool = False) -> Path:
    if resolution < 16:
        raise ConfigError("resolution must be >= 16")
    if n < 0:
        raise ConfigError("n must be >= 0")
    if charge not in (+1, -1):
        raise ConfigError("charge must be +1 or -1")
    state = oscillator.eigenstate(n, charge)
    u = np.linspace(-config.grid_half_width, config.grid_half_width, resolution)
    q_field = oscillator.husimi(state, u, u)
    i, j = np.unravel_index(int(np.argmax(q_field)), q_field.shape)
    out = run_directory(config, "husimi",
                        {"n": n, "charge": charge, "resolution": resolution,
                         "ascii": ascii_mode})
    pgm_path = out / ("husimi.ascii.pgm" if ascii_mode else "husimi.pgm")
    write_pgm(pgm_path, q_field, ascii_mode=ascii_mode)
    sidecar = {
        "n": n, "charge": charge, "resolution": resolution,
        "min_value": float(np.min(q_field)), "max_value": float(np.max(q_field)),
        "max_location": [float(u[i]), float(u[j])],
        "max_radius_sq": float(u[i] ** 2 + u[j] ** 2),
        "cell": float(u[1] - u[0]),
    }
    (out / "husimi.json").write_text(canonical_json(sidecar) + "\n")
    print(f"wrote {pgm_path}")
    return pgm_path


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.tolerance)


def _ccr_error(rep: str, charge: int, h: float) -> float:
    """sup |([p,x] + i) psi| / sup |psi| on the interior, for a smooth psi."""
    axis = "x" if rep == "coordinate" else "p"
    sec = bundles.LineSection.from_function(
        lambda s: np.exp(-0.5 * s ** 2) * (1.0 + 0.3 * s), axis, -4.0, 4.0,
        int(round(8.0 / h)) + 1, charge=charge)
    x_hat, p_hat = bundles.canonical_operators(rep, charge)
    comm = p_hat(x_hat(sec)).values - x_hat(p_hat(sec)).values
    resid = comm + 1j * sec.values
    return float(np.max(np.abs(resid[2:-2])) / np.max(np.abs(sec.values)))


def suite_ccr(config: RunConfig):
    tol = config.tolerance("ccr", 1e-3)
    checks = []
    for rep in ("coordinate", "momentum"):
        for q in (+1, -1):
            checks.append(Check(f"ccr {rep} charge {q:+d}: |[p,x]+i|",
                                _ccr_error(rep, q, 1e-2), tol))
    # observed convergence order across h, h/2, h/4
    errs = [_ccr_error("coordinate", +1, h) for h in (1e-2, 5e-3, 2.5e-3)]
    order = min(np.log2(errs[0] / errs[1]), np.log2(errs[1] / errs[2]))
    checks.append(Check("ccr convergence order >= 1.9 (reported as 1.9 - order <= 0)",
                        max(0.0, 1.9 - float(order)), 0.0))
    return checks


def _gauge_family(x0: float = 1.0):
    vac = bundles.vacuum_connection()
    return [
        ("vacuum", vac),
        ("alpha=-px/2", bundles.gauge_transform(
            vac, lambda x, p: -0.5 * p * x,
            dalpha_dx=lambda x, p: -0.5 * p, dalpha_dp=lambda x, p: -0.5 * x,
            label="-px/2")),
        ("alpha=+px/2", bundles.gauge_transform(
            vac, lambda x, p: 0.5 * p * x,
            dalpha_dx=lambda x, p: 0.5 * p, dalpha_dp=lambda x, p: 0.5 * x,
            label="+px/2")),
        ("alpha=p*x0", bundles.gauge_transform(
            vac, lambda x, p: p * x0,
            dalpha_dx=lambda x, p: np.zeros_like(x), dalpha_dp=lambda x, p: x0 + 0 * x,
            label="p*x0")),
    ]


def _symmetric_probe(h: float = 1e-2, half_width: float = 1.0) -> bundles.GridSection:
    n = int(round(2 * half_width / h)) + 1
    return bundles.GridSection.from_function(
        lambda X, P: np.exp(-(X ** 2 + P ** 2) / 4.0),
        (-half_width, half_width), (-half_width, half_width), n, n)


def suite_gauge(config: RunConfig):
    tol_val = config.tolerance("gauge", 1e-3)
    tol_cross = config.tolerance("gauge_cross", 1e-8)
    probe = _symmetric_probe()
    checks = []
    values = {}
    for name, conn in _gauge_family():
        val = bundles.curvature_numeric(conn, probe)
        values[name] = val
        checks.append(Check(f"curvature {name}: |comm/psi + i|", abs(val + 1j), tol_val))
    spread = max(abs(values[a] - values[b]) for a in values for b in values)
    checks.append(Check("curvature cross-gauge spread", float(spread), tol_cross))
    return checks


def suite_spectrum(config: RunConfig):
    params = config.params
    levels = oscillator.spectrum(10, params)
    fock_err = max(abs(lv.E - params.omega * (lv.n + 0.5)) for lv in levels)
    mat = oscillator.coordinate_hamiltonian_matrix(10, params)
    evals = np.sort(np.linalg.eigvalsh(mat))
    expect = params.omega * (np.arange(11) + 0.5)
    return [
        Check("spectrum fock: max |E_n - omega(n+1/2)|", float(fock_err), 0.0),
        Check("spectrum coordinate matrix: max eigenvalue error",
              float(np.max(np.abs(evals - expect))),
              config.tolerance("spectrum_matrix", 1e-6)),
    ]


def suite_bargmann(config: RunConfig):
    params = config.params
    n_max, order = 20, 128
    worst_off = worst_diag = 0.0
    for m in range(n_max + 1):
        state = polarizations.bargmann_transform(
            lambda x: polarizations.hermite_basis(m, x, params)[m],
            n_max, order, params)
        target = np.zeros(n_max + 1)
        target[m] = 1.0
        err = np.abs(state.coeffs - target)
        worst_diag = max(worst_diag, float(err[m]))
        worst_off = max(worst_off, float(np.max(np.delete(err, m))))
    # round trip on a band-limited state
    rng = np.random.default_rng(11)
    c = rng.normal(size=13) + 1j * rng.normal(size=13)
    c /= np.linalg.norm(c)
    sec = polarizations.bargmann_inverse(polarizations.FockState(c),
                                         np.linspace(-12, 12, 4001), params)
    back = polarizations.bargmann_transform(sec, 12, 128, params)
    rt = float(abs(np.sqrt(back.norm_sq()) - 1.0))
    return [
        Check("bargmann h_n analysis: worst off-coefficient", worst_off,
              config.tolerance("bargmann_off", 1e-10)),
        Check("bargmann h_n analysis: worst diagonal error", worst_diag,
              config.tolerance("bargmann_diag", 1e-10)),
        Check("bargmann round-trip norm error", rt,
              config.tolerance("bargmann_norm", 1e-8)),
    ]


def suite_husimi(config: RunConfig):
    u = np.linspace(-8.0, 8.0, 257)
    h = u[1] - u[0]
    checks = []
    q0 = oscillator.husimi(oscillator.eigenstate(0), np.array([0.0]), np.array([0.0]))
    checks.append(Check("husimi Q_0(0) vs 1/pi", float(abs(q0[0, 0] - 1 / np.pi)),
                        config.tolerance("husimi_center", 1e-12)))
    worst_norm, worst_loc = 0.0, 0.0
    for n in range(11):
        q = oscillator.husimi(oscillator.eigenstate(n), u, u)
        total = float(np.trapezoid(np.trapezoid(q, u, axis=1), u))
        worst_norm = max(worst_norm, abs(total - 1.0))
        i, j = np.unravel_index(int(np.argmax(q)), q.shape)
        worst_loc = max(worst_loc, abs(np.hypot(u[i], u[j]) - np.sqrt(n)))
    checks.append(Check("husimi normalization: worst |int Q - 1|", worst_norm,
                        config.tolerance("husimi_norm", 1e-6)))
    checks.append(Check("husimi argmax radius vs sqrt(n), worst", worst_loc,
                        np.sqrt(2.0) * h))
    return checks


def suite_holonomy(config: RunConfig):
    tol = config.tolerance("holonomy", 1e-5)
    tol_zero = config.tolerance("holonomy_zero", 1e-8)
    checks = []
    loops = [("circle", orbifold.circle_loop()),
             ("square", orbifold.square_loop()),
             ("ellipse", orbifold.ellipse_loop())]
    for n in (2, 3, 5):
        defect = orbifold.ConeGeometry(n).defect_angle
        for name, loop in loops:
            res = orbifold.levi_civita_transport(loop, n)
            checks.append(Check(f"holonomy n={n} {name}: |angle - defect|",
                                abs(res.holonomy_angle - defect), tol))
    far = orbifold.circle_loop(center=5.0 + 0j, radius=1.0)
    res = orbifold.levi_civita_transport(far, 3)
    checks.append(Check("holonomy non-enclosing loop", abs(res.holonomy_angle), tol_zero))
    return checks


def suite_charge_mirror(config: RunConfig):
    params = config.params
    checks = []
    # classical: conj of particle evolution = antiparticle evolution of conj datum
    z0 = 0.8 - 0.6j
    ts = np.linspace(0.0, 7.0, 50)
    plus = classical.evolve_classical(classical.ClassicalState(z0, +1), ts, params)
    minus = classical.evolve_classical(classical.ClassicalState(np.conj(z0), -1), ts, params)
    checks.append(Check("mirror classical evolution",
                        float(np.max(np.abs(np.conj(plus) - minus))),
                        config.tolerance("mirror", 1e-12)))
    # quantum: conjugate evolution
    rng = np.random.default_rng(3)
    c = rng.normal(size=6) + 1j * rng.normal(size=6)
    c /= np.linalg.norm(c)
    ev_p = oscillator.evolve_schrodinger(
        oscillator.EvolvingState(polarizations.FockState(np.conj(c), +1)), 0.37, params)
    ev_m = oscillator.evolve_schrodinger(
        oscillator.EvolvingState(polarizations.FockState(c, -1)), 0.37, params)
    checks.append(Check("mirror schrodinger evolution",
                        float(np.max(np.abs(np.conj(ev_p.state.coeffs) - ev_m.state.coeffs))),
                        config.tolerance("mirror", 1e-12)))
    # quantum numbers and charge totals
    worst_qn = 0
    for n in (0, 3, 5):
        for q in (+1, -1):
            ql, qv = oscillator.winding_charges(oscillator.eigenstate(n, q))
            worst_qn = max(worst_qn, abs(ql - n * q), abs(qv - q))
    checks.append(Check("eigenstate quantum numbers (q_l, q_v)", float(worst_qn), 0.0))
    worst_total = 0.0
    for q in (+1, -1):
        _, total = oscillator.charge_density(oscillator.eigenstate(4, q))
        worst_total = max(worst_total, abs(total - q))
    checks.append(Check("charge density totals +/-1", worst_total,
                        config.tolerance("charge_total", 1e-6)))
    return checks


SUITES = {
    "ccr": suite_ccr,
    "gauge": suite_gauge,
    "spectrum": suite_spectrum,
    "bargmann": suite_bargmann,
    "husimi": suite_husimi,
    "holonomy": suite_holonomy,
    "charge-mirror": suite_charge_mirror,
}


def cmd_verify(config: RunConfig, suite: str) -> int:
    if suite != "all" and suite not in SUITES:
        print(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'",
              file=sys.stderr)
        return EXIT_USAGE
    names = sorted(SUITES) if suite == "all" else [suite]
    checks = []
    for name in names:
        checks.extend(SUITES[name](config))
    report = []
    all_passed = True
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        all_passed &= c.passed
        print(f"[{status}] {c.name}: measured={format_float(c.measured)} "
              f"tolerance={format_float(c.tolerance)}")
        report.append({"name": c.name, "measured": float(c.measured),
                       "tolerance": float(c.tolerance), "passed": c.passed})
    out = run_directory(config, "verify", {"suite": suite})
    (out / "report.json").write_text(canonical_json(report) + "\n")
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bundleqm",
                                     description="oscillator bundle toolkit")
    parser.add_argument("--config", help="JSON configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="energy levels for both charges")
    sp.add_argument("--n-max", type=int, required=True)

    sm = sub.add_parser("simulate", help="classical trajectory CSV")
    sm.add_argument("--z0", type=complex, required=True,
                    help="initial datum, e.g. '1+0.5j'")
    sm.add_argument("--charge", type=int, default=+1, choices=(+1, -1))
    sm.add_argument("--periods", type=float, default=1.0)
    sm.add_argument("--samples", type=int, default=257)

    hu = sub.add_parser("husimi", help="Husimi heatmap PGM + sidecar JSON")
    hu.add_argument("--n", type=int, required=True)
    hu.add_argument("--charge", type=int, default=+1, choices=(+1, -1))
    hu.add_argument("--resolution", type=int, default=257)
    hu.add_argument("--ascii", action="store_true", help="P2 instead of P5")

    ve = sub.add_parser("verify", help="run invariant suites")
    ve.add_argument("--suite", default="all")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.load(args.config) if args.config else RunConfig()
        if args.command == "spectrum":
            cmd_spectrum(config, args.n_max)
            return EXIT_OK
        if args.command == "simulate":
            cmd_simulate(config, args.z0, args.charge, args.periods, args.samples)
            return EXIT_OK
        if args.command == "husimi":
            cmd_husimi(config, args.n, args.charge, args.resolution, args.ascii)
            return EXIT_OK
        if args.command == "verify":
            return cmd_verify(config, args.suite)
    except (ConfigError, BundleqmError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
