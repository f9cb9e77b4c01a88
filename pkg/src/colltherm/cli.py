"""Command-line front end: sweeps, scaling runs and the validation suite.

Outputs are deterministic: identical flags produce byte-identical CSVs,
floats are printed with 17 significant digits, and every CSV carries the
resolved configuration in #-prefixed header comments. Per-point failures
inside a sweep are recorded in an in-band ``error`` column instead of
aborting the whole grid.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .chain import ChainConfig, build_chain_state, pair_coherence, single_ancilla_population
from .estimation import (
    analytic_f1_ratio,
    analytic_pair_ratio_weak,
    params_for_occupation,
    qfi,
    qfi_chain,
    temperature_derivative,
)
from .linalg import DensityMatrix, _absmax
from .model import (
    EXCITED,
    GROUND,
    PLUS,
    AncillaPrep,
    ModelParams,
    thermal_fisher_information,
    thermal_map_mat,
    thermal_qubit_state,
)

_SWEEPABLE = ("gamma_tau_se", "g_tau_sa", "n")
_PREPS = {"g": GROUND, "e": EXCITED, "plus": PLUS}

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter: name, range, point count, lin/log spacing."""

    name: str
    lo: float
    hi: float
    count: int
    scale: str = "lin"

    def __post_init__(self) -> None:
        if self.name not in _SWEEPABLE:
            raise ValueError(f"cannot sweep {self.name!r}; one of {_SWEEPABLE}")
        if self.count < 2:
            raise ValueError(f"axis needs at least 2 points, got {self.count}")
        if not self.lo < self.hi:
            raise ValueError(f"axis range must satisfy min < max, got [{self.lo}, {self.hi}]")
        if self.scale not in ("lin", "log"):
            raise ValueError(f"axis scale must be lin or log, got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0:
            raise ValueError("log axis requires a positive minimum")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def describe(self) -> str:
        return f"{self.lo:.17g}:{self.hi:.17g}:{self.count}:{self.scale}"


@dataclass(frozen=True)
class SweepSpec:
    """A resolved sweep: axes, fixed parameters, preparations, N list, output."""

    axes: tuple[AxisSpec, ...]
    base: ModelParams
    preps: tuple[str, ...]
    n_values: tuple[int, ...]
    out_path: str
    threads: int = 1


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _map_points(fn: Callable, points: Sequence, threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, points))
    return [fn(p) for p in points]


def _write_csv(path: str, comments: list[str], header: list[str], rows: Iterable) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _base_comments(cmd: str, base: ModelParams) -> list[str]:
    return [
        f"colltherm {cmd}",
        "units: hbar = k_B = 1; temperature in units of hbar*omega/k_B",
        f"temperature = {base.temperature:.17g}",
        f"omega = {base.omega:.17g}",
        f"gamma_tau_se = {base.gamma_tau_se:.17g}",
        f"g_tau_sa = {base.g_tau_sa:.17g}",
        f"prep = {base.ancilla_prep.kind}",
    ]


def _heatmap_point(task: tuple[float, float, ModelParams]) -> tuple:
    gamma, theta, base = task
    try:
        params = replace(base, gamma_tau_se=float(gamma), g_tau_sa=float(theta))
        r = qfi_chain(ChainConfig(params, 1))
        fth = thermal_fisher_information(params)
        return (
            gamma,
            theta,
            r.value,
            r.value / fth,
            r.n_truncated_pairs,
            r.richardson_error_estimate,
            "",
        )
    except Exception as exc:  # recorded in-band, the sweep continues
        return (gamma, theta, math.nan, math.nan, math.nan, math.nan,
                f"{type(exc).__name__}: {exc}")


def cmd_heatmap(spec: SweepSpec) -> int:
    """Two-axis sweep of the single-ancilla QFI; writes a CSV grid."""
    if len(spec.axes) != 2 or [a.name for a in spec.axes] != ["gamma_tau_se", "g_tau_sa"]:
        raise ValueError("heatmap sweeps exactly gamma_tau_se (outer) and g_tau_sa (inner)")
    gaxis, taxis = spec.axes
    tasks = [(g, t, spec.base) for g in gaxis.values() for t in taxis.values()]
    rows = _map_points(_heatmap_point, tasks, spec.threads)
    comments = _base_comments("heatmap", spec.base) + [
        f"gamma_tau_se axis = {gaxis.describe()}",
        f"g_tau_sa axis = {taxis.describe()}",
        "n_ancillas = 1",
    ]
    header = ["gamma_tau_se", "g_tau_sa", "f1", "f1_over_fth", "n_truncated",
              "richardson_err", "error"]
    _write_csv(spec.out_path, comments, header, rows)
    return EXIT_OK


def _scaling_point(task: tuple[str, int, ModelParams]) -> tuple:
    prep, n, base = task
    try:
        params = replace(base, ancilla_prep=_PREPS[prep])
        r = qfi_chain(ChainConfig(params, n))
        fth = thermal_fisher_information(params)
        return (prep, n, r.value, r.value / fth, "")
    except Exception as exc:
        return (prep, n, math.nan, math.nan, f"{type(exc).__name__}: {exc}")


def cmd_scaling(spec: SweepSpec) -> int:
    """QFI versus block length N for each listed preparation; writes a CSV."""
    if any(a.name != "n" for a in spec.axes):
        raise ValueError("scaling sweeps the block length only")
    if max(spec.n_values) > 12:
        raise ValueError("scaling is capped at N <= 12")
    tasks = [(prep, n, spec.base) for prep in spec.preps for n in spec.n_values]
    raw = _map_points(_scaling_point, tasks, spec.threads)

    # Reference F_1 per preparation for the linear-scaling column.
    f1: dict[str, float] = {}
    for prep, n, f_n, _, err in raw:
        if n == 1 and not err:
            f1[prep] = f_n
    rows = []
    for prep, n, f_n, f_over_fth, err in raw:
        ref = f1.get(prep, math.nan)
        if err or not ref or math.isnan(ref):
            ratio = math.nan
            if not err:
                err = "reference f1 is zero or unavailable"
        else:
            ratio = f_n / (n * ref)
        rows.append((prep, n, f_n, f_over_fth, ratio, err))
    comments = _base_comments("scaling", spec.base) + [
        f"preps = {','.join(spec.preps)}",
        f"n values = {','.join(str(n) for n in spec.n_values)}",
    ]
    header = ["prep", "n", "f_n", "f_n_over_fth", "f_n_over_n_f1", "error"]
    _write_csv(spec.out_path, comments, header, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# validation suite
# ---------------------------------------------------------------------------

def _t2_params(**overrides) -> ModelParams:
    base = ModelParams(temperature=2.0, gamma_tau_se=0.4, g_tau_sa=math.pi / 2)
    return replace(base, **overrides)


def _check_thermal_fisher_anchor() -> tuple[float, float]:
    value = thermal_fisher_information(_t2_params())
    return abs(value - 0.0147), 5e-4


def _check_single_ancilla_ratio(quick: bool) -> tuple[float, float]:
    gammas = [0.4, 1.6] if quick else [0.1, 0.4, 0.8, 1.6, 3.0, 5.0]
    nbars = [1.5415] if quick else [0.5, 1.5415, 5.0]
    worst = 0.0
    for nb in nbars:
        for g in gammas:
            params = params_for_occupation(nb, g, _t2_params())
            ratio = qfi_chain(ChainConfig(params, 1)).value / thermal_fisher_information(params)
            expected = analytic_f1_ratio(nb, g)
            worst = max(worst, abs(ratio - expected) / expected)
    return worst, 1e-6


def _closed_form_grid(quick: bool) -> list[ModelParams]:
    gammas = [0.4] if quick else [0.1, 0.4, 1.0]
    thetas = [math.pi / 8] if quick else [math.pi / 100, math.pi / 8, math.pi / 2 - 0.01]
    return [
        _t2_params(gamma_tau_se=g, g_tau_sa=t) for g in gammas for t in thetas
    ]


def _check_population_closed_form(quick: bool) -> tuple[float, float]:
    worst = 0.0
    for params in _closed_form_grid(quick):
        state = build_chain_state(ChainConfig(params, 1))
        worst = max(worst, abs(state.mat[1, 1].real - single_ancilla_population(params)))
    return worst, 1e-10


def _check_coherence_closed_form(quick: bool) -> tuple[float, float]:
    worst = 0.0
    for params in _closed_form_grid(quick):
        state = build_chain_state(ChainConfig(params, 2))
        worst = max(worst, abs(state.mat[1, 2] - pair_coherence(params)))
    return worst, 1e-10


def _check_pair_enhancement(quick: bool) -> tuple[float, float]:
    gammas = [0.8] if quick else [0.4, 0.8, 1.6, 3.0]
    nb = _t2_params().n_bar
    worst = 0.0
    for g in gammas:
        params = params_for_occupation(nb, g, _t2_params(g_tau_sa=math.pi / 100))
        f1 = qfi_chain(ChainConfig(params, 1)).value
        f2 = qfi_chain(ChainConfig(params, 2)).value
        expected = analytic_pair_ratio_weak(nb, g)
        worst = max(worst, abs(f2 / (2 * f1) - expected) / expected)
    return worst, 1e-2


def _check_superadditivity() -> tuple[float, float]:
    rng = np.random.default_rng(2023)
    worst = 0.0
    for _ in range(4):
        params = ModelParams(
            temperature=float(rng.uniform(1.0, 4.0)),
            gamma_tau_se=float(rng.uniform(0.05, 1.0)),
            g_tau_sa=float(rng.uniform(0.1, math.pi / 2)),
            ancilla_prep=_PREPS[rng.choice(["g", "e", "plus"])],
        )
        f1 = qfi_chain(ChainConfig(params, 1)).value
        for n in (2, 3, 4):
            fn = qfi_chain(ChainConfig(params, n)).value
            worst = max(worst, (n * f1 - fn) / (n * f1))
    return max(worst, 0.0), 1e-9


def _check_decorrelation(quick: bool) -> tuple[float, float]:
    params = _t2_params(gamma_tau_se=20.0)
    f1 = qfi_chain(ChainConfig(params, 1)).value
    worst = 0.0
    for n in (2,) if quick else (2, 3, 4):
        fn = qfi_chain(ChainConfig(params, n)).value
        worst = max(worst, abs(fn / (n * f1) - 1.0))
    return worst, 1e-3


def _check_semigroup() -> tuple[float, float]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        a, b = float(rng.uniform(0.05, 1.0)), float(rng.uniform(0.05, 1.0))
        pa, pb = _t2_params(gamma_tau_se=a), _t2_params(gamma_tau_se=b)
        pab = _t2_params(gamma_tau_se=a + b)
        two_step = thermal_map_mat(thermal_map_mat(rho, 0, 1, pa), 0, 1, pb)
        one_step = thermal_map_mat(rho, 0, 1, pab)
        worst = max(worst, _absmax(two_step - one_step))
    return worst, 1e-12


def _check_unitary_invariance() -> tuple[float, float]:
    rng = np.random.default_rng(11)
    params = _t2_params()
    rho = thermal_qubit_state(params)
    deriv = temperature_derivative(
        lambda t: thermal_qubit_state(replace(params, temperature=t)), params.temperature
    )
    base_val = qfi(rho, deriv.matrix).value
    worst = 0.0
    for _ in range(5):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        u, _ = np.linalg.qr(g)
        rotated_state = DensityMatrix(u @ rho.mat @ u.conj().T, rho.num_qubits)
        rotated = qfi(rotated_state, u @ deriv.matrix @ u.conj().T).value
        worst = max(worst, abs(rotated - base_val) / base_val)
    return worst, 1e-9


def validation_checks(quick: bool) -> list[tuple[str, Callable[[], tuple[float, float]]]]:
    """Named validation checks; each returns (deviation, tolerance)."""
    checks: list[tuple[str, Callable[[], tuple[float, float]]]] = [
        ("thermal_fisher_anchor", _check_thermal_fisher_anchor),
        ("single_ancilla_ratio_closed_form", lambda: _check_single_ancilla_ratio(quick)),
        ("ancilla_population_closed_form", lambda: _check_population_closed_form(quick)),
        ("pair_coherence_closed_form", lambda: _check_coherence_closed_form(quick)),
        ("thermal_map_semigroup", _check_semigroup),
        ("qfi_unitary_invariance", _check_unitary_invariance),
    ]
    if not quick:
        checks += [
            ("pair_enhancement_weak_coupling", lambda: _check_pair_enhancement(quick)),
            ("superadditivity", _check_superadditivity),
            ("decorrelation_limit", lambda: _check_decorrelation(quick)),
        ]
    return checks


def cmd_validate(quick: bool = False, out_path: str | None = None) -> int:
    """Run the analytic-vs-numeric validation suite; JSON report, exit code."""
    report = {"checks": [], "all_pass": True}
    for name, fn in validation_checks(quick):
        try:
            deviation, tolerance = fn()
            ok = deviation <= tolerance
        except Exception as exc:
            deviation, tolerance, ok = math.inf, math.nan, False
            print(f"check {name} raised {type(exc).__name__}: {exc}", file=sys.stderr)
        report["checks"].append(
            {"name": name, "pass": bool(ok), "deviation": float(deviation),
             "tolerance": float(tolerance)}
        )
        report["all_pass"] = report["all_pass"] and ok
    text = json.dumps(report, indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n")
    else:
        print(text)
    if not report["all_pass"]:
        failed = [c["name"] for c in report["checks"] if not c["pass"]]
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VALIDATION_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _parse_number(text: str) -> float:
    """Float literal with pi shorthand: 'pi', 'pi/2', '3pi/8', '0.25'."""
    s = text.strip().lower()
    if "pi" in s:
        head, _, tail = s.partition("pi")
        value = math.pi * (float(head) if head not in ("", "+", "-") else float(head + "1"))
        if tail.startswith("/"):
            value /= float(tail[1:])
        elif tail:
            raise ValueError(f"cannot parse number {text!r}")
        return value
    return float(s)


def _parse_axis(name: str, text: str) -> AxisSpec:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"axis must be MIN:MAX:COUNT[:lin|log], got {text!r}")
    lo, hi = _parse_number(parts[0]), _parse_number(parts[1])
    count = int(parts[2])
    scale = parts[3] if len(parts) == 4 else "lin"
    return AxisSpec(name, lo, hi, count, scale)


def _parse_prep(text: str) -> AncillaPrep:
    if text in _PREPS:
        return _PREPS[text]
    if text.startswith("custom:"):
        payload = json.loads(Path(text[len("custom:"):]).read_text())
        mat = np.array(
            [[complex(c[0], c[1]) if isinstance(c, list) else complex(c) for c in row]
             for row in payload]
        )
        return AncillaPrep.custom(mat)
    raise ValueError(f"unknown preparation {text!r}; use g, e, plus or custom:<file>")


def _read_config(path: str) -> dict[str, str]:
    """Plain key = value file; blank lines and # comments ignored."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key = value: {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip().replace("-", "_")] = val.strip()
    return values


_DEFAULTS = {
    "temperature": "2.0",
    "omega": "1.0",
    "gamma_tau_se": "0.4",
    "g_tau_sa": "pi/2",
    "prep": "g",
    "threads": "1",
    "n_max": "10",
    "preps": "g,e,plus",
    "gamma_axis": "0.01:3:40:log",
    "theta_axis": "0:pi/2:40:lin",
}


def _resolve(args: argparse.Namespace, key: str) -> str:
    flag = getattr(args, key, None)
    if flag is not None:
        return str(flag)
    if args.config:
        cfg = _read_config(args.config)
        if key in cfg:
            return cfg[key]
    return _DEFAULTS[key]


def _resolved_base(args: argparse.Namespace) -> ModelParams:
    return ModelParams(
        temperature=_parse_number(_resolve(args, "temperature")),
        gamma_tau_se=_parse_number(_resolve(args, "gamma_tau_se")),
        g_tau_sa=_parse_number(_resolve(args, "g_tau_sa")),
        omega=_parse_number(_resolve(args, "omega")),
        ancilla_prep=_parse_prep(_resolve(args, "prep")),
    )


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--temperature", help="bath temperature (units of hbar*omega/k_B)")
    parser.add_argument("--omega", help="qubit gap (natural units)")
    parser.add_argument("--gamma-tau-se", dest="gamma_tau_se", help="probe-bath coupling")
    parser.add_argument("--g-tau-sa", dest="g_tau_sa", help="partial-swap angle")
    parser.add_argument("--prep", help="ancilla preparation: g, e, plus, custom:<file>")
    parser.add_argument("--config", help="key = value file with default settings")
    parser.add_argument("--threads", help="worker threads for grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colltherm",
        description="Collisional thermometry sweeps and validation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_heat = sub.add_parser("heatmap", help="single-ancilla QFI over a coupling grid")
    _add_common(p_heat)
    p_heat.add_argument("--gamma-axis", dest="gamma_axis", help="MIN:MAX:COUNT[:lin|log]")
    p_heat.add_argument("--theta-axis", dest="theta_axis", help="MIN:MAX:COUNT[:lin|log]")
    p_heat.add_argument("--out", required=True, help="output CSV path")

    p_scal = sub.add_parser("scaling", help="QFI versus block length per preparation")
    _add_common(p_scal)
    p_scal.add_argument("--n-max", dest="n_max", help="largest block length (<= 12)")
    p_scal.add_argument("--preps", help="comma-separated list from {g,e,plus}")
    p_scal.add_argument("--out", required=True, help="output CSV path")

    p_val = sub.add_parser("validate", help="run analytic-vs-numeric validation checks")
    _add_common(p_val)
    p_val.add_argument("--quick", action="store_true", help="fast subset of checks")
    p_val.add_argument("--out", help="JSON report path (default: stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "heatmap":
            spec = SweepSpec(
                axes=(
                    _parse_axis("gamma_tau_se", _resolve(args, "gamma_axis")),
                    _parse_axis("g_tau_sa", _resolve(args, "theta_axis")),
                ),
                base=_resolved_base(args),
                preps=(_resolve(args, "prep"),),
                n_values=(1,),
                out_path=args.out,
                threads=int(_resolve(args, "threads")),
            )
            return cmd_heatmap(spec)
        if args.command == "scaling":
            n_max = int(_resolve(args, "n_max"))
            spec = SweepSpec(
                axes=(AxisSpec("n", 1, max(n_max, 2), max(n_max, 2)),),
                base=_resolved_base(args),
                preps=tuple(_resolve(args, "preps").split(",")),
                n_values=tuple(range(1, n_max + 1)),
                out_path=args.out,
                threads=int(_resolve(args, "threads")),
            )
            return cmd_scaling(spec)
        return cmd_validate(quick=args.quick, out_path=args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
