"""Command-line front end: ``raa-nullsteer <pattern|analyze|optimize|montecarlo>``.

Angles are degrees on the command line and radians everywhere else. Options
may also come from a flat ``key = value`` config file (``--config``); flags
given on the command line win over file values.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import analyze
from .beamform import NullSteerError, NullSteerProblem, beam_gain, zf_weights
from .estimator import make_pattern
from .geometry import FOA, ArrayRotation
from .montecarlo import monte_carlo
from .optimize import OptimizerConfig, optimize
from .steering import ArrayConfig
from .svg import LineChart

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
DB_FLOOR = -120.0
COMMANDS = ("pattern", "analyze", "optimize", "montecarlo")


class InputError(ValueError):
    pass


@dataclass
class RunSpec:
    command: str
    n: int = 8
    spacing: float = 0.5
    pattern: str = "iso"
    p: float = 0.5
    theta0: float = 45.0
    interferers: str = "30"
    q: int = 360
    rounds: int = 5
    gs_iters: int = 50
    candidates: int = 36
    max_shift: int = 3
    mu: float = 1.0
    seed: int = 1
    trials: int = 100
    k_range: str = "1:8"
    out: str = "."
    emit: str = "csv,json,svg"
    arv: str = ""
    step: float = 0.25
    axis: str = "-180:180"
    jobs: int = 1

    # -- derived views -------------------------------------------------------

    def interferer_list(self) -> list[float]:
        text = self.interferers.strip()
        if not text:
            return []
        try:
            return [float(v) for v in text.split(",")]
        except ValueError as exc:
            raise InputError(f"bad --interferers {self.interferers!r}") from exc

    def array(self) -> ArrayConfig:
        try:
            return ArrayConfig(self.n, self.spacing, make_pattern(self.pattern, self.p))
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    def problem(self) -> NullSteerProblem:
        return NullSteerProblem.from_degrees(self.theta0, self.interferer_list())

    def optimizer(self) -> OptimizerConfig:
        try:
            return OptimizerConfig(self.q, self.rounds, self.gs_iters, self.candidates, self.max_shift, self.mu, self.seed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    def k_values(self) -> list[int]:
        try:
            lo, hi = (int(v) for v in self.k_range.split(":"))
        except ValueError as exc:
            raise InputError(f"bad --k-range {self.k_range!r}; expected LO:HI") from exc
        if lo < 0 or hi <= lo:
            raise InputError(f"empty --k-range {self.k_range!r}")
        return list(range(lo, hi))

    def rotation(self) -> ArrayRotation | None:
        if not self.arv.strip():
            return None
        try:
            a, b, g = (float(v) for v in self.arv.split(","))
        except ValueError as exc:
            raise InputError(f"bad --arv {self.arv!r}; expected alpha,beta,gamma") from exc
        return ArrayRotation.from_degrees(a, b, g)

    def emits(self, kind: str) -> bool:
        return kind in {e.strip() for e in self.emit.split(",")}

    def echo(self) -> dict:
        """Configuration sufficient to reproduce the run (excludes output location)."""
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("out", "emit", "jobs")}


_FIELD_TYPES = {f.name: f.type for f in fields(RunSpec)}
_CASTS = {"int": int, "float": float, "str": str}


def _coerce(key: str, value):
    cast = _CASTS[_FIELD_TYPES[key]]
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad value for {key}: {value!r}") from exc


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment, dashes equal underscores."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES or key == "command":
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _coerce(key, value)
    return values


def write_config(path, spec: RunSpec):
    lines = [f"{k} = {v}" for k, v in spec.echo().items() if k != "command"]
    Path(path).write_text("\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="raa-nullsteer", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="flat key = value file with defaults for any flag")
    opts = [
        ("--n", int, "number of array elements"),
        ("--spacing", float, "element spacing in wavelengths"),
        ("--pattern", str, "element pattern: iso or cos"),
        ("--p", float, "cosine pattern directivity"),
        ("--theta0", float, "desired direction (deg)"),
        ("--interferers", str, "comma-separated interference directions (deg)"),
        ("--q", int, "grid points per rotation axis"),
        ("--rounds", int, "sequential-update rounds"),
        ("--gs-iters", int, "Gibbs-sampling iterations per round"),
        ("--candidates", int, "candidates per Gibbs iteration"),
        ("--max-shift", int, "adjacent-candidate shift radius (grid steps)"),
        ("--mu", float, "Gibbs selection sharpness"),
        ("--seed", int, "random seed"),
        ("--trials", int, "Monte-Carlo trials per K"),
        ("--k-range", str, "Monte-Carlo K values as LO:HI (HI excluded)"),
        ("--out", str, "output directory"),
        ("--emit", str, "comma-separated outputs among csv,json,svg"),
        ("--arv", str, "pattern: rotation alpha,beta,gamma (deg) instead of solving"),
        ("--step", float, "pattern: angular grid step (deg)"),
        ("--axis", str, "pattern: angular axis range LO:HI (deg)"),
        ("--jobs", int, "montecarlo: worker processes"),
    ]
    for flag, typ, help_ in opts:
        parser.add_argument(flag, type=typ, default=None, help=help_)
    return parser


def _attach_negative_values(argv):
    # argparse reads "--interferers -10,30" as two flags; bind such values with "="
    out = []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is not None and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def parse_spec(argv) -> RunSpec:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    values = read_config(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key not in ("command", "config") and value is not None:
            values[key] = value
    return RunSpec(command=args.command, **values)


# -- output helpers ------------------------------------------------------------


def fmt(x) -> str:
    return format(float(x), ".12g")


def to_db(gain):
    return np.maximum(10.0 * np.log10(np.maximum(gain, 1e-300)), DB_FLOOR)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_record(path, spec: RunSpec, outputs: dict, elapsed: float):
    record = {
        "command": spec.command,
        "version": __version__,
        "seed": spec.seed,
        "config": spec.echo(),
        "outputs": outputs,
        "timing": {"elapsed_s": elapsed},
    }
    Path(path).write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")


def _degrees(r: ArrayRotation | None):
    return None if r is None else [float(v) for v in r.degrees()]


# -- commands ------------------------------------------------------------------


def _pattern_rotation(spec, array, prob):
    r = spec.rotation()
    if r is not None:
        return r, "given"
    report = analyze(array, prob)
    if report.feasible:
        return report.witness, "analysis"
    return optimize(array, prob, spec.optimizer()).best_arv, "optimize"


def cmd_pattern(spec: RunSpec, out: Path) -> dict:
    array, prob = spec.array(), spec.problem()
    try:
        lo, hi = (float(v) for v in spec.axis.split(":"))
    except ValueError as exc:
        raise InputError(f"bad --axis {spec.axis!r}") from exc
    if not spec.step > 0 or hi <= lo:
        raise InputError("pattern grid needs step > 0 and LO < HI")
    grid_deg = lo + spec.step * np.arange(int(np.ceil((hi - lo) / spec.step - 1e-9)))
    grid = np.deg2rad(grid_deg)

    r, source = _pattern_rotation(spec, array, prob)
    curves = {}
    for name, rot in (("raa", r), ("foa", FOA)):
        w = zf_weights(array, rot, prob)
        curves[name] = np.asarray(beam_gain(array, rot, w, grid))

    if spec.emits("csv"):
        for name, gains in curves.items():
            write_csv(out / f"pattern_{name}.csv", ["theta_deg", "gain_linear", "gain_db"],
                      zip(grid_deg, gains, to_db(gains)))
    if spec.emits("svg"):
        chart = LineChart("Beam pattern: RAA vs FOA", "theta (deg)", "beam gain (dB)", xlim=(lo, hi))
        chart.add("RAA", grid_deg, to_db(curves["raa"]))
        chart.add("FOA", grid_deg, to_db(curves["foa"]), dashed=True)
        chart.vlines.append((_on_axis(spec.theta0, lo), "theta0"))
        chart.vlines.extend((_on_axis(t, lo), f"theta{i}") for i, t in enumerate(spec.interferer_list(), 1))
        (out / "pattern.svg").write_text(chart.render())
    desired = np.array([prob.desired])
    return {
        "rotation_source": source,
        "arv_deg": _degrees(r),
        "desired_gain_raa": float(beam_gain(array, r, zf_weights(array, r, prob), desired)[0]),
        "desired_gain_foa": float(beam_gain(array, FOA, zf_weights(array, FOA, prob), desired)[0]),
        "full_gain": array.full_gain,
    }


def _on_axis(deg, lo):
    return (deg - lo) % 360.0 + lo


def cmd_analyze(spec: RunSpec, out: Path) -> dict:
    array, prob = spec.array(), spec.problem()
    try:
        report = analyze(array, prob)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    result = report.to_dict()
    result["full_gain"] = array.full_gain
    return result


def cmd_optimize(spec: RunSpec, out: Path) -> dict:
    array, prob, cfg = spec.array(), spec.problem(), spec.optimizer()
    result = optimize(array, prob, cfg)
    if spec.emits("csv"):
        write_csv(out / "trace.csv", ["round", "phase", "gain"], ((t.round, t.phase, t.gain) for t in result.trace))
    return {
        "best_arv_deg": _degrees(result.best_arv),
        "best_index": list(result.best_index),
        "best_gain": result.best_gain,
        "foa_gain": result.foa_gain,
        "full_gain": array.full_gain,
        "evaluations": result.evaluations,
    }


def cmd_montecarlo(spec: RunSpec, out: Path) -> dict:
    array, cfg = spec.array(), spec.optimizer()
    if spec.trials < 1:
        raise InputError("--trials must be at least 1")
    rows, _ = monte_carlo(array, spec.k_values(), spec.trials, cfg, spec.seed, np.deg2rad(spec.theta0), spec.jobs)
    if spec.emits("csv"):
        write_csv(
            out / "montecarlo.csv",
            ["K", "mean_gain_raa", "mean_gain_foa", "std_raa", "std_foa", "trials"],
            ((r.k, r.mean_gain_raa, r.mean_gain_foa, r.std_raa, r.std_foa, r.trials) for r in rows),
        )
    if spec.emits("svg"):
        ks = [r.k for r in rows]
        chart = LineChart("Desired-direction gain vs number of interferers", "K", "mean beam gain")
        chart.add("RAA", ks, [r.mean_gain_raa for r in rows], markers=True)
        chart.add("FOA", ks, [r.mean_gain_foa for r in rows], dashed=True, markers=True)
        (out / "montecarlo.svg").write_text(chart.render())
    return {"rows": [vars(r) for r in rows], "full_gain": array.full_gain}


HANDLERS = {"pattern": cmd_pattern, "analyze": cmd_analyze, "optimize": cmd_optimize, "montecarlo": cmd_montecarlo}


def run(spec: RunSpec) -> dict:
    out = Path(spec.out)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    outputs = HANDLERS[spec.command](spec, out)
    elapsed = time.perf_counter() - start
    if spec.emits("json"):
        write_record(out / f"{spec.command}.json", spec, outputs, elapsed)
        write_config(out / f"{spec.command}.cfg", spec)
    return outputs


def main(argv=None) -> int:
    try:
        spec = parse_spec(argv)
        run(spec)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"raa-nullsteer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NullSteerError as exc:
        print(f"raa-nullsteer: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
