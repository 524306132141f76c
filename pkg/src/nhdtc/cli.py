"""Deterministic experiment runner.

Every pipeline of the library is exposed as a preset producing CSV data
files plus a manifest that echoes the fully resolved configuration and
the content digest of every output.  Nothing in the model draws random
numbers, so a given configuration reproduces its outputs byte for byte.

Presets
-------
traces       imbalance traces per protocol and imperfection
overlaps     spectral overlap weights of reference states vs quasienergy
gap-scaling  gap-deviation scaling tables with alpha and beta fits
melting      KL maps, per-site peak variance and transition points
asymmetry    beta(gamma) for the unbalanced nonreciprocal protocol
theta-sweep  imbalance traces for rotated initial states
ptcheck      symmetry certificates over a small parameter grid
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .basis import FULL, SECTOR, BasisDescriptor
from .diagnostics import melt_scan
from .dynamics import (RENORMALIZE, StateVector, evolve_trace, init_polarized,
                       init_theta, spin_inversion)
from .errors import InvalidConfig, ResourceError
from .fitting import extract_alpha, fit_log_exponent, gamma_sweep
from .model import (DENSE_DIM_LIMIT, NONRECIPROCAL, RECIPROCAL, DriveParams,
                    FloquetOperator, with_protocol)
from .spectral import eigendecompose, overlap_weights
from .symmetry import PARITY_LADDER, pt_report

EVOLVE_DIM_LIMIT = 2**26


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat, text-serializable description of one run.

    Empty grids mean "use the preset default"; the manifest always echoes
    the resolved values.  t1 = t2 = 0 selects the automatic 1/(2*jz).
    """

    preset: str = "traces"
    pipeline: str = ""
    L: int = 8
    sizes: tuple[int, ...] = (4, 5, 6, 7, 8)
    eps_values: tuple[float, ...] = ()
    protocols: tuple[str, ...] = (RECIPROCAL, NONRECIPROCAL)
    gamma_values: tuple[float, ...] = (0.0, 0.1, 0.2)
    theta_values: tuple[float, ...] = (0.0, math.pi / 16, math.pi / 8)
    n_samples: int = 100
    n_periods: int = 100
    jz: float = 1.0
    t1: float = 0.0
    t2: float = 0.0
    swap_phase_base: float = math.pi / 2
    norm_policy: str = RENORMALIZE
    basis_kind: str = SECTOR
    pt_variant: str = PARITY_LADDER
    out_dir: str = "runs"
    workers: int = 1
    dense_dim_limit: int = DENSE_DIM_LIMIT
    evolve_dim_limit: int = EVOLVE_DIM_LIMIT
    fit_dominance_floor: float = 0.05
    gap_window: float = 0.5
    delta_floor: float = 1e-13
    flatness_ratio: float = 2.0

    def drive(self, L: int | None = None) -> DriveParams:
        return DriveParams(
            L=self.L if L is None else L,
            jz=self.jz,
            t1=self.t1 or None,
            t2=self.t2 or None,
            swap_phase_base=self.swap_phase_base,
        )

    def to_text(self) -> str:
        lines = [f"{f.name}={_format_value(getattr(self, f.name))}"
                 for f in fields(self)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        known = {f.name: f for f in fields(cls)}
        values = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep or key not in known:
                raise InvalidConfig(f"unrecognized config line {raw!r}")
            values[key] = _parse_value(value, str(known[key].type))
        return cls(**values)


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(float(value))  # shortest round-trip form, plain float
    return str(value)


def _parse_value(text: str, type_name: str):
    text = text.strip()
    if type_name == "int":
        return int(text)
    if type_name == "float":
        return float(text)
    if type_name == "str":
        return text
    if type_name.startswith("tuple[int"):
        return tuple(int(t) for t in text.split(",") if t.strip())
    if type_name.startswith("tuple[float"):
        return tuple(float(t) for t in text.split(",") if t.strip())
    if type_name.startswith("tuple[str"):
        return tuple(t.strip() for t in text.split(",") if t.strip())
    raise InvalidConfig(f"unsupported config field type {type_name!r}")


def parse_overrides(pairs) -> dict:
    """key=value strings -> typed config field values."""
    known = {f.name: f for f in fields(ExperimentConfig)}
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or key not in known:
            raise InvalidConfig(
                f"override {pair!r} is not a known key=value setting")
        out[key] = _parse_value(value, str(known[key].type))
    return out


def _format_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def emit_csv(columns, path: Path) -> str:
    """Write named columns as CSV (17 significant digits for floats) and
    return the sha256 digest of the file contents."""
    names = [name for name, _ in columns]
    series = [list(values) for _, values in columns]
    lengths = {len(s) for s in series}
    if len(lengths) > 1:
        raise InvalidConfig(f"ragged columns for {path.name}: {lengths}")
    rows = zip(*series) if series and lengths != {0} else []
    try:
        with open(path, "w", encoding="ascii", newline="\n") as handle:
            handle.write(",".join(names) + "\n")
            for row in rows:
                handle.write(",".join(_format_cell(cell) for cell in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return file_digest(path)


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    config: ExperimentConfig
    timings: list[tuple[str, float]]
    files: list[tuple[str, str, int]]  # name, sha256, bytes

    def to_text(self) -> str:
        lines = [f"artifact_version={__version__}"]
        lines += [f"config.{line}" for line in
                  self.config.to_text().strip().splitlines()]
        lines += [f"stage.{name}.seconds={seconds:.3f}"
                  for name, seconds in self.timings]
        lines += [f"file.{name}.sha256={digest}" for name, digest, _ in self.files]
        lines += [f"file.{name}.bytes={size}" for name, _, size in self.files]
        return "\n".join(lines) + "\n"


class _Runner:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.out = Path(config.out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.timings: list[tuple[str, float]] = []
        self.files: list[tuple[str, str, int]] = []

    def emit(self, name: str, columns) -> None:
        digest = emit_csv(columns, self.out / name)
        self.files.append((name, digest, (self.out / name).stat().st_size))

    def emit_text(self, name: str, text: str) -> None:
        path = self.out / name
        path.write_text(text, encoding="ascii")
        self.files.append((name, file_digest(path), path.stat().st_size))

    def timed(self, name: str, fn) -> None:
        start = time.perf_counter()
        fn()
        self.timings.append((name, time.perf_counter() - start))

    def guard_evolution(self, kind: str, L: int) -> None:
        dim = BasisDescriptor(L, kind).dim
        if dim > self.config.evolve_dim_limit:
            raise ResourceError(
                f"evolution needs a {dim}-amplitude state "
                f"(limit {self.config.evolve_dim_limit})")

    def finish(self) -> RunManifest:
        manifest = RunManifest(self.config, self.timings, self.files)
        (self.out / "manifest.txt").write_text(manifest.to_text(),
                                               encoding="ascii")
        return manifest


def _grid(start, stop, step) -> tuple[float, ...]:
    return tuple(float(x) for x in np.round(np.arange(start, stop, step), 10))


# eps grids used when a preset is run without an explicit eps_values
_PRESET_EPS = {
    "traces": (0.0, 0.1, 0.2, 0.3),
    "overlaps": _grid(0.0, 0.5001, 0.025),
    "gap-scaling": (0.25, 0.30, 0.35, 0.40, 0.45),
    "melting": _grid(0.01, 0.685, 0.01),
    "asymmetry": (0.25, 0.30, 0.35, 0.40, 0.45),
    "theta-sweep": (0.0, 0.2, 0.3),
    "ptcheck": (0.0, 0.2, 0.3, 0.4),
}


def resolve_config(config: "ExperimentConfig") -> "ExperimentConfig":
    """Fill preset-dependent defaults so the manifest echoes exactly what
    the run used: empty eps grids and, for the symmetry preset, sizes
    beyond the dense-certificate range."""
    if config.preset in _PRESET_EPS and not config.eps_values:
        config = replace(config, eps_values=_PRESET_EPS[config.preset])
    if config.preset == "ptcheck":
        sizes = tuple(L for L in config.sizes if L <= 4) or (2, 3)
        config = replace(config, sizes=sizes)
    return config


def _trace_columns(trace):
    cols = [("n", np.arange(len(trace.total))), ("I_total", trace.total)]
    cols += [(f"I_{j + 1}", trace.per_site[:, j])
             for j in range(trace.per_site.shape[1])]
    return cols


def _run_traces(run: _Runner) -> None:
    cfg = run.config
    run.guard_evolution(cfg.basis_kind, cfg.L)
    for protocol in cfg.protocols:
        for eps in cfg.eps_values:
            params = with_protocol(cfg.drive(), protocol, eps)
            state = init_polarized(cfg.L, cfg.basis_kind, cfg.norm_policy)
            trace = evolve_trace(params, state, cfg.n_periods)
            run.emit(f"trace_{protocol}_eps{eps:g}.csv", _trace_columns(trace))


def _cat_state(L: int, kind: str, sign: float) -> StateVector:
    polarized = init_polarized(L, kind)
    partner = spin_inversion(polarized)
    amps = (polarized.amps + sign * partner.amps) / math.sqrt(2.0)
    return StateVector(polarized.desc, amps, polarized.norm_policy)


def _run_overlaps(run: _Runner) -> None:
    cfg = run.config
    L = cfg.L
    refs = {
        "polarized": init_polarized(L, cfg.basis_kind),
        "cat_plus": _cat_state(L, cfg.basis_kind, +1.0),
        "cat_minus": _cat_state(L, cfg.basis_kind, -1.0),
    }
    for protocol in cfg.protocols:
        spectra = []
        for eps in cfg.eps_values:
            params = with_protocol(cfg.drive(), protocol, eps)
            op = FloquetOperator(params, BasisDescriptor(L, cfg.basis_kind),
                                 dense_limit=cfg.dense_dim_limit)
            spectra.append((eps, eigendecompose(op)))
        for ref_name, ref in refs.items():
            rows = {"eps": [], "k": [], "phase": [], "decay": [],
                    "re_weight": [], "im_weight": [], "abs_weight": []}
            for eps, spectrum in spectra:
                weights = overlap_weights(spectrum, ref)
                for k in range(spectrum.dim):
                    rows["eps"].append(eps)
                    rows["k"].append(k)
                    rows["phase"].append(spectrum.phase[k])
                    rows["decay"].append(spectrum.decay[k])
                    rows["re_weight"].append(weights[k].real)
                    rows["im_weight"].append(weights[k].imag)
                    rows["abs_weight"].append(abs(weights[k]))
            run.emit(f"overlaps_{protocol}_{ref_name}.csv", list(rows.items()))


def _run_gap_scaling(run: _Runner) -> None:
    cfg = run.config
    eps_values = cfg.eps_values
    base = cfg.drive(L=min(cfg.sizes))
    for protocol in cfg.protocols:
        alpha_rows, decay_fits = extract_alpha(
            base, protocol, eps_values, cfg.sizes, kind=cfg.basis_kind,
            floor=cfg.delta_floor, dominance_floor=cfg.fit_dominance_floor,
            gap_window=cfg.gap_window)
        gap_cols = {"eps": [], "L": [], "delta_e": []}
        for eps, fit in zip(eps_values, decay_fits):
            for L, delta in fit.points:
                gap_cols["eps"].append(eps)
                gap_cols["L"].append(int(L))
                gap_cols["delta_e"].append(delta)
        run.emit(f"gap_deviation_{protocol}.csv", list(gap_cols.items()))
        run.emit(f"alpha_{protocol}.csv", [
            ("eps", alpha_rows[:, 0]),
            ("alpha", alpha_rows[:, 1]),
            ("stderr_alpha", [f.stderr["alpha"] for f in decay_fits]),
            ("r_squared", [f.r_squared for f in decay_fits]),
        ])
        exponent = fit_log_exponent(alpha_rows)
        run.emit(f"exponent_{protocol}.csv", [
            ("beta", [exponent.params["beta"]]),
            ("stderr_beta", [exponent.stderr["beta"]]),
            ("intercept", [exponent.params["intercept"]]),
            ("r_squared", [exponent.r_squared]),
            ("eps_min", [min(eps_values)]),
            ("eps_max", [max(eps_values)]),
        ])


def _run_melting(run: _Runner) -> None:
    cfg = run.config
    run.guard_evolution(cfg.basis_kind, cfg.L)
    for protocol in cfg.protocols:
        scan = melt_scan(cfg.drive(), cfg.eps_values, protocol=protocol,
                         n_samples=cfg.n_samples, kind=cfg.basis_kind,
                         workers=cfg.workers,
                         flatness_ratio=cfg.flatness_ratio)
        kl_cols = {"eps": [], "omega": [], "kl": []}
        for i, eps in enumerate(scan.eps_grid):
            for k, omega in enumerate(scan.freqs):
                kl_cols["eps"].append(eps)
                kl_cols["omega"].append(omega)
                kl_cols["kl"].append(scan.kl[i, k])
        run.emit(f"kl_{protocol}.csv", list(kl_cols.items()))
        run.emit(f"variance_{protocol}.csv",
                 [("eps", scan.eps_grid), ("variance", scan.variance)])
        run.emit(f"transition_{protocol}.csv", [("eps_c", [scan.eps_c])])


def _run_asymmetry(run: _Runner) -> None:
    cfg = run.config
    base = cfg.drive(L=min(cfg.sizes))
    sweep = gamma_sweep(base, cfg.gamma_values, cfg.eps_values, cfg.sizes,
                        kind=cfg.basis_kind, floor=cfg.delta_floor,
                        dominance_floor=cfg.fit_dominance_floor,
                        gap_window=cfg.gap_window)
    run.emit("gamma_exponents.csv", [
        ("gamma", [g for g, _ in sweep]),
        ("beta", [fit.params["beta"] for _, fit in sweep]),
        ("stderr_beta", [fit.stderr["beta"] for _, fit in sweep]),
        ("intercept", [fit.params["intercept"] for _, fit in sweep]),
        ("r_squared", [fit.r_squared for _, fit in sweep]),
    ])


def _run_theta_sweep(run: _Runner) -> None:
    cfg = run.config
    run.guard_evolution(FULL, cfg.L)
    for protocol in cfg.protocols:
        cols = {"theta": [], "eps": [], "n": [], "imbalance": [],
                "normalized": []}
        for theta in cfg.theta_values:
            for eps in cfg.eps_values:
                params = with_protocol(cfg.drive(), protocol, eps)
                state = init_theta(cfg.L, theta, cfg.norm_policy)
                trace = evolve_trace(params, state, cfg.n_periods)
                reference = trace.total[0]
                for n, value in enumerate(trace.total):
                    cols["theta"].append(theta)
                    cols["eps"].append(eps)
                    cols["n"].append(n)
                    cols["imbalance"].append(value)
                    cols["normalized"].append(value / reference)
        run.emit(f"theta_{protocol}.csv", list(cols.items()))


def _run_ptcheck(run: _Runner) -> None:
    cfg = run.config
    blocks = []
    for L in cfg.sizes:
        for protocol in cfg.protocols:
            for eps in cfg.eps_values:
                params = with_protocol(cfg.drive(L=L), protocol, eps)
                report = pt_report(params, cfg.pt_variant)
                blocks.append(report.to_text())
    run.emit_text("symmetry_reports.txt", "\n\n".join(blocks) + "\n")


_PRESETS = {
    "traces": ("traces", _run_traces),
    "overlaps": ("overlaps", _run_overlaps),
    "gap-scaling": ("gap_scaling", _run_gap_scaling),
    "melting": ("melting", _run_melting),
    "asymmetry": ("asymmetry", _run_asymmetry),
    "theta-sweep": ("theta_sweep", _run_theta_sweep),
    "ptcheck": ("ptcheck", _run_ptcheck),
}

# presets whose natural system size differs from the global default
_PRESET_L = {"overlaps": 6}


def run(config: ExperimentConfig) -> RunManifest:
    """Execute one preset and write its outputs plus manifest."""
    if config.preset not in _PRESETS:
        raise InvalidConfig(
            f"unknown preset {config.preset!r}; choose from "
            f"{sorted(_PRESETS)}")
    runner = _Runner(resolve_config(config))
    stage_name, stage = _PRESETS[config.preset]
    runner.timed(stage_name, lambda: stage(runner))
    return runner.finish()


def _build_config(args, require_pipeline: bool = False) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_text(Path(args.config).read_text())
    else:
        config = ExperimentConfig()
    overrides = parse_overrides(args.overrides)
    if getattr(args, "preset", None):
        overrides["preset"] = args.preset
    if getattr(args, "out", None):
        overrides["out_dir"] = args.out
    config = replace(config, **overrides)
    if require_pipeline:
        if not config.pipeline:
            raise InvalidConfig("sweep requires pipeline=<preset name>")
        if not config.eps_values:
            raise InvalidConfig("sweep requires an explicit eps_values grid")
        config = replace(config, preset=config.pipeline)
    if config.preset in _PRESET_L and "L" not in overrides and not args.config:
        config = replace(config, L=_PRESET_L[config.preset])
    return config


def _cmd_run(args) -> int:
    manifest = run(_build_config(args))
    print(f"wrote {len(manifest.files)} files to {manifest.config.out_dir}")
    for name, digest, _ in manifest.files:
        print(f"  {name}  sha256={digest[:16]}...")
    return 0


def _cmd_sweep(args) -> int:
    manifest = run(_build_config(args, require_pipeline=True))
    print(f"wrote {len(manifest.files)} files to {manifest.config.out_dir}")
    return 0


def _cmd_ptcheck(args) -> int:
    args.preset = "ptcheck"
    manifest = run(_build_config(args))
    print((Path(manifest.config.out_dir) / "symmetry_reports.txt").read_text())
    return 0


def _cmd_validate(_args) -> int:
    from .validate import run_validation
    return run_validation()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nhdtc",
        description="deterministic two-chain Floquet drive experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a named preset")
    run_p.add_argument("preset", choices=sorted(_PRESETS))
    run_p.add_argument("overrides", nargs="*", metavar="key=value")
    run_p.add_argument("--config", help="config file of key=value lines")
    run_p.add_argument("--out", help="output directory")
    run_p.set_defaults(fn=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="free-form pipeline with explicit grids")
    sweep_p.add_argument("overrides", nargs="*", metavar="key=value")
    sweep_p.add_argument("--config", help="config file of key=value lines")
    sweep_p.add_argument("--out", help="output directory")
    sweep_p.set_defaults(fn=_cmd_sweep)

    pt_p = sub.add_parser("ptcheck", help="print symmetry certificates")
    pt_p.add_argument("overrides", nargs="*", metavar="key=value")
    pt_p.add_argument("--config", help="config file of key=value lines")
    pt_p.add_argument("--out", help="output directory")
    pt_p.set_defaults(fn=_cmd_ptcheck)

    val_p = sub.add_parser("validate", help="run the invariant self-checks")
    val_p.set_defaults(fn=_cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (InvalidConfig, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
