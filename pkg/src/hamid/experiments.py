"""Benchmark experiment runner: deterministic, file-based reproductions of
the identification studies (convergence tables, perturbation-magnitude
sweeps, continuation traces, the singular-configuration demo, a time-step
order check, and wall-clock scaling across system sizes).

Every run writes CSV/JSON artifacts plus a manifest.json holding all
resolved parameters, so a run is reproducible from its manifest alone.
CSV floats are formatted at 12 significant digits and runs are seeded, so
identical configs produce byte-identical CSVs.
"""
from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .continuation import (
    ContinuationConfig,
    ContinuationReport,
    continuation_identify,
    m0_seed,
    singularity_probe,
)
from .fields import SinSqEnvelope, TimeGrid, field_to_config, sample_field
from .linalg import decompose_target, matrix_to_json, spec_norm
from .models import (
    TWO_LEVEL_DEFAULT_STEPS,
    DoubleWellParams,
    PerturbationSpec,
    SpatialGrid,
    TwoLevelParams,
    build_double_well,
    perturb_pair,
    pi_pulse_field,
    two_level_model,
)
from .newton import (
    FLAG_CONVERGED,
    NewtonConfig,
    NewtonReport,
    SingularJacobianError,
    grams_to_jacobians,
    hermitian_residual,
    newton_identify,
    reduce_system,
    reduced_condition,
    solve_update,
)
from .propagation import HamiltonianPair, propagate_final, propagate_with_gram
from .reporting import format_float

KINDS = (
    "newton-two-level",
    "newton-double-well",
    "continuation-two-level",
    "continuation-double-well",
    "eta-sweep",
    "singularity-demo",
    "cn-order-check",
    "cpu-scaling",
)

REGIME_RECOVERS = "RecoversOriginal"
REGIME_ALTERNATE = "AlternateSolution"
REGIME_DIVERGES = "Diverges"

# classification thresholds: between the recovered scales (~1e-11) and the
# alternate-solution scales (~1e-7)
RECOVERY_DEV_TOL = 1e-9

# Benchmark two-level configuration. The plain model (delta = 1e-7, skew
# = 0) has an exactly time-symmetric envelope, which makes the propagator
# complex-symmetric and leaves the coupling's off-diagonal invisible to
# identification at double precision: the target simply does not carry that
# information. The benchmark detuning and envelope skew below are the
# smallest departures that make all operator directions observable; both
# remain plain config fields.
BENCH_TWO_LEVEL_DELTA = 1e-4
BENCH_TWO_LEVEL_SKEW = 0.1

# The truncated-eigenbasis problem driven by a resonant pulse has weakly
# visible coupling directions (condition numbers a few 1e12); the refusal
# threshold for the double-well runs sits well above them and well below
# the exactly singular configurations (~1e17).
BENCH_DOUBLE_WELL_COND_THRESHOLD = 1e15
BENCH_DOUBLE_WELL_TOL = 1e-8

# Identification grid for the double-well benchmarks. The fully resolved
# physics grid (DOUBLE_WELL_DEFAULT_STEPS) makes the off-resonant coupling
# directions nearly invisible (their alias-level visibility shrinks with
# dt^2) and the Newton system effectively singular; 2**16 steps still
# resolves the carrier (~40 samples per period) while keeping every
# direction above the noise floor.
BENCH_DOUBLE_WELL_STEPS = 2**16


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 1
    out_dir: str = ""
    model: dict = field(default_factory=dict)
    perturbation: dict = field(default_factory=dict)
    newton: dict = field(default_factory=dict)
    continuation: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    n_steps: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; choose from {KINDS}")
        if not self.out_dir:
            self.out_dir = f"runs/{self.kind}"

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        if "kind" not in payload:
            raise ValueError("experiment config needs a 'kind' field")
        known = {
            "kind",
            "seed",
            "out_dir",
            "model",
            "perturbation",
            "newton",
            "continuation",
            "sweep",
            "n_steps",
        }
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**payload)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "model": self.model,
            "perturbation": self.perturbation,
            "newton": self.newton,
            "continuation": self.continuation,
            "sweep": self.sweep,
            "n_steps": self.n_steps,
        }


@dataclass
class RunResult:
    out_dir: Path
    files: list
    wall_seconds: float
    summary: dict


@dataclass
class EtaSweepRun:
    eta: float
    seed: int
    converged: bool
    dev_h0: Optional[float]
    dev_h1: Optional[float]
    dev_u: Optional[float]
    regime: str


@dataclass
class EtaSweepResult:
    runs: list
    aggregates: list  # one dict per eta


def classify_devs(dev_h0, dev_h1, dev_u, tol: float = RECOVERY_DEV_TOL) -> str:
    if dev_u is None or not np.isfinite(dev_u) or dev_u > tol:
        return REGIME_DIVERGES
    if (
        dev_h0 is not None
        and dev_h1 is not None
        and dev_h0 <= tol
        and dev_h1 <= tol
    ):
        return REGIME_RECOVERS
    return REGIME_ALTERNATE


def classify_run(report: NewtonReport, tol: float = RECOVERY_DEV_TOL) -> str:
    fin = report.final()
    if fin is None:
        return REGIME_DIVERGES
    return classify_devs(fin.dev_h0, fin.dev_h1, fin.dev_u, tol)


def _newton_config(overrides: dict, **defaults) -> NewtonConfig:
    merged = {"tol": 1e-12, "max_iters": 50, "singular_cond_threshold": 1e12}
    merged.update(defaults)
    merged.update(overrides or {})
    return NewtonConfig(**merged)


def _two_level_setup(cfg: ExperimentConfig, benchmark: bool = True):
    model_overrides = dict(cfg.model or {})
    n_steps = cfg.n_steps or model_overrides.pop("n_steps", None) or TWO_LEVEL_DEFAULT_STEPS
    defaults = {}
    if benchmark:
        defaults = {"delta": BENCH_TWO_LEVEL_DELTA, "envelope_skew": BENCH_TWO_LEVEL_SKEW}
    defaults.update(model_overrides)
    params = TwoLevelParams(**defaults)
    pair, field_desc = two_level_model(params)
    grid = TimeGrid(t_f=params.t_f, n_steps=int(n_steps))
    samples = sample_field(field_desc, grid)
    return params, pair, field_desc, grid, samples


def _double_well_setup(cfg: ExperimentConfig):
    overrides = dict(cfg.model or {})
    n_steps = cfg.n_steps or overrides.pop("n_steps", None)
    grid_cfg = overrides.pop("grid", None)
    if grid_cfg is not None:
        overrides["grid"] = SpatialGrid(**grid_cfg)
    params = DoubleWellParams(**overrides)
    model = build_double_well(params)
    if n_steps is None:
        n_steps = BENCH_DOUBLE_WELL_STEPS
    grid = TimeGrid(t_f=params.t_f, n_steps=int(n_steps))
    field_desc = pi_pulse_field(model)
    samples = sample_field(field_desc, grid)
    return params, model, field_desc, grid, samples


def _write_csv(path: Path, header: list, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def _manifest(out: Path, cfg: ExperimentConfig, resolved: dict, wall: float, files: list) -> Path:
    config_bytes = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    payload = {
        "kind": cfg.kind,
        "config": cfg.to_dict(),
        "config_sha256": hashlib.sha256(config_bytes).hexdigest(),
        "resolved": resolved,
        "wall_seconds": wall,
        "outputs": [f.name for f in files],
    }
    path = out / "manifest.json"
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=float)
        fh.write("\n")
    return path


def _sweep_seed(base_seed: int, eta_index: int, rep: int) -> int:
    return base_seed + 1000 * eta_index + rep


def _sweep_one(args):
    """One (eta, seed) identification, runnable in a worker process."""
    (model_kwargs, n_steps, newton_kwargs, eta, seed) = args
    params = TwoLevelParams(**model_kwargs)
    pair, field_desc = two_level_model(params)
    grid = TimeGrid(t_f=params.t_f, n_steps=n_steps)
    samples = sample_field(field_desc, grid)
    u0 = np.eye(pair.dim, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    guess = perturb_pair(pair, PerturbationSpec(eta=eta, seed=seed))
    _, report = newton_identify(
        u0, u_tar, guess, samples, grid, NewtonConfig(**newton_kwargs), truth=pair
    )
    fin = report.final()
    return EtaSweepRun(
        eta=eta,
        seed=seed,
        converged=report.flag == FLAG_CONVERGED,
        dev_h0=fin.dev_h0 if fin else None,
        dev_h1=fin.dev_h1 if fin else None,
        dev_u=fin.dev_u if fin else None,
        regime=classify_run(report),
    )


def run_eta_sweep(cfg: ExperimentConfig) -> EtaSweepResult:
    sweep = dict(cfg.sweep or {})
    etas = sweep.get("etas")
    if etas is None:
        etas = np.logspace(-5, -2, 13).tolist()
    n_seeds = int(sweep.get("n_seeds", 15))
    k_max = int(sweep.get("k_max", 9))
    workers = int(sweep.get("workers", 1))
    model_kwargs = {
        "delta": BENCH_TWO_LEVEL_DELTA,
        "envelope_skew": BENCH_TWO_LEVEL_SKEW,
    }
    model_kwargs.update(cfg.model or {})
    n_steps = int(cfg.n_steps or TWO_LEVEL_DEFAULT_STEPS)
    newton_kwargs = {"tol": 1e-12, "max_iters": k_max, "singular_cond_threshold": 1e12}
    newton_kwargs.update(cfg.newton or {})
    jobs = [
        (model_kwargs, n_steps, newton_kwargs, float(eta), _sweep_seed(cfg.seed, i, r))
        for i, eta in enumerate(etas)
        for r in range(n_seeds)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_sweep_one, jobs))
    else:
        runs = [_sweep_one(job) for job in jobs]
    runs.sort(key=lambda r: (r.eta, r.seed))
    aggregates = []
    for eta in sorted({r.eta for r in runs}):
        group = [r for r in runs if r.eta == eta]
        counts = {
            REGIME_RECOVERS: sum(r.regime == REGIME_RECOVERS for r in group),
            REGIME_ALTERNATE: sum(r.regime == REGIME_ALTERNATE for r in group),
            REGIME_DIVERGES: sum(r.regime == REGIME_DIVERGES for r in group),
        }
        # majority regime; ties resolve toward the worse outcome
        label = max(
            (REGIME_DIVERGES, REGIME_ALTERNATE, REGIME_RECOVERS),
            key=lambda name: counts[name],
        )
        devs = {
            name: np.array([getattr(r, name) for r in group if getattr(r, name) is not None])
            for name in ("dev_h0", "dev_h1", "dev_u")
        }
        agg = {"eta": eta, "n_runs": len(group), "label": label}
        agg.update({f"n_{k.lower()}": v for k, v in counts.items()})
        agg["frac_recovers"] = counts[REGIME_RECOVERS] / len(group)
        for name, vals in devs.items():
            agg[f"median_{name}"] = float(np.median(vals)) if vals.size else None
            agg[f"mean_{name}"] = float(np.mean(vals)) if vals.size else None
            agg[f"worst_{name}"] = float(np.max(vals)) if vals.size else None
        aggregates.append(agg)
    return EtaSweepResult(runs=runs, aggregates=aggregates)


SWEEP_AGG_HEADER = [
    "eta",
    "n_runs",
    "n_recoversoriginal",
    "n_alternatesolution",
    "n_diverges",
    "frac_recovers",
    "median_dev_h0",
    "median_dev_h1",
    "median_dev_u",
    "mean_dev_h0",
    "mean_dev_h1",
    "mean_dev_u",
    "worst_dev_h0",
    "worst_dev_h1",
    "worst_dev_u",
    "label",
]


def write_sweep_csvs(result: EtaSweepResult, out: Path) -> list:
    agg_rows = []
    for a in result.aggregates:
        agg_rows.append(
            [format_float(a["eta"]), a["n_runs"]]
            + [a["n_recoversoriginal"], a["n_alternatesolution"], a["n_diverges"]]
            + [format_float(a["frac_recovers"])]
            + [format_float(a[f"{s}_{n}"]) for s in ("median", "mean", "worst") for n in ("dev_h0", "dev_h1", "dev_u")]
            + [a["label"]]
        )
    fig2 = out / "fig2.csv"
    _write_csv(fig2, SWEEP_AGG_HEADER, agg_rows)
    raw = out / "fig2_raw.csv"
    raw_rows = [
        [
            format_float(r.eta),
            r.seed,
            int(r.converged),
            format_float(r.dev_h0),
            format_float(r.dev_h1),
            format_float(r.dev_u),
            r.regime,
        ]
        for r in result.runs
    ]
    _write_csv(raw, ["eta", "seed", "converged", "dev_h0", "dev_h1", "dev_u", "regime"], raw_rows)
    return [fig2, raw]


def write_continuation_csv(report: ContinuationReport, path: Path) -> Path:
    report.write_csv(path)
    return path


def write_cpu_csv(entries: list, path: Path) -> Path:
    rows = [
        [e["label"], e["n_d"], e["n_steps"], e["newton_iterations"], format_float(e["wall_seconds"])]
        for e in entries
    ]
    _write_csv(path, ["label", "n_d", "n_steps", "newton_iterations", "wall_seconds"], rows)
    return path


def emit_plot_data(
    out_dir,
    sweep: Optional[EtaSweepResult] = None,
    continuation_two_level: Optional[ContinuationReport] = None,
    continuation_double_well: Optional[ContinuationReport] = None,
    cpu: Optional[list] = None,
) -> list:
    """Write the figure-analogue CSV files for whichever reports are given.

    Passing an empty report produces a header-only file.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    if sweep is not None:
        files.extend(write_sweep_csvs(sweep, out))
    if continuation_two_level is not None:
        files.append(write_continuation_csv(continuation_two_level, out / "fig3.csv"))
    if continuation_double_well is not None:
        files.append(write_continuation_csv(continuation_double_well, out / "fig6.csv"))
    if cpu is not None:
        files.append(write_cpu_csv(cpu, out / "cpu.csv"))
    return files


def _run_newton_generic(cfg: ExperimentConfig, out: Path, two_level: bool):
    if two_level:
        params, pair, field_desc, grid, samples = _two_level_setup(cfg)
        newton_cfg = _newton_config(cfg.newton)
        eta_default = 1e-4
        resolved_model = {
            "delta": params.delta,
            "mu": params.mu,
            "t_f": params.t_f,
            "e0": params.resolved_e0,
            "envelope_skew": params.envelope_skew,
        }
    else:
        params, model, field_desc, grid, samples = _double_well_setup(cfg)
        pair = model.pair
        newton_cfg = _newton_config(
            cfg.newton,
            tol=BENCH_DOUBLE_WELL_TOL,
            singular_cond_threshold=BENCH_DOUBLE_WELL_COND_THRESHOLD,
        )
        eta_default = 1e-5 if params.n_levels <= 6 else 1e-6
        resolved_model = {
            "mass": params.mass,
            "t_f": params.t_f,
            "n_levels": params.n_levels,
            "grid": {
                "r_min": params.grid.r_min,
                "r_max": params.grid.r_max,
                "n_points": params.grid.n_points,
            },
            "omega_03": model.omega_03,
            "mu_03": model.mu_03,
        }
    pert = dict(cfg.perturbation or {})
    eta = float(pert.get("eta", eta_default))
    pert_seed = int(pert.get("seed", cfg.seed))
    u0 = np.eye(pair.dim, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    guess = perturb_pair(pair, PerturbationSpec(eta=eta, seed=pert_seed))
    recovered, report = newton_identify(u0, u_tar, guess, samples, grid, newton_cfg, truth=pair)
    files = []
    report.write_csv(out / "report.csv")
    report.write_json(out / "report.json")
    files += [out / "report.csv", out / "report.json"]
    with open(out / "recovered.json", "w") as fh:
        json.dump(
            {"h0": matrix_to_json(recovered.h0), "h1": matrix_to_json(recovered.h1)},
            fh,
            indent=2,
        )
        fh.write("\n")
    files.append(out / "recovered.json")
    fin = report.final()
    summary = {
        "flag": report.flag,
        "iterations": report.n_iterations,
        "regime": classify_run(report),
        "final_dev_h0": fin.dev_h0 if fin else None,
        "final_dev_h1": fin.dev_h1 if fin else None,
        "final_dev_u": fin.dev_u if fin else None,
    }
    resolved = {
        "model": resolved_model,
        "field": field_to_config(field_desc),
        "n_steps": grid.n_steps,
        "eta": eta,
        "perturbation_seed": pert_seed,
        "newton": {
            "tol": newton_cfg.tol,
            "max_iters": newton_cfg.max_iters,
            "singular_cond_threshold": newton_cfg.singular_cond_threshold,
        },
    }
    return files, resolved, summary


def _run_continuation_generic(cfg: ExperimentConfig, out: Path, two_level: bool):
    cont = dict(cfg.continuation or {})
    if two_level:
        params, pair, field_desc, grid, samples = _two_level_setup(cfg)
        newton_cfg = _newton_config(cfg.newton)
        n_c = int(cont.pop("n_intermediate", 20))
        fig_name = "fig3.csv"
    else:
        params, model, field_desc, grid, samples = _double_well_setup(cfg)
        pair = model.pair
        newton_cfg = _newton_config(
            cfg.newton,
            tol=BENCH_DOUBLE_WELL_TOL,
            singular_cond_threshold=BENCH_DOUBLE_WELL_COND_THRESHOLD,
        )
        n_c = int(cont.pop("n_intermediate", 30))
        fig_name = "fig6.csv"
    cont_cfg = ContinuationConfig(n_intermediate=n_c, newton=newton_cfg, **cont)
    u0 = np.eye(pair.dim, dtype=complex)
    u_tar = propagate_final(u0, pair, samples, grid)
    recovered, report = continuation_identify(u0, u_tar, samples, grid, cont_cfg, truth=pair)
    files = []
    report.write_csv(out / "stages.csv")
    report.write_csv(out / fig_name)
    report.write_json(out / "stages.json")
    files += [out / "stages.csv", out / fig_name, out / "stages.json"]
    last = report.stages[-1] if report.stages else None
    summary = {
        "flag": report.flag,
        "failed_stage": report.failed_stage,
        "stages": len(report.stages),
        "final_dev_h0": last.dev_h0 if last else None,
        "final_dev_h1": last.dev_h1 if last else None,
        "final_dev_u_stage": last.dev_u_stage if last else None,
    }
    resolved = {
        "field": field_to_config(field_desc),
        "n_steps": grid.n_steps,
        "n_intermediate": n_c,
        "refine_m0": cont_cfg.refine_m0,
        "newton": {
            "tol": newton_cfg.tol,
            "max_iters": newton_cfg.max_iters,
            "singular_cond_threshold": newton_cfg.singular_cond_threshold,
        },
    }
    return files, resolved, summary


def _run_singularity_demo(cfg: ExperimentConfig, out: Path):
    t_f = float((cfg.model or {}).get("t_f", 9000.0))
    n_steps = int(cfg.n_steps or TWO_LEVEL_DEFAULT_STEPS)
    rank_tol = float((cfg.model or {}).get("rank_tolerance", 1e-9))
    grid = TimeGrid(t_f=t_f, n_steps=n_steps)
    u_tar = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    dec = decompose_target(u_tar)
    pair = m0_seed(dec, t_f)
    field_desc = SinSqEnvelope(e0=2.0)  # E(t) = sin^2(pi t / t_f)
    samples = sample_field(field_desc, grid)
    diag = singularity_probe(pair, samples, grid, u_tar, rank_tolerance=rank_tol)
    newton_cfg = _newton_config(cfg.newton)
    u0 = np.eye(2, dtype=complex)
    u_n, g0, g1 = propagate_with_gram(u0, pair, samples, grid)
    system = reduce_system(
        *grams_to_jacobians(g0, g1, grid.dt), hermitian_residual(u_n, u_tar)
    )
    refused = False
    error_text = None
    try:
        solve_update(system, newton_cfg)
    except SingularJacobianError as err:
        refused = True
        error_text = str(err)
    payload = {
        "numerical_rank": diag.numerical_rank,
        "rank_tolerance": diag.rank_tolerance,
        "condition_estimate": diag.condition_estimate,
        "singular_values": list(diag.singular_values),
        "newton_step_refused": refused,
        "error": error_text,
        "seed_h0": matrix_to_json(pair.h0),
    }
    path = out / "diagnostic.json"
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    summary = {
        "numerical_rank": diag.numerical_rank,
        "condition_estimate": diag.condition_estimate,
        "newton_step_refused": refused,
    }
    resolved = {
        "t_f": t_f,
        "n_steps": n_steps,
        "rank_tolerance": rank_tol,
        "field": field_to_config(field_desc),
        "singular_cond_threshold": newton_cfg.singular_cond_threshold,
    }
    return [path], resolved, summary


def _run_cn_order_check(cfg: ExperimentConfig, out: Path):
    from .propagation import cn_error_order

    model = dict(cfg.model or {})
    t_f = float(model.get("t_f", 1.0))
    e_value = float(model.get("field_value", 0.7))
    base_steps = int(cfg.n_steps or model.get("n_steps", 100))
    rng = np.random.default_rng(cfg.seed)
    h0 = rng.normal(size=(2, 2))
    h0 = 0.5 * (h0 + h0.T)
    h1 = np.zeros((2, 2))
    h1[0, 1] = h1[1, 0] = rng.normal()
    pair = HamiltonianPair(h0, h1)
    rows = []
    ratios = {}
    for n in (base_steps, 4 * base_steps):
        ratio = cn_error_order(pair, e_value, t_f, n_steps=n)
        rows.append([n, format_float(ratio)])
        ratios[n] = ratio
    path = out / "order.csv"
    _write_csv(path, ["n_steps", "error_ratio"], rows)
    summary = {"ratios": {str(k): v for k, v in ratios.items()}}
    resolved = {
        "t_f": t_f,
        "field_value": e_value,
        "base_steps": base_steps,
        "h0": matrix_to_json(pair.h0),
        "h1": matrix_to_json(pair.h1),
    }
    return [path], resolved, summary


def _run_cpu_scaling(cfg: ExperimentConfig, out: Path):
    """Matched fixed-iteration identification workloads across system sizes.

    Every run uses the same step count and the same iteration budget (the
    tolerance is set far below reach so the budget is always spent), so the
    recorded wall-clock isolates the cost growth with dimension.
    """
    model = dict(cfg.model or {})
    n_steps = int(cfg.n_steps or model.get("n_steps", 2**15))
    iters = int(model.get("iterations", 3))
    eta = float(model.get("eta", 1e-6))
    entries = []

    def timed(label, pair, samples, grid, threshold):
        budget = NewtonConfig(tol=1e-300, max_iters=iters, singular_cond_threshold=threshold)
        u0 = np.eye(pair.dim, dtype=complex)
        u_tar = propagate_final(u0, pair, samples, grid)
        guess = perturb_pair(pair, PerturbationSpec(eta=eta, seed=cfg.seed))
        t0 = time.perf_counter()
        _, report = newton_identify(
            u0, u_tar, guess, samples, grid, budget, truth=pair
        )
        wall = time.perf_counter() - t0
        entries.append(
            {
                "label": label,
                "n_d": pair.dim,
                "n_steps": grid.n_steps,
                "newton_iterations": report.n_iterations,
                "wall_seconds": wall,
            }
        )

    params = TwoLevelParams(delta=BENCH_TWO_LEVEL_DELTA, envelope_skew=BENCH_TWO_LEVEL_SKEW)
    pair2, field2 = two_level_model(params)
    grid2 = TimeGrid(t_f=params.t_f, n_steps=n_steps)
    timed("two-level", pair2, sample_field(field2, grid2), grid2, 1e30)
    for n_levels in (6, 12):
        dw = build_double_well(DoubleWellParams(n_levels=n_levels))
        gridw = TimeGrid(t_f=dw.params.t_f, n_steps=n_steps)
        samplesw = sample_field(pi_pulse_field(dw), gridw)
        timed(f"double-well-{n_levels}", dw.pair, samplesw, gridw, 1e30)
    path = write_cpu_csv(entries, out / "cpu.csv")
    summary = {"entries": entries}
    resolved = {"n_steps": n_steps, "iterations": iters, "eta": eta}
    return [path], resolved, summary


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if cfg.kind == "newton-two-level":
        files, resolved, summary = _run_newton_generic(cfg, out, two_level=True)
    elif cfg.kind == "newton-double-well":
        files, resolved, summary = _run_newton_generic(cfg, out, two_level=False)
    elif cfg.kind == "continuation-two-level":
        files, resolved, summary = _run_continuation_generic(cfg, out, two_level=True)
    elif cfg.kind == "continuation-double-well":
        files, resolved, summary = _run_continuation_generic(cfg, out, two_level=False)
    elif cfg.kind == "eta-sweep":
        result = run_eta_sweep(cfg)
        files = write_sweep_csvs(result, out)
        labels = {a["eta"]: a["label"] for a in result.aggregates}
        summary = {"labels": {format_float(k): v for k, v in labels.items()}}
        resolved = {
            "etas": [a["eta"] for a in result.aggregates],
            "n_seeds": int((cfg.sweep or {}).get("n_seeds", 15)),
            "k_max": int((cfg.sweep or {}).get("k_max", 9)),
            "n_steps": int(cfg.n_steps or TWO_LEVEL_DEFAULT_STEPS),
            "delta": (cfg.model or {}).get("delta", BENCH_TWO_LEVEL_DELTA),
            "envelope_skew": (cfg.model or {}).get("envelope_skew", BENCH_TWO_LEVEL_SKEW),
        }
    elif cfg.kind == "singularity-demo":
        files, resolved, summary = _run_singularity_demo(cfg, out)
    elif cfg.kind == "cn-order-check":
        files, resolved, summary = _run_cn_order_check(cfg, out)
    elif cfg.kind == "cpu-scaling":
        files, resolved, summary = _run_cpu_scaling(cfg, out)
    else:  # pragma: no cover - guarded by ExperimentConfig
        raise ValueError(cfg.kind)
    wall = time.perf_counter() - t0
    files = list(files)
    files.append(_manifest(out, cfg, resolved, wall, files))
    return RunResult(out_dir=out, files=files, wall_seconds=wall, summary=summary)
