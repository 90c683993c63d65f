"""
Command-line entry point: every experiment as a subcommand writing CSV and
matrix files into the output directory.

Exit codes: 0 success, 1 computation or I/O error, 2 invalid configuration.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from catgate.analysis.figures import fidelity, wigner_grid, wigner_origin
from catgate.analysis.sweeps import (
    bloch_axes,
    bloch_sweep,
    fidelity_curve,
    process_fidelity_and_rate,
)
from catgate.config import RunConfig, load_config, parse_config
from catgate.errors import CatgateError, ConfigError
from catgate.factory import get_gate_model, list_available_models
from catgate.gates.params import GateParams
from catgate.gates.realistic import RealisticGate, balance_window
from catgate.io import write_csv, write_matrix
from catgate.states.constructors import cat
from catgate.tomography.maxlik import maxlik_reconstruct
from catgate.tomography.sampling import read_dataset, sample_homodyne, write_dataset

logger = logging.getLogger("catgate")


def _model(cfg: RunConfig, params: GateParams):
    return get_gate_model(cfg.gate.model, params=params)


def cmd_simulate(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    spec = cfg.input_spec()
    with _model(cfg, params) as model:
        res = model.run(spec)
    row = {
        "theta": spec.theta,
        "phi": spec.phi,
        "p_success": res.p_success,
        "fidelity": res.fidelity_vs_ideal,
        "target_alpha": res.target_alpha_opt,
        "target_fidelity": res.fidelity_fitted,
        "trace_deficit": res.rho_out.trace_deficit,
        "truncation_warning": res.truncation_warning,
        "model": res.model,
    }
    write_csv(out / "gate_result.csv", [row], list(row))
    write_matrix(out / "rho_out.txt", res.rho_out.matrix)
    p = "n/a" if res.p_success is None else f"{res.p_success:.4g}"
    print(f"✓ {res.model}: F = {res.fidelity_vs_ideal:.4f}, P_S = {p}")


def cmd_sweep(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    thetas, phis = bloch_axes(cfg.grid.n_theta, cfg.grid.n_phi)
    grid = bloch_sweep(params, thetas, phis, model=_model(cfg, params), threads=cfg.threads, progress=args.verbose)
    columns = ["theta", "phi", "F", "F_fitted", "target_alpha", "P_S"]
    rows = [dict(zip(columns, row)) for row in grid.rows()]
    rows.append(
        {"theta": "mean", "F": grid.mean_fidelity, "F_fitted": grid.mean_fitted_fidelity, "P_S": grid.mean_success}
    )
    write_csv(out / "bloch_sweep.csv", rows, columns)
    lo, hi = grid.fitted_fidelity_span
    print(f"✓ {len(rows) - 1} cells: F in [{lo:.3f}, {hi:.3f}], mean F = {grid.mean_fitted_fidelity:.4f} "
          f"(at alpha: {grid.mean_fidelity:.4f}), mean P_S = {grid.mean_success:.3g}")
    if grid.failed.any():
        print(f"⚠️  {int(grid.failed.sum())} cells did not herald")


def cmd_curve(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    c = cfg.curve
    n = int(np.floor((c.alpha_max - c.alpha_min) / c.alpha_step + 1e-9)) + 1
    alphas = np.round(c.alpha_min + c.alpha_step * np.arange(n), 12)
    rows = fidelity_curve(alphas, t=c.t, metric=c.metric, progress=args.verbose)
    write_csv(
        out / "fidelity_curve.csv",
        [
            {"alpha": r.alpha, "F_ideal": r.f_ideal, "F_squeezed": r.f_squeezed, "s_opt": r.s_opt, "s_opt_db": r.s_opt_db}
            for r in rows
        ],
        ["alpha", "F_ideal", "F_squeezed", "s_opt", "s_opt_db"],
    )
    print(f"✓ fidelity curve over {len(rows)} amplitudes")


def cmd_wigner(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    with _model(cfg, params) as model:
        res = model.run(cfg.input_spec())
    axis = np.linspace(-cfg.wigner.extent, cfg.wigner.extent, cfg.wigner.points)
    W = wigner_grid(res.rho_out, axis, axis)
    rows = ({"x": x, "p": p, "W": W[i, j]} for i, x in enumerate(axis) for j, p in enumerate(axis))
    write_csv(out / "wigner.csv", rows, ["x", "p", "W"])
    print(f"✓ W(0,0) = {wigner_origin(res.rho_out):.4f}")


def cmd_process(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    value, p_success = process_fidelity_and_rate(params, RealisticGate(params))
    write_csv(out / "process_fidelity.csv", [{"fidelity": value, "p_success": p_success}], ["fidelity", "p_success"])
    print(f"✓ process fidelity = {value:.4f}")


def _tomography_state(cfg: RunConfig, params: GateParams):
    t = cfg.tomography
    if t.state == "gate_output":
        with _model(cfg, params) as model:
            return model.run(cfg.input_spec()).rho_out
    return cat(t.target_alpha, +1 if t.state == "even_cat" else -1, t.cutoff)


def cmd_tomo_sample(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    t = cfg.tomography
    phases = np.pi * np.arange(t.phases) / t.phases
    data = sample_homodyne(_tomography_state(cfg, params), phases, max(t.n_samples // t.phases, 1), t.eta, cfg.seed)
    write_dataset(data, out / t.dataset)
    print(f"✓ {data.n_samples} quadrature samples written to {out / t.dataset}")


def cmd_tomo_reconstruct(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    t = cfg.tomography
    data = read_dataset(out / t.dataset)
    report = maxlik_reconstruct(data, t.cutoff, t.eta_correction, t.max_iter, progress=args.verbose)
    write_matrix(out / "rho_hat.txt", report.rho_hat.matrix)
    write_csv(
        out / "maxlik.csv",
        [{"iteration": k, "log_likelihood": v} for k, v in enumerate(report.loglik)],
        ["iteration", "log_likelihood"],
    )
    print(f"✓ MaxLik: {report.iterations} iterations, converged={report.converged}, "
          f"W(0,0) = {wigner_origin(report.rho_hat):.4f}")
    if t.state != "gate_output":
        reference = cat(t.target_alpha, +1 if t.state == "even_cat" else -1, t.cutoff)
        print(f"   fidelity with reference = {fidelity(report.rho_hat, reference):.4f}")


def cmd_balance(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    win = balance_window(params)
    row = {"x0": win.x0, "delta": win.delta, "p_alpha": win.p_first, "p_minus_alpha": win.p_second}
    write_csv(out / "window.csv", [row], list(row))
    print(f"✓ balanced window x0 = {win.x0:.4f}, P_S ratio = {win.ratio:.3f}")


def cmd_models(cfg: RunConfig, params: GateParams, out: Path, args) -> None:
    print("Available gate models:")
    for name in list_available_models():
        print(f"  - {name}")


COMMANDS = {
    "simulate": (cmd_simulate, "Run the gate on one input qubit"),
    "sweep": (cmd_sweep, "Fidelity and success probability over the Bloch sphere"),
    "curve": (cmd_curve, "Closed-form fidelity against CSQ amplitude"),
    "wigner": (cmd_wigner, "Wigner function of the gate output"),
    "process-fidelity": (cmd_process, "Process fidelity on an entangled input"),
    "tomo-sample": (cmd_tomo_sample, "Draw synthetic homodyne data"),
    "tomo-reconstruct": (cmd_tomo_reconstruct, "MaxLik reconstruction of a dataset"),
    "balance": (cmd_balance, "Balance the heralding window"),
    "models": (cmd_models, "List gate models"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catgate",
        description="Probabilistic Hadamard gate for coherent-state qubits",
    )
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--seed", type=int, help="Random seed (overrides the config)")
    parser.add_argument("--out", help="Output directory (overrides the config)")
    parser.add_argument("--threads", type=int, help="Worker threads for sweeps")
    parser.add_argument("--dry-run", action="store_true", help="Validate the configuration only")
    parser.add_argument("--verbose", action="store_true", help="Log progress")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, help=help_text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    try:
        cfg = load_config(args.config)
        updates = {k: v for k, v in (("seed", args.seed), ("out", args.out), ("threads", args.threads)) if v is not None}
        if updates:
            cfg = parse_config({**cfg.model_dump(), **updates})
        params = cfg.to_gate_params()
    except ConfigError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"❌ Invalid configuration: {e}", file=sys.stderr)
        return 2

    if args.dry_run:
        print(f"✓ Configuration valid for '{args.command}'")
        return 0

    handler, _ = COMMANDS[args.command]
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        handler(cfg, params, out, args)
    except (CatgateError, OSError, RuntimeError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"❌ {args.command} failed: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
