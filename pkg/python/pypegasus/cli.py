"""Command-line entry point.

Usage::

    pypegasus --config run.json [--seed N] [--out results.csv] [--threads N]
    pypegasus bounds --seed 3

Every output starts with ``#`` header lines holding the package version, the
command, the seed and the full effective config as JSON, so a run can be
repeated from its own output. Floats are written with 17 significant digits.

Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from pypegasus._internal._logging import _log_error, _log_operation, set_run_id
from pypegasus._internal._metrics import Stopwatch
from pypegasus._internal._rng import derive_seed
from pypegasus.config import (
    PARAMS_BY_COMMAND,
    BicycleEvalParams,
    BicycleTrainParams,
    BoundsParams,
    CounterexampleParams,
    FidelityParams,
    GridworldParams,
    RunConfig,
    dump_config,
    parse_config,
    set_default_workers,
)
from pypegasus.exceptions import ConfigError, PegasusError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def fmt(value: Any) -> str:
    """Render one CSV cell; floats get 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


@dataclass
class Report:
    """Body of a command's output.

    Attributes:
        columns: CSV header. Empty for key=value reports.
        rows: CSV rows.
        comments: Extra ``# key=value`` lines written after the standard header.
        pairs: ``key=value`` lines written instead of CSV rows.
    """

    columns: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    comments: list[tuple[str, Any]] = field(default_factory=list)
    pairs: list[tuple[str, Any]] = field(default_factory=list)


def _run_gridworld(params: GridworldParams, seed: int) -> Report:
    from pypegasus.envs.gridworld import gridworld_experiment

    result = gridworld_experiment(
        params.m_values, params.trials, params.h, params.gamma, seed, params.variants
    )
    return Report(
        columns=["variant", "m", "mean_value", "stderr", "trials"],
        rows=[[r.variant, r.m, r.mean_value, r.stderr, r.trials] for r in result.rows],
        comments=[("opt", result.opt)],
    )


def _ride_report(rides: Any) -> Report:
    return Report(
        columns=["ride", "fell_at", "goal_at", "path_length", "progress", "value"],
        rows=[
            [i, r.fell_at, r.goal_at, r.path_length, r.progress, r.value]
            for i, r in enumerate(rides.rides)
        ],
        comments=[
            ("upright_fraction", rides.upright_fraction),
            ("goal_fraction", rides.goal_fraction),
            ("mean_progress", rides.mean_progress),
            ("median_path_length", rides.median_path_length),
        ],
    )


def _run_bicycle_train(params: BicycleTrainParams, seed: int) -> Report:
    from pypegasus.envs.bicycle import train_bicycle

    result = train_bicycle(params, seed)
    report = _ride_report(result.evaluation)
    report.comments = [
        ("best_estimate", result.search.best_estimate),
        ("evaluations", result.search.evaluations),
        ("weights", ";".join(fmt(float(w)) for w in result.theta)),
        *report.comments,
    ]
    return report


def _run_bicycle_eval(params: BicycleEvalParams, seed: int) -> Report:
    from pypegasus.envs.bicycle import evaluate_rides

    ride_seed = params.seed if params.seed is not None else seed
    return _ride_report(evaluate_rides(params, params.weights, params.rides, ride_seed))


def _run_counterexample(params: CounterexampleParams, seed: int) -> Report:
    from pypegasus.theory.counterexample import (
        CounterexampleMDP,
        counterexample_demo,
        max_constant_policy_deviation,
    )

    if params.variant == "simple":
        deviation = max_constant_policy_deviation(
            CounterexampleMDP(variant="simple"), params.m, seed, params.candidates, params.h
        )
        return Report(
            columns=["m", "candidates", "max_deviation"],
            rows=[[params.m, params.candidates, deviation]],
        )
    demo = counterexample_demo(params.m, params.h, seed)
    return Report(
        columns=["m", "policy_index", "v_hat", "v_true", "gap"],
        rows=[[demo.m, demo.policy_index, demo.v_hat, demo.v_true, demo.gap]],
        comments=[("union_pieces", len(demo.union))],
    )


def _run_bounds(params: BoundsParams, seed: int) -> Report:
    from pypegasus.theory.bounds import BoundInputs, bounds_report

    inputs = BoundInputs(
        epsilon=params.epsilon,
        delta=params.delta,
        d=params.d,
        d_S=params.d_S,
        d_P=params.d_P,
        B=params.B,
        B_R=params.B_R,
        h_eps=params.h_eps,
        m_big=params.m_big,
        gamma=params.gamma,
    )
    return Report(pairs=list(bounds_report(inputs).items()))


def _run_fidelity(params: FidelityParams, seed: int) -> Report:
    from pypegasus.envs.gridworld import (
        GOAL,
        N_ACTIONS,
        N_CELLS,
        analytic_distribution,
        build_gridworld,
        wrap_complex,
    )
    from pypegasus.fidelity import fidelity_check

    model = build_gridworld()
    if params.variant == "complex":
        model = wrap_complex(model, seed)
    rows: list[list[Any]] = []
    for s in range(N_CELLS):
        if s == GOAL:
            continue
        for a in range(N_ACTIONS):
            check = fidelity_check(
                model, s, a, analytic_distribution(s, a), params.n, derive_seed(seed, s, a)
            )
            rows.append([s, a, check.passed, check.max_abs_z])
    return Report(
        columns=["cell", "action", "passed", "max_abs_z"],
        rows=rows,
        comments=[("all_passed", all(r[2] for r in rows))],
    )


RUNNERS: dict[str, Callable[[Any, int], Report]] = {
    "gridworld": _run_gridworld,
    "bicycle-train": _run_bicycle_train,
    "bicycle-eval": _run_bicycle_eval,
    "counterexample": _run_counterexample,
    "bounds": _run_bounds,
    "fidelity": _run_fidelity,
}


def render(config: RunConfig, report: Report) -> str:
    """Header block plus body, as written to the output file."""
    from pypegasus import __version__

    out = io.StringIO()
    out.write(f"# pypegasus {__version__}\n")
    out.write(f"# command={config.command}\n")
    out.write(f"# seed={config.seed}\n")
    out.write(f"# config={dump_config(config)}\n")
    for key, value in report.comments:
        out.write(f"# {key}={fmt(value)}\n")
    for key, value in report.pairs:
        out.write(f"{key}={fmt(value)}\n")
    if report.columns:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(report.columns)
        writer.writerows([fmt(v) for v in row] for row in report.rows)
    return out.getvalue()


def dispatch(config: RunConfig) -> int:
    """Run the command of ``config`` and write its output.

    Returns:
        0 on success, 1 on a runtime failure (diagnostic on stderr).
    """
    set_run_id(f"{config.command}-{config.seed}")
    try:
        with Stopwatch() as sw:
            report = RUNNERS[config.command](config.params, config.seed)
            text = render(config, report)
        if config.output_path:
            Path(config.output_path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except (PegasusError, OSError, ArithmeticError, ValueError) as e:
        _log_error("dispatch", f"{config.command} failed: {e}")
        print(f"pypegasus: {config.command} failed: {e}", file=sys.stderr)
        return EXIT_FAILURE
    _log_operation("dispatch", config.command, sw.elapsed_ms)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pypegasus",
        description="Scenario-based policy search experiments.",
    )
    parser.add_argument(
        "command",
        nargs="?",
        choices=sorted(PARAMS_BY_COMMAND),
        help="Command to run with default params (or to check against --config).",
    )
    parser.add_argument("--config", type=Path, help="JSON run config.")
    parser.add_argument("--seed", type=int, help="Override the config seed.")
    parser.add_argument("--out", help="Output path (default: stdout).")
    parser.add_argument("--threads", type=int, help="Worker threads; results do not depend on it.")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Build the effective RunConfig from parsed flags."""
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        config = parse_config(text)
        if args.command is not None and args.command != config.command:
            raise ConfigError(
                f"command {args.command!r} does not match config command {config.command!r}",
                key="command",
            )
    elif args.command is not None:
        config = parse_config(f'{{"command": "{args.command}"}}')
    else:
        raise ConfigError("give a command or --config")
    return config.with_overrides(seed=args.seed, output_path=args.out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads is not None:
            set_default_workers(args.threads)
        config = load_config(args)
    except ConfigError as e:
        print(f"pypegasus: {e}", file=sys.stderr)
        return EXIT_USAGE
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
