"""Command-line interface.

Subcommands cover the full workflow: ``curve`` traces the (std, mean) plane
curve, ``optimize`` solves for the gain under a std budget, ``simulate``
Monte-Carlo-estimates gain statistics, ``backtest`` fits on one price
segment and replays another, and ``repro`` bundles the worked-example
parameter sets as named presets (price files are always user-supplied).

Scalar results go to JSON, series to CSV, and every run writes a manifest
recording the command, parameters, seed, and output paths, so any output can
be regenerated byte-for-byte. Exit codes: 0 success, 2 usage error, 3 domain
or precondition error, 4 internal-consistency violation (a bug, not bad
input).

The default seed is 0, overridable by the LONGSHORT_SEED environment
variable and then by --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__, dynamics, optimizer, portfolio, returns
from .errors import DomainError, InternalConsistencyError, InvalidParameterError
from .montecarlo import DEFAULT_N_PATHS, McGainEstimator
from .portfolio import PORTFOLIO_DEFAULT_N_PATHS

SEED_ENV_VAR = "LONGSHORT_SEED"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INTERNAL = 4

TOY_PRESET = {"mu": -0.1, "sigma": 0.15, "v0": 1.0, "target_std": 0.3, "stages": (10, 30, 60, 90)}
TSLA_PRESET = {"target_std": 0.08, "v0": 1.0, "n_paths": DEFAULT_N_PATHS}
THREE_STOCK_PRESET = {
    "target_stds": (0.08, 0.01, 0.02),
    "v0": 100.0,
    "n_paths": PORTFOLIO_DEFAULT_N_PATHS,
}


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to regenerate a command's outputs byte-for-byte."""

    command: str
    parameters: dict
    seed: int | None
    outputs: list[str]
    tool_version: str = __version__

    def write(self, path) -> None:
        payload = {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "outputs": self.outputs,
            "tool_version": self.tool_version,
        }
        _write_json(path, payload)


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameterError(f"{SEED_ENV_VAR}={raw!r} is not an integer") from None


def _model_from_args(args) -> returns.ReturnModel:
    """Build the return model from --prices or from --mu/--sigma."""
    if getattr(args, "prices", None):
        series = returns.load_prices_csv(args.prices, column=args.price_column)
        pmf = returns.pmf_from_returns(returns.returns_from_prices(series))
        return returns.ReturnModel.from_pmf(pmf)
    if args.mu is None or args.sigma is None:
        raise InvalidParameterError("supply either --prices or both --mu and --sigma")
    return returns.ReturnModel.from_moments(args.mu, args.sigma)


def _moments_from_args(args) -> tuple[float, float, float]:
    """(mu, sigma2, k_max) for closed-form commands, without forcing a model."""
    if getattr(args, "prices", None):
        model = _model_from_args(args)
        k_max = args.k_max if args.k_max is not None else model.k_max
        return model.mu, model.sigma2, k_max
    if args.mu is None or args.sigma is None:
        raise InvalidParameterError("supply either --prices or both --mu and --sigma")
    if args.k_max is not None:
        k_max = args.k_max
    elif args.sigma > 0.0 and args.mu + args.sigma > 0.0:
        k_max = min(1.0, 1.0 / (args.mu + args.sigma))
    else:
        k_max = 1.0  # degenerate moments pin no upper support bound
    return args.mu, args.sigma * args.sigma, k_max


def _result_payload(res: optimizer.OptimalGainResult) -> dict:
    return {
        "alpha": 0.5,
        "k_star": res.k_star,
        "achieved_std": res.achieved_std,
        "expected_gain": res.expected_gain,
        "target_std": res.target_std,
        "stage": res.stage,
        "iterations": res.iterations,
    }


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mu", type=float, help="mean per-period return")
    parser.add_argument("--sigma", type=float, help="std of per-period returns")
    parser.add_argument("--prices", help="price CSV; builds an empirical PMF instead of moments")
    parser.add_argument(
        "--price-column",
        default=returns.DEFAULT_PRICE_COLUMN,
        help=f"price column name (default {returns.DEFAULT_PRICE_COLUMN!r})",
    )
    parser.add_argument("--v0", type=float, default=1.0, help="initial account value")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default 0 or $LONGSHORT_SEED)")


# --- subcommand implementations ---


def _cmd_curve(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.prices:
        model = _model_from_args(args)
        curve = optimizer.build_curve_empirical(
            model, args.v0, args.stage, args.grid, args.n_paths, seed
        )
        seed_used = seed
    else:
        mu, sigma2, k_max = _moments_from_args(args)
        curve = optimizer.build_curve(mu, sigma2, args.v0, args.stage, k_max, args.grid)
        seed_used = None
    curve.write_csv(args.out)
    manifest = RunManifest(
        command="curve",
        parameters={
            "mu": args.mu,
            "sigma": args.sigma,
            "prices": args.prices,
            "price_column": args.price_column,
            "v0": args.v0,
            "stage": args.stage,
            "grid": args.grid,
            "k_max": args.k_max,
            "n_paths": args.n_paths if args.prices else None,
        },
        seed=seed_used,
        outputs=[str(args.out)],
    )
    manifest.write(str(args.out) + ".manifest.json")
    print(f"wrote {args.out} ({args.grid} points, stage {args.stage})")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.prices:
        series = returns.load_prices_csv(args.prices, column=args.price_column)
        pmf = returns.pmf_from_returns(returns.returns_from_prices(series))
        stage = args.stage if args.stage is not None else len(series) - 1
        tol = args.tol if args.tol is not None else optimizer.DEFAULT_MC_TOL
        res = optimizer.solve_optimal_gain_empirical(
            pmf, args.v0, stage, args.target_std, tol=tol, n_paths=args.n_paths, seed=seed
        )
        seed_used = seed
    else:
        if args.stage is None:
            raise InvalidParameterError("--stage is required with moment flags")
        mu, sigma2, k_max = _moments_from_args(args)
        tol = args.tol if args.tol is not None else optimizer.DEFAULT_TOL
        res = optimizer.solve_optimal_gain(
            mu, sigma2, args.v0, args.stage, k_max, args.target_std, tol=tol
        )
        stage = args.stage
        seed_used = None
    payload = _result_payload(res)
    _write_json(args.out, payload)
    manifest = RunManifest(
        command="optimize",
        parameters={
            "mu": args.mu,
            "sigma": args.sigma,
            "prices": args.prices,
            "price_column": args.price_column,
            "v0": args.v0,
            "stage": stage,
            "target_std": args.target_std,
            "tol": tol,
            "k_max": args.k_max,
            "n_paths": args.n_paths if args.prices else None,
        },
        seed=seed_used,
        outputs=[str(args.out)],
    )
    manifest.write(str(args.out) + ".manifest.json")
    print(
        f"k_star={res.k_star:.6f} achieved_std={res.achieved_std:.6f} "
        f"expected_gain={res.expected_gain:.6f}"
    )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    model = _model_from_args(args)
    estimator = McGainEstimator(model, args.stage, args.n_paths, seed)
    est = estimator.estimate(args.alpha, args.k_gain, args.v0)
    payload = {
        "mean": est.mean,
        "variance": est.variance,
        "std": est.std,
        "std_error_of_mean": est.std_error_of_mean,
        "n_paths": est.n_paths,
        "seed": est.seed,
        "stage": est.stage,
        "alpha": args.alpha,
        "k_gain": args.k_gain,
        "v0": args.v0,
    }
    _write_json(args.out, payload)
    outputs = [str(args.out)]
    if args.trajectory_out:
        config = dynamics.ControllerConfig.for_model(
            model, alpha=args.alpha, k_gain=args.k_gain, v0=args.v0
        )
        sample = returns.sample_path(model, args.stage, seed)
        dynamics.simulate(config, sample).write_csv(args.trajectory_out)
        outputs.append(str(args.trajectory_out))
    manifest = RunManifest(
        command="simulate",
        parameters={
            "mu": args.mu,
            "sigma": args.sigma,
            "prices": args.prices,
            "price_column": args.price_column,
            "alpha": args.alpha,
            "k_gain": args.k_gain,
            "v0": args.v0,
            "stage": args.stage,
            "n_paths": args.n_paths,
        },
        seed=seed,
        outputs=outputs,
    )
    manifest.write(str(args.out) + ".manifest.json")
    print(f"mean={est.mean:.6f} std={est.std:.6f} (n={est.n_paths}, seed={est.seed})")
    return EXIT_OK


def _backtest_single(
    train_path,
    test_path,
    price_column: str,
    target_std: float,
    v0: float,
    tol: float,
    n_paths: int,
    seed: int,
    out_prefix: str,
) -> tuple[dict, list[str]]:
    train = returns.load_prices_csv(train_path, column=price_column)
    train_returns = returns.returns_from_prices(train)
    pmf = returns.pmf_from_returns(train_returns)
    stage = int(train_returns.size)
    res = optimizer.solve_optimal_gain_empirical(
        pmf, v0, stage, target_std, tol=tol, n_paths=n_paths, seed=seed
    )

    test = returns.load_prices_csv(test_path, column=price_column)
    test_returns = returns.returns_from_prices(test)
    # Replay admissibility is checked against the realized test path by the
    # simulator itself; out-of-sample data may exceed the training support.
    model = returns.ReturnModel.from_pmf(pmf)
    config = dynamics.ControllerConfig.for_model(
        model, alpha=0.5, k_gain=res.k_star, v0=v0
    )
    traj = dynamics.simulate(config, test_returns)
    audit = dynamics.audit_cash_financing(traj, res.k_star)

    traj_path = f"{out_prefix}_trajectory.csv"
    summary_path = f"{out_prefix}_summary.json"
    traj.write_csv(traj_path)
    terminal_gain = float(traj.gain_loss[-1])
    summary = {
        "ticker": train.ticker,
        "fit": _result_payload(res),
        "train_stages": stage,
        "test_stages": int(test_returns.size),
        "terminal_gain": terminal_gain,
        "terminal_return": terminal_gain / v0,
        "max_control_ratio": audit.max_control_ratio,
        "cash_financed": audit.cash_financed,
        "v0": v0,
        "seed": seed,
    }
    _write_json(summary_path, summary)
    return summary, [traj_path, summary_path]


def _cmd_backtest(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.portfolio_config:
        return _backtest_portfolio(args, seed)
    if not (args.train_prices and args.test_prices and args.target_std is not None):
        raise InvalidParameterError(
            "single-asset backtest needs --train-prices, --test-prices and --target-std"
        )
    n_paths = args.n_paths if args.n_paths is not None else DEFAULT_N_PATHS
    tol = args.tol if args.tol is not None else optimizer.DEFAULT_MC_TOL
    summary, outputs = _backtest_single(
        args.train_prices,
        args.test_prices,
        args.price_column,
        args.target_std,
        args.v0,
        tol,
        n_paths,
        seed,
        args.out_prefix,
    )
    manifest = RunManifest(
        command="backtest",
        parameters={
            "train_prices": args.train_prices,
            "test_prices": args.test_prices,
            "price_column": args.price_column,
            "target_std": args.target_std,
            "v0": args.v0,
            "tol": tol,
            "n_paths": n_paths,
        },
        seed=seed,
        outputs=outputs,
    )
    manifest.write(f"{args.out_prefix}.manifest.json")
    print(
        f"k_star={summary['fit']['k_star']:.6f} "
        f"terminal_gain={summary['terminal_gain']:.6f} "
        f"({100.0 * summary['terminal_return']:.2f}% on v0={args.v0})"
    )
    return EXIT_OK


def _backtest_portfolio(args, seed: int) -> int:
    with open(args.portfolio_config, encoding="utf-8") as fh:
        spec = json.load(fh)
    v0 = float(spec.get("v0", args.v0))
    assets = spec["assets"]
    if not assets:
        raise InvalidParameterError(f"{args.portfolio_config}: no assets listed")
    n_paths = args.n_paths if args.n_paths is not None else PORTFOLIO_DEFAULT_N_PATHS
    tol = args.tol if args.tol is not None else optimizer.DEFAULT_MC_TOL

    names, pmfs, targets, test_paths_list = [], [], [], []
    stage = None
    for i, asset in enumerate(assets):
        column = asset.get("price_column", returns.DEFAULT_PRICE_COLUMN)
        train = returns.load_prices_csv(asset["train_prices"], column=column)
        train_returns = returns.returns_from_prices(train)
        if stage is None:
            stage = int(train_returns.size)
        pmfs.append(returns.pmf_from_returns(train_returns))
        targets.append(float(asset["target_std"]))
        names.append(asset.get("name", train.ticker))
        test = returns.load_prices_csv(asset["test_prices"], column=column)
        test_paths_list.append(returns.returns_from_prices(test))

    results = portfolio.optimize_portfolio(
        list(zip(pmfs, targets)), v0, stage, tol=tol, n_paths=n_paths, seed=seed
    )
    config = portfolio.PortfolioConfig(
        assets=tuple(
            (returns.ReturnModel.from_pmf(pmf), res.k_star)
            for pmf, res in zip(pmfs, results)
        ),
        v0=v0,
    )
    traj = portfolio.run_portfolio(config, test_paths_list)

    traj_path = f"{args.out_prefix}_trajectory.csv"
    summary_path = f"{args.out_prefix}_summary.json"
    traj.write_csv(traj_path, labels=names)
    terminal_gain = float(traj.total_gain_loss[-1])
    summary = {
        "assets": [
            {"name": name, "fit": _result_payload(res)}
            for name, res in zip(names, results)
        ],
        "terminal_gain": terminal_gain,
        "terminal_return": terminal_gain / v0,
        "max_leverage_ratio": float(traj.leverage.max()),
        "v0": v0,
        "train_stages": stage,
        "test_stages": traj.n_stages,
        "seed": seed,
    }
    _write_json(summary_path, summary)
    manifest = RunManifest(
        command="backtest",
        parameters={
            "portfolio_config": args.portfolio_config,
            "v0": v0,
            "tol": tol,
            "n_paths": n_paths,
        },
        seed=seed,
        outputs=[traj_path, summary_path],
    )
    manifest.write(f"{args.out_prefix}.manifest.json")
    print(
        f"k_star={[round(r.k_star, 4) for r in results]} "
        f"terminal_gain={terminal_gain:.4f} max_leverage={summary['max_leverage_ratio']:.4f}"
    )
    return EXIT_OK


def _cmd_repro(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.preset == "toy":
        return _repro_toy(args, seed)
    if args.preset == "tsla":
        return _repro_tsla(args, seed)
    return _repro_three_stock(args, seed)


def _repro_toy(args, seed: int) -> int:
    p = TOY_PRESET
    os.makedirs(args.out_dir, exist_ok=True)
    sigma2 = p["sigma"] ** 2
    outputs = []
    solutions = []
    for stage in p["stages"]:
        curve = optimizer.build_curve(p["mu"], sigma2, p["v0"], stage, 1.0, 200)
        curve_path = os.path.join(args.out_dir, f"toy_curve_k{stage}.csv")
        curve.write_csv(curve_path)
        outputs.append(curve_path)
        res = optimizer.solve_optimal_gain(
            p["mu"], sigma2, p["v0"], stage, 1.0, p["target_std"]
        )
        solutions.append({"stage": stage, **_result_payload(res)})
    results_path = os.path.join(args.out_dir, "toy_results.json")
    _write_json(results_path, {"preset": "toy", "parameters": dict(p, stages=list(p["stages"])), "solutions": solutions})
    outputs.append(results_path)
    RunManifest(
        command="repro toy",
        parameters=dict(p, stages=list(p["stages"])),
        seed=None,
        outputs=outputs,
    ).write(os.path.join(args.out_dir, "manifest.json"))
    for sol in solutions:
        print(
            f"stage {sol['stage']:3d}: k_star={sol['k_star']:.3f} "
            f"expected_gain={sol['expected_gain']:.3f}"
        )
    return EXIT_OK


def _repro_tsla(args, seed: int) -> int:
    if not (args.train_prices and args.test_prices):
        raise InvalidParameterError("repro tsla needs --train-prices and --test-prices")
    p = TSLA_PRESET
    os.makedirs(args.out_dir, exist_ok=True)
    prefix = os.path.join(args.out_dir, "tsla")
    summary, outputs = _backtest_single(
        args.train_prices[0],
        args.test_prices[0],
        args.price_column,
        p["target_std"],
        p["v0"],
        optimizer.DEFAULT_MC_TOL,
        p["n_paths"],
        seed,
        prefix,
    )
    RunManifest(
        command="repro tsla",
        parameters={
            "train_prices": args.train_prices[0],
            "test_prices": args.test_prices[0],
            "price_column": args.price_column,
            **p,
        },
        seed=seed,
        outputs=outputs,
    ).write(os.path.join(args.out_dir, "manifest.json"))
    print(
        f"k_star={summary['fit']['k_star']:.4f} "
        f"terminal_return={100.0 * summary['terminal_return']:.2f}%"
    )
    return EXIT_OK


def _repro_three_stock(args, seed: int) -> int:
    p = THREE_STOCK_PRESET
    if not (args.train_prices and args.test_prices) or len(args.train_prices) != 3 or len(
        args.test_prices
    ) != 3:
        raise InvalidParameterError(
            "repro three-stock needs --train-prices and --test-prices three times each"
        )
    os.makedirs(args.out_dir, exist_ok=True)
    config = {
        "v0": p["v0"],
        "assets": [
            {
                "train_prices": train,
                "test_prices": test,
                "target_std": target,
                "price_column": args.price_column,
            }
            for train, test, target in zip(
                args.train_prices, args.test_prices, p["target_stds"]
            )
        ],
    }
    config_path = os.path.join(args.out_dir, "three_stock_config.json")
    _write_json(config_path, config)
    inner = argparse.Namespace(
        portfolio_config=config_path,
        v0=p["v0"],
        n_paths=p["n_paths"],
        tol=None,
        seed=seed,
        out_prefix=os.path.join(args.out_dir, "three_stock"),
    )
    return _backtest_portfolio(inner, seed)


# --- parser wiring ---


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longshort",
        description="Balanced double-linear long-short feedback trading tools",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_curve = sub.add_parser("curve", help="trace the (std, mean) curve over the gain grid")
    _add_model_flags(p_curve)
    p_curve.add_argument("--stage", type=int, required=True, help="target stage k")
    p_curve.add_argument("--grid", type=int, default=200, help="number of gain grid points")
    p_curve.add_argument(
        "--k-max", type=float, default=None,
        help="override the gain ceiling (closed-form mode; empirical mode derives it)",
    )
    p_curve.add_argument("--n-paths", type=int, default=DEFAULT_N_PATHS)
    p_curve.add_argument("--out", default="curve.csv", help="output CSV path")
    p_curve.set_defaults(func=_cmd_curve)

    p_opt = sub.add_parser("optimize", help="solve for the gain under a std budget")
    _add_model_flags(p_opt)
    p_opt.add_argument("--target-std", type=float, required=True)
    p_opt.add_argument("--stage", type=int, default=None, help="target stage k (default: train length)")
    p_opt.add_argument("--k-max", type=float, default=None)
    p_opt.add_argument("--tol", type=float, default=None)
    p_opt.add_argument("--n-paths", type=int, default=DEFAULT_N_PATHS)
    p_opt.add_argument("--out", default="optimal_gain.json")
    p_opt.set_defaults(func=_cmd_optimize)

    p_sim = sub.add_parser("simulate", help="Monte-Carlo estimate of gain statistics")
    _add_model_flags(p_sim)
    p_sim.add_argument("--alpha", type=float, default=0.5)
    p_sim.add_argument("--k-gain", type=float, required=True)
    p_sim.add_argument("--stage", type=int, required=True)
    p_sim.add_argument("--n-paths", type=int, default=DEFAULT_N_PATHS)
    p_sim.add_argument("--out", default="mc_estimate.json")
    p_sim.add_argument(
        "--trajectory-out", default=None,
        help="also write one seeded sample path's account trajectory CSV",
    )
    p_sim.set_defaults(func=_cmd_simulate)

    p_back = sub.add_parser("backtest", help="fit on one price segment, replay another")
    p_back.add_argument("--train-prices", help="training price CSV (single asset)")
    p_back.add_argument("--test-prices", help="out-of-sample price CSV (single asset)")
    p_back.add_argument("--portfolio-config", help="JSON portfolio description (multi-asset)")
    p_back.add_argument("--target-std", type=float, default=None)
    p_back.add_argument(
        "--price-column",
        default=returns.DEFAULT_PRICE_COLUMN,
        help=f"price column name (default {returns.DEFAULT_PRICE_COLUMN!r})",
    )
    p_back.add_argument("--v0", type=float, default=1.0)
    p_back.add_argument("--tol", type=float, default=None)
    p_back.add_argument("--n-paths", type=int, default=None)
    p_back.add_argument("--seed", type=int, default=None)
    p_back.add_argument("--out-prefix", default="backtest")
    p_back.set_defaults(func=_cmd_backtest)

    p_repro = sub.add_parser("repro", help="run a named worked-example preset")
    p_repro.add_argument("preset", choices=["toy", "tsla", "three-stock"])
    p_repro.add_argument("--train-prices", action="append", help="price CSV (repeatable)")
    p_repro.add_argument("--test-prices", action="append", help="price CSV (repeatable)")
    p_repro.add_argument(
        "--price-column",
        default=returns.DEFAULT_PRICE_COLUMN,
        help=f"price column name (default {returns.DEFAULT_PRICE_COLUMN!r})",
    )
    p_repro.add_argument("--seed", type=int, default=None)
    p_repro.add_argument("--out-dir", default="repro_out")
    p_repro.set_defaults(func=_cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"internal consistency violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
