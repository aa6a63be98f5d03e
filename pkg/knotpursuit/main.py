import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

from knotpursuit.basis import vca_fit
from knotpursuit.errors import KnotPursuitError
from knotpursuit.harness import (
    GENERATORS,
    ExperimentConfig,
    LabeledDataset,
    export_contour_grid,
    load_builtin,
    load_csv,
    load_points,
    render_report,
    run_table1,
    run_table2,
    write_report,
)
from knotpursuit.models.store import load_model, save_model
from knotpursuit.pursuit import PursuitConfig, fit, knot_basis
from knotpursuit.settings import settings

logger = logging.getLogger("knotpursuit")


@dataclass
class CommandResult:
    success: bool
    data: Any = None
    error: Optional[str] = None


def _pursuit_config(args: argparse.Namespace) -> PursuitConfig:
    return PursuitConfig.from_settings(
        epsilon=args.epsilon,
        delta=args.delta,
        lam=args.lam,
        gamma=args.gamma,
        max_degree=args.max_degree,
    )


def _bounds(values: list[float]) -> tuple[tuple[float, float], tuple[float, float]]:
    x_lo, x_hi, y_lo, y_hi = values
    return (x_lo, x_hi), (y_lo, y_hi)


def _datasets(args: argparse.Namespace) -> list[LabeledDataset]:
    datasets = [load_builtin(name) for name in args.dataset or []]
    for path in args.csv or []:
        datasets.append(load_csv(path, args.label_column, args.has_header))
    if not datasets:
        datasets = [load_builtin("iris")]
    return datasets


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {"runs": args.runs, "seed": args.seed}
    if args.epsilon is not None:
        overrides["epsilon_grid"] = [args.epsilon]
    if args.lam is not None:
        overrides["lambda_grid"] = [args.lam]
    pursuit = {k: v for k, v in {"delta": args.delta, "gamma": args.gamma}.items() if v is not None}
    return ExperimentConfig(pursuit=pursuit, **{k: v for k, v in overrides.items() if v is not None})


def cmd_fit(args: argparse.Namespace) -> CommandResult:
    model = fit(load_points(args.input, args.has_header), _pursuit_config(args))
    out = save_model(model, args.out)
    data = {"model": str(out), "n_vanishing": model.n_features, "resets": model.report.resets,
            "truncated": model.report.truncated}
    if args.knot_basis:
        basis_path = out.with_name(f"{out.stem}_knot_basis.json")
        save_model(knot_basis(model), basis_path)
        data["knot_basis"] = str(basis_path)
    return CommandResult(success=True, data=data)


def cmd_vca(args: argparse.Namespace) -> CommandResult:
    epsilon = settings.epsilon if args.epsilon is None else args.epsilon
    model = vca_fit(load_points(args.input, args.has_header), epsilon, args.max_degree)
    out = save_model(model, args.out)
    return CommandResult(success=True, data={"model": str(out), "n_vanishing": model.n_features})


def cmd_demo(args: argparse.Namespace) -> CommandResult:
    seed = settings.seed if args.seed is None else args.seed
    points = GENERATORS[args.shape](seed=seed)
    model = fit(points, _pursuit_config(args))
    out = Path(args.out or f"{args.shape}_grid.{args.format}")
    export_contour_grid(model, _bounds(args.bounds), args.resolution, out, args.format)
    return CommandResult(
        success=True,
        data={"grid": str(out), "degrees": model.degrees, "n_knots": model.n_knots, "resets": model.report.resets},
    )


def cmd_grid(args: argparse.Namespace) -> CommandResult:
    model = load_model(args.model)
    out = Path(args.out or f"grid.{args.format}")
    export_contour_grid(model, _bounds(args.bounds), args.resolution, out, args.format)
    return CommandResult(success=True, data={"grid": str(out)})


def _run_report(runner: Callable, args: argparse.Namespace) -> CommandResult:
    report = runner(_datasets(args), _experiment_config(args))
    if args.out:
        write_report(report, args.out, "json" if args.format == "json" else "text")
    if args.format == "json":
        return CommandResult(success=True, data=json.loads(report.model_dump_json()))
    return CommandResult(success=True, data=render_report(report))


def cmd_classify(args: argparse.Namespace) -> CommandResult:
    return _run_report(run_table1, args)


def cmd_knn_eval(args: argparse.Namespace) -> CommandResult:
    return _run_report(run_table2, args)


def cmd_serve(args: argparse.Namespace) -> CommandResult:
    import uvicorn

    from knotpursuit.api import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return CommandResult(success=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, default=None)
    common.add_argument("--delta", type=float, default=None)
    common.add_argument("--lambda", dest="lam", type=float, default=None)
    common.add_argument("--gamma", type=float, default=None)
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--runs", type=int, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="knotpursuit", description="Vanishing polynomials with data knots")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="fit vanishing polynomials and data knots to a CSV")
    p.add_argument("input")
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--knot-basis", action="store_true", help="also save a VCA basis of the data knots")
    p.set_defaults(handler=cmd_fit, out_default="model.json")

    p = sub.add_parser("vca", parents=[common], help="VCA baseline on a CSV")
    p.add_argument("input")
    p.add_argument("--has-header", action="store_true")
    p.set_defaults(handler=cmd_vca, out_default="vca_model.json")

    p = sub.add_parser("demo", parents=[common], help="synthetic demo with contour grid export")
    p.add_argument("shape", choices=sorted(GENERATORS))
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--bounds", type=float, nargs=4, default=[-2.0, 2.0, -2.0, 2.0], metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p.set_defaults(handler=cmd_demo, out_default=None)

    p = sub.add_parser("grid", parents=[common], help="contour grid of a saved model")
    p.add_argument("model")
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("--bounds", type=float, nargs=4, default=[-2.0, 2.0, -2.0, 2.0], metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p.set_defaults(handler=cmd_grid, out_default=None)

    for name, handler, help_text in (
        ("classify", cmd_classify, "linear classification with vanishing-polynomial features"),
        ("knn-eval", cmd_knn_eval, "1-NN with data knots, k-means centroids and original points"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--dataset", action="append", choices=["iris", "wine"])
        p.add_argument("--csv", action="append")
        p.add_argument("--label-column", default="-1")
        p.add_argument("--has-header", action="store_true")
        p.set_defaults(handler=handler, out_default=None)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default=settings.api_host)
    p.add_argument("--port", type=int, default=settings.api_port)
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(handler=cmd_serve, out_default=None)
    return parser


def run(argv: Optional[list[str]] = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    if getattr(args, "out", None) is None:
        args.out = args.out_default
    try:
        return args.handler(args)
    except (KnotPursuitError, ValueError) as e:
        logger.error("%s failed: %s", args.command, e)
        return CommandResult(success=False, error=str(e))


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    verbose = settings.debug or "--verbose" in argv or "-v" in argv
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    result = run(argv)
    if not result.success:
        print(f"error: {result.error}", file=sys.stderr)
        return 1
    if isinstance(result.data, str):
        print(result.data, end="" if result.data.endswith("\n") else "\n")
    elif result.data is not None:
        print(json.dumps(result.data, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
