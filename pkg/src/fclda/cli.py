"""Command-line interface: ``fclda train|evaluate|compare|reproduce-iris|plot``.

Exit codes: 0 success, 1 I/O or configuration error, 2 solver failure
(infeasible LP, numerical breakdown, or a non-converged perceptron run).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from .dataset import (
    Dataset,
    DatasetError,
    load_csv,
    load_iris,
    select_binary,
    augment_reflect,
    synthetic_two_gaussians,
)
from .discriminant import (
    Criterion,
    DiscriminantModel,
    FitError,
    ToleranceConfig,
    ToleranceMode,
    fit,
    save_model,
)
from .fuzzy_lp import FuzzyLpInfeasible
from .lp_solver import LpSolverError
from .metrics import margin_report
from .olda import FisherModel, fit_fisher, save_fisher
from .plotting import PlotError, plot_boundary, plot_summary

log = logging.getLogger("fclda")

EXIT_OK, EXIT_IO, EXIT_SOLVER = 0, 1, 2

IRIS_PAIR = ("versicolor", "virginica")
IRIS_FEATURES = ("sepal_width", "petal_width")
SYNTHETIC = dict(n_per_class=50, mean1=(2.0, 0.0), mean2=(-2.0, 0.0), stddev=0.5)
TABLE_COLUMNS = (
    "run",
    "criterion",
    "theta",
    "alpha",
    "nm_right",
    "nm_left",
    "misclassified_1",
    "misclassified_2",
    "iterations",
    "stop_reason",
)


class ConfigError(ValueError):
    pass


class SolverFailure(RuntimeError):
    pass


def _split(value):
    return [s.strip() for s in value.split(",") if s.strip()] if value else None


def load_data(args) -> Dataset:
    classes = _split(args.classes)
    features = _split(args.features)
    if classes is not None and len(classes) != 2:
        raise ConfigError(f"--classes needs exactly two comma-separated labels, got {classes}")
    if args.data == "iris":
        ds = load_iris()
        classes = classes or list(IRIS_PAIR)
        features = features or list(IRIS_FEATURES)
    elif args.data == "synthetic":
        ds = synthetic_two_gaussians(seed=args.seed, **SYNTHETIC)
        classes = classes or ["class1", "class2"]
    else:
        ds = load_csv(args.data, args.label_column)
        if classes is None:
            seen = list(dict.fromkeys(ds.labels))
            if len(seen) != 2:
                raise ConfigError(f"data has labels {seen}; choose two with --classes")
            classes = seen
    return select_binary(ds, classes[0], classes[1], features)


def _tolerance(args) -> ToleranceConfig:
    if not 0.0 <= args.theta <= 1.0:
        raise ConfigError(f"--theta must lie in [0, 1], got {args.theta}")
    return ToleranceConfig(args.theta, ToleranceMode(args.tolerance_mode))


def train_one(ds: Dataset, criterion: str, cfg: ToleranceConfig):
    if criterion == "olda":
        return fit_fisher(ds)
    return fit(augment_reflect(ds), Criterion(criterion), cfg)


def _summary(model, report) -> str:
    lines = []
    if isinstance(model, DiscriminantModel):
        lines.append(f"criterion = {model.criterion.value}, theta = {model.tolerance.theta:g}, "
                     f"mode = {model.tolerance.mode.value}")
        lines.append(f"alpha = {model.alpha:.6g}")
        lines.append(f"z_lower = {model.z_lower:.6g}, z_upper = {model.z_upper:.6g}")
        lines.append(f"iterations = {model.iterations} ({model.stop_reason})")
    else:
        lines.append("criterion = olda")
    lines.append(f"NM_R = {report.nm_right:.6g}")
    lines.append(f"NM_L = {report.nm_left:.6g}")
    if report.degenerate:
        lines.append("warning: a sample lies on the boundary; noise margin reported as 0")
    lines.append(f"misclassified = {report.misclassified[0]} (class 1), {report.misclassified[1]} (class 2)")
    return "\n".join(lines)


def _save(model, path, metrics):
    if isinstance(model, FisherModel):
        save_fisher(model, path, metrics)
    else:
        save_model(model, path, metrics)


def load_any_model(path):
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("criterion") == "olda":
        return FisherModel.from_dict(doc)
    return DiscriminantModel.from_dict(doc)


def cmd_train(args) -> int:
    ds = load_data(args)
    model = train_one(ds, args.criterion, _tolerance(args))
    report = margin_report(model, ds, raw=args.raw_margins)
    out = Path(args.out or "model.json")
    _save(model, out, report.to_dict())
    print(_summary(model, report))
    print(f"model written to {out}")
    if isinstance(model, DiscriminantModel) and not model.converged:
        raise SolverFailure(f"perceptron iteration did not converge in {model.iterations} iterations")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = load_any_model(args.model)
    ds = load_data(args)
    report = margin_report(model, ds, raw=args.raw_margins)
    print(_summary(model, report))
    return EXIT_OK


def _table_row(run, model, report) -> dict:
    fc = isinstance(model, DiscriminantModel)
    return {
        "run": run,
        "criterion": model.criterion.value if fc else "olda",
        "theta": model.tolerance.theta if fc else None,
        "alpha": model.alpha if fc else None,
        "nm_right": report.nm_right,
        "nm_left": report.nm_left,
        "misclassified_1": report.misclassified[0],
        "misclassified_2": report.misclassified[1],
        "iterations": model.iterations if fc else None,
        "stop_reason": model.stop_reason if fc else "closed_form",
    }


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(rows, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in TABLE_COLUMNS])


def print_table(rows) -> None:
    print(f"{'run':<18}{'alpha':>10}{'NM_R':>14}{'NM_L':>14}{'errors':>9}")
    for r in rows:
        alpha = "-" if r["alpha"] is None else f"{r['alpha']:.4g}"
        errs = r["misclassified_1"] + r["misclassified_2"]
        print(f"{r['run']:<18}{alpha:>10}{r['nm_right']:>14.4g}{r['nm_left']:>14.4g}{errs:>9d}")


def run_grid(ds: Dataset, thetas, mode: ToleranceMode, out_dir: Path, raw: bool = False):
    """Modified and perceptron at every theta, then the Fisher baseline."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    jobs = [(crit, th) for crit in ("modified", "perceptron") for th in thetas] + [("olda", None)]
    for crit, th in jobs:
        run = crit if th is None else f"{crit}-{th:g}"
        model = train_one(ds, crit, ToleranceConfig(th if th is not None else 0.0, mode))
        report = margin_report(model, ds, raw=raw)
        _save(model, out_dir / f"{run}.json", report.to_dict())
        if ds.n_features == 2:
            plot_boundary(ds, model.w0, model.w, out_dir / f"{run}.svg", title=run)
        rows.append(_table_row(run, model, report))
    write_table(rows, out_dir / "table.csv")
    plot_summary(rows, out_dir / "summary.svg")
    return rows


def cmd_compare(args) -> int:
    ds = load_data(args)
    cfg = _tolerance(args)
    rows = run_grid(ds, [cfg.theta], cfg.mode, Path(args.out or "compare"), args.raw_margins)
    print_table(rows)
    return EXIT_OK


def cmd_reproduce_iris(args) -> int:
    ds = select_binary(load_iris(), *IRIS_PAIR, list(IRIS_FEATURES))
    out = Path(args.out or "iris_reproduction")
    rows = run_grid(ds, [0.1, 0.2], ToleranceMode(args.tolerance_mode), out, args.raw_margins)
    print_table(rows)
    print(f"table written to {out / 'table.csv'}")
    return EXIT_OK


def cmd_plot(args) -> int:
    model = load_any_model(args.model)
    ds = load_data(args)
    out = Path(args.out or "boundary.svg")
    seg = plot_boundary(ds, model.w0, model.w, out)
    if seg is None:
        print("warning: decision line does not cross the data bounding box", file=sys.stderr)
    print(f"plot written to {out} (points and line in {out.with_suffix('.csv')})")
    return EXIT_OK


def _add_data_flags(p, with_training=True):
    p.add_argument("--data", default="iris", help="'iris', 'synthetic', or a CSV path")
    p.add_argument("--label-column", default="label", help="label column of a CSV file")
    p.add_argument("--classes", help="two labels 'a,b'; the first is class 1")
    p.add_argument("--features", help="comma-separated feature columns")
    p.add_argument("--seed", type=int, default=0, help="seed for --data synthetic")
    p.add_argument("--out", help="output path")
    p.add_argument("--raw-margins", action="store_true", help="noise margins from the raw LP point")
    if with_training:
        p.add_argument("--criterion", choices=["modified", "perceptron", "olda"], default="modified")
        p.add_argument("--theta", type=float, default=0.1, help="degree of tolerance in [0, 1]")
    p.add_argument("--tolerance-mode", choices=[m.value for m in ToleranceMode], default="per-sample")


class _Parser(argparse.ArgumentParser):
    """Usage errors are config errors: exit 1, keeping 2 for solver failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fclda", description="Fuzzy-constrained linear discriminant analysis")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train one model and write it as JSON")
    _add_data_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="noise margins and errors of a saved model")
    p.add_argument("model")
    _add_data_flags(p, with_training=False)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="modified vs perceptron vs Fisher on one dataset")
    _add_data_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reproduce-iris", help="Iris versicolor/virginica table at theta 0.1 and 0.2")
    p.add_argument("--out", help="output directory")
    p.add_argument("--raw-margins", action="store_true")
    p.add_argument("--tolerance-mode", choices=[m.value for m in ToleranceMode], default="per-sample")
    p.set_defaults(func=cmd_reproduce_iris)

    p = sub.add_parser("plot", help="SVG of the data and a saved model's decision line")
    p.add_argument("model")
    _add_data_flags(p, with_training=False)
    p.set_defaults(func=cmd_plot)
    return parser


def _configure_logging():
    level = os.environ.get("FCLDA_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FitError, FuzzyLpInfeasible, LpSolverError, SolverFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (OSError, DatasetError, ConfigError, PlotError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
