"""``hipm-lab`` command line.

Exit codes: 0 success, 2 parse/usage error, 3 shape mismatch, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import NumericalError, ParameterError, ShapeMismatchError
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment
from .hipm import AscentConfig, grid_for_laws, hipm_lip_distance, mean_lower_bound
from .measures import Grid, read_law_csv
from .plot import emit_svg_plot
from .wow import wow_distance

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_NUMERIC = 4


def _fmt(value):
    return format(value, ".12g")


def cmd_wow(args):
    q1 = read_law_csv(args.file1)
    q2 = read_law_csv(args.file2)
    print(_fmt(wow_distance(q1, q2)))


def cmd_hipm(args):
    q1 = read_law_csv(args.file1)
    q2 = read_law_csv(args.file2)
    if args.domain:
        grid = Grid(args.domain[0], args.domain[1], args.grid_M or grid_for_laws(q1, q2).M)
    else:
        grid = grid_for_laws(q1, q2, args.grid_M)
    config = AscentConfig(n_init=args.n_init, n_step=args.n_step, epsilon=args.eps,
                          seed=args.seed, include_identity_init=not args.no_identity_init)
    value = hipm_lip_distance(q1, q2, grid, config, evaluate=args.evaluate)
    print(_fmt(value))
    if args.with_lower_bound:
        print(f"mean_lower_bound {_fmt(mean_lower_bound(q1, q2))}")


def cmd_experiment(args):
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ParameterError(f"cannot read config: {exc}") from exc
        config = ExperimentConfig.from_json(text, args.id, args.paper_scale)
    else:
        config = ExperimentConfig.defaults(args.id, args.paper_scale)
    overrides = {}
    if args.out_dir:
        overrides["output_dir"] = args.out_dir
    if args.jobs:
        overrides["jobs"] = args.jobs
    if overrides:
        config = ExperimentConfig(**{**config.to_dict(), **overrides})
    config = config.with_env_seed()
    path = run_experiment(config, resume=args.resume)
    print(path)
    if args.plot:
        svg = Path(path).with_suffix(".svg")
        emit_svg_plot(path, svg)
        print(svg)


def cmd_plot(args):
    emit_svg_plot(args.csv, args.out, loglog=True if args.loglog else None, title=args.title)
    print(args.out)


def build_parser():
    parser = argparse.ArgumentParser(prog="hipm-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wow", help="Wasserstein-over-Wasserstein distance between two law files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_wow)

    p = sub.add_parser("hipm", help="Lipschitz hierarchical IPM estimate between two law files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--grid-M", type=int, default=None, help="number of grid points")
    p.add_argument("--domain", type=float, nargs=2, metavar=("A", "B"),
                   help="grid interval (default: hull of both laws)")
    p.add_argument("--n-init", type=int, default=8)
    p.add_argument("--n-step", type=int, default=500)
    p.add_argument("--eps", type=float, default=1e-7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-identity-init", action="store_true")
    p.add_argument("--evaluate", choices=("original", "grid"), default="original")
    p.add_argument("--with-lower-bound", action="store_true")
    p.set_defaults(func=cmd_hipm)

    p = sub.add_parser("experiment", help="run a seeded experiment and write CSV")
    p.add_argument("id", choices=EXPERIMENTS)
    p.add_argument("--config", help="JSON config with \"schema\": 1")
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--out-dir")
    p.add_argument("--jobs", type=int)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--plot", action="store_true", help="also write an SVG next to the CSV")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot", help="render an experiment CSV as SVG")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--loglog", action="store_true")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except ShapeMismatchError as exc:
        print(f"hipm-lab: shape mismatch: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except ParameterError as exc:
        print(f"hipm-lab: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalError as exc:
        print(f"hipm-lab: numerical failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
