"""Command-line driver.

Exit codes: 0 success, 2 configuration error, 3 ingestion error,
4 computation error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import report
from .config import build_config, parse_horizons, parse_losses, read_config_file
from .exceptions import ComputationError, ConfigError, IngestionError
from .io import align_survey, read_survey, write_forecast_panel
from .timeseries import QuarterlyPeriod

logger = logging.getLogger("forecast_eval")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGESTION = 3
EXIT_COMPUTATION = 4

SUMMARY_COLUMNS = ["source", "horizon", "sample", "status"] + report.SUMMARY_FIELDS
COMPARE_COLUMNS = ["first", "second", "sample", "loss", "horizon", "status"] + report.DM_FIELDS
MZ_COLUMNS = ["source", "sample", "horizon", "status"] + report.MZ_FIELDS
FLUCT_COLUMNS = ["first", "second", "loss", "horizon", "window_end", "status"] + report.DM_FIELDS


def _period_arg(text):
    try:
        return QuarterlyPeriod.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _forecast_arg(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected LABEL=PATH")
    label, path = text.split("=", 1)
    return label.strip(), Path(path.strip())


def _cut_arg(text):
    t = text.strip().lower()
    if t in ("none", "auto"):
        return t
    return _period_arg(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int, help="master seed recorded in outputs")
    common.add_argument("--realizations", type=Path, help="period,value CSV")
    common.add_argument("--forecast", action="append", type=_forecast_arg, metavar="LABEL=PATH",
                        help="forecast panel CSV (repeatable)")
    common.add_argument("--survey", type=Path, help="survey CSV to align and include")
    common.add_argument("--horizons", help="e.g. 0,1,2,4,8,12 or 0-12")
    common.add_argument("--cut", type=_cut_arg, help="sub-sample cut period, 'auto' or 'none'")
    common.add_argument("--losses", help="e.g. quadratic,absolute,linex(0.5),linex(-0.5)")
    common.add_argument("--benchmarks", help="comma list of rw,ar or 'none'")
    common.add_argument("--ar-window", type=int)
    common.add_argument("--p-max", type=int)
    common.add_argument("--availability-lag", type=int)
    common.add_argument("--cv-source", choices=["fixed_b", "standard_normal"])
    common.add_argument("--candidate", help="source listed first in comparisons")
    common.add_argument("--reverse", action="store_const", const=True,
                        help="put the candidate second in every pair")
    common.add_argument("--sample-start", type=_period_arg)
    common.add_argument("--sample-end", type=_period_arg)
    common.add_argument("--origin-start", type=_period_arg)
    common.add_argument("--origin-end", type=_period_arg)
    common.add_argument("--fluct-window", type=int)
    common.add_argument("--mz-bandwidth", type=int)
    common.add_argument("--jobs", type=int, help="worker threads for grid cells")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="forecast-eval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bench", parents=[common], help="write benchmark forecast panels")
    sub.add_parser("summary", parents=[common], help="forecast-error summary statistics")
    sub.add_parser("compare", parents=[common], help="Diebold-Mariano test grid")
    sub.add_parser("mz", parents=[common], help="Mincer-Zarnowitz rationality regressions")
    sub.add_parser("fluct", parents=[common], help="rolling-window DM statistics")
    sub.add_parser("align-survey", parents=[common], help="align a fixed-event survey CSV")
    return parser


def config_from_args(args):
    file_values = read_config_file(args.config) if args.config else {}
    ov = {
        "out": args.out,
        "seed": args.seed,
        "realizations": args.realizations,
        "forecasts": tuple(args.forecast) if args.forecast else None,
        "survey": args.survey,
        "horizons": parse_horizons(args.horizons) if args.horizons else None,
        "losses": parse_losses(args.losses) if args.losses else None,
        "ar_window": args.ar_window,
        "p_max": args.p_max,
        "availability_lag": args.availability_lag,
        "cv_source": args.cv_source,
        "candidate": args.candidate,
        "reverse": args.reverse,
        "sample_start": args.sample_start,
        "sample_end": args.sample_end,
        "origin_start": args.origin_start,
        "origin_end": args.origin_end,
        "fluct_window": args.fluct_window,
        "mz_bandwidth": args.mz_bandwidth,
        "jobs": args.jobs,
    }
    if args.benchmarks is not None:
        b = args.benchmarks.strip().lower()
        ov["benchmarks"] = () if b in ("", "none") else tuple(x.strip() for x in b.split(","))
    if args.cut == "none":
        ov.update(cut=None, auto_cut=False)
    elif args.cut == "auto":
        ov.update(auto_cut=True)
        file_values.pop("cut", None)
    elif args.cut is not None:
        ov.update(cut=args.cut, auto_cut=False)
    return build_config(file_values, ov)


def cmd_bench(config):
    if not config.benchmarks:
        raise ConfigError("nothing to do: no benchmarks enabled (use --benchmarks rw,ar)")
    real = report.load_realizations(config)
    config.out.mkdir(parents=True, exist_ok=True)
    written = []
    for label, panel in report.benchmark_panels(config, real).items():
        path = config.out / f"bench_{label.lower()}.csv"
        write_forecast_panel(path, panel)
        written.append(path)
    return written


def cmd_summary(config):
    real, panels = report.load_sources(config)
    if not panels:
        raise ConfigError("no forecast panels configured")
    rows = report.summary_rows(config, real, panels)
    return report.write_outputs(
        config.out, "summary", rows, SUMMARY_COLUMNS, config.settings(), text_columns=SUMMARY_COLUMNS
    )


def cmd_compare(config):
    real, panels = report.load_sources(config)
    rows = report.compare_rows(config, real, panels)
    plot = (report.compare_plot_rows(rows), ["first", "second", "sample", "horizon", "series", "value"])
    return report.write_outputs(
        config.out, "compare", rows, COMPARE_COLUMNS, config.settings(), text_columns=COMPARE_COLUMNS,
        plot=plot,
    )


def cmd_mz(config):
    real, panels = report.load_sources(config)
    if not panels:
        raise ConfigError("no forecast panels configured")
    rows = report.mz_rows(config, real, panels)
    plot = (report.mz_plot_rows(config, real, panels),
            ["source", "horizon", "target", "forecast", "realization"])
    return report.write_outputs(
        config.out, "mz", rows, MZ_COLUMNS, config.settings(), text_columns=MZ_COLUMNS, plot=plot
    )


def cmd_fluct(config):
    real, panels = report.load_sources(config)
    rows = report.fluct_rows(config, real, panels)
    plot = (report.fluct_plot_rows(rows), ["first", "second", "horizon", "window_end", "series", "value"])
    return report.write_outputs(config.out, "fluct", rows, FLUCT_COLUMNS, config.settings(), plot=plot)


def cmd_align_survey(config):
    if config.survey is None:
        raise ConfigError("align-survey needs --survey PATH")
    panel = align_survey(read_survey(config.survey))
    config.out.mkdir(parents=True, exist_ok=True)
    path = config.out / "survey_aligned.csv"
    write_forecast_panel(path, panel)
    return [path]


COMMANDS = {
    "bench": cmd_bench,
    "summary": cmd_summary,
    "compare": cmd_compare,
    "mz": cmd_mz,
    "fluct": cmd_fluct,
    "align-survey": cmd_align_survey,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        written = COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IngestionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INGESTION
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
