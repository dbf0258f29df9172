"""Command-line front door.

Every subcommand renders one OutputTable to stdout (or --out FILE) and
exits 0.  Exit statuses: 2 for usage errors, 3 for domain errors, 4 when
an accuracy guard or the oracle cross-check fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from typing import IO, Optional

from . import bayes, oracle, sampler, tables
from .dist import Endpoint, SnbParams, pmf, success_probability
from .errors import AccuracyError, DomainError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_ACCURACY = 4

ORACLE_TOL = 1e-12
DEFAULT_PORT = 8750


def _grid_flag(text: str) -> list[float]:
    try:
        return tables.parse_grid(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_format_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=tables.FORMATS, default="csv")
    sub.add_argument("--out", metavar="FILE", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snb",
        description="Stopped negative binomial toolkit: tables, design search, "
        "Bayesian summaries, simulation, oracle checks, and a trial service.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("pmf", help="mass table over the support")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_pmf)

    sub = commands.add_parser("moments", help="mean and variance over a p grid")
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    sub.add_argument("--p-grid", type=_grid_flag, required=True, metavar="START:END:STEP")
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_moments)

    sub = commands.add_parser("design", help="designs meeting a type-I bound")
    sub.add_argument("--p0", type=float, required=True)
    sub.add_argument("--alpha-level", type=float, required=True)
    sub.add_argument("--max-n", type=int, required=True)
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_design)

    sub = commands.add_parser("posterior", help="posterior mixture given the stopping draw")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--beta", type=float, required=True)
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--endpoint", choices=[e.value for e in Endpoint], default=None)
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_posterior)

    sub = commands.add_parser("predictive", help="prior-predictive stopping law")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--beta", type=float, required=True)
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_predictive)

    sub = commands.add_parser("simulate", help="simulate stopped trajectories")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--algorithm", choices=list(sampler.ALGORITHMS), default="pcg64")
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_simulate)

    sub = commands.add_parser("oracle-check", help="closed form vs path enumeration")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--s", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    _add_format_flags(sub)
    sub.set_defaults(handler=_cmd_oracle_check)

    sub = commands.add_parser("serve", help="run the trial-monitoring service")
    sub.add_argument("--port", type=int, default=None)
    sub.add_argument("--data-dir", default=None, metavar="DIR")
    sub.set_defaults(handler=_cmd_serve)

    return parser


def _cmd_pmf(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    return tables.pmf_table(SnbParams(args.p, args.s, args.t)), EXIT_OK


def _cmd_moments(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    return tables.moments_table(args.s, args.t, args.p_grid), EXIT_OK


def _cmd_design(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    return tables.design_table(args.p0, args.alpha_level, args.max_n), EXIT_OK


def _cmd_posterior(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    endpoint = Endpoint(args.endpoint) if args.endpoint else None
    prior = bayes.BetaPrior(args.alpha, args.beta)
    return tables.posterior_table(prior, args.s, args.t, args.k, endpoint), EXIT_OK


def _cmd_predictive(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    prior = bayes.BetaPrior(args.alpha, args.beta)
    return tables.predictive_table(prior, args.s, args.t), EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    params = SnbParams(args.p, args.s, args.t)
    gen = sampler.SeededGenerator(args.seed, args.algorithm)
    samples = sampler.sample_n(params, args.n, gen)
    counts = Counter(sample.stopping_time for sample in samples)
    successes = sum(1 for sample in samples if sample.endpoint is Endpoint.SUCCESS)
    rows = [
        [k, counts[k], counts[k] / len(samples), pmf(params, k)]
        for k in sorted(counts)
    ]
    table = tables.OutputTable(
        columns=["k", "count", "frequency", "exact_pmf"],
        rows=rows,
        meta={
            "p": tables.format_cell(params.p),
            "s": tables.format_cell(params.s),
            "t": tables.format_cell(params.t),
            "n": tables.format_cell(args.n),
            "seed": tables.format_cell(args.seed),
            "algorithm": args.algorithm,
            "success_fraction": tables.format_cell(successes / len(samples)),
        },
    )
    return table, EXIT_OK


def _cmd_oracle_check(args: argparse.Namespace) -> tuple[tables.OutputTable, int]:
    params = SnbParams(args.p, args.s, args.t)
    law = oracle.enumerate_law(params)
    rows = []
    worst = 0.0
    for k in sorted(law.pmf_by_k):
        closed = pmf(params, k)
        enumerated = law.pmf_by_k[k]
        diff = abs(closed - enumerated)
        worst = max(worst, diff)
        rows.append([k, closed, enumerated, diff])
    table = tables.OutputTable(
        columns=["k", "closed_form", "enumerated", "abs_diff"],
        rows=rows,
        meta={
            "p": tables.format_cell(params.p),
            "s": tables.format_cell(params.s),
            "t": tables.format_cell(params.t),
            "max_abs_diff": tables.format_cell(worst),
            "tolerance": tables.format_cell(ORACLE_TOL),
        },
    )
    status = EXIT_OK if worst <= ORACLE_TOL else EXIT_ACCURACY
    return table, status


def _cmd_serve(args: argparse.Namespace) -> tuple[Optional[tables.OutputTable], int]:
    import uvicorn

    from .service import create_app

    port = args.port if args.port is not None else int(os.environ.get("SNB_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(args.data_dir), host="127.0.0.1", port=port, log_level="warning")
    return None, EXIT_OK


def main(argv: Optional[list[str]] = None, stdout: Optional[IO[str]] = None) -> int:
    """Parse argv, run one subcommand, return the exit status."""
    out = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        table, status = args.handler(args)
    except AccuracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if table is None:
        return status
    table.format = getattr(args, "format", "csv")
    text = table.render()
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write(text)
    else:
        out.write(text)
    if status == EXIT_ACCURACY:
        worst = table.meta.get("max_abs_diff", "?")
        print(
            f"error: oracle deviation {worst} exceeds tolerance {ORACLE_TOL:g}",
            file=sys.stderr,
        )
    return status


def entrypoint() -> None:
    sys.exit(main())
