"""Application entry point: argument parsing, App wiring and exit status.

`main()` parses argv, builds the App (config, log, manifest), dispatches to a
subcommand in `rlab.commands` and writes the rendered report. Exit status is 0
when nothing unexpected was found, 1 on unexpected violations, 2 on a
configuration or schema error.
"""

import argparse
import sys
import textwrap
import typing

from rlab import __version__, report
from rlab.app import App
from rlab.commands import cmd_codim_sweep, cmd_exclude, cmd_graph_check, cmd_rank_check
from rlab.config import apply_params
from rlab.errors import ConfigError, DomainError, SchemaError
from rlab.ids import CMD_CODIM_SWEEP, CMD_EXCLUDE, CMD_GRAPH_CHECK, CMD_RANK_CHECK, RANK_SUITES

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_CONFIG = 2


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, help="master seed (required by randomized suites)")
    p.add_argument(
        "-j", "--jobs", type=int, default=1, help="worker processes (0 = one per CPU, default 1)"
    )
    p.add_argument("--format", choices=report.FORMATS, default="json")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--params", metavar="FILE", help="JSON document merged over the config")
    p.add_argument("-v", "--verbose", action="store_true", help="log debug lines")
    p.add_argument("-q", "--quiet", action="store_true", help="log errors only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidity-lab",
        description="Exact-arithmetic checks of codimension counts, resolution "
        "graphs and the exclusion of supermaximal singularities.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=textwrap.dedent(
            """\
            examples:
              rigidity-lab rank-check --suite lemma31 --seed 7 --jobs 0
              rigidity-lab codim-sweep --format csv
              rigidity-lab graph-check --seed 1 --format text
              rigidity-lab graph-check my_graph.json
              rigidity-lab exclude --example
              rigidity-lab exclude --seed 3 --params exclude.json

            exit status: 0 ok, 1 unexpected violations, 2 config/schema error
            """
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(CMD_RANK_CHECK, help="condition-matrix ranks against codimension formulas")
    p.add_argument("--suite", choices=RANK_SUITES, help="which verification suite")
    _common(p)

    p = sub.add_parser(CMD_CODIM_SWEEP, help="evaluate the formula families over ranges")
    p.add_argument("--include-d3", action="store_true", default=None, help="also sweep d = 3")
    _common(p)

    p = sub.add_parser(CMD_GRAPH_CHECK, help="validate graphs or run the random graph suite")
    p.add_argument("graphs", nargs="*", metavar="GRAPH", help="graph JSON files")
    _common(p)

    p = sub.add_parser(CMD_EXCLUDE, help="exclusion verdicts and the symbolic chain")
    p.add_argument("instances", nargs="*", metavar="INSTANCE", help="instance JSON files")
    p.add_argument("--example", action="store_true", help="use the bundled K=2 chain instance")
    _common(p)
    return parser


def run(app: App, args) -> dict:
    if args.params:
        apply_params(app.config, args.params)
    if args.command == CMD_RANK_CHECK:
        if args.suite:
            app.config["rank_check"]["suite"] = args.suite
        return cmd_rank_check(app)
    if args.command == CMD_CODIM_SWEEP:
        if args.include_d3:
            app.config["codim_sweep"]["include_d3"] = True
        return cmd_codim_sweep(app)
    if args.command == CMD_GRAPH_CHECK:
        return cmd_graph_check(app, args.graphs)
    return cmd_exclude(app, args.instances, example=args.example)


def write(text: str, path: typing.Optional[str]):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", newline="") as f:
            f.write(text)
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e}") from None


def main(argv: typing.Optional[typing.List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    app = App()
    if args.verbose:
        app.log.level = 5
    elif args.quiet:
        app.log.level = 1
    app.jobs = args.jobs
    app.seed = args.seed

    try:
        if args.jobs < 0:
            raise ConfigError(f"--jobs must be >= 0, got {args.jobs}")
        result = run(app, args)
        write(report.render(result, args.format), args.out)
    except (ConfigError, SchemaError, DomainError) as e:
        app.log.error(str(e))
        return EXIT_CONFIG

    n = report.unexpected(result)
    app.log.success(
        f"{args.command}: {result['summary']['entries']} entries, "
        f"{result['summary']['violations']} violations ({n} unexpected) "
        f"in {app.elapsed():.2f}s"
    )
    return EXIT_VIOLATIONS if n else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
