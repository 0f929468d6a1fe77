#!/usr/bin/env python3
"""
    * weylscope - Weyl functions of Schrodinger operators with
      measure valued potentials.

----------------------------------------------------
     Solves for the fundamental system, estimates m(z)
     through Weyl disks and checks the high energy
     expansions of m against computed truth.
----------------------------------------------------
"""

import argparse
import sys
from os import path

from colorama import init
from colorama import Style
from simber import Logger

from weylscope import defaults, setupConfig
from weylscope.__version__ import __version__
from weylscope.core import (
    COMMANDS, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, EXIT_SOLVER
)
from weylscope.exceptions import (
    ArgumentError, DegenerateDiskError, EvaluationError, GridPointError,
    IterationLimitError, MeasureDomainError, MeasureFormatError, PoleError,
    UnsupportedMeasureError
)

# init colorama for windows
init()

LOGGER_OUTTEMPLATE = " %a{}==>{}%".format(Style.BRIGHT, Style.RESET_ALL)
LOGGER_FILEFORMAT = "[{logger}]:[{time}]: "
logger = Logger('weylscope',
                log_path=defaults.DEFAULT.LOG_PATH,
                format=LOGGER_OUTTEMPLATE,
                file_format=LOGGER_FILEFORMAT,
                update_all=True
                )

# Exit code for every error the commands can raise
EXIT_CODES = (
    ((MeasureFormatError, MeasureDomainError, ArgumentError, GridPointError,
      UnsupportedMeasureError, DegenerateDiskError, OSError), EXIT_INPUT),
    ((IterationLimitError, EvaluationError), EXIT_SOLVER),
    ((PoleError,), EXIT_INVARIANT),
)


def _common_arguments() -> argparse.ArgumentParser:
    """Arguments shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--measure', '-m', required=True, metavar="FILE",
                        help="Measure description file (JSON).")
    common.add_argument('--tol', type=float, default=defaults.DEFAULT.TOL,
                        help="Picard tolerance of the solver. Default is {}, \
                        can be set in config.".format(defaults.DEFAULT.TOL))
    common.add_argument('--x0', type=float, default=defaults.DEFAULT.X0,
                        help="Truncation point for disks and expansions.")
    common.add_argument('--output', '-o', default=None, metavar="PATH",
                        help="Report path. Defaults to weylscope-<command>.<format>.")
    common.add_argument('--format', default=defaults.DEFAULT.OUTPUT_FORMAT,
                        choices=defaults.DEFAULT.VALID_FORMATS,
                        help="Report format.")
    return common


def _ray_arguments() -> argparse.ArgumentParser:
    ray = argparse.ArgumentParser(add_help=False)
    group = ray.add_argument_group("Ray")
    group.add_argument('--theta', type=float, default=defaults.DEFAULT.THETA,
                       help="Angle of the ray z = R e^(i theta), in (0, pi).")
    group.add_argument('--rmin', type=float, default=1e2, help="Smallest |z|.")
    group.add_argument('--rmax', type=float, default=1e6, help="Largest |z|.")
    group.add_argument('--points-per-decade', type=int,
                       default=defaults.DEFAULT.POINTS_PER_DECADE,
                       help="Radii per decade of |z|.")
    group.add_argument('--jobs', '-j', type=int, default=defaults.DEFAULT.JOBS,
                       help="Worker processes. {} overrides it.".format(defaults.DEFAULT.JOBS_ENV))
    return ray


def arguments(argv=None):
    """Parse the arguments."""
    parser = argparse.ArgumentParser(prog="weylscope")
    parser.add_argument('--version', action='version', version=__version__,
                        help='show the program version number and exit')

    logger_group = parser.add_argument_group("Logger")
    logger_group.add_argument(
        "--level",
        help="The level of the logger that will be used while verbosing.\
            Use `--list-level` to check available options." + "\n",
        default="INFO",
        type=str
    )
    logger_group.add_argument(
        "--disable-file",
        help="Disable logging to files",
        default=False,
        action="store_true",
    )
    logger_group.add_argument(
        "--list-level",
        help="List all the available logger levels.",
        action="store_true"
    )

    common = _common_arguments()
    ray = _ray_arguments()
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    solve = commands.add_parser('solve', parents=[common],
                                help="Dump the fundamental system on its grid.")
    solve.add_argument('--z', required=True, help="Spectral parameter as RE+IMi.")
    solve.add_argument('--xmax', type=float, default=defaults.DEFAULT.X0,
                       help="Right end of the solve.")

    weyl = commands.add_parser('weyl', parents=[common],
                               help="Weyl disks and m estimates.")
    weyl.add_argument('--z', required=True, action='append',
                      help="Spectral parameter as RE+IMi. Can be repeated.")

    commands.add_parser('asym', parents=[common, ray],
                        help="Residual sweep of the first order expansion of m.")

    dist = commands.add_parser('dist', parents=[common, ray],
                               help="Residual sweep of the distributional expansion.")
    dist_group = dist.add_argument_group("Test function")
    dist_group.add_argument('--phi-center', type=float, required=True,
                            help="Center of the bump.")
    dist_group.add_argument('--phi-width', type=float, default=0.2,
                            help="Half width of the bump.")
    dist_group.add_argument('--phi-height', type=float, default=1.0,
                            help="Height of the bump.")
    dist_group.add_argument('--quad-points', type=int, default=defaults.DEFAULT.QUAD_POINTS,
                            help="Gauss-Legendre points per panel.")
    dist.set_defaults(rmax=1e4)

    commands.add_parser('check', parents=[common],
                        help="Run the invariant suite on a measure.")

    return parser, parser.parse_args(argv)


def pre_checks(args) -> bool:
    """Run some checks in order to make sure the basic things are
    working all right.

    Returns True when the run is already complete.
    """
    if args.list_level:
        logger.list_available_levels()
        return True

    # Update the logger flags, in case those are not the default ones.
    if args.level.lower() != "info":
        logger.update_level(args.level.upper())

    if args.disable_file:
        logger.update_disable_file(True)
        logger.debug("Writing logs to file disabled")

    logger.debug("Logger running in DEBUG mode")
    logger.debug("Passed args: {}".format(args))

    if not setupConfig.check_config_setup():
        logger.debug("Config not present, creating default.")
        setupConfig.make_config()
        logger.info("Created new config since none was present")

    if getattr(args, "output", None) and not path.isdir(
            path.dirname(path.abspath(args.output))):
        raise ArgumentError("output", args.output, "a path in an existing directory")
    return False


def _exit_code(error: Exception) -> int:
    for kinds, code in EXIT_CODES:
        if isinstance(error, kinds):
            return code
    raise error


def run(argv=None) -> int:
    """Parse argv, run the command and return the exit code."""
    try:
        parser, args = arguments(argv)
    except SystemExit as done:
        # --help and --version exit with 0, usage errors are input errors
        return EXIT_OK if not done.code else EXIT_INPUT

    try:
        if pre_checks(args):
            return EXIT_OK
        if args.command is None:
            parser.print_help()
            return EXIT_INPUT
        return COMMANDS[args.command](args)
    except Exception as error:
        code = _exit_code(error)
        logger.error("{}: {}".format(type(error).__name__, error))
        return code


def entry():
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("\nExiting..!")
        sys.exit(EXIT_INPUT)


if __name__ == '__main__':
    entry()
