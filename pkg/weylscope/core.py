"""Contain all the core functions for weylscope"""

from typing import List, NamedTuple

import numpy as np
from colorama import Fore, Style
from rich.console import Console
from rich.table import Table
from simber import Logger

from weylscope import defaults, prepend, report
from weylscope.asymptotics import (
    Ray, first_order_m, is_eventually_decreasing, residual_sweep
)
from weylscope.distributional import (
    bump, clip_truncation, distributional_residual_sweep
)
from weylscope.fundamental import (
    SpectralParameter, solve_fundamental, transfer_matrix_oracle
)
from weylscope.measure import SignedMeasure, atom_at, load_measure, total_variation
from weylscope.utility import (
    format_complex, parallel_map, parse_complex, resolve_jobs
)
from weylscope.weyl import exact_m_compact, m_truncated, weyl_disk


logger = Logger("core")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2
EXIT_INVARIANT = 3

# z values used by the invariant checks
CHECK_Z = (4j, 100j)
# Wronskian cancellation grows like exp(2 Re(k) x); only points with
# Re(k) x below this are checked.
WRONSKIAN_REACH = 3.0


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    # advisory results are reported but never fail a run
    advisory: bool = False


def _load(args) -> SignedMeasure:
    logger.info("Loading measure from {}{}{}".format(
        Fore.LIGHTYELLOW_EX, args.measure, Style.RESET_ALL))
    return load_measure(args.measure)


def _output(args, command: str) -> str:
    if args.output:
        return args.output
    return "weylscope-{}.{}".format(command, args.format)


def _has_exact_m(m: SignedMeasure) -> bool:
    return m.is_atomic and m.domain_end == np.inf


def hard_invariants(m: SignedMeasure, z, x0: float, tol: float) -> List[CheckResult]:
    """Wronskian constancy, disk nesting (x0/2 against x0) and membership
    of the truncated quotient in its disk, for one z.
    """
    z = SpectralParameter(z) if not isinstance(z, SpectralParameter) else z
    fs = solve_fundamental(m, z, x0, tol, checkpoints=[x0 / 2])

    reach = fs.grid * z.k.real <= WRONSKIAN_REACH
    defect = float(np.max(fs.wronskian_defect()[reach]))
    outer, inner = weyl_disk(fs, x0 / 2), weyl_disk(fs, x0)
    estimate = m_truncated(fs, x0)

    return [
        CheckResult("wronskian", defect <= 1e-10,
                    "max |W - 1| = {:.3e}".format(defect)),
        CheckResult("disk nesting", outer.encloses(inner),
                    "|dq| + r1 = {:.3e}, r0 = {:.3e}".format(
                        abs(inner.center - outer.center) + inner.radius, outer.radius)),
        CheckResult("disk membership", inner.contains(estimate.value),
                    "|m - q| = {:.3e}, r = {:.3e}".format(
                        abs(estimate.value - inner.center), inner.radius)),
    ]


def _report_failures(results: List[CheckResult]) -> bool:
    failed = [result for result in results if not result.passed]
    for result in failed:
        logger.error("Invariant `{}` failed: {}".format(result.name, result.detail))
    return not failed


def _invariants_at(task) -> List[CheckResult]:
    m, z, x0, tol = task
    results = hard_invariants(m, z, x0, tol)
    return [result._replace(name="{} z={}".format(result.name, format_complex(z.z)))
            for result in results]


def _ray_invariants(m: SignedMeasure, ray: Ray, x0: float, tol: float, jobs: int) -> bool:
    """Hard invariants at every z of the ray."""
    tasks = [(m, point, x0, tol) for point in ray.points()]
    results = parallel_map(_invariants_at, tasks, jobs)
    return _report_failures([result for batch in results for result in batch])


def cmd_solve(args) -> int:
    """Dump c, c', s, s' on the solver grid."""
    m = _load(args)
    z = parse_complex(args.z)
    fs = solve_fundamental(m, z, args.xmax, args.tol)
    logger.info("Solved on {} grid points, residual {:.3e}".format(
        len(fs.grid), fs.residual))

    output = _output(args, "solve")
    report.write_table(output, report.SOLVE_COLUMNS, fs.to_rows(), args.format,
                       records={"z": z, "xmax": args.xmax, "tol": args.tol})
    logger.info("Fundamental system written to {}".format(output))
    return EXIT_OK


def cmd_weyl(args) -> int:
    """m estimates, Weyl disks and, where available, exact m for every z."""
    m = _load(args)
    x0 = args.x0
    rows, records, healthy = [], [], True
    for text in args.z:
        z = SpectralParameter(parse_complex(text))
        fs = solve_fundamental(m, z, x0, args.tol, checkpoints=[x0 / 2])
        disk = weyl_disk(fs, x0)
        estimate = m_truncated(fs, x0)
        exact = exact_m_compact(m, z) if _has_exact_m(m) else complex("nan+nanj")

        healthy &= _report_failures(hard_invariants(m, z, x0, args.tol))
        if _has_exact_m(m) and m.support_end < x0 and \
                abs(estimate.value - exact) > estimate.error_radius * (1 + 1e-8) + 1e-12 * abs(exact):
            logger.error("m estimate {} misses exact m {} by more than {:.3e}".format(
                format_complex(estimate.value), format_complex(exact), estimate.error_radius))
            healthy = False

        logger.info("z={}: m = {} +/- {:.3e}".format(
            format_complex(z.z), format_complex(estimate.value), estimate.error_radius))
        rows.append([x0, estimate.value.real, estimate.value.imag, estimate.error_radius,
                     disk.center.real, disk.center.imag, disk.radius,
                     exact.real, exact.imag])
        records.append({"z": z.z, "estimate": estimate, "disk": disk, "exact": exact,
                        "first_order": first_order_m(m, z, x0)})

    report.write_table(_output(args, "weyl"), report.WEYL_COLUMNS, rows, args.format,
                       records=records)
    return EXIT_OK if healthy else EXIT_INVARIANT


def _ray(args) -> Ray:
    return Ray.from_range(args.theta, args.rmin, args.rmax, args.points_per_decade)


def cmd_asym(args) -> int:
    """Residual sweep of the first order expansion of m along a ray."""
    m = _load(args)
    ray = _ray(args)
    jobs = resolve_jobs(args.jobs)

    healthy = _ray_invariants(m, ray, args.x0, args.tol, jobs)
    rows = residual_sweep(m, args.x0, ray, args.tol, jobs)

    floor = defaults.DEFAULT.NOISE_FLOOR * (1 + float(total_variation(m, args.x0)))
    if not is_eventually_decreasing([row.scaled_residual for row in rows], 1, floor):
        logger.warning("Scaled residuals do not decrease along the ray")

    output = _output(args, "asym")
    report.write_table(output, report.ASYM_COLUMNS, report.sweep_table(rows), args.format,
                       records=rows)
    logger.info("Sweep of {} points written to {}".format(len(rows), output))
    return EXIT_OK if healthy else EXIT_INVARIANT


def cmd_dist(args) -> int:
    """Residual sweep of the distributional expansion for one bump."""
    m = _load(args)
    ray = _ray(args)
    jobs = resolve_jobs(args.jobs)
    phi = bump(args.phi_center, args.phi_width, args.phi_height, m.domain_end)

    x0 = clip_truncation(m, phi, args.x0)
    healthy = _ray_invariants(m, ray, x0, args.tol, jobs)
    rows = distributional_residual_sweep(m, phi, ray, args.quad_points, args.tol, jobs, x0)

    output = _output(args, "dist")
    report.write_table(output, report.DIST_COLUMNS, report.distributional_table(rows),
                       args.format, records=rows)
    logger.info("Sweep of {} points written to {}".format(len(rows), output))
    return EXIT_OK if healthy else EXIT_INVARIANT


def run_checks(m: SignedMeasure, x0: float, tol: float) -> List[CheckResult]:
    """The invariant suite on one measure."""
    results = []
    budget = float(total_variation(m, x0))

    for z in CHECK_Z:
        for result in hard_invariants(m, z, x0, tol):
            results.append(result._replace(name="{} z={}".format(result.name, format_complex(z))))

    fs = solve_fundamental(m, CHECK_Z[-1], x0, tol)
    variation = np.array([float(total_variation(m, x)) if x > 0 else 0.0 for x in fs.grid])
    bound = 1.01 * np.exp(variation / abs(fs.k))
    normalized = fs.normalized()
    worst = float(np.max(np.maximum(np.abs(normalized.c_tilde),
                                    np.abs(normalized.s_tilde)) / bound))
    results.append(CheckResult("normalized bound", worst <= 1.0,
                               "max |f~| / bound = {:.4f}".format(worst)))

    herglotz = []
    for z in (1j,) + CHECK_Z:
        if _has_exact_m(m):
            herglotz.append(exact_m_compact(m, z).imag)
        else:
            herglotz.append(m_truncated(solve_fundamental(m, z, x0, tol), x0).value.imag)
    results.append(CheckResult("herglotz", min(herglotz) > 0,
                               "min Im m = {:.3e}".format(min(herglotz))))

    if m.is_atomic:
        worst = 0.0
        for z in (1j, 100j):
            positions = [p for p, _ in m.atoms if 0 < p < x0]
            fs = solve_fundamental(m, z, x0, tol)
            for x in positions + [x0]:
                index = fs.index_of(x)
                solved = np.array([fs.c[index], fs.c_prime[index], fs.s[index], fs.s_prime[index]])
                oracle = np.array(transfer_matrix_oracle(m, z, x))
                worst = max(worst, float(np.max(np.abs(solved - oracle) / np.maximum(np.abs(oracle), 1e-300))))
        results.append(CheckResult("oracle equivalence", worst <= 1e-8,
                                   "max relative difference = {:.3e}".format(worst)))

    rows = residual_sweep(m, x0, Ray.from_range(np.pi / 2, 1e2, 1e6, 1), tol)
    scaled = [row.scaled_residual for row in rows]
    floor = defaults.DEFAULT.NOISE_FLOOR * (1 + budget)
    results.append(CheckResult("first order decay",
                               is_eventually_decreasing(scaled, 1, floor),
                               "scaled residuals " + ", ".join("{:.2e}".format(s) for s in scaled)))

    if m.is_atomic and atom_at(m, 0.0) == 0:
        second = [row.R * abs(row.m_truth - row.m_second) for row in rows]
        results.append(CheckResult("second order boundedness", max(second) <= 10 * (1 + budget) ** 2,
                                   "|z| residuals " + ", ".join("{:.2e}".format(s) for s in second),
                                   advisory=True))
    return results


def _status(result: CheckResult):
    if result.passed:
        return prepend.OK, "PASS", "[green]PASS[/green]"
    if result.advisory:
        return prepend.ADVISORY, "ADVISORY", "[yellow]ADVISORY[/yellow]"
    return prepend.FAILED, "FAIL", "[red]FAIL[/red]"


def cmd_check(args) -> int:
    """Run the invariant suite and print one line per check."""
    m = _load(args)
    results = run_checks(m, args.x0, args.tol)

    for result in results:
        state, word, _ = _status(result)
        prepend.PREPEND(state)
        print("{}: {}".format(result.name, word))

    table = Table(title="weylscope check: {}".format(args.measure))
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail")
    for result in results:
        table.add_row(result.name, _status(result)[2], result.detail)
    Console().print(table)

    failed = [result for result in results if not result.passed and not result.advisory]
    return EXIT_OK if not failed else EXIT_INVARIANT


COMMANDS = {
    "solve": cmd_solve,
    "weyl": cmd_weyl,
    "asym": cmd_asym,
    "dist": cmd_dist,
    "check": cmd_check,
}
