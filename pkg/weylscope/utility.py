"""Some definitions to interact with the command line."""

import os
import re
from multiprocessing import Pool
from typing import Callable, List, Sequence

from simber import Logger

from weylscope.exceptions import ArgumentError

logger = Logger("Utility")

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_IMAGINARY = re.compile(r"^(?P<im>[+-]?(?:{n})?)[ij]$".format(n=_NUMBER))
_COMPLEX = re.compile(
    r"^(?P<re>[+-]?{n})(?:(?P<im>[+-](?:{n})?)[ij])?$".format(n=_NUMBER)
)


def parse_complex(text: str) -> complex:
    """Parse `RE+IMi` (also `RE`, `IMi`, `RE-i`, `j` for `i`)."""
    compact = str(text).strip().replace(" ", "")
    match = _IMAGINARY.match(compact) or _COMPLEX.match(compact)
    if match is None:
        raise ArgumentError("z", text, "a complex number written RE+IMi")

    groups = match.groupdict()
    real = float(groups["re"]) if groups.get("re") else 0.0
    imag_text = groups.get("im")
    if imag_text is None:
        imag = 0.0
    elif imag_text in ("", "+", "-"):
        imag = -1.0 if imag_text == "-" else 1.0
    else:
        imag = float(imag_text)
    return complex(real, imag)


def format_complex(value: complex) -> str:
    """Inverse of parse_complex with 17 significant digits."""
    return "{:.17g}{:+.17g}i".format(value.real, value.imag)


def resolve_jobs(requested: int) -> int:
    """Worker count: WEYLSCOPE_JOBS if set and valid, else `requested`."""
    from weylscope.defaults import DEFAULT

    env_value = os.environ.get(DEFAULT.JOBS_ENV)
    if env_value is not None:
        try:
            jobs = int(env_value)
            if jobs >= 1:
                return jobs
        except ValueError:
            pass
        logger.warning("{}={}: is not a positive integer, ignoring it".format(
            DEFAULT.JOBS_ENV, env_value))

    if requested is None:
        return DEFAULT.JOBS
    if requested < 1:
        raise ArgumentError("jobs", requested, "a positive integer")
    return requested


def parallel_map(func: Callable, tasks: Sequence, jobs: int = 1) -> List:
    """map func over tasks, in a process pool when jobs > 1.

    Results come back in task order either way.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    logger.debug("Dispatching {} tasks to {} workers".format(len(tasks), jobs))
    with Pool(min(jobs, len(tasks))) as pool:
        return pool.map(func, tasks)
