"""Contains the definition of class DEFAULT."""
import os

from xdg.BaseDirectory import xdg_cache_home

from weylscope import setupConfig


class DEFAULT:
    """DEFAULT class contains value of different constants."""

    # Logs and scratch files
    CACHE_DIR = os.path.join(xdg_cache_home, 'weylscope')
    LOG_PATH = os.path.join(CACHE_DIR, 'logs', 'log.cat')

    # Solver tolerance
    TOL = setupConfig.GIVE_DEFAULT('TOL')

    # Truncation point for disks and expansions
    X0 = setupConfig.GIVE_DEFAULT('X0')

    # Ray defaults
    THETA = setupConfig.GIVE_DEFAULT('THETA')
    POINTS_PER_DECADE = setupConfig.GIVE_DEFAULT('POINTS_PER_DECADE')

    JOBS = setupConfig.GIVE_DEFAULT('JOBS')
    JOBS_ENV = 'WEYLSCOPE_JOBS'

    VALID_FORMATS = setupConfig.DEFAULTS().VALID_FORMATS
    OUTPUT_FORMAT = setupConfig.GIVE_DEFAULT('OUTPUT_FORMAT')

    QUAD_POINTS = setupConfig.GIVE_DEFAULT('QUAD_POINTS')

    # Noise floor of the decay checks, relative to 1 + |chi|([0, x0))
    NOISE_FLOOR = 1e-6
