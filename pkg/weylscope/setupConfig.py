"""Functions used in setting up the config file are defined here."""

import os
from math import pi

from simber import Logger
from xdg.BaseDirectory import xdg_config_home


config_text = '''#*****************************************#
#*-----------config for weylscope---------#
#
#-----------------------------------------#
#------PLEASE DON\'T LEAVE ANY BLANK LINES---#
#-----------------------------------------#
#
# To change defaults just remove the hash(#)
# from the beginning of the line.
#
#*****************************************
# The TOL is the Picard tolerance used by the
# fundamental system solver, in the normalized
# variables. It has to be positive.
#
#TOL = 1e-12
#
#*****************************************#
# The X0 is the truncation point used for the Weyl
# disks and the first order expansion of m.
#
#X0 = 1.0
#
#*****************************************#
# The THETA is the angle of the ray z = R e^(i THETA)
# used by the sweeps. It has to lie strictly between
# 0 and pi.
#
#THETA = 1.5707963267948966
#
#*****************************************#
# The POINTS_PER_DECADE is the number of radii per
# decade of R on a sweep ray.
#
#POINTS_PER_DECADE = 4
#
#*****************************************#
# The JOBS is the number of worker processes for
# sweeps. The WEYLSCOPE_JOBS environment variable
# takes precedence over this value.
#
#JOBS = 1
#
#*****************************************#
# The OUTPUT_FORMAT is the format of the reports.
# Supported values are "{{supported_formats}}".
#
#OUTPUT_FORMAT = "csv"
#
#*****************************************#
# The QUAD_POINTS is the order of the Gauss-Legendre
# rule per panel in the distributional integrals.
#
#QUAD_POINTS = 16
#'''


logger = Logger("config")


class DEFAULTS:
    """Some default stuff defined."""

    def __init__(self):
        # The config path
        self.CONFIG_PATH = os.path.join(xdg_config_home, 'weylscope')

        self.TOL = 1e-12
        self.X0 = 1.0
        self.THETA = pi / 2
        self.POINTS_PER_DECADE = 4
        self.JOBS = 1

        self.VALID_FORMATS = ['csv', 'json']
        self.OUTPUT_FORMAT = 'csv'

        self.QUAD_POINTS = 16


def render_config_template() -> str:
    """Render the config template in order to get the updated
    config
    """
    formats = ", ".join(DEFAULTS().VALID_FORMATS)
    return config_text.replace('"{{supported_formats}}"', formats)


def make_config():
    """Write the config file to the .config folder."""
    config_path = os.path.join(DEFAULTS().CONFIG_PATH, 'config')

    if not os.path.isdir(DEFAULTS().CONFIG_PATH):
        os.makedirs(DEFAULTS().CONFIG_PATH, exist_ok=True)
    elif os.path.isfile(config_path):
        os.remove(config_path)

    with open(config_path, 'w') as write_config:
        write_config.write(render_config_template())


def checkConfig():
    """Need to check the config to see if defaults are changed.

    The config will be saved in the .config folder.
    """
    if os.path.isdir(DEFAULTS().CONFIG_PATH):
        DIR_CONTENTS = os.listdir(DEFAULTS().CONFIG_PATH)
    else:
        return False

    if 'config' not in DIR_CONTENTS:
        make_config()
    return True


def check_config_setup():
    """
    Check if the config file is setup without touching it.
    """
    DEFAULT_CONF_PATH = DEFAULTS().CONFIG_PATH

    if not os.path.isdir(DEFAULT_CONF_PATH):
        return False

    return os.path.isfile(os.path.join(DEFAULT_CONF_PATH, 'config'))


def _as_number(value, kind):
    try:
        return kind(value)
    except (TypeError, ValueError):
        return None


def checkValidity(keyword, value):
    """Check if the user specified value in config is possible."""
    if keyword == 'TOL':
        number = _as_number(value, float)
        return number is not None and number > 0
    elif keyword == 'X0':
        number = _as_number(value, float)
        return number is not None and number > 0
    elif keyword == 'THETA':
        number = _as_number(value, float)
        return number is not None and 0 < number < pi
    elif keyword in ('POINTS_PER_DECADE', 'JOBS', 'QUAD_POINTS'):
        number = _as_number(value, int)
        return number is not None and number >= 1
    elif keyword == 'OUTPUT_FORMAT':
        if not value:
            logger.warning("Output format value is empty. \
                    Default will be used")
            return False
        return value in DEFAULTS().VALID_FORMATS
    return False


# How each keyword is read back from the config text
CONVERTERS = {
    'TOL': float,
    'X0': float,
    'THETA': float,
    'POINTS_PER_DECADE': int,
    'JOBS': int,
    'QUAD_POINTS': int,
    'OUTPUT_FORMAT': str,
}


def retDefault(keyword):
    """Return the DEFAULT value of keyword."""
    return getattr(DEFAULTS(), keyword)


def GIVE_DEFAULT(keyword):
    """Check if the user has uncommented the config and added something.

    If possible get what is changed, else return the default value.
    """
    if not checkConfig():
        return retDefault(keyword)

    with open(os.path.join(DEFAULTS().CONFIG_PATH, 'config'), 'r') as READ_STREAM:
        for line in READ_STREAM:
            if line.startswith('#') or '=' not in line:
                continue
            key, _, newDEFAULT = line.partition('=')
            if key.strip() != keyword:
                continue

            newDEFAULT = newDEFAULT.strip().replace('"', '').replace("'", '')
            if checkValidity(keyword, newDEFAULT):
                return CONVERTERS[keyword](newDEFAULT)

            if newDEFAULT:
                logger.warning(
                    "{}: is invalid for option {}.".format(newDEFAULT, keyword))
            return retDefault(keyword)

    return retDefault(keyword)
