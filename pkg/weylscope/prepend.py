"""Definition of PREPEND."""

from colorama import init
from colorama import Fore, Style

init()

OK = 1
FAILED = 2
ADVISORY = 3

_COLOURS = {
    OK: Fore.LIGHTGREEN_EX,
    FAILED: Fore.LIGHTRED_EX,
    ADVISORY: Fore.LIGHTYELLOW_EX,
}


def PREPEND(state):
    """PREPEND prints ==> in front of a check line, green when the
    check passed, red when it failed and yellow for advisory results.
    """
    print(Style.BRIGHT + _COLOURS.get(state, '') + ' ==> ' + Style.RESET_ALL, end='')
