# Import entry to make it accessible
from weylscope.main import entry

name = "weylscope"


__all__ = ['entry',
           'asymptotics',
           'core',
           'defaults',
           'distributional',
           'exceptions',
           'fundamental',
           'measure',
           'prepend',
           'quadrature',
           'report',
           'setupConfig',
           'utility',
           'weyl',
           ]
