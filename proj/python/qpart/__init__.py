"""Time-averages and ergodic partitions of quasiperiodically forced systems.

Thin wrapper over the compiled `_qpart` module. See the project README for the
library tour; the docstrings on the native classes describe each operation.
"""

try:
    # wheel layout: the extension is installed inside this package
    from ._qpart import *  # noqa: F401,F403
    from ._qpart import __version__  # noqa: F401
except ImportError:
    # build-tree layout: the extension sits on PYTHONPATH next to the package
    from _qpart import *  # noqa: F401,F403
    from _qpart import __version__  # noqa: F401
