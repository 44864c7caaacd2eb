"""Backend selection for the node kernel.

The compiled extension is preferred. Setting ``PLGROUPS_KERNEL=python`` forces
the pure-Python fallback; ``PLGROUPS_KERNEL=compiled`` makes a missing
extension an import error instead of a silent fallback.
"""

import os

_choice = os.environ.get("PLGROUPS_KERNEL", "auto").strip().lower()

if _choice == "python":
    from . import _pykernel as backend
else:
    try:
        from . import _ckernel as backend
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _pykernel as backend

Nodes = backend.Nodes
NAME = backend.NAME


def available_backends():
    """Return the kernel modules importable in this environment."""
    from . import _pykernel

    found = {"python": _pykernel}
    try:
        from . import _ckernel

        found["compiled"] = _ckernel
    except ImportError:
        pass
    return found
