"""Backend selection for the hot exponential-sum kernel.

The compiled Cython kernel is preferred when its build succeeded; the pure
Python kernel is the fallback. Both implement the same pinned algorithm and
agree bit for bit. Set DELTASUM_BACKEND=c or DELTASUM_BACKEND=py to force a
choice (forcing "c" raises ImportError when the extension is missing).
"""

import os

from . import _pykernel

_choice = os.environ.get("DELTASUM_BACKEND", "auto").lower()

if _choice == "py":
    _impl = _pykernel
    BACKEND = "python"
elif _choice == "c":
    from . import _ckernel as _impl

    BACKEND = "c"
else:
    try:
        from . import _ckernel as _impl

        BACKEND = "c"
    except ImportError:
        _impl = _pykernel
        BACKEND = "python"

kloosterman_raw = _impl.kloosterman_raw


def available_backends():
    """Map backend name -> raw kernel, for tests and benchmarks."""
    out = {"python": _pykernel.kloosterman_raw}
    try:
        from . import _ckernel
    except ImportError:
        pass
    else:
        out["c"] = _ckernel.kloosterman_raw
    return out
