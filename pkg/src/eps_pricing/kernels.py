"""Backend selection for the Monte Carlo sampler.

The compiled extension is used when it was built; otherwise, or when the
environment variable EPS_PRICING_PURE_PYTHON is set to 1, the numpy
implementation takes over. Both produce the same stream up to libm
rounding in the tails of the inverse normal.
"""

import os

from . import _kernels_py

MAX_JUMPS = _kernels_py.MAX_JUMPS
MODE_POISSON = _kernels_py.MODE_POISSON
MODE_FIXED = _kernels_py.MODE_FIXED
MODE_AT_MOST_ONE = _kernels_py.MODE_AT_MOST_ONE

_compiled = None
if os.environ.get("EPS_PRICING_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"


def get_sampler(backend=None):
    """Return the block sampler for ``backend`` ('cython', 'numpy' or None for the default)."""
    name = backend or BACKEND
    if name == "numpy":
        return _kernels_py.sample_block
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel is not available")
        return _compiled.sample_block
    raise ValueError(f"unknown backend {name!r}")


sample_block = get_sampler()
