"""Hot numerical kernels with a compiled core and a pure-Python fallback.

The compiled extension (kernels._fast, built from Cython) is preferred; when
it is missing, or IR2EMO_PURE_PYTHON=1 is set, the numpy fallback is used.
Both backends produce bit-identical results; see benchmarks/bench_kernels.py
for the speed comparison.
"""

import os

from . import _pure

if os.environ.get("IR2EMO_PURE_PYTHON", "") == "1":
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "python"

ASF = _pure.ASF
PDM = _pure.PDM
PBI = _pure.PBI

nd_ranks = _impl.nd_ranks
scalarize_argmin = _impl.scalarize_argmin
hv_exact = _impl.hv_exact
build_tree = _impl.build_tree
tree_predict = _impl.tree_predict


def get_backend(name: str):
    """Return a specific backend module ("python" or "compiled")."""
    if name == "python":
        return _pure
    if name == "compiled":
        from . import _fast
        return _fast
    raise ValueError(f"unknown backend {name!r}")
