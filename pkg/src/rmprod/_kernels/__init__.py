"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``RMPROD_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the equivalence tests).
"""

import os

if os.environ.get("RMPROD_PURE_PYTHON"):
    from . import _fallback as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
chain_cone = _impl.chain_cone
chain_axis = _impl.chain_axis
matrix_product_logs = _impl.matrix_product_logs
wavefunction_logs = _impl.wavefunction_logs
stieltjes_forward = _impl.stieltjes_forward


def implementations():
    """Return {name: module} for every importable kernel implementation."""
    from . import _fallback

    impls = {"fallback": _fallback}
    try:
        from . import _native  # type: ignore[attr-defined]

        impls["native"] = _native
    except ImportError:
        pass
    return impls
