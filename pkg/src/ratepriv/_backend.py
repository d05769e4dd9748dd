"""Hot-kernel backend selection.

The compiled Cython extension `ratepriv._fastcore` is preferred when it was
built; otherwise the numpy fallback `ratepriv._numpycore` is used. Set
RATEPRIV_BACKEND=numpy or =compiled to force a choice (the latter raises if
the extension is missing). Both backends implement the same two functions
and agree to floating-point accuracy; see benchmarks/bench_backends.py.
"""
from __future__ import annotations

import os

from . import _numpycore

_requested = os.environ.get("RATEPRIV_BACKEND", "auto").lower()

if _requested not in ("auto", "compiled", "numpy"):
    raise ValueError(f"RATEPRIV_BACKEND={_requested!r} not in (auto, compiled, numpy)")

_impl = None
if _requested in ("auto", "compiled"):
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = None

if _impl is None:
    _impl = _numpycore
    BACKEND = "numpy"
else:
    BACKEND = "compiled"

batch_filter_objectives = _impl.batch_filter_objectives
solve_bases = _impl.solve_bases
