"""Kernel backend selection.

The compiled Cython extension is preferred; the pure-Python module is the
fallback. OLIGRAPH_PURE_PYTHON=1 forces the fallback (used by tests and the
backend benchmark). Both backends implement the same contracts and produce
identical results on the same inputs.
"""

import os

from . import _pykernels

if os.environ.get("OLIGRAPH_PURE_PYTHON") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.NAME

betweenness = _impl.betweenness
betweenness_sources = _impl.betweenness_sources
component_labels = _impl.component_labels
triangle_count = _impl.triangle_count


def backends():
    """All importable backends, compiled first; used by the benchmark."""
    found = []
    try:
        from . import _ckernels

        found.append(_ckernels)
    except ImportError:
        pass
    found.append(_pykernels)
    return found
