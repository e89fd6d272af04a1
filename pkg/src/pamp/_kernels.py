"""Backend selection: compiled kernels when importable, pure numpy otherwise.

Set PAMP_PURE=1 to force the numpy fallback (used by the equivalence tests
and the benchmark).  Both backends implement the stream contract documented
in ``_kernels_py``, so the choice never affects results, only speed.
"""

from __future__ import annotations

import os

if os.environ.get("PAMP_PURE", "") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
pa1_targets = _impl.pa1_targets
mpk_step = _impl.mpk_step
voter_step = _impl.voter_step
