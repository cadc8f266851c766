"""Kernel selection: compiled term kernel when available, pure Python otherwise.

Set QHOMFLY_PURE=1 to force the pure-Python kernel (used by the benchmark and
by tests that compare the two implementations).

Exponent bounds: the compiled kernel packs (e_a, e_q, e_s) into one 64-bit
word (14/35/14 bits, sign-biased, one headroom bit per field) and raises
OverflowError for inputs past |e_a|, |e_s| < 4096 or |e_q| < 2^33.  Nothing
in the engine approaches these at any feasible color.
"""

from __future__ import annotations

import os

if os.environ.get("QHOMFLY_PURE") == "1":
    from . import _kernel_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]

        BACKEND = "c"
    except ImportError:
        from . import _kernel_py as _impl

        BACKEND = "python"

mul = _impl.mul
Accum = _impl.Accum
qdiv = _impl.qdiv
