"""Kernel selection: compiled extension if available, pure Python otherwise.

Set IWRANK_PURE=1 to force the fallback (used by the benchmark and to
reproduce results on systems without a compiler).
"""

import os

if os.environ.get("IWRANK_PURE") == "1":
    from iwrank import _kernels_pure as _impl

    COMPILED = False
else:
    try:
        from iwrank import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from iwrank import _kernels_pure as _impl

        COMPILED = False

convolve = _impl.convolve
fold_tail = _impl.fold_tail
convolve_reduce = _impl.convolve_reduce
