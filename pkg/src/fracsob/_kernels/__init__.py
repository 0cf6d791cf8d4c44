"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set FRACSOB_NO_EXTENSION=1 to force the fallback (used by the benchmark and
the kernel equivalence tests).
"""

import os

from fracsob._kernels import _fallback

if os.environ.get("FRACSOB_NO_EXTENSION"):
    _impl = _fallback
    HAVE_COMPILED = False
else:
    try:
        from fracsob._kernels import _core as _impl

        HAVE_COMPILED = True
    except ImportError:
        _impl = _fallback
        HAVE_COMPILED = False

pair_sum_power = _impl.pair_sum_power
interval_sup_ratios = _impl.interval_sup_ratios
