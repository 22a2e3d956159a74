"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python kernel
is the fallback and the reference. Set CITIMPACT_PURE_KERNELS=1 to force the
pure backend (used by the benchmark and the parity tests). Both produce
bit-identical values.
"""

import os

from . import _percentile_py as pure


def _load_compiled():
    try:
        from . import _percentile_kernel  # built by setup.py, may be absent

        return _percentile_kernel
    except ImportError:
        return None


compiled = _load_compiled()

if os.environ.get("CITIMPACT_PURE_KERNELS", "") not in ("", "0"):
    _impl = pure
elif compiled is not None:
    _impl = compiled
else:
    _impl = pure

BACKEND: str = _impl.BACKEND
COUNTING_RULES: tuple[str, ...] = ("strict", "weak", "mid")

percentile_values = _impl.percentile_values
class_counts = _impl.class_counts
