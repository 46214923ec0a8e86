"""Backend selection for the hot inner loops.

The compiled extension ``weilforge._ckernels`` is used when it imports;
otherwise the pure-Python module is used.  Set ``WEILFORGE_PURE=1`` to
force the fallback.  Both backends return identical results.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = 'python'
_impl = _kernels_py

if os.environ.get('WEILFORGE_PURE', '') not in ('1', 'true', 'yes'):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = 'cython'
    except ImportError:
        _impl = _kernels_py

poly_mul = _impl.poly_mul
eval_homogeneous = _impl.eval_homogeneous
divmod_unit = _impl.divmod_unit
sign_variations = _impl.sign_variations
subset_candidates = _impl.subset_candidates

__all__ = [
    'BACKEND',
    'divmod_unit',
    'eval_homogeneous',
    'poly_mul',
    'sign_variations',
    'subset_candidates',
]
