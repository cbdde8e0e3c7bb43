"""Backend selector: compiled kernels when available, pure Python otherwise.

Set GLFQ_PURE=1 to force the pure-Python path (used by the benchmark and
the backend-agreement tests).
"""

import os

from . import _pykernels

if os.environ.get("GLFQ_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.backend_name()

batch_matmul = _impl.batch_matmul
batch_inverse = _impl.batch_inverse
batch_charpoly = _impl.batch_charpoly
batch_poly_rank = _impl.batch_poly_rank
class_mult_coeffs = _impl.class_mult_coeffs
trace_phi_histogram = _impl.trace_phi_histogram


def implementations():
    """Available (name, module) pairs, compiled first."""
    out = []
    try:
        from . import _ckernels
        out.append(("c", _ckernels))
    except ImportError:
        pass
    out.append(("python", _pykernels))
    return out
