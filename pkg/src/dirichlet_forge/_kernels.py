"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set
``DIRICHLET_FORGE_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("DIRICHLET_FORGE_PURE_PYTHON") == "1":
    backend = _pykernels
else:
    try:
        from . import _ckernels as backend
    except ImportError:
        backend = _pykernels


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


lpf_sieve = backend.lpf_sieve
extend_multiplicative = backend.extend_multiplicative
extend_additive = backend.extend_additive
prime_power_base = backend.prime_power_base
divisor_sums = backend.divisor_sums
dirichlet_sum = backend.dirichlet_sum
BACKEND = backend.NAME
