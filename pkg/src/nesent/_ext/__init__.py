"""Inner loops for linear-model training and scoring.

``backend`` names the implementation actually loaded: ``"cython"`` when the
compiled extension imports, ``"python"`` otherwise. Setting the environment
variable ``NESENT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels as python_kernels

compiled_kernels = None
if not os.environ.get("NESENT_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
backend = "cython" if compiled_kernels is not None else "python"

pegasos_train = kernels.pegasos_train
sparse_margins = kernels.sparse_margins

__all__ = ["backend", "kernels", "pegasos_train", "sparse_margins", "python_kernels", "compiled_kernels"]
