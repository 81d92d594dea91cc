"""Engine selection.

The compiled GF(p) kernel is used when it was built and the modulus fits in
32 bits; everything else (QQ, huge primes, missing extension, or
``IRREP_PURE_PYTHON=1``) goes to the pure-Python engine.  Both engines follow
the same reduction rule, so results do not depend on the choice.
"""

from __future__ import annotations

import os

from ._codec import MonomialCodec
from ._pyengine import PyEngine

try:
    from ._gfp import GFpEngine
except ImportError:  # pragma: no cover - depends on the build
    GFpEngine = None

FORCE_PURE = os.environ.get("IRREP_PURE_PYTHON") == "1"
HAVE_COMPILED = GFpEngine is not None and not FORCE_PURE


def make_engine(codec: MonomialCodec, p: int, compiled: bool | None = None):
    """Engine for characteristic ``p`` (0 = QQ).  ``compiled=None`` picks the
    fastest available one; ``False`` forces the Python engine."""
    if compiled is None:
        compiled = HAVE_COMPILED
    if compiled and GFpEngine is not None and 1 < p < (1 << 32):
        return GFpEngine(codec, p)
    if compiled is True and GFpEngine is None:
        raise RuntimeError("compiled engine not built")
    return PyEngine(codec, p)
