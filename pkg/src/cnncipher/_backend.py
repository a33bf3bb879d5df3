"""Select the keystream backend at import time.

The compiled extension is preferred; the pure-Python module is the
fallback.  ``CNNCIPHER_BACKEND=pure`` or ``=compiled`` in the environment
forces the choice (forcing ``compiled`` fails loudly if the extension is
missing).  Both expose the same ``run_rounds`` and are bit-compatible.
"""

import os

_forced = os.environ.get("CNNCIPHER_BACKEND", "")
if _forced not in ("", "pure", "compiled"):
    raise ImportError(f"CNNCIPHER_BACKEND must be 'pure' or 'compiled', got {_forced!r}")

if _forced == "pure":
    from . import _purepy as _impl
else:
    try:
        from . import _speed as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced == "compiled":
            raise
        from . import _purepy as _impl

BACKEND = "compiled" if _impl.__name__.endswith("_speed") else "pure"
run_rounds = _impl.run_rounds
