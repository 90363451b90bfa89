"""Backend selection for the hot kernels.

The compiled Cython core is preferred when its extension module is
importable; otherwise the numpy/scipy fallback is used. Set
``GARCH_MCMC_BACKEND=python`` or ``GARCH_MCMC_BACKEND=compiled`` to force a
choice at import time (forcing an unavailable backend is an error).

Both backends expose the same two functions:

    sigma2_path(y, alpha, beta, omega, lam, sigma2_init) -> ndarray
    log_likelihood(y, alpha, beta, omega, lam, sigma2_init) -> float
"""

import os

from . import _numpy

_forced = os.environ.get("GARCH_MCMC_BACKEND", "").strip().lower()

if _forced == "python":
    active = _numpy
elif _forced in ("compiled", "c"):
    from . import _core as active  # noqa: F401  (raises if not built)
elif _forced == "":
    try:
        from . import _core as active  # type: ignore[no-redef]
    except ImportError:
        active = _numpy
else:
    raise ImportError(
        f"GARCH_MCMC_BACKEND={_forced!r} is not a known backend "
        "(expected 'compiled' or 'python')"
    )

BACKEND = active.NAME

sigma2_path = active.sigma2_path
log_likelihood = active.log_likelihood


def available_backends():
    """Names of kernel backends importable in this environment."""
    names = []
    try:
        from . import _core  # noqa: F401

        names.append(_core.NAME)
    except ImportError:
        pass
    names.append(_numpy.NAME)
    return names
