# Numba if available and not disabled by QDIRAC_NUMBA=0; otherwise plain Python.
import logging
import os

logger = logging.getLogger(__name__)

_DISABLED = os.environ.get("QDIRAC_NUMBA", "1").strip().lower() in ("0", "false", "no", "off")

try:
    if _DISABLED:
        raise ImportError("disabled by QDIRAC_NUMBA")
    import numba

    njit = numba.njit
    HAVE_NUMBA = True
except ImportError as exc:
    logger.debug("numba unavailable (%s); using numpy kernels", exc)
    HAVE_NUMBA = False

    def njit(pyfunc=None, **kwargs):
        """Null decorator used when numba is not available."""

        def wrap(func):
            return func

        return wrap if pyfunc is None else wrap(pyfunc)
