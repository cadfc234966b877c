"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled ``kuznf._ckern`` module is preferred when importable; setting
``KUZNF_BACKEND=pure`` forces the numpy fallback, ``KUZNF_BACKEND=compiled``
demands the extension (raising if it is missing).  Both backends implement
the same functions with the same quadrature parameters, so results agree to
rounding error.
"""

from __future__ import annotations

import os

from . import _pkern

_choice = os.environ.get("KUZNF_BACKEND", "auto").lower()

_ckern = None
if _choice in ("auto", "compiled"):
    try:
        from . import _ckern  # type: ignore[no-redef]
    except ImportError as exc:
        if _choice == "compiled":
            raise ImportError(
                "KUZNF_BACKEND=compiled but the kuznf._ckern extension "
                f"is not available: {exc}") from exc
        _ckern = None

if _ckern is not None:
    BACKEND = "compiled"
    _impl = _ckern
else:
    BACKEND = "pure"
    _impl = _pkern


def get_backend(name: str | None = None):
    """The active kernel module, or a specific one by name ('pure'/'compiled')."""
    if name is None:
        return _impl
    if name == "pure":
        return _pkern
    if name == "compiled":
        if _ckern is None:
            raise ImportError("compiled backend not built")
        return _ckern
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> list[str]:
    return ["pure"] + (["compiled"] if _ckern is not None else [])


# re-exported kernel entry points (hot paths call these)
rgamma = _impl.rgamma
j_star_raw = _impl.j_star
j_star_nus_raw = _impl.j_star_nus
bessel_k_raw = _impl.bessel_k
bessel_k_xs_raw = _impl.bessel_k_xs
bessel_i_raw = _impl.bessel_i
bessel_i_xs_raw = _impl.bessel_i_xs
bessel_j_raw = _impl.bessel_j
bessel_j_xs_raw = _impl.bessel_j_xs
bessel_j_mus_raw = _impl.bessel_j_mus
classical_kloosterman_raw = _impl.classical_kloosterman
