"""Campbell-Hausdorff series Z(x, y) = log(e^x e^y) in Lyndon coordinates."""
from __future__ import annotations

import threading

from .free_lie import LieElt, dynkin_to_lie, substitute
from .words import AssocPoly, assoc_exp, assoc_log, assoc_mul

_lock = threading.Lock()
_cache: dict[str, object] = {"degree": 0, "z": LieElt()}


def _compute(n: int) -> LieElt:
    ex = assoc_exp(AssocPoly.word("1"), n)
    ey = assoc_exp(AssocPoly.word("2"), n)
    return dynkin_to_lie(assoc_log(assoc_mul(ex, ey, n), n))


def bch_series(n: int) -> LieElt:
    """Components Z_1..Z_n of the Campbell-Hausdorff series."""
    if n < 1:
        raise ValueError("degree must be positive")
    with _lock:
        if _cache["degree"] < n:
            _cache["z"] = _compute(n)
            _cache["degree"] = n
        z = _cache["z"]
    return z.truncate(n)


def bch_scaled_degree_profile(n: int) -> list[tuple[int, LieElt]]:
    """Pairs (k, Z_k): in Z(tX, tY) the component Z_k carries the factor t**k."""
    z = bch_series(n)
    return [(k, z.component(k)) for k in range(1, n + 1)]


def bch_reversed(n: int) -> LieElt:
    """Z(y, x) = log(e^y e^x)."""
    return substitute(bch_series(n), "swap")
