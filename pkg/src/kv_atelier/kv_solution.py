"""The Kashiwara-Vergne solvable pair (F0, G0) and both sides of the trace equation.

F1 = (integral over t in [0,1] of R_t(ad x) psi(ad Z(t)) dt)(x + y), with
R_t(u) = (1 - e^{-tu})/(1 - e^{-u}) and Z(t) = Z(tx, ty);
F0 = 1/2 (F1 + e^{ad x} F1(-x, -y)) + 1/4 (Z - x);  G0 = F0(-y, -x).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .bch import bch_reversed, bch_scaled_degree_profile, bch_series
from .exact_series import TPoly, ber_series, exp_series, integrate_t, psi_series, ratio_series
from .free_lie import LieElt, ad_apply, lie_bracket, lie_to_assoc, substitute
from .words import AssocPoly, CyclicVec, assoc_power_series, cyclic_project

_x, _y = LieElt.gens()


@dataclass(frozen=True)
class KvPair:
    f: LieElt
    g: LieElt
    max_degree: int

    def component(self, n: int) -> "KvPair":
        return KvPair(self.f.component(n), self.g.component(n), self.max_degree)

    def is_symmetric(self) -> bool:
        return self.g == substitute(self.f, "swap_negate")


def _add_graded(acc: dict[int, LieElt], tpow: int, e: LieElt) -> None:
    if e:
        acc[tpow] = acc[tpow] + e if tpow in acc else e


def f1_series(n: int) -> LieElt:
    if n < 1:
        raise ValueError("degree must be positive")
    profile = bch_scaled_degree_profile(n)
    psi = psi_series(n)

    # psi(ad Z(t))(x + y) as {power of t: Lie element}
    cur: dict[int, LieElt] = {0: _x + _y}
    inner: dict[int, LieElt] = {0: (_x + _y) * psi[0]}
    for k in range(1, n):
        nxt: dict[int, LieElt] = {}
        for tpow, e in cur.items():
            for zdeg, zk in profile:
                if zdeg + min(e.degrees()) > n:
                    break
                _add_graded(nxt, tpow + zdeg, lie_bracket(zk, e, n))
        cur = nxt
        if not cur:
            break
        for tpow, e in cur.items():
            _add_graded(inner, tpow, e * psi[k])

    ratio = ratio_series(n)
    result = LieElt()
    for tpow, e in inner.items():
        power = e
        for k in range(n):
            if not power:
                break
            weight = integrate_t(ratio[k] * TPoly.monomial(tpow))
            if weight:
                result = result + power * weight
            power = lie_bracket(_x, power, n)
    return result


_lock = threading.Lock()
_f0_cache: dict[str, object] = {"degree": 0, "f0": LieElt()}


def f0_series(n: int) -> LieElt:
    if n < 1:
        raise ValueError("degree must be positive")
    with _lock:
        if _f0_cache["degree"] < n:
            f1 = f1_series(n)
            twisted = ad_apply(exp_series(n), _x, substitute(f1, "negate_both"), n)
            f0 = (f1 + twisted) * Fraction(1, 2) + (bch_series(n) - _x) * Fraction(1, 4)
            _f0_cache.update(degree=n, f0=f0)
        f0 = _f0_cache["f0"]
    return f0.truncate(n)


def g0_series(n: int) -> LieElt:
    return substitute(f0_series(n), "swap_negate")


def solvable_pair(n: int) -> KvPair:
    f = f0_series(n)
    return KvPair(f, substitute(f, "swap_negate"), n)


def partial_strip(a: AssocPoly, letter: str) -> AssocPoly:
    """Coefficient of the right factor ``letter``: a = a0 + d1(a) x + d2(a) y."""
    return AssocPoly._from_clean({w[:-1]: c for w, c in a.terms.items() if w and w[-1] == letter})


def divergence(a: LieElt, b: LieElt) -> CyclicVec:
    """Cyclic class of x d1(a) + y d2(b)."""
    first = partial_strip(lie_to_assoc(a), "1")
    second = partial_strip(lie_to_assoc(b), "2")
    out = AssocPoly._from_clean({"1" + w: c for w, c in first.terms.items()})
    out = out + AssocPoly._from_clean({"2" + w: c for w, c in second.terms.items()})
    return cyclic_project(out)


def kv2_lhs(n: int) -> CyclicVec:
    pair = solvable_pair(n).component(n)
    return divergence(pair.f, pair.g)


def kv2_rhs(n: int) -> CyclicVec:
    """Degree-n part of 1/2 (B(x) + B(y) - B(z) - 1) with B(u) = u/(e^u - 1)."""
    if n < 1:
        raise ValueError("degree must be positive")
    ber = ber_series(n).coeffs
    z = lie_to_assoc(bch_series(n))
    total = (
        assoc_power_series(ber, AssocPoly.word("1"), n)
        + assoc_power_series(ber, AssocPoly.word("2"), n)
        - assoc_power_series(ber, z, n)
        - AssocPoly.one()
    )
    if total.constant:
        raise ArithmeticError("constant terms failed to cancel")
    return cyclic_project(total.degree_part(n) * Fraction(1, 2))


def kv1_residual(pair: KvPair, n: int) -> LieElt:
    """(x + y - Z(y, x)) - (1 - e^{-ad x}) F - (e^{ad y} - 1) G, truncated at n."""
    one_minus_exp_neg = [-c for c in exp_series(n, -1).coeffs]
    one_minus_exp_neg[0] = Fraction(0)
    exp_minus_one = list(exp_series(n).coeffs)
    exp_minus_one[0] = Fraction(0)
    lhs = _x + _y - bch_reversed(n)
    rhs = ad_apply(one_minus_exp_neg, _x, pair.f.truncate(n), n) + ad_apply(
        exp_minus_one, _y, pair.g.truncate(n), n
    )
    return (lhs - rhs).truncate(n)


def trace_defect(n: int) -> CyclicVec:
    return kv2_rhs(n) - kv2_lhs(n)
