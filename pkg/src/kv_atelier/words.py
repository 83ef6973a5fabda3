"""Free associative algebra on two letters and its cyclic quotient.

Words are strings over the alphabet ``"1"`` (x = ad X) and ``"2"`` (y = ad Y);
the empty string is the unit. Python string comparison is then exactly the
lexicographic order with 1 < 2.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

logger = logging.getLogger(__name__)

ALPHABET = ("1", "2")


def check_word(w: str) -> str:
    if any(c not in ALPHABET for c in w):
        raise ValueError(f"word {w!r} uses letters outside {{1, 2}}")
    return w


class LinearCombination:
    """Finitely supported map key -> Fraction; no zero coefficients stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable | None = None):
        self.terms: dict = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            self._add_term(k, c)

    def _add_term(self, key, c):
        if not c:
            return
        v = self.terms.get(key, 0) + Fraction(c)
        if v:
            self.terms[key] = v
        else:
            del self.terms[key]

    @classmethod
    def _from_clean(cls, terms: dict):
        """Wrap a dict already free of zero coefficients, without copying."""
        out = cls.__new__(cls)
        out.terms = terms
        return out

    def _new(self, terms):
        return self._from_clean(terms)

    def copy(self):
        return self._new(dict(self.terms))

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._new(out)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, LinearCombination):
            return NotImplemented
        c = Fraction(c)
        if not c:
            return self._new({})
        return self._new({k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def to_json(self) -> dict[str, str]:
        return {str(k): str(c) for k, c in self.sorted_items()}

    def __repr__(self):
        body = ", ".join(f"{k}: {c}" for k, c in self.sorted_items())
        return f"{self.__class__.__name__}({{{body}}})"


class AssocPoly(LinearCombination):
    """Element of the free associative algebra, keyed by words."""

    __slots__ = ()

    @classmethod
    def word(cls, w: str, c=1) -> "AssocPoly":
        return cls({check_word(w): c})

    @classmethod
    def one(cls) -> "AssocPoly":
        return cls({"": 1})

    @property
    def constant(self) -> Fraction:
        return self[""]

    def degree_part(self, n: int) -> "AssocPoly":
        return AssocPoly({w: c for w, c in self.terms.items() if len(w) == n})

    def truncate(self, max_degree: int) -> "AssocPoly":
        return AssocPoly({w: c for w, c in self.terms.items() if len(w) <= max_degree})

    def max_len(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def by_degree(self) -> dict[int, dict[str, Fraction]]:
        out: dict[int, dict[str, Fraction]] = {}
        for w, c in self.terms.items():
            out.setdefault(len(w), {})[w] = c
        return out


def assoc_mul(a: AssocPoly, b: AssocPoly, max_degree: int | None = None) -> AssocPoly:
    """Concatenation product, dropping words longer than ``max_degree``."""
    out: dict[str, Fraction] = {}
    bd = sorted(b.by_degree().items())
    for u, cu in a.terms.items():
        lu = len(u)
        for n, part in bd:
            if max_degree is not None and lu + n > max_degree:
                break
            for v, cv in part.items():
                w = u + v
                s = out.get(w, 0) + cu * cv
                if s:
                    out[w] = s
                else:
                    del out[w]
    return AssocPoly._from_clean(out)


def assoc_exp(a: AssocPoly, max_degree: int) -> AssocPoly:
    if a.constant:
        raise ValueError("exp needs a series without constant term")
    result = AssocPoly.one()
    power = AssocPoly.one()
    for k in range(1, max_degree + 1):
        power = assoc_mul(power, a, max_degree)
        if not power:
            break
        result = result + power * Fraction(1, factorial(k))
    return result


def assoc_log(a: AssocPoly, max_degree: int) -> AssocPoly:
    if a.constant != 1:
        raise ValueError("log needs a series with constant term 1")
    h = a - AssocPoly.one()
    result = AssocPoly()
    power = AssocPoly.one()
    for k in range(1, max_degree + 1):
        power = assoc_mul(power, h, max_degree)
        if not power:
            break
        result = result + power * Fraction((-1) ** (k + 1), k)
    return result


def assoc_power_series(coeffs, a: AssocPoly, max_degree: int) -> AssocPoly:
    """sum_k coeffs[k] * a**k for ``a`` without constant term."""
    if a.constant:
        raise ValueError("argument must have zero constant term")
    result = AssocPoly({"": coeffs[0]})
    power = AssocPoly.one()
    for k in range(1, min(len(coeffs) - 1, max_degree) + 1):
        power = assoc_mul(power, a, max_degree)
        if not power:
            break
        if coeffs[k]:
            result = result + power * coeffs[k]
    return result


# -- cyclic words -----------------------------------------------------------


class CyclicVec(LinearCombination):
    """Element of the cyclic quotient, keyed by canonical necklace strings."""

    __slots__ = ()

    def degree_part(self, n: int) -> "CyclicVec":
        return CyclicVec({w: c for w, c in self.terms.items() if len(w) == n})


def necklace_canon(w: str) -> str:
    """Lexicographically least rotation of a non-empty word."""
    if not w:
        raise ValueError("the empty word has no necklace")
    check_word(w)
    return min(w[i:] + w[:i] for i in range(len(w)))


def cyclic_project(a: AssocPoly) -> CyclicVec:
    out = CyclicVec()
    canon: dict[str, str] = {}
    for w, c in a.terms.items():
        if not w:
            logger.warning("constant term %s dropped by cyclic projection", c)
            continue
        key = canon.get(w)
        if key is None:
            key = canon[w] = necklace_canon(w)
        out._add_term(key, c)
    return out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def necklace_dim(n: int) -> int:
    """Number of binary necklaces of length n."""
    from sympy import totient

    if n < 1:
        raise ValueError("n must be positive")
    return sum(int(totient(d)) * 2 ** (n // d) for d in _divisors(n)) // n


def _duval(n: int) -> Iterator[str]:
    """Lyndon words of length <= n in lexicographic order (Duval's algorithm)."""
    w = [-1]
    while w:
        w[-1] += 1
        yield "".join("12"[x] for x in w)
        m = len(w)
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == 1:
            w.pop()


def necklace_basis(n: int) -> list[str]:
    """Canonical necklaces of length n, sorted lexicographically."""
    if n < 1:
        raise ValueError("n must be positive")
    return sorted(w * (n // len(w)) for w in _duval(n) if n % len(w) == 0)


def lyndon_words(n: int) -> list[str]:
    """Lyndon words of length exactly n, in lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    return [w for w in _duval(n) if len(w) == n]
