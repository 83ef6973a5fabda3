"""Free Lie algebra on x, y in the Lyndon basis.

A basis element is a Lyndon word ``w``; it stands for the bracket P_w built
from the standard factorization w = uv (v the longest proper Lyndon suffix),
P_w = [P_u, P_v]. Expanded in the associative algebra, P_w = w + (words
lexicographically greater than w).
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .words import AssocPoly, LinearCombination, check_word, lyndon_words

X, Y = "1", "2"


class NotLieError(ValueError):
    """Raised when an associative polynomial is not a Lie polynomial."""

    def __init__(self, degree: int, detail: str = ""):
        self.degree = degree
        super().__init__(f"not a Lie element in degree {degree}" + (f": {detail}" if detail else ""))


class LieElt(LinearCombination):
    """Element of the free Lie algebra, keyed by Lyndon words."""

    __slots__ = ()

    @classmethod
    def basis(cls, w: str, c=1) -> "LieElt":
        if not is_lyndon(w):
            raise ValueError(f"{w!r} is not a Lyndon word")
        return cls({w: c})

    @classmethod
    def gens(cls) -> tuple["LieElt", "LieElt"]:
        return cls({X: 1}), cls({Y: 1})

    def component(self, n: int) -> "LieElt":
        return LieElt._from_clean({w: c for w, c in self.terms.items() if len(w) == n})

    def truncate(self, max_degree: int) -> "LieElt":
        return LieElt._from_clean({w: c for w, c in self.terms.items() if len(w) <= max_degree})

    def degrees(self) -> list[int]:
        return sorted({len(w) for w in self.terms})

    def __str__(self):
        return print_bracket(self)


# -- Lyndon words -------------------------------------------------------------


@lru_cache(maxsize=None)
def is_lyndon(w: str) -> bool:
    if not w:
        return False
    check_word(w)
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_factorization(w: str) -> tuple[str, str]:
    """(u, v) with w = uv and v the longest proper Lyndon suffix."""
    if len(w) < 2:
        raise ValueError("letters have no standard factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError("unreachable: the last letter is Lyndon")


@lru_cache(maxsize=None)
def lyndon_basis(n: int) -> tuple[str, ...]:
    return tuple(lyndon_words(n))


def witt_dim(n: int) -> int:
    """Dimension of the degree-n part of the free Lie algebra on two generators."""
    from sympy import divisors, mobius

    if n < 1:
        raise ValueError("n must be positive")
    return sum(int(mobius(d)) * 2 ** (n // d) for d in divisors(n)) // n


# -- bracket in the Lyndon basis ------------------------------------------------


def _accumulate(out: dict, items, scale) -> None:
    for w, c in items:
        v = out.get(w, 0) + scale * c
        if v:
            out[w] = v
        else:
            del out[w]


@lru_cache(maxsize=None)
def bracket_basis(u: str, v: str) -> tuple[tuple[str, int], ...]:
    """[P_u, P_v] in Lyndon coordinates (integer structure constants)."""
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in bracket_basis(v, u))
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((u + v, 1),)
    u1, u2 = standard_factorization(u)
    # [[u1, u2], v] = [u1, [u2, v]] - [u2, [u1, v]]
    out: dict[str, int] = {}
    for w, c in bracket_basis(u2, v):
        _accumulate(out, bracket_basis(u1, w), c)
    for w, c in bracket_basis(u1, v):
        _accumulate(out, bracket_basis(u2, w), -c)
    return tuple(sorted(out.items()))


def lie_bracket(a: LieElt, b: LieElt, max_degree: int | None = None) -> LieElt:
    out: dict[str, Fraction] = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            if max_degree is not None and len(u) + len(v) > max_degree:
                continue
            _accumulate(out, bracket_basis(u, v), cu * cv)
    return LieElt._from_clean(out)


# -- associative expansion and projection --------------------------------------


@lru_cache(maxsize=None)
def expand_basis(w: str) -> dict[str, int]:
    """P_w expanded in the associative algebra; callers must not mutate."""
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    eu, ev = expand_basis(u), expand_basis(v)
    out: dict[str, int] = {}
    for a, ca in eu.items():
        for b, cb in ev.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    return {k: c for k, c in out.items() if c}


def lie_to_assoc(e: LieElt) -> AssocPoly:
    out: dict[str, Fraction] = {}
    for w, c in e.terms.items():
        _accumulate(out, expand_basis(w).items(), c)
    return AssocPoly._from_clean(out)


@lru_cache(maxsize=None)
def left_normed(w: str) -> tuple[tuple[str, int], ...]:
    """[[...[l1, l2], ...], ln] in Lyndon coordinates."""
    if len(w) == 1:
        return ((w, 1),)
    out: dict[str, int] = {}
    for u, c in left_normed(w[:-1]):
        _accumulate(out, bracket_basis(u, w[-1]), c)
    return tuple(sorted(out.items()))


def dynkin_to_lie(a: AssocPoly) -> LieElt:
    """Lyndon coordinates of a Lie polynomial given in associative form.

    Uses the Dynkin-Specht-Wever map degree by degree and checks the round
    trip; raises :class:`NotLieError` otherwise.
    """
    if a.constant:
        raise NotLieError(0, "nonzero constant term")
    result: dict[str, Fraction] = {}
    for n, part in sorted(a.by_degree().items()):
        comp: dict[str, Fraction] = {}
        for w, c in part.items():
            _accumulate(comp, left_normed(w), Fraction(c, n))
        lie = LieElt._from_clean(comp)
        if lie_to_assoc(lie) != AssocPoly._from_clean(dict(part)):
            raise NotLieError(n)
        result.update(comp)
    return LieElt._from_clean(result)


def assoc_to_lie(a: AssocPoly) -> LieElt:
    """Same as :func:`dynkin_to_lie` via leading-word elimination (triangularity)."""
    rest = dict(a.terms)
    out: dict[str, Fraction] = {}
    while rest:
        w = min(rest)
        c = rest[w]
        if not is_lyndon(w):
            raise NotLieError(len(w), f"leading word {w} is not Lyndon")
        out[w] = c
        _accumulate(rest, expand_basis(w).items(), -c)
    return LieElt._from_clean(out)


# -- substitutions and operator series -------------------------------------------


@lru_cache(maxsize=None)
def _swap_basis(w: str) -> tuple[tuple[str, int], ...]:
    if len(w) == 1:
        return (((Y if w == X else X), 1),)
    u, v = standard_factorization(w)
    su = LieElt._from_clean(dict(_swap_basis(u)))
    sv = LieElt._from_clean(dict(_swap_basis(v)))
    return tuple(sorted(lie_bracket(su, sv).terms.items()))


def substitute(e: LieElt, mode: str) -> LieElt:
    """Evaluate e at (-x, -y), (y, x) or (-y, -x)."""
    if mode == "negate_both":
        return LieElt._from_clean({w: (-c if len(w) % 2 else c) for w, c in e.terms.items()})
    if mode not in ("swap", "swap_negate"):
        raise ValueError(f"unknown substitution {mode!r}")
    out: dict[str, Fraction] = {}
    for w, c in e.terms.items():
        if mode == "swap_negate" and len(w) % 2:
            c = -c
        _accumulate(out, _swap_basis(w), c)
    return LieElt._from_clean(out)


def ad_apply(series, w: LieElt, target: LieElt, max_degree: int) -> LieElt:
    """sum_k series[k] (ad w)^k (target), truncated at ``max_degree``."""
    coeffs = list(series.coeffs if hasattr(series, "coeffs") else series)
    result = target.truncate(max_degree) * coeffs[0]
    cur = target.truncate(max_degree)
    for k in range(1, len(coeffs)):
        cur = lie_bracket(w, cur, max_degree)
        if not cur:
            break
        if coeffs[k]:
            result = result + cur * coeffs[k]
    return result


# -- bracket text form ---------------------------------------------------------


class BracketParseError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


_NUMBER = re.compile(r"\d+(?:/\d+)?")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            m = _NUMBER.match(text, i)
            tokens.append(("num", m.group(), i))
            i = m.end()
        elif ch in "xyXY":
            tokens.append(("gen", ch.lower(), i))
            i += 1
        elif ch in "[],+-*()":
            tokens.append(("op", ch, i))
            i += 1
        else:
            raise BracketParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise BracketParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expression(self) -> LieElt:
        total = LieElt()
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.i += 1
        total = total + self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
            total = total + self.term() * sign
        self.take("end")
        return total

    def coefficient(self) -> Fraction:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "(":
            self.i += 1
            neg = False
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                neg = True
                self.i += 1
            c = Fraction(self.take("num")[1])
            self.take("op", ")")
            return -c if neg else c
        return Fraction(self.take("num")[1])

    def term(self) -> LieElt:
        coeff = Fraction(1)
        tok = self.peek()
        if tok[0] == "num" or (tok[0] == "op" and tok[1] == "("):
            coeff = self.coefficient()
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "*":
                self.i += 1
            elif coeff == 0 and nxt[0] in ("end", "op") and nxt[1] in ("", "+", "-"):
                return LieElt()
        return self.bracket() * coeff

    def bracket(self) -> LieElt:
        tok = self.peek()
        if tok[0] == "gen":
            self.i += 1
            return LieElt({X if tok[1] == "x" else Y: 1})
        if tok[0] == "op" and tok[1] == "[":
            self.i += 1
            left = self.bracket()
            self.take("op", ",")
            right = self.bracket()
            self.take("op", "]")
            return lie_bracket(left, right)
        raise BracketParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2])


def parse_bracket(text: str) -> LieElt:
    """Parse sums like ``"4*[[x,y],[y,[x,y]]] - 1/2*[x,y]"`` into Lyndon coordinates."""
    return _Parser(text).expression()


@lru_cache(maxsize=None)
def bracket_form(w: str) -> str:
    if len(w) == 1:
        return "x" if w == X else "y"
    u, v = standard_factorization(w)
    return f"[{bracket_form(u)},{bracket_form(v)}]"


def print_bracket(e: LieElt, upper: bool = False) -> str:
    if not e:
        return "0"
    parts = []
    for w, c in e.sorted_items():
        body = bracket_form(w)
        if upper:
            body = body.upper()
        mag = abs(c)
        text = body if mag == 1 else f"{mag}*{body}"
        parts.append(("- " if c < 0 else "+ ") + text)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def lie_elt_from_coords(words: Iterable[str], coords: Iterable) -> LieElt:
    return LieElt(zip(words, coords))
