"""Truncated univariate power series with exact rational coefficients.

Only what the Kashiwara-Vergne construction needs: Bernoulli numbers, the
series u/(e^u - 1), the function psi(z) = (e^z - 1 - z)/((e^z - 1)(1 - e^-z)),
and the ratio (1 - e^{-tu})/(1 - e^{-u}) whose coefficients are polynomials
in a scalar parameter t.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

Rational = Fraction


def format_rational(q) -> str:
    """Canonical string form: ``"n"`` for integers, ``"num/den"`` otherwise."""
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class USeries:
    """Power series in one variable truncated after ``u**order``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if k <= self.order else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "USeries":
        return USeries(tuple(self[k] for k in range(order + 1)))

    def __add__(self, other: "USeries") -> "USeries":
        n = min(self.order, other.order)
        return USeries(tuple(self[k] + other[k] for k in range(n + 1)))

    def __neg__(self) -> "USeries":
        return USeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "USeries") -> "USeries":
        return self + (-other)

    def scale(self, c) -> "USeries":
        c = Fraction(c)
        return USeries(tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "USeries") -> "USeries":
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other[j]
        return USeries(tuple(out))

    def __truediv__(self, other: "USeries") -> "USeries":
        if other[0] == 0:
            raise ZeroDivisionError("divisor series has zero constant term")
        n = min(self.order, other.order)
        out: list[Fraction] = []
        for k in range(n + 1):
            acc = self[k] - sum((other[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out.append(acc / other[0])
        return USeries(tuple(out))

    def alternate(self) -> "USeries":
        """The series of f(-u)."""
        return USeries(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class TPoly:
    """Polynomial in t with rational coefficients, ``coeffs[k]`` multiplying t**k."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, k: int, c=1) -> "TPoly":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return TPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "TPoly":
        c = Fraction(c)
        return TPoly(tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "TPoly") -> "TPoly":
        if not self or not other:
            return TPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return TPoly(tuple(out))

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


@dataclass(frozen=True)
class TUSeries:
    """Series in u whose coefficients are polynomials in t."""

    coeffs: tuple[TPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> TPoly:
        return self.coeffs[k] if k <= self.order else TPoly()

    def at(self, t) -> USeries:
        return USeries(tuple(p(t) for p in self.coeffs))


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number with B_1 = -1/2, i.e. u/(e^u - 1) = sum B_n u^n / n!."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    s = sum((comb(n + 1, k) * bernoulli(k) for k in range(n)), Fraction(0))
    return -s / (n + 1)


def exp_series(order: int, sign: int = 1) -> USeries:
    """Coefficients of e^{sign*u}."""
    return USeries(tuple(Fraction(sign**k, factorial(k)) for k in range(order + 1)))


def ber_series(order: int) -> USeries:
    return USeries(tuple(bernoulli(k) / factorial(k) for k in range(order + 1)))


def psi_series(order: int) -> USeries:
    # both quotients below have the z^2 factor already cancelled
    num = USeries(tuple(Fraction(1, factorial(k + 2)) for k in range(order + 1)))
    e_plus = USeries(tuple(Fraction(1, factorial(k + 1)) for k in range(order + 1)))
    return num / (e_plus * e_plus.alternate())


def ratio_series(order: int) -> TUSeries:
    """(1 - e^{-tu}) / (1 - e^{-u}) with the common factor u cancelled."""
    num = [TPoly.monomial(k + 1, Fraction((-1) ** k, factorial(k + 1))) for k in range(order + 1)]
    den = [Fraction((-1) ** k, factorial(k + 1)) for k in range(order + 1)]
    out: list[TPoly] = []
    for k in range(order + 1):
        acc = num[k]
        for j in range(1, k + 1):
            acc = acc - out[k - j].scale(den[j])
        out.append(acc)  # den[0] == 1
    return TUSeries(tuple(out))


def integrate_t(p: TPoly) -> Fraction:
    """Integral of p over [0, 1]."""
    return sum((c / (k + 1) for k, c in enumerate(p.coeffs)), Fraction(0))

