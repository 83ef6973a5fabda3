"""The linear system cutting out kv2 in degree N, and its kernel.

Unknowns are the Lyndon coordinates of A (first block) and B (second block).
Rows: the Lyndon coordinates of [x, A] + [y, B] in degree N + 1, followed by
the necklace coordinates of the divergence of (A, B) in degree N.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, TextIO

from .free_lie import LieElt, bracket_basis, expand_basis, lyndon_basis, witt_dim
from .words import necklace_basis, necklace_canon, necklace_dim

logger = logging.getLogger(__name__)

DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)


@dataclass
class SparseMatQ:
    """Sparse rational matrix, entries keyed by 1-based (row, col)."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (1 <= i <= self.rows and 1 <= j <= self.cols):
                raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            v = Fraction(v)
            if v:
                clean[i, j] = v
        self.entries = clean

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def row_dicts(self) -> list[dict[int, Fraction]]:
        """0-based rows as {col: value}."""
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i - 1][j - 1] = v
        return out

    def matvec(self, v: list) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (i, j), a in self.entries.items():
            out[i - 1] += a * v[j - 1]
        return out

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i - 1][j - 1] = v
        return out


@dataclass
class KernelReport:
    degree: int | None
    shape: tuple[int, int]
    nullity: int
    method: str
    basis: list[list[Fraction]] | None = None
    primes: tuple[int, ...] = ()

    @property
    def upper_bound_only(self) -> bool:
        return self.method != "exact"

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "rows": self.shape[0],
            "cols": self.shape[1],
            "nullity": self.nullity,
            "method": self.method,
        }
        if self.upper_bound_only:
            out["nullity_is_upper_bound"] = True
        return out


def system_shape(n: int) -> tuple[int, int]:
    return witt_dim(n + 1) + necklace_dim(n), 2 * witt_dim(n)


def assemble_system(n: int) -> SparseMatQ:
    if n < 1:
        raise ValueError("degree must be positive")
    words = lyndon_basis(n)
    row_words = {w: i for i, w in enumerate(lyndon_basis(n + 1), start=1)}
    offset = len(row_words)
    necklaces = {w: offset + i for i, w in enumerate(necklace_basis(n), start=1)}
    d = len(words)
    entries: dict[tuple[int, int], Fraction] = {}

    def put(i, j, c):
        v = entries.get((i, j), 0) + c
        if v:
            entries[i, j] = v
        else:
            entries.pop((i, j), None)

    canon: dict[str, str] = {}
    for col, w in enumerate(words, start=1):
        exp = expand_basis(w)
        for block, letter in ((0, "1"), (d, "2")):
            j = col + block
            for u, c in bracket_basis(letter, w):
                put(row_words[u], j, c)
            for word, c in exp.items():
                if word[-1] == letter:
                    cyc = letter + word[:-1]
                    key = canon.get(cyc)
                    if key is None:
                        key = canon[cyc] = necklace_canon(cyc)
                    put(necklaces[key], j, c)
    return SparseMatQ(offset + len(necklaces), 2 * d, entries)


def decode_solution(n: int, v: list) -> tuple[LieElt, LieElt]:
    words = lyndon_basis(n)
    d = len(words)
    return LieElt(zip(words, v[:d])), LieElt(zip(words, v[d:]))


# -- elimination -------------------------------------------------------------------


def _integer_rows(m: SparseMatQ) -> list[dict[int, int]]:
    rows = []
    for r in m.row_dicts():
        if not r:
            continue
        lcm = 1
        for v in r.values():
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        rows.append({j: int(v * lcm) for j, v in r.items()})
    return rows


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


def _eliminate(rows: list[dict[int, int]], ncols: int, p: int | None):
    """Sparse elimination with Markowitz-style pivoting.

    Over the integers (p is None) rows are combined fraction-free and kept
    primitive; otherwise arithmetic is modulo p. Returns the pivot rows as
    (pivot column, row) in elimination order.
    """
    if p is not None:
        rows = [{j: v % p for j, v in r.items() if v % p} for r in rows]
    active: dict[int, dict[int, int]] = {i: r for i, r in enumerate(rows) if r}
    col_rows: dict[int, set[int]] = {}
    for i, r in active.items():
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    pivots: list[tuple[int, dict[int, int]]] = []

    while col_rows:
        col = min(col_rows, key=lambda j: (len(col_rows[j]), j))
        candidates = col_rows[col]
        if not candidates:
            del col_rows[col]
            continue
        prow_id = min(candidates, key=lambda i: (len(active[i]), i))
        prow = active.pop(prow_id)
        for j in prow:
            col_rows[j].discard(prow_id)
        pv = prow[col]
        if p is not None:
            inv = pow(pv, -1, p)
            prow = {j: v * inv % p for j, v in prow.items()}
            pv = 1
        for i in list(col_rows[col]):
            row = active[i]
            a = row[col]
            if p is None:
                g = math.gcd(pv, a)
                s, t = pv // g, a // g
                new = {j: v * s for j, v in row.items()}
            else:
                t = a
                new = dict(row)
            for j, v in prow.items():
                nv = new.get(j, 0) - t * v
                if p is not None:
                    nv %= p
                if nv:
                    if j not in new:
                        col_rows[j].add(i)
                    new[j] = nv
                elif j in new:
                    del new[j]
                    col_rows[j].discard(i)
            if p is None and new:
                new = _primitive(new)
            if new:
                active[i] = new
            else:
                del active[i]
        del col_rows[col]
        pivots.append((col, prow))
        for j in [j for j, s in col_rows.items() if not s]:
            del col_rows[j]
    return pivots


def kernel_dim_exact(m: SparseMatQ, degree: int | None = None, with_basis: bool = False) -> KernelReport:
    pivots = _eliminate(_integer_rows(m), m.cols, None)
    rank = len(pivots)
    report = KernelReport(degree, m.shape, m.cols - rank, "exact")
    if with_basis:
        report.basis = _kernel_from_pivots(pivots, m.cols)
        for v in report.basis:
            if any(m.matvec(v)):
                raise ArithmeticError("kernel vector failed exact verification")
    return report


def _kernel_from_pivots(pivots, ncols: int) -> list[list[Fraction]]:
    pivot_cols = {c for c, _ in pivots}
    free = [j for j in range(ncols) if j not in pivot_cols]
    basis = []
    for f in free:
        x: dict[int, Fraction] = {f: Fraction(1)}
        for col, row in reversed(pivots):
            s = sum((Fraction(v) * x[j] for j, v in row.items() if j != col and j in x), Fraction(0))
            if s:
                x[col] = -s / row[col]
        basis.append(_primitive_vector([x.get(j, Fraction(0)) for j in range(ncols)]))
    return basis


def _primitive_vector(v: list[Fraction]) -> list[Fraction]:
    """Rescale to coprime integers, first nonzero entry positive."""
    den = 1
    for c in v:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    lead = next((c for c in ints if c), 1)
    g = g * (1 if lead > 0 else -1)
    return [Fraction(c, g) for c in ints]


def kernel_basis(m: SparseMatQ) -> list[list[Fraction]]:
    """Exact kernel basis, one vector per free column; each vector is re-verified."""
    return kernel_dim_exact(m, with_basis=True).basis


def rank_mod_p(m: SparseMatQ, p: int, degree: int | None = None) -> KernelReport:
    """Nullity over GF(p); an upper bound for the nullity over the rationals."""
    from sympy import isprime

    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    for (i, j), v in m.entries.items():
        if v.denominator % p == 0:
            raise ValueError(f"prime {p} divides the denominator of entry ({i}, {j}) = {v}")
    rows = []
    for r in m.row_dicts():
        if r:
            rows.append({j: v.numerator * pow(v.denominator, -1, p) % p for j, v in r.items()})
    pivots = _eliminate(rows, m.cols, p)
    return KernelReport(degree, m.shape, m.cols - len(pivots), f"modular({p})", primes=(p,))


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("KV_ATELIER_THREADS", "1")))
    except ValueError:
        return 1


def rank_mod_primes(m: SparseMatQ, primes: Iterable[int] = DEFAULT_PRIMES, degree: int | None = None,
                    threads: int | None = None) -> list[KernelReport]:
    """Run :func:`rank_mod_p` for several primes (in parallel when allowed)."""
    primes = list(primes)
    threads = threads or default_threads()
    if threads > 1 and len(primes) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(threads, len(primes))) as pool:
            return list(pool.map(rank_mod_p, [m] * len(primes), primes, [degree] * len(primes)))
    return [rank_mod_p(m, p, degree) for p in primes]


# -- plain-text sparse format --------------------------------------------------------


class SparseFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def export_sparse(m: SparseMatQ, destination: TextIO) -> None:
    """Header ``rows cols nnz`` then one ``i j value`` line per entry, 1-based."""
    destination.write(f"{m.rows} {m.cols} {m.nnz}\n")
    for (i, j), v in sorted(m.entries.items()):
        destination.write(f"{i} {j} {v}\n")


def import_sparse(source: TextIO) -> SparseMatQ:
    lines = iter(enumerate(source, start=1))
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise SparseFormatError("missing header", 1) from None
    parts = header.split()
    if len(parts) != 3 or not all(p.isdigit() for p in parts):
        raise SparseFormatError(f"bad header {header.strip()!r}", lineno)
    rows, cols, nnz = map(int, parts)
    entries: dict[tuple[int, int], Fraction] = {}
    count = 0
    for lineno, line in lines:
        if not line.strip():
            continue
        parts = line.split()
        try:
            if len(parts) != 3:
                raise ValueError("expected 'i j value'")
            i, j, v = int(parts[0]), int(parts[1]), Fraction(parts[2])
        except ValueError as exc:
            raise SparseFormatError(f"bad entry {line.strip()!r} ({exc})", lineno) from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise SparseFormatError(f"index ({i}, {j}) out of range", lineno)
        if (i, j) in entries:
            raise SparseFormatError(f"duplicate entry ({i}, {j})", lineno)
        entries[i, j] = v
        count += 1
    if count != nnz:
        raise SparseFormatError(f"header announces {nnz} entries, found {count}", lineno + 1 if count else 2)
    return SparseMatQ(rows, cols, entries)
