"""Dense exact matrices and fraction-free kernels over Q(params)."""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import reduce

from ..errors import StructuralError
from .mpoly import MPoly, poly_lcm, primitive_normalize
from .ratfunc import RatFunc, coeff_to_json

log = logging.getLogger(__name__)


class ExactMatrix:
    """Immutable dense matrix of Fractions or RatFuncs."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        entries = tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in row)
                        for row in entries)
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else (cols or 0)
        if any(len(r) != self.cols for r in entries):
            raise StructuralError("ragged matrix rows")
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[Fraction(0)] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n):
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(r[j] for r in self.entries)

    def transpose(self):
        return ExactMatrix([list(c) for c in zip(*self.entries)] if self.rows else [],
                           self.rows)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash(self.entries)

    def __bool__(self):
        return any(x for r in self.entries for x in r)

    def _check(self, other):
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        return ExactMatrix([[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.entries, other.entries)], self.cols)

    def __neg__(self):
        return ExactMatrix([[-a for a in r] for r in self.entries], self.cols)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise StructuralError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.column
            ocols = [cols(j) for j in range(other.cols)]
            out = []
            for r in self.entries:
                row = []
                for c in ocols:
                    s = Fraction(0)
                    for a, b in zip(r, c):
                        if a and b:
                            s = s + a * b
                    row.append(s)
                out.append(row)
            return ExactMatrix(out, other.cols)
        return ExactMatrix([[a * other for a in r] for r in self.entries], self.cols)

    def __rmul__(self, other):
        return ExactMatrix([[other * a for a in r] for r in self.entries], self.cols)

    def apply(self, vector):
        if len(vector) != self.cols:
            raise StructuralError("vector length does not match column count")
        out = []
        for r in self.entries:
            s = Fraction(0)
            for a, b in zip(r, vector):
                if a and b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def map(self, f):
        return ExactMatrix([[f(a) for a in r] for r in self.entries], self.cols)

    def inverse(self):
        """Gauss-Jordan inverse over the entry field."""
        n = self.rows
        if n != self.cols:
            raise StructuralError("only square matrices are invertible")
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.entries)]
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c]), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            a[c], a[p] = a[p], a[c]
            inv = 1 / a[c][c] if isinstance(a[c][c], Fraction) else a[c][c].inverse()
            a[c] = [x * inv for x in a[c]]
            for i in range(n):
                if i != c and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return ExactMatrix([r[n:] for r in a], n)

    def rank(self):
        return self.cols - len(nullspace(self))

    def __repr__(self):
        return f"ExactMatrix({[[str(x) for x in r] for r in self.entries]})"

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[coeff_to_json(x) for x in r] for r in self.entries]}


def _param_vars(entries):
    vars = ()
    for x in entries:
        if isinstance(x, RatFunc) and not x.is_constant():
            if vars and x.vars != vars:
                raise StructuralError(f"entries over different parameters: {vars} vs {x.vars}")
            vars = x.vars
    return vars


def _as_ratfunc(x, vars):
    if isinstance(x, RatFunc):
        return x if x.vars == vars else RatFunc.const(x.constant_value(), vars)
    return RatFunc.const(x, vars)


def _cleared_rows(m: ExactMatrix, vars):
    """Rows scaled by the lcm of their denominators, as polynomials."""
    out = []
    for row in m.entries:
        fs = [_as_ratfunc(x, vars) for x in row]
        dens = [f.den for f in fs if f.num.terms and not f.den.is_constant()]
        if dens:
            L = reduce(poly_lcm, dens[1:], dens[0])
            out.append([f.num * L.divexact(f.den) for f in fs])
        else:
            out.append([f.num for f in fs])
    return out


def _pivot_key(p: MPoly):
    return (p.total_degree(), len(p.terms))


def fraction_free_rref(rows, ncols):
    """Bareiss-style Gauss-Jordan elimination over Q[params].

    ``rows`` (lists of MPoly) is modified in place.  On return every pivot
    entry equals the last pivot ``d`` and pivot columns are zero elsewhere.
    Returns ``(pivots, d)`` with ``pivots`` a list of (row, column) pairs.
    Pivot rows are chosen by lowest total degree to delay coefficient growth.
    """
    m = len(rows)
    if not m:
        return [], None
    vars = rows[0][0].vars if ncols else ()
    one = MPoly.const(1, vars)
    prev = one
    r = 0
    pivots = []
    pivot_cols = set()
    for c in range(ncols):
        if r == m:
            break
        cand = [i for i in range(r, m) if rows[i][c].terms]
        if not cand:
            continue
        p = min(cand, key=lambda i: (_pivot_key(rows[i][c]), i))
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        active = [j for j in range(ncols) if j != c and j not in pivot_cols]
        trivial = prev.is_constant() and prev.constant_coeff() == 1
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            for j in active:
                v = piv * row[j]
                if a.terms and prow[j].terms:
                    v = v - a * prow[j]
                row[j] = v if trivial or not v.terms else v.divexact(prev)
            row[c] = MPoly.zero(vars)
        for (ri, cj) in pivots:
            rows[ri][cj] = piv
        pivots.append((r, c))
        pivot_cols.add(c)
        prev = piv
        r += 1
    return pivots, prev


def nullspace(m: ExactMatrix):
    """Basis of the right kernel over the parameter field.

    Every vector is polynomial, primitive (polynomial gcd 1, coprime integer
    coefficients) and its first nonzero entry has a positive leading
    coefficient.  Vectors are ordered by their free column.  ``M v = 0`` and
    ``rank + nullity = cols`` are checked before returning.
    """
    vars = _param_vars(x for r in m.entries for x in r)
    ncols = m.cols
    original = _cleared_rows(m, vars)
    rows = [list(r) for r in original if any(p.terms for p in r)]
    pivots, d = fraction_free_rref(rows, ncols)
    pivot_of = {c: r for r, c in pivots}
    if d is None:
        d = MPoly.const(1, vars)
    basis = []
    for f in range(ncols):
        if f in pivot_of:
            continue
        v = [MPoly.zero(vars) for _ in range(ncols)]
        v[f] = d
        for c, r in pivot_of.items():
            v[c] = -rows[r][f]
        v, _ = primitive_normalize(v)
        basis.append(v)
    for v in basis:
        for row in original:
            s = MPoly.zero(vars)
            for a, b in zip(row, v):
                if a.terms and b.terms:
                    s = s + a * b
            if s.terms:
                raise ArithmeticError("nullspace vector fails M v = 0")
    if len(pivots) + len(basis) != ncols:
        raise ArithmeticError("rank + nullity != cols")
    return [tuple(RatFunc.poly(p) for p in v) for v in basis]


def rank(m: ExactMatrix):
    vars = _param_vars(x for r in m.entries for x in r)
    rows = [list(r) for r in _cleared_rows(m, vars) if any(p.terms for p in r)]
    pivots, _ = fraction_free_rref(rows, m.cols)
    return len(pivots)


def solve_rational(columns, target):
    """Coordinates of ``target`` in the span of ``columns`` (Fractions), or None."""
    n = len(columns)
    length = len(target)
    a = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])]
         for i in range(length)]
    r = 0
    where = [-1] * n
    for c in range(n):
        p = next((i for i in range(r, length) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(length):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        where[c] = r
        r += 1
    if any(a[i][n] for i in range(r, length)):
        return None
    return [a[where[c]][n] if where[c] >= 0 else Fraction(0) for c in range(n)]
