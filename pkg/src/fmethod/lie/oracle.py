"""Independent check of alpha and beta by factoring group elements.

In a block matrix realization, write

    exp(tY) exp(X) = L(t) D(t) U(t)

with L block lower unipotent (in N_-), D block diagonal (in L) and U block
upper unipotent (in N_+).  Working modulo t^2 (dual numbers) with
exp(tY) = I + tY, the first-order parts give

    alpha(Y, X) = d/dt D(t)      beta(Y, X) = d/dt log L(t)

at t = 0.  Nothing here uses brackets; the factorization is an honest
block LDU elimination over Q[t]/(t^2).
"""

from __future__ import annotations

from fractions import Fraction

from ..algebra.matrix import ExactMatrix, solve_rational
from ..errors import StructuralError


class Dual:
    """A + tB with t^2 = 0, A and B square ExactMatrix."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __add__(self, o):
        return Dual(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return Dual(self.a - o.a, self.b - o.b)

    def __mul__(self, o):
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    def inverse(self):
        ai = self.a.inverse()
        return Dual(ai, -(ai * self.b * ai))


def _block(m: ExactMatrix, r0, r1, c0, c1):
    return ExactMatrix([list(m.entries[i][c0:c1]) for i in range(r0, r1)], c1 - c0)


def _assemble(blocks, offsets, n):
    out = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), m in blocks.items():
        for r in range(m.rows):
            for c in range(m.cols):
                out[offsets[i] + r][offsets[j] + c] = m[r, c]
    return ExactMatrix(out)


def matrix_exp_nilpotent(x: ExactMatrix) -> ExactMatrix:
    n = x.rows
    result = ExactMatrix.identity(n)
    term = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        term = term * x * Fraction(1, k)
        if not term:
            break
        result = result + term
    return result


def block_ldu(g: Dual, blocks):
    """Block LDU factorization of a dual-number matrix.

    Returns (L, D) as dicts of Dual blocks keyed by (i, j).
    """
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b)
    nb = len(blocks)

    def sub(i, j):
        s = slice(offsets[i], offsets[i + 1])
        t = slice(offsets[j], offsets[j + 1])
        return Dual(_block(g.a, s.start, s.stop, t.start, t.stop),
                    _block(g.b, s.start, s.stop, t.start, t.stop))

    a = {(i, j): sub(i, j) for i in range(nb) for j in range(nb)}
    low, diag = {}, {}
    for k in range(nb):
        piv = a[(k, k)]
        diag[k] = piv
        inv = piv.inverse()
        for i in range(k + 1, nb):
            low[(i, k)] = a[(i, k)] * inv
        for i in range(k + 1, nb):
            for j in range(k + 1, nb):
                a[(i, j)] = a[(i, j)] - low[(i, k)] * a[(k, j)]
    return low, diag, offsets


def oracle_alpha_beta(matrices, blocks, y, x):
    """alpha and beta as matrices for Y = sum y_k m_k, X = sum x_k m_k."""
    n = matrices[0].rows
    if sum(blocks) != n:
        raise StructuralError("block sizes do not add up to the matrix size")

    def combo(v):
        acc = ExactMatrix.zeros(n, n)
        for c, m in zip(v, matrices):
            if c:
                acc = acc + m * Fraction(c)
        return acc

    ym, xm = combo(y), combo(x)
    ex = matrix_exp_nilpotent(xm)
    g = Dual(ex, ym * ex)
    low, diag, offsets = block_ldu(g, blocks)
    nb = len(blocks)
    zero = ExactMatrix.zeros
    la = {(i, i): ExactMatrix.identity(blocks[i]) for i in range(nb)}
    lb = {(i, i): zero(blocks[i], blocks[i]) for i in range(nb)}
    for (i, j), d in low.items():
        la[(i, j)] = d.a
        lb[(i, j)] = d.b
    big = Dual(_assemble(la, offsets, n), _assemble(lb, offsets, n))
    nil = big - Dual(ExactMatrix.identity(n), zero(n, n))
    # log(I + N) = N - N^2/2 + N^3/3 - ...
    log = Dual(zero(n, n), zero(n, n))
    power = nil
    for k in range(1, n + 1):
        scale = Fraction((-1) ** (k + 1), k)
        log = log + Dual(power.a * scale, power.b * scale)
        power = power * nil
        if not power.a and not power.b:
            break
    d_b = _assemble({(i, i): diag[i].b for i in range(nb)}, offsets, n)
    return d_b, log.b


def oracle_coordinates(lie, y, x):
    """(alpha, beta) from the factorization, as coefficient vectors in the basis of ``lie``."""
    if lie.realization is None:
        raise StructuralError(f"{lie.label} has no matrix realization")
    matrices, blocks = lie.realization
    a_mat, b_mat = oracle_alpha_beta(matrices, blocks, y, x)
    flat = [[e for row in m.entries for e in row] for m in matrices]
    a = solve_rational(flat, [e for row in a_mat.entries for e in row])
    b = solve_rational(flat, [e for row in b_mat.entries for e in row])
    if a is None or b is None:
        raise ArithmeticError("factorization left the Lie algebra")
    return tuple(a), tuple(b)
