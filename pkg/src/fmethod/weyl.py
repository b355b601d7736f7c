"""Weyl algebra D(E) in normal order, its algebraic Fourier transform, and symbols.

A :class:`WeylElement` is a finite sum ``c * z^a * d^b`` with every position
operator to the left of every derivative.  Coefficients are rationals,
``RatFunc`` values in the spectral parameters, or square ``ExactMatrix``
fiber endomorphisms; they commute with ``z`` and ``d`` but fiber matrices do
not commute with each other, so products keep their order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .algebra.mpoly import MPoly, _join_coeff, _join_terms, _latex_var, grlex_key
from .algebra.parse import ExprParser
from .algebra.ratfunc import coeff_from_json, coeff_to_json
from .errors import DomainError, ParseError, StructuralError


@dataclass(frozen=True)
class Space:
    """Coordinates of a vector space E, their derivatives, and the dual labels.

    ``dual()`` swaps the two sides, so it is an involution.  ``side`` tags
    which of a pair of spaces an element lives on; elements on different
    sides never combine.
    """

    positions: tuple
    derivatives: tuple
    dual_positions: tuple
    dual_derivatives: tuple
    side: str = "primal"

    def __post_init__(self):
        n = len(self.positions)
        if not (len(self.derivatives) == len(self.dual_positions)
                == len(self.dual_derivatives) == n):
            raise StructuralError("space labels have inconsistent lengths")

    @classmethod
    def standard(cls, n, side="primal"):
        return cls(tuple(f"z{i}" for i in range(1, n + 1)),
                   tuple(f"d{i}" for i in range(1, n + 1)),
                   tuple(f"zeta{i}" for i in range(1, n + 1)),
                   tuple(f"dzeta{i}" for i in range(1, n + 1)),
                   side)

    @classmethod
    def coordinates(cls, labels, side="n_minus", dual_prefix="zeta"):
        labels = tuple(labels)
        n = len(labels)
        return cls(labels, tuple(f"d{v}" for v in labels),
                   tuple(f"{dual_prefix}{i}" for i in range(1, n + 1)),
                   tuple(f"d{dual_prefix}{i}" for i in range(1, n + 1)),
                   side)

    @property
    def dim(self):
        return len(self.positions)

    def dual(self):
        return Space(self.dual_positions, self.dual_derivatives,
                     self.positions, self.derivatives, _DUAL_SIDE.get(self.side, self.side))

    def to_json(self):
        return {"positions": list(self.positions), "derivatives": list(self.derivatives),
                "dual_positions": list(self.dual_positions),
                "dual_derivatives": list(self.dual_derivatives), "side": self.side}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["positions"]), tuple(data["derivatives"]),
                   tuple(data["dual_positions"]), tuple(data["dual_derivatives"]),
                   data.get("side", "primal"))


_DUAL_SIDE = {"primal": "dual", "dual": "primal", "n_minus": "n_plus", "n_plus": "n_minus"}


@lru_cache(maxsize=None)
def _reorder(b, c):
    """Normal order of ``d^b z^c`` as a list of (k, integer coefficient).

    d^b z^c = sum_k prod_i C(b_i, k_i) c_i!/(c_i - k_i)! z^(c-k) d^(b-k)
    """
    out = [((), 1)]
    for bi, ci in zip(b, c):
        nxt = []
        for ks, f in out:
            for k in range(min(bi, ci) + 1):
                g = comb(bi, k)
                for j in range(k):
                    g *= ci - j
                nxt.append((ks + (k,), f * g))
        out = nxt
    return out


def _falling(e, b):
    f = 1
    for ei, bi in zip(e, b):
        if ei < bi:
            return 0
        for j in range(bi):
            f *= ei - j
    return f


def _norm(c):
    return Fraction(c) if isinstance(c, int) else c


class WeylElement:
    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms=None):
        self.space = space
        n = space.dim
        clean = {}
        for (a, b), c in (terms or {}).items():
            a, b = tuple(a), tuple(b)
            if len(a) != n or len(b) != n:
                raise StructuralError("exponent length does not match the space")
            c = _norm(c)
            if c:
                clean[(a, b)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, space, terms):
        w = object.__new__(cls)
        w.space = space
        w.terms = terms
        return w

    @classmethod
    def zero(cls, space):
        return cls._raw(space, {})

    @classmethod
    def const(cls, c, space):
        zero = (0,) * space.dim
        c = _norm(c)
        return cls._raw(space, {(zero, zero): c} if c else {})

    @classmethod
    def position(cls, i, space):
        e = tuple(int(j == i) for j in range(space.dim))
        return cls._raw(space, {(e, (0,) * space.dim): Fraction(1)})

    @classmethod
    def derivative(cls, i, space):
        e = tuple(int(j == i) for j in range(space.dim))
        return cls._raw(space, {((0,) * space.dim, e): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, WeylElement):
            return False
        if other.space != self.space:
            raise StructuralError(
                f"Weyl elements on different spaces: {self.space.positions} ({self.space.side})"
                f" vs {other.space.positions} ({other.space.side})")
        return True

    def __add__(self, other):
        if not self._check(other):
            if isinstance(other, (int, Fraction)) or hasattr(other, "num"):
                other = WeylElement.const(other, self.space)
            else:
                return NotImplemented
        terms = dict(self.terms)
        for k, c in other.terms.items():
            if k in terms:
                s = terms[k] + c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
            else:
                terms[k] = c
        return WeylElement._raw(self.space, terms)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw(self.space, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c, left=True):
        terms = {}
        for k, a in self.terms.items():
            p = c * a if left else a * c
            if p:
                terms[k] = p
        return WeylElement._raw(self.space, terms)

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return weyl_mul(self, other)
        return self.scale(_norm(other), left=False)

    def __rmul__(self, other):
        return self.scale(_norm(other), left=True)

    def __pow__(self, k):
        result = WeylElement.const(1, self.space)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.space == other.space and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == WeylElement.const(other, self.space)
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def order(self):
        """Highest total derivative degree (-1 for zero)."""
        return max((sum(b) for _, b in self.terms), default=-1)

    def poly_degree(self):
        """Highest total degree of the polynomial coefficients (-1 for zero)."""
        return max((sum(a) for a, _ in self.terms), default=-1)

    def is_constant_coefficient(self):
        return all(not any(a) for a, _ in self.terms)

    def map_coeffs(self, f):
        terms = {}
        for k, c in self.terms.items():
            v = _norm(f(c))
            if v:
                terms[k] = v
        return WeylElement._raw(self.space, terms)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda t: (sum(t[0][0]) + sum(t[0][1]), t[0][0], t[0][1]),
                      reverse=True)

    def __repr__(self):
        return f"WeylElement({str(self)!r})"

    def __str__(self):
        return self.render()

    def render(self, latex=False):
        if not self.terms:
            return "0"
        sp = self.space
        parts = []
        for (a, b), c in self.sorted_terms():
            if latex:
                factors = [_latex_var(v) if e == 1 else f"{_latex_var(v)}^{{{e}}}"
                           for v, e in zip(sp.positions, a) if e]
                factors += [rf"\partial_{{{_latex_var(v)}}}" if e == 1
                            else rf"\partial_{{{_latex_var(v)}}}^{{{e}}}"
                            for v, e in zip(sp.positions, b) if e]
                mono = " ".join(factors)
            else:
                factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(sp.positions, a) if e]
                factors += [v if e == 1 else f"{v}^{e}" for v, e in zip(sp.derivatives, b) if e]
                mono = "*".join(factors)
            parts.append(_join_coeff(c, mono, latex=latex))
        return _join_terms(parts)

    def latex(self):
        return self.render(latex=True)

    def to_json(self):
        """List of ``{z_exp, d_exp, coeff_matrix}`` in canonical order."""
        out = []
        for (a, b), c in self.sorted_terms():
            if hasattr(c, "entries"):
                mat = [[coeff_to_json(x) for x in row] for row in c.entries]
            else:
                mat = [[coeff_to_json(c)]]
            out.append({"z_exp": list(a), "d_exp": list(b), "coeff_matrix": mat})
        return out

    @classmethod
    def from_json(cls, data, space):
        from .algebra.matrix import ExactMatrix
        terms = {}
        for t in data:
            mat = [[coeff_from_json(x) for x in row] for row in t["coeff_matrix"]]
            c = mat[0][0] if len(mat) == 1 and len(mat[0]) == 1 else ExactMatrix(mat)
            terms[(tuple(t["z_exp"]), tuple(t["d_exp"]))] = c
        return cls(space, terms)


def weyl_mul(x: WeylElement, y: WeylElement) -> WeylElement:
    """Normal-ordered product using d^b z^c = sum_k ... z^(c-k) d^(b-k)."""
    x._check(y)
    terms = {}
    for (a1, b1), c1 in x.terms.items():
        for (a2, b2), c2 in y.terms.items():
            c12 = c1 * c2
            if not c12:
                continue
            for ks, f in _reorder(b1, a2):
                a = tuple(p + q - k for p, q, k in zip(a1, a2, ks))
                b = tuple(p + q - k for p, q, k in zip(b1, b2, ks))
                v = c12 * f if f != 1 else c12
                key = (a, b)
                if key in terms:
                    s = terms[key] + v
                    if s:
                        terms[key] = s
                    else:
                        del terms[key]
                else:
                    terms[key] = v
    return WeylElement._raw(x.space, terms)


def commutator(x: WeylElement, y: WeylElement) -> WeylElement:
    return weyl_mul(x, y) - weyl_mul(y, x)


def fourier_hat(t: WeylElement) -> WeylElement:
    """Algebraic Fourier transform: d_j -> -zeta_j and z_j -> d/dzeta_j.

    ``c z^a d^b`` maps to ``(-1)^|b| c dzeta^a zeta^b``, which is then put in
    normal order on the dual space.
    """
    dual = t.space.dual()
    terms = {}
    for (a, b), c in t.terms.items():
        sign = -1 if sum(b) % 2 else 1
        for ks, f in _reorder(a, b):
            na = tuple(q - k for q, k in zip(b, ks))
            nb = tuple(p - k for p, k in zip(a, ks))
            v = c * (sign * f)
            key = (na, nb)
            if key in terms:
                s = terms[key] + v
                if s:
                    terms[key] = s
                else:
                    del terms[key]
            elif v:
                terms[key] = v
    return WeylElement._raw(dual, terms)


def symb(t: WeylElement) -> MPoly:
    """Symbol of a constant-coefficient operator: d/dz_j -> xi_j.

    The symbol variables are the dual coordinates of ``t.space``.
    """
    if not t.is_constant_coefficient():
        raise DomainError(f"symbol map needs constant coefficients, got {t}")
    return MPoly(t.space.dual_positions, {b: c for (a, b), c in t.terms.items()})


def symb_inv(psi: MPoly, space: Space) -> WeylElement:
    """Inverse symbol map: a polynomial in the dual variables of ``space``."""
    if psi.vars != space.dual_positions:
        raise StructuralError(
            f"symbol variables {psi.vars} do not match dual of {space.positions}")
    zero = (0,) * space.dim
    return WeylElement(space, {(zero, e): c for e, c in psi.terms.items()})


def apply(t: WeylElement, f: MPoly) -> MPoly:
    """Act by ``t`` on a polynomial section over ``t.space.positions``."""
    if f.vars != t.space.positions:
        if f.is_constant():
            f = MPoly.const(f.constant_coeff(), t.space.positions)
        else:
            raise StructuralError(
                f"section variables {f.vars} do not match {t.space.positions}")
    out = {}
    for (a, b), c in t.terms.items():
        for e, fc in f.terms.items():
            g = _falling(e, b)
            if not g:
                continue
            ne = tuple(ei - bi + ai for ei, bi, ai in zip(e, b, a))
            v = c * fc
            if g != 1:
                v = v * g
            if ne in out:
                out[ne] = out[ne] + v
            else:
                out[ne] = v
    return MPoly._raw(f.vars, {e: c for e, c in out.items() if c})


def apply_section(t: WeylElement, f):
    """``apply`` for sections given as a list of component polynomials.

    Needed when coefficients are fiber matrices: component ``i`` of the
    result is ``sum_j (t_ij applied to f_j)``.
    """
    from .algebra.matrix import ExactMatrix
    dim = len(f)
    out = [MPoly.zero(t.space.positions) for _ in range(dim)]
    for (a, b), c in t.terms.items():
        one = WeylElement._raw(t.space, {(a, b): Fraction(1)})
        if isinstance(c, ExactMatrix):
            if c.shape != (dim, dim):
                raise StructuralError(f"fiber matrix {c.shape} on a rank-{dim} section")
            for i in range(dim):
                for j in range(dim):
                    if c[i, j]:
                        out[i] = out[i] + apply(one, f[j]).scale(c[i, j])
        else:
            for i in range(dim):
                out[i] = out[i] + apply(one, f[i]).scale(c)
    return out


def parse_weyl(text: str, space: Space | None = None) -> WeylElement:
    """Parse ``z1``, ``d1``, ``+``, ``-``, ``*``, ``^``, parentheses and rationals.

    Products are Weyl products in written order.  Without ``space`` the
    standard space of dimension max(index) is used.
    """
    import re
    names = re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text)
    if space is None:
        idx = []
        for nm in names:
            m = re.fullmatch(r"[zd](\d+)", nm)
            if m and int(m.group(1)) > 0:
                idx.append(int(m.group(1)))
        space = Space.standard(max(idx, default=1))
    pos = {v: i for i, v in enumerate(space.positions)}
    der = {v: i for i, v in enumerate(space.derivatives)}

    def atom(name, at):
        if name in pos:
            return WeylElement.position(pos[name], space)
        if name in der:
            return WeylElement.derivative(der[name], space)
        raise ParseError(f"unknown generator {name!r}", at)

    return ExprParser(text, atom, lambda q: WeylElement.const(q, space)).parse()


def monomial_key(t):
    return grlex_key(t)
