"""Weights of the Levi factor, the projections alpha and beta, and the actions
dpi and dpi_hat on the Weyl algebras of n_- and n_+.

Sign conventions (fixed against the matrix oracle in ``lie.oracle``)::

    Y in n_+ :  alpha(Y, X) = [Y, X]       beta(Y, X) = 1/2 [X, [X, Y]]
    Y in l   :  alpha(Y, X) = Y            beta(Y, X) = [Y, X]
    Y in n_- :  alpha(Y, X) = 0            beta(Y, X) = Y

and dpi_chi(Y) = chi(alpha(Y, X)) - sum_i beta_i(Y, X) d/dx_i.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..algebra.matrix import ExactMatrix
from ..algebra.mpoly import MPoly
from ..algebra.ratfunc import RatFunc
from ..errors import DomainError, StructuralError
from ..weyl import Space, WeylElement, fourier_hat
from .graded import GradedLie


class RepWeight:
    """A representation of the Levi factor l of ``lie``.

    For a character (``dim == 1``) ``values`` maps the names of the l basis
    elements to ``RatFunc`` values over ``params``; missing names mean 0.
    For ``dim > 1`` pass ``matrices`` (name -> square ExactMatrix) instead.
    """

    def __init__(self, lie: GradedLie, values=None, params=(), dim=1, matrices=None):
        self.lie = lie
        self.params = tuple(params)
        self.dim = dim
        levi_names = {lie.names[i] for i in lie.levi}
        for name in list(values or {}) + list(matrices or {}):
            if name not in levi_names:
                raise StructuralError(f"{name!r} is not a Levi basis element")
        if dim == 1:
            if matrices:
                raise StructuralError("a character takes values, not matrices")
            self.values = {lie.names[i]: _as_param(values.get(lie.names[i], 0) if values else 0,
                                                    self.params)
                           for i in lie.levi}
            self.matrices = None
            self._check_character()
        else:
            if not matrices:
                raise StructuralError("vector-valued weights need explicit matrices")
            self.values = None
            self.matrices = {lie.names[i]: matrices.get(lie.names[i], ExactMatrix.zeros(dim, dim))
                             for i in lie.levi}

    def _check_character(self):
        lie = self.lie
        for a, b in combinations(lie.levi, 2):
            c = lie.bracket(lie.basis_vector(a), lie.basis_vector(b))
            if self.evaluate(c):
                raise DomainError(
                    f"character does not vanish on [{lie.names[a]}, {lie.names[b]}]")

    @property
    def is_character(self):
        return self.dim == 1

    def __getitem__(self, name):
        return self.values[name] if self.dim == 1 else self.matrices[name]

    def evaluate(self, v):
        """chi(v) for an element of l with scalar or polynomial coefficients."""
        total = None
        for i in self.lie.levi:
            c = v[i]
            if not c:
                continue
            w = self[self.lie.names[i]]
            t = c * w if not isinstance(c, MPoly) else c.scale(w)
            total = t if total is None else total + t
        if total is None:
            return RatFunc.const(0, self.params) if self.dim == 1 else ExactMatrix.zeros(
                self.dim, self.dim)
        return total

    def specialize(self, assignment):
        if self.dim != 1:
            return self
        vals = {k: Fraction(v.specialize(assignment)) for k, v in self.values.items()}
        return RepWeight(self.lie, vals)

    def __eq__(self, other):
        return (isinstance(other, RepWeight) and self.lie is other.lie
                and self.values == other.values and self.matrices == other.matrices)

    def __hash__(self):
        return hash((id(self.lie), tuple(sorted((self.values or {}).items(), key=str))))

    def __repr__(self):
        if self.dim == 1:
            return "RepWeight(" + ", ".join(f"{k}={v}" for k, v in self.values.items()) + ")"
        return f"RepWeight(dim={self.dim})"

    def to_json(self):
        if self.dim == 1:
            return {"params": list(self.params), "values": {k: str(v) for k, v in self.values.items()}}
        return {"dim": self.dim, "matrices": {k: m.to_json() for k, m in self.matrices.items()}}


def _as_param(v, params):
    if isinstance(v, RatFunc):
        return v.with_vars(params) if v.vars != params and not v.is_constant() else (
            v if v.vars == params else RatFunc.const(v.constant_value(), params))
    if isinstance(v, MPoly):
        return RatFunc.poly(v.with_vars(params))
    return RatFunc.const(Fraction(v), params)


def mu_from_lambda(lam: RepWeight) -> RepWeight:
    """mu = -lambda + tr(ad(.)|n_+) on the Levi factor."""
    if not lam.is_character:
        raise DomainError("the dual of a vector-valued weight must be supplied explicitly")
    lie = lam.lie
    vals = {}
    for i in lie.levi:
        name = lie.names[i]
        vals[name] = -lam.values[name] + lie.ad_trace_on_n_plus(lie.basis_vector(i))
    return RepWeight(lie, vals, lam.params)


def coordinate_space(lie: GradedLie) -> Space:
    return Space.coordinates(lie.coords, side="n_minus")


def generic_point(lie: GradedLie):
    """X = sum_i x_i P_i with polynomial coefficients."""
    zero = MPoly.zero(lie.coords)
    x = [zero] * lie.dim
    for pos, i in enumerate(lie.n_minus):
        x[i] = MPoly.var(lie.coords[pos], lie.coords)
    return tuple(x)


def _check_point(lie, x):
    if len(x) != lie.dim:
        raise StructuralError("point has the wrong length")
    for i, c in enumerate(x):
        if c and lie.grades[i] != -1:
            raise DomainError("X must lie in n_-")


def alpha(lie: GradedLie, y, x=None):
    """alpha(Y, X) = [Y, X] for Y in n_+ (an l-valued linear form in X)."""
    if any(c for i, c in enumerate(y) if lie.grades[i] != 1):
        raise DomainError("alpha is defined here for Y in n_+ only; use alpha_full")
    x = generic_point(lie) if x is None else x
    _check_point(lie, x)
    return lie.bracket(y, x)


def beta(lie: GradedLie, y, x=None):
    """beta(Y, X) = 1/2 [X, [X, Y]] for Y in n_+ (an n_--valued quadratic form)."""
    if any(c for i, c in enumerate(y) if lie.grades[i] != 1):
        raise DomainError("beta is defined here for Y in n_+ only; use beta_full")
    x = generic_point(lie) if x is None else x
    _check_point(lie, x)
    return tuple(c * Fraction(1, 2) for c in lie.bracket(x, lie.bracket(x, y)))


def alpha_full(lie: GradedLie, y, x=None):
    x = generic_point(lie) if x is None else x
    plus = lie.component(y, 1)
    out = list(alpha(lie, plus, x))
    for i in lie.levi:
        if y[i]:
            out[i] = out[i] + y[i]
    return tuple(out)


def beta_full(lie: GradedLie, y, x=None):
    x = generic_point(lie) if x is None else x
    out = list(beta(lie, lie.component(y, 1), x))
    levi = lie.component(y, 0)
    if any(levi):
        out = [a + b for a, b in zip(out, lie.bracket(levi, x))]
    for i in lie.n_minus:
        if y[i]:
            out[i] = out[i] + y[i]
    return tuple(out)


def dpi(lie: GradedLie, y, chi: RepWeight) -> WeylElement:
    """The action of Y on sections over n_- twisted by the l-representation ``chi``.

    (dpi(Y) F)(X) = chi(alpha(Y, X)) F(X) - (beta(Y, .) F)(X)
    """
    space = coordinate_space(lie)
    x = generic_point(lie)
    a = alpha_full(lie, y, x)
    b = beta_full(lie, y, x)
    zero = (0,) * space.dim
    terms = {}
    mult = chi.evaluate(a)
    if isinstance(mult, MPoly):
        for e, c in mult.terms.items():
            terms[(e, zero)] = c
    elif mult:
        terms[(zero, zero)] = mult
    ident = None if chi.dim == 1 else ExactMatrix.identity(chi.dim)
    for pos, i in enumerate(lie.n_minus):
        bi = b[i]
        if not bi:
            continue
        if not isinstance(bi, MPoly):
            bi = MPoly.const(bi, lie.coords)
        d = tuple(int(j == pos) for j in range(space.dim))
        for e, c in bi.terms.items():
            v = -c if ident is None else ident * (-c)
            key = (e, d)
            terms[key] = terms[key] + v if key in terms else v
    return WeylElement(space, terms)


def dpi_hat(lie: GradedLie, y, chi: RepWeight) -> WeylElement:
    """Fourier transform of ``dpi``: an operator on polynomials over n_+."""
    return fourier_hat(dpi(lie, y, chi))


def is_torus_direction(op: WeylElement) -> bool:
    """True when ``op`` acts diagonally on monomials (each term z^a d^a with |a| <= 1)."""
    for (a, b) in op.terms:
        if a != b or sum(a) > 1:
            return False
    return True
