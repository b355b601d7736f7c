"""Rational functions Q(p1, ..., pm) in the spectral parameters."""

from __future__ import annotations

from fractions import Fraction

from ..errors import PoleError, StructuralError
from .mpoly import MPoly, poly_gcd
from .rational import format_rat


class RatFunc:
    """A reduced fraction ``num/den`` of polynomials over the same variables.

    The denominator is monic in grlex order, and ``gcd(num, den) = 1``.
    Polynomial values (denominator 1) skip every gcd computation.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, MPoly):
            num = MPoly.const(num, den.vars if isinstance(den, MPoly) else ())
        if den is None:
            den = MPoly.const(1, num.vars)
        elif not isinstance(den, MPoly):
            den = MPoly.const(den, num.vars)
        num, den = num._coerce(den)
        if not den.terms:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num.terms:
            den = MPoly.const(1, num.vars)
        elif den.is_constant():
            c = den.constant_coeff()
            if c != 1:
                num = num.scale(1 / c)
                den = MPoly.const(1, num.vars)
        else:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.divexact(g)
                den = den.divexact(g)
            lc = den.leading_coeff()
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def const(cls, c, vars=()):
        vars = tuple(vars)
        return cls._raw(MPoly.const(Fraction(c), vars), MPoly.const(1, vars))

    @classmethod
    def symbol(cls, name, vars):
        vars = tuple(vars)
        return cls._raw(MPoly.var(name, vars), MPoly.const(1, vars))

    @classmethod
    def poly(cls, p: MPoly):
        return cls._raw(p, MPoly.const(1, p.vars))

    @property
    def vars(self):
        return self.num.vars

    def is_polynomial(self):
        return self.den.is_constant()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_coeff() / self.den.constant_coeff()

    def __bool__(self):
        return bool(self.num.terms)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.vars == self.vars:
                return self, other
            if other.is_constant():
                return self, RatFunc.const(other.constant_value(), self.vars)
            if self.is_constant():
                return RatFunc.const(self.constant_value(), other.vars), other
            raise StructuralError(f"parameter lists differ: {self.vars} vs {other.vars}")
        if isinstance(other, (int, Fraction)):
            return self, RatFunc.const(other, self.vars)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.den.is_constant() and b.den.is_constant():
            return RatFunc._raw(a.num + b.num, a.den)
        if a.den == b.den:
            return RatFunc(a.num + b.num, a.den)
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc.const(0, self.vars)
            return RatFunc._raw(self.num.scale(Fraction(other)), self.den)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.den.is_constant() and b.den.is_constant():
            return RatFunc._raw(a.num * b.num, a.den)
        return RatFunc(a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc._raw(self.num.scale(1 / Fraction(other)), self.den)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if not b.num.terms:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(a.num * b.den, a.den * b.num)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self.num ** k, self.den ** k) if self.den.is_constant() \
            else RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            if self.vars != other.vars:
                if self.is_constant() and other.is_constant():
                    return self.constant_value() == other.constant_value()
                return False
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def with_vars(self, vars):
        return RatFunc._raw(self.num.with_vars(vars), self.den.with_vars(vars))

    def specialize(self, assignment):
        """Exact value at a full assignment of the parameters."""
        d = self.den.evaluate(assignment)
        if d == 0:
            used = {self.vars[i] for i in self.den.used_vars()}
            at = {k: v for k, v in assignment.items() if k in used}
            raise PoleError(f"pole of {self} at {_fmt_assignment(at)}", at)
        return Fraction(self.num.evaluate(assignment)) / d

    def partial_specialize(self, assignment):
        """Substitute values for some parameters, keeping the others symbolic."""
        keep = tuple(v for v in self.vars if v not in assignment)
        mapping = {v: assignment[v] for v in self.vars if v in assignment}
        num = self.num.subs(mapping, keep)
        den = self.den.subs(mapping, keep)
        if not den.terms:
            raise PoleError(f"pole of {self} at {_fmt_assignment(mapping)}", mapping)
        return RatFunc(num, den)

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        n = str(self.num)
        if self.den.is_constant():
            return n
        if len(self.num.terms) > 1:
            n = f"({n})"
        d = str(self.den)
        if len(self.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def latex(self):
        if self.den.is_constant():
            return self.num.latex()
        return rf"\frac{{{self.num.latex()}}}{{{self.den.latex()}}}"

    def to_json(self):
        return {"vars": list(self.vars), "num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        vars = tuple(data["vars"])
        return cls(MPoly.from_json(data["num"], vars), MPoly.from_json(data["den"], vars))


def _fmt_assignment(a):
    return "{" + ", ".join(f"{k}={v}" for k, v in sorted(a.items())) + "}"


def specialize(f, assignment):
    """Exact evaluation of a RatFunc (or a plain rational) at ``assignment``."""
    if isinstance(f, RatFunc):
        return f.specialize(assignment)
    return Fraction(f)


def coeff_to_json(c):
    if isinstance(c, RatFunc):
        return c.to_json()
    return format_rat(Fraction(c))


def coeff_from_json(data):
    from .rational import parse_rat
    if isinstance(data, dict):
        return RatFunc.from_json(data)
    return parse_rat(data)
