"""Sparse multivariate polynomials.

An :class:`MPoly` is a map from exponent tuples to nonzero coefficients over
an ordered tuple of variable names.  Coefficients are usually ``Fraction``
but any commutative ring element with ``+``, ``-``, ``*`` and truthiness works
(``RatFunc`` coefficients are how sections over the parameter field are
represented).  Division, content and gcd require field coefficients in Q.

Canonical term order is graded lexicographic; :meth:`MPoly.sorted_terms`
lists terms from the largest monomial down.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as igcd

from ..errors import StructuralError
from .rational import format_rat, lcm, parse_rat, rat_str


def grlex_key(exp):
    return (sum(exp), exp)


def monomials_of_degree(nvars: int, degree: int):
    """Exponent tuples of total degree ``degree``, largest first in grlex."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def monomials_up_to(nvars: int, degree: int):
    """All exponent tuples of total degree <= ``degree``, ascending degree."""
    out = []
    for d in range(degree + 1):
        out.extend(reversed(monomials_of_degree(nvars, d)))
    return out


class MPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise StructuralError(
                        f"exponent {exp} does not match variables {self.vars}")
                if isinstance(c, int):
                    c = Fraction(c)
                if c:
                    clean[exp] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        # terms already clean
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, vars=()):
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, c, vars=()):
        vars = tuple(vars)
        if isinstance(c, int):
            c = Fraction(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name, vars):
        vars = tuple(vars)
        if name not in vars:
            raise StructuralError(f"{name!r} is not one of {vars}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {exp: Fraction(1)})

    @classmethod
    def monomial(cls, exp, vars, coeff=Fraction(1)):
        return cls(vars, {tuple(exp): coeff})

    # basic queries

    @property
    def nvars(self):
        return len(self.vars)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var):
        k = var if isinstance(var, int) else self.vars.index(var)
        return max((e[k] for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def leading(self):
        """(exponent, coefficient) of the grlex-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_coeff(self):
        return self.leading()[1]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coeff(self, exp):
        return self.terms.get(tuple(exp), 0)

    def used_vars(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return used

    # coercion

    def _promote(self, vars):
        """Re-express a constant polynomial over another variable list."""
        if self.vars == vars:
            return self
        if not self.is_constant():
            raise StructuralError(f"variable lists differ: {self.vars} vs {vars}")
        c = self.constant_coeff()
        return MPoly.const(c, vars)

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.vars == self.vars:
                return self, other
            if other.is_constant():
                return self, other._promote(self.vars)
            if self.is_constant():
                return self._promote(other.vars), other
            raise StructuralError(
                f"variable lists differ: {self.vars} vs {other.vars}")
        return self, MPoly.const(other, self.vars)

    def with_vars(self, vars):
        """Reorder or extend the variable list (dropping only unused ones)."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        for i in self.used_vars():
            if self.vars[i] not in pos:
                raise StructuralError(f"{self.vars[i]!r} missing from {vars}")
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i, a in enumerate(e):
                if a:
                    ne[pos[self.vars[i]]] = a
            terms[tuple(ne)] = c
        return MPoly._raw(vars, terms)

    # ring operations

    def __add__(self, other):
        a, b = self._coerce(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            if e in terms:
                s = terms[e] + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
            else:
                terms[e] = c
        return MPoly._raw(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return MPoly.zero(self.vars)
        terms = {}
        for e, a in self.terms.items():
            p = a * c
            if p:
                terms[e] = p
        return MPoly._raw(self.vars, terms)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if isinstance(other, int):
                other = Fraction(other)
            return self.scale(other)
        a, b = self._coerce(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + p
                else:
                    terms[e] = p
        return MPoly._raw(a.vars, {e: c for e, c in terms.items() if c})

    def __rmul__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        # coefficients commute with the polynomial variables but may not
        # commute with each other (fiber matrices), so keep the order
        terms = {}
        for e, c in self.terms.items():
            p = other * c
            if p:
                terms[e] = p
        return MPoly._raw(self.vars, terms)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            if self.vars != other.vars:
                if self.is_constant() and other.is_constant():
                    return self.constant_coeff() == other.constant_coeff()
                return False
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_coeff() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_coeff())
            else:
                self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus and evaluation

    def diff(self, var, times=1):
        k = var if isinstance(var, int) else self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[k] < times:
                continue
            f = 1
            for j in range(times):
                f *= e[k] - j
            ne = e[:k] + (e[k] - times,) + e[k + 1:]
            terms[ne] = c * f
        return MPoly._raw(self.vars, terms)

    def evaluate(self, assignment):
        """Substitute values for every variable; returns a coefficient."""
        missing = [v for i, v in enumerate(self.vars)
                   if i in self.used_vars() and v not in assignment]
        if missing:
            raise StructuralError(f"no value for {missing}")
        vals = [assignment.get(v, 0) for v in self.vars]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, a in zip(vals, e):
                if a:
                    t = t * x ** a
            total = total + t
        return total

    def subs(self, mapping, vars=None):
        """Substitute polynomials (over ``vars``) for variables.

        Variables not in ``mapping`` are kept, so they must appear in ``vars``.
        """
        vars = tuple(vars) if vars is not None else self.vars
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, MPoly):
                    img = MPoly.const(img, vars)
                images.append(img._promote(vars) if img.vars != vars else img)
            else:
                images.append(MPoly.var(v, vars) if v in vars else None)
        powers = [dict() for _ in self.vars]

        def power(i, a):
            cache = powers[i]
            if a not in cache:
                if images[i] is None:
                    raise StructuralError(f"no image for variable {self.vars[i]!r}")
                cache[a] = images[i] ** a
            return cache[a]

        result = MPoly.zero(vars)
        for e, c in self.terms.items():
            t = MPoly.const(1, vars)
            for i, a in enumerate(e):
                if a:
                    t = t * power(i, a)
            result = result + t.scale(c)
        return result

    def map_coeffs(self, f):
        terms = {}
        for e, c in self.terms.items():
            v = f(c)
            if isinstance(v, int):
                v = Fraction(v)
            if v:
                terms[e] = v
        return MPoly._raw(self.vars, terms)

    # field-coefficient operations

    def monic(self):
        if not self.terms:
            return self
        return self.scale(1 / Fraction(self.leading_coeff()))

    def divexact(self, other):
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        a, b = self._coerce(other)
        if not b.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if b.is_constant():
            return a.scale(1 / Fraction(b.constant_coeff()))
        le, lc = b.leading()
        rem = dict(a.terms)
        quot = {}
        bterms = list(b.terms.items())
        while rem:
            e = max(rem, key=grlex_key)
            d = tuple(x - y for x, y in zip(e, le))
            if any(x < 0 for x in d):
                raise ArithmeticError("polynomial division is not exact")
            f = rem[e] / lc
            quot[d] = f
            for e2, c2 in bterms:
                k = tuple(x + y for x, y in zip(d, e2))
                v = rem.get(k, 0) - f * c2
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return MPoly._raw(a.vars, quot)

    def integer_content(self):
        """Positive rational c with self / c integral and primitive."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = igcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # rendering and serialization

    def __repr__(self):
        return f"MPoly({self.vars}, {str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if a == 1 else f"{v}^{a}"
                            for v, a in zip(self.vars, e) if a)
            parts.append(_join_coeff(c, mono))
        return _join_terms(parts)

    def latex(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = " ".join(_latex_var(v) if a == 1 else f"{_latex_var(v)}^{{{a}}}"
                            for v, a in zip(self.vars, e) if a)
            parts.append(_join_coeff(c, mono, latex=True))
        return _join_terms(parts)

    def to_json(self):
        """List of ``{exponents, coeff}`` in canonical order (Q coefficients)."""
        return [{"exponents": list(e), "coeff": format_rat(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, vars):
        return cls(vars, {tuple(t["exponents"]): parse_rat(t["coeff"]) for t in data})


def _latex_var(v):
    import re
    m = re.fullmatch(r"([A-Za-z]+)(\d+)", v)
    greek = {"zeta": r"\zeta", "xi": r"\xi", "lam": r"\lambda", "nu": r"\nu", "mu": r"\mu"}
    if m:
        base, idx = m.groups()
        return f"{greek.get(base, base)}_{{{idx}}}"
    return greek.get(v, v)


def coeff_str(c):
    if isinstance(c, Fraction):
        return rat_str(c)
    return str(c)


def _is_compound(s):
    body = s[1:] if s.startswith("-") else s
    return (" + " in body or " - " in body)


def _join_coeff(c, mono, latex=False):
    """Render ``c*mono`` with the sign pulled out front."""
    if latex and hasattr(c, "latex"):
        cs = c.latex()
    elif latex and isinstance(c, Fraction):
        cs = (str(c.numerator) if c.denominator == 1
              else ("-" if c < 0 else "") + rf"\frac{{{abs(c.numerator)}}}{{{c.denominator}}}")
    else:
        cs = coeff_str(c)
    if not mono:
        return f"({cs})" if _is_compound(cs) and not cs.startswith("(") else cs
    sep = " " if latex else "*"
    if cs == "1":
        return mono
    if cs == "-1":
        return "-" + mono
    if _is_compound(cs):
        return f"({cs}){sep}{mono}"
    return f"{cs}{sep}{mono}"


def _join_terms(parts):
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


# gcd machinery over Q[x1..xn]

def _split(p: MPoly, k: int):
    """Coefficients of ``p`` as a polynomial in variable ``k``."""
    parts = {}
    for e, c in p.terms.items():
        d = e[k]
        ne = e[:k] + (0,) + e[k + 1:]
        parts.setdefault(d, {})[ne] = c
    return {d: MPoly._raw(p.vars, t) for d, t in parts.items()}


def _xpow(vars, k, d):
    exp = tuple(d if i == k else 0 for i in range(len(vars)))
    return MPoly._raw(vars, {exp: Fraction(1)})


def _content_primitive(p: MPoly, k: int):
    coeffs = [c for _, c in sorted(_split(p, k).items())]
    cont = reduce(poly_gcd, coeffs[1:], coeffs[0].monic())
    return cont, p.divexact(cont)


def _prem(a: MPoly, b: MPoly, k: int):
    db = b.degree(k)
    lcb = _split(b, k)[db]
    r = a
    delta = a.degree(k) - db + 1
    while r.terms and r.degree(k) >= db:
        dr = r.degree(k)
        lcr = _split(r, k)[dr]
        r = lcb * r - lcr * _xpow(r.vars, k, dr - db) * b
        delta -= 1
    return r * lcb ** delta


def poly_gcd(p: MPoly, q: MPoly) -> MPoly:
    """Monic gcd over Q by recursive primitive remainder sequences."""
    p, q = p._coerce(q)
    if not p.terms:
        return q.monic()
    if not q.terms:
        return p.monic()
    if p.is_constant() or q.is_constant():
        return MPoly.const(1, p.vars)
    k = max(p.used_vars() | q.used_vars())
    cp, pp = _content_primitive(p, k)
    cq, qq = _content_primitive(q, k)
    c = poly_gcd(cp, cq)
    if pp.degree(k) < qq.degree(k):
        pp, qq = qq, pp
    if qq.degree(k) <= 0:
        return c.monic()
    a, b = pp, qq
    while True:
        r = _prem(a, b, k)
        if not r.terms:
            break
        if r.degree(k) == 0:
            return c.monic()
        a, b = b, _content_primitive(r, k)[1]
    return (c * b).monic()


def poly_lcm(p: MPoly, q: MPoly) -> MPoly:
    if not p.terms or not q.terms:
        return MPoly.zero(p.vars)
    return (p * q).divexact(poly_gcd(p, q)).monic()


def primitive_normalize(polys):
    """Scale a list of polynomials to a primitive integral representative.

    The result has polynomial gcd 1, coprime integer coefficients, and the
    first nonzero entry has a positive grlex-leading coefficient.  Returns
    ``(scaled, factor)`` where ``factor`` is the polynomial divided out times
    the rational multiplier removed.
    """
    polys = list(polys)
    nonzero = [p for p in polys if p.terms]
    if not nonzero:
        return polys, None
    g = reduce(poly_gcd, nonzero[1:], nonzero[0].monic())
    polys = [p.divexact(g) for p in polys]
    num = 0
    den = 1
    for p in polys:
        for c in p.terms.values():
            num = igcd(num, c.numerator)
            den = lcm(den, c.denominator)
    scale = Fraction(den, num)
    first = next(p for p in polys if p.terms)
    if first.leading_coeff() < 0:
        scale = -scale
    return [p.scale(scale) for p in polys], g.scale(1 / scale)


def poly_from_string(text: str, vars):
    """Parse a polynomial such as ``"k1 + k2 + 2"`` over ``vars``."""
    from .parse import parse_polynomial
    return parse_polynomial(text, vars)
