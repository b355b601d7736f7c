from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from fmethod.algebra import MPoly
from fmethod.lie import builtin_setting


def to_sympy(p: MPoly):
    """Independent conversion used by the oracle tests."""
    syms = sympy.symbols(p.vars) if p.vars else ()
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, a in zip(syms, e):
            term *= s ** a
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, vars):
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(vars))
    return MPoly(tuple(vars), {tuple(m): Fraction(int(c.p), int(c.q))
                               for m, c in poly.terms()})


@pytest.fixture(scope="session")
def rc():
    return builtin_setting("rankin_cohen")


@pytest.fixture(scope="session")
def juhl3():
    return builtin_setting("juhl", 3)


@pytest.fixture(scope="session")
def settings():
    return {"rankin_cohen": builtin_setting("rankin_cohen"),
            "juhl2": builtin_setting("juhl", 2),
            "juhl3": builtin_setting("juhl", 3),
            "juhl4": builtin_setting("juhl", 4)}
