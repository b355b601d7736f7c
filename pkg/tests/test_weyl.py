from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from fmethod.algebra import MPoly, parse_polynomial
from fmethod.errors import DomainError, ParseError, StructuralError
from fmethod.weyl import (Space, WeylElement, apply, commutator, fourier_hat, parse_weyl,
                          symb, symb_inv)


def random_element(rng, space, degree=4, terms=4):
    n = space.dim
    out = {}
    for _ in range(terms):
        k = rng.randint(0, degree)
        e = [0] * (2 * n)
        for _ in range(k):
            e[rng.randrange(2 * n)] += 1
        out[(tuple(e[:n]), tuple(e[n:]))] = Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3)))
    return WeylElement(space, out)


def by_generators(t):
    """Fourier image built from the generator rules alone."""
    dual = t.space.dual()
    acc = WeylElement.zero(dual)
    for (a, b), c in t.terms.items():
        term = WeylElement.const(c, dual)
        for i, k in enumerate(a):
            term = term * WeylElement.derivative(i, dual) ** k
        for i, k in enumerate(b):
            term = term * (-WeylElement.position(i, dual)) ** k
        acc = acc + term
    return acc


def negate_generators(t):
    return WeylElement(t.space, {(a, b): c * (-1) ** (sum(a) + sum(b)) for (a, b), c in t.terms.items()})


def test_commutation_relation():
    s = Space.standard(2)
    d1, z1, z2 = WeylElement.derivative(0, s), WeylElement.position(0, s), WeylElement.position(1, s)
    assert d1 * z1 == z1 * d1 + 1
    assert commutator(d1, z2) == WeylElement.zero(s)
    assert str(d1 * z1) == "z1*d1 + 1"


def test_euler_square():
    t = parse_weyl("z1*d1")
    sq = t * t
    assert sq == parse_weyl("z1^2*d1^2 + z1*d1")
    for k in range(6):
        f = MPoly.monomial((k,), ("z1",))
        assert apply(sq, f) == apply(t, apply(t, f)) == f.scale(k * k)


def test_apply_examples():
    assert apply(parse_weyl("d1"), parse_polynomial("z1^3", ("z1",))) == parse_polynomial("3*z1^2", ("z1",))
    op = parse_weyl("z1^2*d1^2 + z1*d1")
    assert apply(op, MPoly.monomial((4,), ("z1",))) == MPoly.monomial((4,), ("z1",), Fraction(16))


@pytest.mark.parametrize("seed", range(30))
def test_product_agrees_with_composition(seed):
    rng = random.Random(seed)
    s = Space.standard(rng.randint(1, 3))
    a, b, c = (random_element(rng, s, 3, 3) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    for _ in range(3):
        e = tuple(rng.randint(0, 4) for _ in range(s.dim))
        f = MPoly.monomial(e, s.positions)
        assert apply(a * b, f) == apply(a, apply(b, f))


def test_fourier_generators():
    s = Space.standard(2)
    dual = s.dual()
    assert fourier_hat(WeylElement.position(1, s)) == WeylElement.derivative(1, dual)
    assert fourier_hat(WeylElement.derivative(0, s)) == -WeylElement.position(0, dual)
    assert str(fourier_hat(parse_weyl("d1"))) == "-zeta1"
    assert str(fourier_hat(parse_weyl("z1*d1"))) == "-zeta1*dzeta1 - 1"
    assert str(fourier_hat(parse_weyl("1"))) == "1"


@pytest.mark.parametrize("seed", range(110))
def test_fourier_is_a_ring_homomorphism(seed):
    rng = random.Random(1000 + seed)
    s = Space.standard(rng.randint(1, 3))
    a = random_element(rng, s)
    b = random_element(rng, s)
    assert fourier_hat(a * b) == fourier_hat(a) * fourier_hat(b)
    assert fourier_hat(a + b) == fourier_hat(a) + fourier_hat(b)
    assert fourier_hat(a) == by_generators(a)


@pytest.mark.parametrize("seed", range(30))
def test_double_transform_negates_generators(seed):
    rng = random.Random(2000 + seed)
    s = Space.standard(rng.randint(1, 3))
    t = random_element(rng, s)
    twice = fourier_hat(fourier_hat(t))
    assert twice.space == s
    assert twice == negate_generators(t)


def test_fourier_preserves_commutation():
    s = Space.standard(3)
    for i in range(3):
        for j in range(3):
            c = commutator(fourier_hat(WeylElement.derivative(i, s)),
                           fourier_hat(WeylElement.position(j, s)))
            assert c == WeylElement.const(1 if i == j else 0, s.dual())


def test_symbol_round_trip():
    s = Space.coordinates(("x1", "x2", "x3"))
    op = parse_weyl("dx1^2*dx2 - 3*dx3 + 1/2", s)
    psi = symb(op)
    assert psi.vars == ("zeta1", "zeta2", "zeta3")
    assert psi == parse_polynomial("zeta1^2*zeta2 - 3*zeta3 + 1/2", psi.vars)
    assert symb_inv(psi, s) == op
    assert symb(WeylElement.const(1, s)) == MPoly.const(1, psi.vars)
    # products of constant-coefficient operators go to products of symbols
    other = parse_weyl("dx1 + dx3^2", s)
    assert symb(op * other) == symb(op) * symb(other)


def test_symbol_rejects_variable_coefficients():
    with pytest.raises(DomainError):
        symb(parse_weyl("z1*d1"))


def test_juhl_shaped_symbol():
    s = Space.coordinates(("x1", "x2", "x3"))
    z = ("zeta1", "zeta2", "zeta3")
    psi = parse_polynomial("1/2*(zeta1^2 + zeta2^2) + 5*zeta3^2", z)
    assert symb_inv(psi, s) == parse_weyl("1/2*dx1^2 + 1/2*dx2^2 + 5*dx3^2", s)


def test_mixed_spaces_are_rejected():
    a = WeylElement.position(0, Space.standard(1))
    b = WeylElement.position(0, Space.standard(2))
    with pytest.raises(StructuralError):
        a + b
    with pytest.raises(StructuralError):
        a * fourier_hat(a)
    with pytest.raises(StructuralError):
        apply(a, MPoly.var("y", ("y",)))


def test_order_and_degree():
    t = parse_weyl("z1^2*d1 + d1^3*d2")
    assert t.order() == 4
    assert t.poly_degree() == 2


def test_json_round_trip():
    rng = random.Random(7)
    s = Space.standard(3)
    t = random_element(rng, s)
    data = json.loads(json.dumps({"space": s.to_json(), "op": t.to_json()}))
    assert WeylElement.from_json(data["op"], Space.from_json(data["space"])) == t


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        parse_weyl("z1 * (d1 + ")
    assert info.value.position is not None
    with pytest.raises(ParseError):
        parse_weyl("q1", Space.standard(1))
