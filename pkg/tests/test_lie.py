from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from fmethod.algebra import ExactMatrix, MPoly, RatFunc
from fmethod.errors import DomainError, StructuralError
from fmethod.lie import GradedLie, builtin_setting, juhl_lie, sl2
from fmethod.lie.action import (RepWeight, alpha, alpha_full, beta, beta_full, dpi, dpi_hat,
                                mu_from_lambda)
from fmethod.lie.oracle import oracle_coordinates
from fmethod.weyl import WeylElement, commutator, parse_weyl


def rand_rat(rng):
    return Fraction(rng.randint(-15, 15), rng.choice((1, 2, 3, 5, 7)))


def symbolic_weight(setting):
    return setting.lambda_weight()


def test_sl2_brackets():
    L = sl2()
    e, h, f = (L.element(n) for n in "ehf")
    assert L.bracket(h, e) == tuple(2 * c for c in e)
    assert L.bracket(e, f) == h
    assert L.bracket(h, f) == tuple(-2 * c for c in f)


def test_brackets_match_matrix_commutators():
    L = juhl_lie(3)
    mats, _ = L.realization
    rng = random.Random(3)
    for _ in range(20):
        x = [rand_rat(rng) for _ in range(L.dim)]
        y = [rand_rat(rng) for _ in range(L.dim)]

        def combo(v):
            acc = ExactMatrix.zeros(*mats[0].shape)
            for c, m in zip(v, mats):
                acc = acc + m * c
            return acc

        xm, ym = combo(x), combo(y)
        assert combo(L.bracket(x, y)) == xm * ym - ym * xm


def test_jacobi_on_random_triples():
    # so(5) realization
    L = juhl_lie(3)
    rng = random.Random(11)
    for _ in range(200):
        x, y, z = ([rand_rat(rng) for _ in range(L.dim)] for _ in range(3))
        s = [a + b + c for a, b, c in zip(L.bracket(x, L.bracket(y, z)),
                                         L.bracket(y, L.bracket(z, x)),
                                         L.bracket(z, L.bracket(x, y)))]
        assert not any(s)


def test_invalid_structure_is_rejected():
    # [a,b] = c, [b,c] = a, [a,c] = a breaks Jacobi
    with pytest.raises(StructuralError):
        GradedLie(("a", "b", "c"), (0, 0, 0), {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})
    with pytest.raises(StructuralError):
        GradedLie(("a", "b"), (1, 1), {(0, 1): {0: 1}})


def test_alpha_beta_sl2():
    L = sl2()
    e = L.element("e")
    x = MPoly.var("x", ("x",))
    a = alpha(L, e)
    b = beta(L, e)
    assert a[1] == x and not a[0] and not a[2]
    assert b[2] == -x ** 2 and not b[0] and not b[1]
    zero = tuple(MPoly.zero(("x",)) for _ in range(3))
    assert not any(alpha(L, e, zero)) and not any(beta(L, e, zero))


def test_alpha_rejects_other_grades():
    L = sl2()
    with pytest.raises(DomainError):
        alpha(L, L.element("h"))
    with pytest.raises(DomainError):
        beta(L, L.element("f"))


@pytest.mark.parametrize("name,n", [("sl2", None), ("rankin_cohen", None),
                                    ("juhl", 2), ("juhl", 3), ("juhl", 4)])
def test_alpha_beta_match_factorization_oracle(name, n):
    L = sl2() if name == "sl2" else builtin_setting(name, n).lie
    rng = random.Random(hash((name, n)) & 0xffff)
    for _ in range(20):
        x = tuple(rand_rat(rng) if g == -1 else Fraction(0) for g in L.grades)
        y = tuple(rand_rat(rng) for _ in range(L.dim))
        a_or, b_or = oracle_coordinates(L, y, x)
        assert alpha_full(L, y, x) == a_or
        assert beta_full(L, y, x) == b_or


def test_dpi_of_n_minus_is_minus_derivative():
    s = builtin_setting("rankin_cohen")
    L = s.lie
    lam = symbolic_weight(s)
    assert dpi(L, L.element("f1"), lam) == -parse_weyl("dx", dpi(L, L.element("f1"), lam).space)
    hat = dpi_hat(L, L.element("f2"), lam)
    assert hat.order() == 0 and hat.poly_degree() == 1


def test_dpi_sl2_shape():
    L = sl2()
    m = RatFunc.symbol("m", ("m",))
    chi = RepWeight(L, {"h": m}, ("m",))
    op = dpi(L, L.element("e"), chi)
    assert op == parse_weyl("x^2*dx", op.space) + WeylElement(op.space, {((1,), (0,)): m})
    hat = dpi_hat(L, L.element("e"), chi)
    assert hat.order() == 2 and hat.poly_degree() == 1


def homomorphism_failures(L, chi, hat=False):
    act = dpi_hat if hat else dpi
    ops = [act(L, L.basis_vector(i), chi) for i in range(L.dim)]
    bad = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = act(L, L.bracket(L.basis_vector(i), L.basis_vector(j)), chi)
            if lhs != commutator(ops[i], ops[j]):
                bad.append((L.names[i], L.names[j]))
    return bad


@pytest.mark.parametrize("hat", [False, True])
def test_homomorphism_sl2_and_rankin_cohen(hat):
    L = sl2()
    chi = RepWeight(L, {"h": RatFunc.symbol("m", ("m",))}, ("m",))
    assert homomorphism_failures(L, chi, hat) == []
    s = builtin_setting("rankin_cohen")
    assert homomorphism_failures(s.lie, symbolic_weight(s), hat) == []


def test_character_must_vanish_on_commutators():
    s = builtin_setting("juhl", 3)
    with pytest.raises(DomainError):
        RepWeight(s.lie, {"M2_3": 1})


@pytest.mark.parametrize("name,n", [("rankin_cohen", None), ("juhl", 2), ("juhl", 3)])
def test_n_plus_acts_by_second_order_operators(name, n):
    s = builtin_setting(name, n)
    mu = mu_from_lambda(symbolic_weight(s))
    for i in s.lie.n_plus:
        op = dpi_hat(s.lie, s.lie.basis_vector(i), mu)
        assert op.order() <= 2
        assert op.poly_degree() <= 1


def test_mu_from_lambda():
    L = sl2()
    k = RatFunc.symbol("k", ("k",))
    mu = mu_from_lambda(RepWeight(L, {"h": k}, ("k",)))
    assert mu["h"] == -k + 2
    s = builtin_setting("rankin_cohen")
    mu = mu_from_lambda(s.lambda_weight())
    k1, k2 = (RatFunc.symbol(p, ("k1", "k2")) for p in ("k1", "k2"))
    assert mu["h1"] == -k1 + 2 and mu["h2"] == -k2 + 2
    zero = mu_from_lambda(RepWeight(L, {}))
    assert zero["h"] == RatFunc.const(2)
    # conformal case: D acts on n_+ with trace n
    j = builtin_setting("juhl", 4)
    lam = RatFunc.symbol("lam", ("lam",))
    assert mu_from_lambda(j.lambda_weight())["D"] == -lam + 4


def test_builtin_dimensions():
    rc = builtin_setting("rankin_cohen").lie
    assert (rc.dim, len(rc.n_plus), len(rc.subalgebra)) == (6, 2, 3)
    assert sum(1 for g in rc.sub_grades if g == 1) == 1
    j3 = builtin_setting("juhl", 3).lie
    assert (j3.dim, len(j3.n_plus)) == (10, 3)
    assert sum(1 for g in j3.sub_grades if g == 1) == 2
    assert j3.subalgebra_lie().dim == 6


def test_restriction_maps():
    rc = builtin_setting("rankin_cohen").lie
    t = MPoly.var("t", ("t",))
    assert rc.restriction_map() == {"x": t, "y": t}
    j = builtin_setting("juhl", 3).lie
    r = j.restriction_map()
    assert r["x3"] == MPoly.zero(("x1", "x2"))
    assert r["x1"] == MPoly.var("x1", ("x1", "x2"))


def test_juhl_needs_two_dimensions():
    with pytest.raises(StructuralError):
        builtin_setting("juhl", 1)
    with pytest.raises(StructuralError):
        builtin_setting("juhl")
    with pytest.raises(StructuralError):
        builtin_setting("nope")


@pytest.mark.parametrize("name,n", [("rankin_cohen", None), ("juhl", 3)])
def test_json_round_trip(name, n):
    L = builtin_setting(name, n).lie
    data = json.loads(L.dumps())
    back = GradedLie.from_json(data)
    assert back.names == L.names and back.grades == L.grades
    assert back.structure == L.structure
    assert back.subalgebra == L.subalgebra
    assert back.coords == L.coords and back.sub_coords == L.sub_coords


def test_json_without_subalgebra_vectors():
    L = sl2()
    data = L.to_json()
    del data["subalgebra"]
    back = GradedLie.from_json(data)
    assert back.dim == 3 and len(back.subalgebra) == 3
