from __future__ import annotations

import json

import pytest

from fmethod.algebra import ExactMatrix, MPoly, RatFunc, nullspace, parse_polynomial
from fmethod.errors import DomainError, UnsupportedError
from fmethod.lie import builtin_setting
from fmethod.lie.action import RepWeight
from fmethod.solver import (FSetting, SingularVector, build_system, candidate_degrees,
                            check_singular, kernel_span_agrees, solve_singular_vectors,
                            step4_reduce)
from fmethod.verify import juhl_symbol, rankin_cohen_coefficients


def rc_problem(degree_max, nu=None):
    s = builtin_setting("rankin_cohen")
    lam = s.lambda_weight()
    fs = FSetting(s, lam, None, degree_max)
    if nu is not None:
        w = RepWeight(fs.sub_lie, {"H": parse_polynomial(nu, lam.params)}, lam.params)
        fs = FSetting(s, lam, w, degree_max)
    return fs


def juhl_problem(n, degree_max, nu=None, parity=None):
    s = builtin_setting("juhl", n)
    lam = s.lambda_weight()
    fs = FSetting(s, lam, None, degree_max, parity)
    if nu is not None:
        w = RepWeight(fs.sub_lie, {"D": parse_polynomial(nu, lam.params)}, lam.params)
        fs = FSetting(s, lam, w, degree_max, parity)
    return fs


@pytest.mark.parametrize("n", range(5))
def test_rankin_cohen_weight_selects_one_degree(n):
    fs = rc_problem(6, f"k1 + k2 + {2 * n}")
    cands = candidate_degrees(fs)
    assert [c.degree for c in cands] == [n]
    assert cands[0].dimension == n + 1


def test_juhl_weight_selects_degree_two():
    for n in (2, 3, 4):
        cands = candidate_degrees(juhl_problem(n, 4, "lam + 2"))
        assert [c.degree for c in cands] == [2]


def test_degree_zero_candidate():
    fs = rc_problem(0, "k1 + k2")
    (cand,) = candidate_degrees(fs)
    assert cand.degree == 0 and cand.dimension == 1
    (sv,) = solve_singular_vectors(fs)
    assert sv.psi == MPoly.const(1, fs.zetas).map_coeffs(lambda c: RatFunc.const(c, fs.params))


def test_discovery_mode_lists_every_degree():
    cands = candidate_degrees(rc_problem(4))
    assert [c.degree for c in cands] == [0, 1, 2, 3, 4]
    cands = candidate_degrees(juhl_problem(3, 4, parity="even"))
    assert [c.degree for c in cands] == [0, 2, 4]


def test_non_character_is_unsupported():
    s = builtin_setting("rankin_cohen")
    lam = RepWeight(s.lie, dim=2, matrices={"h1": ExactMatrix.identity(2)})
    with pytest.raises(UnsupportedError):
        candidate_degrees(FSetting(s, lam, None, 2))


def test_rankin_cohen_degree_one_system():
    fs = rc_problem(1, "k1 + k2 + 2")
    m = build_system(fs, 1)
    assert m.cols == 2
    (v,) = nullspace(m)
    k1, k2 = (RatFunc.symbol(p, fs.params) for p in ("k1", "k2"))
    # columns follow the ansatz order zeta1, zeta2
    space = step4_reduce(fs, 1)
    assert [str(p) for p in space.basis] == ["zeta1", "zeta2"]
    assert v[0] * k1 == -(v[1] * k2)
    assert v == (k2, -k1)


def test_degree_zero_system_is_zero():
    for fs in (rc_problem(0, "k1 + k2"), juhl_problem(3, 0, "lam")):
        m = build_system(fs, 0)
        assert m.cols == 1
        assert all(not e for row in m.entries for e in row)
        assert len(nullspace(m)) == 1


def test_build_system_checks_degree():
    with pytest.raises(DomainError):
        build_system(rc_problem(1), 2)


def test_step4_reduction_dimensions():
    fs = juhl_problem(3, 6)
    # invariant generators |zeta'|^2 and zeta_3: products of degree d
    assert [step4_reduce(fs, d).dimension for d in range(7)] == [1, 1, 2, 2, 3, 3, 4]
    assert step4_reduce(fs, 0).dimension == 1
    # unreduced: all monomials of the weight, plus explicit rotation rows
    full = FSetting(fs.setting, fs.lam, None, 6, reduce=False)
    assert step4_reduce(full, 2).dimension == 6
    assert step4_reduce(full, 2).invariance_rows


@pytest.mark.parametrize("n", range(7))
def test_rankin_cohen_vectors_match_closed_formula(n):
    fs = rc_problem(n, f"k1 + k2 + {2 * n}")
    (sv,) = solve_singular_vectors(fs)
    expected = rankin_cohen_coefficients(n, fs.params)
    ref = sv.psi.terms[(n, 0)] / RatFunc.poly(expected[0])
    for j, c in enumerate(expected):
        assert sv.psi.terms[(n - j, j)] == ref * RatFunc.poly(c)


def test_juhl_degree_two_symbol():
    fs = juhl_problem(3, 2, "lam + 2")
    (sv,) = solve_singular_vectors(fs)
    lam = RatFunc.symbol("lam", ("lam",))
    z = sv.psi.vars
    a = sv.psi.terms[(2, 0, 0)]
    assert sv.psi.terms[(0, 2, 0)] == a
    # 1/2 on zeta_1^2 + zeta_2^2 against (2 lam - n + 3)/2 on zeta_3^2, n = 3
    assert sv.psi.terms[(0, 0, 2)] / a == lam * 2
    expected = juhl_symbol(3, 2, z)
    ratio = sv.psi.terms[(2, 0, 0)] / expected.terms[(2, 0, 0)]
    assert all(sv.psi.terms[e] == ratio * c for e, c in expected.terms.items())


@pytest.mark.parametrize("name,n", [("rankin_cohen", None), ("juhl", 2), ("juhl", 3)])
def test_reduction_does_not_change_the_kernel(name, n):
    fs = rc_problem(4) if name == "rankin_cohen" else juhl_problem(n, 4)
    for d in range(5):
        assert kernel_span_agrees(fs, d)


def test_vectors_pass_direct_check():
    fs = juhl_problem(3, 4)
    for sv in solve_singular_vectors(fs):
        assert check_singular(fs, sv.psi, sv.weight) == []
        # a one-term vector only gets rescaled by a bump
        if len(sv.psi.terms) > 1:
            bumped = dict(sv.psi.terms)
            e = next(iter(bumped))
            bumped[e] = bumped[e] + 1
            assert check_singular(fs, MPoly(sv.psi.vars, bumped), sv.weight)


def test_no_solutions_when_weights_do_not_match():
    fs = rc_problem(0, "k1 + k2 + 2")
    assert candidate_degrees(fs) == []
    assert solve_singular_vectors(fs) == []


def test_multiplicity_reports():
    fs = rc_problem(3)
    vectors, reports = solve_singular_vectors(fs, with_reports=True)
    assert [r["kernel_dimension"] for r in reports] == [1, 1, 1, 1]
    assert not any(r["anomaly"] for r in reports)
    assert [r["ansatz_dimension"] for r in reports] == [1, 2, 3, 4]
    assert vectors[2].multiplicity_report == reports[2]


def test_threads_do_not_change_results():
    fs = juhl_problem(2, 5)
    serial = [sv.to_json() for sv in solve_singular_vectors(fs, jobs=1)]
    fs2 = juhl_problem(2, 5)
    threaded = [sv.to_json() for sv in solve_singular_vectors(fs2, jobs=4)]
    assert json.dumps(serial) == json.dumps(threaded)


def test_singular_vector_json():
    (sv,) = [v for v in solve_singular_vectors(rc_problem(2)) if v.degree == 2]
    data = json.loads(json.dumps(sv.to_json()))
    assert data["degree"] == 2
    assert data["variables"] == ["zeta1", "zeta2"]
    assert data["params"] == ["k1", "k2"]
    psi = SingularVector.psi_from_json(data)
    assert psi == sv.psi


def test_fixed_weights_specialize_the_problem():
    s = builtin_setting("rankin_cohen")
    lam = s.lambda_weight({"k1": 4, "k2": 6})
    assert lam.params == ()
    fs = FSetting(s, lam, None, 1)
    vecs = solve_singular_vectors(fs)
    psi = vecs[1].psi
    # (k2, -k1) at (4, 6) after primitive normalization
    assert {e: c.constant_value() for e, c in psi.terms.items()} == {(1, 0): 3, (0, 1): -2}
