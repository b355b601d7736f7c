"""Operators from singular vectors, exact equivariance checks, and the
closed-formula comparators for the two built-in families."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .algebra.mpoly import MPoly, monomials_up_to
from .algebra.ratfunc import RatFunc
from .errors import DegenerateSpecialization, DomainError, PoleError, UnsupportedError
from .lie.action import RepWeight, coordinate_space, dpi, dpi_hat, is_torus_direction, mu_from_lambda
from .lie.builtin import Setting, builtin_setting
from .weyl import WeylElement, apply, symb, symb_inv

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _spec(c, assignment):
    if isinstance(c, RatFunc):
        return c.specialize(assignment)
    return Fraction(c)


@dataclass
class DiffOperator:
    """A constant-coefficient operator on n_- followed by restriction to n'_-.

    ``lam`` is the source weight; the target weight is derived from the
    operator's symbol when it is verified.
    """

    operator: WeylElement
    setting: Setting
    lam: RepWeight
    degree: int | None = None
    label: str = "operator"

    def __post_init__(self):
        if not self.operator.is_constant_coefficient():
            raise DomainError("emitted operators must have constant coefficients")
        if self.operator.space != coordinate_space(self.setting.lie):
            raise DomainError("operator does not live on the n_- coordinates of the setting")

    @property
    def restriction(self):
        return self.setting.lie.restriction_map()

    @property
    def params(self):
        return self.lam.params

    def symbol(self):
        return symb(self.operator)

    def restrict(self, f: MPoly) -> MPoly:
        lie = self.setting.lie
        return f.subs(self.restriction, lie.sub_coords)

    def text(self):
        rest = ", ".join(f"{k}={v}" for k, v in self.restriction.items())
        return f"[{self.operator}] then restrict {rest}"

    def latex(self):
        return self.operator.latex()

    def perturbed(self, index, amount=1):
        """Copy with the coefficient of the ``index``-th term (canonical order) bumped."""
        terms = dict(self.operator.terms)
        key = self.operator.sorted_terms()[index][0]
        terms[key] = terms[key] + amount
        return DiffOperator(WeylElement(self.operator.space, terms), self.setting, self.lam,
                            self.degree, f"{self.label}+perturb{index}")

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "DiffOperator",
            "label": self.label,
            "setting": self.setting.name,
            "size": dict(self.setting.size),
            "params": list(self.params),
            "lambda": {k: str(v) for k, v in self.lam.values.items()},
            "degree": self.degree,
            "space": self.operator.space.to_json(),
            "operator": self.operator.to_json(),
            "restriction": {k: str(v) for k, v in self.restriction.items()},
            "text": str(self.operator),
        }

    @classmethod
    def from_json(cls, data):
        from .algebra.parse import parse_polynomial
        from .weyl import Space
        setting = builtin_setting(data["setting"], data.get("size", {}).get("n"))
        params = tuple(data["params"])
        vals = {k: RatFunc.poly(parse_polynomial(v, params)) for k, v in data["lambda"].items()}
        lam = RepWeight(setting.lie, vals, params)
        op = WeylElement.from_json(data["operator"], Space.from_json(data["space"]))
        return cls(op, setting, lam, data.get("degree"), data.get("label", "operator"))


def emit_operator(sv) -> DiffOperator:
    """symb^-1 of a singular vector, with the setting's restriction attached."""
    fs = sv.setting
    space = coordinate_space(fs.lie)
    op = symb_inv(sv.psi, space)
    return DiffOperator(op, fs.setting, fs.lam, sv.degree, f"{fs.setting.name}-d{sv.degree}")


def identity_operator(setting: Setting, lam: RepWeight) -> DiffOperator:
    space = coordinate_space(setting.lie)
    return DiffOperator(WeylElement.const(1, space), setting, lam, 0, "identity")


@dataclass
class GeneratorResidual:
    generator: str
    zero: bool
    failing_monomials: int = 0
    example_monomial: str | None = None
    example_residual: str | None = None

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class EquivarianceReport:
    setting: str
    operator_id: str
    assignment: dict
    target_weight: dict
    test_degree: int
    residuals: list = field(default_factory=list)

    @property
    def verdict(self):
        return "pass" if all(r.zero for r in self.residuals) else "fail"

    @property
    def failing_generators(self):
        return [r.generator for r in self.residuals if not r.zero]

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "EquivarianceReport",
            "setting": self.setting,
            "operator_id": self.operator_id,
            "assignment": {k: str(v) for k, v in sorted(self.assignment.items())},
            "target_weight": {k: str(v) for k, v in self.target_weight.items()},
            "test_degree": self.test_degree,
            "residuals": [r.to_json() for r in self.residuals],
            "verdict": self.verdict,
        }

    def text(self):
        at = ", ".join(f"{k}={v}" for k, v in sorted(self.assignment.items()))
        lines = [f"{self.operator_id} at {at or 'no parameters'}: {self.verdict}"]
        for r in self.residuals:
            if r.zero:
                lines.append(f"  {r.generator}: zero")
            else:
                lines.append(f"  {r.generator}: {r.failing_monomials} failing monomials,"
                             f" e.g. {r.example_monomial} -> {r.example_residual}")
        return "\n".join(lines)


def target_weight(D: DiffOperator, lam_spec: RepWeight) -> RepWeight:
    """nu on l', read off from how the torus of l' acts on the symbol.

    A singular vector satisfies dpi_hat_mu(Z) psi = -nu(Z) psi; non-torus
    directions of l' sit in [l', l'] where a character is zero.
    """
    lie = D.setting.lie
    sub = lie.subalgebra_lie()
    mu = mu_from_lambda(lam_spec)
    psi = D.symbol()
    if not psi.terms:
        raise DegenerateSpecialization("the operator vanishes at this specialization")
    vals = {}
    for name, v, g in zip(lie.sub_names, lie.subalgebra, lie.sub_grades):
        if g != 0:
            continue
        op = dpi_hat(lie, v, mu)
        if not is_torus_direction(op):
            continue
        img = apply(op, psi)
        e, c = psi.sorted_terms()[0]
        ev = img.terms.get(e, Fraction(0)) / c
        if img != psi.scale(ev):
            raise DomainError(f"operator symbol is not a weight vector for {name}")
        vals[name] = -ev
    return RepWeight(sub, vals)


def specialize_operator(D: DiffOperator, assignment) -> DiffOperator:
    op = D.operator.map_coeffs(lambda c: _spec(c, assignment))
    if not op.terms:
        raise DegenerateSpecialization(
            f"{D.label} vanishes at {assignment}; choose a different sample point", assignment)
    lam = D.lam.specialize(assignment)
    return DiffOperator(op, D.setting, lam, D.degree, D.label)


def verify_equivariance(D: DiffOperator, assignment, test_degree=6,
                        stop_on_failure=False) -> EquivarianceReport:
    """Check Restrict(D dpi_lambda(Z) f) = dpi_nu(Z) Restrict(D f) exactly.

    Z runs over the basis of g' and f over monomials of degree <= test_degree.
    """
    missing = [p for p in D.params if p not in assignment]
    if missing:
        raise DomainError(f"no value for parameters {missing}")
    try:
        Ds = specialize_operator(D, assignment)
    except PoleError as exc:
        raise PoleError(f"{exc}; choose a different sample point", exc.assignment) from exc
    lie = D.setting.lie
    sub = lie.subalgebra_lie()
    nu = target_weight(Ds, Ds.lam)
    coords = lie.coords
    restricted = {}

    def RD(exp):
        if exp not in restricted:
            restricted[exp] = Ds.restrict(apply(Ds.operator, MPoly.monomial(exp, coords)))
        return restricted[exp]

    def RD_poly(p):
        acc = MPoly.zero(lie.sub_coords)
        for e, c in p.terms.items():
            img = RD(e)
            if img.terms:
                acc = acc + img.scale(c)
        return acc

    monos = monomials_up_to(len(coords), test_degree)
    report = EquivarianceReport(D.setting.name, D.label, dict(assignment),
                                dict(nu.values), test_degree)
    for a, (name, v) in enumerate(zip(lie.sub_names, lie.subalgebra)):
        src = dpi(lie, v, Ds.lam)
        tgt = dpi(sub, sub.basis_vector(a), nu)
        res = GeneratorResidual(name, True)
        for e in monos:
            f = MPoly.monomial(e, coords)
            lhs = RD_poly(apply(src, f))
            rhs = apply(tgt, RD(e))
            diff = lhs - rhs
            if diff.terms:
                if res.zero:
                    res.example_monomial = str(f)
                    res.example_residual = str(diff)
                res.zero = False
                res.failing_monomials += 1
                if stop_on_failure:
                    break
        report.residuals.append(res)
        if stop_on_failure and not res.zero:
            break
    return report


def sample_assignments(params, count, seed=0, max_tries=50, check=None):
    """``count`` random rational points; ``check`` may raise PoleError to reject one.

    Values are non-integers with denominators 3, 5, 7 or 11, which keeps
    clear of the integer and half-integer weights where kernels can jump.
    """
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries * max(count, 1):
            raise PoleError(f"no pole-free sample point after {tries - 1} tries")
        a = {}
        for p in params:
            den = rng.choice((3, 5, 7, 11))
            num = rng.randint(-12 * den, 12 * den)
            while num % den == 0:
                num += 1
            a[p] = Fraction(num, den)
        if check is not None:
            try:
                check(a)
            except PoleError:
                continue
        out.append(a)
    return out


# closed formulas


@dataclass
class ComparisonReport:
    family: str
    degree: int
    proportional: bool
    scalar: str | None
    expected: dict
    actual: dict
    note: str = ""

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "kind": "ComparisonReport",
                **self.__dict__}

    def text(self):
        verdict = "pass" if self.proportional else "fail"
        s = f"{self.family} degree {self.degree}: {verdict}"
        if self.scalar is not None:
            s += f" (solver = {self.scalar} * closed form)"
        return s


def _pochhammer_desc(x: MPoly, top: int, count: int):
    """prod_{i=0}^{count-1} (x + top - i)."""
    p = MPoly.const(1, x.vars)
    for i in range(count):
        p = p * (x + (top - i))
    return p


def rankin_cohen_coefficients(n: int, params=("k1", "k2")):
    """Closed-form coefficients c_j of d^(n-j)/dx f1 * d^j/dy f2, as polynomials.

    (k1+n-1)!/(k1+n-j-1)! = prod_{i=0}^{j-1} (k1+n-1-i)
    (k2+n-1)!/(k2+j-1)!   = prod_{i=j}^{n-1} (k2+i)
    """
    k1 = MPoly.var(params[0], params)
    k2 = MPoly.var(params[1], params)
    out = []
    for j in range(n + 1):
        a = _pochhammer_desc(k1, n - 1, j)
        b = MPoly.const(1, params)
        for i in range(j, n):
            b = b * (k2 + i)
        out.append((a * b).scale(Fraction((-1) ** j * comb(n, j))))
    return out


def juhl_coefficients(n: int, delta: int, lam="lam"):
    """Closed-form coefficients of Delta'^j d_n^k (2j + k = delta) at nu = lambda + delta."""
    if delta % 2:
        raise UnsupportedError(
            "the product bound (nu - lambda)/2 - j is a half-integer for odd"
            " nu - lambda; odd delta is not compared (see the decisions ledger)")
    params = (lam,)
    x = MPoly.var(lam, params)
    out = {}
    for j in range(delta // 2 + 1):
        k = delta - 2 * j
        p = MPoly.const(Fraction(1, 2 ** j * factorial(j) * factorial(k)), params)
        for i in range(1, delta // 2 - j + 1):
            # lambda + nu - n - 1 + 2i with nu = lambda + delta
            p = p * (x.scale(2) + (delta - n - 1 + 2 * i))
        out[(j, k)] = p
    return out


def _proportional(actual: dict, expected: dict):
    """Scalar s with actual = s * expected, or None."""
    keys = sorted(set(actual) | set(expected))
    ref = next((k for k in keys if expected.get(k)), None)
    if ref is None or not actual.get(ref):
        return None
    s = actual[ref] / expected[ref]
    for k in keys:
        a = actual.get(k)
        e = expected.get(k)
        lhs = a if a else RatFunc.const(0, s.vars)
        rhs = s * e if e else RatFunc.const(0, s.vars)
        if lhs != rhs:
            return None
    return s


def _as_rf(c, params):
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, MPoly):
        return RatFunc.poly(c)
    return RatFunc.const(c, params)


def compare_rankin_cohen(n: int, sv) -> ComparisonReport:
    if sv.degree != n:
        raise DomainError(f"singular vector has degree {sv.degree}, expected {n}")
    if sv.setting.setting.name != "rankin_cohen":
        raise DomainError("comparison needs a singular vector of the rankin_cohen setting")
    params = sv.params
    coeffs = rankin_cohen_coefficients(n, params)
    expected = {(n - j, j): RatFunc.poly(c) for j, c in enumerate(coeffs)}
    actual = {e: _as_rf(c, params) for e, c in sv.psi.terms.items()}
    s = _proportional(actual, expected)
    return ComparisonReport("rankin_cohen", n, s is not None, None if s is None else str(s),
                            {str(k): str(v) for k, v in expected.items()},
                            {str(k): str(v) for k, v in actual.items()})


def juhl_symbol(n: int, delta: int, zetas, lam="lam"):
    """sum_j c_j |zeta'|^(2j) zeta_n^k as a polynomial with RatFunc coefficients."""
    coeffs = juhl_coefficients(n, delta, lam)
    q = MPoly.zero(zetas)
    for z in zetas[:-1]:
        q = q + MPoly.var(z, zetas) ** 2
    zn = MPoly.var(zetas[-1], zetas)
    total = MPoly.zero(zetas)
    for (j, k), c in coeffs.items():
        total = total + (q ** j * zn ** k).scale(RatFunc.poly(c))
    return total


def compare_juhl(n: int, delta: int, sv) -> ComparisonReport:
    if delta % 2:
        juhl_coefficients(n, delta)
    if sv.degree != delta:
        raise DomainError(f"singular vector has degree {sv.degree}, expected {delta}")
    fs = sv.setting
    if fs.setting.name != "juhl" or fs.setting.size.get("n") != n:
        raise DomainError(f"comparison needs a singular vector of juhl({n})")
    lam = fs.params[0]
    expected_poly = juhl_symbol(n, delta, sv.psi.vars, lam)
    expected = {e: _as_rf(c, fs.params) for e, c in expected_poly.terms.items()}
    actual = {e: _as_rf(c, fs.params) for e, c in sv.psi.terms.items()}
    s = _proportional(actual, expected)
    return ComparisonReport("juhl", delta, s is not None, None if s is None else str(s),
                            {str(k): str(v) for k, v in expected.items()},
                            {str(k): str(v) for k, v in actual.items()})
