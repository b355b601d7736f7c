"""Singular vectors by the F-method.

For a weight lambda of l and a character nu of l', look for homogeneous
psi in Pol(n_+) with

    dpi_hat_mu(C) psi = 0                  for C in n'_+
    (dpi_hat_mu(Z) + nu(Z)) psi = 0        for Z in l'

where mu = -lambda + tr(ad|n_+).  Torus directions of l' (acting
diagonally on monomials) are imposed by restricting the ansatz to one weight
space; other l' directions either get explicit rows or are absorbed by
invariant generators supplied with the setting.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .algebra.matrix import ExactMatrix, nullspace
from .algebra.mpoly import MPoly, monomials_of_degree, primitive_normalize
from .algebra.parse import parse_polynomial
from .algebra.ratfunc import RatFunc
from .errors import DomainError, StructuralError, UnsupportedError
from .lie.action import RepWeight, dpi_hat, is_torus_direction, mu_from_lambda
from .lie.builtin import Setting
from .weyl import apply

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    degree: int
    weight: tuple          # ((l' name, RatFunc), ...) for the torus directions
    dimension: int         # size of the weight space in the ansatz

    def weight_dict(self):
        return dict(self.weight)


@dataclass
class FSetting:
    """Setting, source weight lambda, optional target weight nu and a degree bound.

    ``w_weight=None`` switches to discovery mode: every torus weight that
    occurs in S^d(n_+) is a candidate.  ``parity`` ("even" or "odd")
    restricts the degrees considered.
    """

    setting: Setting
    lam: RepWeight
    w_weight: RepWeight | None = None
    degree_max: int = 0
    parity: str | None = None
    reduce: bool = True

    def __post_init__(self):
        if self.degree_max < 0:
            raise StructuralError("degree_max must be non-negative")
        if self.parity not in (None, "even", "odd"):
            raise StructuralError(f"parity must be even or odd, not {self.parity!r}")
        if self.lam.lie is not self.setting.lie:
            raise StructuralError("lambda is not a weight of the setting's algebra")
        if self.w_weight is not None and self.w_weight.lie.names != self.setting.lie.sub_names:
            raise StructuralError("w_weight must be a weight of the marked subalgebra")

    @property
    def lie(self):
        return self.setting.lie

    @property
    def params(self):
        return self.lam.params

    @cached_property
    def sub_lie(self):
        return self.setting.lie.subalgebra_lie()

    @cached_property
    def mu(self):
        return mu_from_lambda(self.lam)

    @cached_property
    def zetas(self):
        return self.ops_space.positions

    @cached_property
    def ops_space(self):
        lie = self.lie
        return dpi_hat(lie, lie.basis_vector(0), self.mu).space

    @cached_property
    def annihilators(self):
        """(name, dpi_hat(C)) for C in the n'_+ basis."""
        lie = self.lie
        return [(n, dpi_hat(lie, v, self.mu))
                for n, v, g in zip(lie.sub_names, lie.subalgebra, lie.sub_grades) if g == 1]

    @cached_property
    def levi_ops(self):
        """(name, dpi_hat(Z), is_torus) for Z in the l' basis."""
        lie = self.lie
        out = []
        for n, v, g in zip(lie.sub_names, lie.subalgebra, lie.sub_grades):
            if g == 0:
                op = dpi_hat(lie, v, self.mu)
                out.append((n, op, is_torus_direction(op)))
        return out

    def to_json(self):
        return {
            "setting": self.setting.name,
            "size": dict(self.setting.size),
            "params": list(self.params),
            "lambda": self.lam.to_json(),
            "w_weight": self.w_weight.to_json() if self.w_weight else None,
            "degree_max": self.degree_max,
            "parity": self.parity,
        }


def _weight_of(op, poly):
    """Eigenvalue of ``op`` on ``poly`` (which must be an eigenvector)."""
    img = apply(op, poly)
    e, c = next(iter(poly.sorted_terms()))
    val = img.terms.get(e)
    if val is None:
        val = RatFunc.const(0, ())
    lam = val * (1 / Fraction(c)) if isinstance(c, Fraction) else val / c
    if img != poly.scale(lam):
        raise StructuralError("torus generator does not act diagonally on the ansatz")
    return lam


def _target_weight(fs, value):
    """The W-weight nu(Z) read off from dpi_hat(Z) psi = -nu(Z) psi."""
    return _as_rf(-value, fs.params)


def _invariant_products(fs, degree):
    gens = fs.setting.invariants
    degs = [g.total_degree() for g in gens]
    out = []

    def rec(i, left, exps):
        if i == len(gens):
            if left == 0:
                out.append(tuple(exps))
            return
        for k in range(left // degs[i], -1, -1):
            rec(i + 1, left - k * degs[i], exps + [k])

    rec(0, degree, [])
    polys = []
    for exps in out:
        p = MPoly.const(1, fs.zetas)
        for g, k in zip(gens, exps):
            if k:
                p = p * g ** k
        polys.append((exps, p))
    return polys


@dataclass
class ReducedSpace:
    """Ansatz for one candidate: ``basis`` polynomials span the columns."""

    degree: int
    weight: tuple
    basis: list
    labels: list
    invariance_rows: list       # names of l' directions imposed by explicit rows
    reduced: bool

    @property
    def dimension(self):
        return len(self.basis)

    def describe(self):
        return {"degree": self.degree, "dimension": self.dimension,
                "basis": self.labels, "invariance_rows": self.invariance_rows,
                "weight": {k: str(v) for k, v in self.weight}}


def _degrees(fs):
    for d in range(fs.degree_max + 1):
        if fs.parity == "even" and d % 2:
            continue
        if fs.parity == "odd" and d % 2 == 0:
            continue
        yield d


def _weighted_pieces(fs, degree):
    """Ansatz elements of one degree with their torus weights."""
    if fs.reduce and fs.setting.invariants is not None:
        pieces = [(_label_inv(exps), p) for exps, p in _invariant_products(fs, degree)]
    else:
        pieces = [(None, MPoly.monomial(e, fs.zetas))
                  for e in monomials_of_degree(len(fs.zetas), degree)]
    tori = [(n, op) for n, op, torus in fs.levi_ops if torus]
    out = []
    for label, p in pieces:
        w = tuple((n, _target_weight(fs, _weight_of(op, p))) for n, op in tori)
        out.append((label or str(p), p, w))
    return out


def _label_inv(exps):
    return "*".join(f"g{i + 1}^{k}" if k > 1 else f"g{i + 1}" for i, k in enumerate(exps) if k) or "1"


def _nu_matches(fs, weight):
    if fs.w_weight is None:
        return True
    return all(fs.w_weight[n] == v for n, v in weight)


def candidate_degrees(fs: FSetting):
    """Candidates (degree, torus weight, weight-space dimension) up to degree_max."""
    if not (fs.lam.is_character and (fs.w_weight is None or fs.w_weight.is_character)):
        raise UnsupportedError("candidate search is implemented for characters only")
    out = []
    for d in _degrees(fs):
        groups = {}
        for label, p, w in _weighted_pieces(fs, d):
            if _nu_matches(fs, w):
                groups.setdefault(w, 0)
                groups[w] += 1
        for w, count in groups.items():
            out.append(Candidate(d, w, count))
    return out


def step4_reduce(fs: FSetting, degree: int, weight=None) -> ReducedSpace:
    """Restrict the ansatz before elimination.

    Torus directions of l' are imposed by keeping one weight space.  With
    invariant generators the remaining l' directions are already satisfied;
    otherwise they become explicit rows of the system.
    """
    pieces = _weighted_pieces(fs, degree) if fs.reduce else [
        (str(MPoly.monomial(e, fs.zetas)), MPoly.monomial(e, fs.zetas), None)
        for e in monomials_of_degree(len(fs.zetas), degree)]
    if weight is None:
        if fs.reduce:
            weights = {w for _, _, w in pieces if _nu_matches(fs, w)}
            if len(weights) > 1:
                raise DomainError(f"degree {degree} has several weights; pass one explicitly")
            weight = weights.pop() if weights else ()
        else:
            weight = ()
    if fs.reduce:
        chosen = [(lab, p) for lab, p, w in pieces if w == weight]
        if fs.setting.invariants is not None:
            rows = []
        else:
            rows = [n for n, op, torus in fs.levi_ops if not torus]
    else:
        chosen = [(lab, p) for lab, p, _ in pieces]
        rows = [n for n, _, _ in fs.levi_ops]
    return ReducedSpace(degree, tuple(weight), [p for _, p in chosen],
                        [lab for lab, _ in chosen], rows, fs.reduce)


def _nu_value(fs, name, weight):
    if fs.w_weight is not None:
        return fs.w_weight[name]
    wd = dict(weight)
    if name in wd:
        return wd[name]
    # non-torus Levi directions of l' lie in [l', l'], where a character vanishes
    return RatFunc.const(0, fs.params)


def _constraint_images(fs, space: ReducedSpace):
    """For each column, the list of constraint images (one polynomial per block)."""
    blocks = [(n, op, None) for n, op in fs.annihilators]
    levi = {n: op for n, op, _ in fs.levi_ops}
    for n in space.invariance_rows:
        blocks.append((n, levi[n], _nu_value(fs, n, space.weight)))
    cols = []
    for p in space.basis:
        imgs = []
        for _, op, shift in blocks:
            img = apply(op, p)
            if shift is not None and shift:
                img = img + p.scale(shift)
            imgs.append(img)
        cols.append(imgs)
    return [n for n, _, _ in blocks], cols


def _system(fs, space):
    names, cols = _constraint_images(fs, space)
    rows = []
    for b in range(len(names)):
        monos = sorted({e for col in cols for e in col[b].terms}, reverse=True)
        for e in monos:
            rows.append([_as_rf(col[b].terms.get(e, 0), fs.params) for col in cols])
    if not rows:
        return ExactMatrix([], len(space.basis))
    return ExactMatrix(rows)


def _as_rf(c, params):
    if isinstance(c, RatFunc):
        return c if c.vars == params else (RatFunc.const(c.constant_value(), params)
                                           if c.is_constant() else c.with_vars(params))
    return RatFunc.const(c, params)


def build_system(fs: FSetting, degree: int, weight=None) -> ExactMatrix:
    """Constraint matrix on the reduced ansatz for one degree."""
    if degree > fs.degree_max:
        raise DomainError(f"degree {degree} exceeds degree_max {fs.degree_max}")
    return _system(fs, step4_reduce(fs, degree, weight))


@dataclass
class SingularVector:
    psi: MPoly                      # over the zeta variables, RatFunc coefficients
    degree: int
    weight: tuple
    setting: FSetting = field(repr=False)
    multiplicity_report: dict = field(default_factory=dict)

    @property
    def params(self):
        return self.setting.params

    def coefficients(self):
        """(exponent, coefficient) pairs in descending grlex order."""
        return self.psi.sorted_terms()

    def specialize(self, assignment):
        return self.psi.map_coeffs(lambda c: c.specialize(assignment)
                                   if isinstance(c, RatFunc) else c)

    def to_json(self):
        return {
            "degree": self.degree,
            "variables": list(self.psi.vars),
            "params": list(self.params),
            "weight": {k: str(v) for k, v in self.weight},
            "monomials": [{"exponents": list(e), "coeff": str(c)}
                          for e, c in self.coefficients()],
            "multiplicity_report": self.multiplicity_report,
        }

    @staticmethod
    def psi_from_json(data):
        vars = tuple(data["variables"])
        params = tuple(data["params"])
        terms = {}
        for m in data["monomials"]:
            c = parse_polynomial(m["coeff"], params)
            terms[tuple(m["exponents"])] = RatFunc.poly(c)
        return MPoly(vars, terms)


def _normalize(fs, space, vec):
    """psi = sum v_j basis_j, scaled to primitive integral parameter polynomials."""
    zetas = fs.zetas
    acc = {}
    for v, p in zip(vec, space.basis):
        if not v:
            continue
        for e, c in p.terms.items():
            t = v * c
            acc[e] = acc[e] + t if e in acc else t
    acc = {e: c for e, c in acc.items() if c}
    order = sorted(acc, key=lambda e: (sum(e), e), reverse=True)
    nums = [acc[e].num for e in order]
    dens = {acc[e].den for e in order}
    if any(not d.is_constant() for d in dens):
        raise ArithmeticError("kernel vector is not polynomial in the parameters")
    nums = [acc[e].num.scale(1 / acc[e].den.constant_coeff()) for e in order]
    scaled, _ = primitive_normalize(nums)
    return MPoly(zetas, {e: RatFunc.poly(c) for e, c in zip(order, scaled)})


def check_singular(fs, psi, weight):
    """Residual names for which psi fails (empty list when psi is singular)."""
    bad = []
    for n, op in fs.annihilators:
        if apply(op, psi):
            bad.append(n)
    for n, op, _ in fs.levi_ops:
        img = apply(op, psi) + psi.scale(_nu_value(fs, n, weight))
        if img:
            bad.append(n)
    return bad


def _solve_candidate(fs, cand):
    space = step4_reduce(fs, cand.degree, cand.weight)
    m = _system(fs, space)
    kernel = nullspace(m) if space.dimension else []
    report = {
        "degree": cand.degree,
        "ansatz_dimension": space.dimension,
        "rows": m.rows,
        "kernel_dimension": len(kernel),
        "anomaly": len(kernel) > 1,
    }
    if len(kernel) > 1:
        log.warning("kernel of dimension %d at degree %d (expected at most 1)",
                    len(kernel), cand.degree)
    out = []
    for vec in kernel:
        psi = _normalize(fs, space, vec)
        bad = check_singular(fs, psi, cand.weight)
        if bad:
            raise ArithmeticError(f"kernel vector fails direct check on {bad}")
        out.append(SingularVector(psi, cand.degree, cand.weight, fs, report))
    log.info("degree %d: ansatz %d, kernel %d", cand.degree, space.dimension, len(kernel))
    return report, out


def solve_singular_vectors(fs: FSetting, jobs: int = 1, with_reports=False):
    """Singular vectors for every candidate, in ascending degree order.

    Candidates are independent and run on ``jobs`` threads; results are
    merged in candidate order so output never depends on scheduling.
    """
    cands = candidate_degrees(fs)
    # touch the cached operators before threads share them
    fs.annihilators, fs.levi_ops
    if jobs > 1 and len(cands) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: _solve_candidate(fs, c), cands))
    else:
        results = [_solve_candidate(fs, c) for c in cands]
    vectors = [v for _, vs in results for v in vs]
    if with_reports:
        return vectors, [r for r, _ in results]
    return vectors


def kernel_span_agrees(fs: FSetting, degree: int) -> bool:
    """Compare kernels with and without the step-4 reduction at one degree."""
    full = FSetting(fs.setting, fs.lam, fs.w_weight, fs.degree_max, fs.parity, reduce=False)
    for cand in candidate_degrees(fs):
        if cand.degree != degree:
            continue
        reduced = [v.psi for v in _solve_candidate(fs, cand)[1]]
        space = step4_reduce(full, degree, cand.weight)
        kern = nullspace(_system(full, space)) if space.dimension else []
        if not _same_span(reduced, [_normalize(full, space, v) for v in kern], fs.params):
            return False
    return True


def _same_span(a, b, params):
    if len(a) != len(b):
        return False
    if not a:
        return True
    monos = sorted({e for p in a + b for e in p.terms})
    zero = RatFunc.const(0, params)
    rows = [[_as_rf(p.terms.get(e, zero), params) for e in monos] for p in a + b]
    return ExactMatrix(rows[:len(a)]).rank() == ExactMatrix(rows).rank() == len(a)
