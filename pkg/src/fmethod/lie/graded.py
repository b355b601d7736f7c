"""Lie algebras by structure constants with a |1|-grading and a marked subalgebra."""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

from ..algebra.matrix import ExactMatrix, solve_rational
from ..algebra.rational import format_rat, parse_rat
from ..errors import StructuralError

GRADES = (-1, 0, 1)


def _zero_like(v):
    for c in v:
        if hasattr(c, "vars"):
            return c * 0
    return Fraction(0)


def bracket_with(structure, dim, x, y):
    """Contract ``x`` and ``y`` against the structure constants.

    ``x`` and ``y`` are coefficient sequences; entries may be rationals,
    polynomials or rational functions.
    """
    out = [None] * dim
    nz_x = [(i, a) for i, a in enumerate(x) if a]
    nz_y = [(j, b) for j, b in enumerate(y) if b]
    for i, a in nz_x:
        for j, b in nz_y:
            if i == j:
                continue
            consts = structure.get((i, j))
            if not consts:
                continue
            ab = a * b
            for k, c in consts:
                t = ab * c
                out[k] = t if out[k] is None else out[k] + t
    zero = _zero_like(list(x) + list(y))
    return tuple(zero if v is None else v for v in out)


class GradedLie:
    """A Lie algebra g = n_- + l + n_+ given by structure constants.

    Basis elements carry a grade in {-1, 0, 1}.  ``subalgebra`` lists the
    basis vectors of the marked subalgebra g' (each homogeneous), with
    ``sub_names`` as their labels.  ``coords`` names the linear coordinates
    on n_- (one per grade -1 basis element, in basis order) and
    ``sub_coords`` those on n'_-.

    Every construction re-validates antisymmetry, Jacobi, the grading and
    closure of g'.
    """

    def __init__(self, names, grades, brackets, subalgebra=None, sub_names=None,
                 coords=None, sub_coords=None, label="custom", realization=None):
        self.names = tuple(names)
        self.grades = tuple(int(g) for g in grades)
        self.dim = len(self.names)
        self.label = label
        if len(self.grades) != self.dim:
            raise StructuralError("names and grades differ in length")
        if len(set(self.names)) != self.dim:
            raise StructuralError("duplicate basis names")
        if any(g not in GRADES for g in self.grades):
            raise StructuralError(f"grades must lie in {GRADES}")
        self.structure = {}
        for (i, j), coeffs in brackets.items():
            if i == j:
                if any(coeffs.values()):
                    raise StructuralError(f"[{self.names[i]}, {self.names[i]}] must vanish")
                continue
            row = tuple((k, Fraction(c)) for k, c in sorted(coeffs.items()) if c)
            if not row:
                continue
            if (j, i) in self.structure:
                expect = tuple((k, -c) for k, c in self.structure[(j, i)])
                if expect != row:
                    raise StructuralError(
                        f"bracket of {self.names[i]}, {self.names[j]} is not antisymmetric")
            self.structure[(i, j)] = row
            self.structure[(j, i)] = tuple((k, -c) for k, c in row)
        self.n_minus = tuple(i for i, g in enumerate(self.grades) if g == -1)
        self.levi = tuple(i for i, g in enumerate(self.grades) if g == 0)
        self.n_plus = tuple(i for i, g in enumerate(self.grades) if g == 1)
        if subalgebra is None:
            subalgebra = [self.basis_vector(i) for i in range(self.dim)]
        self.subalgebra = tuple(tuple(Fraction(c) for c in v) for v in subalgebra)
        self.sub_names = tuple(sub_names) if sub_names else tuple(
            f"s{i + 1}" for i in range(len(self.subalgebra)))
        self.coords = tuple(coords) if coords else tuple(
            f"x{i + 1}" for i in range(len(self.n_minus)))
        self.realization = realization
        self.validate()
        self.sub_grades = tuple(self.grade_of(v) for v in self.subalgebra)
        n_sub_minus = sum(1 for g in self.sub_grades if g == -1)
        self.sub_coords = tuple(sub_coords) if sub_coords else tuple(
            f"t{i + 1}" for i in range(n_sub_minus))
        if len(self.coords) != len(self.n_minus):
            raise StructuralError("need one coordinate label per grade -1 element")
        if len(self.sub_coords) != n_sub_minus:
            raise StructuralError("need one subalgebra coordinate per grade -1 element of g'")

    # basic element handling

    def basis_vector(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def element(self, name):
        if name in self.names:
            return self.basis_vector(self.names.index(name))
        if name in self.sub_names:
            return self.subalgebra[self.sub_names.index(name)]
        raise StructuralError(f"unknown element {name!r}")

    def bracket(self, x, y):
        if len(x) != self.dim or len(y) != self.dim:
            raise StructuralError(
                f"element lengths {len(x)}, {len(y)} do not match dim {self.dim}")
        return bracket_with(self.structure, self.dim, x, y)

    def grade_of(self, v):
        gs = {self.grades[i] for i, c in enumerate(v) if c}
        if len(gs) > 1:
            raise StructuralError(f"element {self.format(v)} is not homogeneous")
        return gs.pop() if gs else 0

    def component(self, v, grade):
        return tuple(c if self.grades[i] == grade else c * 0 for i, c in enumerate(v))

    def format(self, v):
        parts = []
        for i, c in enumerate(v):
            if c:
                parts.append(f"({c})*{self.names[i]}")
        return " + ".join(parts) or "0"

    # validation

    def validate(self):
        d = self.dim
        for (i, j), row in self.structure.items():
            target = self.grades[i] + self.grades[j]
            for k, _ in row:
                if self.grades[k] != target:
                    raise StructuralError(
                        f"[{self.names[i]}, {self.names[j]}] leaves grade {target}")
        for i, j, k in combinations(range(d), 3):
            ei, ej, ek = (self.basis_vector(t) for t in (i, j, k))
            s = [a + b + c for a, b, c in zip(
                self.bracket(ei, self.bracket(ej, ek)),
                self.bracket(ej, self.bracket(ek, ei)),
                self.bracket(ek, self.bracket(ei, ej)))]
            if any(s):
                raise StructuralError(
                    f"Jacobi fails on {self.names[i]}, {self.names[j]}, {self.names[k]}")
        for v in self.subalgebra:
            if len(v) != d:
                raise StructuralError("subalgebra vector has the wrong length")
            self.grade_of(v)
        if ExactMatrix([list(v) for v in self.subalgebra]).rank() != len(self.subalgebra):
            raise StructuralError("subalgebra vectors are linearly dependent")
        for a, b in combinations(self.subalgebra, 2):
            if self.sub_coordinates(self.bracket(a, b)) is None:
                raise StructuralError("marked subalgebra is not closed under the bracket")

    def sub_coordinates(self, v):
        """Coordinates of ``v`` in the subalgebra basis, or None if outside."""
        return solve_rational(self.subalgebra, v)

    # derived data

    def subalgebra_lie(self):
        """g' as a GradedLie in its own basis (no further marked subalgebra)."""
        m = len(self.subalgebra)
        brackets = {}
        for a, b in combinations(range(m), 2):
            c = self.sub_coordinates(self.bracket(self.subalgebra[a], self.subalgebra[b]))
            brackets[(a, b)] = {k: x for k, x in enumerate(c) if x}
        real = None
        if self.realization is not None:
            mats, blocks = self.realization
            sub_mats = []
            for v in self.subalgebra:
                acc = None
                for c, mat in zip(v, mats):
                    if c:
                        acc = mat * c if acc is None else acc + mat * c
                sub_mats.append(acc)
            real = (tuple(sub_mats), blocks)
        return GradedLie(self.sub_names, self.sub_grades, brackets,
                         coords=self.sub_coords, label=f"{self.label}'", realization=real)

    def restriction_map(self):
        """Images of the n_- coordinates as linear forms in the n'_- coordinates.

        A point sum_a t_a v_a of n'_- has n_- coordinate
        x_i = sum_a t_a (v_a)_i.
        """
        from ..algebra.mpoly import MPoly
        minus = [v for v, g in zip(self.subalgebra, self.sub_grades) if g == -1]
        images = {}
        for pos, i in enumerate(self.n_minus):
            p = MPoly.zero(self.sub_coords)
            for t, v in zip(self.sub_coords, minus):
                if v[i]:
                    p = p + MPoly.var(t, self.sub_coords).scale(v[i])
            images[self.coords[pos]] = p
        return images

    def ad_trace_on_n_plus(self, v):
        """Trace of ad(v) restricted to n_+ (v in l)."""
        tr = Fraction(0)
        for k in self.n_plus:
            tr += self.bracket(v, self.basis_vector(k))[k]
        return tr

    # serialization

    def to_json(self):
        in_sub = set()
        for v in self.subalgebra:
            nz = [i for i, c in enumerate(v) if c]
            if len(nz) == 1 and v[nz[0]] == 1:
                in_sub.add(nz[0])
        brackets = []
        for (i, j), row in sorted(self.structure.items()):
            if i < j:
                brackets.append({"i": i, "j": j,
                                 "coeffs": {str(k): format_rat(c) for k, c in row}})
        return {
            "basis": [{"name": n, "grade": g, "in_subalgebra": i in in_sub}
                      for i, (n, g) in enumerate(zip(self.names, self.grades))],
            "brackets": brackets,
            "subalgebra": [{"name": n, "vector": [format_rat(c) for c in v]}
                           for n, v in zip(self.sub_names, self.subalgebra)],
            "coordinates": list(self.coords),
            "sub_coordinates": list(self.sub_coords),
            "label": self.label,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data):
        basis = data["basis"]
        names = [b["name"] for b in basis]
        grades = [b["grade"] for b in basis]
        brackets = {}
        for entry in data.get("brackets", []):
            brackets[(int(entry["i"]), int(entry["j"]))] = {
                int(k): parse_rat(v) for k, v in entry["coeffs"].items()}
        if "subalgebra" in data:
            sub = [[parse_rat(c) for c in s["vector"]] for s in data["subalgebra"]]
            sub_names = [s["name"] for s in data["subalgebra"]]
        else:
            idx = [i for i, b in enumerate(basis) if b.get("in_subalgebra")]
            sub = [[Fraction(int(j == i)) for j in range(len(names))] for i in idx]
            sub_names = [names[i] for i in idx]
        return cls(names, grades, brackets, sub, sub_names,
                   coords=data.get("coordinates"), sub_coords=data.get("sub_coordinates"),
                   label=data.get("label", "custom"))

    @classmethod
    def from_matrices(cls, names, grades, matrices, blocks=None, **kw):
        """Structure constants read off a faithful matrix realization."""
        flat = [[x for row in m.entries for x in row] for m in matrices]
        brackets = {}
        for i, j in combinations(range(len(matrices)), 2):
            c = matrices[i] * matrices[j] - matrices[j] * matrices[i]
            coords = solve_rational(flat, [x for row in c.entries for x in row])
            if coords is None:
                raise StructuralError(
                    f"[{names[i]}, {names[j]}] leaves the span of the given matrices")
            brackets[(i, j)] = {k: x for k, x in enumerate(coords) if x}
        real = (tuple(matrices), tuple(blocks)) if blocks else None
        return cls(names, grades, brackets, realization=real, **kw)

    def __repr__(self):
        return (f"GradedLie({self.label!r}, dim={self.dim}, n_plus={len(self.n_plus)}, "
                f"sub_dim={len(self.subalgebra)})")
