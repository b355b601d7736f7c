"""Built-in settings: sl2 + sl2 over the diagonal, and the conformal pair
so(n+2) over so(n+1), both from explicit matrix realizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.matrix import ExactMatrix
from ..algebra.mpoly import MPoly
from ..errors import StructuralError
from .graded import GradedLie


def _mat(n, *pieces):
    """Sum of coefficient * E_ij for pieces (coefficient, i, j)."""
    m = [[Fraction(0)] * n for _ in range(n)]
    for c, i, j in pieces:
        m[i][j] += c
    return ExactMatrix(m)


@dataclass(frozen=True)
class Setting:
    """A validated GradedLie together with the data the solver needs."""

    name: str
    lie: GradedLie
    params: tuple
    # invariant generators of the l'-action on Pol(n_+), as polynomials in
    # the zeta variables (None when torus weights already give the reduction)
    invariants: tuple = None
    size: dict = field(default_factory=dict)
    # Levi basis element -> parameter carrying lambda on it
    weight_params: dict = field(default_factory=dict)

    def lambda_weight(self, values=None):
        """lambda as a RepWeight.

        ``values`` maps parameter names to fixed rationals; the remaining
        parameters stay symbolic and become the weight's parameter list.
        """
        from ..algebra.ratfunc import RatFunc
        from .action import RepWeight
        values = values or {}
        params = tuple(p for p in self.params if values.get(p) is None)
        vals = {}
        for name, param in self.weight_params.items():
            v = values.get(param)
            vals[name] = RatFunc.symbol(param, params) if v is None else v
        return RepWeight(self.lie, vals, params)


def rankin_cohen_lie() -> GradedLie:
    # factor one acts on indices (0, 2), factor two on (1, 3); blocks (2, 2)
    n = 4
    mats = [
        _mat(n, (1, 0, 2)),                 # e1
        _mat(n, (1, 0, 0), (-1, 2, 2)),     # h1
        _mat(n, (1, 2, 0)),                 # f1
        _mat(n, (1, 1, 3)),                 # e2
        _mat(n, (1, 1, 1), (-1, 3, 3)),     # h2
        _mat(n, (1, 3, 1)),                 # f2
    ]
    names = ("e1", "h1", "f1", "e2", "h2", "f2")
    grades = (1, 0, -1, 1, 0, -1)
    sub = [
        (1, 0, 0, 1, 0, 0),
        (0, 1, 0, 0, 1, 0),
        (0, 0, 1, 0, 0, 1),
    ]
    return GradedLie.from_matrices(names, grades, mats, blocks=(2, 2),
                                   subalgebra=sub, sub_names=("E", "H", "F"),
                                   coords=("x", "y"), sub_coords=("t",),
                                   label="rankin_cohen")


def rankin_cohen() -> Setting:
    return Setting("rankin_cohen", rankin_cohen_lie(), ("k1", "k2"),
                   weight_params={"h1": "k1", "h2": "k2"})


def juhl_lie(n: int) -> GradedLie:
    """so(n+2) with blocks (1, n, 1):

    A = [[a, u^T, 0], [v, M, -u], [0, -v^T, -a]]

    P_i has v = e_i, D has a = 1, M_ij = E_ij - E_ji, K_i has u = e_i.
    """
    if n < 2:
        raise StructuralError(f"the conformal setting needs n >= 2, got {n}")
    size = n + 2
    last = n + 1
    mats, names, grades = [], [], []
    for i in range(1, n + 1):
        mats.append(_mat(size, (1, i, 0), (-1, last, i)))
        names.append(f"P{i}")
        grades.append(-1)
    mats.append(_mat(size, (1, 0, 0), (-1, last, last)))
    names.append("D")
    grades.append(0)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            mats.append(_mat(size, (1, i, j), (-1, j, i)))
            names.append(f"M{i}_{j}")
            grades.append(0)
    for i in range(1, n + 1):
        mats.append(_mat(size, (1, 0, i), (-1, i, last)))
        names.append(f"K{i}")
        grades.append(1)
    keep = [k for k, nm in enumerate(names)
            if nm == "D" or (nm[0] in "PK" and int(nm[1:]) < n)
            or (nm[0] == "M" and int(nm.split("_")[1]) < n)]
    sub = [tuple(int(j == k) for j in range(len(names))) for k in keep]
    coords = tuple(f"x{i}" for i in range(1, n + 1))
    return GradedLie.from_matrices(names, grades, mats, blocks=(1, n, 1),
                                   subalgebra=sub, sub_names=tuple(names[k] for k in keep),
                                   coords=coords, sub_coords=coords[:-1],
                                   label=f"juhl({n})")


def juhl(n: int) -> Setting:
    lie = juhl_lie(n)
    zetas = tuple(f"zeta{i}" for i in range(1, n + 1))
    invariants = None
    if n >= 3:
        # so(n-1) rotates zeta_1..zeta_{n-1}; its invariants are generated by
        # |zeta'|^2 and zeta_n
        q = MPoly.zero(zetas)
        for z in zetas[:-1]:
            q = q + MPoly.var(z, zetas) ** 2
        invariants = (q, MPoly.var(zetas[-1], zetas))
    return Setting("juhl", lie, ("lam",), invariants, {"n": n}, {"D": "lam"})


def builtin_setting(name: str, n: int | None = None) -> Setting:
    if name == "rankin_cohen":
        return rankin_cohen()
    if name == "juhl":
        if n is None:
            raise StructuralError("the juhl setting needs a dimension n")
        return juhl(int(n))
    raise StructuralError(f"unknown setting {name!r}; expected rankin_cohen or juhl")


def sl2() -> GradedLie:
    mats = [_mat(2, (1, 0, 1)), _mat(2, (1, 0, 0), (-1, 1, 1)), _mat(2, (1, 1, 0))]
    return GradedLie.from_matrices(("e", "h", "f"), (1, 0, -1), mats, blocks=(1, 1),
                                   coords=("x",), label="sl2")
