"""Evolution algebras over exact fields and their automorphism points.

An evolution algebra has a natural basis e_1..e_n with e_i e_j = 0 for
i != j; the structure matrix omega stores in omega[k][j] the coefficient
of e_k in e_j^2.  Automorphism matrices use the row convention: row i of
M holds the coordinates of the image of e_i, so "apply f, then g" is the
matrix product M_f M_g and the parameterizations of the catalog Hopf
algebras become group homomorphisms on the nose.

The two-dimensional families:

    A1        e1^2 = e1,           e2^2 = e2
    A2(a)     e1^2 = e2,           e2^2 = a e1          (a != 0)
    A3(a)     e1^2 = e1,           e2^2 = a e1 + e2     (a != 0)
    A4(a)     e1^2 = a e2,         e2^2 = e1 + e2       (a != 0)
    A5ab(a,b) e1^2 = e1 + a e2,    e2^2 = b e1 + e2     (a,b != 0, ab != 1)
    A5        e1^2 = e1 - e2,      e2^2 = -e1 + e2
    A6        e1^2 = 0,            e2^2 = e1
    A7        e1^2 = e1,           e2^2 = 0
    A8(a)     e1^2 = e1,           e2^2 = a e1          (a != 0)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .fields import FieldElement, FieldError, FieldSpec
from .polynomials import Polynomial, VariableSet


class EvolutionError(ValueError):
    pass


@dataclass(frozen=True)
class EvolutionAlgebra:
    field: FieldSpec
    dim: int
    omega: tuple  # omega[k][j]: coefficient of e_k in e_j^2
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.omega) != self.dim or any(len(r) != self.dim for r in self.omega):
            raise EvolutionError("structure matrix shape must be dim x dim")

    def omega_entry(self, k: int, j: int) -> FieldElement:
        return FieldElement(self.field, self.omega[k][j])

    def basis_vector(self, i: int) -> "AlgebraElement":
        coords = [self.field.zero_raw] * self.dim
        coords[i] = self.field.one_raw
        return AlgebraElement(self, tuple(coords))

    def element(self, coords) -> "AlgebraElement":
        raw = tuple(self.field.coerce_raw(c) for c in coords)
        if len(raw) != self.dim:
            raise EvolutionError("coordinate length mismatch")
        return AlgebraElement(self, raw)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "dim": self.dim,
            "omega": [[self.field.raw_to_str(c) for c in row] for row in self.omega],
            "label": self.label,
        }


@dataclass(frozen=True)
class AlgebraElement:
    algebra: EvolutionAlgebra
    coords: tuple

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        f = self.algebra.field
        return AlgebraElement(
            self.algebra, tuple(f.add_raw(a, b) for a, b in zip(self.coords, other.coords))
        )

    def scale(self, c) -> "AlgebraElement":
        f = self.algebra.field
        c = f.coerce_raw(c)
        return AlgebraElement(self.algebra, tuple(f.mul_raw(c, v) for v in self.coords))

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self.algebra, self, other)

    def is_zero(self) -> bool:
        return not any(self.coords)


def multiply(A: EvolutionAlgebra, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    """Evolution product: cross terms of distinct basis vectors vanish."""
    f = A.field
    out = [f.zero_raw] * A.dim
    for j in range(A.dim):
        uv = f.mul_raw(u.coords[j], v.coords[j])
        if not uv:
            continue
        for k in range(A.dim):
            if A.omega[k][j]:
                out[k] = f.add_raw(out[k], f.mul_raw(uv, A.omega[k][j]))
    return AlgebraElement(A, tuple(out))


def is_perfect(A: EvolutionAlgebra) -> bool:
    return bool(linalg.det([list(r) for r in A.omega], A.field))


def is_associative(A: EvolutionAlgebra) -> bool:
    basis = [A.basis_vector(i) for i in range(A.dim)]
    for u in basis:
        for v in basis:
            for w in basis:
                if ((u * v) * w).coords != (u * (v * w)).coords:
                    return False
    return True


# ---------------------------------------------------------------------------
# family constructors


def family(
    name: str,
    field: FieldSpec,
    alpha=None,
    beta=None,
) -> EvolutionAlgebra:
    f = field
    zero, one = f.zero_raw, f.one_raw

    def need_unit(value, what: str):
        v = f.coerce_raw(value)
        if not v:
            raise EvolutionError(f"{what} must be a nonzero field element")
        return v

    if name == "A1":
        om = ((one, zero), (zero, one))
        label = "A1"
    elif name == "A2":
        a = need_unit(alpha, "alpha")
        om = ((zero, a), (one, zero))
        label = f"A2({f.raw_to_str(a)})"
    elif name == "A3":
        a = need_unit(alpha, "alpha")
        om = ((one, a), (zero, one))
        label = f"A3({f.raw_to_str(a)})"
    elif name == "A4":
        a = need_unit(alpha, "alpha")
        om = ((zero, one), (a, one))
        label = f"A4({f.raw_to_str(a)})"
    elif name == "A5ab":
        a = need_unit(alpha, "alpha")
        b = need_unit(beta, "beta")
        if f.mul_raw(a, b) == one:
            raise EvolutionError("A5ab requires alpha*beta != 1")
        om = ((one, b), (a, one))
        label = f"A5ab({f.raw_to_str(a)},{f.raw_to_str(b)})"
    elif name == "A5":
        m1 = f.neg_raw(one)
        om = ((one, m1), (m1, one))
        label = "A5"
    elif name == "A6":
        om = ((zero, one), (zero, zero))
        label = "A6"
    elif name == "A7":
        om = ((one, zero), (zero, zero))
        label = "A7"
    elif name == "A8":
        a = need_unit(alpha, "alpha")
        om = ((one, a), (zero, zero))
        label = f"A8({f.raw_to_str(a)})"
    else:
        raise EvolutionError(f"unknown family {name!r}")
    return EvolutionAlgebra(field, 2, om, label)


def algebra_from_json(doc: dict, field: Optional[FieldSpec] = None) -> EvolutionAlgebra:
    """{"family": "A2", "alpha": "1"} or {"field":..., "dim": n, "omega": [[...]]}."""
    if "family" in doc:
        f = field or FieldSpec.from_json(doc["field"]) if "field" in doc or field else None
        if f is None:
            raise EvolutionError("family spec needs a field")
        return family(doc["family"], f, doc.get("alpha"), doc.get("beta"))
    f = field or FieldSpec.from_json(doc["field"])
    om = tuple(tuple(f.coerce_raw(c) for c in row) for row in doc["omega"])
    return EvolutionAlgebra(f, int(doc["dim"]), om, doc.get("label", ""))


# ---------------------------------------------------------------------------
# Lemma-style structural classification (omega with special zero patterns)


def classify_special(A: EvolutionAlgebra) -> Optional[str]:
    """Identify A among zero/A1/A6/A7 from the zero pattern of omega.

    Case (i): if the second column of omega vanishes (e2^2 = 0), the
    algebra is the zero-product algebra, or isomorphic to A6 or A7.
    Case (ii): if omega[0][0] != 0 and omega[1][0] = omega[0][1] = 0, it
    is isomorphic to A1 or A7.
    """
    if A.dim != 2:
        raise EvolutionError("classification implemented for dimension 2")
    om = A.omega
    if not om[0][1] and not om[1][1]:
        if not om[0][0] and not om[1][0]:
            return "zero"
        if not om[0][0]:
            return "A6"
        return "A7"
    if om[0][0] and not om[1][0] and not om[0][1]:
        return "A1" if om[1][1] else "A7"
    return None


# ---------------------------------------------------------------------------
# automorphism systems and rational points


@dataclass
class AutSystem:
    """Polynomial equations for a generic automorphism matrix.

    Unknown m_ij is the coefficient of e_j in the image of e_i (for
    dim 2 the unknowns are named a, b, c, d in row order).  A solution
    over a field is an automorphism iff additionally det != 0; the
    inverse witness u of the raw system is replaced by that check.
    """

    algebra: EvolutionAlgebra
    varset: VariableSet
    unknowns: tuple  # unknown names, row-major
    equations: List[Polynomial]
    det_condition: Polynomial


def aut_system(A: EvolutionAlgebra) -> AutSystem:
    n = A.dim
    f = A.field
    if n == 2:
        names = ("a", "b", "c", "d")
    else:
        names = tuple(f"m{i}{j}" for i in range(n) for j in range(n))
    vs = VariableSet.plain(names)
    m = [[Polynomial.variable(vs, f, names[i * n + j]) for j in range(n)] for i in range(n)]
    zero = Polynomial.zero(vs, f)

    def image_of_square(i: int) -> list:
        # f(e_i^2) = sum_j omega[j][i] f(e_j), coordinates in e_k
        out = [zero] * n
        for j in range(n):
            w = A.omega[j][i]
            if not w:
                continue
            for k in range(n):
                out[k] = out[k] + m[j][k].scalar_mul(w)
        return out

    def square_of_image(i: int) -> list:
        # f(e_i)^2 = sum_j m[i][j]^2 e_j^2
        out = [zero] * n
        for j in range(n):
            sq = m[i][j] * m[i][j]
            for k in range(n):
                if A.omega[k][j]:
                    out[k] = out[k] + sq.scalar_mul(A.omega[k][j])
        return out

    eqs: List[Polynomial] = []
    for i in range(n):
        lhs = image_of_square(i)
        rhs = square_of_image(i)
        for k in range(n):
            eq = lhs[k] - rhs[k]
            if not eq.is_zero():
                eqs.append(eq)
    for i in range(n):
        for j in range(i + 1, n):
            # f(e_i) f(e_j) = sum_l m[i][l] m[j][l] e_l^2
            out = [zero] * n
            for l in range(n):
                prod = m[i][l] * m[j][l]
                for k in range(n):
                    if A.omega[k][l]:
                        out[k] = out[k] + prod.scalar_mul(A.omega[k][l])
            for k in range(n):
                if not out[k].is_zero():
                    eqs.append(out[k])

    if n == 2:
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    else:
        det = _symbolic_det(m, vs, f)
    return AutSystem(A, vs, names, eqs, det)


def _symbolic_det(m, vs, f) -> Polynomial:
    n = len(m)
    acc = Polynomial.zero(vs, f)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = Polynomial.constant(vs, f, sign)
        for i in range(n):
            term = term * m[i][perm[i]]
        acc = acc + term
    return acc


def apply_matrix(A: EvolutionAlgebra, M: Sequence[Sequence], u: AlgebraElement) -> AlgebraElement:
    f = A.field
    out = [f.zero_raw] * A.dim
    for i in range(A.dim):
        if not u.coords[i]:
            continue
        for k in range(A.dim):
            out[k] = f.add_raw(out[k], f.mul_raw(u.coords[i], M[i][k]))
    return AlgebraElement(A, tuple(out))


def is_automorphism(A: EvolutionAlgebra, M: Sequence[Sequence]) -> bool:
    """Direct check: bijective and multiplicative on the natural basis."""
    f = A.field
    if not linalg.det([list(r) for r in M], f):
        return False
    basis = [A.basis_vector(i) for i in range(A.dim)]
    images = [apply_matrix(A, M, e) for e in basis]
    for i in range(A.dim):
        lhs = apply_matrix(A, M, basis[i] * basis[i])
        if lhs.coords != (images[i] * images[i]).coords:
            return False
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            if not (images[i] * images[j]).is_zero():
                return False
    return True


def aut_points(
    A: EvolutionAlgebra, field: Optional[FieldSpec] = None, max_candidates: int = 10**8
) -> List[tuple]:
    """All automorphism matrices of A over a finite field, sorted.

    Enumerates the full coefficient grid (numpy-filtered on the
    polynomial system), then re-verifies every survivor directly with
    exact arithmetic, independent of the solver path.
    """
    field = field or A.field
    if not field.is_finite:
        raise FieldError("aut_points needs a finite field; pick GF(p)")
    if field != A.field:
        A = EvolutionAlgebra(
            field,
            A.dim,
            tuple(tuple(field.coerce_raw(c) for c in row) for row in A.omega),
            A.label,
        )
    system = aut_system(A)
    p = field.characteristic
    k = A.dim * A.dim
    if p**k > max_candidates:
        raise EvolutionError(f"grid {p}^{k} exceeds the candidate bound {max_candidates}")
    candidates = _grid_solutions(system.equations, system.det_condition, k, p)
    out = []
    for tup in candidates:
        M = tuple(tuple(tup[i * A.dim + j] for j in range(A.dim)) for i in range(A.dim))
        if not is_automorphism(A, M):
            raise EvolutionError(f"enumeration produced a non-automorphism {M}")
        out.append(M)
    out.sort()
    # group sanity: enumeration must return a closed set
    group_order(A, out)
    return out


def _eval_on_grid(poly: Polynomial, vals: list, p: int):
    acc = None
    for m, c in poly.terms.items():
        term = np.full_like(vals[0], int(c) % p)
        for i, e in enumerate(m):
            if e:
                v = vals[i]
                for _ in range(e):
                    term = (term * v) % p
        acc = term if acc is None else (acc + term) % p
    if acc is None:
        return np.zeros_like(vals[0])
    return acc % p


def _grid_solutions(equations, det_poly, k: int, p: int):
    """Tuples in GF(p)^k solving all equations with det != 0."""
    shape = (p,) * (k - 1)
    grids = np.meshgrid(*[np.arange(p, dtype=np.int64)] * (k - 1), indexing="ij")
    sols = []
    for v0 in range(p):
        vals = [np.full(shape, v0, dtype=np.int64)] + [g for g in grids]
        mask = _eval_on_grid(det_poly, vals, p) != 0
        for eq in equations:
            if not mask.any():
                break
            mask &= _eval_on_grid(eq, vals, p) == 0
        for idx in np.argwhere(mask):
            sols.append((v0,) + tuple(int(g[tuple(idx)]) for g in grids))
    return sols


def group_order(A: EvolutionAlgebra, points: Sequence[tuple]) -> int:
    """|points| with a closure certificate under composition and inverse."""
    f = A.field
    index = set(points)
    for M in points:
        inv = linalg.invert([list(r) for r in M], f)
        if inv is None or tuple(tuple(r) for r in inv) not in index:
            raise EvolutionError("automorphism set is not closed under inverses")
        for N in points:
            prod = tuple(tuple(r) for r in linalg.mat_mul([list(r) for r in M], [list(r) for r in N], f))
            if prod not in index:
                raise EvolutionError("automorphism set is not closed under composition")
    return len(points)


def aut_report(A: EvolutionAlgebra, field: FieldSpec) -> dict:
    pts = aut_points(A, field)
    return {
        "algebra": A.label or A.to_json(),
        "field": field.to_json(),
        "order": len(pts),
        "matrices": [[[A.field.raw_to_str(c) for c in row] for row in M] for M in pts],
    }
