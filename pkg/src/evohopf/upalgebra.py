"""Universal unital p-algebras of evolution algebras, and their tight parts.

For an n-dimensional evolution algebra with structure matrix omega and a
product law p(a,b) = l0*ab + l1*ab* + l2*a*b + l3*a*b*, the universal
algebra is K[x_1..x_n, x_1*..x_n*] modulo the ideal *-generated by
p(x_i, x_j) for i != j and p(x_i, x_i) - sum_k omega[k][i] x_k.  The
natural map rho sends e_i to the class of x_i; it is faithful exactly
when those classes are linearly independent, which a Groebner normal
form decides.

The tight algebra is the span of the classes of all monomials of degree
at least one, computed by closing the rho-images and their stars under
products.  It may carry its own unit even when the ambient 1 is not in
the span.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .evolution import EvolutionAlgebra, EvolutionError, family, is_associative, is_perfect
from .fields import FieldError, FieldSpec
from .groebner import (
    GroebnerBasis,
    QuotientAlgebra,
    StarIdeal,
    linear_dependence_over_field,
    multiplication_table,
)
from .polynomials import Polynomial, PolynomialError, VariableSet, parse_polynomial


@dataclass(frozen=True)
class ProductLaw:
    """Coefficients (l0, l1, l2, l3) of ab, ab*, a*b, a*b*."""

    field: FieldSpec
    coeffs: tuple

    @staticmethod
    def make(field: FieldSpec, values) -> "ProductLaw":
        vals = tuple(field.coerce_raw(v) for v in values)
        if len(vals) != 4:
            raise ValueError("a product law has exactly four coefficients")
        return ProductLaw(field, vals)

    @property
    def lam(self):
        """Sum of the four coefficients (collapse indicator)."""
        acc = self.field.zero_raw
        for c in self.coeffs:
            acc = self.field.add_raw(acc, c)
        return acc

    def apply(self, u: Polynomial, v: Polynomial) -> Polynomial:
        l0, l1, l2, l3 = self.coeffs
        us, vs = u.star(), v.star()
        return (
            (u * v).scalar_mul(l0)
            + (u * vs).scalar_mul(l1)
            + (us * v).scalar_mul(l2)
            + (us * vs).scalar_mul(l3)
        )

    def label(self) -> str:
        return "(" + ",".join(self.field.raw_to_str(c) for c in self.coeffs) + ")"

    def to_json(self) -> list:
        return [self.field.raw_to_str(c) for c in self.coeffs]


def base_variable_names(n: int) -> tuple:
    return ("x", "y") if n == 2 else tuple(f"x{i + 1}" for i in range(n))


@dataclass
class UniversalPAlgebra:
    source: EvolutionAlgebra
    law: ProductLaw
    ideal: StarIdeal
    _quotient: Optional[QuotientAlgebra] = dc_field(default=None, repr=False)

    @property
    def varset(self) -> VariableSet:
        return self.ideal.varset

    @property
    def field(self) -> FieldSpec:
        return self.ideal.field

    @property
    def quotient(self) -> QuotientAlgebra:
        if self._quotient is None:
            self._quotient = QuotientAlgebra(self.ideal)
        return self._quotient

    @property
    def base_names(self) -> tuple:
        return base_variable_names(self.source.dim)

    def rho_images(self) -> List[Polynomial]:
        gb = self.ideal.groebner_basis()
        return [
            gb.normal_form(Polynomial.variable(self.varset, self.field, name))
            for name in self.base_names
        ]


def build_upalgebra(A: EvolutionAlgebra, law: ProductLaw) -> UniversalPAlgebra:
    if law.field != A.field:
        raise FieldError("law and algebra must share a field")
    n = A.dim
    names = base_variable_names(n)
    vs = VariableSet.with_stars(names)
    f = A.field
    xs = [Polynomial.variable(vs, f, name) for name in names]
    gens: List[Polynomial] = []
    for i in range(n):
        g = law.apply(xs[i], xs[i])
        for k in range(n):
            if A.omega[k][i]:
                g = g - xs[k].scalar_mul(A.omega[k][i])
        gens.append(g)
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(law.apply(xs[i], xs[j]))
    kept = [g for g in gens if not g.is_zero()]
    if not kept:
        kept = [Polynomial.zero(vs, f)]  # zero law on the zero-product algebra
    return UniversalPAlgebra(A, law, StarIdeal(kept, star_closed=True))


# ---------------------------------------------------------------------------
# faithfulness


@dataclass
class RepresentationReport:
    faithful: bool
    relation: Optional[list]  # kernel coefficients over the base classes
    dim_universal: Optional[int]  # None = infinite
    dim_tight: Optional[int]
    gb_size: int
    elapsed_ms: float

    def to_json(self) -> dict:
        def d(v):
            return "infinite" if v is None else v

        doc = {
            "faithful": self.faithful,
            "dims": {"universal": d(self.dim_universal), "tight": d(self.dim_tight)},
            "gb_size": self.gb_size,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.relation is not None:
            doc["kernel_relation"] = self.relation
        return doc


def _dependence(up: UniversalPAlgebra):
    gb = up.ideal.groebner_basis()
    gens = [
        Polynomial.variable(up.varset, up.field, name) for name in up.base_names
    ]
    return linear_dependence_over_field(gens, gb)


def is_faithful(up: UniversalPAlgebra) -> bool:
    return _dependence(up) is None


def faithful(up: UniversalPAlgebra) -> RepresentationReport:
    t0 = time.perf_counter()
    rel = _dependence(up)
    q = up.quotient
    dim_u = q.dimension
    if dim_u is None:
        dim_t = None
    else:
        tight = tight_algebra(up)
        dim_t = tight.dim
    f = up.field
    return RepresentationReport(
        faithful=rel is None,
        relation=None if rel is None else [f.raw_to_str(c) for c in rel],
        dim_universal=dim_u,
        dim_tight=dim_t,
        gb_size=len(up.ideal.groebner_basis()),
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )


# ---------------------------------------------------------------------------
# incremental span with optional expression tracking
#
# Expressions record how a span vector was produced from the generators:
#   ("gen", i) | ("star", e) | ("mul", e1, e2) | ("lin", ((c, e), ...))


class _Span:
    def __init__(self, field: FieldSpec, width: int):
        self.field = field
        self.width = width
        self.rows: list = []
        self.pivots: list = []
        self.exprs: list = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec):
        f = self.field
        v = list(vec)
        coeffs = [f.zero_raw] * len(self.rows)
        for idx, (row, pivot) in enumerate(zip(self.rows, self.pivots)):
            c = v[pivot]
            if c:
                coeffs[idx] = c
                for k in range(self.width):
                    if row[k]:
                        v[k] = f.sub_raw(v[k], f.mul_raw(c, row[k]))
        return v, coeffs

    def contains(self, vec) -> bool:
        v, _ = self._reduce(vec)
        return not any(v)

    def coefficients(self, vec):
        """vec = sum coeffs_i rows_i, or None if outside the span."""
        v, coeffs = self._reduce(vec)
        return None if any(v) else coeffs

    def add(self, vec, expr=None) -> bool:
        f = self.field
        v, coeffs = self._reduce(vec)
        pivot = next((k for k in range(self.width) if v[k]), None)
        if pivot is None:
            return False
        inv = f.inv_raw(v[pivot])
        v = [f.mul_raw(inv, c) for c in v]
        if expr is not None:
            parts = [(inv, expr)]
            for c, e in zip(coeffs, self.exprs):
                if c:
                    parts.append((f.neg_raw(f.mul_raw(inv, c)), e))
            expr = ("lin", tuple(parts))
        self.rows.append(v)
        self.pivots.append(pivot)
        self.exprs.append(expr)
        return True


def _eval_expr(expr, gen_vecs, q: QuotientAlgebra):
    kind = expr[0]
    f = q.field
    if kind == "gen":
        return gen_vecs[expr[1]]
    if kind == "star":
        return q.star_vec(_eval_expr(expr[1], gen_vecs, q))
    if kind == "mul":
        return q.mult_vec(_eval_expr(expr[1], gen_vecs, q), _eval_expr(expr[2], gen_vecs, q))
    if kind == "lin":
        acc = [f.zero_raw] * len(q.standard_monomials)
        for c, e in expr[1]:
            v = _eval_expr(e, gen_vecs, q)
            acc = [f.add_raw(a, f.mul_raw(c, b)) for a, b in zip(acc, v)]
        return acc
    raise ValueError(f"bad expression node {kind!r}")


# ---------------------------------------------------------------------------
# tight algebra


@dataclass
class TightPAlgebra:
    parent: UniversalPAlgebra
    finite: bool
    basis: List[Polynomial] = dc_field(default_factory=list)
    unit: Optional[Polynomial] = None

    @property
    def dim(self) -> Optional[int]:
        return len(self.basis) if self.finite else None


def tight_algebra(up: UniversalPAlgebra) -> TightPAlgebra:
    q = up.quotient
    if not q.finite_dimensional:
        return TightPAlgebra(up, finite=False)
    f = up.field
    width = q.dimension
    span = _Span(f, width)
    seeds = []
    for name in up.base_names:
        v = Polynomial.variable(up.varset, f, name)
        seeds.append(q.coords(v))
        seeds.append(q.coords(v.star()))
    for s in seeds:
        span.add(s)
    # close under products (breadth-first until the span stabilizes)
    frontier = list(span.rows)
    while frontier:
        new = []
        current = list(span.rows)
        for u in frontier:
            for v in current:
                w = q.mult_vec(u, v)
                if span.add(w):
                    new.append(list(span.rows[-1]))
        frontier = new
    basis = [q.from_coords(r) for r in span.rows]
    # internal unit: e with e*b = b for all basis b
    rows = span.rows
    prod_rows = []
    rhs = []
    for bj in rows:
        prod_rows.append([c for bi in rows for c in q.mult_vec(bj, bi)])
    rhs = [c for bi in rows for c in bi]
    sol = linalg.solve(prod_rows, rhs, f) if rows else None
    unit = None
    if sol is not None:
        acc = [f.zero_raw] * width
        for c, row in zip(sol, rows):
            acc = [f.add_raw(a, f.mul_raw(c, b)) for a, b in zip(acc, row)]
        unit = q.from_coords(acc)
    return TightPAlgebra(up, True, basis, unit)


def structure_constants(t: TightPAlgebra, elements: Optional[Sequence[Polynomial]] = None):
    """Multiplication table over the tight basis (or an explicit basis)."""
    if not t.finite:
        raise PolynomialError("structure constants need a finite-dimensional tight algebra")
    q = t.parent.quotient
    elements = list(elements) if elements is not None else list(t.basis)
    if elements is not t.basis and len(elements) != len(t.basis):
        raise PolynomialError("explicit basis must have the tight dimension")
    return multiplication_table(q, elements)


# ---------------------------------------------------------------------------
# explicit representations in small involutive algebras


def check_representation(
    A: EvolutionAlgebra,
    law: ProductLaw,
    target: QuotientAlgebra,
    images: Sequence[Polynomial],
) -> bool:
    """sigma(e_i) = images[i] is a faithful representation for the law."""
    if len(images) != A.dim:
        raise EvolutionError("one image per basis vector is required")
    f = target.field
    imgs = [target.nf(u) for u in images]

    def p_of(u, v):
        l0, l1, l2, l3 = law.coeffs
        us, vs = target.star(u), target.star(v)
        acc = target.multiply(u, v).scalar_mul(l0)
        acc = acc + target.multiply(u, vs).scalar_mul(l1)
        acc = acc + target.multiply(us, v).scalar_mul(l2)
        acc = acc + target.multiply(us, vs).scalar_mul(l3)
        return target.nf(acc)

    for i in range(A.dim):
        for j in range(A.dim):
            # sigma(e_i e_j): zero for i != j, structure column for i == j
            expect = Polynomial.zero(target.varset, f)
            if i == j:
                for k in range(A.dim):
                    if A.omega[k][i]:
                        expect = expect + imgs[k].scalar_mul(A.omega[k][i])
            if p_of(imgs[i], imgs[j]) != target.nf(expect):
                return False
    # injectivity of the linear extension
    if not target.finite_dimensional:
        raise PolynomialError("injectivity check needs a finite-dimensional target")
    rows = [target.coords(u) for u in imgs]
    return linalg.rank(rows, f) == A.dim


def representation_factors_through_universal(
    A: EvolutionAlgebra,
    law: ProductLaw,
    target: QuotientAlgebra,
    images: Sequence[Polynomial],
) -> bool:
    """Every ideal generator of U_p evaluates to zero at the images."""
    up = build_upalgebra(A, law)
    var_images: Dict[str, Polynomial] = {}
    for name, u in zip(up.base_names, images):
        var_images[name] = target.nf(u)
        var_images[up.varset.star_name(name)] = target.star(target.nf(u))
    for g in up.ideal.generators:
        if not target.evaluate_poly(g, var_images).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# star-automorphisms of the tight algebra


def star_automorphisms(
    t: TightPAlgebra,
    generators: Optional[Sequence[Polynomial]] = None,
    field: Optional[FieldSpec] = None,
    max_candidates: int = 10**8,
) -> List[tuple]:
    """Involution-compatible algebra automorphisms of the tight algebra.

    Generator images are enumerated inside the span of the listed
    generators and their stars (the natural degree filtration of the
    representation); images of generators that lie in the star-algebra
    closure of an earlier one are derived rather than enumerated.  Every
    candidate is kept only if all defining relations vanish on it and
    the induced matrix on the tight basis is invertible.  Returns the
    matrices (rows = images of the tight basis) sorted, after a group
    closure check.
    """
    if not t.finite:
        raise PolynomialError("star automorphisms need a finite-dimensional tight algebra")
    up = t.parent
    q = up.quotient
    if field is None:
        field = q.field
    if field != q.field:
        raise FieldError("field must match the algebra's field")
    if not field.is_finite:
        raise FieldError("star_automorphisms enumerates over a finite field")
    f = field
    width = q.dimension

    gens = list(generators) if generators is not None else up.rho_images()
    gen_vecs = [q.coords(g) for g in gens]

    t_span = _Span(f, width)
    for b in t.basis:
        t_span.add(q.coords(b))

    # candidate window: span of the generators and their stars
    window = _Span(f, width)
    for v in gen_vecs:
        window.add(v)
        window.add(q.star_vec(v))

    # star-algebra closure of a generator prefix, tracking expressions
    def closure(prefix: int) -> _Span:
        sp = _Span(f, width)
        for i in range(prefix):
            sp.add(gen_vecs[i], ("gen", i))
            sp.add(q.star_vec(gen_vecs[i]), ("star", ("gen", i)))
        frontier = list(range(sp.dim))
        while frontier:
            fresh = []
            snapshot = [(list(r), e) for r, e in zip(sp.rows, sp.exprs)]
            for i in frontier:
                u, eu = snapshot[i]
                for v, ev in snapshot:
                    if sp.add(q.mult_vec(u, v), ("mul", eu, ev)):
                        fresh.append(sp.dim - 1)
                star = q.star_vec(u)
                if sp.add(star, ("star", eu)):
                    fresh.append(sp.dim - 1)
            # products with vectors added this round
            for i in fresh:
                u, eu = list(sp.rows[i]), sp.exprs[i]
                for v, ev in [(list(r), e) for r, e in zip(sp.rows, sp.exprs)]:
                    if sp.add(q.mult_vec(u, v), ("mul", eu, ev)):
                        fresh.append(sp.dim - 1)
            frontier = fresh
        return sp

    free = len(gens)
    sp = None
    for prefix in range(1, len(gens) + 1):
        sp = closure(prefix)
        if sp.dim == t_span.dim:
            free = prefix
            break
    if sp is None or sp.dim != t_span.dim:
        raise PolynomialError("listed generators do not generate the tight algebra")

    derived = []
    for j in range(free, len(gens)):
        coeffs = sp.coefficients(gen_vecs[j])
        if coeffs is None:
            raise PolynomialError("generator escapes its own star-closure")
        derived.append(("lin", tuple((c, e) for c, e in zip(coeffs, sp.exprs) if c)))

    wdim = window.dim
    total = f.characteristic ** (wdim * free)
    if total > max_candidates:
        raise EvolutionError(
            f"candidate space {f.characteristic}^{wdim * free} exceeds bound {max_candidates}"
        )

    scalars = list(range(f.characteristic))
    ideal_gens = up.ideal.generators
    names = up.base_names
    star_names = [up.varset.star_name(n) for n in names]
    t_rows = t_span.rows
    found = []

    def window_vec(coeff_tuple):
        acc = [f.zero_raw] * width
        for c, row in zip(coeff_tuple, window.rows):
            if c:
                acc = [f.add_raw(a, f.mul_raw(c, b)) for a, b in zip(acc, row)]
        return acc

    zero_vec = [f.zero_raw] * width
    coeff_space = list(itertools.product(scalars, repeat=wdim))
    for combo in itertools.product(coeff_space, repeat=free):
        images = [window_vec(cs) for cs in combo]
        full = list(images)
        for expr in derived:
            full.append(_eval_expr(expr, full, q))
        var_imgs = {}
        ok = True
        for name, sname, vec in zip(names, star_names, full):
            var_imgs[name] = vec
            var_imgs[sname] = q.star_vec(vec)
        for g in ideal_gens:
            if q.eval_poly_vec(g, var_imgs) != zero_vec:
                ok = False
                break
        if not ok:
            continue
        rows = []
        for b in t.basis:
            vec = q.eval_poly_vec(b, var_imgs)
            sol = t_span.coefficients(vec)
            if sol is None:
                ok = False
                break
            rows.append(sol)
        if not ok:
            continue
        if linalg.rank(rows, f) != len(rows):
            continue
        found.append(tuple(tuple(r) for r in rows))

    found.sort()
    _assert_matrix_group(found, f)
    return found


def _assert_matrix_group(mats: Sequence[tuple], field: FieldSpec) -> None:
    index = set(mats)
    for M in mats:
        inv = linalg.invert([list(r) for r in M], field)
        if inv is None or tuple(tuple(r) for r in inv) not in index:
            raise PolynomialError("star-automorphism set not closed under inverses")
        for N in mats:
            P = linalg.mat_mul([list(r) for r in M], [list(r) for r in N], field)
            if tuple(tuple(r) for r in P) not in index:
                raise PolynomialError("star-automorphism set not closed under composition")


# ---------------------------------------------------------------------------
# symmetric-image consequences


@dataclass
class SymImageReport:
    sym_image: bool
    faithful: bool
    kernel: List[list]
    quotient_associative: Optional[bool]

    def to_json(self) -> dict:
        return {
            "sym_image": self.sym_image,
            "faithful": self.faithful,
            "kernel": self.kernel,
            "quotient_associative": self.quotient_associative,
        }


def sym_image_consequence(A: EvolutionAlgebra, law: ProductLaw) -> SymImageReport:
    """When rho(A) lands in the symmetric part, its kernel quotient is associative."""
    if not is_perfect(A):
        raise EvolutionError("symmetric-image analysis applies to perfect algebras")
    up = build_upalgebra(A, law)
    gb = up.ideal.groebner_basis()
    f = up.field
    nfs = []
    sym = True
    for name in up.base_names:
        v = Polynomial.variable(up.varset, f, name)
        nf = gb.normal_form(v)
        if nf != gb.normal_form(v.star()):
            sym = False
        nfs.append(nf)
    if not sym:
        return SymImageReport(False, is_faithful(up), [], None)

    monomials = sorted({m for g in nfs for m in g.terms})
    rows = [[g.terms.get(m, f.zero_raw) for m in monomials] for g in nfs]
    if monomials:
        kernel = linalg.left_nullspace(rows, f)
    else:
        kernel = [[f.one_raw if j == i else f.zero_raw for j in range(A.dim)] for i in range(A.dim)]

    # the kernel must be an ideal of A: e_i * k stays in the kernel span
    ker_span = _Span(f, A.dim)
    for k in kernel:
        ker_span.add(k)
    from .evolution import AlgebraElement, multiply  # local import to avoid cycles

    for k in kernel:
        kv = AlgebraElement(A, tuple(k))
        for i in range(A.dim):
            prod = multiply(A, A.basis_vector(i), kv)
            if any(prod.coords) and not ker_span.contains(list(prod.coords)):
                raise EvolutionError("kernel of rho is not an ideal (unexpected)")

    # associativity of A / ker on a complement basis
    comp = [i for i in range(A.dim) if i not in ker_span.pivots]

    def project(coords):
        v, _ = ker_span._reduce(list(coords))
        return tuple(v[i] for i in comp)

    def qmul(u, v):
        # u, v are coordinate tuples over comp indices, lifted to A
        lift_u = [f.zero_raw] * A.dim
        lift_v = [f.zero_raw] * A.dim
        for pos, i in enumerate(comp):
            lift_u[i] = u[pos]
            lift_v[i] = v[pos]
        prod = multiply(A, AlgebraElement(A, tuple(lift_u)), AlgebraElement(A, tuple(lift_v)))
        return project(prod.coords)

    assoc = True
    units = [tuple(f.one_raw if j == pos else f.zero_raw for j in range(len(comp))) for pos in range(len(comp))]
    for u in units:
        for v in units:
            for w in units:
                if qmul(qmul(u, v), w) != qmul(u, qmul(v, w)):
                    assoc = False
    return SymImageReport(
        True,
        not kernel,
        [[f.raw_to_str(c) for c in k] for k in kernel],
        assoc,
    )


# ---------------------------------------------------------------------------
# law grids, paper laws, sweeps, certificates


GRID_VALUES = ("0", "1", "-1", "2", "-2")
SMALL_GRID_VALUES = ("0", "1")


def law_grid(field: FieldSpec, values: Sequence[str] = GRID_VALUES) -> List[ProductLaw]:
    """All laws with coefficients from the value list, deduplicated in the field."""
    raws = []
    seen = set()
    for s in values:
        r = field.coerce_raw(s)
        if r not in seen:
            seen.add(r)
            raws.append(r)
    return [ProductLaw(field, combo) for combo in itertools.product(raws, repeat=4)]


def paper_law(family_name: str, field: FieldSpec, alpha=None) -> ProductLaw:
    """The explicit faithful law used for each family with automorphisms."""
    char = field.characteristic
    if family_name == "A1":
        return ProductLaw.make(field, ["0", "1", "0", "0"])
    if family_name == "A2":
        return ProductLaw.make(field, ["0", "0", "0", "1"])
    if family_name == "A5aa":
        a = field.coerce_raw(alpha)
        return ProductLaw(field, (field.one_raw, field.zero_raw, field.zero_raw, a))
    if family_name == "A5":
        if char == 2:
            return ProductLaw.make(field, ["1", "0", "0", "1"])
        return ProductLaw.make(field, ["-2", "0", "0", "2"])
    if family_name in ("A6", "A7"):
        return ProductLaw.make(field, ["1", "0", "0", "0"])
    if family_name == "A8":
        if char == 2:
            raise FieldError("A8 has no faithful law in characteristic 2")
        a = field.coerce_raw(alpha)
        sixteen = field.coerce_raw(16)
        quarter = field.inv_raw(field.coerce_raw(4))
        k = field.mul_raw(field.sub_raw(field.one_raw, field.mul_raw(sixteen, a)), quarter)
        h = field.mul_raw(field.add_raw(field.one_raw, field.mul_raw(sixteen, a)), quarter)
        return ProductLaw(field, (k, h, h, k))
    raise ValueError(f"no recorded law for family {family_name!r}")


def run_job(algebra: EvolutionAlgebra, law: ProductLaw) -> RepresentationReport:
    return faithful(build_upalgebra(algebra, law))


def job_from_json(doc: dict) -> RepresentationReport:
    """Job spec: {"algebra": {...}, "law": [l0,l1,l2,l3], "field": {...}}."""
    field = FieldSpec.from_json(doc["field"])
    from .evolution import algebra_from_json

    A = algebra_from_json(doc["algebra"], field)
    law = ProductLaw.make(field, doc["law"])
    return run_job(A, law)


# -- the certificate case list (memberships replacing external proofs) ------

CERT_CASES: List[dict] = [
    # A3(1): every law branch ends with a dependence witness in the ideal
    dict(case="A3 l0=l3 symmetric branch", family="A3", alpha="1", field="Q",
         law=("1", "2", "0", "1"), members=["x - x*", "y - y*"]),
    dict(case="A3 l1!=l2, lam!=0", family="A3", alpha="1", field="Q",
         law=("1", "1", "0", "0"), members=["x*y - x**y*", "x*y* - x**y", "x"]),
    dict(case="A3 l1!=l2, lam=0", family="A3", alpha="1", field="Q",
         law=("1", "1", "-2", "0"), members=["x"]),
    dict(case="A3 l1=l2=0, l0+l3!=0, l3=0", family="A3", alpha="1", field="Q",
         law=("1", "0", "0", "0"), members=["x"]),
    dict(case="A3 l1=l2=0, l0+l3!=0, l3!=0", family="A3", alpha="1", field="Q",
         law=("2", "0", "0", "1"), members=["x**y", "x*y*", "x^2", "x"]),
    dict(case="A3 l1=l2=0, l0+l3=0", family="A3", alpha="1", field="Q",
         law=("1", "0", "0", "-1"), members=["x + x*", "x"]),
    dict(case="A3 l1=l2=1, (l0+l3+1)^2!=1", family="A3", alpha="1", field="Q",
         law=("1", "1", "1", "1"), members=["x*x*^2 - x^3", "x^2 - x*x*", "x - x*", "x"]),
    dict(case="A3 l1=l2=1, l0+l3=0", family="A3", alpha="1", field="Q",
         law=("1", "1", "1", "-1"), members=["x"]),
    dict(case="A3 l1=l2=1, l0+l3=-2", family="A3", alpha="1", field="Q",
         law=("-1", "1", "1", "-1"), members=["x"]),
    # A4(1): the paper's form1..form7/form9 certificates all assert y* in I
    dict(case="A4 l0=l3 symmetric branch", family="A4", alpha="1", field="Q",
         law=("1", "1", "0", "1"), members=["y - y*", "x - x*"]),
    dict(case="A4 l0=0, l1!=l2 (form1)", family="A4", alpha="1", field="Q",
         law=("0", "1", "2", "1"), members=["y*"]),
    dict(case="A4 l0=0, l1=l2!=0 (form2)", family="A4", alpha="1", field="Q",
         law=("0", "1", "1", "1"), members=["y*"]),
    dict(case="A4 l0=0, l1=l2=0 (form3)", family="A4", alpha="1", field="Q",
         law=("0", "0", "0", "1"), members=["y*"]),
    dict(case="A4 l0!=0, l1!=l2, l0+l1+l2!=0 (form9)", family="A4", alpha="1", field="Q",
         law=("1", "1", "0", "0"), members=["y*"]),
    dict(case="A4 l0!=0, l1!=l2, l0+l1+l2=0 (form4)", family="A4", alpha="1", field="Q",
         law=("1", "1", "-2", "0"), members=["y*"]),
    dict(case="A4 l0=1, l1=l2 not in {-1,0} (form5)", family="A4", alpha="1", field="Q",
         law=("1", "1", "1", "0"), members=["y*"]),
    dict(case="A4 l0=1, l1=l2=0 (form6)", family="A4", alpha="1", field="Q",
         law=("1", "0", "0", "2"), members=["y*"]),
    dict(case="A4 l0=1, l1=l2=-1 (form7)", family="A4", alpha="1", field="Q",
         law=("1", "-1", "-1", "0"), members=["y*"]),
    dict(case="A4 char 2, l0=1, l1=l2 (form8)", family="A4", alpha="1", field="GF:2",
         law=("1", "1", "1", "0"), members=["y*"]),
    # A5ab(1,2): branch-by-branch witnesses
    dict(case="A5ab p=l symmetric branch", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "0", "2", "1"), members=["x - x*", "y - y*"]),
    dict(case="A5ab p!=l, m!=n", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "1", "0", "0"), members=["x^2 - x*^2", "y^2 - y*^2"]),
    dict(case="A5ab p=m=n=0, l!=0", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "0", "0", "0"), members=["x", "y"]),
    dict(case="A5ab m=n=0, p^2!=l^2, p!=beta*l", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "0", "0", "3"), members=["x", "y"]),
    dict(case="A5ab m=n=0, p^2!=l^2, p=beta*l", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "0", "0", "2"), members=["x", "y"]),
    dict(case="A5ab m=n=0, p=-l", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "0", "0", "-1"), members=["x + x*", "y + y*", "x^2 - x*^2"]),
    dict(case="A5ab p!=l, m=n=1 (form11-14)", family="A5ab", alpha="1", beta="2", field="Q",
         law=("1", "1", "1", "0"),
         members=["y*y* - 2*x*x*", "y^2 - 2*x*^2", "y*^2 - 2*x^2",
                  "y*x* - x*y*", "x^2 - x*^2", "y^2 - y*^2"]),
]


# -- the faithfulness dichotomy sweep ---------------------------------------
#
# Families with trivial automorphism group must report "not faithful"
# for EVERY law in the grid; families with automorphisms have a recorded
# law that must report "faithful".

DICHOTOMY_FIELDS = ("Q", "GF:2", "GF:3", "GF:5", "GF:7")

NOT_FAITHFUL_FAMILIES = (
    ("A3", {"alpha": "1"}, None),
    ("A4", {"alpha": "1"}, None),
    ("A5ab", {"alpha": "1", "beta": "2"}, None),
    ("A8", {"alpha": "1"}, 2),  # only the characteristic-2 row is automorphism-free
)

FAITHFUL_FAMILIES = (
    ("A1", "A1", {}),
    ("A2", "A2", {"alpha": "1"}),
    ("A5ab", "A5aa", {"alpha": "2", "beta": "2"}),
    ("A5", "A5", {}),
    ("A6", "A6", {}),
    ("A7", "A7", {}),
    ("A8", "A8", {"alpha": "1"}),
)


def dichotomy_jobs(
    field_flags: Sequence[str] = DICHOTOMY_FIELDS,
    grid_values: Sequence[str] = GRID_VALUES,
) -> List[dict]:
    """One picklable job per (family, field, law) with its expected verdict."""
    jobs: List[dict] = []
    for flag in field_flags:
        field = FieldSpec.from_flag(flag)
        for fam, params, char_only in NOT_FAITHFUL_FAMILIES:
            if char_only is not None and field.characteristic != char_only:
                continue
            try:
                family(fam, field, params.get("alpha"), params.get("beta"))
            except EvolutionError:
                continue  # parameter degenerates in this field
            for law in law_grid(field, grid_values):
                jobs.append(
                    dict(
                        family=fam,
                        params=params,
                        field=flag,
                        law=[field.raw_to_str(c) for c in law.coeffs],
                        expect_faithful=False,
                    )
                )
        for fam, law_name, params in FAITHFUL_FAMILIES:
            if fam == "A8" and field.characteristic == 2:
                continue
            try:
                family(fam, field, params.get("alpha"), params.get("beta"))
                law = paper_law(law_name, field, params.get("alpha"))
            except (EvolutionError, FieldError):
                continue
            jobs.append(
                dict(
                    family=fam,
                    params=params,
                    field=flag,
                    law=[field.raw_to_str(c) for c in law.coeffs],
                    expect_faithful=True,
                )
            )
    return jobs


def run_dichotomy_job(job: dict) -> dict:
    field = FieldSpec.from_flag(job["field"])
    A = family(job["family"], field, job["params"].get("alpha"), job["params"].get("beta"))
    law = ProductLaw.make(field, job["law"])
    got = is_faithful(build_upalgebra(A, law))
    out = dict(job)
    out["faithful"] = got
    out["ok"] = got == job["expect_faithful"]
    return out


def run_dichotomy(
    field_flags: Sequence[str] = DICHOTOMY_FIELDS,
    grid_values: Sequence[str] = GRID_VALUES,
    workers: Optional[int] = None,
) -> dict:
    """Run the whole sweep; summary counts plus any mismatching jobs."""
    jobs = dichotomy_jobs(field_flags, grid_values)
    if workers is None or workers <= 1:
        results = [run_dichotomy_job(j) for j in jobs]
    else:
        import multiprocessing as mp

        with mp.Pool(workers) as pool:
            results = pool.map(run_dichotomy_job, jobs, chunksize=32)
    bad = [r for r in results if not r["ok"]]
    return {
        "jobs": len(jobs),
        "mismatches": bad,
        "ok": not bad,
        "not_faithful_checked": sum(1 for r in results if not r["expect_faithful"]),
        "faithful_checked": sum(1 for r in results if r["expect_faithful"]),
    }


def run_certificate_case(case: dict) -> dict:
    field = FieldSpec.from_flag(case["field"])
    A = family(case["family"], field, case.get("alpha"), case.get("beta"))
    law = ProductLaw.make(field, case["law"])
    up = build_upalgebra(A, law)
    t0 = time.perf_counter()
    gb = up.ideal.groebner_basis()
    results = {}
    for text in case["members"]:
        f = parse_polynomial(text, up.varset, field)
        results[text] = gb.normal_form(f).is_zero()
    not_faithful = not is_faithful(up)
    return {
        "case": case["case"],
        "family": A.label,
        "law": law.to_json(),
        "field": case["field"],
        "memberships": results,
        "not_faithful": not_faithful,
        "ok": all(results.values()) and not_faithful,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }


def run_certificates(cases: Optional[Sequence[dict]] = None) -> List[dict]:
    return [run_certificate_case(c) for c in (cases or CERT_CASES)]
