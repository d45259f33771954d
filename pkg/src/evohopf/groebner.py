"""Buchberger's algorithm, reduced Groebner bases, and quotient algebras.

The engine is deliberately plain: normal pair-selection strategy ordered
by (lcm degree, lcm), both classical pair criteria (coprime leading
monomials and the chain criterion), full tail reduction, and a final
interreduction.  That is enough for the ideal sizes this project meets
(at most 8 variables, low degree), and it keeps every run deterministic:
the reduced monic basis is unique for a given order, so results do not
depend on generator permutations.

Star-closed ideals add the involutes of all generators up front, which
keeps the reduction loop itself involution-agnostic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .fields import FieldElement, FieldSpec
from .polynomials import (
    MonomialOrder,
    Polynomial,
    PolynomialError,
    VariableSet,
    block_order,
    degrevlex,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    order_from_name,
    parse_polynomial,
    poly_to_string,
)


# ---------------------------------------------------------------------------
# core reduction


def _normal_form_terms(fterms: dict, basis: list, order_key, field: FieldSpec) -> dict:
    """Full remainder of a term-dict modulo a list of monic (lt, terms) pairs."""
    p = dict(fterms)
    r: dict = {}
    sub = field.sub_raw
    mul = field.mul_raw
    while p:
        m = max(p, key=order_key)
        c = p.pop(m)
        reducer = None
        for lt, items in basis:
            ok = True
            for a, b in zip(lt, m):
                if a > b:
                    ok = False
                    break
            if ok:
                reducer = (lt, items)
                break
        if reducer is None:
            r[m] = c
            continue
        lt, items = reducer
        shift = tuple(x - y for x, y in zip(m, lt))
        for mm, cc in items:
            key = tuple(x + y for x, y in zip(mm, shift))
            v = sub(p.get(key, 0), mul(c, cc))
            if v:
                p[key] = v
            else:
                p.pop(key, None)
    return r


def _prep(g: Polynomial, order: MonomialOrder):
    """(leading monomial, non-leading terms) for a monic polynomial."""
    lt = g.leading_monomial(order)
    items = [(m, c) for m, c in g.terms.items() if m != lt]
    return lt, items


def normal_form_list(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    if not basis:
        return f
    prepped = [_prep(g, order) for g in basis]
    terms = _normal_form_terms(f.terms, prepped, order.key, f.field)
    return Polynomial(f.varset, f.field, terms)


def buchberger_list(generators: Sequence[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    """The unique reduced monic Groebner basis of the given generators."""
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    field = gens[0].field
    varset = gens[0].varset
    key = order.key

    basis: List[Polynomial] = []
    prepped: list = []

    def push(g: Polynomial):
        g = g.monic(order)
        basis.append(g)
        prepped.append(_prep(g, order))

    # seed with interreduced input for smaller pair sets
    for g in sorted(gens, key=lambda g: key(g.leading_monomial(order))):
        terms = _normal_form_terms(g.terms, prepped, key, field)
        if terms:
            push(Polynomial(varset, field, terms))

    lts = [g.leading_monomial(order) for g in basis]
    pending = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    done = set()

    def pair_rank(p):
        lcm = mono_lcm(lts[p[0]], lts[p[1]])
        return (mono_degree(lcm), key(lcm), p)

    while pending:
        pair = min(pending, key=pair_rank)
        pending.discard(pair)
        done.add(pair)
        i, j = pair
        li, lj = lts[i], lts[j]
        lcm = mono_lcm(li, lj)
        # criterion 1: coprime leading monomials
        if all(a + b == c for a, b, c in zip(li, lj, lcm)):
            continue
        # criterion 2 (chain): some k with lt_k | lcm and both pairs treated
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if mono_divides(lts[k], lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        # s-polynomial of two monic elements
        si = mono_div(lcm, li)
        sj = mono_div(lcm, lj)
        sterms: dict = {}
        add, sub, mul = field.add_raw, field.sub_raw, field.mul_raw
        for m, c in basis[i].terms.items():
            mm = mono_mul(m, si)
            v = add(sterms.get(mm, 0), c)
            if v:
                sterms[mm] = v
            else:
                sterms.pop(mm, None)
        for m, c in basis[j].terms.items():
            mm = mono_mul(m, sj)
            v = sub(sterms.get(mm, 0), c)
            if v:
                sterms[mm] = v
            else:
                sterms.pop(mm, None)
        rem = _normal_form_terms(sterms, prepped, key, field)
        if rem:
            push(Polynomial(varset, field, rem))
            lts.append(basis[-1].leading_monomial(order))
            new = len(basis) - 1
            for t in range(new):
                pending.add((t, new))
    return _reduce_basis(basis, order)


def _reduce_basis(basis: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    if not basis:
        return []
    key = order.key
    # minimal: drop elements whose lt is divisible by another surviving lt
    by_lt = sorted(basis, key=lambda g: key(g.leading_monomial(order)))
    kept: List[Polynomial] = []
    for g in by_lt:
        lt = g.leading_monomial(order)
        if not any(mono_divides(h.leading_monomial(order), lt) for h in kept):
            kept.append(g)
    # reduced: tail-reduce each against the others
    out: List[Polynomial] = []
    for idx, g in enumerate(kept):
        others = [_prep(h, order) for pos, h in enumerate(kept) if pos != idx]
        terms = _normal_form_terms(g.terms, others, key, g.field)
        out.append(Polynomial(g.varset, g.field, terms).monic(order))
    out.sort(key=lambda g: key(g.leading_monomial(order)))
    return out


# ---------------------------------------------------------------------------
# public wrappers


@dataclass
class GroebnerBasis:
    """Reduced monic basis for a fixed monomial order."""

    elements: List[Polynomial]
    order: MonomialOrder

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form_list(f, self.elements, self.order)

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(poly_to_string(g, self.order) for g in self.elements) + "}"


@dataclass
class StarIdeal:
    """Generator set, optionally closed under the varset involution."""

    generators: List[Polynomial]
    order: MonomialOrder = dc_field(default_factory=degrevlex)
    star_closed: bool = False
    _gb: Optional[GroebnerBasis] = dc_field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not self.generators:
            raise PolynomialError("ideal needs at least one generator polynomial")
        base = self.generators[0]
        for g in self.generators[1:]:
            base._compat(g)
        if self.star_closed:
            closed = list(self.generators)
            for g in self.generators:
                gs = g.star()
                if all(gs != h for h in closed):
                    closed.append(gs)
            self.generators = closed

    @property
    def varset(self) -> VariableSet:
        return self.generators[0].varset

    @property
    def field(self) -> FieldSpec:
        return self.generators[0].field

    def groebner_basis(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = GroebnerBasis(buchberger_list(self.generators, self.order), self.order)
        return self._gb

    @staticmethod
    def from_json(doc: dict) -> "StarIdeal":
        """Ideal input document: variables, involution pairs, field, generators, order."""
        field = FieldSpec.from_json(doc["field"])
        pairs = doc.get("involution", {})
        varset = VariableSet.from_pairs(doc["variables"], pairs)
        order = order_from_name(doc.get("order", "degrevlex"), doc.get("block_size", 0))
        gens = [parse_polynomial(s, varset, field) for s in doc["generators"]]
        return StarIdeal(gens, order, star_closed=bool(doc.get("star_closed", False)))

    def to_json(self) -> dict:
        pairs = {}
        for i, j in enumerate(self.varset.involution):
            if j > i:
                pairs[self.varset.names[i]] = self.varset.names[j]
        return {
            "variables": list(self.varset.names),
            "involution": pairs,
            "field": self.field.to_json(),
            "generators": [poly_to_string(g) for g in self.generators],
            "order": self.order.kind,
            "star_closed": self.star_closed,
        }


def buchberger(ideal: StarIdeal) -> GroebnerBasis:
    return ideal.groebner_basis()


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def member(f: Polynomial, ideal: StarIdeal) -> bool:
    return ideal.groebner_basis().normal_form(f).is_zero()


# ---------------------------------------------------------------------------
# elimination


def eliminate(ideal: StarIdeal, vars_to_remove: Sequence[str]) -> List[Polynomial]:
    """Generators of I intersected with K[remaining vars].

    Computes a Groebner basis for a block elimination order with the
    removed variables (in the given order) in the leading block, then
    keeps the elements free of them, rewritten into the smaller varset.
    """
    varset = ideal.varset
    removed = [varset.index(v) for v in vars_to_remove]
    if len(set(removed)) != len(removed):
        raise PolynomialError("duplicate variables in elimination list")
    keep = [i for i in range(varset.nvars) if i not in removed]
    perm = removed + keep  # new position -> old index

    # keep the involution only if it restricts to the remaining variables
    keep_names = [varset.names[i] for i in keep]
    inv_pairs = {}
    restrictable = True
    for pos, i in enumerate(keep):
        j = varset.involution[i]
        if j == i:
            continue
        if j in keep:
            inv_pairs[varset.names[i]] = varset.names[j]
        else:
            restrictable = False
    small = (
        VariableSet.from_pairs(keep_names, inv_pairs)
        if restrictable
        else VariableSet.plain(keep_names)
    )

    shuffled = VariableSet.plain([varset.names[i] for i in perm])
    field = ideal.field

    def remap(g: Polynomial) -> Polynomial:
        return Polynomial(
            shuffled, field, {tuple(m[i] for i in perm): c for m, c in g.terms.items()}
        )

    gb = buchberger_list([remap(g) for g in ideal.generators], block_order(len(removed)))
    k = len(removed)
    out = []
    for g in gb:
        if all(all(e == 0 for e in m[:k]) for m in g.terms):
            out.append(Polynomial(small, field, {m[k:]: c for m, c in g.terms.items()}))
    return out


# ---------------------------------------------------------------------------
# quotient structure


def quotient_basis(ideal: StarIdeal) -> Optional[List[tuple]]:
    """Standard monomials of the quotient, or None when infinite-dimensional."""
    gb = ideal.groebner_basis()
    lts = gb.leading_monomials()
    n = ideal.varset.nvars
    if any(mono_degree(lt) == 0 for lt in lts):
        return []  # ideal is (1): zero ring
    bounds = []
    for i in range(n):
        pure = [lt[i] for lt in lts if lt[i] and all(e == 0 for j, e in enumerate(lt) if j != i)]
        if not pure:
            return None
        bounds.append(min(pure))
    out = []
    cursor = [0] * n
    while True:
        m = tuple(cursor)
        if not any(mono_divides(lt, m) for lt in lts):
            out.append(m)
        i = n - 1
        while i >= 0:
            cursor[i] += 1
            if cursor[i] < bounds[i]:
                break
            cursor[i] = 0
            i -= 1
        if i < 0:
            break
    out.sort(key=ideal.order.key)
    return out


class QuotientAlgebra:
    """K[vars]/I with normal forms as canonical representatives."""

    def __init__(self, ideal: StarIdeal):
        self.ideal = ideal
        self.gb = ideal.groebner_basis()
        self.field = ideal.field
        self.varset = ideal.varset
        self.standard_monomials = quotient_basis(ideal)
        self._index = (
            {m: i for i, m in enumerate(self.standard_monomials)}
            if self.standard_monomials is not None
            else None
        )
        self._tensor = None
        self._star_images = None

    @property
    def finite_dimensional(self) -> bool:
        return self.standard_monomials is not None

    @property
    def dimension(self) -> Optional[int]:
        return len(self.standard_monomials) if self.finite_dimensional else None

    def nf(self, f: Polynomial) -> Polynomial:
        return self.gb.normal_form(f)

    def multiply(self, f: Polynomial, g: Polynomial) -> Polynomial:
        return self.nf(f * g)

    def star(self, f: Polynomial) -> Polynomial:
        if not self.ideal.star_closed:
            raise PolynomialError("involution on the quotient needs a star-closed ideal")
        return self.nf(f.star())

    def one(self) -> Polynomial:
        return Polynomial.constant(self.varset, self.field, 1)

    def coords(self, f: Polynomial) -> list:
        """Coordinates of NF(f) in the standard-monomial basis."""
        if self._index is None:
            raise PolynomialError("infinite-dimensional quotient has no coordinate vector")
        nf = self.nf(f)
        vec = [self.field.zero_raw] * len(self.standard_monomials)
        for m, c in nf.terms.items():
            vec[self._index[m]] = c
        return vec

    def from_coords(self, vec) -> Polynomial:
        return Polynomial.from_terms(
            self.varset, self.field, zip(self.standard_monomials, vec)
        )

    def evaluate_poly(self, f: Polynomial, images: Dict[str, Polynomial]) -> Polynomial:
        """NF of f with each variable replaced by a quotient element."""
        acc = Polynomial.zero(self.varset, self.field)
        for m, c in f.terms.items():
            term = Polynomial.constant(self.varset, self.field, c)
            for i, e in enumerate(m):
                if not e:
                    continue
                img = images[f.varset.names[i]]
                for _ in range(e):
                    term = self.nf(term * img)
            acc = acc + term
        return self.nf(acc)

    # -- coordinate-level arithmetic (finite-dimensional case) ----------

    def structure_tensor(self):
        """tensor[i][j] = coords of NF(m_i * m_j) over the standard basis."""
        if self._tensor is None:
            if self._index is None:
                raise PolynomialError("structure tensor needs a finite-dimensional quotient")
            mons = self.standard_monomials
            tensor = []
            for mi in mons:
                row = []
                for mj in mons:
                    prod = Polynomial(self.varset, self.field, {mono_mul(mi, mj): self.field.one_raw})
                    row.append(self.coords(prod))
                tensor.append(row)
            self._tensor = tensor
        return self._tensor

    def mult_vec(self, u, v):
        """Coordinates of the product of two coordinate vectors."""
        f = self.field
        tensor = self.structure_tensor()
        n = len(u)
        out = [f.zero_raw] * n
        for i in range(n):
            ui = u[i]
            if not ui:
                continue
            row = tensor[i]
            for j in range(n):
                vj = v[j]
                if not vj:
                    continue
                c = f.mul_raw(ui, vj)
                cell = row[j]
                for k in range(n):
                    if cell[k]:
                        out[k] = f.add_raw(out[k], f.mul_raw(c, cell[k]))
        return out

    def star_vec(self, u):
        """Coordinates of the involution applied to a coordinate vector."""
        if self._star_images is None:
            self._star_images = [
                self.coords(self.star(self.from_coords(
                    [self.field.one_raw if j == i else self.field.zero_raw
                     for j in range(len(self.standard_monomials))]
                )))
                for i in range(len(self.standard_monomials))
            ]
        f = self.field
        n = len(u)
        out = [f.zero_raw] * n
        for i in range(n):
            if u[i]:
                img = self._star_images[i]
                for k in range(n):
                    if img[k]:
                        out[k] = f.add_raw(out[k], f.mul_raw(u[i], img[k]))
        return out

    def eval_poly_vec(self, f: Polynomial, images: Dict[str, list]) -> list:
        """Coordinates of f evaluated at coordinate-vector images of its variables."""
        field = self.field
        n = len(self.standard_monomials)
        one_vec = self.coords(self.one())
        acc = [field.zero_raw] * n
        for m, c in f.terms.items():
            term = [field.mul_raw(c, v) for v in one_vec]
            for i, e in enumerate(m):
                if not e:
                    continue
                img = images[f.varset.names[i]]
                for _ in range(e):
                    term = self.mult_vec(term, img)
            acc = [field.add_raw(a, b) for a, b in zip(acc, term)]
        return acc


def multiplication_table(q: QuotientAlgebra, elements: Sequence[Polynomial]):
    """Structure constants of a linearly independent element list.

    Returns tables[i][j] = coefficient vector of elements_i * elements_j
    in the span of the elements; raises if the elements are dependent or
    their products leave the span.
    """
    field = q.field
    rows = [q.coords(e) for e in elements]
    if linalg.rank(rows, field) != len(elements):
        raise PolynomialError("structure constants need linearly independent elements")
    tables = []
    for ei in elements:
        row = []
        for ej in elements:
            prod = q.coords(q.multiply(ei, ej))
            sol = linalg.solve(rows, prod, field)
            if sol is None:
                raise PolynomialError("element products leave the span")
            row.append(sol)
        tables.append(row)
    return tables


def quotient_multiply(q: QuotientAlgebra, f_nf: Polynomial, g_nf: Polynomial) -> Polynomial:
    return q.multiply(f_nf, g_nf)


def linear_dependence_over_field(
    elems: Sequence[Polynomial], gb: GroebnerBasis
) -> Optional[List]:
    """A nonzero coefficient vector c with sum c_i elems_i in the ideal, else None."""
    if not elems:
        return None
    field = elems[0].field
    nfs = [gb.normal_form(f) for f in elems]
    monomials = sorted({m for f in nfs for m in f.terms})
    if not monomials:
        # every element reduces to zero: 1*e_0 is already a relation
        vec = [field.zero_raw] * len(elems)
        vec[0] = field.one_raw
        return vec
    rows = [[f.terms.get(m, field.zero_raw) for m in monomials] for f in nfs]
    return linalg.left_nullspace_vector(rows, field)


def ideal_json_roundtrip(doc: dict) -> dict:
    return StarIdeal.from_json(doc).to_json()


def gb_to_json(gb: GroebnerBasis) -> dict:
    return {
        "order": gb.order.kind,
        "elements": [poly_to_string(g, gb.order) for g in gb.elements],
    }


def dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)
