"""Sparse multivariate polynomials with a variable involution.

Monomials are exponent tuples (one slot per variable of the ambient
VariableSet); a polynomial is a dict from monomial to a nonzero raw
coefficient, tagged with one FieldSpec.  Starred partners (``x*``) are
ordinary variables linked by the varset's involution permutation, so the
Groebner layer never needs to know about the star.

Text syntax, e.g. ``2*x^2*y - 1/3*y* + 1``:

* a ``*`` immediately after an identifier binds to it as the involution
  star unless the next character starts an operand; so ``x*y`` is x
  times y, ``x**y`` is (x*) times y, and a trailing ``x*`` is the
  starred variable;
* ``^`` is exponentiation, ``/`` only appears inside rational literals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .fields import FieldElement, FieldError, FieldSpec, Raw

Monomial = tuple  # exponent vector, one nonnegative int per variable


class PolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# variable sets


@dataclass(frozen=True)
class VariableSet:
    """Ordered variable names plus a self-inverse involution permutation."""

    names: tuple
    involution: tuple

    def __post_init__(self) -> None:
        n = len(self.names)
        if len(set(self.names)) != n:
            raise PolynomialError("duplicate variable names")
        if sorted(self.involution) != list(range(n)):
            raise PolynomialError("involution is not a permutation")
        for i, j in enumerate(self.involution):
            if self.involution[j] != i:
                raise PolynomialError("involution is not self-inverse")

    @staticmethod
    def plain(names: Sequence[str]) -> "VariableSet":
        """Variables fixed by the involution."""
        names = tuple(names)
        return VariableSet(names, tuple(range(len(names))))

    @staticmethod
    def with_stars(base: Sequence[str]) -> "VariableSet":
        """x, y, ... followed by their starred partners x*, y*, ..."""
        base = tuple(base)
        n = len(base)
        names = base + tuple(f"{v}*" for v in base)
        inv = tuple(range(n, 2 * n)) + tuple(range(n))
        return VariableSet(names, inv)

    @staticmethod
    def from_pairs(names: Sequence[str], pairs: Mapping[str, str]) -> "VariableSet":
        names = tuple(names)
        index = {v: i for i, v in enumerate(names)}
        inv = list(range(len(names)))
        for a, b in pairs.items():
            inv[index[a]] = index[b]
            inv[index[b]] = index[a]
        return VariableSet(names, tuple(inv))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PolynomialError(f"unknown variable {name!r}") from None

    def star_index(self, i: int) -> int:
        return self.involution[i]

    def star_name(self, name: str) -> str:
        return self.names[self.involution[self.index(name)]]

    @property
    def nvars(self) -> int:
        return len(self.names)

    def unit_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def monomial(self, **exponents: int) -> Monomial:
        e = [0] * self.nvars
        for name, k in exponents.items():
            e[self.index(name)] = k
        return tuple(e)


# ---------------------------------------------------------------------------
# monomial helpers


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a | b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b | a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


# ---------------------------------------------------------------------------
# monomial orders

DEGREVLEX = "degrevlex"
LEX = "lex"
BLOCK = "block"


@dataclass(frozen=True)
class MonomialOrder:
    """Total order on monomials; larger key = larger monomial.

    ``block(k)`` compares the first k exponents degrevlex first, which
    makes it an elimination order for those variables.
    """

    kind: str = DEGREVLEX
    block_size: int = 0

    def key(self, m: Monomial):
        if self.kind == DEGREVLEX:
            return _drl_key(m)
        if self.kind == LEX:
            return m
        if self.kind == BLOCK:
            k = self.block_size
            return (_drl_key(m[:k]), _drl_key(m[k:]))
        raise PolynomialError(f"unknown order {self.kind!r}")

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)


def _drl_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def degrevlex() -> MonomialOrder:
    return MonomialOrder(DEGREVLEX)


def lex() -> MonomialOrder:
    return MonomialOrder(LEX)


def block_order(elim_count: int) -> MonomialOrder:
    return MonomialOrder(BLOCK, elim_count)


def order_from_name(name: str, elim_count: int = 0) -> MonomialOrder:
    if name == DEGREVLEX:
        return degrevlex()
    if name == LEX:
        return lex()
    if name == BLOCK:
        return block_order(elim_count)
    raise PolynomialError(f"unknown order name {name!r}")


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial over one varset and one field."""

    __slots__ = ("varset", "field", "terms")

    def __init__(self, varset: VariableSet, field: FieldSpec, terms: Mapping[Monomial, Raw]):
        object.__setattr__(self, "varset", varset)
        object.__setattr__(self, "field", field)
        clean = {m: c for m, c in terms.items() if c}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(varset: VariableSet, field: FieldSpec) -> "Polynomial":
        return Polynomial(varset, field, {})

    @staticmethod
    def constant(varset: VariableSet, field: FieldSpec, value) -> "Polynomial":
        return Polynomial(varset, field, {varset.unit_monomial(): field.coerce_raw(value)})

    @staticmethod
    def variable(varset: VariableSet, field: FieldSpec, name: str) -> "Polynomial":
        e = [0] * varset.nvars
        e[varset.index(name)] = 1
        return Polynomial(varset, field, {tuple(e): field.one_raw})

    @staticmethod
    def from_terms(varset, field, items: Iterable) -> "Polynomial":
        terms: dict = {}
        f = field
        for m, c in items:
            c = f.coerce_raw(c)
            if m in terms:
                c = f.add_raw(terms[m], c)
            if c:
                terms[m] = c
            else:
                terms.pop(m, None)
        return Polynomial(varset, field, terms)

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def variables_used(self) -> tuple:
        used = [False] * self.varset.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(self.varset.names[i] for i, u in enumerate(used) if u)

    def coefficient(self, m: Monomial) -> FieldElement:
        return FieldElement(self.field, self.terms.get(m, self.field.zero_raw))

    def constant_term(self) -> FieldElement:
        return self.coefficient(self.varset.unit_monomial())

    def _compat(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise PolynomialError(f"expected a Polynomial, got {other!r}")
        if other.varset != self.varset or other.field != self.field:
            raise PolynomialError("varset/field mismatch")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.varset == other.varset
            and self.field == other.field
            and self.terms == other.terms
        )

    __hash__ = None  # mutable-dict payload; use lists, not sets

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._compat(other)
        f = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = f.add_raw(terms.get(m, f.zero_raw), c)
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return Polynomial(self.varset, f, terms)

    def __neg__(self) -> "Polynomial":
        f = self.field
        return Polynomial(self.varset, f, {m: f.neg_raw(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._compat(other)
        f = self.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = f.add_raw(out.get(m, f.zero_raw), f.mul_raw(c1, c2))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(self.varset, f, out)

    def scalar_mul(self, c) -> "Polynomial":
        f = self.field
        c = f.coerce_raw(c)
        if not c:
            return Polynomial.zero(self.varset, f)
        return Polynomial(self.varset, f, {m: f.mul_raw(c, v) for m, v in self.terms.items()})

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise PolynomialError("negative polynomial power")
        out = Polynomial.constant(self.varset, self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def star(self) -> "Polynomial":
        """Apply the varset involution to every variable."""
        inv = self.varset.involution
        out = {}
        for m, c in self.terms.items():
            im = [0] * len(m)
            for i, e in enumerate(m):
                im[inv[i]] = e
            out[tuple(im)] = c
        return Polynomial(self.varset, self.field, out)

    # -- order-dependent views ------------------------------------------

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_term(self, order: MonomialOrder):
        m = self.leading_monomial(order)
        return m, FieldElement(self.field, self.terms[m])

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self.terms:
            return self
        f = self.field
        lc = self.terms[self.leading_monomial(order)]
        if lc == f.one_raw:
            return self
        inv = f.inv_raw(lc)
        return Polynomial(self.varset, f, {m: f.mul_raw(inv, c) for m, c in self.terms.items()})

    def sorted_terms(self, order: Optional[MonomialOrder] = None):
        order = order or degrevlex()
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    # -- evaluation and substitution -------------------------------------

    def evaluate(self, assignment: Mapping[str, FieldElement]) -> FieldElement:
        f = self.field
        values = {}
        for name in self.variables_used():
            if name not in assignment:
                raise PolynomialError(f"no value for variable {name!r}")
            values[self.varset.index(name)] = f.coerce_raw(assignment[name])
        acc = f.zero_raw
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t = f.mul_raw(t, f.pow_raw(values[i], e))
            acc = f.add_raw(acc, t)
        return FieldElement(f, acc)

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Ring-homomorphism substitution into a common target varset."""
        target = None
        for img in images.values():
            if target is None:
                target = img
            else:
                target._compat(img)
        if target is None:
            raise PolynomialError("empty image map")
        tv, tf = target.varset, target.field
        by_index = {}
        for name in self.variables_used():
            if name not in images:
                raise PolynomialError(f"no image for variable {name!r}")
            by_index[self.varset.index(name)] = images[name]
        acc = Polynomial.zero(tv, tf)
        for m, c in self.terms.items():
            term = Polynomial.constant(tv, tf, c)
            for i, e in enumerate(m):
                if e:
                    term = term * (by_index[i] ** e)
            acc = acc + term
        return acc

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        return poly_to_string(self)

    def __repr__(self) -> str:
        return f"<poly {poly_to_string(self)}>"


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def scalar_mul(c, f: Polynomial) -> Polynomial:
    return f.scalar_mul(c)


def apply_involution(f: Polynomial) -> Polynomial:
    return f.star()


# ---------------------------------------------------------------------------
# univariate gcd


def univariate_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd by Euclid's algorithm; inputs must share one variable."""
    f._compat(g)
    used = set(f.variables_used()) | set(g.variables_used())
    if len(used) > 1:
        raise PolynomialError(f"gcd needs univariate input, got variables {sorted(used)}")
    order = lex()
    a, b = f, g
    while not b.is_zero():
        a, b = b, _poly_rem(a, b, order)
    return a.monic(order)


def _poly_rem(a: Polynomial, b: Polynomial, order: MonomialOrder) -> Polynomial:
    field = a.field
    lm = b.leading_monomial(order)
    lc = b.terms[lm]
    rem = a
    while not rem.is_zero():
        m = rem.leading_monomial(order)
        if not mono_divides(lm, m):
            break
        c = field.div_raw(rem.terms[m], lc)
        shift = mono_div(m, lm)
        piece = Polynomial(rem.varset, field, {mono_mul(shift, mm): field.mul_raw(c, cc) for mm, cc in b.terms.items()})
        rem = rem - piece
    return rem


# ---------------------------------------------------------------------------
# parser / printer


def poly_to_string(f: Polynomial, order: Optional[MonomialOrder] = None) -> str:
    if f.is_zero():
        return "0"
    field = f.field
    chunks = []
    for m, c in f.sorted_terms(order):
        factors = []
        for i, e in enumerate(m):
            if not e:
                continue
            name = f.varset.names[i]
            factors.append(name if e == 1 else f"{name}^{e}")
        neg = (c < 0) if not field.is_finite else False
        mag = -c if neg else c
        if factors:
            body = "*".join(factors)
            if mag != field.one_raw:
                body = f"{field.raw_to_str(mag)}*{body}"
        else:
            body = field.raw_to_str(mag)
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


_OPERAND_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789(")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "/" and j + 1 < n and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                tokens.append(("num", Fraction(int(text[i:j]), int(text[j + 1:k]))))
                i = k
            else:
                tokens.append(("num", int(text[i:j])))
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            while j < n and text[j] == "'":
                j += 1
            # a star binds to the identifier unless it starts a new operand
            if j < n and text[j] == "*" and (j + 1 >= n or text[j + 1] not in _OPERAND_START):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch))
            i += 1
            continue
        raise PolynomialError(f"bad character {ch!r} in polynomial text")
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, varset: VariableSet, field: FieldSpec):
        self.tokens = tokens
        self.pos = 0
        self.varset = varset
        self.field = field

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        f = self.expr()
        if self.peek()[0] != "end":
            raise PolynomialError(f"trailing input at token {self.peek()!r}")
        return f

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term().scalar_mul(sign)
        while self.peek()[0] in "+-":
            op = self.take()[0]
            t = self.term()
            acc = acc + (t if op == "+" else -t)
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("name", "num", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            kind, val = self.take()
            if kind != "num" or not isinstance(val, int):
                raise PolynomialError("exponent must be an integer")
            return base ** val
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            return Polynomial.constant(self.varset, self.field, val)
        if kind == "name":
            return Polynomial.variable(self.varset, self.field, val)
        if kind == "(":
            inner = self.expr()
            if self.take()[0] != ")":
                raise PolynomialError("missing closing parenthesis")
            return inner
        raise PolynomialError(f"unexpected token {kind!r}")


def parse_polynomial(text: str, varset: VariableSet, field: FieldSpec) -> Polynomial:
    return _Parser(_tokenize(text), varset, field).parse()
