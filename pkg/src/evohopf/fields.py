"""Exact ground-field arithmetic: arbitrary-precision rationals and GF(p).

Every element carries its field spec, so mixing fields is a hard error
instead of a silent coercion.  No floating point anywhere: rationals are
`fractions.Fraction`, prime-field elements are canonical residues in
[0, p).  Only Q and prime fields GF(p) are supported (no extension
fields).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Raw = Union[int, Fraction]

RATIONALS = "rationals"
PRIME_FIELD = "prime_field"


class FieldError(ValueError):
    """Spec mismatch, division by zero, or an invalid field request."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: Q (characteristic 0) or GF(p) for a prime p."""

    kind: str
    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.kind == RATIONALS:
            if self.characteristic != 0:
                raise FieldError("rationals have characteristic 0")
        elif self.kind == PRIME_FIELD:
            if not is_prime(self.characteristic):
                raise FieldError(
                    f"prime field needs a prime characteristic, got {self.characteristic}"
                )
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    # -- constructors ------------------------------------------------

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec(RATIONALS, 0)

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec(PRIME_FIELD, p)

    @staticmethod
    def from_json(doc) -> "FieldSpec":
        """Parse {"field": "Q"} or {"field": "GF", "p": 7}."""
        if not isinstance(doc, dict) or "field" not in doc:
            raise FieldError(f"not a field spec: {doc!r}")
        if doc["field"] == "Q":
            return FieldSpec.rationals()
        if doc["field"] == "GF":
            return FieldSpec.prime(int(doc["p"]))
        raise FieldError(f"unknown field {doc['field']!r}")

    @staticmethod
    def from_flag(text: str) -> "FieldSpec":
        """Parse the CLI syntax ``Q`` or ``GF:p``."""
        if text == "Q":
            return FieldSpec.rationals()
        if text.startswith("GF:"):
            return FieldSpec.prime(int(text[3:]))
        raise FieldError(f"bad field flag {text!r}; expected Q or GF:p")

    def to_json(self) -> dict:
        if self.kind == RATIONALS:
            return {"field": "Q"}
        return {"field": "GF", "p": self.characteristic}

    # -- raw-value arithmetic ----------------------------------------
    #
    # Raw values (int residues / Fractions) are what Polynomial stores;
    # FieldElement is the checked boundary type built on top of these.

    @property
    def is_finite(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def zero_raw(self) -> Raw:
        return 0 if self.is_finite else Fraction(0)

    @property
    def one_raw(self) -> Raw:
        return 1 if self.is_finite else Fraction(1)

    def coerce_raw(self, value) -> Raw:
        """Canonical raw value from an int, Fraction, string, or FieldElement."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError(f"element of {value.spec} used in {self}")
            return value.value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise FieldError(f"cannot coerce {value!r} into {self}")
        if self.is_finite:
            p = self.characteristic
            if isinstance(value, Fraction):
                if value.denominator % p == 0:
                    raise FieldError(f"denominator of {value} vanishes mod {p}")
                return (
                    value.numerator * pow(value.denominator, p - 2, p)
                ) % p
            return value % p
        return Fraction(value)

    def add_raw(self, a: Raw, b: Raw) -> Raw:
        return (a + b) % self.characteristic if self.is_finite else a + b

    def sub_raw(self, a: Raw, b: Raw) -> Raw:
        return (a - b) % self.characteristic if self.is_finite else a - b

    def mul_raw(self, a: Raw, b: Raw) -> Raw:
        return (a * b) % self.characteristic if self.is_finite else a * b

    def neg_raw(self, a: Raw) -> Raw:
        return (-a) % self.characteristic if self.is_finite else -a

    def inv_raw(self, a: Raw) -> Raw:
        if not a:
            raise FieldError("division by zero")
        if self.is_finite:
            p = self.characteristic
            return pow(a, p - 2, p)
        return 1 / Fraction(a)

    def div_raw(self, a: Raw, b: Raw) -> Raw:
        return self.mul_raw(a, self.inv_raw(b))

    def pow_raw(self, a: Raw, e: int) -> Raw:
        if e < 0:
            return self.pow_raw(self.inv_raw(a), -e)
        if self.is_finite:
            return pow(a, e, self.characteristic)
        return Fraction(a) ** e

    def raw_to_str(self, a: Raw) -> str:
        return str(a)

    # -- element construction ----------------------------------------

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce_raw(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, self.zero_raw)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self.one_raw)

    def __str__(self) -> str:
        return "Q" if self.kind == RATIONALS else f"GF({self.characteristic})"


@dataclass(frozen=True)
class FieldElement:
    """A scalar in canonical form, tagged with its field spec."""

    spec: FieldSpec
    value: Raw

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise FieldError(f"expected a FieldElement, got {other!r}")
        if other.spec != self.spec:
            raise FieldError(f"field mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.add_raw(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.sub_raw(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_raw(self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.div_raw(self.value, other.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg_raw(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow_raw(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv_raw(self.value))

    def __bool__(self) -> bool:
        return bool(self.value)

    def __str__(self) -> str:
        return self.spec.raw_to_str(self.value)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def enumerate_field(spec: FieldSpec) -> Iterator[FieldElement]:
    """All elements of a finite field, in the order 0, 1, ..., p-1."""
    if not spec.is_finite:
        raise FieldError("cannot enumerate an infinite field")
    for r in range(spec.characteristic):
        yield FieldElement(spec, r)


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)
