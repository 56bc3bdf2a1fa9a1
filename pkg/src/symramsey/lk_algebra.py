"""The associative operations a * b = l*a*b + k*(a+b) + k(k-1)/l on the integers.

Every operation with l != 0 is conjugate to ordinary multiplication through the
affine map T(a) = l*a + k, whose image S = {l*a + k} is closed under products
exactly when l divides k(k-1).  Two degenerate members are also admitted:
(l, 0), the scaled product l*a*b, and (0, 1), ordinary addition.

All arithmetic is on Python ints, so nothing overflows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    EmptyInput,
    InvalidParams,
    NoIdentity,
    RegionRequiresPositiveEll,
    UndefinedForKind,
    UndefinedTransform,
)


class Kind(enum.Enum):
    GENERAL = "General"
    SCALED_PRODUCT = "ScaledProduct"
    SUM = "Sum"


@dataclass(frozen=True)
class LKParams:
    """A validated pair (ell, k).  Build with :func:`validate_params`."""

    ell: int
    k: int
    kind: Kind
    # k(k-1)/ell, exact; only meaningful for GENERAL
    offset: int = field(default=0, compare=False, repr=False)

    @property
    def has_transform(self) -> bool:
        return self.kind is not Kind.SUM

    def __str__(self) -> str:
        return f"({self.ell},{self.k})"


def validate_params(ell: int, k: int) -> LKParams:
    ell, k = int(ell), int(k)
    if ell == 0:
        if k == 1:
            return LKParams(0, 1, Kind.SUM)
        raise InvalidParams(f"ell = 0 is only allowed with k = 1, got k = {k}")
    if k == 0:
        return LKParams(ell, 0, Kind.SCALED_PRODUCT)
    prod = k * (k - 1)
    if prod % ell:
        raise InvalidParams(f"{ell} does not divide k(k-1) = {prod}")
    return LKParams(ell, k, Kind.GENERAL, prod // ell)


def parse_params(text: str) -> LKParams:
    """Parse ``"ell,k"`` into validated params."""
    parts = text.replace(" ", "").split(",")
    if len(parts) != 2:
        raise InvalidParams(f"expected 'ell,k', got {text!r}")
    try:
        ell, k = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise InvalidParams(f"expected integers in {text!r}") from exc
    return validate_params(ell, k)


def transform(p: LKParams, a: int) -> int:
    if p.kind is Kind.SUM:
        raise UndefinedTransform("T is undefined for the sum operation (ell = 0)")
    return p.ell * a + p.k


def star(p: LKParams, a: int, b: int) -> int:
    if p.kind is Kind.GENERAL:
        return p.ell * a * b + p.k * (a + b) + p.offset
    if p.kind is Kind.SCALED_PRODUCT:
        return p.ell * a * b
    return a + b


def iterated_star(p: LKParams, xs: Sequence[int]) -> int:
    it = iter(xs)
    try:
        acc = next(it)
    except StopIteration:
        raise EmptyInput("iterated_star needs at least one element") from None
    for x in it:
        acc = star(p, acc, x)
    return acc


def elementary_symmetric(xs: Sequence[int]) -> list[int]:
    """Return [e_0, e_1, ..., e_n] as the coefficients of prod (t + x_i)."""
    e = [1] + [0] * len(xs)
    for i, x in enumerate(xs, 1):
        for j in range(i, 0, -1):
            e[j] += x * e[j - 1]
    return e


def symmetric_poly_eval(p: LKParams, xs: Sequence[int]) -> int:
    """Evaluate sum_j ell^(j-1) k^(n-j) e_j(xs) + (k^n - k)/ell."""
    if p.kind is not Kind.GENERAL:
        raise UndefinedForKind(f"symmetric polynomial needs ell, k != 0; got {p.kind.value}")
    n = len(xs)
    if n == 0:
        raise EmptyInput("symmetric_poly_eval needs at least one element")
    ell, k = p.ell, p.k
    e = elementary_symmetric(xs)
    total = sum(ell ** (j - 1) * k ** (n - j) * e[j] for j in range(1, n + 1))
    q, rem = divmod(k**n - k, ell)
    assert rem == 0, "ell | k(k-1) implies ell | k^n - k"
    return total + q


@dataclass(frozen=True)
class SpecialElements:
    zero: Optional[int] = None
    identity: Optional[int] = None
    second_unit: Optional[int] = None


def _exact_neg_quotient(num: int, den: int) -> Optional[int]:
    q, rem = divmod(-num, den)
    return None if rem else q


def special_elements(p: LKParams) -> SpecialElements:
    """Zero -k/ell, identity -(k-1)/ell and second unit -(k+1)/ell, when integral.

    The sum operation has only the identity 0.  For the scaled product the same
    divisibility rules apply with k = 0 (zero 0, identity 1/ell when ell = +-1).
    """
    if p.kind is Kind.SUM:
        return SpecialElements(identity=0)
    ell, k = p.ell, p.k
    return SpecialElements(
        zero=_exact_neg_quotient(k, ell),
        identity=_exact_neg_quotient(k - 1, ell),
        second_unit=_exact_neg_quotient(k + 1, ell),
    )


def power(p: LKParams, a: int, n: int) -> int:
    """n-fold product a * a * ... * a; n = 0 gives the identity if there is one."""
    if n < 0:
        raise ValueError("power exponent must be non-negative")
    if n == 0:
        u = special_elements(p).identity
        if u is None:
            raise NoIdentity(f"{p} has no identity element, a^(0) is undefined")
        return u
    # square-and-multiply over the operation itself (associativity)
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else star(p, result, base)
        n >>= 1
        if n:
            base = star(p, base, base)
    return result


class Order(enum.Enum):
    ORDER1 = "Order1"
    ORDER2 = "Order2"
    INFINITE = "Infinite"


def order_of(p: LKParams, a: int) -> Order:
    if p.kind is not Kind.GENERAL:
        raise UndefinedForKind("order_of is defined for the general operations only")
    sp = special_elements(p)
    if a == sp.zero or a == sp.identity:
        return Order.ORDER1
    if a == sp.second_unit:
        return Order.ORDER2
    return Order.INFINITE


class RegionTag(enum.Enum):
    NO_ZERO = "NoZero"
    NO_ZERO_NO_U2 = "NoZeroNoU2"
    NO_ZERO_NO_U2_NO_U = "NoZeroNoU2NoU"
    RIGHT_OF_ZERO = "RightOfZero"
    AT_LEAST_SHIFTED = "AtLeastShifted"


@dataclass(frozen=True)
class Region:
    tag: RegionTag
    N: Optional[int] = None

    def __post_init__(self):
        if self.tag is RegionTag.AT_LEAST_SHIFTED:
            if self.N is None or self.N < 1:
                raise ValueError("AtLeastShifted needs a positive N")
        elif self.N is not None:
            raise ValueError(f"{self.tag.value} takes no N")

    @classmethod
    def all_tags(cls, N: int = 1) -> list["Region"]:
        return [
            cls(RegionTag.NO_ZERO),
            cls(RegionTag.NO_ZERO_NO_U2),
            cls(RegionTag.NO_ZERO_NO_U2_NO_U),
            cls(RegionTag.RIGHT_OF_ZERO),
            cls(RegionTag.AT_LEAST_SHIFTED, N),
        ]


# T-images excluded by the three punctured regions
_EXCLUDED_IMAGES = {
    RegionTag.NO_ZERO: (0,),
    RegionTag.NO_ZERO_NO_U2: (0, -1),
    RegionTag.NO_ZERO_NO_U2_NO_U: (0, -1, 1),
}


def region_member(p: LKParams, r: Region, a: int) -> bool:
    if p.kind is not Kind.GENERAL:
        raise UndefinedForKind("regions are defined for the general operations only")
    if r.tag in _EXCLUDED_IMAGES:
        return transform(p, a) not in _EXCLUDED_IMAGES[r.tag]
    if p.ell <= 0:
        raise RegionRequiresPositiveEll(f"{r.tag.value} requires ell > 0, got ell = {p.ell}")
    zero = Fraction(-p.k, p.ell)
    if r.tag is RegionTag.RIGHT_OF_ZERO:
        return a > zero
    return a >= zero + Fraction(r.N, p.ell)

