"""Sparse multivariate polynomials over Q with anti-lexicographic leading terms.

A polynomial in z1..zm is a map from exponent tuples (multi-indices) to nonzero
``Fraction`` coefficients.  Multi-indices are ordered anti-lexicographically:
compare at the largest coordinate where they differ.  The leading term is the
maximum of the support under that order.

Besides the algebra this module holds the positivity checks used when a
polynomial combines block values: the integer-coefficient / positive leading
coefficient test, its rational variant with variable scaling, and a bounded
search for the nested "eventually a positive integer" thresholds.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import (
    ArityMismatch,
    BoundExhausted,
    NonIntegerCoefficients,
    PolynomialParseError,
    ZeroPolynomial,
)

MultiIndex = tuple[int, ...]


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def antilex_compare(a: Sequence[int], b: Sequence[int]) -> Ordering:
    if len(a) != len(b):
        raise ArityMismatch(f"multi-indices of lengths {len(a)} and {len(b)}")
    for i in range(len(a) - 1, -1, -1):
        if a[i] != b[i]:
            return Ordering.LESS if a[i] < b[i] else Ordering.GREATER
    return Ordering.EQUAL


def antilex_key(alpha: Sequence[int]) -> tuple[int, ...]:
    """Sort key realising the anti-lex order (lex order on the reversed tuple)."""
    return tuple(reversed(alpha))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact (int, Fraction or str), got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("arity", "_terms")

    def __init__(self, arity: int, terms: Mapping[Sequence[int], object] | Iterable = ()):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MultiIndex, Fraction] = {}
        for alpha, c in items:
            alpha = tuple(int(e) for e in alpha)
            if len(alpha) != arity:
                raise ArityMismatch(f"multi-index {alpha} has length {len(alpha)}, expected {arity}")
            if any(e < 0 for e in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            acc[alpha] = acc.get(alpha, Fraction(0)) + _as_fraction(c)
        self._terms = {a: c for a, c in acc.items() if c != 0}

    @classmethod
    def constant(cls, arity: int, c) -> "Polynomial":
        return cls(arity, {(0,) * arity: c})

    @classmethod
    def variable(cls, i: int, arity: int) -> "Polynomial":
        """The monomial z_i (1-based)."""
        if not 1 <= i <= arity:
            raise ValueError(f"variable z{i} outside arity {arity}")
        alpha = [0] * arity
        alpha[i - 1] = 1
        return cls(arity, {tuple(alpha): 1})

    @property
    def terms(self) -> dict[MultiIndex, Fraction]:
        return dict(self._terms)

    @property
    def support(self) -> frozenset[MultiIndex]:
        return frozenset(self._terms)

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(alpha), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.arity)

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self) -> list[tuple[MultiIndex, Fraction]]:
        """Terms by decreasing anti-lex multi-index (leading term first)."""
        return sorted(self._terms.items(), key=lambda t: antilex_key(t[0]), reverse=True)

    def _check(self, other: "Polynomial") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(f"arities {self.arity} and {other.arity}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.arity, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return Polynomial(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.arity, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[MultiIndex, Fraction] = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, Fraction(0)) + c * d
        return Polynomial(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.arity, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.arity == other.arity and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.arity, frozenset(self._terms.items())))

    def __call__(self, *point):
        return evaluate(self, point)

    def __repr__(self):
        return f"Polynomial({self.arity}, {format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    def scaled(self, factors: Sequence[int]) -> "Polynomial":
        """P(z1*N1, ..., zm*Nm) expanded."""
        if len(factors) != self.arity:
            raise ArityMismatch(f"{len(factors)} scaling factors for arity {self.arity}")
        out = {}
        for alpha, c in self._terms.items():
            mult = 1
            for n, e in zip(factors, alpha):
                mult *= n**e
            out[alpha] = c * mult
        return Polynomial(self.arity, out)


def leading_term(p: Polynomial) -> tuple[MultiIndex, Fraction]:
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no leading term")
    alpha = max(p.support, key=antilex_key)
    return alpha, p.coefficient(alpha)


def evaluate(p: Polynomial, point: Sequence) -> Fraction:
    if len(point) != p.arity:
        raise ArityMismatch(f"point of length {len(point)} for arity {p.arity}")
    pt = [_as_fraction(x) for x in point]
    total = Fraction(0)
    for alpha, c in p._terms.items():
        term = c
        for x, e in zip(pt, alpha):
            if e:
                term *= x**e
        total += term
    return total


def _require_nonzero(p: Polynomial) -> None:
    if p.is_zero():
        raise ZeroPolynomial("condition checks need a nonzero polynomial")


def check_dagger_sufficient(p: Polynomial) -> bool:
    """Integer coefficients and a positive leading coefficient."""
    _require_nonzero(p)
    if any(c.denominator != 1 for c in p._terms.values()):
        raise NonIntegerCoefficients(f"{p} has non-integer coefficients")
    return leading_term(p)[1] > 0


def check_ddagger_sufficient(p: Polynomial) -> Optional[int]:
    """Scaling factor N for the rational variant, or None if the test does not apply.

    Applies when the leading coefficient is positive and there is no constant
    term; N is the lcm of the coefficient denominators, which makes every
    coefficient of P(z1*N, ..., zm*N) integral.
    """
    _require_nonzero(p)
    if leading_term(p)[1] <= 0 or p.constant_term != 0:
        return None
    return math.lcm(*(c.denominator for c in p._terms.values()))


@dataclass
class ThresholdNode:
    """One level of the nested threshold table.

    ``threshold`` is the least admissible value of this level's variable; for a
    non-final level ``children[n]`` is the table for the next variable with this
    one fixed to n, for every n in [threshold, bound].
    """

    threshold: int
    children: dict[int, "ThresholdNode"] = field(default_factory=dict)

    def to_json(self):
        out = {"threshold": str(self.threshold)}
        if self.children:
            out["children"] = {str(n): c.to_json() for n, c in self.children.items()}
        return out


@dataclass
class DaggerWitness:
    thresholds: ThresholdNode
    verified_bound: int
    scaling: Optional[tuple[int, ...]] = None

    def probed_tuples(self) -> Iterator[tuple[int, ...]]:
        """Every tuple covered by the thresholds, in increasing lex order."""

        def walk(node, prefix):
            if not node.children:
                for n in range(node.threshold, self.verified_bound + 1):
                    yield prefix + (n,)
                return
            for n in sorted(node.children):
                yield from walk(node.children[n], prefix + (n,))

        yield from walk(self.thresholds, ())

    def to_json(self):
        return {
            "verified_bound": str(self.verified_bound),
            "scaling": None if self.scaling is None else [str(n) for n in self.scaling],
            "thresholds": self.thresholds.to_json(),
        }


def _positive_integer(v: Fraction) -> bool:
    return v.denominator == 1 and v > 0


def witness_thresholds(
    p: Polynomial | Callable[..., Fraction],
    probe_bound: int,
    scaling: Optional[Sequence[int]] = None,
    arity: Optional[int] = None,
) -> DaggerWitness:
    """Bounded check of the nested statement "exists n1bar, for all n1 >= n1bar,
    exists n2bar ... the (scaled) value is a positive integer".

    Each level keeps the least threshold found by scanning down from the bound:
    a value n is admissible when the rest of the statement holds with this
    variable fixed to n, and the threshold is the start of the admissible run
    ending at the bound.  Fails when the bound itself is not admissible.
    """
    if probe_bound < 1:
        raise ValueError("probe_bound must be positive")
    if isinstance(p, Polynomial):
        _require_nonzero(p)
        m = p.arity
        fn = lambda *xs: evaluate(p, xs)  # noqa: E731
    else:
        if arity is None:
            raise ValueError("arity is required for a plain callable")
        m = arity
        fn = p
    if scaling is not None:
        scaling = tuple(int(n) for n in scaling)
        if len(scaling) != m or any(n < 1 for n in scaling):
            raise ArityMismatch(f"need {m} positive scaling factors, got {scaling}")
    factors = scaling or (1,) * m

    def value(prefix):
        return Fraction(fn(*(n * f for n, f in zip(prefix, factors))))

    def level(prefix):
        # returns (node, None) on success or (None, failing tuple) otherwise
        depth = len(prefix)
        children = {}
        threshold = probe_bound + 1
        failure = None
        for n in range(probe_bound, 0, -1):
            tup = prefix + (n,)
            if depth == m - 1:
                ok = _positive_integer(value(tup))
                sub_fail = None if ok else tup
                child = None
            else:
                child, sub_fail = level(tup)
                ok = child is not None
            if not ok:
                failure = sub_fail
                break
            threshold = n
            if child is not None:
                children[n] = child
        if threshold > probe_bound:
            return None, failure
        return ThresholdNode(threshold, dict(sorted(children.items()))), None

    node, failure = level(())
    if node is None:
        raise BoundExhausted(failure, value(failure))
    return DaggerWitness(node, probe_bound, scaling)


def replay_witness(p: Polynomial, witness: DaggerWitness) -> bool:
    """Re-evaluate every covered tuple from scratch."""
    factors = witness.scaling or (1,) * p.arity
    for tup in witness.probed_tuples():
        if not _positive_integer(evaluate(p, [n * f for n, f in zip(tup, factors)])):
            return False
    return True


# ---------------------------------------------------------------- text format

_TERM_SPLIT = re.compile(r"([+-])")
_VAR = re.compile(r"^z(\d+)(?:\^(\d+))?$")
_NUM = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse_polynomial(text: str, arity: Optional[int] = None) -> Polynomial:
    """Parse ``c * z1^a1 * ... * zm^am`` terms joined by ``+``/``-``.

    Coefficients may be written ``p/q``; the arity defaults to the largest
    variable index used.
    """
    src = text.replace(" ", "")
    if not src:
        raise PolynomialParseError("empty polynomial text")
    pieces = _TERM_SPLIT.split(src)
    # pieces alternates [term, sign, term, sign, ...]; a leading sign gives an empty first term
    signed_terms = []
    sign = 1
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    if len(pieces) % 2:
        raise PolynomialParseError(f"dangling operator in {text!r}")
    for i in range(0, len(pieces), 2):
        sign = -1 if pieces[i] == "-" else 1
        body = pieces[i + 1]
        if not body:
            raise PolynomialParseError(f"empty term in {text!r}")
        signed_terms.append((sign, body))

    parsed = []
    max_var = 0
    for sign, body in signed_terms:
        coeff = Fraction(sign)
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            if m := _VAR.match(factor):
                idx = int(m.group(1))
                if idx < 1:
                    raise PolynomialParseError(f"variables are numbered from z1, got {factor!r}")
                exps[idx] = exps.get(idx, 0) + int(m.group(2) or 1)
                max_var = max(max_var, idx)
            elif m := _NUM.match(factor):
                den = int(m.group(2) or 1)
                if den == 0:
                    raise PolynomialParseError(f"zero denominator in {factor!r}")
                coeff *= Fraction(int(m.group(1)), den)
            else:
                raise PolynomialParseError(f"cannot parse factor {factor!r} in {text!r}")
        parsed.append((coeff, exps))

    if arity is None:
        arity = max(max_var, 1)
    elif max_var > arity:
        raise ArityMismatch(f"z{max_var} used with arity {arity}")
    terms = []
    for coeff, exps in parsed:
        alpha = [0] * arity
        for idx, e in exps.items():
            alpha[idx - 1] = e
        terms.append((tuple(alpha), coeff))
    return Polynomial(arity, terms)


def _format_monomial(alpha: MultiIndex) -> list[str]:
    return [f"z{i}" if e == 1 else f"z{i}^{e}" for i, e in enumerate(alpha, 1) if e]


def format_polynomial(p: Polynomial) -> str:
    """Canonical text, leading term first; ``parse_polynomial`` inverts it."""
    if p.is_zero():
        return "0"
    out = []
    for alpha, c in p.sorted_terms():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = _format_monomial(alpha)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if not out:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
