"""Finite value sets of the monochromatic pattern families.

Each generator returns a :class:`PatternValueSet`: the values, plus one
provenance record per value from which the value can be regenerated.
Infinite sequences are truncated to explicit finite prefixes; the sizes are
always parameters.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Union

from .errors import (
    ArityMismatch,
    DegenerateElement,
    DegenerateElementWarning,
    NotInjective,
    SequenceMismatch,
    UndefinedForKind,
)
from .lk_algebra import LKParams, iterated_star, power, star, transform
from .polyring import Polynomial, evaluate, format_polynomial


@dataclass
class PatternValueSet:
    generator: str
    params: dict[str, Any]
    values: list[int] = field(default_factory=list)
    provenance: list[Any] = field(default_factory=list)
    distinct: bool = True
    rejects: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "generator": self.generator,
            "params": _stringify(self.params),
            "values": [str(v) for v in self.values],
            "provenance": _stringify(self.provenance),
            "distinct": self.distinct,
            "rejects": _stringify(self.rejects),
        }


def _stringify(obj):
    """Integers (and fractions) become decimal strings, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, LKParams):
        return [str(obj.ell), str(obj.k)]
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def _all_distinct(values) -> bool:
    return len(set(values)) == len(values)


def _require_transform(p: LKParams, what: str) -> None:
    if not p.has_transform:
        raise UndefinedForKind(f"{what} needs ell != 0; the sum operation has no T")


def symmetric_system(p: LKParams, xs: Sequence[int], max_subset_size: int) -> PatternValueSet:
    """Iterated products over all index sets n1 < ... < ns with s <= max_subset_size.

    Index sets come by size, then lexicographically; provenance holds the
    1-based indices.
    """
    if len(set(xs)) != len(xs):
        raise NotInjective(f"sequence {list(xs)} repeats a value")
    if max_subset_size < 1:
        raise ValueError("max_subset_size must be positive")
    out = PatternValueSet("symmetric", {"lk": p, "xs": list(xs), "max_subset_size": max_subset_size})
    n = len(xs)
    for s in range(1, min(max_subset_size, n) + 1):
        for idx in itertools.combinations(range(1, n + 1), s):
            out.values.append(iterated_star(p, [xs[i - 1] for i in idx]))
            out.provenance.append(list(idx))
    out.distinct = _all_distinct(out.values)
    return out


def _degenerate(image: int) -> bool:
    return image in (0, 1, -1)


def deuber_config(
    p: LKParams, a: Sequence[int], L: int, strict: bool = False
) -> PatternValueSet:
    """a_0, then for j = 1..m and every exponent vector nu in {0..L}^j the element
    a_j * a_0^(nu_0) * ... * a_{j-1}^(nu_{j-1}) (factors with nu_s = 0 dropped).

    Elements with T(a_j) in {0, 1, -1} are reported as degenerate: a warning by
    default, :class:`DegenerateElement` when ``strict``.
    """
    _require_transform(p, "deuber_config")
    if not a:
        raise ValueError("need at least a_0")
    if L < 0:
        raise ValueError("L must be non-negative")
    out = PatternValueSet("deuber", {"lk": p, "a": list(a), "L": L})
    for j, aj in enumerate(a):
        image = transform(p, aj)
        if _degenerate(image):
            if strict:
                raise DegenerateElement(j, image)
            msg = f"a_{j} = {aj} is degenerate (T = {image})"
            out.notes.append(msg)
            warnings.warn(msg, DegenerateElementWarning, stacklevel=2)

    out.values.append(a[0])
    out.provenance.append({"j": 0, "nu": []})
    for j in range(1, len(a)):
        for nu in itertools.product(range(L + 1), repeat=j):
            v = a[j]
            for s, e in enumerate(nu):
                if e:
                    v = star(p, v, power(p, a[s], e))
            out.values.append(v)
            out.provenance.append({"j": j, "nu": list(nu)})
    out.distinct = _all_distinct(out.values)
    return out


def deuber_value(p: LKParams, a: Sequence[int], j: int, nu: Sequence[int]) -> int:
    """Regenerate one configuration value from its provenance via T-images."""
    prod = transform(p, a[j])
    for s, e in enumerate(nu):
        prod *= transform(p, a[s]) ** e
    q, rem = divmod(prod - p.k, p.ell)
    assert rem == 0
    return q


def brauer_chain(p: LKParams, a: int, b: int, L: int) -> PatternValueSet:
    """[a, b, c_1, ..., c_L] with c_j = a * b^(j); ``distinct`` flags collisions."""
    _require_transform(p, "brauer_chain")
    if L < 1:
        raise ValueError("L must be positive")
    out = PatternValueSet("brauer", {"lk": p, "a": a, "b": b, "L": L})
    out.values = [a, b]
    out.provenance = [{"role": "a"}, {"role": "b"}]
    c = a
    for j in range(1, L + 1):
        c = star(p, c, b)
        out.values.append(c)
        out.provenance.append({"j": j})
    out.distinct = _all_distinct(out.values)
    return out


# ------------------------------------------------------------ Milliken-Taylor


@dataclass(frozen=True)
class Combiner:
    """An m-ary function on block values returning an exact rational."""

    arity: int
    fn: Callable[..., Union[int, Fraction]]
    label: str = "f"

    def __call__(self, *args) -> Fraction:
        return Fraction(self.fn(*args))

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "Combiner":
        return cls(poly.arity, lambda *zs: evaluate(poly, zs), format_polynomial(poly))


def fractional_floor_combiner(d: int = 2, denominator: int = 17) -> Combiner:
    """f(z1, z2) = floor({r*z1} * z2) * z2 / (denominator * z1^3) with r = sqrt(d).

    d must be a positive non-square so that r is irrational.  The floor is
    computed exactly: floor({r z1} z2) = isqrt(d z1^2 z2^2) - isqrt(d z1^2) z2
    for positive z1, z2 (and the symmetric identity for negative arguments).
    """
    if d < 2 or math.isqrt(d) ** 2 == d:
        raise ValueError("d must be a positive non-square")

    def floor_sqrt_times(x: int) -> int:
        # floor(sqrt(d) * x) for any integer x
        if x >= 0:
            return math.isqrt(d * x * x)
        return -math.isqrt(d * x * x) - 1

    def fn(z1: int, z2: int) -> Fraction:
        if z1 == 0:
            raise ZeroDivisionError("f is undefined at z1 = 0")
        # {r z1} z2 = r z1 z2 - floor(r z1) z2
        inner = floor_sqrt_times(z1 * z2) - floor_sqrt_times(z1) * z2
        return Fraction(inner * z2, denominator * z1**3)

    return Combiner(2, fn, f"floor({{sqrt({d})*z1}}*z2)*z2/({denominator}*z1^3)")


def _as_combiner(f) -> Combiner:
    if isinstance(f, Combiner):
        return f
    if isinstance(f, Polynomial):
        return Combiner.from_polynomial(f)
    raise TypeError("combiner must be a Polynomial or a Combiner")


def enumerate_ordered_blocks(
    n: int, m: int, max_block_size: Optional[int] = None
) -> list[tuple[tuple[int, ...], ...]]:
    """All F_1 < ... < F_m of nonempty subsets of {1..n} (max F_i < min F_{i+1}).

    Ordered by total size, then by the concatenated index list, then by the
    block sizes.
    """
    if m < 1:
        raise ValueError("m must be positive")
    cap = n if max_block_size is None else max_block_size
    out = []
    for total in range(m, n + 1):
        for idx in itertools.combinations(range(1, n + 1), total):
            # cut the increasing index list into m nonempty consecutive runs
            for cuts in itertools.combinations(range(1, total), m - 1):
                bounds = (0,) + cuts + (total,)
                blocks = tuple(idx[bounds[i]:bounds[i + 1]] for i in range(m))
                if all(len(b) <= cap for b in blocks):
                    out.append(blocks)
    return out


def _block_value(p: LKParams, seq: Sequence[int], block: Sequence[int]) -> int:
    return iterated_star(p, [seq[i - 1] for i in block])


def milliken_taylor_family(
    ps: Sequence[LKParams],
    f: Polynomial | Combiner,
    xseqs: Sequence[Sequence[int]],
    index_bound: int,
    max_block_size: Optional[int] = None,
) -> PatternValueSet:
    """f(x^(1)_F1, ..., x^(m)_Fm) over every F_1 < ... < F_m inside {1..index_bound}.

    x^(j)_F is the iterated product of the j-th sequence over F under ps[j].
    Non-integral outputs go to ``rejects`` instead of ``values``.
    """
    comb = _as_combiner(f)
    m = len(ps)
    if comb.arity != m:
        raise ArityMismatch(f"combiner has arity {comb.arity} but there are {m} blocks")
    if len(xseqs) != m:
        raise ArityMismatch(f"{len(xseqs)} sequences for {m} blocks")
    for j, seq in enumerate(xseqs):
        if len(set(seq)) != len(seq):
            raise NotInjective(f"sequence {j + 1} repeats a value")
        if len(seq) < index_bound:
            raise ValueError(f"sequence {j + 1} is shorter than index_bound = {index_bound}")
    for j, jj in itertools.combinations(range(m), 2):
        if ps[j] == ps[jj] and list(xseqs[j][:index_bound]) != list(xseqs[jj][:index_bound]):
            raise SequenceMismatch(
                f"blocks {j + 1} and {jj + 1} share params {ps[j]} but use different sequences"
            )

    out = PatternValueSet(
        "mt",
        {
            "lks": list(ps),
            "f": comb.label,
            "xs": [list(s[:index_bound]) for s in xseqs],
            "index_bound": index_bound,
            "max_block_size": max_block_size,
        },
    )
    for blocks in enumerate_ordered_blocks(index_bound, m, max_block_size):
        args = [_block_value(p, seq, blk) for p, seq, blk in zip(ps, xseqs, blocks)]
        v = comb(*args)
        prov = [list(b) for b in blocks]
        if v.denominator == 1:
            out.values.append(int(v))
            out.provenance.append(prov)
        else:
            out.rejects.append({"blocks": prov, "value": v})
    out.distinct = _all_distinct(out.values)
    return out

