"""Randomised law checks for one operation, shared by the CLI and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .lk_algebra import (
    Kind,
    LKParams,
    Order,
    Region,
    RegionTag,
    iterated_star,
    order_of,
    power,
    region_member,
    special_elements,
    star,
    symmetric_poly_eval,
    transform,
)

MAGNITUDE = 10**6


@dataclass
class LawResult:
    name: str
    checked: int
    counterexample: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def _run(name, samples, draw: Callable, holds: Callable) -> LawResult:
    """Check ``holds`` on ``samples`` draws; ``draw`` returns None to ask for a redraw."""
    for _ in range(samples):
        args = draw()
        while args is None:
            args = draw()
        if not holds(*args):
            return LawResult(name, samples, tuple(args))
    return LawResult(name, samples)


def check_laws(p: LKParams, samples: int, seed: int = 0, magnitude: int = MAGNITUDE) -> list[LawResult]:
    rng = random.Random(seed)

    def x():
        return rng.randint(-magnitude, magnitude)

    results = [
        _run("associativity", samples, lambda: (x(), x(), x()),
             lambda a, b, c: star(p, star(p, a, b), c) == star(p, a, star(p, b, c))),
        _run("commutativity", samples, lambda: (x(), x()),
             lambda a, b: star(p, a, b) == star(p, b, a)),
    ]
    if p.has_transform:
        results.append(_run("conjugation", samples, lambda: (x(), x()),
                            lambda a, b: transform(p, star(p, a, b)) == transform(p, a) * transform(p, b)))
        results.append(_run("power", samples, lambda: (x(), rng.randint(1, 12)),
                            lambda a, n: transform(p, power(p, a, n)) == transform(p, a) ** n))

    sp = special_elements(p)
    if sp.zero is not None:
        results.append(_run("zero absorbs", samples, lambda: (x(),),
                            lambda a: star(p, sp.zero, a) == sp.zero == star(p, a, sp.zero)))
    if sp.identity is not None:
        results.append(_run("identity is neutral", samples, lambda: (x(),),
                            lambda a: star(p, sp.identity, a) == a == star(p, a, sp.identity)))
    if sp.second_unit is not None:
        results.append(_run("second unit squares to identity", 1, lambda: (sp.second_unit,),
                            lambda u2: star(p, u2, u2) == sp.identity))

    if p.kind is not Kind.GENERAL:
        return results

    def xs():
        return [x() for _ in range(rng.randint(1, 8))]

    results.append(_run("symmetric polynomial = iterated product", samples, lambda: (xs(),),
                        lambda v: symmetric_poly_eval(p, v) == iterated_star(p, v)))

    def order_ok(a):
        o = order_of(p, a)
        if o is Order.ORDER1:
            return power(p, a, 2) == a
        if o is Order.ORDER2:
            return power(p, a, 3) == a and power(p, a, 2) != a
        pw = [power(p, a, n) for n in range(1, 7)]
        return len(set(pw)) == len(pw)

    specials = [v for v in (sp.zero, sp.identity, sp.second_unit) if v is not None]
    results.append(_run("finite orders", samples,
                        lambda: (rng.choice(specials) if specials and rng.random() < 0.1 else x(),),
                        order_ok))

    regions = [Region(RegionTag.NO_ZERO), Region(RegionTag.NO_ZERO_NO_U2), Region(RegionTag.NO_ZERO_NO_U2_NO_U)]
    if p.ell > 0:
        regions.append(Region(RegionTag.RIGHT_OF_ZERO))
        regions.append(Region(RegionTag.AT_LEAST_SHIFTED, rng.randint(1, 50)))
    for reg in regions:
        def draw(reg=reg):
            a, b = x(), x()
            if region_member(p, reg, a) and region_member(p, reg, b):
                return a, b
            return None

        results.append(_run(f"closure of {reg.tag.value}", samples, draw,
                            lambda a, b, reg=reg: region_member(p, reg, star(p, a, b))))

    def cancel_draw():
        a = x()
        if a == sp.zero:
            return None
        b = x()
        return a, b, b + rng.choice([-1, 1]) * rng.randint(1, magnitude)

    results.append(_run("cancellativity off the zero", samples, cancel_draw,
                        lambda a, b, b2: star(p, a, b) != star(p, a, b2)))
    return results
