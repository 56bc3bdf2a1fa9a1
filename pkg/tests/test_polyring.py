import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from symramsey.errors import (
    ArityMismatch,
    BoundExhausted,
    NonIntegerCoefficients,
    PolynomialParseError,
    ZeroPolynomial,
)
from symramsey.polyring import (
    Ordering,
    Polynomial,
    antilex_compare,
    check_dagger_sufficient,
    check_ddagger_sufficient,
    evaluate,
    format_polynomial,
    leading_term,
    parse_polynomial,
    replay_witness,
    witness_thresholds,
)

F = parse_polynomial("-3*z1+2*z2*z3")


def rational_polys(arity=3, max_terms=5):
    mono = st.tuples(*[st.integers(0, 3)] * arity)
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(bool)
    return st.dictionaries(mono, coeff, max_size=max_terms).map(lambda d: Polynomial(arity, d))


def to_sympy(p: Polynomial):
    zs = sympy.symbols(f"z1:{p.arity + 1}")
    return sum(
        (sympy.Rational(c.numerator, c.denominator) * sympy.prod([z**e for z, e in zip(zs, a)]) for a, c in p.terms.items()),
        sympy.Integer(0),
    ), zs


# ------------------------------------------------------------ anti-lex order


@pytest.mark.parametrize(
    "a,b,want",
    [((1, 0), (0, 1), Ordering.LESS), ((3, 2, 1), (3, 2, 1), Ordering.EQUAL), ((0, 5, 1), (9, 0, 1), Ordering.GREATER)],
)
def test_antilex_examples(a, b, want):
    assert antilex_compare(a, b) is want


def test_antilex_arity_mismatch():
    with pytest.raises(ArityMismatch):
        antilex_compare((1,), (1, 2))


def test_antilex_is_total_order():
    for m in (1, 2, 3):
        idx = list(itertools.product(range(4), repeat=m))
        cmp = {(a, b): antilex_compare(a, b) for a in idx for b in idx}
        for a in idx:
            assert cmp[a, a] is Ordering.EQUAL
        for a, b in itertools.product(idx, repeat=2):
            assert (cmp[a, b] is Ordering.LESS) == (cmp[b, a] is Ordering.GREATER)
            assert (cmp[a, b] is Ordering.EQUAL) == (a == b)
        for a, b, c in itertools.product(idx, repeat=3):
            if cmp[a, b] is Ordering.LESS and cmp[b, c] is Ordering.LESS:
                assert cmp[a, c] is Ordering.LESS


# -------------------------------------------------------------- arithmetic


def test_leading_term_examples():
    assert leading_term(F) == ((0, 1, 1), 2)
    assert leading_term(parse_polynomial("7*z1")) == ((1,), 7)
    assert leading_term(parse_polynomial("z1^3 + z2")) == ((0, 1), 1)
    with pytest.raises(ZeroPolynomial):
        leading_term(Polynomial(2))


def test_evaluate_examples():
    assert evaluate(F, (1, 2, 3)) == 9
    assert evaluate(parse_polynomial("1/2*z1"), (3,)) == Fraction(3, 2)
    assert evaluate(parse_polynomial("z1*z2 + 5", 2), (0, 0)) == 5
    with pytest.raises(ArityMismatch):
        evaluate(F, (1, 2))


@given(rational_polys(), rational_polys())
def test_ring_ops_match_sympy(p, q):
    sp, zs = to_sympy(p)
    sq, _ = to_sympy(q)
    for got, want in [(p + q, sp + sq), (p - q, sp - sq), (p * q, sp * sq)]:
        assert sympy.expand(to_sympy(got)[0] - want) == 0


@given(rational_polys(), st.tuples(*[st.fractions(min_value=-10, max_value=10, max_denominator=5)] * 3))
def test_evaluate_matches_sympy(p, point):
    sp, zs = to_sympy(p)
    want = sp.subs(dict(zip(zs, [sympy.Rational(x.numerator, x.denominator) for x in point])))
    assert evaluate(p, point) == Fraction(int(sympy.numer(want)), int(sympy.denom(want)))


@given(rational_polys(), rational_polys())
def test_leading_term_of_sum(p, q):
    s = p + q
    if p.is_zero() or q.is_zero() or s.is_zero():
        return
    lp, lq, ls = leading_term(p)[0], leading_term(q)[0], leading_term(s)[0]
    top = lp if antilex_compare(lp, lq) is not Ordering.LESS else lq
    assert antilex_compare(ls, top) is not Ordering.GREATER
    if lp != lq:
        assert ls == top


# --------------------------------------------------------- condition checks


def test_dagger_examples():
    assert check_dagger_sufficient(F) is True
    assert check_dagger_sufficient(parse_polynomial("-z1")) is False
    with pytest.raises(NonIntegerCoefficients):
        check_dagger_sufficient(parse_polynomial("1/2*z1"))
    with pytest.raises(ZeroPolynomial):
        check_dagger_sufficient(Polynomial(1))


def test_ddagger_examples():
    assert check_ddagger_sufficient(parse_polynomial("1/2*z1 + z2")) == 2
    assert check_ddagger_sufficient(parse_polynomial("z1*z2")) == 1
    assert check_ddagger_sufficient(parse_polynomial("1/3*z1 + 5")) is None
    assert check_ddagger_sufficient(parse_polynomial("-1/3*z1")) is None


@given(rational_polys())
def test_ddagger_scaling_makes_integral(p):
    if p.is_zero():
        return
    p = p - p.constant_term
    if p.is_zero():
        return
    N = check_ddagger_sufficient(p)
    if N is None:
        assert leading_term(p)[1] < 0
        return
    # expand P(N z1, ..., N zm) independently with sympy
    sp, zs = to_sympy(p)
    scaled = sympy.Poly(sympy.expand(sp.subs({z: N * z for z in zs}, simultaneous=True)), *zs)
    assert all(c.is_integer for c in scaled.coeffs())


def test_witness_examples():
    w = witness_thresholds(F, 10)
    assert w.thresholds.threshold == 1
    assert replay_witness(F, w)
    # z3 >= 2*n1 always suffices once z2 is at its threshold
    for n1, node in w.thresholds.children.items():
        assert node.children[node.threshold].threshold <= 2 * n1
    assert witness_thresholds(parse_polynomial("z1"), 3).thresholds.threshold == 1
    with pytest.raises(BoundExhausted) as exc:
        witness_thresholds(parse_polynomial("-z1"), 10)
    assert exc.value.counterexample == (10,)


def test_witness_thresholds_are_least():
    # 2 z2 z3 - 3 z1 > 0 with z2 = 1 needs z3 > 3 z1 / 2
    w = witness_thresholds(F, 10)
    node = w.thresholds.children[4].children[1]
    assert node.threshold == 7


def test_witness_with_scaling():
    p = parse_polynomial("1/2*z1 + z2")
    w = witness_thresholds(p, 4, scaling=[2, 2])
    assert w.thresholds.threshold == 1 and replay_witness(p, w)
    # unscaled, odd z1 gives a half-integer, so only z1 = 4 survives
    assert witness_thresholds(p, 4).thresholds.threshold == 4
    with pytest.raises(ArityMismatch):
        witness_thresholds(p, 4, scaling=[2])


@settings(max_examples=40)
@given(rational_polys(arity=2, max_terms=4))
def test_witness_replay(p):
    if p.is_zero():
        return
    try:
        w = witness_thresholds(p, 5)
    except BoundExhausted as exc:
        v = evaluate(p, exc.counterexample)
        assert not (v.denominator == 1 and v > 0)
        return
    assert replay_witness(p, w)
    assert all(t[-1] <= 5 for t in w.probed_tuples())


# --------------------------------------------------------------- text format


def test_parse_and_format():
    assert format_polynomial(F) == "2*z2*z3 - 3*z1"
    assert parse_polynomial("2*z2*z3 - 3*z1") == F
    p = parse_polynomial("1/2*z1^2*z3 - z2 + 4")
    assert p.arity == 3 and p.coefficient((2, 0, 1)) == Fraction(1, 2) and p.constant_term == 4
    assert parse_polynomial("z1 + z1") == parse_polynomial("2*z1")
    assert format_polynomial(Polynomial(2)) == "0"


@pytest.mark.parametrize("bad", ["", "z0", "3**z1", "z1 +", "x1", "1/0*z1", "z1^"])
def test_parse_errors(bad):
    with pytest.raises(PolynomialParseError):
        parse_polynomial(bad)


def test_parse_arity_check():
    with pytest.raises(ArityMismatch):
        parse_polynomial("z3", arity=2)


@given(rational_polys())
def test_format_round_trip(p):
    assert parse_polynomial(format_polynomial(p), arity=p.arity) == p
