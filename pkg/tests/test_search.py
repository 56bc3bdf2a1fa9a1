import itertools

import pytest
from hypothesis import given, settings, strategies as st

from symramsey.errors import ArityMismatch, DomainIncompatible, MalformedCertificate, UndefinedForKind
from symramsey.lk_algebra import star, transform, validate_params
from symramsey.polyring import parse_polynomial
from symramsey.search import (
    BudgetExceeded,
    ColoringCertificate,
    Generator,
    PatternFamilySpec,
    ResultKind,
    enumerate_instances,
    find_avoiding_coloring,
    min_ramsey_threshold,
    star_triple,
    verify_certificate,
)


def P(ell, k):
    return validate_params(ell, k)


def naive_avoiding(instances, elements, r):
    """Every r-coloring, in lex order; the first one with no monochromatic instance."""
    pos = {x: i for i, x in enumerate(elements)}
    for colors in itertools.product(range(1, r + 1), repeat=len(elements)):
        if all(len({colors[pos[x]] for x in inst}) > 1 for inst in instances):
            return colors
    return None


def canonical_relabel(colors):
    """Rename colors in order of first appearance."""
    names = {}
    return tuple(names.setdefault(c, len(names) + 1) for c in colors)


# ---------------------------------------------------------------- instances


def test_instance_examples():
    assert enumerate_instances(star_triple(P(0, 1)), 3) == [(1, 2, 3)]
    got = enumerate_instances(star_triple(P(1, 1)), 11)
    assert {(1, 2, 5), (1, 3, 7), (2, 3, 11)} <= set(got)
    assert enumerate_instances(star_triple(P(1, 1)), 4) == []


def test_star_triples_match_definition():
    for lk in [(1, 1), (2, 2), (2, 1), (3, 4), (0, 1)]:
        p = P(*lk)
        for distinct in (True, False):
            want = set()
            for a in range(1, 31):
                for b in range(a, 31):
                    c = star(p, a, b)
                    if 1 <= c <= 30:
                        s = {a, b, c}
                        if distinct and len(s) < 3:
                            continue
                        want.add(tuple(sorted(s)))
            assert set(enumerate_instances(star_triple(p, distinct), 30)) == want


def test_star_triple_conjugation_equivariance():
    # a -> l*a + k maps triples onto multiplicative triples of the image set
    for lk in [(1, 1), (2, 2), (2, 1), (3, 4)]:
        p = P(*lk)
        N = 60
        image = {transform(p, a) for a in range(1, N + 1)}
        mapped = {tuple(sorted(transform(p, x) for x in t)) for t in enumerate_instances(star_triple(p), N)}
        direct = {
            (x, y, x * y)
            for x in image
            for y in image
            if x < y and x * y in image
        }
        assert mapped == direct


def test_signed_domain_and_negative_ell():
    spec = star_triple(P(-1, 1), signed=True)
    insts = enumerate_instances(spec, 4)
    assert all(-4 <= x <= 4 for t in insts for x in t)
    with pytest.raises(DomainIncompatible):
        enumerate_instances(star_triple(P(-1, 1)), 4)


def test_other_generators_enumerate():
    p = P(1, 1)
    brauer = PatternFamilySpec(Generator.BRAUER_CHAIN, (p,), L=2)
    for inst in enumerate_instances(brauer, 40):
        assert len(inst) == 4
    assert (1, 2, 5, 17) in enumerate_instances(brauer, 40)
    sym = PatternFamilySpec(Generator.SYMMETRIC_DEPTH, (p,), depth=2)
    assert enumerate_instances(sym, 11) == enumerate_instances(star_triple(p), 11)
    deub = PatternFamilySpec(Generator.DEUBER_SHAPE, (p,), m=1, L=1)
    assert (1, 2, 5) in enumerate_instances(deub, 10)


def test_mt_instances_match_direct_listing():
    # blocks in {1,2,3} with sizes <= 2 give a+b, a+c, b+c and a+b+c (twice)
    mt = PatternFamilySpec(
        Generator.MILLIKEN_TAYLOR,
        (P(0, 1), P(0, 1)),
        f=parse_polynomial("z1+z2"),
        index_bound=3,
        max_block_size=2,
        require_distinct=False,
    )
    N = 12
    want = set()
    for a, b, c in itertools.permutations(range(1, N + 1), 3):
        vals = {a + b, a + c, b + c, a + b + c}
        if max(vals) <= N:
            want.add(tuple(sorted(vals)))
    assert set(enumerate_instances(mt, N)) == want
    # the repeated a+b+c collides, so the distinct variant has no instances
    assert enumerate_instances(PatternFamilySpec(**{**mt.__dict__, "require_distinct": True}), N) == []


def test_spec_validation():
    with pytest.raises(UndefinedForKind):
        enumerate_instances(PatternFamilySpec(Generator.BRAUER_CHAIN, (P(0, 1),)), 5)
    with pytest.raises(ArityMismatch):
        enumerate_instances(
            PatternFamilySpec(Generator.MILLIKEN_TAYLOR, (P(0, 1),), f=parse_polynomial("z1+z2")), 5
        )


# ----------------------------------------------------------------- solving


def test_find_examples():
    cert = find_avoiding_coloring(star_triple(P(0, 1)), 3, 2)
    assert cert.colors == (1, 1, 2)
    cert = find_avoiding_coloring(star_triple(P(1, 1)), 4, 1)
    assert cert.colors == (1, 1, 1, 1)
    assert find_avoiding_coloring(star_triple(P(0, 1), False), 5, 2) is None


@pytest.mark.parametrize("lk", [(0, 1), (1, 1), (2, 2)])
@pytest.mark.parametrize("distinct", [True, False])
def test_matches_naive_enumeration(lk, distinct):
    spec = star_triple(P(*lk), distinct)
    for N in range(1, 13):
        insts = enumerate_instances(spec, N)
        naive = naive_avoiding(insts, list(range(1, N + 1)), 2)
        cert = find_avoiding_coloring(spec, N, 2)
        assert (cert is None) == (naive is None)
        if cert is not None:
            assert verify_certificate(spec, cert)
            # the lex-least coloring starts with color 1, so it is already canonical
            assert cert.colors == naive == canonical_relabel(naive)


@pytest.mark.parametrize(
    "spec,N,r",
    [
        (PatternFamilySpec(Generator.BRAUER_CHAIN, (P(1, 1),), L=1, require_distinct=False), 11, 2),
        (PatternFamilySpec(Generator.SYMMETRIC_DEPTH, (P(0, 1),), depth=3), 11, 2),
        (PatternFamilySpec(Generator.DEUBER_SHAPE, (P(2, 2),), m=1, L=2), 10, 2),
        (star_triple(P(0, 1)), 8, 3),
        (star_triple(P(1, 1), signed=True), 4, 2),
    ],
)
def test_other_shapes_match_naive(spec, N, r):
    for n in range(1, N + 1):
        insts = enumerate_instances(spec, n)
        lo = -n if spec.signed else 1
        elems = list(range(lo, n + 1))
        naive = naive_avoiding(insts, elems, r)
        cert = find_avoiding_coloring(spec, n, r)
        assert (cert is None) == (naive is None)
        if cert is not None:
            assert verify_certificate(spec, cert)


def test_lex_least_against_relabelled_naive():
    # smallest representative of each color-renaming class, checked directly
    spec = star_triple(P(0, 1))
    for N in range(3, 9):
        insts = enumerate_instances(spec, N)
        best = None
        for colors in itertools.product((1, 2), repeat=N):
            if colors[0] != 1:
                continue
            if all(len({colors[x - 1] for x in inst}) > 1 for inst in insts):
                best = colors
                break
        assert find_avoiding_coloring(spec, N, 2).colors == best


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        find_avoiding_coloring(star_triple(P(1, 1)), 95, 2, node_limit=3)


# --------------------------------------------------------------- thresholds


@pytest.mark.parametrize(
    "spec,r,want",
    [
        (star_triple(P(0, 1), False), 2, 5),
        (star_triple(P(0, 1)), 2, 9),
        (star_triple(P(0, 1), False), 3, 14),
        (star_triple(P(1, 1), False), 2, 31),
    ],
)
def test_known_small_thresholds(spec, r, want):
    rep = min_ramsey_threshold(spec, r, 60)
    assert rep.result is ResultKind.THRESHOLD and rep.N == want
    assert verify_certificate(spec, rep.certificate) and rep.certificate.N == want - 1


def test_threshold_monotone_beyond():
    spec = star_triple(P(0, 1))
    rep = min_ramsey_threshold(spec, 2, 30)
    for extra in (1, 2):
        assert find_avoiding_coloring(spec, rep.N + extra, 2) is None


def test_no_threshold_up_to():
    rep = min_ramsey_threshold(star_triple(P(1, 1)), 2, 4)
    assert rep.result is ResultKind.NO_THRESHOLD_UP_TO and rep.N == 4
    assert rep.to_json()["result"] == {"kind": "NoThresholdUpTo", "N_max": "4"}


def test_budget_report():
    rep = min_ramsey_threshold(star_triple(P(2, 2)), 2, 2000, node_limit=5)
    assert rep.result is ResultKind.BUDGET_EXHAUSTED
    assert rep.N < 1535
    assert verify_certificate(rep.spec, rep.certificate) and rep.certificate.N == rep.N


def test_workers_do_not_change_result():
    spec = star_triple(P(1, 1))
    a = min_ramsey_threshold(spec, 2, 120, workers=1)
    b = min_ramsey_threshold(spec, 2, 120, workers=3)
    assert a.to_json() == b.to_json()
    assert a.N == 95


# ------------------------------------------------------------- certificates


def test_certificate_round_trip_and_checks():
    spec = star_triple(P(0, 1))
    cert = find_avoiding_coloring(spec, 8, 2)
    again = ColoringCertificate.from_json(cert.to_json())
    assert again == cert and verify_certificate(spec, again)
    assert verify_certificate(spec, ColoringCertificate(5, 5, (1, 2, 3, 4, 5)))
    assert not verify_certificate(spec, ColoringCertificate(5, 1, (1,) * 5))


@pytest.mark.parametrize(
    "bad",
    [
        {"N": "3", "r": "2", "colors": ["1", "2"]},
        {"N": "3", "r": "2", "colors": ["1", "2", "3"]},
        {"N": "x", "r": "2", "colors": []},
        {"r": "2", "colors": ["1"]},
    ],
)
def test_malformed_certificates(bad):
    with pytest.raises(MalformedCertificate):
        verify_certificate(star_triple(P(0, 1)), ColoringCertificate.from_json(bad))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(0, 1), (1, 1), (2, 2), (2, 1)]), st.booleans(), st.integers(1, 40), st.integers(1, 3))
def test_found_certificates_verify(lk, distinct, N, r):
    spec = star_triple(P(*lk), distinct)
    cert = find_avoiding_coloring(spec, N, r)
    if cert is not None:
        assert verify_certificate(spec, cert)
