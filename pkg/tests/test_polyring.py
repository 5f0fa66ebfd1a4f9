from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biliaison.polyring import (
    FieldSpec,
    FieldMismatchError,
    InexactDivisionError,
    MultiPoly,
    gcd,
    gcd_many,
    squarefree_factors,
)

F = FieldSpec.prime()
Q = FieldSpec.rationals()


def P(text: str, field=F) -> MultiPoly:
    return MultiPoly.parse(text, field)


# ---------------------------------------------------------------------------
# field spec


def test_field_spec_validation():
    assert FieldSpec.prime().characteristic == 32003
    assert FieldSpec.rationals().characteristic == 0
    with pytest.raises(ValueError):
        FieldSpec("prime", 32004)  # not prime
    with pytest.raises(ValueError):
        FieldSpec("prime", 101)  # too small for generic sampling
    assert FieldSpec.parse("prime:32003") == F
    assert FieldSpec.parse("rationals") == Q


# ---------------------------------------------------------------------------
# arithmetic


def test_commutativity_example():
    assert P("X") * P("Y") + P("Y") * P("X") == P("2*X*Y")


def test_difference_of_squares():
    assert (P("X") + P("Y")) * (P("X") - P("Y")) == P("X^2 - Y^2")


def test_exact_divide_example():
    assert P("X^2*Y").exact_divide(P("X")) == P("X*Y")
    with pytest.raises(InexactDivisionError):
        P("X^2*Y + Z^3").exact_divide(P("X"))


def test_field_mismatch_rejected():
    with pytest.raises(FieldMismatchError):
        P("X") + P("X", Q)


def test_rational_arithmetic_is_exact():
    third = MultiPoly.const(Q, Fraction(1, 3))
    x = P("X", Q)
    assert (third * x).scale(3) == x
    assert (x * x).exact_divide(x) == x


# ---------------------------------------------------------------------------
# specialization of the parameter


def test_specialize_examples():
    assert P("X + a*Y").specialize_parameter(0) == P("X")
    assert P("a").specialize_parameter(0).is_zero()
    assert P("X + a*Y").specialize_parameter(1) == P("X + Y")


# ---------------------------------------------------------------------------
# gcds


def test_gcd_examples():
    assert gcd(P("X"), P("Y")) == P("1")
    assert gcd_many([P("X*Y"), P("X*Z"), P("X*T")]) == P("X")
    # 1-minors of the single degree-1 column of the large example, at a = 0
    assert gcd_many([P("X"), P("-Y")]) == P("1")


def test_gcd_errors():
    with pytest.raises(ValueError):
        gcd_many([MultiPoly.zero(F), MultiPoly.zero(F)])


def test_gcd_divides_and_idempotent():
    rng = random.Random(11)
    for _ in range(25):
        f = _random_poly(rng)
        g = _random_poly(rng)
        h = _random_poly(rng)
        a, b = f * h, g * h
        if a.is_zero() or b.is_zero():
            continue
        d = gcd(a, b)
        assert d.divides(a) and d.divides(b)
        if not h.is_zero():
            assert h.monic().divides(d)
        assert gcd_many([a, b, d]) == gcd_many([a, b])


# ---------------------------------------------------------------------------
# squarefree splitting


def test_squarefree_examples():
    fs = squarefree_factors(P("X^2*Y"))
    assert sorted(str(f) for f in fs) == ["X", "Y"]
    assert squarefree_factors(P("X")) == [P("X")]
    with pytest.raises(ValueError):
        squarefree_factors(P("7"))


def _assert_valid_split(p: MultiPoly, factors):
    # product with multiplicities reproduces p up to a scalar
    rest = p
    for f in factors:
        assert f.divides(rest) or f.divides(p)
        while f.divides(rest):
            rest = rest.exact_divide(f)
    assert rest.is_constant()
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            assert gcd(factors[i], factors[j]).is_constant()
        # factors are squarefree: coprime to their own derivative overall
        f = factors[i]
        sq = gcd_many([f] + [f.derivative(v) for v in f.variables()])
        assert sq.is_constant()


def test_squarefree_split_is_valid():
    cases = [
        P("X^2 - Y^2"),
        P("X^2*Y"),
        P("X^3*Y^2*Z"),
        P("X^2 + 2*X*Y + Y^2"),  # (X+Y)^2
        P("X*Y*Z*T"),
        P("X^2*Z + X*Y*Z"),  # X Z (X + Y)
    ]
    for p in cases:
        _assert_valid_split(p, squarefree_factors(p))


def test_squarefree_random_products():
    rng = random.Random(5)
    lin = [P("X + Y"), P("X - Z"), P("Y + T"), P("Z"), P("T - X")]
    for _ in range(10):
        picks = rng.sample(lin, rng.randrange(1, 4))
        exps = [rng.randrange(1, 3) for _ in picks]
        p = MultiPoly.one(F)
        for q, e in zip(picks, exps):
            p = p * q ** e
        _assert_valid_split(p, squarefree_factors(p))


# ---------------------------------------------------------------------------
# property tests (hypothesis)


def _random_poly(rng: random.Random) -> MultiPoly:
    terms = {}
    for _ in range(rng.randrange(0, 4)):
        e = tuple(rng.randrange(0, 3) for _ in range(4)) + (0,)
        terms[e] = rng.randrange(1, 32003)
    return MultiPoly(F, terms)


@st.composite
def polys(draw):
    n_terms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n_terms):
        e = tuple(draw(st.integers(0, 2)) for _ in range(5))
        c = draw(st.integers(-6, 6))
        if c:
            terms[e] = c % 32003
    return MultiPoly(F, {e: c for e, c in terms.items() if c})


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_distributivity(p, q, r):
    assert (p + q) * r == p * r + q * r


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_specialize_is_multiplicative(p, q):
    for v in (0, 1, 5):
        assert (p * q).specialize_parameter(v) == \
            p.specialize_parameter(v) * q.specialize_parameter(v)


@settings(max_examples=40, deadline=None)
@given(polys())
def test_parse_roundtrip(p):
    assert MultiPoly.parse(str(p), F) == p


def test_degree_of_zero_is_minus_infinity():
    z = MultiPoly.zero(F)
    assert z.degree == float("-inf")
    assert P("X*Y^2").degree == 3
    assert P("a^3").degree == 0  # the parameter counts 0
