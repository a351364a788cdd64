from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hubbard_geometry.ratpoly import (
    NonConfluentRules, RatPoly, RewriteRule, imaginary_unit_rule, reduce_mod, variables,
)

x, y, U = variables("x", "y", "U")
E2 = (x * x + y * y) ** 2 - U * x * y - 1


def e2_rule():
    return RewriteRule.from_relation(E2, {"x": 4})


def test_cancellation():
    assert (x + y) + (x - y) == 2 * x


def test_expansion():
    assert (x * x + y * y) * (x * x + y * y) == x ** 4 + 2 * x * x * y * y + y ** 4


def test_identity_difference_is_zero():
    assert (E2 - E2).is_zero()


def test_reduce_square_of_norm():
    assert reduce_mod((x * x + y * y) ** 2, [e2_rule()]) == U * x * y + 1


def test_reduce_generator():
    assert reduce_mod(E2, [e2_rule()]).is_zero()


def test_reduce_leaves_irreducible_monomial():
    assert reduce_mod(x ** 3 * y, [e2_rule()]) == x ** 3 * y


def test_evaluation_exact():
    assert E2(x=1, y=0, U=5) == 0
    assert E2(x=Fraction(1, 2), y=Fraction(1, 2), U=-3) == 0
    assert E2(x=1, y=1, U=0) == 3


def test_imaginary_unit_rule():
    i = RatPoly.var("I")
    assert reduce_mod(i ** 4 + i ** 2, [imaginary_unit_rule()]).is_zero()
    assert reduce_mod(i ** 3, [imaginary_unit_rule()]) == -i


def test_degree_and_coefficient():
    assert E2.degree() == 4
    assert E2.degree("U") == 1
    assert E2.coefficient({"U": 1, "x": 1, "y": 1}) == -1


def test_overlapping_leads_rejected():
    r1 = RewriteRule.from_relation(x * x * y - 1, {"x": 2, "y": 1})
    r2 = RewriteRule.from_relation(x * y * y - 1, {"x": 1, "y": 2})
    with pytest.raises(NonConfluentRules):
        reduce_mod(x * x * y * y, [r1, r2])


small = st.integers(-4, 4)
monos = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=6)


def poly(terms):
    return RatPoly(("x", "y"), terms)


@given(monos, monos, monos)
def test_ring_axioms(a, b, c):
    p, q, r = poly(a), poly(b), poly(c)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p


@given(monos, st.fractions(max_denominator=7), st.fractions(max_denominator=7))
def test_subs_matches_evaluation(a, vx, vy):
    p = poly(a)
    assert p.subs({"x": RatPoly.const(vx), "y": RatPoly.const(vy)}).coefficient({}) == p(x=vx, y=vy)


@given(monos)
def test_multiples_of_relation_reduce_to_zero(a):
    # E2 with U specialised; any multiple lies in the ideal
    rel = (x * x + y * y) ** 2 - 3 * x * y - 1
    rule = RewriteRule.from_relation(rel, {"x": 4})
    assert reduce_mod(poly(a) * rel, [rule]).is_zero()


@given(monos)
def test_reduction_is_congruent(a):
    rule = e2_rule()
    p = poly(a).with_variables(("x", "y", "U"))
    rem = reduce_mod(p, [rule])
    assert rem.degree("x") < 4
    assert reduce_mod(p - rem, [rule]).is_zero()
