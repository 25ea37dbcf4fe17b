import pytest

from ringdef.fields import QQ, RationalFunctions
from ringdef.fppoly import parse_poly
from ringdef.places import (
    INF,
    Place,
    ResidueField,
    artin_schreier_irreducible_at,
    element_with_valuations,
    first_places,
    odd_and_neg,
    place_from_str,
    places_stream,
    reduce_at,
    support,
    uniformizing_element,
    valuation,
    weak_approximate,
)

F2 = RationalFunctions(2)
F3 = RationalFunctions(3)


def q(n, d=1):
    return QQ.elem(n, d)


def fp(field, text):
    return field.parse_element(text)


def P(field, text):
    return place_from_str(field, text)


def test_valuation_examples():
    assert valuation(q(50, 3), P(QQ, "q:5")) == 2
    assert valuation(fp(F2, "(T^2+1)/T^5"), P(F2, "inf")) == 3
    assert valuation(QQ.zero, P(QQ, "q:7")) == INF
    assert valuation(fp(F2, "T"), P(F2, "f:T")) == 1


def test_valuation_laws():
    v5 = P(QQ, "q:5")
    xs = [q(50, 3), q(-2, 5), q(7), q(1, 125)]
    for x in xs:
        for y in xs:
            assert valuation(x * y, v5) == valuation(x, v5) + valuation(y, v5)
            s = x + y
            if not s.is_zero():
                assert valuation(s, v5) >= min(valuation(x, v5), valuation(y, v5))


def test_support_examples():
    s = support(q(20, 3))
    assert {str(v): e for v, e in s.items()} == {"q:2": 2, "q:3": -1, "q:5": 1}
    s2 = support(fp(F2, "T/(T^2+1)"))  # (T+1)^2 = T^2+1 over F_2
    assert {str(v): e for v, e in s2.items()} == {"f:T": 1, "f:T+1": -2, "inf": 1}
    assert support(QQ.one) == {}


def test_product_formula_function_field():
    for text in ["T/(T^2+1)", "(T^3+T+1)/(T+1)", "T^4+T"]:
        x = fp(F2, text)
        total = sum(v.degree * e for v, e in support(x).items())
        assert total == 0
    for text in ["(2*T^2+1)/(T+2)", "T^2+1"]:
        x = fp(F3, text)
        total = sum(v.degree * e for v, e in support(x).items())
        assert total == 0


def test_reduce_examples():
    r = reduce_at(q(7, 3), P(QQ, "q:5"))
    assert r.value == 4
    r2 = reduce_at(fp(F2, "T+1"), P(F2, "f:T"))
    assert str(r2.value) == "1"
    with pytest.raises(ValueError, match="not integral"):
        reduce_at(q(1, 5), P(QQ, "q:5"))
    # degree place: residue of a valuation-0 element is the leading-coefficient ratio
    r3 = reduce_at(fp(F3, "(2*T^2+1)/(T^2+T)"), P(F3, "inf"))
    assert r3.value == 2


def test_reduce_is_ring_homomorphism():
    v = P(QQ, "q:7")
    xs = [q(3, 4), q(-2), q(10, 3), q(0)]
    for x in xs:
        for y in xs:
            assert reduce_at(x + y, v).value == (reduce_at(x, v) + reduce_at(y, v)).value
            assert reduce_at(x * y, v).value == (reduce_at(x, v) * reduce_at(y, v)).value


def test_places_stream_order():
    qs = first_places(QQ, 4)
    assert [str(v) for v in qs] == ["q:2", "q:3", "q:5", "q:7"]
    f2s = first_places(F2, 5)
    assert [str(v) for v in f2s] == ["f:T", "f:T+1", "inf", "f:T^2+T+1", "f:T^3+T+1"]


def test_residue_field_artin_schreier():
    # over F_5: u = 2 has 1+4u^2 = 17 = 2 mod 5, a nonresidue, so X^2-X-4 is irreducible
    v5 = P(QQ, "q:5")
    assert artin_schreier_irreducible_at(v5, q(4))
    assert not artin_schreier_irreducible_at(v5, q(1) * q(1))  # disc 5 = 0 mod 5
    # over F_2: X^2-X-1 is irreducible, X^2-X is not
    vt = P(F2, "f:T")
    assert artin_schreier_irreducible_at(vt, F2.one)
    assert not artin_schreier_irreducible_at(vt, F2.zero)
    # over F_4 = F_2[T]/(T^2+T+1): X^2-X-1 splits (trace of 1 is 0)
    v4 = P(F2, "f:T^2+T+1")
    assert not artin_schreier_irreducible_at(v4, F2.one)


def test_residue_field_trace_and_sqrt():
    rf = ResidueField(P(F2, "f:T^3+T+1"))  # F_8
    ones = sum(rf.absolute_trace(a) for a in rf.elements())
    assert ones == 4  # trace is balanced on F_8
    for a in rf.elements():
        s = rf.sqrt_char2(a)
        assert rf.mul(s, s) == a


def test_weak_approximate_rationals():
    x = weak_approximate(QQ, [(P(QQ, "q:2"), q(1), 2), (P(QQ, "q:5"), q(0), 1)])
    assert x == q(25)
    # single target returns the target value itself
    assert weak_approximate(QQ, [(P(QQ, "q:3"), q(7, 2), 10)]) == q(7, 2)
    with pytest.raises(ValueError, match="duplicate"):
        weak_approximate(QQ, [(P(QQ, "q:2"), q(0), 1), (P(QQ, "q:2"), q(1), 1)])


def test_weak_approximate_function_field():
    t1 = (P(F2, "f:T"), F2.one, 1)
    t2 = (P(F2, "f:T+1"), F2.zero, 1)
    x = weak_approximate(F2, [t1, t2])
    assert valuation(x - F2.one, P(F2, "f:T")) > 1
    assert valuation(x, P(F2, "f:T+1")) > 1
    assert x == fp(F2, "T^2+1")


def test_weak_approximate_with_degree_place():
    targets = [
        (P(F2, "inf"), F2.one, 2),
        (P(F2, "f:T"), F2.zero, 1),
        (P(F2, "f:T+1"), F2.one, 3),
    ]
    x = weak_approximate(F2, targets)
    for v, a, g in targets:
        assert valuation(x - a, v) > g


def test_weak_approximate_with_denominators():
    targets = [(P(QQ, "q:2"), q(1, 2), 3), (P(QQ, "q:3"), q(5), 2)]
    x = weak_approximate(QQ, targets)
    for v, a, g in targets:
        assert valuation(x - a, v) > g


def test_element_with_valuations():
    want = {P(F2, "f:T"): 0, P(F2, "inf"): 1}
    x = element_with_valuations(F2, want)
    assert valuation(x, P(F2, "f:T")) == 0
    assert valuation(x, P(F2, "inf")) == 1
    y = uniformizing_element(QQ, [P(QQ, "q:2"), P(QQ, "q:5")])
    assert valuation(y, P(QQ, "q:2")) == 1
    assert valuation(y, P(QQ, "q:5")) == 1


def test_odd_and_neg():
    odd, neg = odd_and_neg(q(20, 3))
    assert {str(v) for v in odd} == {"q:3", "q:5"}
    assert {str(v) for v in neg} == {"q:3"}
    assert odd_and_neg(QQ.one) == (frozenset(), frozenset())
    odd2, neg2 = odd_and_neg(fp(F2, "T/(T^2+1)"))
    assert {str(v) for v in odd2} == {"f:T", "inf"}
    assert {str(v) for v in neg2} == {"f:T+1"}
