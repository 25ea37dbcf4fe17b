import pytest

from ringdef.fields import QQ, RationalFunctions
from ringdef.places import odd_and_neg, place_from_str, valuation
from ringdef.quaternion import as_quaternion, cl_quaternion, quaternion_from_str
from ringdef.sets import (
    h_construction_witness,
    h_identity_rhs,
    in_complement_union,
    in_h,
    in_j,
    in_o_s,
    in_phi,
    in_s_of_q,
    in_sigma,
    j_construction_witness,
    j_identity_rhs,
    sigma_units_reciprocal_identity,
    verify_h_witness,
    verify_j_witness,
)

F2 = RationalFunctions(2)


def q(n, d=1):
    return QQ.elem(n, d)


def P(field, text):
    return place_from_str(field, text)


Q14_5 = as_quaternion(QQ, q(1, 4), q(5))  # Delta = {2, 5}
SPLIT7 = as_quaternion(QQ, q(1, 4), q(7))  # split everywhere


def test_odd_neg_examples():
    odd, neg = odd_and_neg(q(20, 3))
    assert {str(v) for v in odd} == {"q:3", "q:5"} and {str(v) for v in neg} == {"q:3"}


def test_in_sigma_examples():
    assert in_sigma(Q14_5, Q14_5, q(1, 3), "plain")
    assert not in_sigma(Q14_5, Q14_5, q(1, 2), "plain")
    assert not in_sigma(Q14_5, Q14_5, q(2, 3), "units")
    assert in_sigma(Q14_5, Q14_5, q(3, 7), "units")
    # disjoint ramification: the empty intersection is all of K
    assert in_sigma(Q14_5, SPLIT7, q(1, 10), "plain")
    with pytest.raises(ValueError, match="nonreal"):
        in_sigma(cl_quaternion(QQ, q(-1), q(-1)), Q14_5, q(1))


def test_in_sigma_modes_on_zero():
    assert in_sigma(Q14_5, Q14_5, q(0), "plain")
    assert not in_sigma(Q14_5, Q14_5, q(0), "inverse")
    assert not in_sigma(Q14_5, Q14_5, q(0), "units")


def test_in_j_examples():
    assert in_j(Q14_5, q(5), q(5))
    assert not in_j(Q14_5, q(5), q(3))
    assert in_j(Q14_5, q(3), q(17))  # Delta & Odd(3) is empty
    assert in_j(Q14_5, q(5), q(0))


def test_in_h_examples():
    assert in_h(Q14_5, q(1, 5), q(5))
    assert not in_h(Q14_5, q(1, 5), q(1))
    assert in_h(Q14_5, q(7), q(1, 100))  # Neg(7) empty


def test_in_phi_examples():
    S = [P(QQ, "q:5")]
    u = q(2)
    assert in_phi(S, u, q(2), q(1))
    assert in_phi(S, u, q(7), q(1))
    assert not in_phi(S, u, q(1), q(5))
    with pytest.raises(ValueError, match="unit"):
        in_phi(S, q(5), q(2), q(1))


def test_in_o_s_and_union():
    S5 = [P(QQ, "q:5")]
    assert in_o_s(q(7), [])
    assert in_o_s(q(1, 2), [P(QQ, "q:2")])
    assert not in_o_s(q(1, 2), [])
    assert in_complement_union(q(3), S5)
    assert not in_complement_union(q(1, 3), S5)
    assert in_complement_union(q(0), S5)


def test_o_s_reciprocal_duality():
    S = [P(QQ, "q:3")]
    for x in QQ.enumerate_by_height(25):
        if x.is_zero():
            continue
        assert in_o_s(x, S) == (not in_complement_union(1 / x, S))


def test_in_s_of_q_split_identity_case():
    verdict, wit = in_s_of_q(as_quaternion(QQ, q(0), q(1)), q(2), height_cap=3, max_candidates=10 ** 5)
    assert verdict == "member"
    x1, x3, x4 = wit
    x2 = q(2) - 2 * x1
    assert not (x2.is_zero() and x3.is_zero() and x4.is_zero())


def test_in_s_of_q_division_case():
    verdict, wit = in_s_of_q(Q14_5, q(3), height_cap=4, max_candidates=2 * 10 ** 5)
    assert verdict == "member"


def test_in_s_of_q_budget():
    verdict, wit = in_s_of_q(Q14_5, q(3), height_cap=1, max_candidates=3)
    assert verdict == "no-witness-found"


def test_sigma_units_reciprocal():
    for x in QQ.enumerate_by_height(12):
        if x.is_zero():
            continue
        assert sigma_units_reciprocal_identity(Q14_5, Q14_5, x)


def test_j_identity_recipe_both_ways():
    S = [P(QQ, "q:2"), P(QQ, "q:5")]
    for c in [q(2), q(5), q(10), q(3), q(1, 2)]:
        for x in QQ.enumerate_by_height(20):
            rhs = j_identity_rhs(S, c, x)
            wit = j_construction_witness(S, c, x)
            assert (wit is not None) == rhs, (c, x)
            if wit is not None:
                assert verify_j_witness(S, c, x, wit)


def test_h_identity_recipe_both_ways():
    S = [P(QQ, "q:2"), P(QQ, "q:5")]
    for c in [q(2), q(1, 5), q(10), q(1, 20), q(3)]:
        for x in QQ.enumerate_by_height(20):
            rhs = h_identity_rhs(S, c, x)
            wit = h_construction_witness(S, c, x)
            assert (wit is not None) == rhs, (c, x)
            if wit is not None:
                assert verify_h_witness(S, c, x, wit)


def test_j_identity_function_field():
    S = [P(F2, "f:T"), P(F2, "inf")]
    cs = [F2.T, F2.one / F2.T, F2.parse_element("T+1"), F2.parse_element("(T^2+T+1)/T")]
    for c in cs:
        for x in F2.enumerate_by_height(2):
            rhs = j_identity_rhs(S, c, x)
            wit = j_construction_witness(S, c, x)
            assert (wit is not None) == rhs, (c, x)
