import pytest

from ringdef.fgrings import (
    analyze,
    build_ring_formula,
    member_direct,
    member_via_chain,
    member_via_cosets,
    ring_from_str,
)
from ringdef.fields import QQ, RationalFunctions
from ringdef.formulas import polarity, rank
from ringdef.synth import synthesize_pack

F2 = RationalFunctions(2)


def test_ring_descriptor_parsing():
    assert str(ring_from_str("Zinv:6")) == "Zinv:6"
    assert str(ring_from_str("FpT:2")) == "FpT:2"
    assert str(ring_from_str("Mono:2:{2,3}")) == "Mono:2:{2,3}"
    with pytest.raises(ValueError):
        ring_from_str("Mono:2:{2,4}")  # gcd 2: not a ring with full fraction field
        analyze(ring_from_str("Mono:2:{2,4}"))


def test_analyze_z_inv_6():
    an = analyze(ring_from_str("Zinv:6"))
    assert {str(v) for v in an.S} == {"q:2", "q:3"}
    assert an.conductor == QQ.one
    assert an.coset_reps == (QQ.zero,)


def test_analyze_z():
    an = analyze(ring_from_str("Zinv:1"))
    assert an.S == frozenset()
    assert an.conductor == QQ.one and an.coset_reps == (QQ.zero,)


def test_analyze_monomial():
    an = analyze(ring_from_str("Mono:2:{2,3}"))
    assert {str(v) for v in an.S} == {"inf"}
    assert str(an.conductor) == "T^2"
    assert {str(y) for y in an.coset_reps} == {"0", "1"}


def test_member_direct_monomial():
    desc = ring_from_str("Mono:2:{2,3}")
    assert member_direct(desc, F2.parse_element("T^2+T^3"))
    assert member_direct(desc, F2.one)
    assert not member_direct(desc, F2.T)
    assert not member_direct(desc, F2.parse_element("1/T"))
    an = analyze(desc)
    assert not member_via_cosets(an, F2.T)


def test_members_agree_z_inv_6():
    desc = ring_from_str("Zinv:6")
    an = analyze(desc)
    pe = synthesize_pack(QQ, an.S)
    for x in QQ.enumerate_by_height(16):
        d = member_direct(desc, x)
        assert member_via_cosets(an, x) == d
        assert member_via_chain(an, x, pe) == d, x


def test_members_agree_monomial():
    desc = ring_from_str("Mono:2:{2,3}")
    an = analyze(desc)
    pe = synthesize_pack(F2, an.S)
    for x in F2.enumerate_by_height(3):
        d = member_direct(desc, x)
        assert member_via_cosets(an, x) == d
        assert member_via_chain(an, x, pe) == d, x


def test_ring_formula_ranks():
    f1 = build_ring_formula(ring_from_str("Zinv:6"))
    assert polarity(f1) == "universal"
    assert rank(f1) == 80
    f2 = build_ring_formula(ring_from_str("Mono:2:{2,3}"))
    assert rank(f2) == 160  # two cosets, ranks add under universal disjunction
