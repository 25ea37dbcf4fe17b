import random

import pytest

from ringdef.fields import QQ, RationalFunctions
from ringdef.local import artin_schreier_reduce, schmid_symbol
from ringdef.places import Place, place_from_str, valuation
from ringdef.quaternion import (
    QuaternionDesc,
    as_quaternion,
    cl_quaternion,
    classical_pair,
    classicalize,
    is_nonreal,
    local_split_oracle,
    local_splits,
    quaternion_from_str,
    ramification_set,
    reduced_norm,
    reduced_trace,
)

F2 = RationalFunctions(2)
F3 = RationalFunctions(3)


def q(n, d=1):
    return QQ.elem(n, d)


def P(field, text):
    return place_from_str(field, text)


def names(places):
    return {str(v) for v in places}


def test_descriptor_validation():
    with pytest.raises(ValueError):
        as_quaternion(QQ, q(-1, 4), q(5))  # 1+4a = 0
    with pytest.raises(ValueError):
        cl_quaternion(QQ, q(0), q(5))
    with pytest.raises(ValueError):
        cl_quaternion(F2, F2.one, F2.T)  # no classical form in characteristic 2


def test_parse_format_round_trip():
    for field, text in [(QQ, "AS[1/4;5]"), (QQ, "CL(2;5)"), (F2, "AS[1;T]"), (F2, "AS[(T+1)/T;T^2+T]")]:
        d = quaternion_from_str(field, text)
        assert str(d) == text


def test_classicalize():
    d = classicalize(as_quaternion(QQ, q(1, 4), q(5)))
    assert (d.a, d.b) == (q(2), q(5))
    d0 = classicalize(as_quaternion(QQ, q(0), q(7)))
    assert d0.a == q(1)
    assert ramification_set(as_quaternion(QQ, q(0), q(7))) == frozenset()
    with pytest.raises(ValueError, match="characteristic 2"):
        classicalize(as_quaternion(F2, F2.one, F2.T))


def test_trace_norm_formulas():
    d = as_quaternion(QQ, q(3), q(7))
    one = (q(1), q(0), q(0), q(0))
    assert reduced_norm(d, one) == q(1) and reduced_trace(d, one) == q(2)
    d11 = as_quaternion(QQ, q(1), q(1))
    pt = (q(0), q(1), q(0), q(0))
    assert reduced_norm(d11, pt) == q(-1) and reduced_trace(d11, pt) == q(1)
    dc = cl_quaternion(QQ, q(3), q(7))
    ptj = (q(0), q(0), q(1), q(0))
    assert reduced_norm(dc, ptj) == -q(7) and reduced_trace(dc, ptj) == q(0)


def test_local_splits_spec_cases():
    # 2 is a quadratic nonresidue mod 5
    assert not local_splits(as_quaternion(QQ, q(1, 4), q(5)), P(QQ, "q:5"))
    # X^2-X-1 irreducible over F_2 and v_T(T) = 1 odd
    assert not local_splits(as_quaternion(F2, F2.one, F2.T), P(F2, "f:T"))
    # char 2, v(a) > 0 and v(b) = 0: always split
    d = as_quaternion(F2, F2.T, F2.one + F2.T)
    assert local_splits(d, P(F2, "f:T"))


def test_ramification_sets():
    assert names(ramification_set(cl_quaternion(QQ, q(2), q(5)))) == {"q:2", "q:5"}
    assert ramification_set(as_quaternion(QQ, q(0), q(11))) == frozenset()
    assert names(ramification_set(as_quaternion(F2, F2.one, F2.T))) == {"f:T", "inf"}
    # worked instance: (197, 85) ramifies exactly at 5 and 17
    assert names(ramification_set(cl_quaternion(QQ, q(197), q(85)))) == {"q:5", "q:17"}
    # [4, 5) = (17, 5) ramifies at 5 and 17 as well
    assert names(ramification_set(as_quaternion(QQ, q(4), q(5)))) == {"q:5", "q:17"}


def test_is_nonreal():
    assert is_nonreal(cl_quaternion(QQ, q(2), q(5)))
    assert not is_nonreal(cl_quaternion(QQ, q(-1), q(-1)))
    assert is_nonreal(as_quaternion(F2, F2.one, F2.T))
    # (-1,-1) over Q ramifies only at 2 among Z-valuations (odd |Delta|, real place excluded)
    assert names(ramification_set(cl_quaternion(QQ, q(-1), q(-1)))) == {"q:2"}


def test_classicalize_preserves_local_splitting():
    rng = random.Random(3)
    count = 0
    while count < 25:
        a = q(rng.randint(-6, 6), rng.randint(1, 4))
        b = q(rng.randint(-6, 6), rng.randint(1, 4))
        try:
            d = as_quaternion(QQ, a, b)
            dc = classicalize(d)
        except ValueError:
            continue
        count += 1
        for v in set(ramification_set(d)) | set(ramification_set(dc)) | {P(QQ, "q:2"), P(QQ, "q:3")}:
            assert local_splits(d, v) == local_splits(dc, v)


def test_reciprocity_parity_samples():
    rng = random.Random(11)
    for field in (QQ, F2, F3):
        done = 0
        while done < 40:
            if field is QQ:
                a = q(rng.randint(-9, 9), rng.randint(1, 5))
                b = q(rng.randint(-9, 9), rng.randint(1, 5))
            else:
                a = field.elem(_rand_poly(field, rng, 2), _rand_poly(field, rng, 2))
                b = field.elem(_rand_poly(field, rng, 2), _rand_poly(field, rng, 2))
            try:
                d = as_quaternion(field, a, b)
            except (ValueError, ZeroDivisionError):
                continue
            if not is_nonreal(d):
                continue
            done += 1
            assert len(ramification_set(d)) % 2 == 0, f"odd ramification for {d}"


def _rand_poly(field, rng, maxdeg):
    from ringdef.fppoly import Poly

    while True:
        f = Poly.from_code(field.p, rng.randrange(0, field.p ** (maxdeg + 1)))
        if not f.is_zero():
            return f


def test_oracle_spec_cases():
    assert local_split_oracle(as_quaternion(F2, F2.one, F2.T), P(F2, "f:T"), 8) == "nonsplit"
    assert local_split_oracle(as_quaternion(QQ, q(0), q(7)), P(QQ, "q:7"), 1) == "split"
    # far too low precision on a wildly ramified case cannot conclude nonsplit
    wild = as_quaternion(F2, F2.one / F2.T, F2.parse_element("T+1") ** 3)
    assert local_split_oracle(wild, P(F2, "f:T"), 1) in ("split", "inconclusive")


def test_oracle_agrees_with_local_splits():
    rng = random.Random(23)
    for field in (QQ, F2, F3):
        checked = 0
        tries = 0
        while checked < 30 and tries < 400:
            tries += 1
            if field is QQ:
                a = q(rng.randint(-6, 6), rng.randint(1, 3))
                b = q(rng.randint(-8, 8), rng.randint(1, 3))
            else:
                a = field.elem(_rand_poly(field, rng, 2), _rand_poly(field, rng, 1))
                b = field.elem(_rand_poly(field, rng, 2), _rand_poly(field, rng, 1))
            try:
                d = as_quaternion(field, a, b)
            except (ValueError, ZeroDivisionError):
                continue
            from ringdef.quaternion import _candidate_places

            for v in sorted(_candidate_places(d), key=lambda w: w.sort_key())[:3]:
                verdict = local_split_oracle(d, v, 4)
                if verdict == "inconclusive":
                    continue
                checked += 1
                assert (verdict == "split") == local_splits(d, v), (d, v)
        assert checked >= 10


def test_artin_schreier_reduce():
    # a = 1/T^2 has even pole order at T; the reduction must leave an odd pole or integrality
    a = F2.one / (F2.T * F2.T)
    vt = P(F2, "f:T")
    red = artin_schreier_reduce(a, vt)
    m = valuation(red, vt)
    assert m >= 0 or (-m) % 2 == 1


def test_schmid_symbol_matches_splitting():
    # cross-check the residue symbol against the full splitting decision
    rng = random.Random(5)
    checked = 0
    while checked < 60:
        a = F2.elem(_rand_poly(F2, rng, 2), _rand_poly(F2, rng, 2))
        b = F2.elem(_rand_poly(F2, rng, 2), _rand_poly(F2, rng, 2))
        try:
            d = as_quaternion(F2, a, b)
        except (ValueError, ZeroDivisionError):
            continue
        from ringdef.quaternion import _candidate_places

        for v in _candidate_places(d):
            checked += 1
            assert (schmid_symbol(a, b, v) == 0) == local_splits(d, v), (a, b, v)


def test_schmid_residue_theorem():
    # sum over all places of the residue symbol vanishes: |Delta| is even
    rng = random.Random(17)
    for _ in range(30):
        a = F2.elem(_rand_poly(F2, rng, 2), _rand_poly(F2, rng, 2))
        b = F2.elem(_rand_poly(F2, rng, 2), _rand_poly(F2, rng, 2))
        try:
            d = as_quaternion(F2, a, b)
        except (ValueError, ZeroDivisionError):
            continue
        total = sum(schmid_symbol(a, b, v) for v in ramification_set(d))
        assert total % 2 == 0
