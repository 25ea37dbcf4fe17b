import pytest

from ringdef.builders import (
    build_H,
    build_J,
    build_Phi,
    build_T_formula,
    build_integral_at,
    build_m_union,
    build_os_universal,
    build_phi_sigma,
    build_s_formula,
    build_square_class,
    build_union,
    build_union_core,
    build_union_optimized,
    build_union_optimized_for,
)
from ringdef.fields import QQ, RationalFunctions
from ringdef.formulas import FiniteDomain, defined_set, eval_formula, polarity, rank
from ringdef.gf import SmallField
from ringdef.places import place_from_str
from ringdef.synth import SynthesisPack, synthesize_pack

F2 = RationalFunctions(2)


def q(n, d=1):
    return QQ.elem(n, d)


def P(field, text):
    return place_from_str(field, text)


PACK5 = SynthesisPack(frozenset([P(QQ, "q:5")]), q(5), q(2), q(1))


def test_rank_ledger_core():
    assert rank(build_s_formula()) == 3
    for mode in ("plain", "inverse", "units"):
        assert rank(build_phi_sigma(mode)) == 7
    assert rank(build_square_class()) == 8
    assert rank(build_H()) == 15
    assert rank(build_J()) == 16


def test_phi_sigma_trace_sums_over_f9_split_case():
    # parameters a = a2 = 0, b = b2 = 1: brute-force trace sums of norm-1
    # noncentral elements against the formula, over F_9
    dom = FiniteDomain(9)
    gf = dom.gf
    phi = build_phi_sigma("plain")
    traces = set()
    for x1 in gf.elements():
        for x2 in gf.elements():
            for x3 in gf.elements():
                for x4 in gf.elements():
                    if x2 == 0 and x3 == 0 and x4 == 0:
                        continue
                    # a = 0, b = 1: Nrd = x1^2 + x1 x2 - (x3^2 + x3 x4)
                    nrd = gf.sub(gf.add(gf.mul(x1, x1), gf.mul(x1, x2)),
                                 gf.add(gf.mul(x3, x3), gf.mul(x3, x4)))
                    if nrd == 1:
                        traces.add(gf.add(gf.add(x1, x1), x2))
    sums = {gf.add(s, t) for s in traces for t in traces}
    got = set()
    for x in gf.elements():
        r = eval_formula(phi, {"X": x, "A": 0, "B": 1, "A2": 0, "B2": 1}, dom)
        assert r is not None
        if r:
            got.add(x)
    assert got == sums


def test_phi_sigma_units_rejects_zero():
    dom = FiniteDomain(5)
    phi = build_phi_sigma("units")
    assert eval_formula(phi, {"X": 0, "A": 0, "B": 1, "A2": 0, "B2": 1}, dom) is False


@pytest.mark.parametrize("qsize", [2, 3, 4, 5])
def test_phi_sigma_matches_brute_force_random_params(qsize):
    dom = FiniteDomain(qsize)
    gf = dom.gf
    phi = build_phi_sigma("plain")
    import random

    rng = random.Random(qsize)
    tried = 0
    while tried < 3:
        a, b = rng.randrange(qsize), rng.randrange(qsize)
        a2, b2 = rng.randrange(qsize), rng.randrange(qsize)
        # need b(1+4a) != 0 on both slots
        if gf.mul(b, gf.add(1, gf.mul(gf.from_int(4), a))) == 0:
            continue
        if gf.mul(b2, gf.add(1, gf.mul(gf.from_int(4), a2))) == 0:
            continue
        tried += 1

        def s_set(aa, bb):
            out = set()
            for x1 in gf.elements():
                for x2 in gf.elements():
                    for x3 in gf.elements():
                        for x4 in gf.elements():
                            if x2 == 0 and x3 == 0 and x4 == 0:
                                continue
                            n1 = gf.add(gf.mul(x1, x1), gf.mul(x1, x2))
                            n1 = gf.sub(n1, gf.mul(aa, gf.mul(x2, x2)))
                            inner = gf.add(gf.mul(x3, x3), gf.mul(x3, x4))
                            inner = gf.sub(inner, gf.mul(aa, gf.mul(x4, x4)))
                            if gf.sub(n1, gf.mul(bb, inner)) == 1:
                                out.add(gf.add(gf.add(x1, x1), x2))
            return out

        sums = {gf.add(s, t) for s in s_set(a, b) for t in s_set(a2, b2)}
        got = set()
        for x in gf.elements():
            r = eval_formula(phi, {"X": x, "A": a, "B": b, "A2": a2, "B2": b2}, dom)
            assert r is not None
            if r:
                got.add(x)
        assert got == sums, (qsize, a, b, a2, b2)


def test_rank_ledger_instantiated():
    assert rank(build_Phi(QQ, [P(QQ, "q:5")], u=q(2))) == 14
    assert rank(build_T_formula(PACK5)) == 63
    assert rank(build_union_core(PACK5)) == 79
    assert rank(build_m_union(QQ, [P(QQ, "q:5")])) == 7
    assert rank(build_integral_at(QQ, [P(QQ, "q:5")])) == 8


def test_union_even_cardinality_keeps_rank():
    phi = build_union(QQ, [P(QQ, "q:2"), P(QQ, "q:5")])
    assert rank(phi) == 79


def test_optimized_ranks():
    pack_q, _ = synthesize_pack(QQ, [P(QQ, "q:2"), P(QQ, "q:5")])
    assert rank(build_union_optimized(pack_q)) == 48
    pack_f, _ = synthesize_pack(F2, [P(F2, "f:T")])
    assert rank(build_union_optimized(pack_f)) == 47
    assert rank(build_union_optimized_for(QQ, [P(QQ, "q:5")])) == 48
    assert rank(build_union_optimized_for(F2, [P(F2, "f:T")])) == 47


def test_optimized_precondition_errors():
    with pytest.raises(ValueError) as err:
        build_union_optimized(PACK5)  # S = {5} misses the dyadic place
    assert "q:2" in str(err.value)


def test_universal_ranks():
    psi = build_os_universal(QQ, [P(QQ, "q:5")])
    assert rank(psi) == 80
    assert polarity(psi) == "universal"
