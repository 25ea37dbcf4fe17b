"""Builders for the first-order definitions, with exact rank accounting.

The tower, with ranks in parentheses:

  s-formula (3): reduced traces of norm-1 noncentral elements of [A, B),
      through the parametrization x2 = X - 2 x1.
  phi-sigma (7): sums of two such traces for the pair [A,B), [A2,B2) --
      the trace-sum set -- in plain, inverse and unit variants.
  square-class membership (8): X q^2 lands in the unit trace-sum set
      (or vanishes for nonzero q).
  J (16) and H (15): the semilocal building blocks, via the product/sum
      identities with denominators cleared.
  Phi (14): the parameter-pair set (units side + congruence side).
  T (63) and the union formula (79 = 63 + 14 + 2); the optimized
      variants (47 in characteristic 2, 48 otherwise); universal
      definitions through dualize (+1).

Free-variable conventions: the defined element is X; algebra slots are
A, B (and A2, B2 for the second algebra); the twist slot is C.  All
bound variables are canonicalized to y1, y2, ... in traversal order.
"""

from .fields import Rationals, RationalFunctions
from .formulas import (
    Add,
    And,
    Const,
    Eq,
    Mul,
    Not,
    Or,
    Sub,
    Var,
    ZERO,
    canonicalize_bound_names,
    combine,
    combine_many,
    dualize,
    exists_many,
    prenex,
    rank,
    subst_ratio_formula,
    substitute,
    _rebuild,
)
from .places import Place, uniformizer, uniformizing_element
from .quaternion import artin_schreier_pair
from .synth import sigma_pair_for, synthesize_pack


def _s_atom(t, a, b, x1, x3, x4):
    """x1^2 + x1(t - 2x1) - a(t - 2x1)^2 - b(x3^2 + x3 x4 - a x4^2) = 1."""
    x2 = Sub(t, Mul(Const(2), x1))
    lhs = Sub(
        Sub(
            Add(Mul(x1, x1), Mul(x1, x2)),
            Mul(a, Mul(x2, x2)),
        ),
        Mul(b, Sub(Add(Mul(x3, x3), Mul(x3, x4)), Mul(a, Mul(x4, x4)))),
    )
    return Eq(lhs, Const(1))


def build_s_formula():
    """Rank 3: X is the reduced trace of a norm-1 element of [A, B)."""
    m = _s_atom(Var("X"), Var("A"), Var("B"), Var("t1"), Var("t2"), Var("t3"))
    out = exists_many(["t1", "t2", "t3"], m)
    out = canonicalize_bound_names(out)
    assert rank(out) == 3
    return out


def _phi_sigma_matrix():
    """Quantifier-free core of the trace-sum formula with bound names t0..t6."""
    m1 = _s_atom(Var("t0"), Var("A"), Var("B"), Var("t1"), Var("t2"), Var("t3"))
    m2 = _s_atom(Sub(Var("X"), Var("t0")), Var("A2"), Var("B2"), Var("t4"), Var("t5"), Var("t6"))
    return And(m1, m2), [f"t{i}" for i in range(7)]


def build_phi_sigma(mode="plain"):
    """Rank 7: the trace-sum set of [A,B) and [A2,B2) (mode plain), its set
    of inverses (mode inverse: substitute 1/X and clear), or its units
    (mode units: substitute (X^2+1)/X and clear)."""
    matrix, names = _phi_sigma_matrix()
    if mode == "plain":
        out = exists_many(names, matrix)
    elif mode == "inverse":
        cleared = subst_ratio_formula(matrix, "X", Const(1), Var("X"))
        out = exists_many(names, And(Not(Eq(Var("X"), ZERO)), cleared))
    elif mode == "units":
        num = Add(Mul(Var("X"), Var("X")), Const(1))
        cleared = subst_ratio_formula(matrix, "X", num, Var("X"))
        out = exists_many(names, And(Not(Eq(Var("X"), ZERO)), cleared))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = canonicalize_bound_names(out)
    assert rank(out) == 7
    return out


def build_square_class():
    """Rank 8: X lands in squares times the unit trace-sum set of [A, B),
    expressed as: some nonzero q has X q^2 in the unit set or X q^2 = 0."""
    units = build_phi_sigma("units")
    pre, matrix = prenex(units)
    names = [v for _, v in pre]
    w = Mul(Var("X"), Mul(Var("q0"), Var("q0")))
    shifted = substitute(matrix, {"X": w, "A2": Var("A"), "B2": Var("B")})
    body = And(Not(Eq(Var("q0"), ZERO)), Or(shifted, Eq(w, ZERO)))
    out = exists_many(["q0"] + names, body)
    out = canonicalize_bound_names(out)
    assert rank(out) == 8
    return out


def build_J():
    """Rank 16: the J set of ([A, B), C) -- elements of the form
    (C square) * (trace-sum element) with 1 - C Y^2 in squares times units."""
    plain = build_phi_sigma("plain")
    pre1, m1 = prenex(plain)
    names1 = [v for _, v in pre1]
    m1 = substitute(m1, {"A2": Var("A"), "B2": Var("B")})
    den = Mul(Var("C"), Mul(Var("Y0"), Var("Y0")))
    part1 = subst_ratio_formula(m1, "X", Var("X"), den)

    square = build_square_class()
    pre2, m2 = prenex(square)
    names2 = []
    ren = {}
    for i, (_, v) in enumerate(pre2):
        nv = f"z{i}"
        ren[v] = Var(nv)
        names2.append(nv)
    m2 = substitute(m2, ren)
    one_minus = Sub(Const(1), den)
    part2 = substitute(m2, {"X": one_minus})

    out = exists_many(["Y0"] + names1 + names2, And(part1, part2))
    out = canonicalize_bound_names(out)
    assert rank(out) == 16
    return out


def build_H():
    """Rank 15: the H set of ([A, B), C) -- some Y with C Y in the trace-sum
    set and (1 - X Y)/(C X) in its inverse set, denominators cleared."""
    plain = build_phi_sigma("plain")
    pre1, m1 = prenex(plain)
    names1 = [v for _, v in pre1]
    m1 = substitute(m1, {"A2": Var("A"), "B2": Var("B")})
    part1 = substitute(m1, {"X": Mul(Var("C"), Var("Y0"))})

    inverse = build_phi_sigma("inverse")
    pre2, m2 = prenex(inverse)
    names2 = []
    ren = {}
    for i, (_, v) in enumerate(pre2):
        nv = f"z{i}"
        ren[v] = Var(nv)
        names2.append(nv)
    m2 = substitute(m2, ren)
    m2 = substitute(m2, {"A2": Var("A"), "B2": Var("B")})
    num = Sub(Const(1), Mul(Var("X"), Var("Y0")))
    den = Mul(Var("C"), Var("X"))
    part2 = subst_ratio_formula(m2, "X", num, den)

    out = exists_many(["Y0"] + names1 + names2, And(part1, part2))
    out = canonicalize_bound_names(out)
    assert rank(out) == 15
    return out


def _instantiated_sigma_matrix(mode, pair, slot_term):
    """Prefix names and matrix of a sigma formula with algebra constants
    substituted and the X slot replaced by a polynomial term."""
    phi = build_phi_sigma(mode)
    pre, m = prenex(phi)
    names = [v for _, v in pre]
    (a1, b1), (a2, b2) = artin_schreier_pair(pair[0]), artin_schreier_pair(pair[1])
    m = substitute(m, {
        "A": Const(a1), "B": Const(b1), "A2": Const(a2), "B2": Const(b2),
        "X": slot_term,
    })
    return names, m


def build_Phi(field, S, u=None, pi_local=None, pair=None):
    """Rank 14: the set of pairs (A, B) with B a unit at every place of S and
    A congruent to u modulo the product of their maximal ideals.

    The unit side is the unit-mode sigma formula for a synthesized algebra
    pair cutting out S; the congruence side says (A - u)/pi is S-integral
    for an element pi of valuation exactly 1 along S.
    """
    S = frozenset(S)
    if u is None:
        from .synth import find_u

        u = find_u(field, S)
    if pi_local is None:
        pi_local = uniformizing_element(field, sorted(S, key=lambda v: v.sort_key()))
    if pair is None:
        pair = sigma_pair_for(field, S)

    names_b, m_b = _instantiated_sigma_matrix("units", pair, Var("B"))
    slot = Mul(Sub(Var("A"), Const(u)), Const(1 / pi_local))
    names_a, m_a = _instantiated_sigma_matrix("plain", pair, slot)
    ren = {v: Var(f"z{i}") for i, v in enumerate(names_a)}
    m_a = substitute(m_a, ren)
    names_a = [f"z{i}" for i in range(len(names_a))]

    out = exists_many(names_b + names_a, And(m_b, m_a))
    out = canonicalize_bound_names(out)
    assert rank(out) == 14
    return out


def _j_h_conjunct(base, c_term, x_term=None):
    """Instantiate a J/H template on the algebra slots [A^2, B pi) with twist c_term."""
    pre, m = prenex(base)
    names = [v for _, v in pre]
    mapping = {
        "A": Mul(Var("A"), Var("A")),
        "B": Mul(Var("B"), Var("PI")),
        "C": c_term,
    }
    if x_term is not None:
        mapping["X"] = x_term
    return names, substitute(m, mapping)


def build_T_formula(pack):
    """Rank 63: the T set of the pack at parameters (A, B): the threefold J
    intersection (twists 1+4A^2, B, c) with the H set (twist A), all on the
    algebra [A^2, B pi)."""
    J = build_J()
    H = build_H()
    one_plus = Add(Const(1), Mul(Const(4), Mul(Var("A"), Var("A"))))
    pieces = [
        _j_h_conjunct(J, one_plus),
        _j_h_conjunct(J, Var("B")),
        _j_h_conjunct(J, Const(pack.c)),
        _j_h_conjunct(H, Var("A")),
    ]
    all_names = []
    mats = []
    for i, (names, m) in enumerate(pieces):
        ren = {v: Var(f"c{i}_{j}") for j, v in enumerate(names)}
        mats.append(substitute(m, ren))
        all_names.extend(f"c{i}_{j}" for j in range(len(names)))
    matrix = mats[0]
    for m in mats[1:]:
        matrix = And(matrix, m)
    out = exists_many(all_names, matrix)
    out = substitute(out, {"PI": Const(pack.pi)})
    out = canonicalize_bound_names(out)
    assert rank(out) == 63
    return out


def build_union_core(pack):
    """Rank 79: existential closure over (A, B) in Phi of membership in T_(A,B);
    defines the union of the maximal ideals at all places outside pack.S."""
    field = pack.field
    phi_part = build_Phi(field, pack.S, u=pack.u)
    t_part = build_T_formula(pack)
    pre1, m1 = prenex(phi_part)
    pre2, m2 = prenex(t_part)
    ren = {v: Var(f"z{i}") for i, (_, v) in enumerate(pre2)}
    m2 = substitute(m2, ren)
    names = [v for _, v in pre1] + [f"z{i}" for i in range(len(pre2))]
    out = exists_many(["A", "B"] + names, And(m1, m2))
    out = canonicalize_bound_names(out)
    assert rank(out) == 79
    return out


def build_m_union(field, places):
    """Rank 7: the union of m_v over the given finite places, each as
    x/pi_v landing in the trace-sum set of a pair cutting out {v}."""
    places = sorted(set(places), key=lambda v: v.sort_key())
    if not places:
        raise ValueError("need at least one place")
    parts = []
    for v in places:
        pair = sigma_pair_for(field, frozenset([v]))
        slot = Mul(Var("X"), Const(1 / uniformizer(v)))
        names, m = _instantiated_sigma_matrix("plain", pair, slot)
        parts.append(exists_many(names, m))
    out = combine_many(parts, "or") if len(parts) > 1 else parts[0]
    out = canonicalize_bound_names(out)
    assert rank(out) == 7
    return out


def build_union(field, S, pack_and_extra=None):
    """Rank 79 for any finite S: the core formula over the enlarged odd set,
    rejoined with the rank-7 union over the adjoined places (rank max)."""
    if pack_and_extra is None:
        pack, extra = synthesize_pack(field, S)
    else:
        pack, extra = pack_and_extra
    core = build_union_core(pack)
    if not extra:
        out = core
    else:
        out = combine(core, build_m_union(field, extra), "or")
    out = canonicalize_bound_names(out)
    assert rank(out) == 79
    return out


def build_union_optimized(pack):
    """Rank 47 (characteristic 2) / 48 (otherwise): the union formula with the
    redundant conjuncts dropped.

    Requires S = Odd(pi); in characteristic not 2, S must also contain every
    place of residue characteristic 2.  Violations are reported together.
    """
    from .places import odd_and_neg

    field = pack.field
    problems = []
    odd, _ = odd_and_neg(pack.pi)
    if odd != pack.S:
        problems.append(f"S != Odd(pi): Odd(pi) = {sorted(map(str, odd))}")
    char2 = field.characteristic == 2
    if not char2 and isinstance(field, Rationals):
        if Place(field, 2) not in pack.S:
            problems.append("S must contain the dyadic place q:2")
    if problems:
        raise ValueError("optimized union preconditions unmet: " + "; ".join(problems))

    J = build_J()
    H = build_H()
    if char2:
        pieces = [
            _j_h_conjunct(J, Var("B")),
            _j_h_conjunct(H, Var("A")),
        ]
        expected = 47
    else:
        one_plus = Add(Const(1), Mul(Const(4), Mul(Var("A"), Var("A"))))
        pieces = [
            _j_h_conjunct(J, one_plus),
            _j_h_conjunct(J, Var("B")),
        ]
        expected = 48
    all_names = []
    mats = []
    for i, (names, m) in enumerate(pieces):
        ren = {v: Var(f"c{i}_{j}") for j, v in enumerate(names)}
        mats.append(substitute(m, ren))
        all_names.extend(f"c{i}_{j}" for j in range(len(names)))
    t_matrix = mats[0]
    for m in mats[1:]:
        t_matrix = And(t_matrix, m)
    t_part = exists_many(all_names, t_matrix)
    t_part = substitute(t_part, {"PI": Const(pack.pi)})

    phi_part = build_Phi(field, pack.S, u=pack.u)
    pre1, m1 = prenex(phi_part)
    pre2, m2 = prenex(t_part)
    ren = {v: Var(f"z{i}") for i, (_, v) in enumerate(pre2)}
    m2 = substitute(m2, ren)
    names = [v for _, v in pre1] + [f"z{i}" for i in range(len(pre2))]
    out = exists_many(["A", "B"] + names, And(m1, m2))
    out = canonicalize_bound_names(out)
    assert rank(out) == expected
    return out


def build_union_optimized_for(field, S):
    """The optimized union formula for an arbitrary finite S: synthesized over
    an admissible enlargement and rejoined with the rank-7 remainder; the
    rank stays 47/48 since disjunction takes the maximum."""
    S = frozenset(S)
    need = set(S)
    if field.characteristic != 2 and isinstance(field, Rationals):
        need.add(Place(field, 2))
    pack, extra = synthesize_pack(field, need)
    core = build_union_optimized(pack)
    extra = sorted(set(extra) | (need - S), key=lambda v: v.sort_key())
    if extra:
        core = combine(core, build_m_union(field, extra), "or")
    out = canonicalize_bound_names(core)
    assert rank(out) == (47 if field.characteristic == 2 else 48)
    return out


def build_integral_at(field, S):
    """Rank 8 universal definition of the intersection of O_v over v in S."""
    out = dualize(build_m_union(field, S), "X")
    out = canonicalize_bound_names(out)
    assert rank(out) == 8
    return out


def build_os_universal(field, S, pack_and_extra=None, optimized=False):
    """Universal definition of O_S: the dual of the union formula (rank + 1)."""
    if optimized:
        base = build_union_optimized_for(field, S)
    else:
        base = build_union(field, S, pack_and_extra)
    out = canonicalize_bound_names(dualize(base, "X"))
    return out
