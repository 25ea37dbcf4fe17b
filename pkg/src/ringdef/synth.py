"""Certified parameter synthesis for the S-integer definitions.

Every existence statement used by the definitions is realized by a
deterministic search whose output is re-verified before being returned:
pi with prescribed odd-valuation support, per-place units u with
irreducible Artin-Schreier polynomials, the twisting element c, and the
witness pairs (a, b) whose algebra [a^2, b pi) ramifies exactly at
S + {w}.  Searches never return unverified answers; exhausting a budget
raises SearchExhausted with diagnostics.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .fields import Rationals, RationalFunctions
from .places import (
    Place,
    ResidueField,
    artin_schreier_irreducible_at,
    element_with_valuations,
    first_places,
    odd_and_neg,
    place_from_str,
    places_stream,
    valuation,
    weak_approximate,
)
from .quaternion import ARTIN_SCHREIER, QuaternionDesc, is_nonreal, ramification_set
from .sets import in_complement_union, in_phi, in_t


class SearchExhausted(ArithmeticError):
    def __init__(self, what, tried, details=""):
        self.what = what
        self.tried = tried
        self.details = details
        super().__init__(f"search exhausted: {what} after {tried} candidates {details}")


@dataclass(frozen=True)
class SynthesisPack:
    S: frozenset
    pi: object
    u: object
    c: object

    def __post_init__(self):
        S = set(self.S)
        if not S or len(S) % 2 == 0:
            raise ValueError("S must be finite of odd cardinality")
        odd_pi, _ = odd_and_neg(self.pi)
        if not S <= odd_pi:
            raise ValueError("S must be contained in Odd(pi)")
        for v in S:
            if valuation(self.u, v) != 0:
                raise ValueError(f"u must be a unit at {v}")
            if not artin_schreier_irreducible_at(v, self.u * self.u):
                raise ValueError(f"X^2-X-u^2 must be irreducible at {v}")
        for v in odd_pi:
            want = 0 if v in S else 1
            if valuation(self.c, v) != want:
                raise ValueError(f"need v(c) = {want} at {v}")

    @property
    def field(self):
        return self.pi.field

    def __str__(self):
        fmt = self.field.format_element
        places = ",".join(str(v) for v in sorted(self.S, key=lambda v: v.sort_key()))
        return f"pack(S={{{places}}};pi={fmt(self.pi)};u={fmt(self.u)};c={fmt(self.c)})"


def pack_from_str(field, text):
    text = text.strip()
    if not (text.startswith("pack(") and text.endswith(")")):
        raise ValueError(f"bad pack literal {text!r}")
    body = text[5:-1]
    parts = {}
    depth = 0
    cur = ""
    chunks = []
    for ch in body:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == ";" and depth == 0:
            chunks.append(cur)
            cur = ""
        else:
            cur += ch
    chunks.append(cur)
    for chunk in chunks:
        key, _, val = chunk.partition("=")
        parts[key.strip()] = val.strip()
    splaces = parts["S"].strip()
    if not (splaces.startswith("{") and splaces.endswith("}")):
        raise ValueError("pack S must be written as {place,place,...}")
    S = frozenset(place_from_str(field, s) for s in splaces[1:-1].split(",") if s.strip())
    return SynthesisPack(
        S,
        field.parse_element(parts["pi"]),
        field.parse_element(parts["u"]),
        field.parse_element(parts["c"]),
    )


# ----------------------------------------------------------------------
# pi, u, c

def find_pi(field, S):
    """An element pi with S inside Odd(pi) and |Odd(pi)| odd; Odd(pi) is certified.

    Over F_p(T) the support must also have even total degree (a parity
    forced by the product formula), so up to three auxiliary places are
    adjoined, smallest first.
    """
    S = sorted(set(S), key=lambda v: v.sort_key())
    functional = isinstance(field, RationalFunctions)
    base_deg = sum(v.degree for v in S)
    pool = first_places(field, 12, exclude=S)
    chosen = None
    for k in range(0, 4):
        if (len(S) + k) % 2 == 0:
            continue
        for combo in itertools.combinations(pool, k):
            if functional and (base_deg + sum(v.degree for v in combo)) % 2:
                continue
            chosen = list(S) + list(combo)
            break
        if chosen is not None:
            break
    if chosen is None:
        raise SearchExhausted("find_pi", len(pool), f"S={S}")
    pi = field.one
    for v in chosen:
        if v.gen is not None:
            pi = pi * field.elem(v.gen)
    odd, _ = odd_and_neg(pi)
    assert odd == frozenset(chosen), "Odd(pi) certification failed"
    return pi


def find_u(field, S):
    """A unit at every v in S whose square has irreducible Artin-Schreier polynomial.

    Residue fields are finite, so suitable residues exist at every place;
    they are found by exhaustion and combined by weak approximation.
    """
    S = sorted(set(S), key=lambda v: v.sort_key())
    if not S:
        raise ValueError("S must be nonempty")
    targets = []
    for v in S:
        rf = ResidueField(v)
        for r in rf.elements():
            if rf.is_zero(r):
                continue
            if not rf.artin_schreier_has_root(rf.mul(r, r)):
                targets.append((v, rf.lift(r), 0))
                break
        else:
            raise SearchExhausted("find_u residue", rf.size, f"at {v}")
    u = weak_approximate(field, targets)
    for v in S:
        assert valuation(u, v) == 0 and artin_schreier_irreducible_at(v, u * u)
    return u


def find_c(S, pi, height_cap=None):
    """The smallest-height c with v(c) = 0 on S and v(c) = 1 on Odd(pi) minus S."""
    field = pi.field
    S = set(S)
    odd, _ = odd_and_neg(pi)
    if not S <= odd:
        raise ValueError("S must be contained in Odd(pi)")
    if height_cap is None:
        height_cap = 30 if isinstance(field, Rationals) else 4
    ones = odd - S

    def good(c):
        if c.is_zero():
            return False
        return all(valuation(c, v) == 0 for v in S) and all(valuation(c, v) == 1 for v in ones)

    for c in field.enumerate_by_height(height_cap):
        if good(c):
            return c
    c = element_with_valuations(field, {**{v: 0 for v in S}, **{v: 1 for v in ones}})
    assert good(c)
    return c


def synthesize_pack(field, S):
    """A valid pack for the given finite place set.

    If |S| is even (or the function-field parity forces it), S is enlarged
    to the certified odd set Odd(pi); the returned `extra` lists the
    adjoined places, whose maximal ideals must be re-attached by a
    rank-7 disjunct when defining the original union.
    """
    S = frozenset(S)
    pi = find_pi(field, S)
    odd, _ = odd_and_neg(pi)
    u = find_u(field, odd)
    c = find_c(odd, pi)
    pack = SynthesisPack(frozenset(odd), pi, u, c)
    extra = sorted(odd - S, key=lambda v: v.sort_key())
    return pack, extra


# ----------------------------------------------------------------------
# quaternion algebras with prescribed ramification

def _b_candidates(field, base, pool_places, exclude, max_correction=2):
    """Candidates base * (product of <= max_correction pool generators) * sign,
    in deterministic height order."""
    gens = []
    seen = set()
    for v in pool_places:
        if v.gen is not None and v not in exclude and v.gen not in seen:
            seen.add(v.gen)
            gens.append(v.gen)
    cands = []
    rational = isinstance(field, Rationals)
    for k in range(0, max_correction + 1):
        for combo in itertools.combinations(gens, k):
            prod = base
            for g in combo:
                prod = prod * field.elem(g)
            cands.append(prod)
            if rational:
                cands.append(-prod)
    if rational:
        cands.sort(key=lambda x: (abs(x.num) * x.den, x.num < 0))
    else:
        cands.sort(key=lambda x: (max(x.num.deg, x.den.deg), x.num.code(), x.den.code()))
    return cands


@lru_cache(maxsize=4096)
def quaternion_with_ramification(field, places, d=None, multiplier=None, pool_size=25, max_correction=2):
    """A descriptor [d, b * multiplier) with ramification set exactly `places`.

    d defaults to u^2 for a unit u with X^2 - X - u^2 irreducible at every
    target place (needed for nonsplitness there).  At each finite target
    place the product b * multiplier must have odd valuation, so b carries
    the target generators not already covered by the multiplier; a
    correction factor (up to two auxiliary generators and a sign) adjusts
    residue classes and the remaining places.  Every candidate is certified
    by recomputing the full ramification set.
    """
    places = frozenset(places)
    if len(places) % 2:
        raise ValueError("only even place sets are ramification sets of nonreal algebras")
    if multiplier is None:
        multiplier = field.one
    if d is None:
        d = field.one if not places else find_u(field, places) ** 2
    base = field.one
    for v in sorted(places, key=lambda v: v.sort_key()):
        if v.gen is not None and valuation(multiplier, v) % 2 == 0:
            base = base * field.elem(v.gen)
    pool = first_places(field, pool_size)
    cands = _b_candidates(field, base, pool, exclude=places)
    for b0 in cands:
        if b0.is_zero() or (b0 * multiplier).is_zero():
            continue
        try:
            q = QuaternionDesc(ARTIN_SCHREIER, d, b0 * multiplier)
        except ValueError:
            continue
        if ramification_set(q) == places:
            return q
    raise SearchExhausted("quaternion_with_ramification", len(cands), f"target={sorted(map(str, places))}")


def sigma_pair_for(field, S):
    """Two nonreal descriptors whose ramification sets intersect exactly in S."""
    S = frozenset(S)
    if len(S) % 2 == 0:
        q = quaternion_with_ramification(field, S)
        return q, q
    w1, w2 = first_places(field, 2, exclude=S)
    q1 = quaternion_with_ramification(field, S | {w1})
    q2 = quaternion_with_ramification(field, S | {w2})
    return q1, q2


# ----------------------------------------------------------------------
# the witness pairs (a, b)

def _a_candidates(field, g, u, cap=400):
    yield u
    if isinstance(field, Rationals):
        for k in range(1, cap):
            yield u + k * g
        for k in range(1, cap):
            yield u - k * g
    else:
        from .fppoly import Poly

        for code in range(1, cap):
            yield u + field.elem(Poly.from_code(field.p, code)) * g


@lru_cache(maxsize=4096)
def find_ab(pack, w):
    """A pair (a, b) in Phi^S_u with ramification of [a^2, b pi) exactly S + {w}.

    a is taken from the progression u + k g (g vanishing to first order on
    S, balanced at w) with the Artin-Schreier residue condition at w checked
    by exhaustion; b comes from the certified ramification search and is then
    made a unit on S by square scaling.  The returned pair is re-verified.
    """
    field = pack.field
    S = sorted(pack.S, key=lambda v: v.sort_key())
    if w in pack.S:
        raise ValueError("w must lie outside S")
    g = element_with_valuations(field, {**{v: 1 for v in S}, w: 0})
    a = None
    tried = 0
    for cand in _a_candidates(field, g, pack.u):
        tried += 1
        if cand.is_zero() or valuation(cand, w) != 0:
            continue
        if artin_schreier_irreducible_at(w, cand * cand):
            a = cand
            break
    if a is None:
        raise SearchExhausted("find_ab: a", tried, f"w={w}")

    target = pack.S | {w}
    q = quaternion_with_ramification(field, frozenset(target), d=a * a, multiplier=pack.pi)
    b0 = q.b / pack.pi
    # normalize b to a unit on S by multiplying with a square (v(b0) is even on S)
    want = {}
    for v in S:
        e = valuation(b0, v)
        assert e % 2 == 0, "odd b-valuation on S cannot occur for a certified pair"
        if e:
            want[v] = -e // 2
    if want:
        s = element_with_valuations(field, want, avoid=[w])
        b = b0 * s * s
    else:
        b = b0
    qq = QuaternionDesc(ARTIN_SCHREIER, a * a, b * pack.pi)
    assert ramification_set(qq) == frozenset(target), "ramification drifted under square scaling"
    assert is_nonreal(qq)
    assert in_phi(pack.S, pack.u, a, b)
    for v in S:
        assert valuation(1 + 4 * a * a, v) == 0 and valuation(a, v) == 0 and valuation(b, v) == 0
        assert valuation(pack.c, v) == 0
    return a, b


def witness_for(x, pack):
    """For x in the union of m_v (v outside S): a certified pair (a, b) with x in T_(a,b).

    Returns None when x is not in the union.  The place w is the smallest
    with positive valuation outside S (any place for x = 0).
    """
    S = pack.S
    if not in_complement_union(x, S):
        return None
    field = pack.field
    if x.is_zero():
        w = first_places(field, 1, exclude=S)[0]
    else:
        from .places import support

        outside = [v for v, e in support(x).items() if e > 0 and v not in S]
        w = min(outside, key=lambda v: v.sort_key())
    a, b = find_ab(pack, w)
    assert in_t(pack, a, b, x), "certified pair fails the T-membership postcondition"
    return a, b


def union_membership(x, S, pack_and_extra=None):
    """Decide x in union of m_v over v outside S through the constructive chain.

    S may have any finite cardinality: a pack over the enlarged odd set is
    synthesized and the finitely many adjoined places are handled directly.
    """
    field = x.field
    if pack_and_extra is None:
        pack, extra = synthesize_pack(field, S)
    else:
        pack, extra = pack_and_extra
    if witness_for(x, pack) is not None:
        return True
    return any(valuation(x, v) >= 1 for v in extra)
