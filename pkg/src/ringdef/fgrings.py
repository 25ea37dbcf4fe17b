"""Finitely generated subrings with global fraction field: analysis and
universal definitions.

Supported ring kinds form a closed enumeration: Z[1/n], F_p[T], and
monomial subrings spanned over F_p by T^k for k in a numerical semigroup
with coprime generators.  Each is decomposed as a finite union of cosets
y + r O_S (the integral closure is a ring of S-integers, r is a
conductor), which turns the universal S-integer definition into a
universal definition of the ring itself: a disjunction over coset
representatives, with quantifier ranks adding.
"""

import itertools
import math
from dataclasses import dataclass

from .builders import build_os_universal
from .fields import QQ, RationalFunctions
from .formulas import Const, Mul, Sub, Var, canonicalize_bound_names, combine_many, rank, substitute
from .fppoly import Poly
from .places import Place, support, valuation
from .primes import factorint
from .sets import in_o_s
from .synth import synthesize_pack, union_membership


@dataclass(frozen=True)
class FgRingDesc:
    kind: str  # localized-integers | polynomial-ring | monomial-subring
    field: object
    params: tuple

    def __str__(self):
        if self.kind == "localized-integers":
            return f"Zinv:{self.params[0]}"
        if self.kind == "polynomial-ring":
            return f"FpT:{self.field.p}"
        gens = ",".join(str(g) for g in self.params)
        return f"Mono:{self.field.p}:{{{gens}}}"


def ring_from_str(text):
    text = text.strip()
    if text.startswith("Zinv:"):
        n = int(text[5:])
        if n < 1:
            raise ValueError("Zinv parameter must be >= 1")
        return FgRingDesc("localized-integers", QQ, (n,))
    if text.startswith("FpT:"):
        p = int(text[4:])
        return FgRingDesc("polynomial-ring", RationalFunctions(p), ())
    if text.startswith("Mono:"):
        rest = text[5:]
        p_s, _, gens_s = rest.partition(":")
        if not (gens_s.startswith("{") and gens_s.endswith("}")):
            raise ValueError("monomial generators must be written as {k1,k2,...}")
        gens = tuple(sorted(int(g) for g in gens_s[1:-1].split(",")))
        return FgRingDesc("monomial-subring", RationalFunctions(int(p_s)), gens)
    raise ValueError(f"unknown ring descriptor {text!r}")


@dataclass(frozen=True)
class RingAnalysis:
    desc: FgRingDesc
    S: frozenset
    conductor: object
    coset_reps: tuple


def _semigroup(gens, bound):
    reachable = [False] * (bound + 1)
    reachable[0] = True
    for g in gens:
        for k in range(g, bound + 1):
            if reachable[k - g]:
                reachable[k] = True
    return reachable


def analyze(desc):
    """The place set S, a conductor r with r O_S contained in R, and coset
    representatives with R the disjoint union of y + r O_S."""
    field = desc.field
    if desc.kind == "localized-integers":
        n = desc.params[0]
        S = frozenset(Place(field, p) for p, _ in factorint(n)) if n > 1 else frozenset()
        analysis = RingAnalysis(desc, S, field.one, (field.zero,))
    elif desc.kind == "polynomial-ring":
        analysis = RingAnalysis(desc, frozenset([Place(field, None)]), field.one, (field.zero,))
    else:
        gens = desc.params
        if not gens or math.gcd(*gens) != 1:
            raise ValueError("semigroup generators must have gcd 1")
        bound = max(gens) * min(gens) + 1
        reach = _semigroup(gens, bound)
        conductor_exp = 0
        for k in range(bound, -1, -1):
            if not reach[k]:
                conductor_exp = k + 1
                break
        low_exps = [k for k in range(conductor_exp) if reach[k]]
        p = field.p
        reps = []
        for coeffs in itertools.product(range(p), repeat=len(low_exps)):
            poly = Poly.zero(p)
            for c, k in zip(coeffs, low_exps):
                poly = poly + Poly(p, [0] * k + [c])
            reps.append(field.elem(poly))
        reps.sort(key=lambda x: (x.num.deg, x.num.code()))
        r = field.elem(Poly(p, [0] * conductor_exp + [1]))
        analysis = RingAnalysis(desc, frozenset([Place(field, None)]), r, tuple(reps))
    _certify_analysis(analysis)
    return analysis


def member_direct(desc, x):
    """Exact ring membership from the defining presentation."""
    field = desc.field
    if desc.kind == "localized-integers":
        n = desc.params[0]
        if x.is_zero():
            return True
        return all(e >= 0 or n % v.gen == 0 for v, e in support(x).items())
    if desc.kind == "polynomial-ring":
        return x.den.is_one()
    if not x.den.is_one():
        return False
    if x.is_zero():
        return True
    gens = desc.params
    bound = max(x.num.deg, max(gens) * min(gens)) + 1
    reach = _semigroup(gens, bound)
    return all(c == 0 or reach[k] for k, c in enumerate(x.num.coeffs))


def member_via_cosets(analysis, x):
    """Membership through the coset decomposition and the O_S oracle."""
    r = analysis.conductor
    return any(in_o_s((x - y) / r, analysis.S) for y in analysis.coset_reps)


def member_via_chain(analysis, x, pack_and_extra=None):
    """Membership through the emitted formula's semantic chain: the coset
    disjunction with O_S evaluated as the complement of the inverted union,
    the union itself decided by certified witness synthesis."""
    field = analysis.desc.field
    if pack_and_extra is None:
        pack_and_extra = synthesize_pack(field, analysis.S)
    r = analysis.conductor
    for y in analysis.coset_reps:
        z = (x - y) / r
        if z.is_zero():
            return True
        if not union_membership(1 / z, analysis.S, pack_and_extra):
            return True
    return False


def _certify_analysis(analysis, samples=60):
    desc = analysis.desc
    field = desc.field
    r = analysis.conductor
    # pairwise incongruent representatives
    for y1 in analysis.coset_reps:
        for y2 in analysis.coset_reps:
            if y1 != y2 and in_o_s((y1 - y2) / r, analysis.S):
                raise AssertionError("congruent coset representatives")
    # sampled equivalence of direct membership and the coset decomposition
    height = 25 if field.family == "rationals" else 4
    count = 0
    for x in field.enumerate_by_height(height):
        count += 1
        if count > samples * 10:
            break
        if member_direct(desc, x) != member_via_cosets(analysis, x):
            raise AssertionError(f"coset decomposition disagrees at {x}")


def build_ring_formula(desc, pack_and_extra=None):
    """Universal definition of the ring: a disjunction over coset
    representatives y of the universal O_S formula applied to (X - y)/r.
    Universal disjunction adds ranks, so the total rank is
    |coset_reps| * (rank of the O_S formula)."""
    analysis = desc if isinstance(desc, RingAnalysis) else analyze(desc)
    field = analysis.desc.field
    if pack_and_extra is None:
        pack_and_extra = synthesize_pack(field, analysis.S)
    psi = build_os_universal(field, analysis.S, pack_and_extra)
    n = rank(psi)
    r_inv = Const(1 / analysis.conductor)
    disjuncts = []
    for y in analysis.coset_reps:
        slot = Mul(Sub(Var("X"), Const(y)), r_inv)
        disjuncts.append(substitute(psi, {"X": slot}))
    out = combine_many(disjuncts, "or") if len(disjuncts) > 1 else disjuncts[0]
    out = canonicalize_bound_names(out)
    assert rank(out) == len(analysis.coset_reps) * n
    return out
