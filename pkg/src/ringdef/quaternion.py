"""Quaternion algebra descriptors and their local behaviour.

Two parametrizations are supported: the characteristic-independent
[a, b) with u^2 - u = a, v^2 = b, uv + vu = v, and the classical (a, b)
with i^2 = a, j^2 = b, ij = -ji (characteristic != 2 only).  The two are
related by [a, b) = (1 + 4a, b).

Local splitting is decided place by place: tame quadratic-residue
symbols at odd residue characteristic, the explicit dyadic formula over
Q at 2, and Artin-Schreier analysis in characteristic 2 (pole reduction,
then a residue root / unramified parity / certified ramified
norm-equation trichotomy).  `ramification_set` only ever tests the
finitely many candidate places allowed by the local necessary
conditions; everything else is provably split.
"""

from dataclasses import dataclass
from functools import lru_cache

from .fields import Rationals, RationalFunctions, flip_T
from .fppoly import Poly, poly_valuation
from .local import artin_schreier_reduce, char2_ramified_splits, schmid_symbol, unit_part
from .places import Place, ResidueField, reduce_at, support, uniformizer, valuation
from .primes import valuation_int

ARTIN_SCHREIER = "artin-schreier"
CLASSICAL = "classical"


@dataclass(frozen=True)
class QuaternionDesc:
    form: str
    a: object
    b: object

    def __post_init__(self):
        if self.form not in (ARTIN_SCHREIER, CLASSICAL):
            raise ValueError(f"unknown quaternion form {self.form!r}")
        if self.a.field != self.b.field:
            raise ValueError("mixed fields in quaternion descriptor")
        field = self.a.field
        if self.form == ARTIN_SCHREIER:
            if (self.b * (1 + 4 * self.a)).is_zero():
                raise ValueError("need b(1+4a) != 0")
        else:
            if field.characteristic == 2:
                raise ValueError("classical form requires characteristic != 2")
            if (self.a * self.b).is_zero():
                raise ValueError("need ab != 0")

    @property
    def field(self):
        return self.a.field

    def __str__(self):
        fmt = self.field.format_element
        if self.form == ARTIN_SCHREIER:
            return f"AS[{fmt(self.a)};{fmt(self.b)}]"
        return f"CL({fmt(self.a)};{fmt(self.b)})"

    def __repr__(self):
        return f"QuaternionDesc({self})"


def as_quaternion(field, a, b):
    return QuaternionDesc(ARTIN_SCHREIER, a, b)


def cl_quaternion(field, a, b):
    return QuaternionDesc(CLASSICAL, a, b)


def quaternion_from_str(field, text):
    text = text.strip()
    if text.startswith("AS[") and text.endswith("]"):
        body, form = text[3:-1], ARTIN_SCHREIER
    elif text.startswith("CL(") and text.endswith(")"):
        body, form = text[3:-1], CLASSICAL
    else:
        raise ValueError(f"bad quaternion literal {text!r}")
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == ";" and depth == 0:
            a = field.parse_element(body[:i])
            b = field.parse_element(body[i + 1:])
            return QuaternionDesc(form, a, b)
    raise ValueError(f"bad quaternion literal {text!r} (expected 'a;b')")


# ----------------------------------------------------------------------
# trace and norm forms

def reduced_trace(q, point):
    x1, x2, x3, x4 = point
    if q.form == ARTIN_SCHREIER:
        return 2 * x1 + x2
    return 2 * x1


def reduced_norm(q, point):
    x1, x2, x3, x4 = point
    a, b = q.a, q.b
    if q.form == ARTIN_SCHREIER:
        return x1 * x1 + x1 * x2 - a * x2 * x2 - b * (x3 * x3 + x3 * x4 - a * x4 * x4)
    return x1 * x1 - a * x2 * x2 - b * x3 * x3 + a * b * x4 * x4


# ----------------------------------------------------------------------
# form conversions

def classicalize(q):
    """[a, b) as the classical (1+4a, b); requires characteristic != 2."""
    if q.field.characteristic == 2:
        raise ValueError("no classical form in characteristic 2")
    if q.form != ARTIN_SCHREIER:
        raise ValueError("classicalize expects an Artin-Schreier descriptor")
    return QuaternionDesc(CLASSICAL, 1 + 4 * q.a, q.b)


def classical_pair(q):
    """The classical parameters (A, B) of the algebra; characteristic != 2."""
    if q.form == CLASSICAL:
        return q.a, q.b
    return 1 + 4 * q.a, q.b


def artin_schreier_pair(q):
    """Artin-Schreier parameters (a, b) of the algebra, valid in any characteristic."""
    if q.form == ARTIN_SCHREIER:
        return q.a, q.b
    return (q.a - 1) / 4, q.b


# ----------------------------------------------------------------------
# local splitting

def _tame_symbol(A, B, place):
    """Hilbert symbol at a place of odd residue size, via residue characters."""
    rf = ResidueField(place)
    alpha = valuation(A, place)
    beta = valuation(B, place)
    u = reduce_at(unit_part(A, place), place).value
    w = reduce_at(unit_part(B, place), place).value
    r = rf.one()
    if alpha % 2 and beta % 2:
        r = rf.neg(r)
    if beta % 2:
        r = rf.mul(r, u)
    if alpha % 2:
        r = rf.mul(r, w)
    return 1 if rf.is_square(r) else -1


def _dyadic_symbol(A, B):
    """Hilbert symbol (A, B)_2 over Q, by the classical formula with u mod 8 data."""
    field = A.field
    v2 = Place(field, 2)

    def parts(x):
        k = valuation(x, v2)
        u = unit_part(x, v2)
        m8 = u.num * pow(u.den, -1, 8) % 8
        eps = 1 if m8 % 4 == 3 else 0
        om = 1 if m8 in (3, 5) else 0
        return k, eps, om

    ka, ea, oa = parts(A)
    kb, eb, ob = parts(B)
    e = ea * eb + ka * ob + kb * oa
    return -1 if e % 2 else 1


def _char2_splits(a, b, place, escalate=True):
    a = artin_schreier_reduce(a, place)
    va = valuation(a, place)
    if va > 0:
        return True  # X^2 - X - a has a simple residue root; Hensel lifts it
    if va == 0:
        rf = ResidueField(place)
        if rf.artin_schreier_has_root(reduce_at(a, place).value):
            return True
        # unramified quadratic: split exactly when v(b) is even
        return valuation(b, place) % 2 == 0
    verdict = char2_ramified_splits(a, b, place)
    if verdict is None and escalate:
        return schmid_symbol(a, b, place) == 0
    if verdict is None:
        raise ArithmeticError("ramified decision exceeded budget")
    return verdict


@lru_cache(maxsize=65536)
def local_splits(q, place):
    """Whether the algebra splits over the completion at the place."""
    field = q.field
    if field != place.field:
        raise ValueError("descriptor and place live in different fields")
    if field.characteristic == 2:
        a, b = q.a, q.b
        return _char2_splits(a, b, place)
    A, B = classical_pair(q)
    if isinstance(field, Rationals) and place.gen == 2:
        return _dyadic_symbol(A, B) == 1
    return _tame_symbol(A, B, place) == 1


def _candidate_places(q):
    field = q.field
    cands = set()
    if field.characteristic == 2:
        a, b = q.a, q.b
        if not a.is_zero():
            cands.update(v for v, e in support(a).items() if e < 0)
        cands.update(v for v, e in support(b).items() if e % 2)
    else:
        A, B = classical_pair(q)
        for x in (A, B):
            cands.update(v for v, e in support(x).items() if e % 2)
        if isinstance(field, Rationals):
            cands.add(Place(field, 2))
    return cands


@lru_cache(maxsize=65536)
def ramification_set(q):
    """All places where the algebra remains a division algebra.

    Only candidate places can ramify: where v(a) < 0 or v(b) is odd in
    characteristic 2, where v(A) or v(B) is odd at odd residue
    characteristic, plus the dyadic place over Q.  At every other place
    the local necessary conditions force splitting, so only candidates
    are tested.
    """
    return frozenset(v for v in _candidate_places(q) if not local_splits(q, v))


def is_nonreal(q):
    """Split at every real embedding; automatic for function fields."""
    if isinstance(q.field, RationalFunctions):
        return True
    A, B = classical_pair(q)
    return A.sign() > 0 or B.sign() > 0


# ----------------------------------------------------------------------
# independent bounded oracle

def _oracle_conductor(field, place, va):
    if field.characteristic == 2:
        return 1 if va >= 0 else -va + 1
    if isinstance(field, Rationals) and place.gen == 2:
        return 3
    return 1


def local_split_oracle(q, place, precision, pair_budget=300000):
    """Brute-force validator: search b = x^2 + xy - a y^2 over digit strings.

    Candidates are exact field elements x = g^lo X, y = g^lo Y where X, Y
    run over all residue-digit strings of the given length (equivalently,
    over O_v/m_v^precision shifted by a valuation window).  A hit is
    certified split when the exact defect r = b - (x^2+xy-ay^2) satisfies
    the conductor bound v(r) >= v(b) + cond, or a Newton condition, or the
    form value vanishes (isotropy).  "nonsplit" is only reported when the
    sweep provably covers every possible witness truncation at conductor
    precision; otherwise the verdict is "inconclusive".
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    field = q.field
    a, b = artin_schreier_pair(q)
    if place.gen is None:
        # transport the degree place to (T) through the automorphism T -> 1/T
        qf = QuaternionDesc(ARTIN_SCHREIER, flip_T(a), flip_T(b))
        return local_split_oracle(qf, Place(field, Poly.x(field.p)), precision, pair_budget)
    if not isinstance(field, Rationals) and place.gen.deg == 1 and place.gen.coeffs[0] != 0:
        # the place T + g0 has root -g0; substituting T -> T - g0 moves it to the
        # place (T), where valuations are trailing-zero counts
        c = (-place.gen.coeffs[0]) % field.p

        def shift(x):
            return field.elem(x.num.compose_linear(c), x.den.compose_linear(c))

        qf = QuaternionDesc(ARTIN_SCHREIER, shift(a), shift(b))
        return local_split_oracle(qf, Place(field, Poly.x(field.p)), precision, pair_budget)

    va = valuation(a, place) if not a.is_zero() else None
    beta = valuation(b, place)
    cond = _oracle_conductor(field, place, va if va is not None else 0)
    target = beta + cond

    pole = 0
    if va is not None and va < 0:
        pole = -va
    if field.characteristic != 2:
        one4a = 1 + 4 * a
        if not one4a.is_zero():
            v14 = valuation(one4a, place)
            if v14 < 0:
                pole = max(pole, -v14)
    lo = beta // 2 - (pole + 1) // 2 - 1
    length = precision

    # completeness: the known-monogenic cases where any witness truncates into the window
    if field.characteristic == 2:
        complete_case = va is None or va >= 0 or (-va) % 2 == 1
    else:
        complete_case = True
    need_len = target - 2 * lo - min(0, va if va is not None else 0) + 1
    conclusive = complete_case and length >= need_len

    rational = isinstance(field, Rationals)
    n_strings = place.residue_size ** length
    if n_strings * n_strings > pair_budget:
        return "inconclusive"

    # cleared arithmetic: with x = g^lo X, y = g^lo Y and m0 = max(0, -2 lo),
    #   r * (bd ad g^m0) = bn ad g^m0 + bd g^(2lo+m0) (an Y^2 - ad (X^2 + X Y))
    g = place.gen
    an, ad = a.num, a.den
    bn, bd = b.num, b.den
    m0 = max(0, -2 * lo)
    if rational:
        strings = list(range(n_strings))
        gpm0 = g ** m0
        gp2 = g ** (2 * lo + m0)
        val_of = lambda n: valuation_int(n, g)
    else:
        p = field.p
        strings = [Poly.from_code(p, c) for c in range(n_strings)]
        gpm0 = g ** m0
        gp2 = g ** (2 * lo + m0)
        if g.deg == 1 and g.coeffs[0] == 0:
            val_of = lambda f: f.trailing_valuation()
        else:
            val_of = lambda f: poly_valuation(f, g)
    B0 = bn * ad * gpm0
    Q1 = bd * gp2 * ad
    Q2 = bd * gp2 * an
    vD = (val_of(bd) if not _is_one(bd) else 0) + (val_of(ad) if not _is_one(ad) else 0) + m0
    va_int = va if va is not None else None
    vad = val_of(ad) if not _is_one(ad) else 0

    xs_data = [(x, Q1 * x * x, _is_zero(x)) for x in strings]
    for y in strings:
        P1 = B0 + Q2 * y * y
        Q1y = Q1 * y
        y_zero = _is_zero(y)
        for x, Q1x2, x_zero in xs_data:
            if x_zero and y_zero:
                continue
            r_big = P1 - Q1x2 - Q1y * x
            if r_big == B0:
                return "split"  # the form vanishes: isotropic, hence universal
            if _is_zero(r_big):
                return "split"
            vr = val_of(r_big) - vD
            if vr >= target:
                return "split"
            d1 = 2 * x + y
            if not _is_zero(d1) and vr > 2 * (lo + val_of(d1)):
                return "split"
            if va_int is not None:
                d2 = 2 * an * y - ad * x
                if not _is_zero(d2) and va_int + vr > 2 * (lo + val_of(d2) - vad):
                    return "split"
    return "nonsplit" if conclusive else "inconclusive"


def _is_one(v):
    return v == 1 if isinstance(v, int) else v.is_one()


def _is_zero(v):
    return v == 0 if isinstance(v, int) else v.is_zero()
