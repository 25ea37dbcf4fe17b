"""Exact local analysis at a place, built on global field arithmetic.

Truncated local elements are represented as genuine field elements
(finite sums of digit lifts times uniformizer powers), so every
computation below is exact; only the search spaces are bounded.

The characteristic-2 machinery: Artin-Schreier pole reduction, a
certified norm-equation decision for wildly ramified quadratic
extensions (complete up to the conductor, with per-candidate linear
algebra over F_2), and an exact differential-residue symbol used as an
escalation when the residue field is too large to sweep.
"""

import itertools

from .fields import Rationals, RationalFunctions
from .fppoly import Poly
from .places import Place, ResidueField, reduce_at, uniformizer, valuation


def unit_part(x, place):
    """x divided by the canonical uniformizer power, so the result has valuation 0."""
    if x.is_zero():
        raise ValueError("unit part of 0")
    return x / uniformizer(place) ** valuation(x, place)


def fdigits(x, place, lo, hi):
    """Digits of x at exponents lo..hi-1 w.r.t. canonical residue lifts.

    Requires v(x) >= lo.  Over F_p(T) canonical lifts add without carries,
    which makes this map F_p-linear; over Q it is used only for candidate
    generation, never for linear algebra.
    """
    assert x.is_zero() or valuation(x, place) >= lo
    rf = ResidueField(place)
    pi = uniformizer(place)
    cur = x
    out = []
    for i in range(lo, hi):
        if cur.is_zero():
            out.append(rf.zero())
            continue
        r = reduce_at(cur / pi ** i, place)
        out.append(r.value)
        cur = cur - rf.lift(r.value) * pi ** i
    return out


def element_from_digits(place, lo, values):
    rf = ResidueField(place)
    pi = uniformizer(place)
    field = place.field
    x = field.zero
    for i, val in enumerate(values):
        x = x + rf.lift(val) * pi ** (lo + i)
    return x


def digit_strings(place, lo, length, leading_nonzero=False):
    """All elements sum(lift(c_i) pi^(lo+i)), i < length, in deterministic order."""
    rf = ResidueField(place)
    residues = list(rf.elements())
    lead = [r for r in residues if not rf.is_zero(r)] if leading_nonzero else residues
    for first in lead:
        for rest in itertools.product(residues, repeat=length - 1):
            yield element_from_digits(place, lo, (first,) + rest)


def residue_bits(rf, value):
    """Coordinates of a residue value over the prime field (characteristic 2 usage)."""
    if rf.mode == "int":
        return [value % rf.p]
    return [value[i] for i in range(rf.modulus.deg)]


def solve_gf2(columns, rhs, nrows):
    """Solve sum x_j columns[j] = rhs over F_2 (columns and rhs are bitmask ints).

    Returns a list of selected column indices, or None if inconsistent.
    """
    cols = list(columns)
    combos = [1 << j for j in range(len(cols))]
    acc_rhs = rhs
    acc_combo = 0
    pivots = []  # (pivot_bit, col_value, combo)
    for j in range(len(cols)):
        val, combo = cols[j], combos[j]
        for pb, pv, pc in pivots:
            if val & pb:
                val ^= pv
                combo ^= pc
        if val:
            pivots.append((val & -val, val, combo))
    for pb, pv, pc in pivots:
        if acc_rhs & pb:
            acc_rhs ^= pv
            acc_combo ^= pc
    if acc_rhs:
        return None
    return [j for j in range(len(cols)) if acc_combo >> j & 1]


# ----------------------------------------------------------------------
# Artin-Schreier reduction (characteristic 2)

def artin_schreier_reduce(a, place):
    """Replace a by a + (c^2 - c) until its pole order at the place is odd or <= 0.

    Subtracting c^2 - c is an isomorphism of [a, b) descriptors in
    characteristic 2; c is chosen as sqrt(leading residue) / pi^(m/2)
    while the pole order m is even.
    """
    rf = ResidueField(place)
    pi = uniformizer(place)
    while True:
        if a.is_zero():
            return a
        m = -valuation(a, place)
        if m <= 0 or m % 2 == 1:
            return a
        lead = reduce_at(a * pi ** m, place).value
        c = rf.lift(rf.sqrt_char2(lead)) / pi ** (m // 2)
        a = a - (c * c - c)


# ----------------------------------------------------------------------
# certified ramified norm-equation decision (characteristic 2)

def char2_ramified_splits(a, b, place, y_budget=8192):
    """Decide whether b = x^2 + xy - a y^2 is solvable over the completion.

    Preconditions: characteristic 2, v(a) = -m with m odd > 0 (already
    pole-reduced), b nonzero.  The quadratic extension generated by a root
    of X^2 - X - a is ramified with conductor m + 1; searching y-digit
    strings up to that precision and solving the F_2-linear equation
    x^2 + xy = b + a y^2 in the x-digits is complete.  A found candidate
    is certified by the Newton condition v(r) > 2 v(y).  Returns True,
    False, or None when the residue field makes the sweep too large.
    """
    field = a.field
    rf = ResidueField(place)
    q = rf.size
    pi = uniformizer(place)
    m = -valuation(a, place)
    assert m > 0 and m % 2 == 1

    beta = valuation(b, place)
    shift = beta // 2 if beta % 2 == 0 else (beta - 1) // 2
    b1 = b / pi ** (2 * shift)
    beta1 = beta - 2 * shift  # 0 or 1
    P = beta1 + m + 2
    lx = 0 if beta1 == 0 else 1
    ly = (m + 1) // 2
    Dx = P - 1 - min(lx, ly)
    Dy = max(P - 1 + m - ly, P - 1 - lx)

    n_y = (q - 1) * q ** (Dy - ly)
    if n_y > y_budget:
        return None

    # x-digit basis and the F_2-linear part x -> x^2 (independent of y)
    basis = []
    if rf.mode == "int":
        residue_basis = [1]
    else:
        residue_basis = [Poly.from_code(field.p, 1 << k) for k in range(place.degree)]
    for i in range(lx, Dx + 1):
        for rb in residue_basis:
            basis.append(rf.lift(rb) * pi ** i)
    sq = [e * e for e in basis]

    def bits_of(x):
        ds = fdigits(x, place, 0, P)
        mask = 0
        pos = 0
        for d in ds:
            for bit in residue_bits(rf, d):
                if bit:
                    mask |= 1 << pos
                pos += 1
        return mask

    nrows = P * (1 if rf.mode == "int" else place.degree)
    for y in digit_strings(place, ly, Dy - ly + 1, leading_nonzero=True):
        t = b1 + a * y * y  # characteristic 2: want x^2 + x y = t
        if (not t.is_zero()) and valuation(t, place) < 0:
            continue
        cols = [bits_of(sq[j] + basis[j] * y) for j in range(len(basis))]
        sol = solve_gf2(cols, bits_of(t), nrows)
        if sol is None:
            continue
        x = field.zero
        for j in sol:
            x = x + basis[j]
        r = b1 - (x * x + x * y - a * y * y)
        if r.is_zero() or valuation(r, place) > 2 * valuation(y, place):
            return True
    return False


# ----------------------------------------------------------------------
# differential residue symbol (characteristic 2 escalation)

def _teichmuller_lift(rf, value, modulus_power):
    """The Teichmuller representative of a residue value mod gen^N."""
    z = value
    q = rf.size
    # iterate Frobenius-power until stable mod gen^N
    for _ in range(2 * modulus_power.deg + 4):
        z2 = z.powmod(q, modulus_power)
        if z2 == z:
            break
        z = z2
    return z


def schmid_symbol(a, b, place):
    """The class of [a, b) over the completion at the place, as 0 (split) or 1.

    Computed as the absolute trace of the local residue of the
    differential a db/b; exact, valid for any a and nonzero b over
    F_2(T)-type fields.
    """
    field = a.field
    assert isinstance(field, RationalFunctions) and field.p == 2
    if a.is_zero():
        return 0
    n, d = b.num, b.den
    dn, dd = n.derivative(), d.derivative()
    # a * db/b = a * (n'/n - d'/d)
    h = a * (field.elem(dn, n) - field.elem(dd, d))
    if h.is_zero():
        return 0
    rf = ResidueField(place)
    if place.gen is None:
        # w = 1/T, dT = w^-2 dw: residue = digit of h at w-exponent 1
        lo = valuation(h, place)
        if lo > 1:
            return 0
        ds = fdigits(h, place, lo, 2)
        return ds[1 - lo] % 2
    f = place.gen
    fprime = f.derivative()
    g = h / field.elem(fprime)
    lo = valuation(g, place)
    if lo >= 0:
        return 0
    # Teichmuller-coefficient expansion up to the residue coefficient
    N = -lo + 2
    modN = f ** N
    pi = uniformizer(place)
    cur = g
    gamma = None
    for i in range(lo, 0):
        r = reduce_at(cur / pi ** i, place).value
        if i == -1:
            gamma = r
            break
        z = _teichmuller_lift(rf, r, modN)
        cur = cur - field.elem(z) * pi ** i
    return rf.absolute_trace(gamma) % 2
