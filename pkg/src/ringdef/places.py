"""Places of Q and F_p(T): valuations, supports, residue fields, weak approximation.

A place is a surjective Z-valuation of the ambient field: a prime number
over Q, a monic irreducible polynomial over F_p(T), or the degree
valuation v(f/g) = deg g - deg f.  The degree place exists only in the
function-field family; there is no archimedean place object (reality
over Q enters elsewhere as a sign computation).
"""

import itertools
import math
from dataclasses import dataclass

from .fields import FieldElement, Rationals, RationalFunctions
from .fppoly import Poly, factor_poly, is_irreducible, monic_irreducibles, parse_poly, poly_crt, poly_valuation
from .primes import crt, factorint, is_prime, legendre, primes_stream, valuation_int

INF = math.inf


@dataclass(frozen=True)
class Place:
    field: object
    gen: object = None  # prime int, monic irreducible Poly, or None for the degree place

    def __post_init__(self):
        if isinstance(self.field, Rationals):
            if not isinstance(self.gen, int) or not is_prime(self.gen):
                raise ValueError(f"bad rational place generator {self.gen!r}")
        elif isinstance(self.field, RationalFunctions):
            if self.gen is not None:
                if not isinstance(self.gen, Poly) or not self.gen.is_monic() or not is_irreducible(self.gen):
                    raise ValueError(f"bad function-field place generator {self.gen!r}")
        else:
            raise ValueError("unsupported field")

    @property
    def kind(self):
        return "finite" if self.gen is not None else "infinite-degree"

    @property
    def degree(self):
        """Degree of the residue field over the prime/constant field."""
        if isinstance(self.field, Rationals):
            return 1
        return self.gen.deg if self.gen is not None else 1

    @property
    def residue_size(self):
        if isinstance(self.field, Rationals):
            return self.gen
        return self.field.p ** self.degree

    def sort_key(self):
        if isinstance(self.field, Rationals):
            return (self.gen, 0, 0)
        if self.gen is None:
            return (1, 1, 0)
        return (self.gen.deg, 0, self.gen.code())

    def __str__(self):
        if isinstance(self.field, Rationals):
            return f"q:{self.gen}"
        return "inf" if self.gen is None else f"f:{self.gen}"

    def __repr__(self):
        return f"Place({self})"


def place_from_str(field, text):
    text = text.strip()
    if text == "inf":
        if not isinstance(field, RationalFunctions):
            raise ValueError("the degree place exists only over F_p(T)")
        return Place(field, None)
    if text.startswith("q:"):
        return Place(field, int(text[2:]))
    if text.startswith("f:"):
        return Place(field, parse_poly(field.p, text[2:]))
    raise ValueError(f"bad place literal {text!r}")


def places_stream(field):
    """All places in canonical order: by (degree, code), degree place after the linear ones."""
    if isinstance(field, Rationals):
        for p in primes_stream():
            yield Place(field, p)
        return
    emitted_inf = False
    for f in monic_irreducibles(field.p):
        if not emitted_inf and f.deg > 1:
            yield Place(field, None)
            emitted_inf = True
        yield Place(field, f)


def first_places(field, n, exclude=()):
    excl = set(exclude)
    out = []
    for v in places_stream(field):
        if v not in excl:
            out.append(v)
            if len(out) == n:
                break
    return out


def valuation(x, place):
    """The normalized valuation v(x), with v(0) = +infinity."""
    if x.field != place.field:
        raise ValueError("element and place live in different fields")
    if x.is_zero():
        return INF
    if isinstance(x.field, Rationals):
        return valuation_int(x.num, place.gen) - valuation_int(x.den, place.gen)
    if place.gen is None:
        return x.den.deg - x.num.deg
    return poly_valuation(x.num, place.gen) - poly_valuation(x.den, place.gen)


def support(x):
    """The finitely many places where v(x) != 0 (x nonzero)."""
    if x.is_zero():
        raise ValueError("support of 0")
    field = x.field
    out = {}
    if isinstance(field, Rationals):
        for p, e in factorint(abs(x.num)) if abs(x.num) != 1 else ():
            out[Place(field, p)] = e
        for p, e in factorint(x.den) if x.den != 1 else ():
            out[Place(field, p)] = out.get(Place(field, p), 0) - e
    else:
        for f, e in factor_poly(x.num) if x.num.deg > 0 else ():
            out[Place(field, f)] = e
        for f, e in factor_poly(x.den) if x.den.deg > 0 else ():
            out[Place(field, f)] = out.get(Place(field, f), 0) - e
        dv = x.den.deg - x.num.deg
        if dv:
            out[Place(field, None)] = dv
    return {v: e for v, e in out.items() if e}


def uniformizer(place):
    """Canonical uniformizer: the generator itself, or 1/T at the degree place."""
    field = place.field
    if isinstance(field, Rationals):
        return field.elem(place.gen)
    if place.gen is None:
        return field.one / field.T
    return field.elem(place.gen)


# ----------------------------------------------------------------------
# residue fields

@dataclass(frozen=True)
class ResidueElement:
    place: Place
    value: object  # int in [0, p) or Poly of degree < deg(gen)

    def _rf(self):
        return ResidueField(self.place)

    def __add__(self, other):
        assert self.place == other.place
        return ResidueElement(self.place, self._rf().add(self.value, other.value))

    def __sub__(self, other):
        assert self.place == other.place
        return ResidueElement(self.place, self._rf().sub(self.value, other.value))

    def __mul__(self, other):
        assert self.place == other.place
        return ResidueElement(self.place, self._rf().mul(self.value, other.value))

    def __str__(self):
        return str(self.value)


class ResidueField:
    """Arithmetic in O_v/m_v, which is F_p, F_p[T]/(f), or (degree place) F_p."""

    _cache = {}

    def __new__(cls, place):
        inst = cls._cache.get(place)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(place)
            cls._cache[place] = inst
        return inst

    def _init(self, place):
        self.place = place
        field = place.field
        if isinstance(field, Rationals):
            self.mode = "int"
            self.p = place.gen
            self.size = place.gen
        elif place.gen is None:
            self.mode = "int"
            self.p = field.p
            self.size = field.p
        else:
            self.mode = "poly"
            self.p = field.p
            self.modulus = place.gen
            self.size = field.p ** place.gen.deg

    # -- raw value arithmetic -----------------------------------------
    def zero(self):
        return 0 if self.mode == "int" else Poly.zero(self.p)

    def one(self):
        return 1 if self.mode == "int" else Poly.one(self.p)

    def elements(self):
        if self.mode == "int":
            yield from range(self.size)
        else:
            for code in range(self.size):
                yield Poly.from_code(self.p, code)

    def add(self, a, b):
        return (a + b) % self.size if self.mode == "int" else (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.size if self.mode == "int" else (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.size if self.mode == "int" else (a * b) % self.modulus

    def neg(self, a):
        return (-a) % self.size if self.mode == "int" else (-a) % self.modulus

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("residue inverse of 0")
        return pow(a, -1, self.size) if self.mode == "int" else a.invmod(self.modulus)

    def pow_(self, a, e):
        if self.mode == "int":
            return pow(a, e, self.size)
        return a.powmod(e, self.modulus)

    def is_zero(self, a):
        return a == 0 if self.mode == "int" else (a % self.modulus).is_zero()

    def from_int(self, n):
        return n % self.size if self.mode == "int" else Poly.const(self.p, n)

    def lift(self, a):
        """A canonical global element reducing to a."""
        field = self.place.field
        if isinstance(field, Rationals):
            return field.elem(a)
        if self.place.gen is None:
            return field.elem(a)
        return field.elem(a)

    # -- quadratic structure -------------------------------------------
    def is_square(self, a):
        if self.p == 2:
            return True
        if self.is_zero(a):
            return True
        e = self.pow_(a, (self.size - 1) // 2)
        return e == self.one()

    def sqrt_char2(self, a):
        """The unique square root (characteristic 2 only)."""
        assert self.p == 2
        if self.size == 2:
            return a
        return self.pow_(a, self.size // 2)

    def absolute_trace(self, a):
        """Trace down to the prime field F_p, returned as an int."""
        if self.mode == "int":
            return a % self.p
        t = self.zero()
        b = a
        for _ in range(self.modulus.deg):
            t = self.add(t, b)
            b = self.pow_(b, self.p)
        # the trace lands in F_p, i.e. is a constant polynomial
        assert t.deg <= 0
        return t.coeffs[0] if t.coeffs else 0

    def artin_schreier_has_root(self, c):
        """Whether X^2 - X - c has a root in the residue field."""
        if self.p == 2:
            return self.absolute_trace(c) == 0
        disc = self.add(self.one(), self.mul(self.from_int(4), c))
        return self.is_square(disc)


def reduce_at(x, place):
    """Image of x in the residue field at the place; requires v(x) >= 0."""
    v = valuation(x, place)
    if v < 0:
        raise ValueError(f"not integral at place {place}")
    rf = ResidueField(place)
    field = place.field
    if isinstance(field, Rationals):
        val = x.num * pow(x.den, -1, place.gen) % place.gen
        return ResidueElement(place, val)
    if place.gen is None:
        if v > 0:
            return ResidueElement(place, 0)
        val = x.num.lc() * pow(x.den.lc(), -1, field.p) % field.p
        return ResidueElement(place, val)
    f = place.gen
    num = x.num % f
    den_inv = x.den.invmod(f)
    return ResidueElement(place, num * den_inv % f)


def artin_schreier_irreducible_at(place, x):
    """Whether X^2 - X - x is irreducible over the residue field (x integral at the place)."""
    return not ResidueField(place).artin_schreier_has_root(reduce_at(x, place).value)


# ----------------------------------------------------------------------
# weak approximation

def weak_approximate(field, targets):
    """Find x with v_i(x - a_i) > gamma_i for the given (place, a_i, gamma_i) targets.

    Places must be pairwise distinct.  Tie-break: with finite places only,
    the element returned is y/m where m clears denominators at the target
    places and y is the least nonnegative (least-degree) CRT representative;
    when the degree place occurs, a smallest-height enumeration is tried
    first and a telescoping 1/(1+z^m) combination is the fallback.
    """
    targets = [(v, a, int(g)) for (v, a, g) in targets]
    places = [t[0] for t in targets]
    if len(set(places)) != len(places):
        raise ValueError("duplicate places in weak approximation targets")
    if not targets:
        return field.zero
    if len(targets) == 1:
        return targets[0][1]
    if all(v.gen is not None for v in places):
        x = _crt_approximation(field, targets)
    else:
        x = _search_approximation(field, targets) or _chi_approximation(field, targets)
    for v, a, g in targets:
        assert valuation(x - a, v) > g, f"weak approximation failed at {v}"
    return x


def _crt_approximation(field, targets):
    rational = isinstance(field, Rationals)
    ds = []
    for v, a, g in targets:
        va = valuation(a, v)
        ds.append(0 if va is INF else max(0, -va))
    m = field.one
    for (v, a, g), d in zip(targets, ds):
        m = m * field.elem(v.gen) ** d
    residues, moduli = [], []
    for (v, a, g), d in zip(targets, ds):
        k = g + 1 + d
        if k <= 0:
            continue
        b = a * m
        mod = v.gen ** k
        if rational:
            r = b.num * pow(b.den, -1, mod) % mod
        else:
            r = b.num * b.den.invmod(mod) % mod
        residues.append(r)
        moduli.append(mod)
    if not residues:
        return field.zero
    y = crt(residues, moduli) if rational else poly_crt(residues, moduli)
    return field.elem(y) / m


def _search_approximation(field, targets, cap=6):
    if isinstance(field, Rationals):
        cap = 30
    best = None
    for x in field.enumerate_by_height(cap):
        if all(valuation(x - a, v) > g for v, a, g in targets):
            return x
    return best


def _chi_approximation(field, targets):
    places = [t[0] for t in targets]
    elems = [t[1] for t in targets]
    zs = []
    for i, v in enumerate(places):
        others = [w for j, w in enumerate(places) if j != i]
        finite_others = [w for w in others if w.gen is not None]
        denom = field.one
        for w in finite_others:
            denom = denom * field.elem(w.gen)
        if v.gen is None:
            z = field.one / denom
        else:
            exp = 1
            if any(w.gen is None for w in others):
                total = sum(w.gen.deg for w in finite_others)
                exp = total // v.gen.deg + 1
            z = field.elem(v.gen) ** exp / denom
        zs.append(z)
    m = 1
    for v, a, g in targets:
        worst = 0
        for aj in elems:
            if not aj.is_zero():
                worst = min(worst, valuation(aj, v))
        m = max(m, g - worst + 1)
    x = field.zero
    for z, (v, a, g) in zip(zs, targets):
        zm = z ** m
        if (field.one + zm).is_zero():
            zm = z ** (m + 1)
        x = x + a / (field.one + zm)
    return x


def element_with_valuations(field, want, avoid=()):
    """An element with exactly the prescribed valuations at the given places.

    `want` maps places to integers; at every other place the result may do
    anything except that an auxiliary place outside `want` and `avoid` may
    be used to balance the degree place over F_p(T).
    """
    if not want:
        return field.one
    if isinstance(field, Rationals):
        x = field.one
        for v, e in want.items():
            x = x * field.elem(v.gen) ** e
        return x
    inf_place = Place(field, None)
    x = field.one
    for v, e in want.items():
        if v.gen is not None:
            x = x * field.elem(v.gen) ** e
    if inf_place in want:
        # v_inf(x / aux_gen^k) = v_inf(x) + k * deg(aux); balance with one auxiliary place
        need = want[inf_place] - valuation(x, inf_place)
        if need:
            excluded = set(want) | set(avoid)
            for aux in places_stream(field):
                if aux.gen is None or aux in excluded:
                    continue
                if need % aux.gen.deg == 0:
                    x = x / field.elem(aux.gen) ** (need // aux.gen.deg)
                    break
            else:
                raise ArithmeticError("no auxiliary place found")
    for v, e in want.items():
        assert valuation(x, v) == e
    return x


def uniformizing_element(field, places):
    """An element with valuation exactly 1 at every listed place."""
    return element_with_valuations(field, {v: 1 for v in places})


def odd_and_neg(c):
    """The finite sets Odd(c) = {v : v(c) odd} and Neg(c) = {v : v(c) < 0}."""
    if c.is_zero():
        raise ValueError("Odd/Neg of 0")
    supp = support(c)
    odd = frozenset(v for v, e in supp.items() if e % 2)
    neg = frozenset(v for v, e in supp.items() if e < 0)
    return odd, neg
