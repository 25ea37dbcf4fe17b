"""The two supported global fields: Q and F_p(T), with exact elements.

A FieldElement is a reduced fraction num/den where num, den are integers
(family "rationals") or Poly over F_p (family "rational-functions"), with
den positive respectively monic.  Equality of canonical forms is object
equality and is used everywhere.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .fppoly import Poly, parse_poly
from .primes import is_prime


class Field:
    """Base class; instances describe the ambient global field."""

    family = None
    characteristic = None

    def elem(self, num, den=None):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class Rationals(Field):
    family = "rationals"
    characteristic = 0
    name = "Q"

    def elem(self, num, den=1):
        return FieldElement._make(self, int(num), int(den))

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    def from_fraction(self, fr):
        return self.elem(fr.numerator, fr.denominator)

    def parse_element(self, text):
        text = text.strip()
        try:
            fr = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {text!r}") from exc
        return self.from_fraction(fr)

    def format_element(self, x):
        return str(x.num) if x.den == 1 else f"{x.num}/{x.den}"

    def height(self, x):
        return max(abs(x.num), x.den)

    def elements_of_height(self, h):
        """All x with max(|num|, den) == h, in deterministic order."""
        if h == 1:
            yield self.elem(0)
        for den in range(1, h + 1):
            for mag in range(0, h + 1):
                if max(mag, den) != h or mag == 0:
                    continue
                if math.gcd(mag, den) != 1:
                    continue
                yield self.elem(mag, den)
                yield self.elem(-mag, den)

    def enumerate_by_height(self, limit):
        """All x with height <= limit, each exactly once, height-ascending."""
        if limit < 1:
            return
        for h in range(1, limit + 1):
            yield from self.elements_of_height(h)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class RationalFunctions(Field):
    """F_p(T) for a prime p."""

    family = "rational-functions"

    def __init__(self, p):
        if not is_prime(p):
            raise ValueError(f"coefficient field size {p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}(T)"

    def elem(self, num, den=None):
        if isinstance(num, int):
            num = Poly.const(self.p, num)
        if den is None:
            den = Poly.one(self.p)
        elif isinstance(den, int):
            den = Poly.const(self.p, den)
        return FieldElement._make(self, num, den)

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    @property
    def T(self):
        return self.elem(Poly.x(self.p))

    def parse_element(self, text):
        text = text.strip()
        if "/" in text:
            num_s, _, den_s = text.partition("/")
        else:
            num_s, den_s = text, "1"
        num_s = num_s.strip()
        den_s = den_s.strip()
        if num_s.startswith("(") and num_s.endswith(")"):
            num_s = num_s[1:-1]
        if den_s.startswith("(") and den_s.endswith(")"):
            den_s = den_s[1:-1]
        return self.elem(parse_poly(self.p, num_s), parse_poly(self.p, den_s))

    def format_element(self, x):
        def wrap(s):
            return f"({s})" if ("+" in s or "-" in s) else s

        num = str(x.num)
        if x.den.is_one():
            return num
        return f"{wrap(num)}/{wrap(str(x.den))}"

    def height(self, x):
        return max(x.num.deg, x.den.deg, 0)

    def elements_of_height(self, h):
        p = self.p
        if h == 0:
            for c in range(p):
                yield self.elem(c)
            return
        # denominators: monic of degree <= h; numerators: any of degree <= h
        for dcode in _monic_codes(p, h):
            den = Poly.from_code(p, dcode)
            for ncode in range(p ** (h + 1)):
                num = Poly.from_code(p, ncode)
                if max(num.deg, den.deg, 0) != h:
                    continue
                if num.is_zero():
                    continue
                if not num.gcd(den).is_one():
                    continue
                yield self.elem(num, den)

    def enumerate_by_height(self, limit):
        if limit < 0:
            return
        for h in range(0, limit + 1):
            yield from self.elements_of_height(h)

    def __eq__(self, other):
        return isinstance(other, RationalFunctions) and self.p == other.p

    def __hash__(self):
        return hash(("FpT", self.p))


def _monic_codes(p, h):
    """Codes of monic polynomials of degree <= h, degree-ascending."""
    for d in range(0, h + 1):
        yield from range(p ** d, 2 * p ** d)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    num: object
    den: object

    @staticmethod
    def _make(field, num, den):
        if field.family == "rationals":
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if num == 0:
                return FieldElement(field, 0, 1)
            if den == 1:
                return FieldElement(field, num, 1)
            g = math.gcd(num, den)
            num, den = num // g, den // g
            if den < 0:
                num, den = -num, -den
            return FieldElement(field, num, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return FieldElement(field, Poly.zero(field.p), Poly.one(field.p))
        if den.is_one():
            return FieldElement(field, num, den)
        g = num.gcd(den)
        if g.deg > 0:
            num, den = num // g, den // g
        lc_inv = pow(den.lc(), -1, field.p)
        num, den = num * lc_inv, den * lc_inv
        return FieldElement(field, num, den)

    # -- predicates ----------------------------------------------------
    def is_zero(self):
        return self.num == 0 if self.field.family == "rationals" else self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other
        if isinstance(other, int):
            return self.field.elem(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._make(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._make(self.field, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._make(self.field, self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._make(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero field element")
        return FieldElement._make(self.field, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def inverse(self):
        return self.field.one / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.field.one
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    # -- misc ------------------------------------------------------------
    def height(self):
        return self.field.height(self)

    def sign(self):
        """Sign under the unique real embedding (rationals only)."""
        if self.field.family != "rationals":
            raise ValueError("sign only makes sense over the rationals")
        return (self.num > 0) - (self.num < 0)

    def as_fraction(self):
        if self.field.family != "rationals":
            raise ValueError("not a rational")
        return Fraction(self.num, self.den)

    def __str__(self):
        return self.field.format_element(self)

    def __repr__(self):
        return f"<{self} in {self.field.name}>"


def flip_T(x):
    """The automorphism T -> 1/T of F_p(T); swaps the places (T) and infinity."""
    field = x.field
    if field.family != "rational-functions":
        raise ValueError("flip_T only applies to rational function fields")
    if x.is_zero():
        return x
    n, d = x.num, x.den
    rn = Poly(field.p, tuple(reversed(n.coeffs)))
    rd = Poly(field.p, tuple(reversed(d.coeffs)))
    k = d.deg - n.deg
    e = field.elem(rn, rd)
    t = field.T
    return e * t ** k if k >= 0 else e / t ** (-k)


QQ = Rationals()


def field_from_str(text):
    text = text.strip()
    if text in ("Q", "QQ", "rationals"):
        return QQ
    if text.startswith("F"):
        body = text[1:]
        if body.endswith("(T)"):
            body = body[:-3]
        if body.isdigit():
            return RationalFunctions(int(body))
    raise ValueError(f"unknown field {text!r} (expected 'Q' or 'F<p>')")
