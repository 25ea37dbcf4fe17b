"""Dense univariate polynomial arithmetic over a prime field F_p.

Polynomials are immutable: a prime p plus a tuple of coefficients in
increasing degree order with no trailing zeros.  The zero polynomial has
an empty coefficient tuple and degree -1.  This module also provides
irreducibility testing, Cantor-Zassenhaus factorization and a stream of
monic irreducibles in canonical order, which back the function-field
places elsewhere.
"""

from functools import lru_cache


class Poly:
    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, p, coeffs):
        self.p = p
        cs = [c % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    # -- constructors ------------------------------------------------
    @staticmethod
    def const(p, c):
        return Poly(p, (c,))

    @staticmethod
    def zero(p):
        return Poly(p, ())

    @staticmethod
    def one(p):
        return Poly(p, (1,))

    @staticmethod
    def x(p):
        return Poly(p, (0, 1))

    @staticmethod
    def from_code(p, code):
        """Decode a nonnegative integer as base-p digits, low degree first."""
        cs = []
        while code:
            cs.append(code % p)
            code //= p
        return Poly(p, cs)

    def code(self):
        """Inverse of from_code; total order on polynomials of a given degree."""
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.p + c
        return n

    # -- structure ---------------------------------------------------
    @property
    def deg(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lc(self):
        if not self.coeffs:
            raise ValueError("leading coefficient of 0")
        return self.coeffs[-1]

    def monic(self):
        if self.is_zero():
            return self
        inv = pow(self.lc(), -1, self.p)
        return Poly(self.p, tuple(c * inv % self.p for c in self.coeffs))

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.p, tuple(self[i] + other[i] for i in range(n)))

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.p, tuple(self[i] - other[i] for i in range(n)))

    def __neg__(self):
        return Poly(self.p, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.p, tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = Poly.one(self.p)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("poly division by zero")
        p = self.p
        rem = list(self.coeffs)
        q = [0] * max(0, len(rem) - len(other.coeffs) + 1)
        dlc = pow(other.lc(), -1, p)
        dn = other.deg
        for i in range(len(rem) - 1 - dn, -1, -1):
            c = rem[i + dn] * dlc % p
            if c:
                q[i] = c
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = (rem[i + j] - c * b) % p
        return Poly(p, q), Poly(p, rem[:dn] if dn > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self):
        return Poly(self.p, tuple((i + 1) * self.coeffs[i + 1] for i in range(len(self.coeffs) - 1)))

    def compose_linear(self, c):
        """The polynomial f(T + c)."""
        shift = Poly(self.p, (c, 1))
        out = Poly.zero(self.p)
        for coeff in reversed(self.coeffs):
            out = out * shift + Poly.const(self.p, coeff)
        return out

    def trailing_valuation(self):
        """Multiplicity of the factor T (the polynomial must be nonzero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("trailing valuation of 0")

    def eval(self, v):
        r = 0
        for c in reversed(self.coeffs):
            r = (r * v + c) % self.p
        return r

    def powmod(self, e, mod):
        r = Poly.one(self.p)
        b = self % mod
        while e:
            if e & 1:
                r = r * b % mod
            b = b * b % mod
            e >>= 1
        return r

    def invmod(self, mod):
        """Inverse modulo mod (requires gcd(self, mod) = 1; mod need not be irreducible)."""
        p = self.p
        r0, r1 = mod, self % mod
        s0, s1 = Poly.zero(p), Poly.one(p)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.deg != 0:
            raise ZeroDivisionError("not invertible modulo the given modulus")
        inv = pow(r0.coeffs[0], -1, p)
        return s0 * inv % mod

    # -- comparison / formatting ---------------------------------------
    def __eq__(self, other):
        return isinstance(other, Poly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.coeffs))
        return self._hash

    def sort_key(self):
        return (self.deg, self.code())

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.deg, -1, -1):
            c = self[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("T" if c == 1 else f"{c}*T")
            else:
                parts.append(f"T^{i}" if c == 1 else f"{c}*T^{i}")
        return "+".join(parts)

    def __repr__(self):
        return f"Poly({self.p}, {self!s})"


def parse_poly(p, text):
    """Parse the textual polynomial format, e.g. 'T^3+2*T+1'."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    out = Poly.zero(p)
    # normalize leading sign and split into signed terms
    terms = []
    cur = ""
    for ch in text:
        if ch in "+-" and cur and cur[-1] != "^":
            terms.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    terms.append(cur)
    for term in terms:
        if not term or term in ("+", "-"):
            raise ValueError(f"bad polynomial term in {text!r}")
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        coeff, exp = 1, 0
        if "T" in term:
            head, _, tail = term.partition("T")
            if head:
                if head.endswith("*"):
                    head = head[:-1]
                if not head.isdigit():
                    raise ValueError(f"bad coefficient in {text!r}")
                coeff = int(head)
            exp = 1
            if tail:
                if not tail.startswith("^") or not tail[1:].isdigit():
                    raise ValueError(f"bad exponent in {text!r}")
                exp = int(tail[1:])
        else:
            if not term.isdigit():
                raise ValueError(f"bad term {term!r} in {text!r}")
            coeff = int(term)
        if neg:
            coeff = -coeff
        out = out + Poly(p, tuple([0] * exp + [coeff]))
    return out


def is_irreducible(f):
    """Rabin irreducibility test for a monic polynomial over F_p."""
    p, n = f.p, f.deg
    if n <= 0:
        return False
    if n == 1:
        return True
    x = Poly.x(p)
    # x^(p^n) = x mod f, and gcd(x^(p^(n/q)) - x, f) = 1 for prime divisors q of n
    t = x
    powers = {}
    for i in range(1, n + 1):
        t = t.powmod(p, f)
        powers[i] = t
    if powers[n] != x % f:
        return False
    for q, _ in factor_int_small(n):
        g = (powers[n // q] - x).gcd(f)
        if not g.is_one():
            return False
    return True


def factor_int_small(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def monic_irreducibles(p):
    """Yield all monic irreducibles over F_p ordered by (degree, code)."""
    deg = 1
    while True:
        for code in range(p ** deg, 2 * p ** deg):
            f = Poly.from_code(p, code)
            if is_irreducible(f):
                yield f
        deg += 1


def _equal_degree_split(f, d, rng_state):
    """Cantor-Zassenhaus splitting of a squarefree product of degree-d irreducibles."""
    p = f.p
    q = p ** d
    n = f.deg
    if n == d:
        return [f]
    state = rng_state
    while True:
        # deterministic pseudo-random candidate
        state = (state * 1103515245 + 12345) % (1 << 31)
        g = Poly.from_code(p, state % (p ** n) or 1)
        if g.deg <= 0:
            continue
        h = g.gcd(f)
        if 0 < h.deg < n:
            return _equal_degree_split(h, d, state) + _equal_degree_split(f // h, d, state)
        if p == 2:
            # trace map T(g) = g + g^2 + ... + g^(2^(d-1))
            t = Poly.zero(p)
            gg = g % f
            for _ in range(d):
                t = (t + gg) % f
                gg = gg.powmod(2, f)
        else:
            t = g.powmod((q - 1) // 2, f) - Poly.one(p)
        h = t.gcd(f)
        if 0 < h.deg < n:
            return _equal_degree_split(h, d, state) + _equal_degree_split(f // h, d, state)


@lru_cache(maxsize=65536)
def factor_poly(f):
    """Full factorization of a nonzero polynomial into monic irreducibles.

    Returns a tuple of (irreducible, exponent) pairs sorted by (degree, code);
    the leading coefficient is dropped (callers track units separately).
    Irreducible factors are located by squarefree/distinct-degree/equal-degree
    splitting; exponents are then recomputed by exact division.
    """
    if f.is_zero():
        raise ValueError("factor of 0")
    p = f.p
    f = f.monic()
    found = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g.deg <= 0:
            continue
        der = g.derivative()
        if der.is_zero():
            # g(T) = h(T^p); Frobenius is the identity on F_p coefficients
            stack.append(Poly(p, tuple(g[i * p] for i in range(g.deg // p + 1))))
            continue
        sqf = g.gcd(der)
        if sqf.deg > 0:
            stack.append(sqf)
            stack.append(g // sqf)
            continue
        # g squarefree: distinct-degree then equal-degree splitting
        x = Poly.x(p)
        h = x
        rest = g
        d = 0
        while rest.deg > 0:
            d += 1
            if 2 * d > rest.deg:
                found.add(rest.monic())
                break
            h = h.powmod(p, rest)
            gd = (h - x).gcd(rest)
            if gd.deg > 0:
                found.update(irr.monic() for irr in _equal_degree_split(gd.monic(), d, 0x5EED + d))
                rest = rest // gd
                h = h % rest
    exact = {}
    for g in found:
        e = 0
        h = f
        while True:
            q, r = h.divmod(g)
            if not r.is_zero():
                break
            e += 1
            h = q
        if e > 0:
            exact[g] = e
    return tuple(sorted(exact.items(), key=lambda t: t[0].sort_key()))


def poly_valuation(f, g):
    """Multiplicity of the irreducible g in the nonzero polynomial f."""
    if f.is_zero():
        raise ValueError("valuation of 0")
    v = 0
    while True:
        q, r = f.divmod(g)
        if not r.is_zero():
            return v
        v += 1
        f = q


def poly_crt(residues, moduli):
    """CRT for pairwise coprime polynomial moduli; result has degree < sum of degrees."""
    p = moduli[0].p
    x, m = Poly.zero(p), Poly.one(p)
    for r, mi in zip(residues, moduli):
        t = (r - x) % mi
        t = t * m.invmod(mi) % mi
        x = x + m * t
        m = m * mi
    return x % m
