"""Small finite fields GF(p^d) with table-driven arithmetic, for exhaustive
formula evaluation.  Elements are integer codes 0..q-1 (base-p coefficient
vectors of the polynomial basis); codes 0..p-1 are the prime subfield.
"""

from dataclasses import dataclass

from .fppoly import Poly, factor_int_small, monic_irreducibles


class SmallField:
    _cache = {}

    def __new__(cls, q):
        inst = cls._cache.get(q)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(q)
            cls._cache[q] = inst
        return inst

    def _init(self, q):
        fac = factor_int_small(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        p, d = fac[0]
        self.q = q
        self.p = p
        self.d = d
        if d == 1:
            self.modulus = None
            self.add_table = [[(i + j) % p for j in range(p)] for i in range(p)]
            self.mul_table = [[(i * j) % p for j in range(p)] for i in range(p)]
        else:
            mod = next(f for f in monic_irreducibles(p) if f.deg == d)
            self.modulus = mod
            elems = [Poly.from_code(p, c) for c in range(q)]
            self.add_table = [[(elems[i] + elems[j]).code() for j in range(q)] for i in range(q)]
            self.mul_table = [[((elems[i] * elems[j]) % mod).code() for j in range(q)] for i in range(q)]
        self.neg_table = [next(j for j in range(q) if self.add_table[i][j] == 0) for i in range(q)]
        self.inv_table = [None] + [next(j for j in range(1, q) if self.mul_table[i][j] == 1) for i in range(1, q)]

    @property
    def name(self):
        return f"F{self.q}"

    def elements(self):
        return range(self.q)

    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def neg(self, a):
        return self.neg_table[a]

    def from_int(self, n):
        return n % self.p

    def const(self, code):
        return GFConst(self.q, code % self.q)

    def root_free_quadratic(self):
        """Coefficients (b, c) with X^2 + bX + c having no root in the field."""
        for b in range(self.q):
            for c in range(self.q):
                if all(self.add(self.add(self.mul(x, x), self.mul(b, x)), c) != 0 for x in range(self.q)):
                    return b, c
        raise ArithmeticError("no irreducible quadratic found")  # impossible for finite fields


@dataclass(frozen=True)
class GFConst:
    """A finite-field constant embedded in a formula (evaluation-only literal)."""

    q: int
    code: int

    def __str__(self):
        return f"{{gf{self.q}:{self.code}}}"
