"""Multivariate polynomial normal form used by the formula builders.

Coefficients are ints (field-independent formulas) or FieldElements
(instantiated formulas); the two mix freely since FieldElement absorbs
ints.  Monomials are sorted tuples of (variable, exponent).
"""


class MPoly:
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {m: c for m, c in terms.items() if c}

    @staticmethod
    def const(c):
        return MPoly({(): c} if c else {})

    @staticmethod
    def var(name):
        return MPoly({((name, 1),): 1})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MPoly(out)

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                if m in out:
                    out[m] = out[m] + c
                else:
                    out[m] = c
        return MPoly(out)

    def __pow__(self, e):
        r = MPoly.const(1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def degree_in(self, var):
        d = 0
        for m in self.terms:
            for v, e in m:
                if v == var:
                    d = max(d, e)
        return d

    def subst(self, var, value):
        """Substitute an MPoly for a variable."""
        out = MPoly.const(0)
        for m, c in self.terms.items():
            part = MPoly({tuple((v, e) for v, e in m if v != var): c})
            for v, e in m:
                if v == var:
                    part = part * value ** e
            out = out + part
        return out

    def subst_ratio(self, var, num, den, k):
        """The polynomial den^k * self(var -> num/den); requires k >= degree_in(var)."""
        out = MPoly.const(0)
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, ee in m:
                if v == var:
                    e = ee
                else:
                    rest.append((v, ee))
            part = MPoly({tuple(rest): c}) * num ** e * den ** (k - e)
            out = out + part
        return out

    def variables(self):
        out = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.terms == other.terms

    def __repr__(self):
        return f"MPoly({self.terms!r})"


def _mono_mul(m1, m2):
    out = dict(m1)
    for v, e in m2:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))
