"""First-order formulas in the language of rings with constants.

Terms are built from integer literals, field-element literals, named
variables and + - *; atoms are equalities; formulas add ~ & | and the
two quantifiers.  The rank of a formula is the number of quantifiers of
its prenex-counted normal form under the combination arithmetic
  exists-and adds, exists-or maxes, forall-or adds, forall-and maxes,
which every transformation here preserves exactly.

Concrete syntax (bit-exact for golden files):

    formula := ("exists"|"forall") var "." formula | disj
    disj    := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "~" unary | "(" formula ")" | term "=" term
    term    := factor (("+"|"-") factor)*
    factor  := atom ("*" atom)*
    atom    := "-" atom | "(" term ")" | integer | "{" element "}" | identifier
"""

from dataclasses import dataclass

from .fields import FieldElement
from .gf import GFConst, SmallField
from .mpoly import MPoly


# ----------------------------------------------------------------------
# AST

class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    value: object  # int, FieldElement, or GFConst


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


ZERO = Const(0)
ONE = Const(1)


def conj(parts):
    parts = list(parts)
    if not parts:
        return Eq(ZERO, ZERO)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        return Eq(ZERO, ONE)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def exists_many(names, body):
    for n in reversed(names):
        body = Exists(n, body)
    return body


def forall_many(names, body):
    for n in reversed(names):
        body = Forall(n, body)
    return body


# ----------------------------------------------------------------------
# structure

def term_vars(t, out):
    if isinstance(t, Var):
        out.add(t.name)
    elif isinstance(t, (Add, Sub, Mul)):
        term_vars(t.left, out)
        term_vars(t.right, out)


def free_vars(phi):
    out = set()

    def walk(f, bound):
        if isinstance(f, Eq):
            s = set()
            term_vars(f.left, s)
            term_vars(f.right, s)
            out.update(s - bound)
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, (And, Or)):
            walk(f.left, bound)
            walk(f.right, bound)
        else:
            walk(f.body, bound | {f.var})

    walk(phi, set())
    return out


def all_names(phi):
    out = set()

    def walk(f):
        if isinstance(f, Eq):
            term_vars(f.left, out)
            term_vars(f.right, out)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            walk(f.left)
            walk(f.right)
        else:
            out.add(f.var)
            walk(f.body)

    walk(phi)
    return out


def fresh_name(base, used):
    if base not in used:
        used.add(base)
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    name = f"{base}{i}"
    used.add(name)
    return name


def subst_term(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Const):
        return t
    cls = type(t)
    return cls(subst_term(t.left, mapping), subst_term(t.right, mapping))


def substitute(phi, mapping):
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return phi
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, mapping), subst_term(phi.right, mapping))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, mapping))
    if isinstance(phi, (And, Or)):
        return type(phi)(substitute(phi.left, mapping), substitute(phi.right, mapping))
    sub = {k: v for k, v in mapping.items() if k != phi.var}
    value_vars = set()
    for v in sub.values():
        term_vars(v, value_vars)
    var = phi.var
    body = phi.body
    if var in value_vars:
        used = all_names(body) | value_vars | set(sub)
        nv = fresh_name(var, used)
        body = substitute(body, {var: Var(nv)})
        var = nv
    return type(phi)(var, substitute(body, sub))


def canonicalize_bound_names(phi, prefix="y"):
    """Rename bound variables to prefix1, prefix2, ... in traversal order."""
    counter = [0]
    frees = free_vars(phi)

    def walk(f, env):
        if isinstance(f, Eq):
            mapping = {k: Var(v) for k, v in env.items()}
            return Eq(subst_term(f.left, mapping), subst_term(f.right, mapping))
        if isinstance(f, Not):
            return Not(walk(f.body, env))
        if isinstance(f, (And, Or)):
            return type(f)(walk(f.left, env), walk(f.right, env))
        counter[0] += 1
        name = f"{prefix}{counter[0]}"
        while name in frees:
            counter[0] += 1
            name = f"{prefix}{counter[0]}"
        env2 = dict(env)
        env2[f.var] = name
        return type(f)(name, walk(f.body, env2))

    return walk(phi, {})


def alpha_equal(f1, f2):
    def walk(a, b, env1, env2):
        if type(a) is not type(b):
            return False
        if isinstance(a, Eq):
            return _term_alpha(a.left, b.left, env1, env2) and _term_alpha(a.right, b.right, env1, env2)
        if isinstance(a, Not):
            return walk(a.body, b.body, env1, env2)
        if isinstance(a, (And, Or)):
            return walk(a.left, b.left, env1, env2) and walk(a.right, b.right, env1, env2)
        n = len(env1)
        e1 = dict(env1)
        e1[a.var] = n
        e2 = dict(env2)
        e2[b.var] = n
        return walk(a.body, b.body, e1, e2)

    def _term_alpha(s, t, env1, env2):
        if type(s) is not type(t):
            return False
        if isinstance(s, Var):
            return env1.get(s.name, ("f", s.name)) == env2.get(t.name, ("f", t.name))
        if isinstance(s, Const):
            return s.value == t.value
        return _term_alpha(s.left, t.left, env1, env2) and _term_alpha(s.right, t.right, env1, env2)

    return walk(f1, f2, {}, {})


# ----------------------------------------------------------------------
# rank calculus

def rank_profile(phi):
    """(existential rank, universal rank), with None for 'not of this polarity'."""
    if isinstance(phi, Eq):
        return (0, 0)
    if isinstance(phi, Not):
        e, u = rank_profile(phi.body)
        return (u, e)
    if isinstance(phi, And):
        e1, u1 = rank_profile(phi.left)
        e2, u2 = rank_profile(phi.right)
        e = e1 + e2 if (e1 is not None and e2 is not None) else None
        u = max(u1, u2) if (u1 is not None and u2 is not None) else None
        return (e, u)
    if isinstance(phi, Or):
        e1, u1 = rank_profile(phi.left)
        e2, u2 = rank_profile(phi.right)
        e = max(e1, e2) if (e1 is not None and e2 is not None) else None
        u = u1 + u2 if (u1 is not None and u2 is not None) else None
        return (e, u)
    if isinstance(phi, Exists):
        e, _ = rank_profile(phi.body)
        return (e + 1 if e is not None else None, None)
    e_, u = rank_profile(phi.body)
    return (None, u + 1 if u is not None else None)


def rank(phi):
    e, u = rank_profile(phi)
    if e is None and u is None:
        raise ValueError("formula mixes quantifier polarities; no rank under the combination rules")
    if e is not None and u is not None:
        return e  # quantifier-free combinations: both are 0
    return e if e is not None else u


def polarity(phi):
    e, u = rank_profile(phi)
    if e is not None and u is not None:
        return "quantifier-free"
    if e is not None:
        return "existential"
    if u is not None:
        return "universal"
    raise ValueError("mixed-polarity formula")


# ----------------------------------------------------------------------
# normal forms

def nnf(phi, negate=False):
    if isinstance(phi, Eq):
        return Not(phi) if negate else phi
    if isinstance(phi, Not):
        return nnf(phi.body, not negate)
    if isinstance(phi, And):
        cls = Or if negate else And
        return cls(nnf(phi.left, negate), nnf(phi.right, negate))
    if isinstance(phi, Or):
        cls = And if negate else Or
        return cls(nnf(phi.left, negate), nnf(phi.right, negate))
    if isinstance(phi, Exists):
        cls = Forall if negate else Exists
        return cls(phi.var, nnf(phi.body, negate))
    cls = Exists if negate else Forall
    return cls(phi.var, nnf(phi.body, negate))


def prenex(phi):
    """(prefix, matrix) for an NNF formula of pure polarity; prefix is a list
    of (kind, var) with kind in {'E', 'A'}.  Bound variables are renamed apart."""
    phi = nnf(phi)
    used = set(all_names(phi)) | free_vars(phi)

    def walk(f):
        if isinstance(f, Eq) or (isinstance(f, Not) and isinstance(f.body, Eq)):
            return [], f
        if isinstance(f, (And, Or)):
            p1, m1 = walk(f.left)
            p2, m2 = walk(f.right)
            ren = {}
            p2r = []
            for kind, v in p2:
                nv = fresh_name(v, used)
                if nv != v:
                    ren[v] = Var(nv)
                p2r.append((kind, nv))
            if ren:
                m2 = substitute(m2, ren)
            return p1 + p2r, type(f)(m1, m2)
        if isinstance(f, (Exists, Forall)):
            kind = "E" if isinstance(f, Exists) else "A"
            v = f.var
            nv = fresh_name(v, used)
            body = f.body if nv == v else substitute(f.body, {v: Var(nv)})
            p, m = walk(body)
            return [(kind, nv)] + p, m
        raise ValueError(f"cannot prenex {f!r}")

    return walk(phi)


def _rebuild(prefix, matrix):
    out = matrix
    for kind, v in reversed(prefix):
        out = Exists(v, out) if kind == "E" else Forall(v, out)
    return out


def combine(f1, f2, op):
    """Conjunction/disjunction with the exact rank arithmetic.

    Existential inputs: 'and' concatenates prefixes (ranks add), 'or'
    merges them positionally into a shared prefix (ranks max).
    Universal inputs: dual.  Mixed polarities are rejected.
    """
    if op not in ("and", "or"):
        raise ValueError("op must be 'and' or 'or'")
    p1 = polarity(f1)
    p2 = polarity(f2)
    pols = {p1, p2} - {"quantifier-free"}
    if len(pols) > 1:
        raise ValueError("combine requires formulas of the same polarity")
    pol = pols.pop() if pols else "existential"
    kind = "E" if pol == "existential" else "A"
    r1, r2 = rank(f1), rank(f2)
    pre1, m1 = prenex(f1)
    pre2, m2 = prenex(f2)
    assert all(k == kind for k, _ in pre1 + pre2)
    merge = (op == "or") if pol == "existential" else (op == "and")
    used = free_vars(f1) | free_vars(f2) | {v for _, v in pre1 + pre2}
    if not merge:
        # disjoint prefixes; prenex() already renamed within each formula
        ren = {}
        pre2r = []
        for k, v in pre2:
            nv = fresh_name(v, used)
            if nv != v:
                ren[v] = Var(nv)
            pre2r.append((k, nv))
        if ren:
            m2 = substitute(m2, ren)
        out = _rebuild(pre1 + pre2r, And(m1, m2) if op == "and" else Or(m1, m2))
        expected = r1 + r2
    else:
        n = max(len(pre1), len(pre2))
        shared = [fresh_name(f"w", used) for _ in range(n)]
        m1 = substitute(m1, {v: Var(shared[i]) for i, (k, v) in enumerate(pre1)})
        m2 = substitute(m2, {v: Var(shared[i]) for i, (k, v) in enumerate(pre2)})
        out = _rebuild([(kind, w) for w in shared], And(m1, m2) if op == "and" else Or(m1, m2))
        expected = max(r1, r2)
    assert rank(out) == expected
    return out


def combine_many(formulas, op):
    out = formulas[0]
    for f in formulas[1:]:
        out = combine(out, f, op)
    return out


def dualize(phi, var="X"):
    """From an existential definition of a set B to the universal definition
    of (K minus the inverses of B) plus {0}, at the cost of one quantifier.

    Applied to the union-of-maximal-ideals formulas this yields the
    universal definitions of the integral-element rings.
    """
    if polarity(phi) not in ("existential", "quantifier-free"):
        raise ValueError("dualize expects an existential formula")
    if var not in free_vars(phi):
        raise ValueError(f"distinguished variable {var} is not free in the formula")
    used = all_names(phi) | free_vars(phi)
    y = fresh_name("y", used)
    inner = Exists(y, And(Eq(Mul(Var(var), Var(y)), ONE), substitute(phi, {var: Var(y)})))
    pre, m = prenex(inner)
    assert all(k == "E" for k, _ in pre)
    out = _rebuild([("A", v) for _, v in pre], nnf(m, negate=True))
    assert rank(out) == rank(phi) + 1
    return out


# ----------------------------------------------------------------------
# terms <-> polynomials

def term_to_mpoly(t):
    if isinstance(t, Var):
        return MPoly.var(t.name)
    if isinstance(t, Const):
        return MPoly.const(t.value)
    a = term_to_mpoly(t.left)
    b = term_to_mpoly(t.right)
    if isinstance(t, Add):
        return a + b
    if isinstance(t, Sub):
        return a - b
    return a * b


def _mono_key(mono_coeff):
    mono, _ = mono_coeff
    total = sum(e for _, e in mono)
    return (-total, mono)


def mpoly_to_term(p):
    if p.is_zero():
        return ZERO
    parts = []
    for mono, coeff in sorted(p.terms.items(), key=_mono_key):
        factors = []
        neg = False
        if isinstance(coeff, int):
            if coeff < 0:
                neg = True
                coeff = -coeff
            if coeff != 1 or not mono:
                factors.append(Const(coeff))
        else:
            if coeff != 1 or not mono:
                factors.append(Const(coeff))
        for v, e in mono:
            for _ in range(e):
                factors.append(Var(v))
        term = factors[0]
        for f in factors[1:]:
            term = Mul(term, f)
        parts.append((neg, term))
    neg0, out = parts[0]
    if neg0:
        out = Sub(ZERO, out)
    for neg, t in parts[1:]:
        out = Sub(out, t) if neg else Add(out, t)
    return out


def subst_ratio_formula(matrix, var, num_term, den_term):
    """Substitute var -> num/den into a quantifier-free matrix, clearing
    denominators atom by atom (each side of an equation is multiplied by
    den^k with k the larger degree of var on the two sides)."""
    nump = term_to_mpoly(num_term)
    denp = term_to_mpoly(den_term)

    def walk(f):
        if isinstance(f, Eq):
            lp = term_to_mpoly(f.left)
            rp = term_to_mpoly(f.right)
            k = max(lp.degree_in(var), rp.degree_in(var))
            if k == 0:
                return f
            return Eq(mpoly_to_term(lp.subst_ratio(var, nump, denp, k)),
                      mpoly_to_term(rp.subst_ratio(var, nump, denp, k)))
        if isinstance(f, Not):
            return Not(walk(f.body))
        if isinstance(f, (And, Or)):
            return type(f)(walk(f.left), walk(f.right))
        raise ValueError("ratio substitution applies to quantifier-free matrices only")

    return walk(matrix)


# ----------------------------------------------------------------------
# diophantine conversion

def root_free_quadratic(domain):
    """Coefficients (b, c) of a monic quadratic with no root in the domain."""
    if isinstance(domain, SmallField):
        b, c = domain.root_free_quadratic()
        return Const(domain.const(b)), Const(domain.const(c))
    if domain.family == "rationals":
        return Const(1), Const(1)  # X^2 + X + 1
    return Const(0), Const(-domain.T)  # X^2 - T, rootless in every F_p(T)


def _h_fold(f, g, bc):
    """Single equation equivalent to f = 0 and g = 0: H(f, g) = 0 with
    H the homogenized root-free quadratic."""
    b, c = bc
    return Add(Add(Mul(f, f), Mul(b, Mul(f, g))), Mul(c, Mul(g, g)))


def _balanced(terms, fold):
    while len(terms) > 1:
        nxt = []
        for i in range(0, len(terms) - 1, 2):
            nxt.append(fold(terms[i], terms[i + 1]))
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def _dnf(matrix, cap=256):
    """List of literal conjunctions [(eqs, neqs)] for a quantifier-free NNF matrix."""
    if isinstance(matrix, Eq):
        return [([matrix], [])]
    if isinstance(matrix, Not):
        if not isinstance(matrix.body, Eq):
            raise ValueError("matrix is not in negation normal form")
        return [([], [matrix.body])]
    if isinstance(matrix, Or):
        out = _dnf(matrix.left, cap) + _dnf(matrix.right, cap)
        if len(out) > cap:
            raise ValueError("disjunctive normal form exceeds the size cap")
        return out
    if isinstance(matrix, And):
        left = _dnf(matrix.left, cap)
        right = _dnf(matrix.right, cap)
        out = []
        for e1, n1 in left:
            for e2, n2 in right:
                out.append((e1 + e2, n1 + n2))
        if len(out) > cap:
            raise ValueError("disjunctive normal form exceeds the size cap")
        return out
    raise ValueError("quantified matrix")


def to_diophantine(phi, domain):
    """An equivalent single-equation existential formula of rank <= rank+1.

    Inequations are priced at one shared fresh variable (a product being
    invertible), conjunctions are folded through the homogenized root-free
    quadratic of the domain, and disjunctions become products.
    """
    if polarity(phi) not in ("existential", "quantifier-free"):
        raise ValueError("to_diophantine expects an existential formula")
    pre, matrix = prenex(phi)
    disjuncts = _dnf(matrix)
    bc = root_free_quadratic(domain)
    used = {v for _, v in pre} | all_names(matrix) | free_vars(phi)
    inv = None
    folded = []
    for eqs, neqs in disjuncts:
        polys = [Sub(e.left, e.right) for e in eqs]
        if neqs:
            if inv is None:
                inv = fresh_name("y", used)
            prod = _balanced([Sub(n.left, n.right) for n in neqs], Mul)
            polys.append(Sub(Mul(prod, Var(inv)), ONE))
        if not polys:
            polys = [ZERO]
        folded.append(_balanced(polys, lambda f, g: _h_fold(f, g, bc)))
    eq = Eq(_balanced(folded, Mul), ZERO)
    names = [v for _, v in pre] + ([inv] if inv else [])
    out = exists_many(names, eq)
    assert rank(out) <= rank(phi) + 1
    return out


# ----------------------------------------------------------------------
# evaluation

class FiniteDomain:
    """Exhaustive semantics over GF(q); values are element codes."""

    exhaustive = True

    def __init__(self, q):
        self.gf = SmallField(q) if isinstance(q, int) else q

    def candidates(self):
        return self.gf.elements()

    def eval_term(self, t, asg):
        gf = self.gf
        if isinstance(t, Var):
            return asg[t.name]
        if isinstance(t, Const):
            v = t.value
            if isinstance(v, int):
                return gf.from_int(v)
            if isinstance(v, GFConst):
                if v.q != gf.q:
                    raise ValueError("finite-field constant from a different field")
                return v.code
            raise ValueError("field-element constants cannot be evaluated over a finite field")
        a = self.eval_term(t.left, asg)
        b = self.eval_term(t.right, asg)
        if isinstance(t, Add):
            return gf.add(a, b)
        if isinstance(t, Sub):
            return gf.sub(a, b)
        return gf.mul(a, b)


class GlobalDomain:
    """Bounded-search semantics over Q or F_p(T); values are field elements.

    Quantifiers range over all elements up to the height budget, so
    existential truth and universal falsity are certified; the opposite
    verdicts are returned as None (unknown).
    """

    exhaustive = False

    def __init__(self, field, height=8, max_candidates=3000):
        self.field = field
        self.height = height
        self.max_candidates = max_candidates

    def candidates(self):
        count = 0
        for x in self.field.enumerate_by_height(self.height):
            count += 1
            if count > self.max_candidates:
                return
            yield x

    def eval_term(self, t, asg):
        if isinstance(t, Var):
            return asg[t.name]
        if isinstance(t, Const):
            v = t.value
            if isinstance(v, int):
                return self.field.elem(v)
            if isinstance(v, FieldElement):
                if v.field != self.field:
                    raise ValueError("constant from a different field")
                return v
            raise ValueError("finite-field constants cannot be evaluated globally")
        a = self.eval_term(t.left, asg)
        b = self.eval_term(t.right, asg)
        if isinstance(t, Add):
            return a + b
        if isinstance(t, Sub):
            return a - b
        return a * b


def eval_formula(phi, assignment, domain):
    """Three-valued evaluation: True, False, or None for unknown."""

    def walk(f, asg):
        if isinstance(f, Eq):
            return domain.eval_term(f.left, asg) == domain.eval_term(f.right, asg)
        if isinstance(f, Not):
            r = walk(f.body, asg)
            return None if r is None else (not r)
        if isinstance(f, And):
            l = walk(f.left, asg)
            if l is False:
                return False
            r = walk(f.right, asg)
            if r is False:
                return False
            return True if (l is True and r is True) else None
        if isinstance(f, Or):
            l = walk(f.left, asg)
            if l is True:
                return True
            r = walk(f.right, asg)
            if r is True:
                return True
            return False if (l is False and r is False) else None
        had = f.var in asg
        old = asg.get(f.var)
        try:
            if isinstance(f, Exists):
                saw_unknown = False
                for x in domain.candidates():
                    asg[f.var] = x
                    r = walk(f.body, asg)
                    if r is True:
                        return True
                    if r is None:
                        saw_unknown = True
                if domain.exhaustive and not saw_unknown:
                    return False
                return None
            saw_unknown = False
            for x in domain.candidates():
                asg[f.var] = x
                r = walk(f.body, asg)
                if r is False:
                    return False
                if r is None:
                    saw_unknown = True
            if domain.exhaustive and not saw_unknown:
                return True
            return None
        finally:
            if had:
                asg[f.var] = old
            else:
                asg.pop(f.var, None)

    return walk(phi, dict(assignment))


def defined_set(phi, domain, var="X"):
    """Exhaustive defined set over a finite domain."""
    out = set()
    for x in domain.candidates():
        if eval_formula(phi, {var: x}, domain) is True:
            out.add(x)
    return out


# ----------------------------------------------------------------------
# printing

def print_term(t, min_prec=1):
    """Minimal-parenthesis printing: +,- bind at 1, * at 2, atoms at 3;
    a child is wrapped when its level is below what its context requires."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        v = t.value
        if isinstance(v, int):
            s = str(v)
            return f"({s})" if (v < 0 and min_prec > 1) else s
        if isinstance(v, GFConst):
            return str(v)
        return "{" + v.field.format_element(v) + "}"
    if isinstance(t, Mul):
        s = f"{print_term(t.left, 2)}*{print_term(t.right, 3)}"
        return f"({s})" if min_prec > 2 else s
    op = "+" if isinstance(t, Add) else "-"
    s = f"{print_term(t.left, 1)}{op}{print_term(t.right, 2)}"
    return f"({s})" if min_prec > 1 else s


def print_formula(phi):
    if isinstance(phi, (Exists, Forall)):
        kw = "exists" if isinstance(phi, Exists) else "forall"
        return f"{kw} {phi.var}. {print_formula(phi.body)}"
    return _print_disj(phi)


def _print_disj(phi):
    if isinstance(phi, Or):
        return f"{_print_disj(phi.left)} | {_print_conj(phi.right)}"
    return _print_conj(phi)


def _print_conj(phi):
    if isinstance(phi, And):
        return f"{_print_conj(phi.left)} & {_print_unary(phi.right)}"
    return _print_unary(phi)


def _print_unary(phi):
    if isinstance(phi, Not):
        return f"~{_print_unary(phi.body)}"
    if isinstance(phi, Eq):
        return f"{print_term(phi.left)} = {print_term(phi.right)}"
    return f"({print_formula(phi)})"


# ----------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message, pos):
        self.pos = pos
        super().__init__(f"{message} at position {pos}")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text):
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()=~&|+-*.":
            out.append(_Tok(ch, ch, i))
            i += 1
            continue
        if ch == "{":
            j = text.find("}", i)
            if j < 0:
                raise ParseError("unterminated element literal", i)
            out.append(_Tok("elem", text[i + 1:j], i))
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Tok("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in ("exists", "forall") else "ident"
            out.append(_Tok(kind, word, i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(_Tok("eof", "", n))
    return out


class _Parser:
    def __init__(self, text, field=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.pos)
        self.i += 1
        return tok

    def formula(self):
        tok = self.peek()
        if tok.kind in ("exists", "forall"):
            self.take()
            var = self.take("ident").text
            self.take(".")
            body = self.formula()
            return Exists(var, body) if tok.kind == "exists" else Forall(var, body)
        return self.disj()

    def disj(self):
        out = self.conj()
        while self.peek().kind == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.unary()
        while self.peek().kind == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self):
        tok = self.peek()
        if tok.kind == "~":
            self.take()
            return Not(self.unary())
        if tok.kind == "(":
            # parenthesized formula or parenthesized term starting an atom
            save = self.i
            try:
                self.take("(")
                f = self.formula()
                self.take(")")
                if self.peek().kind in ("=",):
                    raise ParseError("term context", tok.pos)
                return f
            except ParseError:
                self.i = save
        left = self.term()
        self.take("=")
        right = self.term()
        return Eq(left, right)

    def term(self):
        out = self.factor()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.factor()
            out = Add(out, rhs) if op == "+" else Sub(out, rhs)
        return out

    def factor(self):
        out = self.atom()
        while self.peek().kind == "*":
            self.take()
            out = Mul(out, self.atom())
        return out

    def atom(self):
        tok = self.peek()
        if tok.kind == "-":
            self.take()
            if self.peek().kind == "int":
                return Const(-int(self.take().text))
            return Sub(ZERO, self.atom())
        if tok.kind == "(":
            self.take()
            out = self.term()
            self.take(")")
            return out
        if tok.kind == "int":
            self.take()
            return Const(int(tok.text))
        if tok.kind == "elem":
            self.take()
            if self.field is None:
                raise ParseError("element literal requires a field context", tok.pos)
            return Const(self.field.parse_element(tok.text))
        if tok.kind == "ident":
            self.take()
            return Var(tok.text)
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)


def parse_formula(text, field=None):
    p = _Parser(text, field)
    out = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return out
