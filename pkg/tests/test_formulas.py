import pytest

from ringdef.fields import QQ, RationalFunctions
from ringdef.formulas import (
    And,
    Const,
    Eq,
    Exists,
    FiniteDomain,
    Forall,
    GlobalDomain,
    Mul,
    Not,
    Or,
    ParseError,
    Sub,
    Var,
    alpha_equal,
    combine,
    defined_set,
    dualize,
    eval_formula,
    exists_many,
    parse_formula,
    polarity,
    print_formula,
    rank,
    to_diophantine,
)

F2 = RationalFunctions(2)


def F(text, field=None):
    return parse_formula(text, field)


def test_rank_basics():
    assert rank(F("x = 1")) == 0
    assert rank(F("exists y. x*y = 1")) == 1
    assert rank(F("forall y. ~(x*y = 1)")) == 1
    assert rank(F("exists y. exists z. y*z = x & y = z")) == 2
    with pytest.raises(ValueError, match="polarit"):
        rank(F("exists y. forall z. y*z = x"))


def test_combine_rank_arithmetic():
    e3 = exists_many(["a", "b", "c"], Eq(Var("a"), Mul(Var("b"), Var("c"))))
    e4 = exists_many(["p", "q", "r", "s"], Eq(Mul(Var("p"), Var("q")), Mul(Var("r"), Var("s"))))
    assert rank(combine(e3, e4, "and")) == 7
    assert rank(combine(e3, e4, "or")) == 4
    u2 = dualize(exists_many(["a"], Eq(Mul(Var("X"), Var("a")), Const(1))), "X")
    u3 = dualize(F("exists a. exists b. X*a*b = 1"), "X")
    assert rank(combine(u2, u3, "or")) == 5  # universal disjunction adds
    assert rank(combine(u2, u3, "and")) == 3  # universal conjunction maxes
    with pytest.raises(ValueError, match="polarity"):
        combine(e3, u2, "and")


def test_eval_finite_field():
    dom = FiniteDomain(5)
    phi = F("exists y. y*y = x")
    assert eval_formula(phi, {"x": 4}, dom) is True
    assert eval_formula(phi, {"x": 2}, dom) is False
    assert defined_set(phi, dom, "x") == {0, 1, 4}


def test_eval_global_unknown():
    dom = GlobalDomain(QQ, height=6)
    phi = F("exists y. y*y = 2")
    assert eval_formula(phi, {}, dom) is None
    phi2 = F("exists y. y*y = 4")
    assert eval_formula(phi2, {}, dom) is True
    phi3 = F("forall y. ~(y+y = 1)")
    assert eval_formula(phi3, {}, dom) is False  # counterexample 1/2 is found


def test_dualize_unit_complement_over_f3():
    # over a field, dualize(exists y: x*y = 1) defines {0}
    phi = F("exists y. x*y = 1")
    dual = dualize(phi, "x")
    assert rank(dual) == 2
    assert polarity(dual) == "universal"
    assert defined_set(dual, FiniteDomain(3), "x") == {0}


def test_dualize_rank_increment():
    for k in (1, 3):
        names = [f"v{i}" for i in range(k)]
        body = Eq(Mul(Var("X"), Var(names[0])), Const(1))
        phi = exists_many(names, body)
        assert rank(dualize(phi, "X")) == k + 1


def test_to_diophantine_examples():
    dom = QQ
    phi = F("x = 0 & y = 0")
    d = to_diophantine(phi, dom)
    assert rank(d) == 0
    assert isinstance(d, Eq)
    phi2 = F("~(x = 0)")
    d2 = to_diophantine(phi2, dom)
    assert rank(d2) == 1
    got = defined_set(to_diophantine(phi2, FiniteDomain(5).gf), FiniteDomain(5), "x")
    assert got == {1, 2, 3, 4}


def test_to_diophantine_preserves_semantics_f5():
    dom = FiniteDomain(5)
    formulas = [
        "exists y. y*y = x | x = 3",
        "exists y. ~(y = 0) & y*x = 2",
        "x*x-1 = 0 | x = 2 & ~(x = 3)",
        "exists y. exists z. y*z = x & ~(y = z)",
    ]
    for text in formulas:
        phi = F(text)
        d = to_diophantine(phi, dom.gf)
        assert rank(d) <= rank(phi) + 1
        # single equation shape: quantifier prefix over one Eq
        core = d
        while isinstance(core, Exists):
            core = core.body
        assert isinstance(core, Eq)
        assert defined_set(phi, dom, "x") == defined_set(d, dom, "x"), text


def test_print_parse_round_trip():
    texts = [
        "exists y. x*y = 1",
        "x = 0 & y = 0 | ~(z = 1)",
        "forall y. ~(x*y = 1) | x = 0",
        "exists y. (x+y)*(x-y) = 0",
        "x*(y+1) = -3",
    ]
    for s in texts:
        phi = F(s)
        assert alpha_equal(parse_formula(print_formula(phi)), phi), s


def test_print_parse_with_field_constants():
    x = F2.parse_element("(T^2+1)/(T+1)")
    phi = Exists("y", Eq(Mul(Var("y"), Const(x)), Const(1)))
    text = print_formula(phi)
    assert "{" in text
    assert alpha_equal(parse_formula(text, F2), phi)


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_formula("exists y. x* = 1")
    assert "position" in str(err.value)


def test_eval_function_field_constants():
    dom = GlobalDomain(F2, height=3)
    phi = Eq(Mul(Var("x"), Const(F2.T)), Const(F2.T * F2.T))
    assert eval_formula(phi, {"x": F2.T}, dom) is True
    assert eval_formula(phi, {"x": F2.one}, dom) is False
