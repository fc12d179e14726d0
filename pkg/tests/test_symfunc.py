import itertools
import random
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambdaops.functors import Compose, Lambda, Sym, TensorPower
from lambdaops.symfunc import (
    EBasisPoly,
    InsufficientVariables,
    NotSymmetric,
    Poly,
    SymPoly,
    char_functor,
    complete,
    e_monomials_independent,
    elementary,
    expand_in_e,
    lambda_t_check,
    lambda_universal_check,
    plethysm_e,
    power_sum,
    pr_substitution_identity,
    universal_Pr,
    universal_Prs,
    verify_axiom3_char,
)


def e_num(k, xs):
    """Numeric elementary symmetric function (oracle)."""
    return sum(prod(c) for c in itertools.combinations(xs, k))


def e_list(xs, n):
    return [e_num(k, xs) for k in range(1, n + 1)]


def E(n, exps, c=1):
    return EBasisPoly(n, {tuple(exps): c})


def test_expand_trivial_cases():
    assert expand_in_e(elementary(2, 3)) == E(3, (0, 1, 0))
    assert expand_in_e(SymPoly(3, {})).is_zero()


@pytest.mark.parametrize("point", [(1, 1, 0), (1, 2, 3), (-2, 5, 7)])
def test_power_sum_expansion(point):
    P = expand_in_e(power_sum(2, 3))
    assert str(P) == "X1^2 - 2*X2"
    assert P.evaluate(e_list(point, 3)) == sum(x * x for x in point)


@given(st.integers(1, 4), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_expansion_evaluates_correctly(k, xs):
    n = 4
    for f in (power_sum(k, n), complete(k, n), elementary(k, n) * power_sum(1, n)):
        if f.degree() > n:
            continue
        assert expand_in_e(f).evaluate(e_list(xs, n)) == f.evaluate(xs)


def test_expand_errors():
    with pytest.raises(NotSymmetric):
        expand_in_e(SymPoly(2, {(1, 0): 1}))
    with pytest.raises(InsufficientVariables):
        expand_in_e(power_sum(3, 2))


def test_P1_and_P2():
    assert str(universal_Pr(1)) == "X1*Y1"
    assert str(universal_Pr(2)) == "X1^2*Y2 + X2*Y1^2 - 2*X2*Y2"


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_Pr_against_numeric_oracle(r):
    rng = random.Random(r)
    P = universal_Pr(r)
    for _ in range(5):
        xs = [rng.randint(-3, 3) for _ in range(r)]
        ys = [rng.randint(-3, 3) for _ in range(r)]
        lhs = e_num(r, [x * y for x in xs for y in ys])
        assert P.evaluate(e_list(xs, r) + e_list(ys, r)) == lhs


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_Pr_substitution_identity_and_degree(r):
    assert pr_substitution_identity(r)
    P = universal_Pr(r)
    x_weight = lambda k: sum((i + 1) * e for i, e in enumerate(k[:r]))
    assert {x_weight(k) for k in P.terms} == {r}


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_lambda_t_multiplicativity(r):
    assert lambda_t_check(r)


def test_P22():
    assert str(universal_Prs(2, 2)) == "X1*X3 - X4"


@pytest.mark.parametrize("r,s", [(1, 1), (1, 3), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_Prs_against_numeric_oracle(r, s):
    n = r * s
    P = universal_Prs(r, s)
    assert P.weighted_degree() == r * s
    rng = random.Random(n)
    for _ in range(3):
        xs = [rng.randint(-2, 2) for _ in range(n)]
        inner = [prod(c) for c in itertools.combinations(xs, s)]
        assert P.evaluate(e_list(xs, n)) == e_num(r, inner)


def test_P1s_is_generator():
    for s in (1, 2, 3):
        P = universal_Prs(1, s)
        assert P == E(s, [int(i == s - 1) for i in range(s)])


def test_plethysm_simple_cases():
    n = 4
    e1 = E(n, (1, 0, 0, 0))
    e2 = E(n, (0, 1, 0, 0))
    f = elementary(2, n)
    assert plethysm_e(e1, f, n) == f
    assert plethysm_e(e2, elementary(1, n), n) == elementary(2, n)
    want = elementary(1, n) * elementary(3, n) - elementary(4, n)
    assert plethysm_e(e2, e2, n) == want
    with pytest.raises(InsufficientVariables):
        plethysm_e(e2, e2, 3)


def test_characters():
    assert char_functor(Lambda(2), 3) == elementary(2, 3)
    assert char_functor(Sym(2), 3) == complete(2, 3)
    assert char_functor(Lambda(0), 2) == SymPoly.const(2, 1)
    assert char_functor(TensorPower(2), 2) == elementary(1, 2) * elementary(1, 2)
    assert char_functor(Lambda(1) * Lambda(2), 3) == elementary(1, 3) * elementary(2, 3)
    n = 4
    assert char_functor(Compose(Lambda(2), Lambda(2)), n) == plethysm_e(E(n, (0, 1, 0, 0)), E(n, (0, 1, 0, 0)), n)


@pytest.mark.parametrize("r,s", [(1, 3), (2, 2), (2, 3), (3, 2), (1, 6), (6, 1), (3, 3)])
def test_axiom3(r, s):
    assert verify_axiom3_char(r, s)


def test_lambda_universal_check():
    rep = lambda_universal_check(6)
    assert rep["ok"]
    assert [x["r"] for x in rep["axiom2"]] == [1, 2, 3]
    assert {(x["r"], x["s"]) for x in rep["axiom3"]} >= {(2, 2), (2, 3), (3, 2)}
    with pytest.raises(ValueError):
        lambda_universal_check(9)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
def test_e_monomials_independent(d):
    assert e_monomials_independent(d)


def test_poly_arithmetic():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x - x).is_zero()
    assert (3 - x).evaluate([1, 0]) == 2
    assert not SymPoly(2, {(1, 0): 1}).is_symmetric()
