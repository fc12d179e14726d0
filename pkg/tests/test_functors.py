import itertools
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambdaops.functors import (
    Arg,
    Compose,
    DividedPower,
    Lambda,
    SpecParseError,
    Sym,
    TensorPower,
    TensorProduct,
    Zero,
    apply_to_hom,
    apply_to_homs,
    apply_to_module,
    basis,
    cross_effect,
    degree_of,
    parse_spec,
    preserves_zero,
    structural_degree,
)
from lambdaops.linalg import IntMatrix, determinant
from strategies import int_matrices

FUNCTORS = [Lambda(1), Lambda(2), Lambda(3), Sym(2), Sym(3), DividedPower(2), TensorPower(2),
            Compose(Lambda(2), Lambda(2)), Lambda(2) + Sym(2), Lambda(1) * Sym(2)]


def square(n):
    return int_matrices(n, n, bound=4).filter(lambda A: A.shape == (n, n))


def test_parse_round_trip():
    for text in ["L2", "S3", "G2", "T2", "I", "L2@L2", "L1+S2", "(L1+S2)*L2", "L2@(L1+I)", "X1*I"]:
        F = parse_spec(text)
        assert parse_spec(str(F)) == F


@pytest.mark.parametrize("bad", ["", "L", "L2+", "(L2", "Q3", "L2)", "X1@L2"])
def test_parse_errors(bad):
    with pytest.raises((SpecParseError, ValueError)):
        parse_spec(bad)


def test_module_ranks():
    for n in range(5):
        assert apply_to_module(Lambda(2), n) == comb(n, 2)
        assert apply_to_module(Sym(3), n) == comb(n + 2, 3)
        assert apply_to_module(TensorPower(2), n) == n * n
        assert apply_to_module(Compose(Lambda(2), Lambda(2)), n) == comb(comb(n, 2), 2)
    for F in FUNCTORS:
        for n in range(4):
            assert len(basis(F, n)) == apply_to_module(F, n)


def test_degrees():
    assert structural_degree(Compose(Lambda(2), Lambda(3))) == 6
    assert structural_degree(Lambda(1) * Sym(2)) == 3
    assert degree_of(Lambda(3)) == 3
    assert degree_of(Sym(2) + Lambda(1)) == 2


def test_cross_effects_vanish_above_degree():
    assert cross_effect(Lambda(2), [1, 1]).rank == 1
    assert cross_effect(Lambda(2), [1, 1, 1]).rank == 0
    assert cross_effect(Sym(2), [2, 1]).rank == 2
    assert cross_effect(TensorPower(2), [1, 1]).rank == 2


def test_preserves_zero():
    assert preserves_zero(Lambda(2))
    assert not preserves_zero(Lambda(0))
    assert not preserves_zero(Lambda(0) + Lambda(1))


def _minor(A, rows, cols):
    return determinant(A.submatrix(rows, cols))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), int_matrices(n, n, 4))))
def test_lambda_is_compound_matrix(data):
    n, A = data
    if A.shape != (n, n):
        return
    for r in range(n + 1):
        L = apply_to_hom(Lambda(r), A)
        subsets = list(itertools.combinations(range(n), r))
        for i, I in enumerate(subsets):
            for j, J in enumerate(subsets):
                assert L[i, j] == _minor(A, I, J)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_functoriality_cauchy_binet(pair):
    A, B = pair
    for F in FUNCTORS:
        assert apply_to_hom(F, A @ B) == apply_to_hom(F, A) @ apply_to_hom(F, B)


def test_identity_and_top_power():
    A = IntMatrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    for F in FUNCTORS:
        assert apply_to_hom(F, IntMatrix.identity(3)) == IntMatrix.identity(apply_to_module(F, 3))
    assert apply_to_hom(Lambda(3), A) == IntMatrix.from_rows([[determinant(A)]])


def test_tensor_power_is_kronecker():
    A = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert apply_to_hom(TensorPower(2), A) == A.kron(A)


def test_sym_vs_divided_power_duality():
    # over Z, Γ^2(A) is the transpose of S^2(A^T)
    A = IntMatrix.from_rows([[1, 2], [3, 5]])
    assert apply_to_hom(DividedPower(2), A) == apply_to_hom(Sym(2), A.T).T


def test_bifunctor():
    F = TensorProduct(Arg(0), Arg(1))
    A = IntMatrix.from_rows([[1, 2]])
    B = IntMatrix.from_rows([[3], [4]])
    assert apply_to_homs(F, [A, B]) == A.kron(B)


def test_zero_functor():
    assert basis(Zero(), 3) == []
    assert apply_to_module(Zero(), 3) == 0
