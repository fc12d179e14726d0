import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambdaops.linalg import (
    CoeffDomain,
    FgAbGroup,
    IntMatrix,
    NoIntegerSolution,
    NotASummand,
    SparseIntMatrix,
    cokernel,
    determinant,
    image_basis,
    inverse,
    is_unimodular,
    kernel_basis,
    rank,
    snf,
    solve,
    split_summand,
)
from strategies import int_matrices

sympy = pytest.importorskip("sympy")


def _sympy(A):
    return sympy.Matrix(A.rows, A.cols, [A[i, j] for i in range(A.rows) for j in range(A.cols)])


def test_snf_of_known_matrix():
    A = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert snf(A).diagonal == [2, 6, 12]


def test_snf_zero_and_empty():
    assert snf(IntMatrix.zeros(3, 2)).diagonal == []
    assert snf(IntMatrix.zeros(0, 4)).rank == 0


@given(int_matrices())
def test_snf_transform_identity(A):
    d = snf(A)
    assert d.left @ A @ d.right == d.S
    assert is_unimodular(d.left) and is_unimodular(d.right)
    diag = d.diagonal
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    for i in range(d.S.rows):
        for j in range(d.S.cols):
            if i != j:
                assert d.S[i, j] == 0


@given(int_matrices(4, 4))
def test_snf_against_sympy(A):
    from sympy.matrices.normalforms import smith_normal_form

    if A.rows == 0 or A.cols == 0:
        return
    S = smith_normal_form(_sympy(A), domain=sympy.ZZ)
    theirs = sorted(abs(int(S[i, i])) for i in range(min(A.shape)) if S[i, i] != 0)
    assert sorted(snf(A).diagonal) == theirs


@given(int_matrices(5, 5))
def test_rank_against_sympy(A):
    assert rank(A) == _sympy(A).rank()


@given(st.integers(0, 4).flatmap(lambda n: int_matrices(n, n).filter(lambda A: A.rows == A.cols)))
def test_determinant_against_sympy(A):
    if A.rows == 0:
        assert determinant(A) == 1
    else:
        assert determinant(A) == int(_sympy(A).det())


@given(int_matrices())
def test_kernel_basis(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - rank(A)
    # saturated: the kernel is a direct summand
    if K.cols:
        split_summand(K)


@given(int_matrices())
def test_image_basis_spans_image(A):
    B = image_basis(A)
    assert B.cols == rank(A)
    solve(B, A)  # every column of A lies in the span


@given(int_matrices())
def test_cokernel_rank_count(A):
    G = cokernel(A)
    assert G.free_rank == A.rows - rank(A)


def test_cokernel_torsion():
    assert cokernel(IntMatrix.from_rows([[2, 0], [0, 3]])) == FgAbGroup(0, (6,))
    assert str(cokernel(IntMatrix.from_rows([[4], [0]]))) == "Z + Z/4"


def test_fg_group_validates_chain():
    with pytest.raises(ValueError):
        FgAbGroup(0, (2, 3))
    with pytest.raises(ValueError):
        FgAbGroup(0, (1,))


@given(int_matrices(4, 3), int_matrices(3, 2))
def test_solve_recovers_solution(A, X):
    if A.cols != X.rows:
        return
    B = A @ X
    Y = solve(A, B)
    assert A @ Y == B


def test_solve_no_solution():
    with pytest.raises(NoIntegerSolution):
        solve(IntMatrix.from_rows([[2]]), IntMatrix.from_rows([[1]]))


def test_inverse_and_nonunimodular():
    U = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert U @ inverse(U) == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_split_summand():
    i = IntMatrix.from_rows([[1], [2], [3]])
    r = split_summand(i)
    assert r @ i == IntMatrix.identity(1)
    with pytest.raises(NotASummand):
        split_summand(IntMatrix.from_rows([[2], [0]]))


def test_kron_and_stacks():
    A = IntMatrix.from_rows([[1, 2]])
    B = IntMatrix.from_rows([[0], [1]])
    assert A.kron(B) == IntMatrix.from_rows([[0, 0], [1, 2]])
    assert IntMatrix.hstack([A, A]).shape == (1, 4)
    assert IntMatrix.vstack([A, A]).shape == (2, 2)
    assert IntMatrix.block_diag([A, B]).shape == (3, 3)


@given(int_matrices())
def test_json_round_trip(A):
    assert IntMatrix.from_json(A.to_json()) == A


def test_json_bigint_round_trip():
    A = IntMatrix.from_rows([[2**80, -(2**70)]])
    assert IntMatrix.from_json(A.to_json()) == A


@given(int_matrices(), int_matrices())
def test_sparse_matches_dense(A, B):
    S = A.to_sparse()
    assert S.to_dense() == A
    assert S == A
    if A.cols == B.rows:
        assert (S @ B.to_sparse()).to_dense() == A @ B
        assert A @ B.to_sparse() == A @ B


def test_prime_field_rank():
    F2 = CoeffDomain.prime_field(2)
    A = IntMatrix.from_rows([[1, 1], [1, 1]], domain=F2)
    assert rank(A) == 1
    assert rank(IntMatrix.from_rows([[2, 0], [0, 2]], domain=F2)) == 0
    with pytest.raises(ValueError):
        CoeffDomain.prime_field(4)
