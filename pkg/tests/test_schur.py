import random
from math import comb

import pytest

from lambdaops.functors import Compose, DividedPower, Lambda, Sym, TensorPower, apply_to_hom
from lambdaops.linalg import IntMatrix
from lambdaops.randomgen import random_unimodular
from lambdaops.schur import (
    DegreeMismatch,
    gamma_of_matrix,
    homogeneous_degree,
    schur_algebra,
    truncate_to_schur_module,
)
from lambdaops.symfunc import char_functor


@pytest.mark.parametrize("n,d", [(1, 1), (1, 3), (2, 1), (2, 2), (2, 3), (3, 2)])
def test_rank_is_multiset_count(n, d):
    S = schur_algebra(n, d)
    assert S.rank == comb(n * n + d - 1, d) == S.expected_rank()


def test_algebra_laws_full_2_2():
    assert schur_algebra(2, 2).check_laws()


def test_algebra_laws_sampled():
    assert schur_algebra(2, 3).check_laws(samples=150, seed=1)
    assert schur_algebra(3, 2).check_laws(samples=150, seed=2)


def test_trivial_algebra():
    S = schur_algebra(1, 4)
    assert S.rank == 1
    b = S.basis_element(0)
    assert b * b == b == S.unit()


def test_gamma_is_multiplicative():
    rng = random.Random(0)
    for _ in range(5):
        A = random_unimodular(rng, 2)
        B = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)])
        S = gamma_of_matrix(A, 2).algebra
        lhs = gamma_of_matrix(A @ B, 2)
        rhs = S.multiply(gamma_of_matrix(A, 2), gamma_of_matrix(B, 2))
        assert lhs.coeffs == rhs.coeffs


def test_gamma_of_identity_is_unit():
    S = schur_algebra(2, 2)
    assert gamma_of_matrix(IntMatrix.identity(2), 2).coeffs == S.unit().coeffs


@pytest.mark.parametrize("F", [Lambda(2), Sym(2), TensorPower(2), DividedPower(2)])
def test_module_axioms_and_weights(F):
    Mod = truncate_to_schur_module(F, 2)
    assert Mod.check_module_axioms()
    assert Mod.weights_match_character()
    assert sum(Mod.weights().values()) == Mod.rank


@pytest.mark.parametrize("F", [Lambda(2), Sym(2), TensorPower(2)])
def test_gamma_acts_as_functor(F):
    Mod = truncate_to_schur_module(F, 2)
    A = IntMatrix.from_rows([[2, -1], [3, 5]])
    assert Mod.act(gamma_of_matrix(A, 2)) == apply_to_hom(F, A)


def test_top_exterior_power():
    Mod = truncate_to_schur_module(Lambda(3), 3)
    assert Mod.rank == 1
    assert Mod.weights() == {(1, 1, 1): 1}


def test_tensor_square_diagonal_action():
    # Γ^2 of diag(a, b) acts on Z^2 ⊗ Z^2 as diag(a², ab, ab, b²)
    Mod = truncate_to_schur_module(TensorPower(2), 2)
    a, b = 3, 5
    D = IntMatrix.diagonal([a, b])
    assert Mod.act(gamma_of_matrix(D, 2)) == D.kron(D)
    assert Mod.act(gamma_of_matrix(D, 2)) == IntMatrix.diagonal([a * a, a * b, a * b, b * b])


def test_composite_weights():
    Mod = truncate_to_schur_module(Compose(Lambda(2), Lambda(2)), 4)
    assert Mod.weights_match_character()
    assert Mod.check_module_axioms(samples=40, seed=3)


def test_degree_checks():
    assert homogeneous_degree(Lambda(2) + Sym(2)) == 2
    with pytest.raises(DegreeMismatch):
        truncate_to_schur_module(Lambda(1) + Lambda(2), 2)
    with pytest.raises(DegreeMismatch):
        truncate_to_schur_module(Lambda(2), 2, d=3)
    with pytest.raises(ValueError):
        truncate_to_schur_module(Lambda(3), 2)
