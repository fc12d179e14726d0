import copy
import json
import random

import pytest
from hypothesis import given, settings

from lambdaops.complexes import BinaryComplex, ChainComplex, is_acyclic, shift
from lambdaops.exact import DiagonalWitness, SesWitness, check_diagonal, check_ses, coordinate_ses
from lambdaops.linalg import IntMatrix
from lambdaops.randomgen import random_acyclic, random_binary_acyclic
from lambdaops.validator import replay_witness
from lambdaops.witness import (
    KClassExpr,
    NotAcyclic,
    NotIdempotent,
    NotMono,
    WitnessChain,
    binary_nonsplit_check,
    find_binary_section,
    nonsplit_example,
    object_id,
    product_vanishing_witness,
    shift_witness,
    split_acyclic_mono,
    split_chain_idempotent,
)
from strategies import binary_acyclic, idempotent_case, mono_case


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


ONE = M([[1]])
N_SIGN = BinaryComplex({0: 1, 1: 1}, {1: ONE}, {1: ONE.scale(-1)})
N_DIAG = BinaryComplex({0: 1, 1: 1}, {1: ONE}, {1: ONE})
N_23 = BinaryComplex({0: 1, 1: 1}, {1: M([[2]])}, {1: M([[3]])})


def _tamper(data):
    data = copy.deepcopy(data)
    for rel in data["relations"]:
        if rel["kind"] != "ses":
            continue
        for cell, m in rel["maps"]["inclusion"].items():
            if m["rows"] and m["cols"]:
                m["entries"][0][0] += 1
                return data, cell
    raise AssertionError("nothing to tamper with")


def test_check_ses_and_diagonal():
    C = ChainComplex({0: 1, 1: 1}, {1: ONE})
    w = coordinate_ses(ChainComplex({0: 2, 1: 2}, {1: IntMatrix.identity(2)}), {(0,): [0], (1,): [0]})
    assert check_ses(w)
    assert w.sub == C and w.quotient == C
    assert check_diagonal(DiagonalWitness(N_DIAG, 0))
    assert not check_diagonal(DiagonalWitness(N_SIGN, 0))


def test_check_ses_detects_non_exactness():
    C = ChainComplex({0: 1})
    bad = SesWitness(C, ChainComplex({0: 2}), C, {(0,): M([[1], [0]])}, {(0,): M([[1, 0]])})
    res = check_ses(bad)
    assert not res and res.cell == (0,)


def test_coordinate_ses_rejects_non_subcomplex():
    X = ChainComplex({0: 1, 1: 1}, {1: ONE})
    with pytest.raises(ValueError):
        coordinate_ses(X, {(1,): [0]})


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_shift_witness_small(k):
    W = shift_witness(N_SIGN, k)
    assert W.replay()
    assert replay_witness(W.to_json()).ok


@settings(max_examples=10)
@given(binary_acyclic(2, 3))
def test_shift_witness_random(N):
    for k in (1, 2):
        W = shift_witness(N, k)
        assert W.replay()
        assert replay_witness(W.to_json()).ok
        assert W.target == KClassExpr({object_id(shift(N, k)): 1, object_id(N): -((-1) ** k)})


def test_shift_witness_needs_acyclic_unless_skipped():
    assert not is_acyclic(N_23)
    with pytest.raises(NotAcyclic):
        shift_witness(N_23, 1)
    W = shift_witness(N_23, 1, require_acyclic=False)
    assert W.replay(require_acyclic=False)
    assert not W.replay()
    assert replay_witness(W.to_json(), require_acyclic=False).ok
    assert not replay_witness(W.to_json()).ok


def test_json_round_trip():
    W = shift_witness(N_SIGN, 2)
    data = json.loads(json.dumps(W.to_json()))
    W2 = WitnessChain.from_json(data)
    assert W2.replay()
    assert W2.to_json() == W.to_json()


def test_tampering_is_detected_with_cell():
    data, cell = _tamper(shift_witness(N_SIGN, 2).to_json())
    rep = replay_witness(data)
    assert not rep.ok
    assert "cell" in rep.first_failure
    assert not WitnessChain.from_json(data).replay()


def test_ledger_tampering_is_detected():
    data = shift_witness(N_SIGN, 1).to_json()
    data["relations"][0]["coefficient"] += 1
    assert "ledger" in replay_witness(data).first_failure


def test_hash_tampering_is_detected():
    data = shift_witness(N_SIGN, 1).to_json()
    oid = next(iter(data["objects"]))
    rank_key = next(iter(data["objects"][oid]["ranks"]))
    data["objects"][oid]["ranks"][rank_key] += 1
    assert not replay_witness(data).ok


def test_malformed_witness_file():
    assert not replay_witness("{broken").ok
    assert not replay_witness({"objects": {}}).ok


def test_product_witness_diagonal_is_single_relation():
    W = product_vanishing_witness(N_DIAG, N_DIAG)
    assert len(W.relations) == 1
    assert isinstance(W.relations[0], DiagonalWitness)
    assert replay_witness(W.to_json()).ok


@settings(max_examples=8)
@given(binary_acyclic(2, 2), binary_acyclic(1, 2))
def test_product_witness_random(P, Q):
    W = product_vanishing_witness(P, Q)
    assert W.replay()
    assert replay_witness(W.to_json()).ok


def test_product_witness_on_nonsplit_example():
    W = product_vanishing_witness(nonsplit_example().top, N_SIGN)
    assert replay_witness(W.to_json()).ok


def test_product_witness_level_two_not_implemented():
    from lambdaops.complexes import external_tensor

    X = external_tensor(N_SIGN, N_SIGN)
    with pytest.raises(NotImplementedError):
        product_vanishing_witness(X, X)


@pytest.mark.parametrize("seed", range(5))
def test_split_idempotent(seed):
    e, S, expected = idempotent_case(random.Random(seed))
    K, inc = split_chain_idempotent(e, S)
    assert K.ranks == expected.ranks
    assert is_acyclic(K)


def test_split_idempotent_rejects_non_idempotent():
    C = random_acyclic(random.Random(0), 1, 2)
    e = {(c,): IntMatrix.identity(C.rank(c)).scale(2) for c in range(C.length() + 1)}
    with pytest.raises(NotIdempotent):
        split_chain_idempotent(e, C)


@pytest.mark.parametrize("seed", range(5))
def test_split_mono(seed):
    i, P, Q = mono_case(random.Random(seed))
    s = split_acyclic_mono(i, P, Q)
    for (c,), m in i.items():
        if m.cols:
            assert s[(c,)] @ m == IntMatrix.identity(m.cols)


def test_split_mono_rejects_non_mono():
    P = ChainComplex({0: 1, 1: 1}, {1: ONE})
    i = {(0,): M([[2]]), (1,): M([[2]])}
    with pytest.raises(NotMono):
        split_acyclic_mono(i, P, P)


def test_nonsplit_example():
    ex = nonsplit_example()
    assert check_ses(ex.ses())
    assert is_acyclic(ex.top) and is_acyclic(ex.bottom) and is_acyclic(ex.kernel)
    assert binary_nonsplit_check()
    assert binary_nonsplit_check(rank=2)
    # the diagonal version does split
    assert not binary_nonsplit_check("diagonal")
    assert find_binary_section(nonsplit_example("diagonal").projection, nonsplit_example("diagonal").top,
                               nonsplit_example("diagonal").bottom) is not None
    # each single differential splits on its own
    top = ex.top.top()
    K = ex.kernel.top()
    s = split_acyclic_mono(ex.inclusion, K, top)
    assert s[(1,)] @ ex.inclusion[(1,)] == IntMatrix.identity(1)


@pytest.mark.parametrize("direction", [0, 1])
def test_shift_witness_dimension_two(direction):
    from lambdaops.complexes import external_tensor
    from lambdaops.randomgen import random_binary_acyclic

    rng = random.Random(2)
    X = external_tensor(random_binary_acyclic(rng, 1, 2), random_binary_acyclic(rng, 1, 1))
    W = shift_witness(X, 1, direction)
    assert W.replay()
    assert replay_witness(W.to_json()).ok
    assert W.target == KClassExpr({object_id(shift(X, 1, direction)): 1, object_id(X): 1})
