"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from lambdaops.linalg import IntMatrix
from lambdaops.randomgen import random_acyclic, random_binary_acyclic, random_complex


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, bound=9):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = [[draw(st.integers(-bound, bound)) for _ in range(c)] for _ in range(r)]
    return IntMatrix.from_rows(rows, c)


def seeds():
    return st.integers(0, 2**32 - 1)


@st.composite
def chain_complexes(draw, max_length=3, max_rank=3):
    rng = random.Random(draw(seeds()))
    return random_complex(rng, draw(st.integers(0, max_length)), max_rank)


@st.composite
def acyclic_complexes(draw, max_length=3, max_rank=3):
    rng = random.Random(draw(seeds()))
    return random_acyclic(rng, draw(st.integers(1, max_length)), max_rank)


@st.composite
def binary_acyclic(draw, max_length=2, max_rank=2):
    rng = random.Random(draw(seeds()))
    return random_binary_acyclic(rng, draw(st.integers(1, max_length)), max_rank)


# ---------------------------------------------------------------------------
# seeded constructions with a known answer (shared with the acceptance suite)

from lambdaops.complexes import ChainComplex, direct_sum  # noqa: E402
from lambdaops.linalg import inverse  # noqa: E402
from lambdaops.randomgen import conjugate, random_unimodular  # noqa: E402


def _conjugated_sum(rng, A, B):
    """``A ⊕ B`` rewritten in a random basis ``g``; returns ``(S, g)``."""
    S = direct_sum(A, B)
    L = S.length()
    g = {c: random_unimodular(rng, S.rank(c)) for c in range(L + 1)}
    d = conjugate({c: S.rank(c) for c in g}, {c: S.differential(c).to_dense() for c in range(1, L + 1)}, g)
    return ChainComplex({c: S.rank(c) for c in g}, d), g


def idempotent_case(rng, max_length=3, max_rank=3):
    """Acyclic ``C ⊕ C2`` in a random basis, the idempotent projecting onto ``C2``, and ``C2``."""
    C = random_acyclic(rng, rng.randint(1, max_length), max_rank)
    C2 = random_acyclic(rng, 2, 2)
    S, g = _conjugated_sum(rng, C, C2)
    e = {}
    for c in g:
        E = IntMatrix.diagonal([1] * C.rank(c) + [0] * C2.rank(c))
        e[(c,)] = g[c] @ E @ inverse(g[c])
    return e, S, C2


def mono_case(rng, max_length=3, max_rank=3):
    """Acyclic ``P``, acyclic ``Q = P ⊕ R`` in a random basis, and the inclusion ``i``."""
    P = random_acyclic(rng, rng.randint(1, max_length), max_rank)
    R = random_acyclic(rng, 2, 2)
    Q, g = _conjugated_sum(rng, P, R)
    i = {}
    for c in g:
        a, b = P.rank(c), R.rank(c)
        i[(c,)] = g[c] @ IntMatrix.vstack([IntMatrix.identity(a), IntMatrix.zeros(b, a)], a)
    return i, P, Q
