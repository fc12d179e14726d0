"""Seeded random complexes for property sweeps and self-tests."""

from __future__ import annotations

import random

from .complexes import BinaryComplex, BinaryMulticomplex, ChainComplex, direct_sum, external_tensor
from .linalg import IntMatrix, inverse

__all__ = [
    "random_unimodular",
    "random_complex",
    "random_acyclic",
    "random_binary_acyclic",
    "random_binary_bicomplex",
    "conjugate",
]


def random_unimodular(rng: random.Random, n: int, steps: int | None = None, bound: int = 2) -> IntMatrix:
    """Product of random elementary operations and signed permutations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return IntMatrix.zeros(0, 0)
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [rows[p] for p in perm]
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-bound, bound)
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    for i in range(n):
        if rng.random() < 0.5:
            rows[i] = [-a for a in rows[i]]
    return IntMatrix.from_rows(rows, n)


def _splice_ranks(rng, length, max_rank):
    """Cycle ranks ``a_0..a_{L-1}`` with ``a_c + a_{c-1} <= max_rank``."""
    a = []
    for c in range(length):
        cap = max_rank - (a[c - 1] if c else 0)
        a.append(rng.randint(1, cap) if cap > 0 else 0)
    return a


def _standard(a, diag):
    """``C_c = Z^{a_c} ⊕ Z^{a_{c-1}}``; d_c sends the second block to the first block of C_{c-1}, scaled by ``diag[c]``."""
    L = len(a)
    ranks = {c: (a[c] if c < L else 0) + (a[c - 1] if c >= 1 else 0) for c in range(L + 1)}
    d = {}
    for c in range(1, L + 1):
        rc, rp = ranks[c], ranks[c - 1]
        top_c = a[c] if c < L else 0
        entries = {}
        for k in range(a[c - 1]):
            entries[(k, top_c + k)] = diag[c][k]
        d[c] = IntMatrix.from_sparse(rp, rc, entries)
    return ranks, d


def conjugate(ranks: dict, d: dict, g: dict) -> dict:
    """``g_{c-1} d_c g_c^{-1}``."""
    ginv = {c: inverse(m) for c, m in g.items()}
    return {c: g[c - 1] @ m @ ginv[c] for c, m in d.items()}


def _gs(rng, ranks):
    return {c: random_unimodular(rng, r) for c, r in ranks.items()}


def random_acyclic(rng: random.Random, length: int = 2, max_rank: int = 3) -> ChainComplex:
    """Bounded acyclic complex of free modules with exactly the given length (if ranks allow)."""
    if length == 0:
        return ChainComplex({})
    a = _splice_ranks(rng, length, max_rank)
    ranks, d = _standard(a, {c: [1] * (a[c - 1]) for c in range(1, length + 1)})
    return ChainComplex(ranks, conjugate(ranks, d, _gs(rng, ranks)))


def random_complex(rng: random.Random, length: int = 2, max_rank: int = 3, values=(0, 1, -1, 2, 3)) -> ChainComplex:
    """Random bounded complex; homology comes from non-unit splice entries."""
    if length == 0:
        return ChainComplex({0: rng.randint(1, max_rank)})
    a = _splice_ranks(rng, length, max_rank)
    ranks, d = _standard(a, {c: [rng.choice(values) for _ in range(a[c - 1])] for c in range(1, length + 1)})
    return ChainComplex(ranks, conjugate(ranks, d, _gs(rng, ranks)))


def random_binary_acyclic(rng: random.Random, length: int = 1, max_rank: int = 2) -> BinaryComplex:
    """Two independent acyclic differentials on one graded object."""
    if length == 0:
        return BinaryComplex({})
    a = _splice_ranks(rng, length, max_rank)
    ranks, d = _standard(a, {c: [1] * a[c - 1] for c in range(1, length + 1)})
    d1 = conjugate(ranks, d, _gs(rng, ranks))
    d2 = conjugate(ranks, d, _gs(rng, ranks))
    return BinaryComplex(ranks, d1, d2)


def random_binary_bicomplex(rng: random.Random, max_rank: int = 2) -> BinaryMulticomplex:
    """Acyclic binary bicomplex: external tensors of binary acyclic complexes, conjugated cellwise."""
    X = external_tensor(random_binary_acyclic(rng, 1, max_rank), random_binary_acyclic(rng, 1, max_rank))
    if rng.random() < 0.5:
        X = direct_sum(X, external_tensor(random_binary_acyclic(rng, 1, 1), random_binary_acyclic(rng, 1, 1)))
    g = {c: random_unimodular(rng, r) for c, r in X.ranks.items()}
    ginv = {c: inverse(m) for c, m in g.items()}
    fams = {}
    for name, fam in X.families().items():
        fams[name] = []
        for k in range(2):
            dk = {}
            for c, m in fam[k].items():
                t = c[:k] + (c[k] - 1,) + c[k + 1:]
                dk[c] = g[t] @ m.to_dense() @ ginv[c]
            fams[name].append(dk)
    return BinaryMulticomplex(2, X.ranks, fams["d"], fams["d_tilde"])
