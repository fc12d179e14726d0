"""The Schur algebra of symmetric tensors of ``n x n`` matrices and its modules ``F(Z^n)``.

Basis elements of ``Γ^d Mat(n, Z)`` are orbit sums of ``E_{i_1} ⊗ ... ⊗ E_{i_d}``
under permutation of tensor factors, indexed by sorted tuples of matrix-unit
indices (``E_{ab}`` has index ``a*n + b``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .functors import (
    Arg,
    Atom,
    Compose,
    DirectSum,
    FunctorSpec,
    TensorProduct,
    Zero,
    _distinct_perms,
    apply_column,
    basis,
    num_args,
)
from .linalg import IntMatrix, rank
from .symfunc import Poly, char_functor

__all__ = [
    "DegreeMismatch",
    "SchurAlgebra",
    "SchurAlgebraElement",
    "SchurModule",
    "schur_algebra",
    "gamma_of_matrix",
    "homogeneous_degree",
    "truncate_to_schur_module",
]


class DegreeMismatch(ValueError):
    pass


def _multisets(m: int, d: int, start: int = 0):
    if d == 0:
        yield ()
        return
    for i in range(start, m):
        for rest in _multisets(m, d - 1, i):
            yield (i,) + rest


@dataclass
class SchurAlgebraElement:
    algebra: "SchurAlgebra"
    coeffs: dict = field(default_factory=dict)  # basis index -> int

    def __add__(self, other):
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return SchurAlgebraElement(self.algebra, {k: v for k, v in c.items() if v})

    def __mul__(self, other):
        if isinstance(other, int):
            return SchurAlgebraElement(self.algebra, {k: v * other for k, v in self.coeffs.items() if v * other})
        return self.algebra.multiply(self, other)

    __rmul__ = lambda self, c: self * c

    def __eq__(self, other):
        return isinstance(other, SchurAlgebraElement) and self.algebra is other.algebra and self.coeffs == other.coeffs

    def vector(self) -> list:
        return [self.coeffs.get(i, 0) for i in range(self.algebra.rank)]


class SchurAlgebra:
    """Structure constants of ``Γ^d Mat(n, Z)``, computed lazily per basis pair."""

    def __init__(self, n: int, d: int):
        if n < 1 or d < 0:
            raise ValueError("n >= 1 and d >= 0")
        self.n, self.d = n, d
        self.basis = list(_multisets(n * n, d))
        self.index = {m: i for i, m in enumerate(self.basis)}
        self._table: dict = {}
        self._perms = {}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def expected_rank(self) -> int:
        return comb(self.n * self.n + self.d - 1, self.d)

    def element(self, coeffs) -> SchurAlgebraElement:
        if isinstance(coeffs, (list, tuple)):
            coeffs = {i: v for i, v in enumerate(coeffs) if v}
        return SchurAlgebraElement(self, dict(coeffs))

    def basis_element(self, i: int) -> SchurAlgebraElement:
        return SchurAlgebraElement(self, {i: 1})

    def _perm_list(self, i):
        p = self._perms.get(i)
        if p is None:
            p = self._perms[i] = list(_distinct_perms(self.basis[i]))
        return p

    def _mul_unit(self, a: int, b: int):
        n = self.n
        ra, ca = divmod(a, n)
        rb, cb = divmod(b, n)
        return ra * n + cb if ca == rb else None

    def product(self, i: int, j: int) -> dict:
        """``ξ_i ξ_j`` as ``{k: c}``: c counts arrangement pairs whose product is the sorted tuple of ``k``."""
        key = (i, j)
        got = self._table.get(key)
        if got is not None:
            return got
        out: dict = {}
        for u in self._perm_list(i):
            for v in self._perm_list(j):
                w = []
                for a, b in zip(u, v):
                    c = self._mul_unit(a, b)
                    if c is None:
                        break
                    w.append(c)
                else:
                    t = tuple(w)
                    if all(t[k] <= t[k + 1] for k in range(len(t) - 1)):
                        k = self.index[t]
                        out[k] = out.get(k, 0) + 1
        self._table[key] = out
        return out

    def multiply(self, x: SchurAlgebraElement, y: SchurAlgebraElement) -> SchurAlgebraElement:
        out: dict = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                for k, c in self.product(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return SchurAlgebraElement(self, {k: v for k, v in out.items() if v})

    def unit(self) -> SchurAlgebraElement:
        """``Γ^d(I)``: the sum of the orbit sums of diagonal multisets."""
        diag = {a * self.n + a for a in range(self.n)}
        return SchurAlgebraElement(self, {i: 1 for i, m in enumerate(self.basis) if set(m) <= diag})

    def diagonal_idempotents(self) -> dict:
        """Weight -> basis index of the orbit sum of a diagonal multiset."""
        out = {}
        for i, m in enumerate(self.basis):
            if all(a // self.n == a % self.n for a in m):
                w = [0] * self.n
                for a in m:
                    w[a // self.n] += 1
                out[tuple(w)] = i
        return out

    def check_laws(self, samples: int | None = None, seed: int = 0) -> bool:
        """Associativity on basis triples (all, or a seeded sample) and the unit laws."""
        R = range(self.rank)
        if samples is None:
            triples = [(i, j, k) for i in R for j in R for k in R]
        else:
            rng = random.Random(seed)
            triples = [tuple(rng.randrange(self.rank) for _ in range(3)) for _ in range(samples)]
        b = self.basis_element
        for i, j, k in triples:
            if (b(i) * b(j)) * b(k) != b(i) * (b(j) * b(k)):
                return False
        one = self.unit()
        return all(one * b(i) == b(i) and b(i) * one == b(i) for i in R)


def schur_algebra(n: int, d: int) -> SchurAlgebra:
    return SchurAlgebra(n, d)


def gamma_of_matrix(A: IntMatrix, d: int) -> SchurAlgebraElement:
    """``A^{⊗d}`` in the orbit-sum basis: the coefficient of an orbit is the product of its entries."""
    n = A.rows
    if A.cols != n:
        raise ValueError("square matrix expected")
    S = SchurAlgebra(n, d)
    coeffs = {}
    for i, m in enumerate(S.basis):
        v = 1
        for a in m:
            v *= A[a // n, a % n]
            if not v:
                break
        if v:
            coeffs[i] = v
    return SchurAlgebraElement(S, coeffs)


def homogeneous_degree(F: FunctorSpec):
    """Degree of a homogeneous one-argument functor; ``None`` for zero; raises if inhomogeneous."""
    if isinstance(F, Atom):
        return F.r
    if isinstance(F, Arg):
        return 1
    if isinstance(F, Zero):
        return None
    if isinstance(F, DirectSum):
        a, b = homogeneous_degree(F.left), homogeneous_degree(F.right)
        if a is not None and b is not None and a != b:
            raise DegreeMismatch(f"summands of degrees {a} and {b}")
        return a if a is not None else b
    if isinstance(F, TensorProduct):
        a, b = homogeneous_degree(F.left), homogeneous_degree(F.right)
        return None if a is None or b is None else a + b
    if isinstance(F, Compose):
        a, b = homogeneous_degree(F.outer), homogeneous_degree(F.inner)
        if a is None:
            return None
        if b is None:
            return None if a > 0 else 0
        return a * b
    raise TypeError(F)


@dataclass
class SchurModule:
    """``F(Z^n)`` with one action matrix per basis element of ``Γ^d Mat(n, Z)``."""

    functor: FunctorSpec
    algebra: SchurAlgebra
    keys: list
    actions: list

    @property
    def rank(self) -> int:
        return len(self.keys)

    def act(self, x: SchurAlgebraElement) -> IntMatrix:
        out = IntMatrix.zeros(self.rank, self.rank)
        for i, c in x.coeffs.items():
            out = out + self.actions[i].scale(c)
        return out

    def check_module_axioms(self, samples: int | None = None, seed: int = 0) -> bool:
        R = range(self.algebra.rank)
        if samples is None:
            pairs = [(i, j) for i in R for j in R]
        else:
            rng = random.Random(seed)
            pairs = [(rng.randrange(len(R)), rng.randrange(len(R))) for _ in range(samples)]
        b = self.algebra.basis_element
        for i, j in pairs:
            if self.act(b(i) * b(j)) != self.actions[i] @ self.actions[j]:
                return False
        return self.act(self.algebra.unit()) == IntMatrix.identity(self.rank)

    def weights(self) -> dict:
        """Weight -> multiplicity, read off from the ranks of the diagonal idempotents."""
        out = {}
        for w, i in self.algebra.diagonal_idempotents().items():
            r = rank(self.actions[i])
            if r:
                out[w] = r
        return out

    def weights_match_character(self) -> bool:
        return self.weights() == char_functor(self.functor, self.algebra.n).terms


def _action(F, n, keys, index, mats_units, mult):
    """Coefficient of ``t^mult`` in ``F(Σ_j t_j E_{u_j})``, as an integer matrix."""
    m = len(mats_units)
    target = tuple(mult)
    col_of = {}
    for a in range(n):
        col = {}
        for j, u in enumerate(mats_units):
            r, c = divmod(u, n)
            if c == a:
                e = [0] * m
                e[j] = 1
                col[r] = col.get(r, Poly(m, {})) + Poly(m, {tuple(e): 1})
        col_of[a] = col
    f = lambda a: col_of[a]
    entries = {}
    for jcol, key in enumerate(keys):
        for k, v in apply_column(F, (f,), key).items():
            c = v.terms.get(target, 0) if isinstance(v, Poly) else (v if not any(target) else 0)
            if c:
                entries[(index[k], jcol)] = c
    return IntMatrix.from_sparse(len(keys), len(keys), entries)


def truncate_to_schur_module(F: FunctorSpec, n: int, d: int | None = None) -> SchurModule:
    """Action of ``Γ^d Mat(n, Z)`` on ``F(Z^n)`` by polarization.

    The orbit sum of a multiset with distinct matrix units ``E_{u_j}`` of
    multiplicities ``m_j`` acts as the ``t^m`` coefficient of ``F(Σ t_j E_{u_j})``.
    """
    if num_args(F) != 1:
        raise ValueError("one-argument functor expected")
    deg = homogeneous_degree(F)
    if deg is None:
        deg = d if d is not None else 0
    if d is not None and d != deg:
        raise DegreeMismatch(f"functor has degree {deg}, asked for {d}")
    if n < deg:
        raise ValueError(f"need n >= d (n={n}, d={deg})")
    S = SchurAlgebra(n, deg)
    keys = basis(F, n)
    index = {k: i for i, k in enumerate(keys)}
    actions = []
    for m in S.basis:
        units = sorted(set(m))
        mult = [m.count(u) for u in units]
        actions.append(_action(F, n, keys, index, units, mult))
    return SchurModule(F, S, keys, actions)
