"""Dense Dold–Kan machinery: the simplex category, truncated simplicial modules,
the functor Γ, and the normalized Moore complex.

This is the literal (and slow) construction.  The sparse engine in
:mod:`lambdaops.engine` computes the same normalized complexes without ever
building the full simplicial modules; this module is its reference oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .complexes import ChainComplex
from .functors import FunctorSpec, apply_to_hom, basis
from .linalg import IntMatrix, NotASummand, snf

__all__ = [
    "MonotoneMap",
    "monotone_surjections",
    "epi_monic_factor",
    "coface",
    "codegeneracy",
    "SimplicialModule",
    "gamma",
    "gamma_rank",
    "associated_chain",
    "degenerate_subcomplex",
    "normalized_moore",
    "NormalizedMoore",
    "apply_functor_simplicial",
    "moore_sign",
    "dold_kan_iso",
]


@dataclass(frozen=True)
class MonotoneMap:
    """Order-preserving map ``[m] -> [n]`` given by its value list."""

    values: tuple
    target: int

    def __post_init__(self):
        v = tuple(self.values)
        object.__setattr__(self, "values", v)
        if any(b < a for a, b in zip(v, v[1:])):
            raise ValueError(f"{v} is not order-preserving")
        if v and (v[0] < 0 or v[-1] > self.target):
            raise ValueError(f"{v} leaves [0, {self.target}]")

    @property
    def source(self) -> int:
        return len(self.values) - 1

    def __call__(self, k: int) -> int:
        return self.values[k]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return MonotoneMap(tuple(self.values[x] for x in other.values), self.target)

    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target + 1))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def jumps(self) -> tuple:
        """For a surjection: the positions ``k`` with ``η(k+1) = η(k) + 1``."""
        return tuple(k for k in range(self.source) if self.values[k + 1] != self.values[k])

    @classmethod
    def identity(cls, n: int) -> "MonotoneMap":
        return cls(tuple(range(n + 1)), n)

    @classmethod
    def from_jumps(cls, n: int, J) -> "MonotoneMap":
        J = set(J)
        vals, v = [0], 0
        for k in range(n):
            if k in J:
                v += 1
            vals.append(v)
        return cls(tuple(vals), len(J))


def coface(n: int, i: int) -> MonotoneMap:
    """``δ^i : [n-1] -> [n]`` skipping ``i``."""
    return MonotoneMap(tuple(k for k in range(n + 1) if k != i), n)


def codegeneracy(n: int, j: int) -> MonotoneMap:
    """``σ^j : [n+1] -> [n]`` hitting ``j`` twice."""
    return MonotoneMap(tuple(k if k <= j else k - 1 for k in range(n + 2)), n)


def monotone_surjections(n: int, p: int) -> list:
    """All surjections ``[n] ->> [p]``, sorted by value list; there are C(n, p) of them."""
    if p > n or p < 0:
        return []
    maps = [MonotoneMap.from_jumps(n, J) for J in itertools.combinations(range(n), p)]
    return sorted(maps, key=lambda m: m.values)


def epi_monic_factor(alpha: MonotoneMap):
    """``alpha = ε ∘ η`` with ``η`` surjective onto ``[q]`` and ``ε`` injective."""
    image = sorted(set(alpha.values))
    pos = {v: k for k, v in enumerate(image)}
    eta = MonotoneMap(tuple(pos[v] for v in alpha.values), len(image) - 1)
    eps = MonotoneMap(tuple(image), alpha.target)
    return eta, eps


@dataclass
class SimplicialModule:
    """Simplicial free module truncated at level ``M``.

    ``faces[m][i]``: ``A_m -> A_{m-1}``; ``degeneracies[m][j]``: ``A_m -> A_{m+1}`` (for m < M).
    """

    level: int
    ranks: list
    faces: dict
    degeneracies: dict
    labels: list | None = None

    def face(self, m: int, i: int) -> IntMatrix:
        return self.faces[m][i]

    def degeneracy(self, m: int, j: int) -> IntMatrix:
        return self.degeneracies[m][j]

    def identity_violations(self) -> list:
        """Simplicial identities, checked wherever both sides exist."""
        bad = []
        M = self.level
        d, s = self.faces, self.degeneracies
        for m in range(2, M + 1):
            for j in range(m + 1):
                for i in range(j):
                    if d[m - 1][i] @ d[m][j] != d[m - 1][j - 1] @ d[m][i]:
                        bad.append(("d_i d_j = d_{j-1} d_i", m, i, j))
        for m in range(0, M):
            for j in range(m + 1):
                for i in range(m + 2):
                    lhs = d[m + 1][i] @ s[m][j]
                    if i < j:
                        rhs = s[m - 1][j - 1] @ d[m][i]
                    elif i in (j, j + 1):
                        rhs = IntMatrix.identity(self.ranks[m])
                    else:
                        rhs = s[m - 1][j] @ d[m][i - 1]
                    if lhs != rhs:
                        bad.append(("d_i s_j", m, i, j))
        for m in range(0, M - 1):
            for j in range(m + 1):
                for i in range(j + 1):
                    if s[m + 1][i] @ s[m][j] != s[m + 1][j + 1] @ s[m][i]:
                        bad.append(("s_i s_j = s_{j+1} s_i", m, i, j))
        return bad


def gamma_rank(C: ChainComplex, n: int) -> int:
    return sum(comb(n, p) * C.rank(p) for p in range(n + 1))


def _gamma_labels(C: ChainComplex, m: int) -> list:
    out = []
    for p in range(m + 1):
        if C.rank(p) == 0:
            continue
        for eta in monotone_surjections(m, p):
            for b in range(C.rank(p)):
                out.append((p, eta.values, b))
    return out


def _gamma_map(C: ChainComplex, theta: MonotoneMap, src_labels, tgt_labels) -> IntMatrix:
    """Γ(C)(θ): Γ_m -> Γ_k for θ: [k] -> [m] by the three-case rule."""
    index = {lab: i for i, lab in enumerate(tgt_labels)}
    entries = {}
    for col, (p, eta_vals, b) in enumerate(src_labels):
        eta = MonotoneMap(eta_vals, p)
        eta2, eps = epi_monic_factor(eta.compose(theta))
        q = eta2.target
        if q == p:
            entries[(index[(p, eta2.values, b)], col)] = 1
        elif q == p - 1 and eps.values == tuple(range(p)):
            dcol = C.differential(p).sparse_columns()[b]
            for c, v in dcol.items():
                entries[(index[(q, eta2.values, c)], col)] = v
    return IntMatrix.from_sparse(len(tgt_labels), len(src_labels), entries)


def gamma(C: ChainComplex, M: int) -> SimplicialModule:
    """Γ(C) truncated at level M; bases labelled ``(p, η values, basis index)``."""
    labels = [_gamma_labels(C, m) for m in range(M + 1)]
    faces, degens = {}, {}
    for m in range(1, M + 1):
        faces[m] = [_gamma_map(C, coface(m, i), labels[m], labels[m - 1]) for i in range(m + 1)]
    for m in range(M):
        degens[m] = [_gamma_map(C, codegeneracy(m, j), labels[m], labels[m + 1]) for j in range(m + 1)]
    return SimplicialModule(M, [len(l) for l in labels], faces, degens, labels)


def apply_functor_simplicial(F: FunctorSpec, A: SimplicialModule) -> SimplicialModule:
    """Post-compose with ``F`` objectwise and on every structure map."""
    ranks = [len(basis(F, r)) for r in A.ranks]
    faces = {m: [apply_to_hom(F, f) for f in fs] for m, fs in A.faces.items()}
    degens = {m: [apply_to_hom(F, s) for s in ss] for m, ss in A.degeneracies.items()}
    labels = [basis(F, list(A.labels[m])) for m in range(A.level + 1)] if A.labels else None
    return SimplicialModule(A.level, ranks, faces, degens, labels)


def associated_chain(A: SimplicialModule) -> ChainComplex:
    diffs = {}
    for m in range(1, A.level + 1):
        tot = None
        for i, f in enumerate(A.faces[m]):
            term = f if i % 2 == 0 else -f
            tot = term if tot is None else tot + term
        diffs[m] = tot
    return ChainComplex(dict(enumerate(A.ranks)), diffs)


def _is_signed_coordinate(col: dict) -> bool:
    return len(col) == 1 and abs(next(iter(col.values()))) == 1


def degenerate_subcomplex(A: SimplicialModule) -> dict:
    """``{m: (inclusion matrix of D_m, coordinate_positions or None)}``.

    When every degeneracy column is a signed coordinate vector, ``D_m`` is the
    span of those coordinates and the positions are returned; otherwise a
    basis comes from the Smith form (``NotASummand`` if D_m does not split).
    """
    out = {}
    for m in range(A.level + 1):
        n = A.ranks[m]
        if m == 0:
            out[m] = (IntMatrix.zeros(n, 0), [])
            continue
        gens = IntMatrix.hstack([A.degeneracies[m - 1][j] for j in range(m)], n)
        cols = gens.sparse_columns()
        if all(_is_signed_coordinate(c) or not c for c in cols):
            pos = sorted({next(iter(c)) for c in cols if c})
            inc = IntMatrix.from_sparse(n, len(pos), {(r, k): 1 for k, r in enumerate(pos)})
            out[m] = (inc, pos)
            continue
        d = snf(gens)
        if any(x != 1 for x in d.diagonal):
            raise NotASummand(f"degenerate submodule in degree {m} does not split")
        out[m] = (d.U.submatrix(range(n), range(d.rank)), None)
    return out


@dataclass
class NormalizedMoore:
    """``N(A)`` realized as a complement of the degenerate part.

    ``projections[m]``: ``A_m -> N_m`` (kills D_m); ``sections[m]``: ``N_m -> A_m``.
    """

    complex: ChainComplex
    projections: dict
    sections: dict
    degenerate: dict = field(repr=False)


def moore_sign(m: int) -> int:
    """Sign ``(-1)^{m(m+1)/2}`` identifying N(Γ(C)) with C."""
    return -1 if (m * (m + 1) // 2) % 2 else 1


def normalized_moore(A: SimplicialModule, convention: str = "alternating") -> NormalizedMoore:
    """Normalized Moore complex on the complement of D.

    ``convention="alternating"`` uses ``Σ (-1)^i δ_i``; ``"top"`` uses
    ``Σ (-1)^{m-i} δ_i`` (isomorphic via :func:`moore_sign`).
    """
    if convention not in ("alternating", "top"):
        raise ValueError(f"unknown convention {convention!r}")
    CA = associated_chain(A)
    D = degenerate_subcomplex(A)
    proj, sect = {}, {}
    for m in range(A.level + 1):
        n = A.ranks[m]
        inc, pos = D[m]
        if pos is not None:
            keep = [i for i in range(n) if i not in set(pos)]
            proj[m] = IntMatrix.from_sparse(len(keep), n, {(k, i): 1 for k, i in enumerate(keep)})
            sect[m] = proj[m].T
        else:
            full = _complete_basis(inc)
            r = inc.cols
            proj[m] = _unimodular_inverse(full).submatrix(range(r, n), range(n))
            sect[m] = full.submatrix(range(n), range(r, n))
    diffs = {}
    for m in range(1, A.level + 1):
        dm = proj[m - 1] @ CA.differential(m) @ sect[m]
        # D is a subcomplex: the induced differential must kill it
        if not (proj[m - 1] @ CA.differential(m) @ D[m][0]).is_zero():
            raise AssertionError("degenerate part is not a subcomplex")
        diffs[m] = dm.scale(-1) if (convention == "top" and m % 2) else dm
    N = ChainComplex({m: proj[m].rows for m in range(A.level + 1)}, diffs)
    return NormalizedMoore(N, proj, sect, D)


def dold_kan_iso(C: ChainComplex, M: int | None = None, convention: str = "top"):
    """``(N(Γ(C)), {m: iso_m})`` with ``iso_m: C_m -> N_m`` an explicit chain isomorphism.

    ``iso_m`` includes ``C_m`` as the summand labelled by the identity
    surjection and projects onto the normalized part; under the alternating
    convention it is twisted by :func:`moore_sign`.
    """
    if M is None:
        M = C.length() + 1
    A = gamma(C, M)
    NM = normalized_moore(A, convention)
    iso = {}
    for m in range(M + 1):
        r = C.rank(m)
        index = {lab: i for i, lab in enumerate(A.labels[m])}
        ident = tuple(range(m + 1))
        inc = IntMatrix.from_sparse(A.ranks[m], r, {(index[(m, ident, b)], b): 1 for b in range(r)})
        f = NM.projections[m] @ inc
        iso[m] = f.scale(moore_sign(m)) if convention == "alternating" else f
    N = NM.complex
    for m in range(1, M + 1):
        if iso[m - 1] @ C.differential(m).to_dense() != N.differential(m).to_dense() @ iso[m]:
            raise AssertionError(f"Dold-Kan comparison is not a chain map in degree {m}")
    return N, iso


def _complete_basis(inc: IntMatrix) -> IntMatrix:
    """Unimodular matrix whose first columns are ``inc`` (a split inclusion)."""
    n, r = inc.shape
    d = snf(inc)  # left @ inc @ right = [I;0]
    Uf = d.U  # U = left^-1; inc = U [I;0] V -> U[:, :r] = inc @ right
    # replace the first r columns of U by inc itself: still unimodular since V is
    cols = [inc.column(j) for j in range(r)] + [Uf.column(j) for j in range(r, n)]
    return IntMatrix.from_columns(cols, n)


def _unimodular_inverse(U: IntMatrix) -> IntMatrix:
    from .linalg import inverse

    return inverse(U)
