"""Derived functors of non-additive functors on (binary) multicomplexes.

``F_1 = N F Γ`` on chain complexes, ``F_n`` on n-dimensional multicomplexes,
the binary extension, simplicial tensor products, the exterior-power
filtration attached to a short exact sequence, and the tensor-square
counterexample over finitely generated abelian groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .complexes import (
    BinaryComplex,
    BinaryMulticomplex,
    ChainComplex,
    Multicomplex,
    _rebuild,
    homology_all,
    is_acyclic,
    tensor_bicomplex,
    tot,
)
from .engine import EngineResult, nfg, nfg_map
from .exact import SesWitness, check_ses, map_commutes
from .functors import (
    Arg,
    Compose,
    FunctorSpec,
    Lambda,
    TensorProduct,
    preserves_zero,
    structural_degree,
)
from .linalg import FgAbGroup, IntMatrix, SparseIntMatrix, cokernel, dense, image_basis, inverse, kernel_basis, solve

__all__ = [
    "GradedMismatch",
    "DimensionMismatch",
    "NotExact",
    "DerivedFunctorRequest",
    "induced_F1",
    "induced_Fn",
    "binary_Fn",
    "binary_lambda",
    "derive",
    "simplicial_tensor",
    "simplicial_tensor_n",
    "tensor_rank_by_injections",
    "WedgeFiltration",
    "wedge_filtration",
    "counterexample_h2",
    "counterexample_homology",
    "presented_homology",
]

TENSOR = TensorProduct(Arg(0), Arg(1))


class GradedMismatch(AssertionError):
    """Choice-multicomplexes of a binary input produced different graded objects."""


class DimensionMismatch(ValueError):
    pass


class NotExact(ValueError):
    pass


def _require_zero_preserving(F: FunctorSpec):
    if not preserves_zero(F):
        raise ValueError(f"{F} has a constant part; F(0) = 0 is required")


def induced_F1(F: FunctorSpec, C: ChainComplex) -> ChainComplex:
    """``N F Γ (C)``, computed up to degree ``deg(F)·length(C)`` with a zero guard above."""
    if C.dimension != 1 or C.binary:
        raise TypeError("induced_F1 takes a (non-binary) chain complex")
    _require_zero_preserving(F)
    return nfg(F, C).complex


def _default_order(n):
    return tuple(reversed(range(n)))


def induced_Fn(F: FunctorSpec, X: Multicomplex, order=None) -> Multicomplex:
    """``F_n`` on an n-dimensional multicomplex.

    Γ and N act in different directions independently, so peeling one
    direction at a time agrees with applying the multisimplicial Γ and N in
    one pass; ``order`` (default descending) fixes the peeling order and with
    it the basis ordering, never the graded object.
    """
    if X.binary:
        raise TypeError("use binary_Fn for binary multicomplexes")
    _require_zero_preserving(F)
    order = _default_order(X.dimension) if order is None else tuple(order)
    return nfg(F, X, order=order).complex


def _assemble_binary(n, results: dict):
    """Binary multicomplex from per-choice outputs; direction k takes its family from the choice."""
    masks = sorted(results)
    base = results[masks[0]]
    for m in masks[1:]:
        if results[m].ranks != base.ranks:
            raise GradedMismatch(f"choice {m} has ranks differing from choice {masks[0]}")
    d_fam, t_fam = [None] * n, [None] * n
    for k in range(n):
        d_fam[k] = results[(0,) * n].d[k]
        t_fam[k] = results[(1,) * n].d[k]
    # every choice must agree with the assembled families direction by direction
    for mask, Y in results.items():
        for k in range(n):
            want = t_fam[k] if mask[k] else d_fam[k]
            if Y.d[k] != want:
                raise GradedMismatch(f"choice {mask} disagrees in direction {k + 1}")
    if n == 1:
        return BinaryComplex(base.ranks, d_fam[0], t_fam[0])
    return BinaryMulticomplex(n, base.ranks, d_fam, t_fam)


def binary_Fn(F: FunctorSpec, B: BinaryMulticomplex, order=None, all_choices: bool = True):
    """``F_n`` applied to each choice-multicomplex and reassembled.

    The output basis depends only on the graded object, so the choices share
    one graded object.  With ``all_choices`` every one of the 2^n choices is
    computed and cross-checked; otherwise only the all-``d`` and all-``d~``
    choices are (they already determine every family).
    """
    if not B.binary:
        raise TypeError("binary_Fn takes a binary multicomplex")
    _require_zero_preserving(F)
    n = B.dimension
    order = _default_order(n) if order is None else tuple(order)
    masks = list(itertools.product((0, 1), repeat=n)) if all_choices else [(0,) * n, (1,) * n]
    results = {}
    bases = None
    for mask in masks:
        res = nfg(F, B.choice(mask), order=order)
        if bases is None:
            bases = res.bases
        elif res.bases != bases:
            raise GradedMismatch(f"choice {mask} produced different basis keys")
        results[mask] = res.complex
    return _assemble_binary(n, results)


def binary_lambda(r: int, n: int, B: BinaryMulticomplex, order=None) -> BinaryMulticomplex:
    """``Λ^r_n`` of a bounded acyclic binary multicomplex of dimension ``n``."""
    if B.dimension != n:
        raise DimensionMismatch(f"expected dimension {n}, got {B.dimension}")
    return binary_Fn(Lambda(r), B, order=order)


@dataclass
class DerivedFunctorRequest:
    spec: FunctorSpec
    level: int
    target: Multicomplex
    order: tuple | None = None

    def __post_init__(self):
        if self.target.dimension != self.level:
            raise DimensionMismatch(f"target has dimension {self.target.dimension}, level is {self.level}")
        _require_zero_preserving(self.spec)
        if self.order is not None and sorted(self.order) != list(range(self.level)):
            raise ValueError(f"order {self.order} is not a permutation of the directions")


def derive(req: DerivedFunctorRequest):
    X = req.target
    if X.binary:
        return binary_Fn(req.spec, X, order=req.order)
    if X.dimension == 1:
        return induced_F1(req.spec, X)
    return induced_Fn(req.spec, X, order=req.order)


def length_bound(F: FunctorSpec, X: Multicomplex) -> int:
    return structural_degree(F) * X.length()


# ---------------------------------------------------------------------------
# simplicial tensor products


def simplicial_tensor(P: ChainComplex, Q: ChainComplex) -> ChainComplex:
    """``N diag(Γ P ⊗ Γ Q)``."""
    if P.binary or Q.binary:
        return simplicial_tensor_n(P, Q)
    if P.dimension != 1 or Q.dimension != 1:
        raise DimensionMismatch("simplicial_tensor takes chain complexes")
    return nfg(TENSOR, [P, Q]).complex


def simplicial_tensor_result(P, Q) -> EngineResult:
    return nfg(TENSOR, [P, Q])


def simplicial_tensor_n(P: Multicomplex, Q: Multicomplex):
    """``⊗_{Δ,n}``; binary inputs are tensored per matched choice and reassembled."""
    if P.dimension != Q.dimension:
        raise DimensionMismatch(f"dimensions {P.dimension} and {Q.dimension} differ")
    n = P.dimension
    if not (P.binary or Q.binary):
        return nfg(TENSOR, [P, Q]).complex
    pick = lambda X, mask: X.choice(mask) if X.binary else X
    results = {}
    keys = None
    for mask in itertools.product((0, 1), repeat=n):
        res = nfg(TENSOR, [pick(P, mask), pick(Q, mask)])
        if keys is None:
            keys = res.bases
        elif res.bases != keys:
            raise GradedMismatch(f"choice {mask} produced different basis keys")
        results[mask] = res.complex
    return _assemble_binary(n, results)


def tensor_rank_by_injections(P: ChainComplex, Q: ChainComplex, m: int) -> int:
    """Rank of ``(P ⊗_Δ Q)_m`` counted through injections ``[m] -> [i] x [j]``.

    Non-degenerate summands of the diagonal correspond to order-preserving
    injections of ``[m]`` into the product poset whose projections are onto;
    each contributes ``rank P_i · rank Q_j``.
    """
    total = 0
    for i in P.degrees():
        for j in Q.degrees():
            if max(i, j) > m or i + j < m:
                continue
            total += _count_injections(m, i, j) * P.rank(i) * Q.rank(j)
    return total


def _count_injections(m: int, i: int, j: int) -> int:
    # walk the chain (0,0) = v_0 < v_1 < ... < v_m = (i, j) one step at a time
    count = 0
    for steps in itertools.product(((1, 0), (0, 1), (1, 1)), repeat=m):
        if sum(s[0] for s in steps) == i and sum(s[1] for s in steps) == j:
            count += 1
    return count


# ---------------------------------------------------------------------------
# exterior-power filtration of a short exact sequence


@dataclass
class WedgeFiltration:
    """``Λ^r(P') = F_0 ⊂ F_1 ⊂ ... ⊂ F_r ≅ Λ^r(P)`` with quotients ``Λ^{r-i}(P') ⊗_Δ Λ^i(P'')``."""

    r: int
    stages: list
    quotients: list
    sequences: list
    adapted_total: Multicomplex
    iso_to_total: dict = field(repr=False)  # cell -> matrix Λ^r(adapted) -> Λ^r(P)
    total: Multicomplex = None


def _section(p: IntMatrix) -> IntMatrix:
    return solve(p, IntMatrix.identity(p.rows))


def _adapted(ses: SesWitness):
    """Basis change ``φ = [i | t]`` per cell, and ``P`` rewritten in that basis."""
    P = ses.total
    n = P.dimension
    phi, phi_inv = {}, {}
    for c, r in P.ranks.items():
        i = dense(ses.inclusion.get(c, IntMatrix.zeros(r, ses.sub.rank(c))))
        p = dense(ses.projection.get(c, IntMatrix.zeros(ses.quotient.rank(c), r)))
        t = _section(p) if p.rows else IntMatrix.zeros(r, 0)
        f = IntMatrix.hstack([i, t], r)
        phi[c] = f
        phi_inv[c] = inverse(f)
    fams = {}
    for name, fam in P.families().items():
        fams[name] = [
            {c: phi_inv[c[:k] + (c[k] - 1,) + c[k + 1:]] @ dense(m) @ phi[c] for c, m in fam[k].items()}
            for k in range(n)
        ]
    return phi, _rebuild(P, P.ranks, fams)


def _choices(X):
    if X.binary:
        return {name: (X.choice((0,) * X.dimension) if name == "d" else X.choice((1,) * X.dimension)) for name in ("d", "d_tilde")}
    return {"d": X}


def _quotient_iso(keys, sub_ranks, r: int, i: int):
    """Map a wedge key with ``i`` leaves from P'' to the split tensor key, with the shuffle sign."""
    left, right, pos_right = [], [], []
    for pos, (p, etas, b) in enumerate(keys):
        a = sub_ranks.get(p, 0)
        if b < a:
            left.append((p, etas, b))
        else:
            right.append((p, etas, b - a))
            pos_right.append(pos)
    # sign of the shuffle that moves the right-hand labels behind the left ones
    inv = 0
    for k, pos in enumerate(pos_right):
        inv += (r - 1 - pos) - (len(pos_right) - 1 - k)
    return (tuple(left), tuple(right)), (-1 if inv % 2 else 1)


def wedge_filtration(r: int, ses: SesWitness) -> WedgeFiltration:
    """Filtration of ``Λ^r`` of the middle term of a degreewise split exact sequence.

    Level 0 (modules) is the case of complexes concentrated in degree 0.
    """
    res = check_ses(ses)
    if not res:
        raise NotExact(str(res))
    P1, P, P2 = ses.sub, ses.total, ses.quotient
    n = P.dimension
    phi, Phat = _adapted(ses)
    sub_ranks = dict(P1.ranks)
    L = Lambda(r)
    hat = {name: nfg(L, X) for name, X in _choices(Phat).items()}
    base = hat["d"]
    for other in hat.values():
        if other.bases != base.bases:
            raise GradedMismatch("filtration bases depend on the differential")
    whole = _assemble_binary(n, {(0,) * n: hat["d"].complex, (1,) * n: hat.get("d_tilde", hat["d"]).complex}) if P.binary else base.complex

    def count_right(key):
        return sum(1 for (p, _, b) in key if b >= sub_ranks.get(p, 0))

    stages, quotients, sequences = [], [], []
    # stage i = coordinates with at most i leaves from P''
    for i in range(r + 1):
        keep = {c: [j for j, key in enumerate(keys) if count_right(key) <= i] for c, keys in base.bases.items()}
        stages.append(_coordinate_sub(whole, keep))
    from .exact import coordinate_ses

    for i in range(r + 1):
        total_i = stages[i]
        keep_prev = {c: [j for j, key in enumerate(keys) if count_right(key) <= i - 1] for c, keys in base.bases.items()}
        # positions inside stage i of the keys kept in stage i-1
        sub_positions = {}
        stage_keys = {c: [key for key in keys if count_right(key) <= i] for c, keys in base.bases.items()}
        for c, keys in stage_keys.items():
            sub_positions[c] = [k for k, key in enumerate(keys) if count_right(key) <= i - 1]
        cs = coordinate_ses(total_i, sub_positions, label=f"filtration step {i}")
        # identify the coordinate quotient with Λ^{r-i}(P') ⊗_Δ Λ^i(P'')
        spec = TensorProduct(Compose(Lambda(r - i), Arg(0)), Compose(Lambda(i), Arg(1)))
        q_res = {}
        pairs_1 = _choices(P1)
        pairs_2 = _choices(P2)
        for name in _choices(P):
            q_res[name] = nfg(spec, [pairs_1.get(name, pairs_1["d"]), pairs_2.get(name, pairs_2["d"])])
        qb = q_res["d"]
        Q = _assemble_binary(n, {(0,) * n: q_res["d"].complex, (1,) * n: q_res.get("d_tilde", qb).complex}) if P.binary else qb.complex
        psi = {}
        for c, keys in stage_keys.items():
            quo_keys = [key for key in keys if count_right(key) == i]
            if not quo_keys:
                continue
            idx = qb.index(c)
            entries = {}
            for col, key in enumerate(quo_keys):
                tk, sgn = _quotient_iso(key, sub_ranks, r, i)
                entries[(idx[tk], col)] = sgn
            psi[c] = IntMatrix.from_sparse(len(idx), len(quo_keys), entries)
        for name in _choices(P):
            bad = map_commutes(psi, cs.quotient, Q, name, name)
            if bad:
                raise AssertionError(f"quotient identification fails at {bad}")
        proj = {c: psi[c] @ dense(m) for c, m in cs.projection.items() if c in psi}
        w = SesWitness(cs.sub, total_i, Q, cs.inclusion, proj, label=f"filtration step {i}")
        quotients.append(Q)
        sequences.append(w)
    # Λ^r of the adapted complex is isomorphic to Λ^r(P) through Λ^r(φ)
    direct = {name: nfg(L, X) for name, X in _choices(P).items()}
    iso = nfg_map(L, phi, base, direct["d"])
    Ptotal = _assemble_binary(n, {(0,) * n: direct["d"].complex, (1,) * n: direct.get("d_tilde", direct["d"]).complex}) if P.binary else direct["d"].complex
    return WedgeFiltration(r, stages, quotients, sequences, whole, iso, Ptotal)


def _coordinate_sub(total, keep):
    from .exact import coordinate_ses

    return coordinate_ses(total, keep).sub


# ---------------------------------------------------------------------------
# homology of complexes of finitely generated abelian groups


@dataclass
class PresentedComplex:
    """Degree i holds ``Z^{gens_i} / im(relations_i)``; ``d_i`` lifts the differential to generators."""

    gens: dict
    relations: dict  # i -> IntMatrix gens_i x rels_i
    d: dict  # i -> IntMatrix gens_{i-1} x gens_i


def presented_homology(C: PresentedComplex) -> dict:
    out = {}
    for n in sorted(C.gens):
        g = C.gens[n]
        if g == 0:
            out[n] = FgAbGroup()
            continue
        dn = C.d.get(n, IntMatrix.zeros(C.gens.get(n - 1, 0), g))
        R_prev = C.relations.get(n - 1, IntMatrix.zeros(C.gens.get(n - 1, 0), 0))
        # x is a cycle iff d x lies in the relations of degree n-1
        M = IntMatrix.hstack([dn, -R_prev], dn.rows)
        K = kernel_basis(M)
        Z = K.submatrix(range(g), range(K.cols))
        B = image_basis(Z)
        if B.cols == 0:
            out[n] = FgAbGroup()
            continue
        d_next = C.d.get(n + 1, IntMatrix.zeros(g, C.gens.get(n + 1, 0)))
        W = IntMatrix.hstack([d_next, C.relations.get(n, IntMatrix.zeros(g, 0))], g)
        out[n] = cokernel(solve(B, W))
    return out


def _tensor_presented(A: PresentedComplex, B: PresentedComplex) -> PresentedComplex:
    """``Tot(A ⊗ B)`` on generators; relations ``R_a ⊗ 1`` and ``1 ⊗ R_b`` (right exactness)."""
    by_deg = {}
    for a in sorted(A.gens):
        for b in sorted(B.gens):
            by_deg.setdefault(a + b, []).append((a, b))
    gens, rels, offs = {}, {}, {}
    for n, pairs in by_deg.items():
        o = 0
        for ab in pairs:
            offs[ab] = o
            o += A.gens[ab[0]] * B.gens[ab[1]]
        gens[n] = o
        blocks = []
        for a, b in pairs:
            ga, gb = A.gens[a], B.gens[b]
            Ra = A.relations.get(a, IntMatrix.zeros(ga, 0))
            Rb = B.relations.get(b, IntMatrix.zeros(gb, 0))
            R = IntMatrix.hstack([Ra.kron(IntMatrix.identity(gb)), IntMatrix.identity(ga).kron(Rb)], ga * gb)
            pad = {}
            for (i, j), v in R.nonzero_entries().items():
                pad[(offs[(a, b)] + i, j)] = v
            blocks.append(IntMatrix.from_sparse(o, R.cols, pad))
        rels[n] = IntMatrix.hstack(blocks, o)
    d = {}
    for n, pairs in by_deg.items():
        if n - 1 not in gens:
            continue
        entries = {}
        for a, b in pairs:
            ga, gb = A.gens[a], B.gens[b]
            col0 = offs[(a, b)]
            if a > 0 and (a - 1, b) in offs:
                m = A.d.get(a, IntMatrix.zeros(A.gens[a - 1], ga)).kron(IntMatrix.identity(gb))
                for (i, j), v in m.nonzero_entries().items():
                    k = (offs[(a - 1, b)] + i, col0 + j)
                    entries[k] = entries.get(k, 0) + v
            if b > 0 and (a, b - 1) in offs:
                m = IntMatrix.identity(ga).kron(B.d.get(b, IntMatrix.zeros(B.gens[b - 1], gb))).scale((-1) ** a)
                for (i, j), v in m.nonzero_entries().items():
                    k = (offs[(a, b - 1)] + i, col0 + j)
                    entries[k] = entries.get(k, 0) + v
        d[n] = IntMatrix.from_sparse(gens[n - 1], gens[n], entries)
    return PresentedComplex(gens, rels, d)


def counterexample_complex() -> PresentedComplex:
    """``Z --2--> Z --> Z/2`` in degrees 2, 1, 0."""
    return PresentedComplex(
        gens={2: 1, 1: 1, 0: 1},
        relations={0: IntMatrix.from_rows([[2]])},
        d={2: IntMatrix.from_rows([[2]]), 1: IntMatrix.from_rows([[1]])},
    )


def counterexample_homology() -> dict:
    C = counterexample_complex()
    return presented_homology(_tensor_presented(C, C))


def counterexample_h2() -> FgAbGroup:
    """``H_2`` of ``Tot(C ⊗ C)`` for the acyclic complex ``Z -2-> Z -> Z/2``."""
    return counterexample_homology()[2]
