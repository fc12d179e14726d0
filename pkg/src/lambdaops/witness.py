"""Replayable certificates for relations in the binary-complex presentation of K_n.

A :class:`WitnessChain` stores complexes by content hash, a list of relations
(short exact sequences and diagonal complexes) and a target class.  Each
relation contributes ``[total] - [sub] - [quotient]`` or ``[D]``; the chain
carries integer coefficients expressing the target as a combination of them,
so the target vanishes in K_n.  Coefficients are found by an integer solve
rather than tracked by hand.

Also here: the two splitting constructions for complexes over a split exact
category (kernels of chain idempotents; chain splittings of monomorphisms of
acyclic complexes, built splice by splice) and the binary epimorphism that
admits no splitting.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Union

from .complexes import (
    BinaryComplex,
    BinaryMulticomplex,
    ChainComplex,
    Multicomplex,
    complex_from_json,
    complex_to_json,
    cone,
    is_acyclic,
    restrict,
    shift,
)
from .derived import DimensionMismatch, TENSOR, simplicial_tensor_n
from .engine import nfg
from .exact import (
    CheckResult,
    DiagonalWitness,
    SesWitness,
    check_diagonal,
    check_ses,
    coordinate_ses,
)
from .linalg import (
    IntMatrix,
    NoIntegerSolution,
    NotASummand,
    dense,
    kernel_basis,
    snf,
    solve,
    split_summand,
)

__all__ = [
    "RelationWitness",
    "SesWitness",
    "DiagonalWitness",
    "KClassExpr",
    "WitnessChain",
    "NotAcyclic",
    "NotIdempotent",
    "NotMono",
    "check_ses",
    "check_diagonal",
    "object_id",
    "build_chain",
    "shift_witness",
    "product_vanishing_witness",
    "split_chain_idempotent",
    "split_acyclic_mono",
    "nonsplit_example",
    "binary_nonsplit_check",
    "find_binary_section",
]

RelationWitness = Union[SesWitness, DiagonalWitness]


class NotAcyclic(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


class NotMono(ValueError):
    pass


def object_id(X) -> str:
    blob = json.dumps(complex_to_json(X), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


class KClassExpr(dict):
    """Formal integer combination ``{object id: coefficient}`` (zero terms dropped)."""

    def add(self, oid: str, c: int) -> "KClassExpr":
        v = self.get(oid, 0) + c
        if v:
            self[oid] = v
        else:
            self.pop(oid, None)
        return self

    def __add__(self, other):
        out = KClassExpr(self)
        for k, v in other.items():
            out.add(k, v)
        return out

    def scaled(self, c: int) -> "KClassExpr":
        return KClassExpr({k: c * v for k, v in self.items() if c * v})


def relation_class(rel: RelationWitness) -> KClassExpr:
    e = KClassExpr()
    if isinstance(rel, SesWitness):
        e.add(object_id(rel.total), 1)
        e.add(object_id(rel.sub), -1)
        e.add(object_id(rel.quotient), -1)
    else:
        e.add(object_id(rel.complex), 1)
    return e


@dataclass
class WitnessChain:
    level: int
    relations: list
    target: KClassExpr
    coefficients: list
    objects: dict = field(repr=False)  # id -> complex
    description: str = ""

    def replay(self, require_acyclic: bool = True) -> CheckResult:
        """Re-check every relation, acyclicity of every object, and the ledger."""
        for oid, X in self.objects.items():
            if require_acyclic and not is_acyclic(X):
                return CheckResult(False, None, f"object {oid} is not acyclic")
        for k, rel in enumerate(self.relations):
            r = check_ses(rel) if isinstance(rel, SesWitness) else check_diagonal(rel)
            if not r:
                return CheckResult(False, r.cell, f"relation {k}: {r.reason}")
        residual = KClassExpr(self.target)
        for c, rel in zip(self.coefficients, self.relations):
            residual = residual + relation_class(rel).scaled(-c)
        if residual:
            return CheckResult(False, None, f"ledger does not close: residual {dict(residual)}")
        return CheckResult(True)

    def to_json(self) -> dict:
        rels = []
        for rel, c in zip(self.relations, self.coefficients):
            if isinstance(rel, SesWitness):
                rels.append(
                    {
                        "kind": "ses",
                        "level": rel.level,
                        "label": rel.label,
                        "coefficient": c,
                        "objects": {
                            "sub": object_id(rel.sub),
                            "total": object_id(rel.total),
                            "quotient": object_id(rel.quotient),
                        },
                        "maps": {
                            "inclusion": {_ck(cell): dense(m).to_json() for cell, m in sorted(rel.inclusion.items())},
                            "projection": {_ck(cell): dense(m).to_json() for cell, m in sorted(rel.projection.items())},
                        },
                    }
                )
            else:
                rels.append(
                    {
                        "kind": "diagonal",
                        "level": rel.level,
                        "label": rel.label,
                        "coefficient": c,
                        "objects": {"complex": object_id(rel.complex)},
                        "direction": rel.direction + 1,
                    }
                )
        return {
            "format": "k-relation-witness",
            "version": 1,
            "level": self.level,
            "description": self.description,
            "objects": {oid: complex_to_json(X) for oid, X in sorted(self.objects.items())},
            "target": dict(sorted(self.target.items())),
            "relations": rels,
        }

    @classmethod
    def from_json(cls, obj) -> "WitnessChain":
        objects = {oid: complex_from_json(o) for oid, o in obj["objects"].items()}
        relations, coeffs = [], []
        for r in obj["relations"]:
            coeffs.append(int(r["coefficient"]))
            if r["kind"] == "ses":
                o = r["objects"]
                m = r["maps"]
                relations.append(
                    SesWitness(
                        objects[o["sub"]],
                        objects[o["total"]],
                        objects[o["quotient"]],
                        {_pc(k): IntMatrix.from_json(v) for k, v in m["inclusion"].items()},
                        {_pc(k): IntMatrix.from_json(v) for k, v in m["projection"].items()},
                        r.get("label", ""),
                    )
                )
            elif r["kind"] == "diagonal":
                relations.append(DiagonalWitness(objects[r["objects"]["complex"]], int(r["direction"]) - 1, r.get("label", "")))
            else:
                raise ValueError(f"unknown relation kind {r['kind']!r}")
        return cls(int(obj["level"]), relations, KClassExpr({k: int(v) for k, v in obj["target"].items()}), coeffs, objects, obj.get("description", ""))


def _ck(cell) -> str:
    return ",".join(str(x) for x in cell)


def _pc(s: str) -> tuple:
    return tuple(int(x) for x in s.split(","))


def build_chain(relations: list, target_terms, description: str = "") -> WitnessChain:
    """Collect objects, then solve for integer coefficients with target = Σ c_R·[R]."""
    objects = {}

    def reg(X):
        oid = object_id(X)
        objects.setdefault(oid, X)
        return oid

    for rel in relations:
        if isinstance(rel, SesWitness):
            reg(rel.sub), reg(rel.total), reg(rel.quotient)
        else:
            reg(rel.complex)
    target = KClassExpr()
    for X, c in target_terms:
        target.add(reg(X), c)
    level = next(iter(objects.values())).dimension if objects else 1
    ids = sorted(objects)
    row = {oid: k for k, oid in enumerate(ids)}
    if not relations:
        if target:
            raise NoIntegerSolution("no relations but a nonzero target")
        return WitnessChain(level, [], target, [], objects, description)
    entries = {}
    for j, rel in enumerate(relations):
        for oid, v in relation_class(rel).items():
            entries[(row[oid], j)] = v
    M = IntMatrix.from_sparse(len(ids), len(relations), entries)
    t = IntMatrix.from_sparse(len(ids), 1, {(row[oid], 0): v for oid, v in target.items()})
    x = solve(M, t)
    coeffs = [x[j, 0] for j in range(len(relations))]
    return WitnessChain(level, relations, target, coeffs, objects, description)


# ---------------------------------------------------------------------------
# shift lemma


def _zero_like(X):
    n = X.dimension
    if isinstance(X, BinaryComplex):
        return BinaryComplex({})
    if isinstance(X, BinaryMulticomplex):
        return BinaryMulticomplex(n, {})
    if isinstance(X, ChainComplex):
        return ChainComplex({})
    return Multicomplex(n, {})


def _cone_positions(X, e, sub_first, sub_second):
    """Positions in cone(X) selected by predicates on the cell degree."""
    keep = {}
    C = cone(X, e)
    for c, r in C.ranks.items():
        a = X.rank(c[:e] + (c[e] - 1,) + c[e + 1:]) if c[e] > 0 else 0
        pos = []
        if sub_first(c[e]):
            pos.extend(range(a))
        if sub_second(c[e]):
            pos.extend(range(a, r))
        keep[c] = pos
    return C, keep


def _shift_once(X, e: int) -> list:
    rels = []
    C, keep = _cone_positions(X, e, lambda t: False, lambda t: True)
    w = coordinate_ses(C, keep, label="cone sequence")
    if w.sub != X or w.quotient != shift(X, 1, e):
        raise AssertionError("cone sequence ends are not N and N[1]")
    rels.append(SesWitness(X, C, shift(X, 1, e), w.inclusion, w.projection, "cone sequence"))
    cur = X
    while not cur.is_zero():
        t = cur.length(e)
        lower = restrict(cur, t - 1, e) if t > 0 else _zero_like(cur)
        C, keep = _cone_positions(cur, e, lambda s, t=t: s <= t, lambda s, t=t: s <= t - 1)
        w = coordinate_ses(C, keep, label=f"truncation at degree {t}")
        sub = cone(lower, e)
        if w.sub != sub:
            raise AssertionError("truncation subobject is not the cone of the truncation")
        rels.append(SesWitness(sub, C, w.quotient, w.inclusion, w.projection, w.label))
        rels.append(DiagonalWitness(w.quotient, e, f"identity between copies of degree {t}"))
        cur = lower
    rels.append(DiagonalWitness(_zero_like(X), e, "zero object"))
    return rels


def shift_witness(N, k: int = 1, direction: int = 0, require_acyclic: bool = True) -> WitnessChain:
    """Certificate for ``[N[k]] = (-1)^k [N]``.

    With ``require_acyclic=False`` the same sequences are produced for any
    bounded binary complex; they are then relations among classes of all
    bounded binary complexes rather than in K_1.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if require_acyclic and not is_acyclic(N):
        raise NotAcyclic("shift_witness needs a bounded acyclic input")
    rels = []
    for j in range(k):
        rels.extend(_shift_once(shift(N, j, direction), direction))
    target = [(shift(N, k, direction), 1), (N, -((-1) ** k))]
    return build_chain(rels, target, f"[N[{k}]] = (-1)^{k} [N] in direction {direction + 1}")


# ---------------------------------------------------------------------------
# product vanishing (level 1)


def _as_binary(X):
    if X.binary:
        return X
    if X.dimension != 1:
        return BinaryMulticomplex(X.dimension, X.ranks, X.d, X.d)
    return BinaryComplex.diagonal(X)


def _tensor_keys(P, Q):
    """Binary ⊗_Δ together with its basis keys (shared by both choices)."""
    X = simplicial_tensor_n(P, Q)
    res = nfg(TENSOR, [P.choice((0,)), Q.choice((0,))])
    return X, res.bases


def _key_ses(sub, sub_keys, total, total_keys, quo, quo_keys, label):
    """Coordinate sequence whose maps match basis keys."""
    inc, proj = {}, {}
    for c, keys in total_keys.items():
        idx = {k: i for i, k in enumerate(keys)}
        sk = sub_keys.get(c, [])
        if sk:
            inc[c] = IntMatrix.from_sparse(len(keys), len(sk), {(idx[k], j): 1 for j, k in enumerate(sk)})
        qk = quo_keys.get(c, [])
        if qk:
            qidx = {k: i for i, k in enumerate(qk)}
            proj[c] = IntMatrix.from_sparse(len(qk), len(keys), {(qidx[k], i): 1 for i, k in enumerate(keys) if k in qidx})
    return SesWitness(sub, total, quo, inc, proj, label)


def _concentrated(rank: int, degree: int):
    return BinaryComplex({degree: rank} if rank else {})


def _identity_pair(rank: int, top: int):
    """``Z^rank = Z^rank`` in degrees top, top-1 (both differentials the identity)."""
    I = IntMatrix.identity(rank)
    return BinaryComplex({top: rank, top - 1: rank}, {top: I}, {top: I})


def _module_tensor(K: IntMatrix, Q):
    """``M ⊗ Q`` for a free module of rank ``K.cols`` (index b·rank Q_c + b')."""
    z = K.cols
    ranks = {c: z * r for c, r in Q.ranks.items()}
    I = IntMatrix.identity(z)
    fam = {}
    for name, f in Q.families().items():
        fam[name] = {c: I.kron(dense(m)) for c, m in f[0].items()}
    return BinaryComplex(ranks, fam["d"], fam.get("d_tilde", fam["d"]))


def _kron_maps(A: IntMatrix, Q, src_ranks=None):
    return {c: A.kron(IntMatrix.identity(r)) for c, r in Q.ranks.items()}


def product_vanishing_witness(P, Q) -> WitnessChain:
    """Certificate for ``[P ⊗_Δ Q] = 0`` in K_1 (both factors bounded acyclic binary complexes)."""
    if P.dimension != Q.dimension:
        raise DimensionMismatch(f"dimensions {P.dimension} and {Q.dimension} differ")
    if P.dimension != 1:
        raise NotImplementedError("product_vanishing_witness is implemented at level 1")
    P, Q = _as_binary(P), _as_binary(Q)
    if not (is_acyclic(P) and is_acyclic(Q)):
        raise NotAcyclic("both factors must be bounded acyclic")
    X, X_keys = _tensor_keys(P, Q)
    if X.is_diagonal():
        return build_chain([DiagonalWitness(X, 0, "diagonal product")], [(X, 1)], "[P ⊗ Q] = 0 (diagonal)")
    rels = []
    zero = BinaryComplex({})
    lp, lq = P.length(), Q.length()
    # (a) filtration of P by degree
    prev, prev_keys = zero, {}
    for j in range(lp + 1):
        Sj, Sj_keys = _tensor_keys(restrict(P, j), Q)
        Tj, Tj_keys = _tensor_keys(_concentrated(P.rank(j), j), Q)
        rels.append(_key_ses(prev, prev_keys, Sj, Sj_keys, Tj, Tj_keys, f"P-filtration step {j}"))
        prev, prev_keys = Sj, Sj_keys
        rels.extend(_shift_to_zero(P.rank(j), j, Q))
    # (d) splice P_j ⊗ Q along the cycles of d_P
    K = {j: kernel_basis(dense(P.diff(0, (j,), "d"))) for j in range(lp + 1)}
    for j in range(lp + 1):
        Pj = _module_tensor(IntMatrix.identity(P.rank(j)), Q)
        Zj = _module_tensor(K[j], Q)
        if j == 0:
            Zprev = zero
            proj = {}
        else:
            q = solve(K[j - 1], dense(P.diff(0, (j,), "d")) @ IntMatrix.identity(P.rank(j)))
            Zprev = _module_tensor(K[j - 1], Q)
            proj = {c: q.kron(IntMatrix.identity(r)) for c, r in Q.ranks.items() if q.rows}
        inc = {c: K[j].kron(IntMatrix.identity(r)) for c, r in Q.ranks.items() if K[j].cols}
        rels.append(SesWitness(Zj, Pj, Zprev, inc, proj, f"splice at degree {j}"))
    rels.append(DiagonalWitness(zero, 0, "zero object"))
    return build_chain(rels, [(X, 1)], "[P ⊗_Δ Q] = 0")


def _shift_to_zero(rank: int, j: int, Q) -> list:
    """Relations giving ``[P_j[j] ⊗_Δ Q] = (-1)^j [P_j ⊗ Q]``."""
    rels = []
    zero = BinaryComplex({})
    if rank == 0:
        return rels
    for m in range(j, 0, -1):
        E = _identity_pair(rank, m)
        EQ, EQ_keys = _tensor_keys(E, Q)
        lowQ, low_keys = _tensor_keys(_concentrated(rank, m - 1), Q)
        highQ, high_keys = _tensor_keys(_concentrated(rank, m), Q)
        rels.append(_key_ses(lowQ, low_keys, EQ, EQ_keys, highQ, high_keys, f"identity pair in degrees {m}, {m - 1}"))
        # E ⊗ Q is filtered by Q with diagonal quotients
        prev, prev_keys = zero, {}
        for i in range(Q.length() + 1):
            Ui, Ui_keys = _tensor_keys(E, restrict(Q, i))
            Qi = BinaryComplex({i: Q.rank(i)} if Q.rank(i) else {})
            Vi, Vi_keys = _tensor_keys(E, Qi)
            rels.append(_key_ses(prev, prev_keys, Ui, Ui_keys, Vi, Vi_keys, f"Q-filtration step {i}"))
            rels.append(DiagonalWitness(Vi, 0, "diagonal ⊗ concentrated"))
            prev, prev_keys = Ui, Ui_keys
    # P_j[0] ⊗_Δ Q is P_j ⊗ Q on the nose
    A0, A0_keys = _tensor_keys(_concentrated(rank, 0), Q)
    PjQ = _module_tensor(IntMatrix.identity(rank), Q)
    inc = {}
    for c, keys in A0_keys.items():
        rq = Q.rank(c)
        inc[c] = IntMatrix.from_sparse(rank * rq, len(keys), {(kp[2] * rq + kq[2], col): 1 for col, (kp, kq) in enumerate(keys)})
    rels.append(SesWitness(A0, PjQ, zero, inc, {}, "degree-0 identification"))
    return rels


# ---------------------------------------------------------------------------
# splitting constructions for complexes


def _chain_degrees(*Xs):
    top = max((X.length() for X in Xs), default=0)
    return range(top + 1)


def split_chain_idempotent(e: dict, C: ChainComplex):
    """Kernel complex of a chain idempotent ``e`` and its inclusion.

    Returns ``(K, inclusion)`` with ``inclusion[c]`` a basis of ``ker e_c``
    and the differential of ``K`` induced from ``C``.
    """
    for c in _chain_degrees(C):
        r = C.rank(c)
        E = dense(e.get((c,), e.get(c, IntMatrix.identity(r).scale(0))))
        if E.shape != (r, r):
            raise ValueError(f"idempotent has shape {E.shape} in degree {c}")
        if E @ E != E:
            raise NotIdempotent(f"e^2 != e in degree {c}")
    E = {c: dense(e.get((c,), e.get(c, IntMatrix.zeros(C.rank(c), C.rank(c))))) for c in _chain_degrees(C)}
    for c in _chain_degrees(C):
        if c > 0 and E[c - 1] @ dense(C.differential(c)) != dense(C.differential(c)) @ E[c]:
            raise ValueError(f"e is not a chain map in degree {c}")
    K = {c: kernel_basis(E[c]) for c in E}
    ranks = {c: K[c].cols for c in K}
    d = {}
    for c in K:
        if c > 0 and K[c].cols and K[c - 1].cols:
            d[c] = solve(K[c - 1], dense(C.differential(c)) @ K[c])
    return ChainComplex(ranks, d), {(c,): K[c] for c in K if K[c].cols}


def _cycle_data(X: ChainComplex, c: int):
    """``(j, q)``: basis of ``Z_c = ker d_c`` and the corestriction ``q: X_c -> Z_{c-1}``."""
    r = X.rank(c)
    dc = dense(X.differential(c))
    j = kernel_basis(dc) if r else IntMatrix.zeros(0, 0)
    if c == 0:
        q = IntMatrix.zeros(0, r)
    else:
        jprev = kernel_basis(dense(X.differential(c - 1))) if X.rank(c - 1) else IntMatrix.zeros(0, 0)
        q = solve(jprev, dc) if jprev.cols else IntMatrix.zeros(0, r)
    return j, q


def split_acyclic_mono(i: dict, P: ChainComplex, Q: ChainComplex, s_fixed: IntMatrix | None = None) -> dict:
    """Chain splitting ``s`` of a degreewise split mono ``i: P -> Q`` of acyclic complexes.

    Built splice by splice from degree 0: with ``0 -> Z_c -> X_c -> Z_{c-1} -> 0``
    the splices of P and Q, ``j_P h_P + t_P q_P = 1`` and ``s''`` the splitting
    already induced on ``Z_{c-1}``, set ``s = j_P h_P s_0 + t_P s'' q_Q`` with
    ``s_0`` any splitting of ``i_c``; the induced ``s'`` on ``Z_c`` solves
    ``j_P s' = s j_Q``.  ``s_fixed`` overrides ``s_0`` in degree 0.
    """
    if not (is_acyclic(P) and is_acyclic(Q)):
        raise NotAcyclic("both complexes must be acyclic")
    I = {c: dense(i.get((c,), i.get(c, IntMatrix.zeros(Q.rank(c), P.rank(c))))) for c in _chain_degrees(P, Q)}
    for c, m in I.items():
        if m.shape != (Q.rank(c), P.rank(c)):
            raise ValueError(f"map has shape {m.shape} in degree {c}")
        if c > 0 and I[c - 1] @ dense(P.differential(c)) != dense(Q.differential(c)) @ m:
            raise ValueError(f"i is not a chain map in degree {c}")
    s, s_cyc = {}, {}
    for c in _chain_degrees(P, Q):
        try:
            s0 = split_summand(I[c]) if I[c].cols else IntMatrix.zeros(0, I[c].rows)
        except NotASummand as exc:
            raise NotMono(f"degree {c}: {exc}") from None
        if c == 0 and s_fixed is not None:
            if dense(s_fixed) @ I[0] != IntMatrix.identity(P.rank(0)):
                raise ValueError("s_fixed does not split i in degree 0")
            s0 = dense(s_fixed)
        jP, qP = _cycle_data(P, c)
        jQ, qQ = _cycle_data(Q, c)
        pr = P.rank(c)
        tP = solve(qP, IntMatrix.identity(qP.rows)) if qP.rows else IntMatrix.zeros(pr, 0)
        hP = solve(jP, IntMatrix.identity(pr) - tP @ qP) if jP.cols else IntMatrix.zeros(0, pr)
        s_prev = s_cyc.get(c - 1, IntMatrix.zeros(qP.rows, qQ.rows))
        sc = jP @ hP @ s0 + tP @ s_prev @ qQ
        s[(c,)] = sc
        s_cyc[c] = solve(jP, sc @ jQ) if jP.cols else IntMatrix.zeros(0, jQ.cols)
    for c in _chain_degrees(P, Q):
        if s[(c,)] @ I[c] != IntMatrix.identity(P.rank(c)):
            raise AssertionError(f"s i != 1 in degree {c}")
        if c > 0 and s[(c - 1,)] @ dense(Q.differential(c)) != dense(P.differential(c)) @ s[(c,)]:
            raise AssertionError(f"s is not a chain map in degree {c}")
    return s


# ---------------------------------------------------------------------------
# a binary epimorphism without a splitting


@dataclass
class BinaryEpi:
    top: BinaryComplex
    bottom: BinaryComplex
    kernel: BinaryComplex
    inclusion: dict
    projection: dict

    def ses(self) -> SesWitness:
        return SesWitness(self.kernel, self.top, self.bottom, self.inclusion, self.projection, "binary epimorphism")


def nonsplit_example(variant: str = "example", rank: int = 1) -> BinaryEpi:
    """``P -> P⊕P -> P`` (d: i1 then p2, d~: i2 then p1) onto ``P ⇉ P`` via 1, p1+p2, 0.

    ``variant="diagonal"`` uses ``d`` for both differentials upstairs and
    downstairs; ``rank=0`` gives the degenerate zero version.
    """
    n = rank
    I = IntMatrix.identity(n)
    Z = IntMatrix.zeros(n, n)
    i1, i2 = IntMatrix.vstack([I, Z], n), IntMatrix.vstack([Z, I], n)
    p1, p2 = IntMatrix.hstack([I, Z], n), IntMatrix.hstack([Z, I], n)
    if variant == "diagonal":
        top = BinaryComplex({2: n, 1: 2 * n, 0: n}, {2: i1, 1: p2}, {2: i1, 1: p2})
    elif variant == "example":
        top = BinaryComplex({2: n, 1: 2 * n, 0: n}, {2: i1, 1: p2}, {2: i2, 1: p1})
    else:
        raise ValueError(f"unknown variant {variant!r}")
    bottom = BinaryComplex({2: n, 1: n}, {2: I}, {2: I})
    proj = {(2,): I, (1,): p1 + p2}
    # kernel: (x, -x) in degree 1 and all of degree 0
    k1 = IntMatrix.vstack([I, -I], n)
    if variant == "diagonal":
        kernel = BinaryComplex({1: n, 0: n}, {1: p2 @ k1}, {1: p2 @ k1})
    else:
        kernel = BinaryComplex({1: n, 0: n}, {1: p2 @ k1}, {1: p1 @ k1})
    inc = {(1,): k1, (0,): I}
    return BinaryEpi(top, bottom, kernel, inc, proj)


def find_binary_section(proj: dict, top, bottom):
    """A degreewise section ``s`` of ``proj`` commuting with both differentials, or None.

    Solves the linear system ``π s = 1``, ``s d_B = d_T s``, ``s d~_B = d~_T s``
    over the integers (unknowns: the entries of every ``s_c``).
    """
    degs = sorted(set(c[0] for c in top.ranks) | set(c[0] for c in bottom.ranks))
    var = {}
    for c in degs:
        for a in range(top.rank(c)):
            for b in range(bottom.rank(c)):
                var[(c, a, b)] = len(var)
    rows, rhs = [], []

    def eq(coeffs: dict, value: int):
        rows.append(coeffs)
        rhs.append(value)

    for c in degs:
        pi = dense(proj.get((c,), IntMatrix.zeros(bottom.rank(c), top.rank(c))))
        for x in range(bottom.rank(c)):
            for b in range(bottom.rank(c)):
                eq({var[(c, a, b)]: pi[x, a] for a in range(top.rank(c)) if pi[x, a]}, int(x == b))
    for name in ("d", "d_tilde"):
        for c in degs:
            if c == 0:
                continue
            dT = dense(top.diff(0, (c,), name))
            dB = dense(bottom.diff(0, (c,), name))
            # (s_{c-1} dB)[a, b] - (dT s_c)[a, b] = 0
            for a in range(top.rank(c - 1)):
                for b in range(bottom.rank(c)):
                    co = {}
                    for m in range(bottom.rank(c - 1)):
                        if dB[m, b]:
                            k = var[(c - 1, a, m)]
                            co[k] = co.get(k, 0) + dB[m, b]
                    for m in range(top.rank(c)):
                        if dT[a, m]:
                            k = var[(c, m, b)]
                            co[k] = co.get(k, 0) - dT[a, m]
                    eq({k: v for k, v in co.items() if v}, 0)
    if not var:
        return {}
    A = IntMatrix.from_sparse(len(rows), len(var), {(i, k): v for i, r in enumerate(rows) for k, v in r.items()})
    B = IntMatrix.from_sparse(len(rows), 1, {(i, 0): v for i, v in enumerate(rhs) if v})
    try:
        x = solve(A, B)
    except NoIntegerSolution:
        return None
    s = {}
    for c in degs:
        s[(c,)] = IntMatrix.from_sparse(
            top.rank(c), bottom.rank(c), {(a, b): x[var[(c, a, b)], 0] for a in range(top.rank(c)) for b in range(bottom.rank(c))}
        )
    return s


def binary_nonsplit_check(variant: str = "example", rank: int = 1) -> bool:
    """True when the binary epimorphism admits no splitting compatible with both differentials."""
    ex = nonsplit_example(variant, rank)
    if not check_ses(ex.ses()):
        raise AssertionError("the example is not a short exact sequence")
    return find_binary_section(ex.projection, ex.top, ex.bottom) is None
