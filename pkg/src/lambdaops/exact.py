"""Degreewise short exact sequences of (binary) multicomplexes and their checker."""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import BinaryMulticomplex, Multicomplex, _rebuild
from .linalg import IntMatrix, dense, snf

__all__ = [
    "SesWitness",
    "DiagonalWitness",
    "CheckResult",
    "check_ses",
    "check_diagonal",
    "coordinate_ses",
    "map_commutes",
]


@dataclass
class SesWitness:
    """``0 -> sub --inclusion--> total --projection--> quotient -> 0`` cell by cell."""

    sub: Multicomplex
    total: Multicomplex
    quotient: Multicomplex
    inclusion: dict  # cell -> matrix total_c x sub_c
    projection: dict  # cell -> matrix quotient_c x total_c
    label: str = ""

    @property
    def level(self) -> int:
        return self.total.dimension


@dataclass
class DiagonalWitness:
    """``complex`` has ``d = d_tilde`` in ``direction`` (0-based)."""

    complex: Multicomplex
    direction: int = 0
    label: str = ""

    @property
    def level(self) -> int:
        return self.complex.dimension


@dataclass
class CheckResult:
    ok: bool
    cell: tuple | None = None
    reason: str = ""
    details: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"failed at cell {self.cell}: {self.reason}"


def _mat(maps: dict, cell, rows: int, cols: int) -> IntMatrix:
    m = maps.get(cell)
    if m is None:
        return IntMatrix.zeros(rows, cols)
    return dense(m)


def _signed_coordinate(M: IntMatrix) -> bool:
    """Each column one entry ±1, rows distinct."""
    seen = set()
    for col in M.sparse_columns():
        if len(col) != 1:
            return False
        (r, v), = col.items()
        if v not in (1, -1) or r in seen:
            return False
        seen.add(r)
    return True


def _split_injective(M: IntMatrix) -> bool:
    if M.cols == 0:
        return True
    if _signed_coordinate(M):
        return True
    d = snf(M)
    return d.rank == M.cols and all(x == 1 for x in d.diagonal)


def _split_surjective(M: IntMatrix) -> bool:
    if M.rows == 0:
        return True
    if _signed_coordinate(M.T):
        return True
    d = snf(M)
    return d.rank == M.rows and all(x == 1 for x in d.diagonal)


def map_commutes(f: dict, X: Multicomplex, Y: Multicomplex, fx: str, fy: str):
    """First cell where ``f: X -> Y`` fails to commute with family ``fx``/``fy``, or None."""
    n = X.dimension
    cells = set(X.ranks) | set(Y.ranks)
    for c in sorted(cells):
        for k in range(n):
            if c[k] == 0:
                continue
            t = c[:k] + (c[k] - 1,) + c[k + 1:]
            a = _mat(f, t, Y.rank(t), X.rank(t)) @ dense(X.diff(k, c, fx))
            b = dense(Y.diff(k, c, fy)) @ _mat(f, c, Y.rank(c), X.rank(c))
            if a != b:
                return c, k
    return None


def _family_pairs(w: SesWitness):
    names = list(w.total.families())
    for X in (w.sub, w.quotient):
        if set(X.families()) != set(names):
            # a non-binary end of a binary sequence is read as diagonal
            if not X.binary and w.total.binary:
                continue
            return None
    return names


def _fam(X, name):
    return name if name in X.families() else "d"


def check_ses(w: SesWitness) -> CheckResult:
    """Degreewise exactness plus commutation with every differential."""
    A, B, C = w.sub, w.total, w.quotient
    n = B.dimension
    if A.dimension != n or C.dimension != n:
        return CheckResult(False, None, "dimension mismatch")
    names = _family_pairs(w)
    if names is None:
        return CheckResult(False, None, "binary and non-binary terms mixed")
    cells = sorted(set(A.ranks) | set(B.ranks) | set(C.ranks) | set(w.inclusion) | set(w.projection))
    for c in cells:
        a, b, q = A.rank(c), B.rank(c), C.rank(c)
        i = _mat(w.inclusion, c, b, a)
        p = _mat(w.projection, c, q, b)
        if i.shape != (b, a) or p.shape != (q, b):
            return CheckResult(False, c, "map has the wrong shape")
        if a + q != b:
            return CheckResult(False, c, f"ranks {a} + {q} != {b}")
        if not (p @ i).is_zero():
            return CheckResult(False, c, "projection after inclusion is not zero")
        if not _split_injective(i):
            return CheckResult(False, c, "inclusion is not a split injection")
        if not _split_surjective(p):
            return CheckResult(False, c, "projection is not surjective")
        # im(i) is saturated of rank a inside ker(p), which is saturated of rank b - q = a
    for name in names:
        bad = map_commutes(w.inclusion, A, B, _fam(A, name), name)
        if bad:
            return CheckResult(False, bad[0], f"inclusion does not commute with {name} in direction {bad[1] + 1}")
        bad = map_commutes(w.projection, B, C, name, _fam(C, name))
        if bad:
            return CheckResult(False, bad[0], f"projection does not commute with {name} in direction {bad[1] + 1}")
    return CheckResult(True)


def check_diagonal(w: DiagonalWitness) -> CheckResult:
    X = w.complex
    if not 0 <= w.direction < max(X.dimension, 1):
        return CheckResult(False, None, f"direction {w.direction + 1} out of range")
    if not X.binary:
        return CheckResult(True)
    k = w.direction
    for c in sorted(set(X.d[k]) | set(X.d_tilde[k])):
        if dense(X.diff(k, c, "d")) != dense(X.diff(k, c, "d_tilde")):
            return CheckResult(False, c, f"d and d~ differ in direction {k + 1}")
    return CheckResult(True)


def coordinate_ses(total: Multicomplex, keep: dict, label: str = "") -> SesWitness:
    """Split ``total`` along a coordinate subcomplex.

    ``keep[cell]`` lists the basis positions spanning the subobject; the
    caller guarantees they form a subcomplex for every family.  The quotient
    lives on the complementary positions with the induced differentials.
    """
    n = total.dimension
    sub_pos, quo_pos = {}, {}
    for c, r in total.ranks.items():
        ks = sorted(set(keep.get(c, ())))
        sub_pos[c] = ks
        ks_set = set(ks)
        quo_pos[c] = [j for j in range(r) if j not in ks_set]
    fams_sub, fams_quo = {}, {}
    for name, fam in total.families().items():
        fs = [dict() for _ in range(n)]
        fq = [dict() for _ in range(n)]
        for k in range(n):
            for c, m in fam[k].items():
                t = c[:k] + (c[k] - 1,) + c[k + 1:]
                M = m.to_sparse()
                if sub_pos[c]:
                    # rows outside the subobject must vanish on it
                    leak = M.submatrix(quo_pos.get(t, []), sub_pos[c])
                    if not leak.is_zero():
                        raise ValueError(f"positions at {c} do not span a subcomplex ({name})")
                    if sub_pos.get(t):
                        fs[k][c] = M.submatrix(sub_pos[t], sub_pos[c])
                if quo_pos[c] and quo_pos.get(t):
                    fq[k][c] = M.submatrix(quo_pos[t], quo_pos[c])
        fams_sub[name] = fs
        fams_quo[name] = fq
    sub = _rebuild(total, {c: len(v) for c, v in sub_pos.items()}, fams_sub)
    quo = _rebuild(total, {c: len(v) for c, v in quo_pos.items()}, fams_quo)
    inc = {
        c: IntMatrix.from_sparse(total.ranks[c], len(v), {(j, k): 1 for k, j in enumerate(v)})
        for c, v in sub_pos.items()
        if v
    }
    proj = {
        c: IntMatrix.from_sparse(len(v), total.ranks[c], {(k, j): 1 for k, j in enumerate(v)})
        for c, v in quo_pos.items()
        if v
    }
    return SesWitness(sub, total, quo, inc, proj, label)
