"""Unit-pivot reduction of sparse integer chain complexes.

Repeatedly cancelling a pair of generators joined by a differential entry
equal to ±1 is a chain homotopy equivalence (Gaussian elimination for chain
complexes).  What is left is usually tiny and goes to dense Smith normal form.
"""

from __future__ import annotations

from .linalg import FgAbGroup, IntMatrix, cokernel, kernel_basis, solve

__all__ = ["reduce_chain", "chain_homology"]


class _Diff:
    """Mutable sparse matrix with a row index, for elimination."""

    def __init__(self, columns):
        self.cols = {j: dict(c) for j, c in enumerate(columns) if c}
        self.rows: dict = {}
        for j, c in self.cols.items():
            for i in c:
                self.rows.setdefault(i, set()).add(j)

    def drop_col(self, j):
        c = self.cols.pop(j, None)
        if c:
            for i in c:
                s = self.rows[i]
                s.discard(j)
                if not s:
                    del self.rows[i]

    def drop_row(self, i):
        for j in self.rows.pop(i, ()):
            c = self.cols[j]
            del c[i]
            if not c:
                del self.cols[j]


def _eliminate(d: _Diff, a, b, u):
    pivot_col = d.cols[a]
    for x in list(d.rows[b]):
        if x == a:
            continue
        cx = d.cols[x]
        f = cx[b] * u  # u = ±1 is its own inverse
        for i, v in pivot_col.items():
            nv = cx.get(i, 0) - f * v
            if nv:
                if i not in cx:
                    d.rows.setdefault(i, set()).add(x)
                cx[i] = nv
            else:
                del cx[i]
                s = d.rows[i]
                s.discard(x)
                if not s:
                    del d.rows[i]
        if not cx:
            del d.cols[x]
    d.drop_col(a)
    if b in d.rows:
        d.drop_row(b)


def reduce_chain(ranks: dict, diffs: dict):
    """Eliminate unit pivots.

    ``ranks``: degree -> rank; ``diffs``: degree n -> sequence of sparse
    columns (dicts) of d_n : C_n -> C_{n-1}.  Returns ``(ranks, diffs)`` of
    the residual complex with dense :class:`IntMatrix` differentials.
    """
    degrees = sorted(k for k, v in ranks.items() if v)
    alive = {n: set(range(ranks[n])) for n in degrees}
    D = {n: _Diff(diffs.get(n, ())) for n in degrees}
    changed = True
    while changed:
        changed = False
        for n in degrees:
            d = D[n]
            progress = True
            while progress:
                progress = False
                for a in sorted(d.cols, key=lambda j: len(d.cols[j])):
                    pivot_col = d.cols.get(a)
                    if not pivot_col:
                        continue
                    best = None
                    for i, v in pivot_col.items():
                        if v == 1 or v == -1:
                            rl = len(d.rows[i])
                            if best is None or rl < best[0]:
                                best = (rl, i, v)
                    if best is None:
                        continue
                    _, b, u = best
                    _eliminate(d, a, b, u)
                    alive[n].discard(a)
                    alive[n - 1].discard(b)
                    if n + 1 in D:
                        D[n + 1].drop_row(a)
                    if n - 1 in D:
                        D[n - 1].drop_col(b)
                    progress = changed = True
    out_ranks = {}
    index = {}
    for n in degrees:
        keep = sorted(alive[n])
        if keep:
            out_ranks[n] = len(keep)
            index[n] = {g: k for k, g in enumerate(keep)}
    out_diffs = {}
    for n in degrees:
        if n in index and n - 1 in index:
            data = [[0] * len(index[n]) for _ in range(len(index[n - 1]))]
            for j, c in D[n].cols.items():
                for i, v in c.items():
                    data[index[n - 1][i]][index[n][j]] = v
            out_diffs[n] = IntMatrix(len(index[n - 1]), len(index[n]), data)
    return out_ranks, out_diffs


def _dense_homology(ranks, diffs, i) -> FgAbGroup:
    n = ranks.get(i, 0)
    if n == 0:
        return FgAbGroup()
    d_i = diffs.get(i) or IntMatrix.zeros(ranks.get(i - 1, 0), n)
    d_next = diffs.get(i + 1) or IntMatrix.zeros(n, ranks.get(i + 1, 0))
    K = kernel_basis(d_i)
    if K.cols == 0:
        return FgAbGroup()
    coords = solve(K, d_next)
    return cokernel(coords)


def chain_homology(ranks: dict, diffs: dict) -> dict:
    """Homology in every degree: ``{degree: FgAbGroup}``."""
    r, d = reduce_chain(ranks, diffs)
    return {i: _dense_homology(r, d, i) for i in sorted(k for k, v in ranks.items() if v)}
