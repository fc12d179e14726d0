"""Sparse evaluation of ``N F Γ`` on multicomplexes.

Applying Γ in every direction to the inputs, the functor ``F`` objectwise and
then N in every direction gives a multicomplex whose modules have a canonical
basis: the basis keys of ``F`` (over the labelled Γ bases) whose constituent
surjections jointly cover every position in every direction.  All other keys
span the degenerate part, which is a coordinate subcomplex because ``F`` of a
degeneracy sends basis keys to signed basis keys.  This module enumerates the
non-degenerate keys directly and evaluates the differential only on them, so
the (much larger) simplicial modules are never built.

Γ basis labels are ``(p, etas, b)``: ``p`` the cell of the input, ``etas`` one
surjection value-list per direction, ``b`` a basis index of the input module
at ``p``.  The normalized differential in direction ``k`` at degree ``m`` is
``Σ_i (-1)^{m-i} F(δ_i)`` (top face positive), which is the alternating face
sum twisted by the chain isomorphism ``(-1)^{m(m+1)/2}``; with it, N(Γ(C)) is
literally C.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complexes import ChainComplex, Multicomplex
from .functors import (
    Arg,
    Atom,
    Compose,
    DirectSum,
    FunctorSpec,
    TensorProduct,
    Zero,
    apply_column,
    leaves,
    num_args,
    structural_degree,
)
from .linalg import SparseIntMatrix

__all__ = ["EngineResult", "nfg", "nfg_basis", "nfg_map", "TruncationError"]


class TruncationError(AssertionError):
    """The guard level above the computed bound is not zero."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _surjection_values(m: int, J) -> tuple:
    vals, v = [0], 0
    for k in range(m):
        if k in J:
            v += 1
        vals.append(v)
    return tuple(vals)


def _jumpmask(vals: tuple) -> int:
    mask = 0
    for k in range(len(vals) - 1):
        if vals[k + 1] != vals[k]:
            mask |= 1 << k
    return mask


@dataclass
class EngineResult:
    complex: Multicomplex
    bases: dict = field(repr=False)  # cell -> sorted list of keys
    spec: FunctorSpec = None
    bound: tuple = ()

    def index(self, cell) -> dict:
        return {k: i for i, k in enumerate(self.bases.get(tuple(cell), []))}


class _Engine:
    def __init__(self, F: FunctorSpec, inputs, sign: str = "top"):
        self.F = F
        self.inputs = list(inputs)
        self.n = self.inputs[0].dimension
        self.sign = sign
        self._face_cache = {}
        self._col_cache = {}
        self._mask_cache = {}

    # -- Γ labels ------------------------------------------------------------
    def masks_of(self, etas: tuple) -> tuple:
        r = self._mask_cache.get(etas)
        if r is None:
            r = self._mask_cache[etas] = tuple(_jumpmask(v) for v in etas)
        return r

    def arg_groups(self, a: int, m: tuple) -> dict:
        X = self.inputs[a]
        groups = {}
        for p, rank in X.ranks.items():
            if any(pk > mk for pk, mk in zip(p, m)):
                continue
            per_dir = [
                [_surjection_values(m[k], J) for J in itertools.combinations(range(m[k]), p[k])]
                for k in range(self.n)
            ]
            for etas in itertools.product(*per_dir):
                masks = self.masks_of(etas)
                groups[masks] = [(p, etas, b) for b in range(rank)]
        return groups

    # -- enumeration -----------------------------------------------------------
    def enum(self, F, arg_groups, full, need_cover) -> dict:
        """``{masks: keys}``; only the full mask when ``need_cover``."""
        n = self.n
        if isinstance(F, Zero):
            return {}
        if isinstance(F, Arg):
            g = arg_groups[F.index] if F.index < len(arg_groups) else {}
            if need_cover:
                return {full: list(g[full])} if full in g else {}
            return {k: list(v) for k, v in g.items()}
        if isinstance(F, DirectSum):
            out = {}
            for tag, side in ((0, F.left), (1, F.right)):
                for mk, keys in self.enum(side, arg_groups, full, need_cover).items():
                    out.setdefault(mk, []).extend((tag, k) for k in keys)
            return out
        if isinstance(F, TensorProduct):
            A = self.enum(F.left, arg_groups, full, False)
            B = self.enum(F.right, arg_groups, full, False)
            out = {}
            for ma, ka in A.items():
                for mb, kb in B.items():
                    u = tuple(x | y for x, y in zip(ma, mb))
                    if need_cover and u != full:
                        continue
                    out.setdefault(u, []).extend(itertools.product(ka, kb))
            return out
        if isinstance(F, Compose):
            inner = self.enum(F.inner, arg_groups, full, False)
            return self.enum(F.outer, (inner,), full, need_cover)
        if isinstance(F, Atom):
            return self._enum_atom(F, arg_groups[0], full, need_cover)
        raise TypeError(F)

    def _enum_atom(self, F: Atom, groups: dict, full: tuple, need_cover: bool) -> dict:
        n = self.n
        r = F.r
        glist = sorted(groups.items())
        G = len(glist)
        pcs = [tuple(_popcount(x) for x in mk) for mk, _ in glist]
        # suffix maxima of popcounts per direction
        suffix = [(0,) * n for _ in range(G + 1)]
        for g in range(G - 1, -1, -1):
            suffix[g] = tuple(max(a, b) for a, b in zip(pcs[g], suffix[g + 1]))
        global_max = suffix[0] if G else (0,) * n
        out: dict = {}
        ordered = F.kind == "T"

        def feasible(union, slots, bound):
            if not need_cover:
                return True
            for k in range(n):
                if _popcount(full[k] & ~union[k]) > slots * bound[k]:
                    return False
            return True

        def emit(chosen, union):
            if need_cover and union != full:
                return
            bucket = out.setdefault(union, [])
            if ordered:
                for combo in itertools.product(*(glist[g][1] for g in chosen)):
                    bucket.append(combo)
                return
            pools = []
            for g, mult in chosen:
                mem = glist[g][1]
                if F.kind == "L":
                    pools.append(list(itertools.combinations(mem, mult)))
                else:
                    pools.append(list(itertools.combinations_with_replacement(mem, mult)))
            for parts in itertools.product(*pools):
                bucket.append(tuple(sorted(itertools.chain.from_iterable(parts))))

        if ordered:

            def dfs_seq(slots, union, chosen):
                if slots == 0:
                    emit(chosen, union)
                    return
                for g in range(G):
                    u = tuple(x | y for x, y in zip(union, glist[g][0]))
                    if feasible(u, slots - 1, global_max):
                        dfs_seq(slots - 1, u, chosen + [g])

            dfs_seq(r, (0,) * n, [])
        else:

            def dfs(start, slots, union, chosen):
                if slots == 0:
                    emit(chosen, union)
                    return
                for g in range(start, G):
                    if not feasible(union, slots, suffix[g]):
                        return  # suffix bounds only shrink further on
                    mk, mem = glist[g]
                    u = tuple(x | y for x, y in zip(union, mk))
                    top = min(slots, len(mem)) if F.kind == "L" else slots
                    for mult in range(1, top + 1):
                        if feasible(u, slots - mult, suffix[g + 1]):
                            dfs(g + 1, slots - mult, u, chosen + [(g, mult)])

            dfs(0, r, (0,) * n, [])
        return out

    def basis_at(self, m: tuple) -> list:
        full = tuple((1 << mk) - 1 for mk in m)
        arg_groups = tuple(self.arg_groups(a, m) for a in range(len(self.inputs)))
        res = self.enum(self.F, arg_groups, full, True)
        return sorted(res.get(full, []))

    # -- faces -----------------------------------------------------------------
    def face_kind(self, vals: tuple, i: int):
        key = (vals, i)
        r = self._face_cache.get(key)
        if r is None:
            p = vals[-1]
            new = vals[:i] + vals[i + 1:]
            v = vals[i]
            still = (i > 0 and vals[i - 1] == v) or (i + 1 < len(vals) and vals[i + 1] == v)
            if still:
                r = ("id", new)
            elif v == p:
                r = ("d", new)
            else:
                r = ("zero", None)
            self._face_cache[key] = r
        return r

    def diff_column(self, a: int, k: int, p: tuple, b: int) -> dict:
        key = (a, k, p)
        cols = self._col_cache.get(key)
        if cols is None:
            cols = self._col_cache[key] = self.inputs[a].diff(k, p).sparse_columns()
        return cols[b]

    def face_column(self, a: int, label, k: int, i: int) -> dict:
        p, etas, b = label
        kind, new = self.face_kind(etas[k], i)
        if kind == "zero":
            return {}
        netas = etas[:k] + (new,) + etas[k + 1:]
        if kind == "id":
            return {(p, netas, b): 1}
        q = p[:k] + (p[k] - 1,) + p[k + 1:]
        return {(q, netas, c): v for c, v in self.diff_column(a, k, p, b).items()}

    def differential(self, k: int, m: tuple, src: list, tgt_index: dict) -> SparseIntMatrix:
        mk = m[k]
        full_k = (1 << (mk - 1)) - 1
        F = self.F
        cols = []
        for x in src:
            lvs = list(leaves(F, x))
            col: dict = {}
            for i in range(mk + 1):
                union = 0
                ok = True
                for a, (p, etas, b) in lvs:
                    kind, new = self.face_kind(etas[k], i)
                    if kind == "zero":
                        ok = False
                        break
                    union |= _jumpmask(new)
                if not ok or union != full_k:
                    continue
                if self.sign == "top":
                    sgn = -1 if (mk - i) % 2 else 1
                else:
                    sgn = -1 if i % 2 else 1
                maps = tuple(
                    (lambda lab, a=a: self.face_column(a, lab, k, i)) for a in range(len(self.inputs))
                )
                for key, v in apply_column(F, maps, x).items():
                    t = tgt_index[key]
                    nv = col.get(t, 0) + sgn * v
                    if nv:
                        col[t] = nv
                    else:
                        del col[t]
            cols.append(col)
        return SparseIntMatrix._raw(len(tgt_index), len(src), cols)


def _default_bound(F, inputs, k):
    return structural_degree(F) * max((X.length(k) for X in inputs), default=0)


def nfg(
    F: FunctorSpec,
    inputs,
    order=None,
    sign: str = "top",
    check_guard: bool = True,
) -> EngineResult:
    """``N F Γ`` applied to one multicomplex per argument of ``F``.

    ``order`` permutes the directions in which Γ/N are applied (the result is
    reported in the original direction order).  ``sign`` is ``"top"`` for the
    top-face-positive normalization or ``"alternating"`` for ``Σ (-1)^i δ_i``.
    """
    if isinstance(inputs, Multicomplex):
        inputs = [inputs]
    inputs = list(inputs)
    nargs = num_args(F)
    if len(inputs) == 1 and nargs > 1:
        inputs = inputs * nargs
    if len(inputs) < nargs:
        raise ValueError(f"{F} takes {nargs} arguments, got {len(inputs)}")
    n = inputs[0].dimension
    if any(X.dimension != n for X in inputs):
        raise ValueError("all inputs must have the same dimension")
    if any(X.binary for X in inputs):
        raise TypeError("nfg takes non-binary multicomplexes; use binary_lambda for binary ones")
    perm = list(range(n)) if order is None else list(order)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"invalid direction order {order}")
    if perm != list(range(n)):
        inputs = [_permute(X, perm) for X in inputs]
    eng = _Engine(F, inputs, sign)
    bound = tuple(_default_bound(F, inputs, k) for k in range(n))
    bases = {}
    for m in itertools.product(*(range(b + 1) for b in bound)):
        B = eng.basis_at(m)
        if B:
            bases[m] = B
    if check_guard:
        for k in range(n):
            for m in itertools.product(*(range(b + 1) for b in bound)):
                g = m[:k] + (bound[k] + 1,) + m[k + 1:]
                if eng.basis_at(g):
                    raise TruncationError(f"guard cell {g} is nonzero")
    index = {m: {key: i for i, key in enumerate(B)} for m, B in bases.items()}
    fams = [dict() for _ in range(n)]
    for m, B in bases.items():
        for k in range(n):
            if m[k] == 0:
                continue
            t = m[:k] + (m[k] - 1,) + m[k + 1:]
            if t not in index:
                continue
            fams[k][m] = eng.differential(k, m, B, index[t])
    ranks = {m: len(B) for m, B in bases.items()}
    if n == 1:
        out = ChainComplex(ranks, fams[0])
    else:
        out = Multicomplex(n, ranks, fams)
    if perm != list(range(n)):
        inv = [perm.index(k) for k in range(n)]
        out = _permute(out, inv)
        bases = {tuple(m[inv[k]] for k in range(n)): B for m, B in bases.items()}
        bound = tuple(bound[inv[k]] for k in range(n))
    return EngineResult(out, bases, F, bound)


def nfg_map(F: FunctorSpec, maps, src: EngineResult, tgt: EngineResult) -> dict:
    """``N F Γ`` of chain maps: ``{cell: SparseIntMatrix}`` between the two results.

    ``maps`` holds one ``{cell: matrix}`` per argument of ``F``.  Γ of a chain
    map keeps every surjection label, so non-degenerate keys go to
    combinations of non-degenerate keys with the same surjections.
    """
    if isinstance(maps, dict):
        maps = [maps] * max(1, num_args(F))
    col_cache = {}

    def label_map(a):
        def f(label):
            p, etas, b = label
            cols = col_cache.get((a, p))
            if cols is None:
                M = maps[a].get(p)
                cols = col_cache[(a, p)] = M.sparse_columns() if M is not None else None
            if cols is None:
                return {}
            return {(p, etas, c): v for c, v in cols[b].items()}

        return f

    fs = tuple(label_map(a) for a in range(len(maps)))
    out = {}
    for cell, keys in src.bases.items():
        index = tgt.index(cell)
        columns = []
        for key in keys:
            col = {}
            for k, v in apply_column(F, fs, key).items():
                col[index[k]] = v
            columns.append(col)
        out[cell] = SparseIntMatrix._raw(len(index), len(keys), columns)
    return out


def nfg_basis(F: FunctorSpec, inputs, m) -> list:
    """Sorted non-degenerate basis keys at multidegree ``m``."""
    if isinstance(inputs, Multicomplex):
        inputs = [inputs] * max(1, num_args(F))
    m = (m,) if isinstance(m, int) else tuple(m)
    return _Engine(F, inputs).basis_at(m)


def _permute(X: Multicomplex, perm) -> Multicomplex:
    """New multicomplex whose direction ``j`` is the old direction ``perm[j]``."""
    n = X.dimension
    mv = lambda c: tuple(c[perm[j]] for j in range(n))
    ranks = {mv(c): r for c, r in X.ranks.items()}
    fams = [{mv(c): mtx for c, mtx in X.d[perm[j]].items()} for j in range(n)]
    if n == 1:
        return ChainComplex(ranks, fams[0])
    return Multicomplex(n, ranks, fams)
