"""Bounded first-quadrant complexes of free modules.

A multicomplex of dimension ``n`` is a grid of free modules indexed by cells in
``Z_{>=0}^n`` with one differential family per direction; families of
different directions commute.  Binary versions carry a second family
``d_tilde`` per direction.  Chain complexes and binary complexes are the
one-dimensional cases.  :class:`Bicomplex` is the anticommuting variant used
for total complexes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .linalg import FgAbGroup, IntMatrix, SparseIntMatrix, kernel_basis, snf
from .sparse import chain_homology, reduce_chain

__all__ = [
    "Multicomplex",
    "ChainComplex",
    "BinaryMulticomplex",
    "BinaryComplex",
    "Bicomplex",
    "Violation",
    "ValidationReport",
    "validate",
    "homology",
    "homology_all",
    "is_acyclic",
    "shift",
    "cone",
    "restrict",
    "tot",
    "tensor_bicomplex",
    "external_tensor",
    "direct_sum",
    "complex_to_json",
    "complex_from_json",
    "ComplexFormatError",
]


class ComplexFormatError(ValueError):
    """Malformed complex description (bad shapes, negative cells, bad JSON)."""


def _cell(c, n: int) -> tuple:
    if isinstance(c, int):
        c = (c,)
    c = tuple(int(x) for x in c)
    if len(c) != n:
        raise ComplexFormatError(f"cell {c} has the wrong dimension (expected {n})")
    return c


def _down(cell: tuple, k: int) -> tuple:
    return cell[:k] + (cell[k] - 1,) + cell[k + 1:]


def _up(cell: tuple, k: int) -> tuple:
    return cell[:k] + (cell[k] + 1,) + cell[k + 1:]


def _zero(rows, cols):
    return IntMatrix.zeros(rows, cols)


def _normalize_family(n, ranks, fam, name):
    """Per-direction dicts of matrices, keyed by source cell, with shape checks."""
    fam = list(fam) if fam is not None else [{} for _ in range(n)]
    if len(fam) != n:
        raise ComplexFormatError(f"{name}: expected {n} directions, got {len(fam)}")
    out = []
    for k, d in enumerate(fam):
        dk = {}
        for c, m in d.items():
            c = _cell(c, n)
            src = ranks.get(c, 0)
            tgt = ranks.get(_down(c, k), 0) if c[k] > 0 else 0
            if m.shape != (tgt, src):
                raise ComplexFormatError(
                    f"{name}[direction {k + 1}] at cell {c}: shape {m.shape}, expected {(tgt, src)}"
                )
            if src and tgt and not m.is_zero():
                dk[c] = m
        out.append(dk)
    return tuple(out)


def _normalize_ranks(n, ranks) -> dict:
    out = {}
    for c, r in ranks.items():
        c = _cell(c, n)
        if any(x < 0 for x in c):
            raise ComplexFormatError(f"cell {c} lies outside the first quadrant")
        if r < 0:
            raise ComplexFormatError(f"negative rank at {c}")
        if r:
            out[c] = int(r)
    return out


class Multicomplex:
    """Grid of free modules with one commuting differential family per direction."""

    binary = False

    def __init__(self, dimension: int, ranks: Mapping, d=None):
        self.dimension = int(dimension)
        self.ranks = _normalize_ranks(self.dimension, ranks)
        self.d = _normalize_family(self.dimension, self.ranks, d, "d")

    # -- access --------------------------------------------------------------
    def rank(self, cell) -> int:
        return self.ranks.get(_cell(cell, self.dimension), 0)

    def diff(self, direction: int, cell, family: str = "d"):
        """Differential leaving ``cell`` in ``direction`` (0-based)."""
        cell = _cell(cell, self.dimension)
        fam = self.d if family == "d" else self.d_tilde
        m = fam[direction].get(cell)
        if m is not None:
            return m
        tgt = self.ranks.get(_down(cell, direction), 0) if cell[direction] > 0 else 0
        return _zero(tgt, self.ranks.get(cell, 0))

    def cells(self) -> list:
        return sorted(self.ranks)

    def is_zero(self) -> bool:
        return not self.ranks

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def length(self, direction: int | None = None) -> int:
        """Largest degree carrying a nonzero module (total degree when ``direction`` is None)."""
        if not self.ranks:
            return 0
        if direction is None:
            return max(sum(c) for c in self.ranks)
        return max(c[direction] for c in self.ranks)

    def graded_object(self) -> dict:
        return dict(self.ranks)

    def families(self):
        return {"d": self.d}

    def lines(self, direction: int, family: str = "d"):
        """Yield ``(fixed_coords, ChainComplex)`` for each line in ``direction``."""
        others = sorted({c[:direction] + c[direction + 1:] for c in self.ranks})
        for o in others:
            rk, df = {}, {}
            for c, r in self.ranks.items():
                if c[:direction] + c[direction + 1:] == o:
                    rk[c[direction]] = r
            for i in rk:
                cell = o[:direction] + (i,) + o[direction:]
                m = (self.d if family == "d" else self.d_tilde)[direction].get(cell)
                if m is not None:
                    df[i] = m
            yield o, ChainComplex(rk, df)

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.ranks == other.ranks
            and self.families() == other.families()
        )

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dimension}, ranks={dict(sorted(self.ranks.items()))})"


class ChainComplex(Multicomplex):
    """Bounded chain complex ``... -> C_1 -> C_0``; ``d[i]: C_i -> C_{i-1}``."""

    def __init__(self, ranks, d: Mapping | None = None):
        if not isinstance(ranks, Mapping):
            ranks = dict(enumerate(ranks))
        ranks = {(c if isinstance(c, tuple) else (c,)): r for c, r in ranks.items()}
        d = {(c if isinstance(c, tuple) else (c,)): m for c, m in (d or {}).items()}
        super().__init__(1, ranks, [d])

    @classmethod
    def from_list(cls, ranks, diffs) -> "ChainComplex":
        """``diffs[i]`` is d_{i+1}: C_{i+1} -> C_i given as nested lists."""
        d = {}
        for i, m in enumerate(diffs):
            M = m if isinstance(m, (IntMatrix, SparseIntMatrix)) else IntMatrix(ranks[i], ranks[i + 1], m)
            d[i + 1] = M
        return cls(ranks, d)

    def rank(self, i) -> int:
        return super().rank(i)

    def differential(self, i):
        return self.diff(0, i)

    def degrees(self) -> list:
        return sorted(c[0] for c in self.ranks)

    def rank_list(self) -> list:
        L = self.length()
        return [self.rank(i) for i in range(L + 1)] if self.ranks else []


class BinaryMulticomplex(Multicomplex):
    """Grid with two differential families per direction."""

    binary = True

    def __init__(self, dimension, ranks, d=None, d_tilde=None):
        super().__init__(dimension, ranks, d)
        self.d_tilde = _normalize_family(self.dimension, self.ranks, d_tilde, "d_tilde")

    def families(self):
        return {"d": self.d, "d_tilde": self.d_tilde}

    def choice(self, mask: Iterable[int]) -> Multicomplex:
        """Choice-multicomplex: direction ``k`` uses ``d_tilde`` iff ``mask[k]``."""
        mask = tuple(mask)
        fams = [self.d_tilde[k] if mask[k] else self.d[k] for k in range(self.dimension)]
        if self.dimension == 1:
            return ChainComplex(self.ranks, fams[0])
        return Multicomplex(self.dimension, self.ranks, fams)

    def choices(self):
        for mask in itertools.product((0, 1), repeat=self.dimension):
            yield mask, self.choice(mask)

    def is_diagonal(self, direction: int | None = None) -> bool:
        """``d = d_tilde`` in ``direction`` (in every direction when None)."""
        dirs = range(self.dimension) if direction is None else [direction]
        return all(self.d[k] == self.d_tilde[k] for k in dirs)

    def diagonal_directions(self) -> list:
        return [k for k in range(self.dimension) if self.d[k] == self.d_tilde[k]]

    @classmethod
    def from_choices(cls, dimension, ranks, d_families, d_tilde_families):
        return cls(dimension, ranks, d_families, d_tilde_families)


class BinaryComplex(BinaryMulticomplex):
    """One graded object with two differentials ``d`` and ``d_tilde``."""

    def __init__(self, ranks, d=None, d_tilde=None):
        if not isinstance(ranks, Mapping):
            ranks = dict(enumerate(ranks))
        fix = lambda m: {(c if isinstance(c, tuple) else (c,)): v for c, v in (m or {}).items()}
        ranks = fix(ranks)
        super().__init__(1, ranks, [fix(d)], [fix(d_tilde)])

    @classmethod
    def from_chain_pair(cls, top: ChainComplex, bottom: ChainComplex) -> "BinaryComplex":
        if top.ranks != bottom.ranks:
            raise ComplexFormatError("the two differentials live on different graded objects")
        return cls(top.ranks, top.d[0], bottom.d[0])

    @classmethod
    def diagonal(cls, C: ChainComplex) -> "BinaryComplex":
        return cls(C.ranks, C.d[0], C.d[0])

    def top(self) -> ChainComplex:
        return ChainComplex(self.ranks, self.d[0])

    def bottom(self) -> ChainComplex:
        return ChainComplex(self.ranks, self.d_tilde[0])

    def rank(self, i) -> int:
        return super().rank(i)

    def length(self, direction=None) -> int:
        return super().length(None)


class Bicomplex:
    """Double complex with anticommuting squares: ``d_hor d_ver + d_ver d_hor = 0``."""

    def __init__(self, ranks: Mapping, d_hor: Mapping | None = None, d_ver: Mapping | None = None):
        self.ranks = _normalize_ranks(2, ranks)
        self.d_hor, self.d_ver = _normalize_family(2, self.ranks, [d_hor or {}, d_ver or {}], "bicomplex")

    def diff(self, direction, cell):
        fam = self.d_hor if direction == 0 else self.d_ver
        m = fam.get(cell)
        if m is not None:
            return m
        tgt = self.ranks.get(_down(cell, direction), 0) if cell[direction] > 0 else 0
        return _zero(tgt, self.ranks.get(cell, 0))

    def rank(self, cell) -> int:
        return self.ranks.get(tuple(cell), 0)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    rule: str
    cell: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.rule} at cell {self.cell}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "violations": [{"rule": v.rule, "cell": list(v.cell), "detail": v.detail} for v in self.violations]}


_RULE_NAMES = {
    ("d", "d"): "d^i d^j = d^j d^i",
    ("d", "d_tilde"): "d^i d~^j = d~^j d^i",
    ("d_tilde", "d"): "d~^i d^j = d^j d~^i",
    ("d_tilde", "d_tilde"): "d~^i d~^j = d~^j d~^i",
}


def _fam_diff(X, fam, k, cell):
    return X.diff(k, cell, fam)


def validate(X) -> ValidationReport:
    """Check d∘d = 0 per line, commutation across directions, and support."""
    rep = ValidationReport()
    if isinstance(X, Bicomplex):
        for c in sorted(X.ranks):
            for k in range(2):
                if c[k] >= 2:
                    p = X.diff(k, _down(c, k)) @ X.diff(k, c)
                    if not p.is_zero():
                        rep.violations.append(Violation(f"d{'hv'[k]}^2 = 0", c))
            if c[0] >= 1 and c[1] >= 1:
                a = X.diff(0, _down(c, 1)) @ X.diff(1, c)
                b = X.diff(1, _down(c, 0)) @ X.diff(0, c)
                if not (a + b).is_zero():
                    rep.violations.append(Violation("d_hor d_ver + d_ver d_hor = 0", c))
        return rep
    fams = list(X.families())
    n = X.dimension
    for c in sorted(X.ranks):
        if any(x < 0 for x in c):
            rep.violations.append(Violation("first-quadrant support", c))
        for f in fams:
            for k in range(n):
                if c[k] >= 2:
                    p = X.diff(k, _down(c, k), f) @ X.diff(k, c, f)
                    if not p.is_zero():
                        name = "d" if f == "d" else "d~"
                        rep.violations.append(Violation(f"{name}^{k + 1} {name}^{k + 1} = 0", c))
        for f in fams:
            for g in fams:
                for i in range(n):
                    for j in range(n):
                        if i >= j and f == g:
                            continue
                        if i == j or c[i] < 1 or c[j] < 1:
                            continue
                        a = X.diff(i, _down(c, j), f) @ X.diff(j, c, g)
                        b = X.diff(j, _down(c, i), g) @ X.diff(i, c, f)
                        if a != b:
                            rep.violations.append(Violation(_RULE_NAMES[(f, g)], c, f"directions i={i + 1}, j={j + 1}"))
    return rep


# ---------------------------------------------------------------------------
# homology and acyclicity


def _line_data(C: ChainComplex):
    ranks = {c[0]: r for c, r in C.ranks.items()}
    diffs = {c[0]: m.sparse_columns() for c, m in C.d[0].items()}
    return ranks, diffs


def homology_all(C: ChainComplex) -> dict:
    """``{degree: FgAbGroup}`` for every degree carrying a module."""
    ranks, diffs = _line_data(C)
    return chain_homology(ranks, diffs)


def homology(C: ChainComplex, i: int) -> FgAbGroup:
    if C.rank(i) == 0:
        return FgAbGroup()
    return homology_all(C).get(i, FgAbGroup())


def _chain_acyclic(C: ChainComplex) -> bool:
    ranks, diffs = _line_data(C)
    r, d = reduce_chain(ranks, diffs)
    if not r:
        return True
    # residual: acyclic iff every d is an isomorphism onto the cycles with unit invariant factors
    for i in sorted(r):
        di = d.get(i) or IntMatrix.zeros(r.get(i - 1, 0), r[i])
        dn = d.get(i + 1) or IntMatrix.zeros(r[i], r.get(i + 1, 0))
        K = kernel_basis(di)
        # cycles are a saturated summand over Z; assert it rather than assume it
        if K.cols and any(x != 1 for x in snf(K).diagonal):
            raise AssertionError("kernel basis is not saturated")
        if K.cols != snf(dn).rank:
            return False
        if any(x != 1 for x in snf(dn).diagonal):
            return False
    return True


def is_acyclic(X) -> bool:
    """Vanishing homology of every line of every choice-multicomplex."""
    if isinstance(X, ChainComplex):
        return _chain_acyclic(X)
    if isinstance(X, BinaryMulticomplex):
        return all(is_acyclic(Y) for _, Y in X.choices())
    if isinstance(X, Multicomplex):
        return all(_chain_acyclic(L) for k in range(X.dimension) for _, L in X.lines(k))
    raise TypeError(f"cannot decide acyclicity of {type(X).__name__}")


# ---------------------------------------------------------------------------
# constructions


def _rebuild(X, ranks, fams: dict):
    """New object of the same kind as X."""
    if isinstance(X, BinaryComplex):
        return BinaryComplex(ranks, fams["d"][0], fams["d_tilde"][0])
    if isinstance(X, BinaryMulticomplex):
        return BinaryMulticomplex(X.dimension, ranks, fams["d"], fams["d_tilde"])
    if isinstance(X, ChainComplex):
        return ChainComplex(ranks, fams["d"][0])
    return Multicomplex(X.dimension, ranks, fams["d"])


def shift(X, k: int, direction: int = 0):
    """``X[k]``: degrees moved up by ``k`` in ``direction``, that direction's differentials times ``(-1)^k``."""
    if k < 0:
        raise ValueError("shift amount must be non-negative")
    sgn = -1 if k % 2 else 1
    move = lambda c: c[:direction] + (c[direction] + k,) + c[direction + 1:]
    ranks = {move(c): r for c, r in X.ranks.items()}
    fams = {}
    for name, fam in X.families().items():
        fams[name] = [
            {move(c): (m.scale(sgn) if j == direction else m) for c, m in fam[j].items()} for j in range(X.dimension)
        ]
    return _rebuild(X, ranks, fams)


def cone(X, direction: int = 0):
    """Mapping cone of the identity in ``direction``: cell ``c`` holds ``X_{c-e} ⊕ X_c``.

    The differential in ``direction`` is ``[[-d, 0], [-1, d]]``; other directions act diagonally.
    """
    n = X.dimension
    e = direction
    cells = set(X.ranks) | {_up(c, e) for c in X.ranks}
    ranks = {}
    for c in cells:
        a = X.ranks.get(_down(c, e), 0) if c[e] > 0 else 0
        b = X.ranks.get(c, 0)
        if a + b:
            ranks[c] = a + b
    fams = {}
    for name in X.families():
        fam = [dict() for _ in range(n)]
        for c in ranks:
            a = X.ranks.get(_down(c, e), 0) if c[e] > 0 else 0
            b = X.ranks.get(c, 0)
            for j in range(n):
                if c[j] == 0:
                    continue
                t = _down(c, j)
                ta = X.ranks.get(_down(t, e), 0) if t[e] > 0 else 0
                tb = X.ranks.get(t, 0)
                if ta + tb == 0:
                    continue
                if j == e:
                    # (x, y) in X_{c-e} ⊕ X_c  ->  (-d x, -x + d y) in X_{c-2e} ⊕ X_{c-e}
                    dx = X.diff(e, _down(c, e), name) if a else _zero(ta, 0)
                    dy = X.diff(e, c, name)
                    top = IntMatrix.hstack([(-dx.to_dense()) if a else _zero(ta, 0), _zero(ta, b)], ta)
                    bot = IntMatrix.hstack([-IntMatrix.identity(a), dy.to_dense()], tb)
                    m = IntMatrix.vstack([top, bot], a + b)
                else:
                    da = X.diff(j, _down(c, e), name).to_dense() if a else _zero(ta, 0)
                    db = X.diff(j, c, name).to_dense()
                    m = IntMatrix.block_diag([da, db])
                if m.shape != (ta + tb, a + b):
                    raise AssertionError("cone block shape")
                fam[j][c] = m
        fams[name] = fam
    return _rebuild(X, ranks, fams)


def restrict(X, upper: int, direction: int = 0):
    """Subcomplex supported on degrees ``[0, upper]`` in ``direction``."""
    ranks = {c: r for c, r in X.ranks.items() if c[direction] <= upper}
    fams = {}
    for name, fam in X.families().items():
        fams[name] = [{c: m for c, m in fam[j].items() if c in ranks} for j in range(X.dimension)]
    return _rebuild(X, ranks, fams)


def direct_sum(X, Y):
    """Cellwise direct sum (X's basis first)."""
    if X.dimension != Y.dimension or type(X) is not type(Y):
        raise ComplexFormatError("direct_sum needs two complexes of the same kind and dimension")
    n = X.dimension
    cells = set(X.ranks) | set(Y.ranks)
    ranks = {c: X.ranks.get(c, 0) + Y.ranks.get(c, 0) for c in cells}
    fams = {}
    for name in X.families():
        fam = [dict() for _ in range(n)]
        for c in cells:
            for j in range(n):
                if c[j] == 0:
                    continue
                fam[j][c] = IntMatrix.block_diag([X.diff(j, c, name).to_dense(), Y.diff(j, c, name).to_dense()])
        fams[name] = fam
    return _rebuild(X, ranks, fams)


def tot(B: Bicomplex) -> ChainComplex:
    """Total complex: degree n is ``⊕_{i+j=n} B_{ij}`` ordered by increasing ``i``."""
    rep = validate(B)
    if not rep.ok:
        raise ComplexFormatError(f"bicomplex fails the sign convention: {rep.violations[0]}")
    by_deg: dict = {}
    for c in sorted(B.ranks):
        by_deg.setdefault(c[0] + c[1], []).append(c)
    ranks = {n: sum(B.ranks[c] for c in cs) for n, cs in by_deg.items()}
    diffs = {}
    for n, cs in by_deg.items():
        tg = by_deg.get(n - 1, [])
        if not tg:
            continue
        offs_t, o = {}, 0
        for c in tg:
            offs_t[c] = o
            o += B.ranks[c]
        entries = {}
        col0 = 0
        for c in cs:
            for k in range(2):
                if c[k] == 0:
                    continue
                t = _down(c, k)
                if t not in offs_t:
                    continue
                m = B.diff(k, c)
                for (i, j), v in m.nonzero_entries().items():
                    key = (offs_t[t] + i, col0 + j)
                    entries[key] = entries.get(key, 0) + v
            col0 += B.ranks[c]
        diffs[n] = IntMatrix.from_sparse(ranks[n - 1], ranks[n], entries)
    return ChainComplex(ranks, diffs)


def tensor_bicomplex(P: ChainComplex, Q: ChainComplex) -> Bicomplex:
    """``B_{ij} = P_i ⊗ Q_j`` with ``d_hor = d_P ⊗ 1`` and ``d_ver = (-1)^i 1 ⊗ d_Q``."""
    ranks = {(i, j): P.rank(i) * Q.rank(j) for i in P.degrees() for j in Q.degrees()}
    dh, dv = {}, {}
    for (i, j) in ranks:
        if i > 0:
            dh[(i, j)] = P.differential(i).to_dense().kron(IntMatrix.identity(Q.rank(j)))
        if j > 0:
            dv[(i, j)] = IntMatrix.identity(P.rank(i)).kron(Q.differential(j).to_dense()).scale((-1) ** i)
    return Bicomplex(ranks, dh, dv)


def external_tensor(X, Y):
    """External tensor product: a multicomplex of dimension ``dim X + dim Y`` with commuting families."""
    n, m = X.dimension, Y.dimension
    ranks = {cx + cy: rx * ry for cx, rx in X.ranks.items() for cy, ry in Y.ranks.items()}
    binary = X.binary or Y.binary
    names = ["d", "d_tilde"] if binary else ["d"]
    fams = {}
    for name in names:
        fx = name if X.binary else "d"
        fy = name if Y.binary else "d"
        fam = [dict() for _ in range(n + m)]
        for cx, rx in X.ranks.items():
            for cy, ry in Y.ranks.items():
                c = cx + cy
                for k in range(n):
                    if cx[k] > 0:
                        fam[k][c] = X.diff(k, cx, fx).to_dense().kron(IntMatrix.identity(ry))
                for k in range(m):
                    if cy[k] > 0:
                        fam[n + k][c] = IntMatrix.identity(rx).kron(Y.diff(k, cy, fy).to_dense())
        fams[name] = fam
    if binary:
        return BinaryMulticomplex(n + m, ranks, fams["d"], fams["d_tilde"])
    return Multicomplex(n + m, ranks, fams["d"])


# ---------------------------------------------------------------------------
# JSON


def _cell_key(c: tuple) -> str:
    return ",".join(str(x) for x in c)


def _parse_cell(s: str) -> tuple:
    try:
        return tuple(int(x) for x in str(s).split(","))
    except ValueError:
        raise ComplexFormatError(f"bad cell label {s!r}") from None


def complex_to_json(X) -> dict:
    if isinstance(X, Bicomplex):
        return {
            "kind": "bicomplex",
            "dimension": 2,
            "ranks": {_cell_key(c): r for c, r in sorted(X.ranks.items())},
            "differentials": {
                "d": {
                    "1": {_cell_key(c): m.to_json() for c, m in sorted(X.d_hor.items())},
                    "2": {_cell_key(c): m.to_json() for c, m in sorted(X.d_ver.items())},
                }
            },
        }
    out = {
        "kind": "binary" if X.binary else "chain",
        "dimension": X.dimension,
        "ranks": {_cell_key(c): r for c, r in sorted(X.ranks.items())},
        "differentials": {},
    }
    for name, fam in X.families().items():
        out["differentials"][name] = {
            str(k + 1): {_cell_key(c): m.to_json() for c, m in sorted(fam[k].items())} for k in range(X.dimension)
        }
    return out


def complex_from_json(obj):
    """Parse the complex JSON format; binary iff ``d_tilde`` is present."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise ComplexFormatError(f"invalid JSON: {e}") from None
    try:
        n = int(obj["dimension"])
        ranks = {_parse_cell(k): int(v) for k, v in obj["ranks"].items()}
        diffs = obj.get("differentials", {})
        fams = {}
        for name in ("d", "d_tilde"):
            if name not in diffs:
                continue
            fam = [dict() for _ in range(n)]
            for dk, cells in diffs[name].items():
                k = int(dk) - 1
                if not 0 <= k < n:
                    raise ComplexFormatError(f"direction {dk} out of range")
                for ck, m in cells.items():
                    fam[k][_parse_cell(ck)] = IntMatrix.from_json(m)
            fams[name] = fam
    except (KeyError, TypeError, AttributeError) as e:
        raise ComplexFormatError(f"malformed complex description: {e!r}") from None
    except ValueError as e:
        if isinstance(e, ComplexFormatError):
            raise
        raise ComplexFormatError(str(e)) from None
    kind = obj.get("kind")
    if kind == "bicomplex":
        return Bicomplex(ranks, fams.get("d", [{}, {}])[0], fams.get("d", [{}, {}])[1])
    d = fams.get("d", [dict() for _ in range(n)])
    if "d_tilde" in fams:
        if n == 1:
            return BinaryComplex({c: r for c, r in ranks.items()}, d[0], fams["d_tilde"][0])
        return BinaryMulticomplex(n, ranks, d, fams["d_tilde"])
    if n == 1:
        return ChainComplex(ranks, d[0])
    return Multicomplex(n, ranks, d)
