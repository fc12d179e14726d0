"""Exact integer linear algebra.

Everything here works with Python ints (arbitrary precision).  Matrices are
immutable row-major tuples; the Smith normal form drives kernels, cokernels,
integer solving and split-summand retractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "CoeffDomain",
    "IntMatrix",
    "SmithDecomposition",
    "FgAbGroup",
    "NotASummand",
    "NoIntegerSolution",
    "snf",
    "rank",
    "kernel_basis",
    "image_basis",
    "cokernel",
    "split_summand",
    "solve",
    "inverse",
    "is_unimodular",
    "determinant",
    "SparseIntMatrix",
    "dense",
]


class NotASummand(ValueError):
    """The image of an injective map is not a direct summand (or the map is not injective)."""


class NoIntegerSolution(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


@dataclass(frozen=True)
class CoeffDomain:
    """Coefficient domain: ``integers``, ``rationals`` or ``prime`` (with modulus ``p``)."""

    kind: str = "integers"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("integers", "rationals", "prime"):
            raise ValueError(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "prime" and not _is_prime(self.p):
            raise ValueError(f"PrimeField requires a prime modulus, got {self.p}")

    @classmethod
    def prime_field(cls, p: int) -> "CoeffDomain":
        return cls("prime", p)

    def coerce(self, x):
        if self.kind == "integers":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integer entry {x}")
                return int(x.numerator)
            if isinstance(x, str):
                return int(x)
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"integer entry expected, got {x!r}")
            return x
        if self.kind == "rationals":
            return Fraction(x)
        return int(x) % self.p

    def __str__(self):
        if self.kind == "prime":
            return f"F_{self.p}"
        return {"integers": "Z", "rationals": "Q"}[self.kind]


ZZ = CoeffDomain()


class IntMatrix:
    """Immutable exact matrix (over the integers unless another domain is given)."""

    __slots__ = ("rows", "cols", "_data", "domain", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[Sequence] = (), domain: CoeffDomain = ZZ):
        data = [tuple(domain.coerce(x) for x in row) for row in data]
        if not data:
            data = [tuple(domain.coerce(0) for _ in range(cols)) for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not match shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = tuple(data)
        self.domain = domain
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, rows, cols, data, domain=ZZ):
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = data
        m.domain = domain
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None, domain: CoeffDomain = ZZ) -> "IntMatrix":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows, domain)

    @classmethod
    def zeros(cls, rows: int, cols: int, domain: CoeffDomain = ZZ) -> "IntMatrix":
        z = domain.coerce(0)
        return cls._raw(rows, cols, tuple((z,) * cols for _ in range(rows)), domain)

    @classmethod
    def identity(cls, n: int, domain: CoeffDomain = ZZ) -> "IntMatrix":
        one, z = domain.coerce(1), domain.coerce(0)
        return cls._raw(n, n, tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), domain)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            data[i][i] = e
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(rows, len(columns), data)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "IntMatrix":
        """Build from ``{(i, j): value}``."""
        data = [[0] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            data[i][j] += v
        return cls._raw(rows, cols, tuple(tuple(r) for r in data))

    # -- access ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def nonzero_entries(self) -> dict:
        return {(i, j): v for i, r in enumerate(self._data) for j, v in enumerate(r) if v}

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._data for v in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            v == (1 if i == j else 0) for i, r in enumerate(self._data) for j, v in enumerate(r)
        )

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        if self.rows * self.cols <= 36:
            return f"IntMatrix({self.rows}x{self.cols}, {self.tolist()})"
        return f"IntMatrix({self.rows}x{self.cols})"

    # -- arithmetic -------------------------------------------------------
    def _reduce(self, x):
        if self.domain.kind == "prime":
            return x % self.domain.p
        return x

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if not isinstance(other, IntMatrix):
            other = other.to_dense()
        ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
        red = self._reduce
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(red(sum(a * c[k] for k, a in nz)) if nz else 0 for c in ocols))
        if not ocols:
            out = [()] * self.rows
        return IntMatrix._raw(self.rows, other.cols, tuple(out), self.domain)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        red = self._reduce
        return IntMatrix._raw(
            self.rows, self.cols,
            tuple(tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.domain,
        )

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, c) -> "IntMatrix":
        red = self._reduce
        return IntMatrix._raw(self.rows, self.cols, tuple(tuple(red(c * a) for a in r) for r in self._data), self.domain)

    __rmul__ = scale

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix._raw(self.cols, self.rows, tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols)), self.domain)

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        data = []
        for r in self._data:
            for s in other._data:
                data.append(tuple(a * b for a in r for b in s))
        return IntMatrix._raw(self.rows * other.rows, self.cols * other.cols, tuple(data), self.domain)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix._raw(len(rows), len(cols), tuple(tuple(self._data[i][j] for j in cols) for i in rows), self.domain)

    @staticmethod
    def hstack(mats: Sequence["IntMatrix"], rows: int | None = None) -> "IntMatrix":
        if not mats:
            return IntMatrix.zeros(rows or 0, 0)
        r = mats[0].rows
        if any(m.rows != r for m in mats):
            raise ValueError("hstack row mismatch")
        return IntMatrix._raw(r, sum(m.cols for m in mats), tuple(sum((m._data[i] for m in mats), ()) for i in range(r)))

    @staticmethod
    def vstack(mats: Sequence["IntMatrix"], cols: int | None = None) -> "IntMatrix":
        if not mats:
            return IntMatrix.zeros(0, cols or 0)
        c = mats[0].cols
        if any(m.cols != c for m in mats):
            raise ValueError("vstack column mismatch")
        return IntMatrix._raw(sum(m.rows for m in mats), c, sum((m._data for m in mats), ()))

    @staticmethod
    def block_diag(mats: Sequence["IntMatrix"]) -> "IntMatrix":
        R = sum(m.rows for m in mats)
        C = sum(m.cols for m in mats)
        data = [[0] * C for _ in range(R)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.rows):
                data[r0 + i][c0:c0 + m.cols] = m._data[i]
            r0 += m.rows
            c0 += m.cols
        return IntMatrix._raw(R, C, tuple(tuple(r) for r in data))

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        def enc(v):
            return v if -(1 << 63) <= v < (1 << 63) else str(v)

        return {"rows": self.rows, "cols": self.cols, "entries": [[enc(v) for v in r] for r in self._data]}

    @classmethod
    def from_json(cls, obj) -> "IntMatrix":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if isinstance(obj, list):  # bare list of rows
            if not obj or not obj[0]:
                raise ValueError("a bare row list must be non-empty; use {rows, cols, entries}")
            return cls.from_rows(obj)
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj.get("entries", [])
        if rows and len(entries) != rows:
            raise ValueError(f"matrix declares {rows} rows but has {len(entries)}")
        return cls(rows, cols, [[int(v) for v in r] for r in entries])


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ S @ V == original`` with U, V unimodular and S in Smith form.

    ``left`` and ``right`` are the inverses of U and V, i.e. ``left @ A @ right == S``.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    left: IntMatrix = field(repr=False)
    right: IntMatrix = field(repr=False)
    original: IntMatrix = field(repr=False)

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape)) if self.S[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _check_integers(A: IntMatrix, what: str):
    if A.domain.kind != "integers":
        raise ValueError(f"{what} requires an integer matrix, got domain {A.domain}")


def snf(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting uses the entry of least absolute value to limit coefficient growth.
    """
    _check_integers(A, "snf")
    m, n = A.shape
    M = [list(r) for r in A._data]
    L = [[int(i == j) for j in range(m)] for i in range(m)]     # L A R = S
    Li = [[int(i == j) for j in range(m)] for i in range(m)]    # Li = L^-1
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    Ri = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        L[i], L[j] = L[j], L[i]
        for row in Li:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]
        Ri[i], Ri[j] = Ri[j], Ri[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c == 0:
            return
        Md, Ms = M[dst], M[src]
        for k in range(n):
            if Ms[k]:
                Md[k] += c * Ms[k]
        Ld, Ls = L[dst], L[src]
        for k in range(m):
            if Ls[k]:
                Ld[k] += c * Ls[k]
        for row in Li:  # col_src -= c * col_dst
            if row[dst]:
                row[src] -= c * row[dst]

    def add_col(dst, src, c):  # col_dst += c * col_src
        if c == 0:
            return
        for row in M:
            if row[src]:
                row[dst] += c * row[src]
        for row in R:
            if row[src]:
                row[dst] += c * row[src]
        Rs, Rd = Ri[src], Ri[dst]  # row_src -= c * row_dst
        for k in range(n):
            if Rd[k]:
                Rs[k] -= c * Rd[k]

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        L[i] = [-x for x in L[i]]
        for row in Li:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Mi = M[i]
            for j in range(t, n):
                v = Mi[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            p = M[t][t]
            done = True
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    if M[i][t]:
                        done = False
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    if M[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if M[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best = (abs(M[t][t]), t, t)
            for i in range(t + 1, m):
                if M[i][t] and abs(M[i][t]) < best[0]:
                    best = (abs(M[i][t]), i, t)
            for j in range(t + 1, n):
                if M[t][j] and abs(M[t][j]) < best[0]:
                    best = (abs(M[t][j]), t, j)
            if best[1] != t:
                swap_rows(best[1], t)
            if best[2] != t:
                swap_cols(best[2], t)
        if M[t][t] < 0:
            negate_row(t)
        t += 1

    S = IntMatrix._raw(m, n, tuple(tuple(r) for r in M))
    return SmithDecomposition(
        U=IntMatrix._raw(m, m, tuple(tuple(r) for r in Li)),
        S=S,
        V=IntMatrix._raw(n, n, tuple(tuple(r) for r in Ri)),
        left=IntMatrix._raw(m, m, tuple(tuple(r) for r in L)),
        right=IntMatrix._raw(n, n, tuple(tuple(r) for r in R)),
        original=A,
    )


# ---------------------------------------------------------------------------
# Field elimination (rationals, prime fields)


def _field_rref(A: IntMatrix):
    dom = A.domain
    if dom.kind == "rationals":
        inv = lambda x: 1 / x
        M = [[Fraction(x) for x in r] for r in A._data]
        red = lambda x: x
    else:
        p = dom.p
        inv = lambda x: pow(x, -1, p)
        M = [[x % p for x in r] for r in A._data]
        red = lambda x: x % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        iv = inv(M[r][c])
        M[r] = [red(x * iv) for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [red(a - f * b) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M, pivots


def rank(A: IntMatrix) -> int:
    if A.domain.kind == "integers":
        return snf(A).rank
    return len(_field_rref(A)[1])


def determinant(A: IntMatrix) -> int:
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    # Bareiss fraction-free elimination
    n = A.rows
    if n == 0:
        return 1
    M = [list(r) for r in A._data]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular(A: IntMatrix) -> bool:
    return A.rows == A.cols and abs(determinant(A)) == 1


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of ker A (saturated over the integers)."""
    m, n = A.shape
    if A.domain.kind == "integers":
        d = snf(A)
        r = d.rank
        return d.right.submatrix(range(n), range(r, n))
    M, pivots = _field_rref(A)
    free = [c for c in range(n) if c not in pivots]
    cols = []
    for f in free:
        v = [A.domain.coerce(0)] * n
        v[f] = A.domain.coerce(1)
        for row, pc in enumerate(pivots):
            v[pc] = A.domain.coerce(-M[row][f])
        cols.append(v)
    return IntMatrix(n, len(cols), [[cols[j][i] for j in range(len(cols))] for i in range(n)], A.domain)


def image_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of im A (not saturated in general)."""
    _check_integers(A, "image_basis")
    d = snf(A)
    r = d.rank
    # A R = L^-1 S, so the first r columns of A R span the image
    AR = A @ d.right
    return AR.submatrix(range(A.rows), range(r))


@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group ``Z^free_rank + sum Z/d_i`` with ``d_1 | d_2 | ...``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if any(t < 2 for t in self.torsion):
            raise ValueError(f"invariant factors must be >= 2, got {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain, got {self.torsion}")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def cokernel(A: IntMatrix) -> FgAbGroup:
    """Invariant-factor decomposition of ``Z^rows / im A``."""
    d = snf(A)
    diag = d.diagonal
    return FgAbGroup(free_rank=A.rows - len(diag), torsion=tuple(x for x in diag if x != 1))


def split_summand(inclusion: IntMatrix) -> IntMatrix:
    """Retraction ``r`` with ``r @ inclusion == 1``, read off the Smith form.

    Raises :class:`NotASummand` unless the inclusion is injective with all
    invariant factors equal to 1.
    """
    m, k = inclusion.shape
    d = snf(inclusion)
    diag = d.diagonal
    if len(diag) != k or any(x != 1 for x in diag):
        raise NotASummand(f"invariant factors {diag} of a {m}x{k} inclusion are not all 1")
    # left @ i @ right = [I_k; 0]  =>  right @ [I_k | 0] @ left is a retraction
    proj = IntMatrix._raw(k, m, tuple(tuple(int(i == j) for j in range(m)) for i in range(k)))
    return d.right @ proj @ d.left


def solve(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Integer X with ``A @ X == B``; raises :class:`NoIntegerSolution`."""
    if A.rows != B.rows:
        raise ValueError(f"solve: {A.shape} vs {B.shape}")
    m, n = A.shape
    d = snf(A)
    LB = d.left @ B
    diag = d.diagonal
    r = len(diag)
    Y = [[0] * B.cols for _ in range(n)]
    for i in range(m):
        for j in range(B.cols):
            v = LB[i, j]
            if i < r:
                if v % diag[i]:
                    raise NoIntegerSolution("right-hand side is not in the integer image")
                Y[i][j] = v // diag[i]
            elif v:
                raise NoIntegerSolution("right-hand side is not in the image")
    return d.right @ IntMatrix._raw(n, B.cols, tuple(tuple(r_) for r_ in Y))


def inverse(A: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    if A.rows != A.cols:
        raise ValueError("inverse of a non-square matrix")
    try:
        return solve(A, IntMatrix.identity(A.rows))
    except NoIntegerSolution:
        raise ValueError("matrix is not invertible over the integers") from None


# ---------------------------------------------------------------------------
# Sparse layout


class SparseIntMatrix:
    """Integer matrix stored column-wise as ``{row: value}`` dicts.

    Used for the large differentials produced by the derived-functor engine.
    Supports the subset of the :class:`IntMatrix` interface the complex code needs.
    """

    __slots__ = ("rows", "cols", "_cols")
    domain = ZZ

    def __init__(self, rows: int, cols: int, columns: Sequence[dict] | None = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError("column count mismatch")
        cleaned = []
        for c in columns:
            c = {i: v for i, v in c.items() if v}
            if any(not 0 <= i < rows for i in c):
                raise ValueError("row index out of range")
            cleaned.append(c)
        self._cols = tuple(cleaned)

    @classmethod
    def _raw(cls, rows, cols, columns):
        m = cls.__new__(cls)
        m.rows, m.cols, m._cols = rows, cols, tuple(columns)
        return m

    @property
    def shape(self):
        return (self.rows, self.cols)

    def column_dict(self, j: int) -> dict:
        return self._cols[j]

    def sparse_columns(self) -> tuple:
        return self._cols

    def __getitem__(self, idx):
        i, j = idx
        return self._cols[j].get(i, 0)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def nonzero_entries(self) -> dict:
        return {(i, j): v for j, c in enumerate(self._cols) for i, v in c.items()}

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def to_dense(self) -> IntMatrix:
        data = [[0] * self.cols for _ in range(self.rows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                data[i][j] = v
        return IntMatrix._raw(self.rows, self.cols, tuple(tuple(r) for r in data))

    def to_sparse(self) -> "SparseIntMatrix":
        return self

    def tolist(self):
        return self.to_dense().tolist()

    def __matmul__(self, other) -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        other = other.to_sparse()
        out = []
        mine = self._cols
        for c in other._cols:
            acc: dict = {}
            for k, b in c.items():
                for i, a in mine[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append({i: v for i, v in acc.items() if v})
        return SparseIntMatrix._raw(self.rows, other.cols, out)

    def __rmatmul__(self, other) -> "SparseIntMatrix":
        return other.to_sparse() @ self

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        other = other.to_sparse()
        out = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            for i, v in b.items():
                c[i] = c.get(i, 0) + v
            out.append({i: v for i, v in c.items() if v})
        return SparseIntMatrix._raw(self.rows, self.cols, out)

    def scale(self, s: int):
        if s == 0:
            return SparseIntMatrix(self.rows, self.cols)
        return SparseIntMatrix._raw(self.rows, self.cols, [{i: s * v for i, v in c.items()} for c in self._cols])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseIntMatrix":
        pos = {r: k for k, r in enumerate(rows)}
        out = [{pos[i]: v for i, v in self._cols[j].items() if i in pos} for j in cols]
        return SparseIntMatrix._raw(len(rows), len(cols), out)

    def __eq__(self, other):
        if not isinstance(other, (IntMatrix, SparseIntMatrix)):
            return NotImplemented
        return self.shape == other.shape and self.nonzero_entries() == other.nonzero_entries()

    __hash__ = None

    def to_json(self) -> dict:
        return self.to_dense().to_json()

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def _int_to_sparse(self: IntMatrix) -> SparseIntMatrix:
    cols = [{} for _ in range(self.cols)]
    for i, r in enumerate(self._data):
        for j, v in enumerate(r):
            if v:
                cols[j][i] = v
    return SparseIntMatrix._raw(self.rows, self.cols, cols)


def _int_sparse_columns(self: IntMatrix) -> tuple:
    return _int_to_sparse(self)._cols


IntMatrix.to_sparse = _int_to_sparse
IntMatrix.to_dense = lambda self: self
IntMatrix.sparse_columns = _int_sparse_columns
IntMatrix.nnz = property(lambda self: sum(1 for r in self._data for v in r if v))


def dense(M) -> IntMatrix:
    """Dense view of either matrix layout."""
    return M.to_dense()
