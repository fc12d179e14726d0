"""Symmetric polynomials, elementary-basis expansion, plethysm and functor characters.

Polynomials are dicts from exponent tuples to integers.  Identities of
weighted degree D are decided in exactly D variables, where the elementary
symmetric polynomials are algebraically independent.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from math import comb

from .functors import FunctorSpec, basis, leaves, num_args

__all__ = [
    "Poly",
    "SymPoly",
    "EBasisPoly",
    "NotSymmetric",
    "InsufficientVariables",
    "elementary",
    "complete",
    "power_sum",
    "expand_in_e",
    "universal_Pr",
    "universal_Prs",
    "plethysm_e",
    "char_functor",
    "verify_axiom3_char",
    "lambda_t_check",
    "pr_substitution_identity",
    "lambda_universal_check",
    "e_monomials_independent",
]


class NotSymmetric(ValueError):
    pass


class InsufficientVariables(ValueError):
    pass


class Poly:
    """Integer polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _like(self, terms):
        return type(self)(self.nvars, terms)

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.nvars, other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if not isinstance(other, int) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like({k: v * other for k, v in self.terms.items()})
        t: dict = {}
        for a, u in self.terms.items():
            for b, v in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                t[k] = t.get(k, 0) + u * v
        return self._like(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self._like({(0,) * self.nvars: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, weights=None) -> int:
        w = weights or [1] * self.nvars
        return max((sum(a * b for a, b in zip(k, w)) for k in self.terms), default=0)

    def evaluate(self, values):
        total = 0
        for k, v in self.terms.items():
            term = v
            for x, e in zip(values, k):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def substitute(self, images: list, nvars: int, cls=None):
        """Replace variable i by the polynomial ``images[i]`` (all in ``nvars`` variables)."""
        cls = cls or Poly
        out = cls(nvars, {})
        powers: dict = {}
        for k, v in self.terms.items():
            term = cls(nvars, {(0,) * nvars: v})
            for i, e in enumerate(k):
                if e:
                    p = powers.get((i, e))
                    if p is None:
                        p = powers[(i, e)] = images[i] ** e
                    term = term * p
            out = out + term
        return cls(nvars, out.terms)

    def __repr__(self):
        return f"{type(self).__name__}({self.nvars}, {self.to_string()})"

    def to_string(self, names=None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            v = self.terms[k]
            mono = "*".join(names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e)
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class SymPoly(Poly):
    """Polynomial in ``x_1..x_n`` expected to be symmetric."""

    def is_symmetric(self) -> bool:
        for k, v in self.terms.items():
            for i in range(self.nvars - 1):
                s = list(k)
                s[i], s[i + 1] = s[i + 1], s[i]
                if self.terms.get(tuple(s), 0) != v:
                    return False
        return True


class EBasisPoly(Poly):
    """Polynomial in generators ``X_1, X_2, ...`` of weights ``1, 2, ...`` (or several such alphabets)."""

    __slots__ = ("names", "weights")

    def __init__(self, nvars, terms=None, names=None, weights=None):
        super().__init__(nvars, terms)
        self.names = names or [f"X{i + 1}" for i in range(nvars)]
        self.weights = weights or [i + 1 for i in range(nvars)]

    def _like(self, terms):
        return EBasisPoly(self.nvars, terms, self.names, self.weights)

    def weighted_degree(self) -> int:
        return self.degree(self.weights)

    def __str__(self):
        return self.to_string(self.names)

    def to_json(self):
        return {
            "generators": self.names,
            "terms": [{"monomial": {self.names[i]: e for i, e in enumerate(k) if e}, "coefficient": v} for k, v in sorted(self.terms.items(), reverse=True)],
        }

    def to_sym(self, n: int) -> SymPoly:
        """Substitute ``X_k -> e_k(x_1..x_n)``."""
        imgs = [elementary(k, n) for k in self.weights]
        return self.substitute(imgs, n, SymPoly)


@lru_cache(maxsize=None)
def _elementary_terms(k: int, n: int):
    out = {}
    for S in itertools.combinations(range(n), k):
        e = [0] * n
        for i in S:
            e[i] = 1
        out[tuple(e)] = 1
    return out


def elementary(k: int, n: int) -> SymPoly:
    if k < 0:
        return SymPoly(n, {})
    return SymPoly(n, dict(_elementary_terms(k, n)))


def complete(k: int, n: int) -> SymPoly:
    out = {}
    for S in itertools.combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in S:
            e[i] += 1
        out[tuple(e)] = 1
    return SymPoly(n, out)


def power_sum(k: int, n: int) -> SymPoly:
    out = {}
    for i in range(n):
        e = [0] * n
        e[i] = k
        out[tuple(e)] = 1
    return SymPoly(n, out)


class _EProducts:
    """Cache of ``e_1^{a_1} ... e_n^{a_n}`` in ``n`` variables."""

    def __init__(self, n):
        self.n = n
        self.cache = {(0,) * n: SymPoly.const(n, 1)}

    def get(self, a: tuple) -> SymPoly:
        p = self.cache.get(a)
        if p is None:
            k = max(i for i, x in enumerate(a) if x)
            b = list(a)
            b[k] -= 1
            p = self.get(tuple(b)) * elementary(k + 1, self.n)
            self.cache[a] = p
        return p


def _reduce(terms: dict, n: int, prods: _EProducts, coeff_add, coeff_scale, coeff_zero):
    """Leading-monomial reduction; ``terms`` maps x-exponents to coefficients of any ring."""
    out = {}
    terms = dict(terms)
    while terms:
        lead = max(terms)
        c = terms[lead]
        if any(lead[i] < lead[i + 1] for i in range(n - 1)):
            raise NotSymmetric(f"leading monomial {lead} is not a partition")
        a = tuple(lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n))
        out[a] = c
        for k, v in prods.get(a).terms.items():
            nv = coeff_add(terms.get(k, coeff_zero), coeff_scale(c, -v))
            if nv == coeff_zero or (hasattr(nv, "is_zero") and nv.is_zero()):
                terms.pop(k, None)
            else:
                terms[k] = nv
    return out


def expand_in_e(f: SymPoly, degree: int | None = None) -> EBasisPoly:
    """Unique polynomial ``P`` with ``P(e_1, ..., e_n) = f``.

    Raises :class:`InsufficientVariables` when the degree of ``f`` exceeds the
    number of variables (the expression would then not be unique).
    """
    n = f.nvars
    if not f.terms:
        return EBasisPoly(n, {})
    if not isinstance(f, SymPoly):
        f = SymPoly(n, f.terms)
    if not f.is_symmetric():
        raise NotSymmetric("polynomial is not symmetric")
    deg = f.degree()
    if deg > n:
        raise InsufficientVariables(f"degree {deg} needs at least {deg} variables, have {n}")
    parts = {k: v for k, v in f.terms.items() if all(k[i] >= k[i + 1] for i in range(n - 1))}
    return EBasisPoly(n, _reduce_partitions(parts, n))


@lru_cache(maxsize=None)
def _zero_one_count(rows: tuple, cols: tuple) -> int:
    """Number of 0-1 matrices with the given row sums and (sorted, positive) column sums."""
    if not rows:
        return int(not cols)
    r, rest = rows[0], rows[1:]
    groups = sorted(Counter(cols).items(), reverse=True)
    total = 0

    def pick(g, need, weight, new):
        nonlocal total
        if g == len(groups):
            if need == 0:
                nxt = tuple(sorted((c for c in new if c), reverse=True))
                total += weight * _zero_one_count(rest, nxt)
            return
        cap, cnt = groups[g]
        for k in range(min(cnt, need) + 1):
            pick(g + 1, need - k, weight * comb(cnt, k), new + [cap - 1] * k + [cap] * (cnt - k))

    pick(0, r, 1, [])
    return total


def _e_partition_coeff(a: tuple, mu: tuple) -> int:
    """Coefficient of ``x^mu`` in ``e_1^{a_1} e_2^{a_2} ...``."""
    rows = tuple(sorted((k + 1 for k, m in enumerate(a) for _ in range(m)), reverse=True))
    return _zero_one_count(rows, tuple(p for p in mu if p))


def _partitions_padded(d: int, n: int):
    for lam in _partitions(d):
        if len(lam) <= n:
            yield lam + (0,) * (n - len(lam))


def _reduce_partitions(terms: dict, n: int) -> dict:
    """Elementary expansion from the coefficients on partition exponents only.

    The leading partition ``λ`` of what is left is matched by ``e`` of the
    conjugate partition; every other monomial of that product is smaller.
    """
    terms = {k: v for k, v in terms.items() if v}
    out = {}
    while terms:
        lead = max(terms)
        c = terms.pop(lead)
        a = tuple(lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n))
        out[a] = c
        for mu in _partitions_padded(sum(lead), n):
            if mu >= lead:
                continue
            v = _e_partition_coeff(a, mu)
            if v:
                nv = terms.get(mu, 0) - c * v
                if nv:
                    terms[mu] = nv
                else:
                    terms.pop(mu, None)
    return out


def _partition_part(P: "EBasisPoly", n: int) -> dict:
    """Coefficients of ``P(e_1, ..., e_n)`` on partition exponents."""
    out: dict = {}
    for a, c in P.terms.items():
        d = sum((k + 1) * m for k, m in enumerate(a))
        for mu in _partitions_padded(d, n):
            v = _e_partition_coeff(a, mu)
            if v:
                out[mu] = out.get(mu, 0) + c * v
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# universal polynomials


@lru_cache(maxsize=None)
def universal_Pr(r: int) -> EBasisPoly:
    """``P_r(X_1..X_r, Y_1..Y_r)`` with ``e_r({x_i y_j}) = P_r(e(x), e(y))``."""
    if r < 1:
        raise ValueError("r >= 1")
    n = r
    # e_r over the n*n products x_i y_j, as {x_exp: {y_exp: coeff}}
    pairs = [(i, j) for i in range(n) for j in range(n)]
    bi: dict = {}
    for S in itertools.combinations(pairs, r):
        xe, ye = [0] * n, [0] * n
        for i, j in S:
            xe[i] += 1
            ye[j] += 1
        inner = bi.setdefault(tuple(xe), {})
        inner[tuple(ye)] = inner.get(tuple(ye), 0) + 1
    bi = {k: Poly(n, v) for k, v in bi.items()}
    zero = Poly(n, {})
    xpart = _reduce(bi, n, _EProducts(n), lambda a, b: a + b, lambda c, v: c * v, zero)
    terms = {}
    for a, coeff in xpart.items():
        ypart = expand_in_e(SymPoly(n, coeff.terms))
        for b, v in ypart.terms.items():
            terms[a + b] = terms.get(a + b, 0) + v
    names = [f"X{i + 1}" for i in range(n)] + [f"Y{i + 1}" for i in range(n)]
    weights = list(range(1, n + 1)) * 2
    return EBasisPoly(2 * n, terms, names, weights)


def _alphabet(f: SymPoly) -> list:
    """Monomials of ``f`` repeated by multiplicity (coefficients must be non-negative)."""
    out = []
    for k, v in sorted(f.terms.items()):
        if v < 0:
            raise ValueError("plethysm by monomial substitution needs non-negative coefficients")
        out.extend([k] * v)
    return out


def _e_of_alphabet(alpha: list, kmax: int, n: int) -> list:
    """``[e_0, ..., e_kmax]`` of the alphabet via ``Π (1 + m t)``."""
    E = [SymPoly.const(n, 1)] + [SymPoly(n, {}) for _ in range(kmax)]
    for mono in alpha:
        m = SymPoly(n, {mono: 1})
        for k in range(kmax, 0, -1):
            E[k] = E[k] + E[k - 1] * m
    return E


def plethysm_e(outer: EBasisPoly, inner, n: int) -> SymPoly:
    """``outer[inner]`` in ``n`` variables: e_k of the alphabet of monomials of ``inner``."""
    inner_sym = inner.to_sym(n) if isinstance(inner, EBasisPoly) else SymPoly(n, inner.terms)
    need = outer.weighted_degree() * max(inner_sym.degree(), 1) if outer.terms else 0
    if n < need:
        raise InsufficientVariables(f"plethysm of degree {need} needs {need} variables, have {n}")
    kmax = max(outer.weights) if outer.terms else 0
    E = _e_of_alphabet(_alphabet(inner_sym), kmax, n)
    return outer.substitute([E[w] for w in outer.weights], n, SymPoly)


@lru_cache(maxsize=None)
def universal_Prs(r: int, s: int) -> EBasisPoly:
    """``P_{r,s}``: the elementary expansion of ``e_r[e_s]`` in ``rs`` variables."""
    if r < 1 or s < 1:
        raise ValueError("r, s >= 1")
    n = r * s
    # e_r of the alphabet of s-subset monomials, kept on partition exponents only
    inner = list(itertools.combinations(range(n), s))
    terms: dict = {}
    for S in itertools.combinations(inner, r):
        e = [0] * n
        for sub in S:
            for i in sub:
                e[i] += 1
        if all(e[i] >= e[i + 1] for i in range(n - 1)):
            k = tuple(e)
            terms[k] = terms.get(k, 0) + 1
    return EBasisPoly(n, _reduce_partitions(terms, n))


def char_functor(F: FunctorSpec, n: int) -> SymPoly:
    """Weights of the diagonal torus on ``F(Z^n)``: one monomial per basis key."""
    if num_args(F) != 1:
        raise ValueError("characters are defined for one-argument functors")
    terms: dict = {}
    for key in basis(F, n):
        e = [0] * n
        for _, lab in leaves(F, key):
            e[lab] += 1
        k = tuple(e)
        terms[k] = terms.get(k, 0) + 1
    return SymPoly(n, terms)


def verify_axiom3_char(r: int, s: int) -> bool:
    """``char(Λ^r ∘ Λ^s) = P_{r,s}(e_1, ..., e_{rs})`` in ``rs`` variables."""
    from .functors import Compose, Lambda

    n = r * s
    lhs = char_functor(Compose(Lambda(r), Lambda(s)), n)
    if not lhs.is_symmetric():
        return False
    lhs_parts = {k: v for k, v in lhs.terms.items() if all(k[i] >= k[i + 1] for i in range(n - 1))}
    return lhs_parts == _partition_part(universal_Prs(r, s), n)


def lambda_t_check(r: int) -> bool:
    """Degree-``r`` part of ``Π_{i,j} (1 + x_i y_j t)`` equals ``P_r(e(x), e(y))`` (``r`` variables per alphabet)."""
    n = r
    N = 2 * n
    # Π (1 + x_i y_j t): coefficient of t^r is e_r of the products
    prods = []
    for i in range(n):
        for j in range(n):
            e = [0] * N
            e[i] = 1
            e[n + j] = 1
            prods.append(tuple(e))
    E = _e_of_alphabet(prods, r, N)
    P = universal_Pr(r)
    imgs = [_embed(elementary(k, n), N, 0) for k in range(1, n + 1)] + [_embed(elementary(k, n), N, n) for k in range(1, n + 1)]
    return P.substitute(imgs, N, Poly) == Poly(N, E[r].terms)


def _embed(f: Poly, N: int, offset: int) -> Poly:
    out = {}
    for k, v in f.terms.items():
        e = [0] * N
        e[offset:offset + len(k)] = k
        out[tuple(e)] = v
    return Poly(N, out)


def pr_substitution_identity(r: int) -> bool:
    """``P_r(1, 0, ..., 0, Y_1, ..., Y_r) = Y_r``."""
    P = universal_Pr(r)
    n = r
    Y = [Poly.var(n, i) for i in range(n)]
    imgs = [Poly.const(n, 1)] + [Poly(n, {}) for _ in range(n - 1)] + Y
    return P.substitute(imgs, n, Poly) == Y[r - 1]


def lambda_universal_check(max_degree: int = 6) -> dict:
    """Axioms of the λ-ring ``Z[s_1, s_2, ...]`` (``λ^r(s_1) = s_r``) up to ``max_degree``.

    Elements are realized as symmetric functions, ``s_k = e_k``, with an
    element given by an alphabet of monomials: sums are unions, products are
    pairwise products and ``λ^r`` is ``e_r`` of the alphabet.
    """
    if max_degree > 8:
        raise ValueError("max_degree <= 8")
    D = max_degree
    report = {"max_degree": D, "axiom1": [], "axiom2": [], "axiom3": [], "lambda1": []}
    # λ^1 and λ^0 on s_1 and on s_1 + s_1 in D variables
    n = max(D, 1)
    x = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    report["lambda1"].append({"element": "s1", "ok": _e_of_alphabet(x, 1, n)[1] == elementary(1, n)})
    report["lambda1"].append({"element": "s1*s1", "ok": _e_of_alphabet(_products(x, x, n), 1, n)[1] == elementary(1, n) * elementary(1, n)})
    # axiom 1: λ^r(a + b) = Σ λ^i(a) λ^{r-i}(b) with a, b independent alphabets
    for r in range(1, D + 1):
        h = r // 2 + r % 2 if r > 1 else 1
        m = max(r, 1)
        N = 2 * m
        A = [tuple(int(i == j) for i in range(N)) for j in range(m)]
        B = [tuple(int(i == m + j) for i in range(N)) for j in range(m)]
        lhs = _e_of_alphabet(A + B, r, N)[r]
        EA, EB = _e_of_alphabet(A, r, N), _e_of_alphabet(B, r, N)
        rhs = SymPoly(N, {})
        for i in range(r + 1):
            rhs = rhs + EA[i] * EB[r - i]
        report["axiom1"].append({"r": r, "ok": lhs == rhs})
    # axiom 2: λ^r(xy) = P_r(λ^1 x, ..., λ^1 y, ...)
    for r in range(1, D // 2 + 1):
        ok = lambda_t_check(r) and pr_substitution_identity(r)
        report["axiom2"].append({"r": r, "ok": ok})
    # axiom 3: λ^r(λ^s x) = P_{r,s}(λ^1 x, ..., λ^{rs} x), the left side from functor characters
    for r in range(1, D + 1):
        for s in range(1, D + 1):
            if r * s <= D:
                report["axiom3"].append({"r": r, "s": s, "ok": verify_axiom3_char(r, s)})
    report["ok"] = all(rec["ok"] for key in ("axiom1", "axiom2", "axiom3", "lambda1") for rec in report[key])
    return report


def _products(A, B, n):
    return [tuple(x + y for x, y in zip(a, b)) for a in A for b in B]


def e_monomials_independent(d: int, n: int | None = None) -> bool:
    """The products ``e_λ`` over partitions ``λ`` of ``d`` are linearly independent in ``n >= d`` variables."""
    from .linalg import IntMatrix, rank

    n = d if n is None else n
    if n < d:
        raise InsufficientVariables("need n >= d")
    parts = list(_partitions(d))
    prods = _EProducts(n)
    polys = []
    for lam in parts:
        a = [0] * n
        for p in lam:
            a[p - 1] += 1
        polys.append(prods.get(tuple(a)))
    monos = sorted({k for p in polys for k in p.terms})
    idx = {k: i for i, k in enumerate(monos)}
    M = IntMatrix.from_sparse(len(monos), len(polys), {(idx[k], j): v for j, p in enumerate(polys) for k, v in p.terms.items()})
    return rank(M) == len(parts)


def _partitions(d, maxpart=None):
    maxpart = d if maxpart is None else maxpart
    if d == 0:
        yield ()
        return
    for p in range(min(d, maxpart), 0, -1):
        for rest in _partitions(d - p, p):
            yield (p,) + rest
