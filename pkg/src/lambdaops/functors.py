"""Symbolic polynomial functors on free modules.

A :class:`FunctorSpec` is an expression tree over the atoms ``Lambda(r)``,
``Sym(r)``, ``DividedPower(r)``, ``TensorPower(r)``, the identity, zero, and the
binary nodes direct sum, tensor product and composition.  Atoms act on their
(single) argument; ``Arg(k)`` lets an expression take several module
arguments, which is how bifunctors such as ``X0 ⊗ X1`` are written.

Basis elements ("keys") are nested tuples of the argument labels:

* ``Arg``: the label itself
* ``Lambda``: strictly increasing r-tuple; ``Sym``/``DividedPower``: weakly
  increasing; ``TensorPower``: any r-tuple
* direct sum ``(0, k)`` / ``(1, k)``; tensor product ``(k_left, k_right)``
* composition ``F∘G``: an ``F``-key whose labels are ``G``-keys

Bases are sorted lexicographically, so a functor applied to two modules with
the same labels always yields literally the same ordered basis.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .linalg import IntMatrix

__all__ = [
    "FunctorSpec",
    "Atom",
    "Arg",
    "Zero",
    "DirectSum",
    "TensorProduct",
    "Compose",
    "Lambda",
    "Sym",
    "DividedPower",
    "TensorPower",
    "Identity",
    "SpecParseError",
    "parse_spec",
    "basis",
    "leaves",
    "apply_column",
    "apply_to_module",
    "apply_to_hom",
    "apply_to_homs",
    "cross_effect",
    "degree_of",
    "structural_degree",
    "preserves_zero",
    "num_args",
]


class SpecParseError(ValueError):
    pass


class FunctorSpec:
    """Base class of functor expressions (immutable, hashable)."""

    def __add__(self, other):
        return DirectSum(self, other)

    def __mul__(self, other):
        return TensorProduct(self, other)

    def __matmul__(self, other):
        return Compose(self, other)

    @property
    def degree(self) -> int:
        return structural_degree(self)

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, eq=True)
class Atom(FunctorSpec):
    kind: str  # "L", "S", "G", "T"
    r: int

    def __post_init__(self):
        if self.kind not in "LSGT" or len(self.kind) != 1:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.r < 0:
            raise ValueError("atom exponent must be non-negative")


@dataclass(frozen=True, eq=True)
class Arg(FunctorSpec):
    index: int = 0


@dataclass(frozen=True, eq=True)
class Zero(FunctorSpec):
    """The zero functor."""


@dataclass(frozen=True, eq=True)
class DirectSum(FunctorSpec):
    left: FunctorSpec
    right: FunctorSpec


@dataclass(frozen=True, eq=True)
class TensorProduct(FunctorSpec):
    left: FunctorSpec
    right: FunctorSpec


@dataclass(frozen=True, eq=True)
class Compose(FunctorSpec):
    outer: FunctorSpec
    inner: FunctorSpec

    def __post_init__(self):
        if num_args(self.outer) > 1:
            raise ValueError("the outer functor of a composition must take one argument")


def Lambda(r: int) -> Atom:
    return Atom("L", r)


def Sym(r: int) -> Atom:
    return Atom("S", r)


def DividedPower(r: int) -> Atom:
    return Atom("G", r)


def TensorPower(r: int) -> Atom:
    return Atom("T", r)


Identity = Arg(0)


def to_string(F: FunctorSpec) -> str:
    if isinstance(F, Atom):
        return f"{F.kind}{F.r}"
    if isinstance(F, Arg):
        return "I" if F.index == 0 else f"X{F.index}"
    if isinstance(F, Zero):
        return "Z"
    if isinstance(F, DirectSum):
        return f"{to_string(F.left)}+{to_string(F.right)}"
    if isinstance(F, TensorProduct):
        wrap = lambda G: f"({to_string(G)})" if isinstance(G, DirectSum) else to_string(G)
        return f"{wrap(F.left)}*{wrap(F.right)}"
    if isinstance(F, Compose):
        wrap = lambda G: to_string(G) if isinstance(G, (Atom, Arg, Zero, Compose)) else f"({to_string(G)})"
        return f"{wrap(F.outer)}@{wrap(F.inner)}"
    raise TypeError(F)


# ---------------------------------------------------------------------------
# parsing:  sum := prod ('+' prod)* ; prod := comp ('*' comp)* ; comp := atom ('@' comp)?

_TOKEN = re.compile(r"\s*(?:([LSGT])(\d+)|(I)|X(\d+)|(Z)|(0)|([+*@()]))")


def parse_spec(text: str) -> FunctorSpec:
    """Parse ``L2``, ``S3``, ``G2``, ``T2``, ``I``, ``Z`` with ``+``, ``*``, ``@`` and parentheses."""
    if not isinstance(text, str):
        raise SpecParseError("functor spec must be a string")
    toks = []
    pos = 0
    s = text.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise SpecParseError(f"unexpected character at position {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            toks.append(Atom(m.group(1), int(m.group(2))))
        elif m.group(3):
            toks.append(Arg(0))
        elif m.group(4):
            toks.append(Arg(int(m.group(4))))
        elif m.group(5) or m.group(6):
            toks.append(Zero())
        else:
            toks.append(m.group(7))
        while pos < len(s) and s[pos].isspace():
            pos += 1
    if not toks:
        raise SpecParseError("empty functor spec")
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def p_sum():
        node = p_prod()
        while peek() == "+":
            take()
            node = DirectSum(node, p_prod())
        return node

    def p_prod():
        node = p_comp()
        while peek() == "*":
            take()
            node = TensorProduct(node, p_comp())
        return node

    def p_comp():
        node = p_atom()
        if peek() == "@":
            take()
            try:
                node = Compose(node, p_comp())
            except ValueError as e:
                raise SpecParseError(str(e)) from None
        return node

    def p_atom():
        t = peek()
        if t is None:
            raise SpecParseError(f"unexpected end of spec {text!r}")
        if t == "(":
            take()
            node = p_sum()
            if peek() != ")":
                raise SpecParseError(f"missing ')' in {text!r}")
            take()
            return node
        if isinstance(t, str):
            raise SpecParseError(f"unexpected {t!r} in {text!r}")
        return take()

    node = p_sum()
    if i != len(toks):
        raise SpecParseError(f"trailing input in {text!r}")
    return node


# ---------------------------------------------------------------------------
# structure


@lru_cache(maxsize=None)
def num_args(F: FunctorSpec) -> int:
    if isinstance(F, Arg):
        return F.index + 1
    if isinstance(F, (Atom, Zero)):
        return 1
    if isinstance(F, (DirectSum, TensorProduct)):
        return max(num_args(F.left), num_args(F.right))
    if isinstance(F, Compose):
        return num_args(F.inner)
    raise TypeError(F)


@lru_cache(maxsize=None)
def structural_degree(F: FunctorSpec) -> int:
    """Degree: atoms r, tensor adds, composition multiplies, sum takes max."""
    if isinstance(F, Atom):
        return F.r
    if isinstance(F, Arg):
        return 1
    if isinstance(F, Zero):
        return 0
    if isinstance(F, DirectSum):
        return max(structural_degree(F.left), structural_degree(F.right))
    if isinstance(F, TensorProduct):
        return structural_degree(F.left) + structural_degree(F.right)
    if isinstance(F, Compose):
        return structural_degree(F.outer) * structural_degree(F.inner)
    raise TypeError(F)


def _atom_rank(kind, r, n):
    if kind == "L":
        return comb(n, r)
    if kind in "SG":
        return comb(n + r - 1, r) if n > 0 else int(r == 0)
    return n**r


def apply_to_module(F: FunctorSpec, rank) -> int:
    """Rank of ``F`` applied to free modules of the given rank(s)."""
    ranks = (rank,) if isinstance(rank, int) else tuple(rank)
    if isinstance(F, Atom):
        return _atom_rank(F.kind, F.r, ranks[0])
    if isinstance(F, Arg):
        return ranks[F.index] if F.index < len(ranks) else 0
    if isinstance(F, Zero):
        return 0
    if isinstance(F, DirectSum):
        return apply_to_module(F.left, ranks) + apply_to_module(F.right, ranks)
    if isinstance(F, TensorProduct):
        return apply_to_module(F.left, ranks) * apply_to_module(F.right, ranks)
    if isinstance(F, Compose):
        return apply_to_module(F.outer, apply_to_module(F.inner, ranks))
    raise TypeError(F)


def preserves_zero(F: FunctorSpec) -> bool:
    """``F(0) = 0``: no constant part."""
    return apply_to_module(F, (0,) * num_args(F)) == 0


# ---------------------------------------------------------------------------
# bases


def basis(F: FunctorSpec, modules) -> list:
    """Sorted basis keys of ``F`` applied to modules with the given (sorted) label lists.

    ``modules`` is a label list for one-argument use or a tuple of label lists.
    An int ``n`` stands for the labels ``0..n-1``.
    """
    mods = _as_modules(modules)
    return _basis(F, mods)


def _as_modules(modules):
    if isinstance(modules, int):
        return (tuple(range(modules)),)
    if isinstance(modules, tuple) and modules and all(isinstance(m, (tuple, list, range)) for m in modules):
        return tuple(tuple(m) for m in modules)
    if isinstance(modules, (list, range)):
        return (tuple(modules),)
    if isinstance(modules, tuple) and all(isinstance(m, int) for m in modules):
        return tuple(tuple(range(m)) for m in modules)
    return (tuple(modules),)


def _basis(F, mods) -> list:
    if isinstance(F, Arg):
        return list(mods[F.index]) if F.index < len(mods) else []
    if isinstance(F, Zero):
        return []
    if isinstance(F, Atom):
        labels = mods[0]
        if F.kind == "L":
            return list(itertools.combinations(labels, F.r))
        if F.kind in "SG":
            return list(itertools.combinations_with_replacement(labels, F.r))
        return list(itertools.product(labels, repeat=F.r))
    if isinstance(F, DirectSum):
        return [(0, k) for k in _basis(F.left, mods)] + [(1, k) for k in _basis(F.right, mods)]
    if isinstance(F, TensorProduct):
        return list(itertools.product(_basis(F.left, mods), _basis(F.right, mods)))
    if isinstance(F, Compose):
        return _basis(F.outer, (tuple(_basis(F.inner, mods)),))
    raise TypeError(F)


def leaves(F: FunctorSpec, key):
    """Yield ``(arg_index, label)`` for every argument label occurring in ``key``."""
    if isinstance(F, Arg):
        yield (F.index, key)
    elif isinstance(F, Atom):
        for a in key:
            yield (0, a)
    elif isinstance(F, DirectSum):
        yield from leaves(F.left if key[0] == 0 else F.right, key[1])
    elif isinstance(F, TensorProduct):
        yield from leaves(F.left, key[0])
        yield from leaves(F.right, key[1])
    elif isinstance(F, Compose):
        for _, g in leaves(F.outer, key):
            yield from leaves(F.inner, g)
    elif isinstance(F, Zero):
        return
    else:
        raise TypeError(F)


# ---------------------------------------------------------------------------
# action on maps


def _inversions_sign(t) -> int:
    s = 1
    n = len(t)
    for i in range(n):
        ti = t[i]
        for j in range(i + 1, n):
            if ti > t[j]:
                s = -s
    return s


def _wedge(cols) -> dict:
    terms = {(): 1}
    for col in cols:
        new = {}
        for t, c in terms.items():
            for lab, v in col.items():
                if lab in t:
                    continue
                k = t + (lab,)
                new[k] = new.get(k, 0) + c * v
        terms = new
        if not terms:
            return {}
    out = {}
    for t, c in terms.items():
        k = tuple(sorted(t))
        v = c * _inversions_sign(t)
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _sym(cols) -> dict:
    terms = {(): 1}
    for col in cols:
        new = {}
        for t, c in terms.items():
            for lab, v in col.items():
                k = tuple(sorted(t + (lab,)))
                new[k] = new.get(k, 0) + c * v
        terms = {k: v for k, v in new.items() if v}
        if not terms:
            return {}
    return terms


def _tensor(cols) -> dict:
    terms = {(): 1}
    for col in cols:
        terms = {t + (lab,): c * v for t, c in terms.items() for lab, v in col.items()}
        if not terms:
            return {}
    return {k: v for k, v in terms.items() if v}


def _distinct_perms(key):
    """Distinct permutations of a sorted tuple, in lexicographic order."""
    a = list(key)
    n = len(a)
    yield tuple(a)
    while True:
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])
        yield tuple(a)


def _divided(key, f) -> dict:
    # coefficient of orbit-sum(c) = coefficient of the sorted tensor c in f^{⊗r}(orbit-sum(key))
    cols = {a: f(a) for a in set(key)}
    out: dict = {}
    for perm in _distinct_perms(key):
        terms = {(): 1}
        for a in perm:
            col = cols[a]
            new = {}
            for t, c in terms.items():
                last = t[-1] if t else None
                for lab, v in col.items():
                    if last is not None and lab < last:
                        continue
                    k = t + (lab,)
                    new[k] = new.get(k, 0) + c * v
            terms = new
            if not terms:
                break
        for k, v in terms.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def apply_column(F: FunctorSpec, maps: Sequence[Callable], key) -> dict:
    """Image of basis element ``key`` under ``F(f_0, f_1, ...)``.

    ``maps[k]`` sends a label of argument k to a sparse column ``{label: coeff}``.
    """
    if isinstance(F, Arg):
        return dict(maps[F.index](key))
    if isinstance(F, Zero):
        return {}
    if isinstance(F, Atom):
        f = maps[0]
        if F.kind == "G":
            return _divided(key, f)
        cols = [f(a) for a in key]
        if F.kind == "L":
            if len(set(key)) < len(key):
                return {}
            return _wedge(cols)
        if F.kind == "S":
            return _sym(cols)
        return _tensor(cols)
    if isinstance(F, DirectSum):
        side = F.left if key[0] == 0 else F.right
        return {(key[0], k): v for k, v in apply_column(side, maps, key[1]).items()}
    if isinstance(F, TensorProduct):
        a = apply_column(F.left, maps, key[0])
        if not a:
            return {}
        b = apply_column(F.right, maps, key[1])
        return {(ka, kb): va * vb for ka, va in a.items() for kb, vb in b.items()}
    if isinstance(F, Compose):
        memo: dict = {}

        def inner(g):
            r = memo.get(g)
            if r is None:
                r = memo[g] = apply_column(F.inner, maps, g)
            return r

        return apply_column(F.outer, (inner,), key)
    raise TypeError(F)


def _matrix_map(A):
    cols = A.sparse_columns()
    return lambda j: cols[j]


def apply_to_homs(F: FunctorSpec, mats: Sequence) -> IntMatrix:
    """Matrix of ``F(A_0, A_1, ...)`` in the sorted key bases."""
    mats = list(mats)
    src = basis(F, tuple(tuple(range(A.cols)) for A in mats))
    tgt = basis(F, tuple(tuple(range(A.rows)) for A in mats))
    index = {k: i for i, k in enumerate(tgt)}
    maps = tuple(_matrix_map(A) for A in mats)
    entries = {}
    for j, key in enumerate(src):
        for k, v in apply_column(F, maps, key).items():
            entries[(index[k], j)] = v
    return IntMatrix.from_sparse(len(tgt), len(src), entries)


def apply_to_hom(F: FunctorSpec, A) -> IntMatrix:
    """Matrix of ``F(A)`` (compound matrix for Lambda, Kronecker power for TensorPower, ...)."""
    n = num_args(F)
    return apply_to_homs(F, [A] * n)


# ---------------------------------------------------------------------------
# cross-effects and degree


@dataclass(frozen=True)
class CrossEffect:
    rank: int
    inclusion: IntMatrix
    keys: tuple


def cross_effect(F: FunctorSpec, ranks: Sequence[int]) -> CrossEffect:
    """``cr_k(F)(Z^{n_1}, ..., Z^{n_k})`` as the coordinate summand of ``F(⊕ Z^{n_i})``.

    A basis element belongs to the cross-effect iff its labels touch every summand.
    """
    k = len(ranks)
    if k < 2:
        raise ValueError("cross-effects need at least two arguments")
    if num_args(F) != 1:
        raise ValueError("cross-effects are computed for one-argument functors")
    labels = tuple((i, j) for i in range(k) for j in range(ranks[i]))
    full = basis(F, (labels,))
    keep = [idx for idx, key in enumerate(full) if {lab[0] for _, lab in leaves(F, key)} == set(range(k))]
    inc = IntMatrix.from_sparse(len(full), len(keep), {(r, c): 1 for c, r in enumerate(keep)})
    return CrossEffect(len(keep), inc, tuple(full[i] for i in keep))


def degree_of(F: FunctorSpec, verify: bool = True) -> int:
    """Structural degree, optionally confirmed by cross-effect vanishing on rank-1 arguments."""
    d = structural_degree(F)
    if verify and num_args(F) == 1 and preserves_zero(F):
        if cross_effect(F, [1] * (d + 1)).rank != 0:
            raise AssertionError(f"cr_{d + 1}({F}) does not vanish")
    return d
