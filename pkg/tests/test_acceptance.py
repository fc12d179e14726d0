"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Lines are collected in ``RESULTS`` and echoed in pytest's terminal summary.
Running this file as a script prints them directly.
"""

import itertools
import random
import time
from math import comb, prod

from lambdaops.complexes import ChainComplex, homology_all, is_acyclic, tensor_bicomplex, tot, validate
from lambdaops.derived import binary_lambda, counterexample_h2, induced_F1, simplicial_tensor
from lambdaops.engine import nfg_basis
from lambdaops.exact import DiagonalWitness, SesWitness, check_diagonal, check_ses
from lambdaops.functors import Lambda, Sym, TensorPower
from lambdaops.linalg import FgAbGroup, IntMatrix, is_unimodular
from lambdaops.randomgen import random_acyclic, random_binary_acyclic, random_binary_bicomplex, random_complex
from lambdaops.schur import schur_algebra, truncate_to_schur_module
from lambdaops.simplicial import dold_kan_iso
from lambdaops.symfunc import lambda_t_check, pr_substitution_identity, universal_Pr, universal_Prs, verify_axiom3_char
from lambdaops.validator import replay_witness
from lambdaops.witness import (
    binary_nonsplit_check,
    product_vanishing_witness,
    shift_witness,
    split_acyclic_mono,
    split_chain_idempotent,
)
from strategies import idempotent_case, mono_case

RESULTS = []


def record(n, name, ok, detail, elapsed, limit=None):
    if limit is not None and elapsed >= limit:
        ok = False
        detail = f"{detail}; runtime {elapsed:.2f}s exceeds {limit}s"
    status = "PASS" if ok else "FAIL"
    RESULTS.append(f"[{status}] criterion {n:2d}: {name} ({detail}; {elapsed:.2f}s)")
    return ok


def line(x):
    return ChainComplex({0: 1, 1: 1}, {1: IntMatrix.from_rows([[x]])})


def nonzero_ranks(C):
    return {i: C.rank(i) for i in range(C.length() + 1) if C.rank(i)}


def test_criterion_01_invertible_module():
    t = time.perf_counter()
    bad = []
    for r, x in itertools.product((2, 3, 4), (2, 3, 5)):
        Y = induced_F1(Lambda(r), line(x))
        ok = nonzero_ranks(Y) == {r - 1: 1, r: 1}
        ok = ok and Y.differential(r).to_dense() == IntMatrix.from_rows([[x]])
        ok = ok and all(Y.differential(i).to_dense().is_zero() for i in range(1, Y.length() + 1) if i != r)
        if not ok:
            bad.append((r, x))
    dt = time.perf_counter() - t
    assert record(1, "Lambda^r of (Z -x-> Z) is Z -x-> Z in degrees r, r-1", not bad, f"9 cases, mismatches {bad}", dt, 5)


def test_criterion_02_counterexample():
    t = time.perf_counter()
    H = counterexample_h2()
    dt = time.perf_counter() - t
    ok = H == FgAbGroup(0, (2,)) and H.free_rank == 0 and tuple(H.torsion) == (2,)
    assert record(2, "non-split counterexample homology is Z/2", ok, f"computed free_rank={H.free_rank} torsion={list(H.torsion)}", dt, 1)


def test_criterion_03_dold_kan_round_trip():
    rng = random.Random(3)
    t = time.perf_counter()
    failures = 0
    for _ in range(50):
        C = random_complex(rng, rng.randint(0, 4), 4)
        N, iso = dold_kan_iso(C)
        ok = all(is_unimodular(f) for f in iso.values() if f.rows)
        ok = ok and all(iso[m].rows == C.rank(m) == N.rank(m) for m in iso)
        ok = ok and all(
            iso[m - 1] @ C.differential(m).to_dense() == N.differential(m).to_dense() @ iso[m]
            for m in range(1, C.length() + 1)
        )
        failures += not ok
    dt = time.perf_counter() - t
    assert record(3, "N(Gamma(C)) isomorphic to C by an explicit chain isomorphism", failures == 0, f"50 complexes, {failures} failures", dt, 30)


def test_criterion_04_length_bound_and_guard():
    rng = random.Random(4)
    t = time.perf_counter()
    failures = []
    cases = 0
    for k in range(50):
        C = random_complex(rng, rng.randint(1, 2), 3)
        for F in (Lambda(2), Lambda(3), Sym(2)):
            bound = F.degree * C.length()
            Y = induced_F1(F, C)
            guard = len(nfg_basis(F, C, bound + 1))
            cases += 1
            if not (Y.length() <= bound and guard == 0 and validate(Y).ok):
                failures.append((k, str(F)))
    dt = time.perf_counter() - t
    assert record(4, "length(NF Gamma C) <= d*l with empty guard at d*l+1", not failures, f"{cases} cases, failures {failures}", dt)


def test_criterion_05_acyclicity_preservation():
    rng = random.Random(5)
    t = time.perf_counter()
    failures = 0
    cases = 0
    for _ in range(100):
        C = random_acyclic(rng, rng.randint(1, 3), 2)
        for r in (1, 2, 3):
            cases += 1
            failures += not is_acyclic(induced_F1(Lambda(r), C))
    dt = time.perf_counter() - t
    assert record(5, "Lambda^r (r <= 3) sends acyclic complexes to acyclic complexes", failures == 0, f"100 complexes, {cases} cases, {failures} failures", dt, 120)


def test_criterion_06_eilenberg_zilber():
    rng = random.Random(6)
    t = time.perf_counter()
    homology_bad, kl_bad, sum_bad = 0, [], 0
    for _ in range(25):
        P = random_complex(rng, rng.randint(1, 2), 2)
        Q = random_complex(rng, rng.randint(1, 2), 2)
        D = simplicial_tensor(P, Q)
        hd, ht = homology_all(D), homology_all(tot(tensor_bicomplex(P, Q)))
        if any(hd.get(i, FgAbGroup()) != ht.get(i, FgAbGroup()) for i in set(hd) | set(ht)):
            homology_bad += 1
        k, l = P.length(), Q.length()
        if D.length() > k * l:
            kl_bad.append((k, l, D.length()))
        sum_bad += D.length() > k + l
    dt = time.perf_counter() - t
    detail = (
        f"25 pairs; homology mismatches {homology_bad}; length > k*l in {len(kl_bad)} pairs, e.g. (k, l, length) {kl_bad[:3]}; "
        f"length > k+l in {sum_bad} pairs"
    )
    ok = homology_bad == 0 and not kl_bad
    assert record(6, "Eilenberg-Zilber homology agreement and length <= k*l", ok, detail, dt)


def test_criterion_07_shift_certificate():
    rng = random.Random(7)
    t = time.perf_counter()
    failures = 0
    sequences = 0
    for _ in range(10):
        N = random_binary_acyclic(rng, rng.randint(1, 2), 2)
        k = rng.randint(1, 2)
        W = shift_witness(N, k)
        for rel in W.relations:
            if isinstance(rel, SesWitness):
                sequences += 1
                failures += not check_ses(rel)
        failures += not W.replay()
        failures += not replay_witness(W.to_json()).ok
    dt = time.perf_counter() - t
    assert record(7, "shift-lemma chains: every sequence exact and ledger closes", failures == 0, f"10 complexes, {sequences} sequences, {failures} failures", dt)


def test_criterion_08_product_certificate():
    rng = random.Random(8)
    t = time.perf_counter()
    failures = 0
    diagonals = 0
    for _ in range(10):
        P = random_binary_acyclic(rng, rng.randint(1, 2), 2)
        Q = random_binary_acyclic(rng, rng.randint(1, 2), 2)
        W = product_vanishing_witness(P, Q)
        for rel in W.relations:
            if isinstance(rel, DiagonalWitness):
                diagonals += 1
                failures += not check_diagonal(rel)
            else:
                failures += not check_ses(rel)
        failures += not W.replay()
        failures += not replay_witness(W.to_json()).ok
    dt = time.perf_counter() - t
    ok = failures == 0 and diagonals > 0
    assert record(8, "[P tensor_Delta Q] = 0 certificate at n = 1", ok, f"10 pairs, {diagonals} diagonal terminations, {failures} failures", dt)


def e_num(k, xs):
    return sum(prod(c) for c in itertools.combinations(xs, k))


def test_criterion_09_axiom2():
    t = time.perf_counter()
    subst = {r: pr_substitution_identity(r) for r in range(1, 5)}
    mult = {r: lambda_t_check(r) for r in range(1, 5)}
    # independent numeric oracle: e_r of all products x_i*y_j
    rng = random.Random(9)
    numeric = True
    for r in range(1, 5):
        P = universal_Pr(r)
        for _ in range(3):
            xs = [rng.randint(-3, 3) for _ in range(r)]
            ys = [rng.randint(-3, 3) for _ in range(r)]
            vals = [e_num(k, xs) for k in range(1, r + 1)] + [e_num(k, ys) for k in range(1, r + 1)]
            numeric &= P.evaluate(vals) == e_num(r, [x * y for x in xs for y in ys])
    dt = time.perf_counter() - t
    ok = all(subst.values()) and all(mult.values()) and numeric
    assert record(9, "P_r(1,0,...,0,Y) = Y_r and lambda_t multiplicativity, r <= 4", ok, f"substitution {subst}, multiplicativity {mult}, numeric {numeric}", dt)


def test_criterion_10_axiom3():
    t = time.perf_counter()
    chars = {(r, s): verify_axiom3_char(r, s) for r, s in ((2, 2), (2, 3), (3, 2))}
    P22 = universal_Prs(2, 2)
    # brute-force plethysm: e_2 of the six pairwise products, against X1*X3 - X4 in e(x)
    rng = random.Random(10)
    brute = True
    for _ in range(10):
        xs = [rng.randint(-4, 4) for _ in range(4)]
        e = [e_num(k, xs) for k in range(1, 5)]
        want = e_num(2, [prod(c) for c in itertools.combinations(xs, 2)])
        brute &= e[0] * e[2] - e[3] == want and P22.evaluate(e) == want
    dt = time.perf_counter() - t
    ok = all(chars.values()) and str(P22) == "X1*X3 - X4" and brute
    assert record(10, "char(Lambda^r o Lambda^s) = P_{r,s}; P_{2,2} = X1*X3 - X4", ok, f"characters {chars}, P22 = {P22}, brute force {brute}", dt, 60)


def test_criterion_11_schur_algebra():
    t = time.perf_counter()
    S = schur_algebra(2, 2)
    rank_ok = S.rank == 10 == comb(5, 2)
    laws = S.check_laws()
    mods = {}
    for F in (Lambda(2), Sym(2), TensorPower(2)):
        M = truncate_to_schur_module(F, 2)
        mods[str(F)] = M.check_module_axioms() and M.weights_match_character()
    dt = time.perf_counter() - t
    ok = rank_ok and laws and all(mods.values())
    assert record(11, "Schur algebra of rank 10 with modules F(Z^2)", ok, f"rank {S.rank}, algebra laws {laws}, modules {mods}", dt)


def test_criterion_12_binary_dimension_two():
    t = time.perf_counter()
    B = random_binary_bicomplex(random.Random(12))
    outs = [binary_lambda(2, 2, B, order=o) for o in ((0, 1), (1, 0))]
    same = outs[0].ranks == outs[1].ranks
    acyc = [sum(is_acyclic(ch) for _, ch in Y.choices()) for Y in outs]
    valid = all(validate(Y).ok for Y in outs)
    dt = time.perf_counter() - t
    ok = same and valid and acyc == [4, 4]
    assert record(12, "Lambda^2_2 independent of direction order, all 4 choices acyclic", ok, f"same graded object {same}, acyclic choices per order {acyc}", dt)


def test_criterion_13_splittings():
    t = time.perf_counter()
    idem_bad = 0
    for seed in range(20):
        e, S, expected = idempotent_case(random.Random(seed))
        K, inc = split_chain_idempotent(e, S)
        idem_bad += not (is_acyclic(K) and K.ranks == expected.ranks)
    mono_bad = 0
    for seed in range(10):
        i, P, Q = mono_case(random.Random(seed))
        s = split_acyclic_mono(i, P, Q)
        mono_bad += not all(s[c] @ m == IntMatrix.identity(m.cols) for c, m in i.items() if m.cols)
    nonsplit = binary_nonsplit_check()
    dt = time.perf_counter() - t
    ok = idem_bad == 0 and mono_bad == 0 and nonsplit
    assert record(13, "idempotent splitting, mono splitting, binary non-splitting", ok, f"idempotents {20 - idem_bad}/20, monos {10 - mono_bad}/10, nonsplit {nonsplit}", dt)


if __name__ == "__main__":
    tests = [f for name, f in sorted(globals().items()) if name.startswith("test_criterion_")]
    for f in tests:
        try:
            f()
        except AssertionError:
            pass
    print("\n".join(RESULTS))
