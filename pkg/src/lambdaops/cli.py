"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field

from .complexes import (
    BinaryComplex,
    ChainComplex,
    ComplexFormatError,
    complex_from_json,
    complex_to_json,
    homology_all,
    is_acyclic,
    validate,
)
from .derived import (
    DerivedFunctorRequest,
    DimensionMismatch,
    counterexample_h2,
    derive,
    induced_F1,
    length_bound,
)
from .functors import Lambda, SpecParseError, parse_spec
from .linalg import IntMatrix
from .symfunc import (
    lambda_t_check,
    lambda_universal_check,
    pr_substitution_identity,
    universal_Pr,
    universal_Prs,
    verify_axiom3_char,
)
from .validator import replay_witness
from .witness import NotAcyclic, product_vanishing_witness, shift_witness

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UnknownTarget(ValueError):
    pass


class InputError(ValueError):
    pass


@dataclass
class RunReport:
    command: list
    seed: int | None = None
    records: list = field(default_factory=list)
    wall_time_s: float = 0.0
    payload: dict | None = None

    def add(self, name, anchor, ok, computed, expected, provenance):
        self.records.append(
            {
                "name": name,
                "anchor": anchor,
                "status": "pass" if ok else "fail",
                "computed": computed,
                "expected": expected,
                "provenance": provenance,
            }
        )

    @property
    def status(self) -> str:
        return "pass" if all(r["status"] == "pass" for r in self.records) else "fail"

    def to_json(self) -> dict:
        out = {"command": self.command, "seed": self.seed, "status": self.status, "records": self.records}
        if self.payload is not None:
            out["result"] = self.payload
        out["wall_time_s"] = round(self.wall_time_s, 6)
        return out

    def to_text(self) -> str:
        lines = [f"$ {' '.join(self.command)}"]
        for r in self.records:
            lines.append(f"[{r['status'].upper()}] {r['name']}: computed {_short(r['computed'])}, expected {_short(r['expected'])} ({r['provenance']})")
        lines.append(f"overall: {self.status.upper()} ({len(self.records)} checks, {self.wall_time_s:.2f} s)")
        return "\n".join(lines)


def _short(v) -> str:
    s = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
    return s if len(s) <= 120 else s[:117] + "..."


def _complex_summary(X) -> dict:
    out = {"ranks": {",".join(map(str, c)): r for c, r in sorted(X.ranks.items()) if r}}
    if X.dimension == 1:
        out["differentials"] = {str(c[0]): m.to_dense().to_json()["entries"] for c, m in sorted(X.d[0].items())}
    return out


# ---------------------------------------------------------------------------
# reproduce


def _line(x: int) -> ChainComplex:
    return ChainComplex({0: 1, 1: 1}, {1: IntMatrix.from_rows([[x]], 1)})


def _repro_invertible(rep: RunReport, rs, xs):
    for r in rs:
        for x in xs:
            got = induced_F1(Lambda(r), _line(x))
            want = ChainComplex({r - 1: 1, r: 1}, {r: IntMatrix.from_rows([[x]], 1)})
            ok = got.ranks == want.ranks and all(got.diff(0, c) == want.diff(0, c) for c in want.ranks)
            rep.add(
                f"Lambda^{r} of Z --{x}--> Z",
                "exterior power of a two-term complex of invertible modules",
                ok,
                _complex_summary(got),
                _complex_summary(want),
                "PUBLISHED",
            )


def _repro_counterexample(rep: RunReport):
    h = counterexample_h2()
    rep.add(
        "H_2 of Tot(C ⊗ C) for C = Z -2-> Z -> Z/2",
        "tensor square of an acyclic complex of non-projectives",
        h.free_rank == 0 and list(h.torsion) == [2],
        h.to_json(),
        {"free_rank": 0, "torsion": [2]},
        "PUBLISHED",
    )


def _repro_shift(rep: RunReport, seed: int):
    from .randomgen import random_binary_acyclic

    one = IntMatrix.from_rows([[1]], 1)
    samples = [("Z with d = 1, d~ = -1", BinaryComplex({0: 1, 1: 1}, {1: one}, {1: one.scale(-1)}))]
    rng = random.Random(seed)
    samples.append((f"random binary acyclic (seed {seed})", random_binary_acyclic(rng, 2, 3)))
    for name, N in samples:
        for k in (1, 2, 3):
            chain = shift_witness(N, k)
            r = replay_witness(chain.to_json())
            rep.add(
                f"[N[{k}]] = (-1)^{k}[N] for {name}",
                "shift lemma certificate",
                r.ok,
                {"relations": len(chain.relations), "valid": r.ok, "first_failure": r.first_failure},
                {"valid": True},
                "DERIVED",
            )


def _repro_axiom2(rep: RunReport):
    for r in range(1, 5):
        rep.add(f"P_{r}(1,0,...,0,Y) = Y_{r}", "substitution identity for P_r", pr_substitution_identity(r), str(universal_Pr(r)), f"Y{r} after substitution", "PUBLISHED")
        rep.add(f"lambda_t multiplicativity in degree {r}", "e_r of products equals P_r", lambda_t_check(r), True, True, "DERIVED")


def _repro_axiom3(rep: RunReport):
    p22 = str(universal_Prs(2, 2))
    rep.add("P_{2,2}", "universal polynomial for composed exterior powers", p22 == "X1*X3 - X4", p22, "X1*X3 - X4", "DERIVED")
    for r, s in ((2, 2), (2, 3), (3, 2)):
        rep.add(f"char(Lambda^{r} o Lambda^{s}) = P_{{{r},{s}}}(e)", "character form of the composition axiom", verify_axiom3_char(r, s), True, True, "DERIVED")


TARGETS = ("ex-invertible", "ex-counterexample", "ex-shift", "ex-axiom2", "ex-axiom3")


def cmd_reproduce(target: str, r=None, x=None, seed: int = 0, rep: RunReport | None = None) -> RunReport:
    rep = rep or RunReport(["reproduce", target], seed)
    if target not in TARGETS + ("all",):
        raise UnknownTarget(f"unknown target {target!r}; choose from {', '.join(TARGETS + ('all',))}")
    todo = TARGETS if target == "all" else (target,)
    for t in todo:
        if t == "ex-invertible":
            _repro_invertible(rep, [r] if r else [2, 3, 4], [x] if x is not None else [2, 3, 5])
        elif t == "ex-counterexample":
            _repro_counterexample(rep)
        elif t == "ex-shift":
            _repro_shift(rep, seed)
        elif t == "ex-axiom2":
            _repro_axiom2(rep)
        else:
            _repro_axiom3(rep)
    return rep


# ---------------------------------------------------------------------------
# input helpers


def _read_json(path: str):
    try:
        with open(path) if path != "-" else sys.stdin as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON: {e}") from None


def _read_complex(path: str):
    try:
        X = complex_from_json(_read_json(path))
    except ComplexFormatError as e:
        raise InputError(f"{path}: {e}") from None
    v = validate(X)
    if not v.ok:
        bad = v.violations[0]
        raise InputError(f"{path}: not a complex: {bad.rule} fails at cell {list(bad.cell)}")
    return X


# ---------------------------------------------------------------------------
# derive / homology


def cmd_derive(X, spec: str, level: int | None = None, order=None) -> RunReport:
    rep = RunReport(["derive", spec])
    try:
        F = parse_spec(spec)
    except SpecParseError as e:
        raise InputError(f"bad functor spec: {e}") from None
    try:
        req = DerivedFunctorRequest(F, X.dimension if level is None else level, X, tuple(order) if order else None)
    except (DimensionMismatch, ValueError) as e:
        raise InputError(str(e)) from None
    Y = derive(req)
    acyclic_in, acyclic_out = is_acyclic(X), is_acyclic(Y)
    L, bound = Y.length(), length_bound(F, X)
    rep.payload = {"complex": complex_to_json(Y), "verification": {"input_acyclic": acyclic_in, "acyclic": acyclic_out, "length": L, "length_bound": bound}}
    rep.add("output is a complex", "induced functor", validate(Y).ok, validate(Y).ok, True, "TRIVIAL")
    rep.add("length within degree times input length", "length bound", L <= bound, L, f"<= {bound}", "PUBLISHED")
    if acyclic_in:
        rep.add("acyclic input gives acyclic output", "acyclicity preservation", acyclic_out, acyclic_out, True, "PUBLISHED")
    return rep


def cmd_homology(X) -> RunReport:
    rep = RunReport(["homology"])
    if X.dimension != 1:
        raise InputError("homology is computed for complexes of dimension 1")
    parts = {"d": X} if not X.binary else {"d": X.top(), "d_tilde": X.bottom()}
    out = {}
    for name, C in parts.items():
        out[name] = {str(i): g.to_json() for i, g in sorted(homology_all(C).items())}
    rep.payload = {"homology": out, "acyclic": is_acyclic(X)}
    return rep


# ---------------------------------------------------------------------------
# plethysm / lambda-check


def cmd_plethysm(r: int, s: int) -> RunReport:
    if r < 1 or s < 1:
        raise InputError("r and s must be at least 1")
    P = universal_Prs(r, s)
    rep = RunReport(["plethysm", str(r), str(s)])
    rep.payload = {"r": r, "s": s, "text": str(P), "polynomial": P.to_json(), "weighted_degree": P.weighted_degree()}
    rep.add(f"weighted degree of P_{{{r},{s}}}", "homogeneity", P.weighted_degree() == r * s, P.weighted_degree(), r * s, "TRIVIAL")
    if r * s <= 9:
        rep.add(f"char(Lambda^{r} o Lambda^{s}) agrees", "character comparison", verify_axiom3_char(r, s), True, True, "DERIVED")
    return rep


def cmd_lambda_check(max_degree: int) -> RunReport:
    if not 1 <= max_degree <= 8:
        raise InputError("--max-degree must be between 1 and 8")
    res = lambda_universal_check(max_degree)
    rep = RunReport(["lambda-check", "--max-degree", str(max_degree)])
    for axiom in ("lambda1", "axiom1", "axiom2", "axiom3"):
        for rec in res[axiom]:
            params = {k: v for k, v in rec.items() if k != "ok"}
            rep.add(f"{axiom} {params}", "lambda-ring axioms on the universal ring", rec["ok"], rec["ok"], True, "DERIVED")
    return rep


# ---------------------------------------------------------------------------
# witnesses


def cmd_witness_gen(kind: str, X, Y=None, k: int = 1, direction: int = 1, skip_acyclicity: bool = False) -> RunReport:
    rep = RunReport(["witness", "gen", kind])
    try:
        if kind == "shift":
            if not X.binary:
                X = BinaryComplex.diagonal(X) if X.dimension == 1 else X
            chain = shift_witness(X, k, direction - 1, require_acyclic=not skip_acyclicity)
        else:
            if Y is None:
                raise InputError("product witnesses need two complexes")
            chain = product_vanishing_witness(X, Y)
    except NotAcyclic as e:
        raise InputError(f"{e} (pass --skip-acyclicity to certify the relation among all bounded binary complexes)") from None
    except (NotImplementedError, DimensionMismatch) as e:
        raise InputError(str(e)) from None
    data = chain.to_json()
    check = replay_witness(data, require_acyclic=not skip_acyclicity)
    rep.payload = data
    rep.add(f"{kind} witness replays", "independent validator", check.ok, {"relations": len(chain.relations), "first_failure": check.first_failure}, {"valid": True}, "DERIVED")
    return rep


def cmd_witness_check(data, skip_acyclicity: bool = False) -> RunReport:
    rep = RunReport(["witness", "check"])
    r = replay_witness(data, require_acyclic=not skip_acyclicity)
    for rec in r.records:
        rep.add(rec["item"], "witness replay", rec["ok"], rec.get("reason", "ok"), "ok", "DERIVED")
    if not r.records:
        rep.add("file", "witness replay", False, r.first_failure, "ok", "DERIVED")
    rep.payload = {"valid": r.ok, "first_failure": r.first_failure}
    return rep


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(seed: int, max_degree: int = 4) -> RunReport:
    from .randomgen import random_acyclic, random_binary_acyclic, random_complex
    from .schur import schur_algebra, truncate_to_schur_module
    from .simplicial import dold_kan_iso

    rep = RunReport(["selftest"], seed)
    rng = random.Random(seed)
    for i in range(5):
        C = random_complex(rng, rng.randint(1, 3), 3)
        N, iso = dold_kan_iso(C)
        ok = N.ranks == C.ranks and all(m.rows == m.cols for m in iso.values())
        rep.add(f"Dold-Kan round trip #{i}", "normalization of the simplicial object", ok, _complex_summary(N)["ranks"], _complex_summary(C)["ranks"], "DERIVED")
    for i in range(5):
        C = random_acyclic(rng, rng.randint(1, 2), 3)
        r = rng.randint(1, 3)
        Y = induced_F1(Lambda(r), C)
        rep.add(f"Lambda^{r} keeps acyclicity #{i}", "acyclicity preservation", is_acyclic(Y), is_acyclic(Y), True, "PUBLISHED")
    N = random_binary_acyclic(rng, 2, 2)
    chain = shift_witness(N, 2)
    rep.add("shift witness replays", "shift lemma certificate", replay_witness(chain.to_json()).ok, True, True, "DERIVED")
    P, Q = random_binary_acyclic(rng, 1, 2), random_binary_acyclic(rng, 1, 2)
    rep.add("product witness replays", "product vanishing certificate", replay_witness(product_vanishing_witness(P, Q).to_json()).ok, True, True, "DERIVED")
    S = schur_algebra(2, 2)
    rep.add("rank of the Schur algebra (2,2)", "multiset count", S.rank == 10, S.rank, 10, "DERIVED")
    M = truncate_to_schur_module(Lambda(2), 2)
    rep.add("Lambda^2 module axioms", "Schur module", M.check_module_axioms(), True, True, "DERIVED")
    res = lambda_universal_check(max_degree)
    rep.add(f"lambda-ring axioms to degree {max_degree}", "universal ring", res["ok"], res["ok"], True, "DERIVED")
    return rep


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized checks")
    common.add_argument("--max-degree", type=int, default=argparse.SUPPRESS, help="degree cap for symmetric-function checks")
    common.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write the JSON result here")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="lambdaops", description="Exterior powers of binary complexes, K-theory witnesses and lambda-ring checks.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reproduce", parents=[common], help="rerun a worked example")
    r.add_argument("target", help="one of " + ", ".join(TARGETS + ("all",)))
    r.add_argument("--r", type=int, help="exterior power (ex-invertible)")
    r.add_argument("--x", type=int, help="differential entry (ex-invertible)")

    d = sub.add_parser("derive", parents=[common], help="apply a functor to a complex")
    d.add_argument("input", help="complex JSON file ('-' for stdin)")
    d.add_argument("--spec", required=True, help="functor, e.g. L2, S2, L2@L2, L1+T2")
    d.add_argument("--level", type=int, help="expected dimension of the input")
    d.add_argument("--order", help="direction order as a comma list, e.g. 1,0")

    h = sub.add_parser("homology", parents=[common], help="homology of a chain or binary complex")
    h.add_argument("input")

    pl = sub.add_parser("plethysm", parents=[common], help="P_{r,s} in the elementary basis")
    pl.add_argument("r", type=int)
    pl.add_argument("s", type=int)

    sub.add_parser("lambda-check", parents=[common], help="lambda-ring axioms on the universal ring")

    w = sub.add_parser("witness", parents=[common], help="generate or replay K-theory witnesses")
    wsub = w.add_subparsers(dest="mode", required=True)
    g = wsub.add_parser("gen", parents=[common])
    g.add_argument("kind", choices=("shift", "product"))
    g.add_argument("input")
    g.add_argument("input2", nargs="?", help="second factor (product)")
    g.add_argument("--k", type=int, default=1, help="shift amount")
    g.add_argument("--direction", type=int, default=1, help="shift direction (1-based)")
    g.add_argument("--skip-acyclicity", action="store_true", help="allow non-acyclic inputs")
    c = wsub.add_parser("check", parents=[common])
    c.add_argument("kind", nargs="?", choices=("shift", "product"), help="ignored; the file says what it is")
    c.add_argument("file")
    c.add_argument("--skip-acyclicity", action="store_true")

    sub.add_parser("selftest", parents=[common], help="quick seeded sweep over all modules")
    return p


def _emit(rep: RunReport, fmt: str, output: str | None, payload_only: bool = False):
    data = rep.payload if payload_only else rep.to_json()
    if output:
        with open(output, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if fmt == "text":
        print(rep.to_text())
        if rep.payload and not output and "text" in rep.payload:
            print(rep.payload["text"])
    elif not (output and payload_only):
        print(json.dumps(rep.to_json() if output else data, indent=2, sort_keys=True))
    else:
        print(json.dumps({"status": rep.status, "written": output}, sort_keys=True))


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_PASS
    seed = getattr(args, "seed", 0)
    fmt = getattr(args, "format", "json")
    output = getattr(args, "output", None)
    max_degree = getattr(args, "max_degree", None)
    t0 = time.perf_counter()
    payload_only = False
    try:
        if args.command == "reproduce":
            rep = cmd_reproduce(args.target, args.r, args.x, seed)
        elif args.command == "derive":
            order = [int(t) for t in args.order.split(",")] if args.order else None
            rep = cmd_derive(_read_complex(args.input), args.spec, args.level, order)
        elif args.command == "homology":
            rep = cmd_homology(_read_complex(args.input))
        elif args.command == "plethysm":
            rep = cmd_plethysm(args.r, args.s)
        elif args.command == "lambda-check":
            rep = cmd_lambda_check(6 if max_degree is None else max_degree)
        elif args.command == "witness":
            if args.mode == "gen":
                X = _read_complex(args.input)
                Y = _read_complex(args.input2) if args.input2 else None
                rep = cmd_witness_gen(args.kind, X, Y, args.k, args.direction, args.skip_acyclicity)
                payload_only = True
            else:
                rep = cmd_witness_check(_read_json(args.file), args.skip_acyclicity)
        else:
            rep = cmd_selftest(seed, 4 if max_degree is None else max_degree)
    except (InputError, UnknownTarget) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    rep.command = ["lambdaops"] + argv
    rep.seed = seed
    rep.wall_time_s = time.perf_counter() - t0
    _emit(rep, fmt, output, payload_only)
    return EXIT_PASS if rep.status == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
