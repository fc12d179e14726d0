"""Stand-alone replay of serialized witness chains.

Deliberately independent of the code that generates witnesses: it reads the
JSON, rebuilds matrices and complexes, and re-derives every check from the
raw data with exact linear algebra.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .complexes import ComplexFormatError, complex_from_json, complex_to_json, is_acyclic
from .linalg import IntMatrix, snf

__all__ = ["ReplayReport", "replay_witness"]


@dataclass
class ReplayReport:
    ok: bool = True
    records: list = field(default_factory=list)
    first_failure: str | None = None

    def fail(self, where: str, why: str):
        self.records.append({"item": where, "ok": False, "reason": why})
        if self.ok:
            self.first_failure = f"{where}: {why}"
        self.ok = False

    def good(self, where: str):
        self.records.append({"item": where, "ok": True})

    def to_json(self):
        return {"ok": self.ok, "first_failure": self.first_failure, "records": self.records}


def _cell(s: str) -> tuple:
    return tuple(int(x) for x in s.split(","))


def _down(c, k):
    return c[:k] + (c[k] - 1,) + c[k + 1:]


def _matrix(X, k, c, fam):
    fams = X.families()
    name = fam if fam in fams else "d"
    m = fams[name][k].get(c)
    if m is None:
        rows = X.ranks.get(_down(c, k), 0) if c[k] > 0 else 0
        return IntMatrix.zeros(rows, X.ranks.get(c, 0))
    return m.to_dense()


def _unit_factors(M: IntMatrix, full: int) -> bool:
    if full == 0:
        return True
    d = snf(M)
    return d.rank == full and all(x == 1 for x in d.diagonal)


def _check_ses(rel, objs, where, rep) -> bool:
    A, B, C = (objs[rel["objects"][k]] for k in ("sub", "total", "quotient"))
    inc = {_cell(k): IntMatrix.from_json(v) for k, v in rel["maps"]["inclusion"].items()}
    proj = {_cell(k): IntMatrix.from_json(v) for k, v in rel["maps"]["projection"].items()}
    n = B.dimension
    if A.dimension != n or C.dimension != n:
        rep.fail(where, "dimensions differ")
        return False
    cells = sorted(set(A.ranks) | set(B.ranks) | set(C.ranks) | set(inc) | set(proj))
    get = lambda maps, c, r, s: maps.get(c, IntMatrix.zeros(r, s))
    for c in cells:
        a, b, q = A.ranks.get(c, 0), B.ranks.get(c, 0), C.ranks.get(c, 0)
        i = get(inc, c, b, a)
        p = get(proj, c, q, b)
        if i.shape != (b, a) or p.shape != (q, b):
            rep.fail(where, f"cell {c}: map shapes {i.shape}, {p.shape} do not fit ranks {a}, {b}, {q}")
            return False
        if a + q != b:
            rep.fail(where, f"cell {c}: ranks {a} + {q} != {b}")
            return False
        if not (p @ i).is_zero():
            rep.fail(where, f"cell {c}: composite of inclusion and projection is nonzero")
            return False
        if not _unit_factors(i, a):
            rep.fail(where, f"cell {c}: inclusion is not a split injection")
            return False
        if not _unit_factors(p, q):
            rep.fail(where, f"cell {c}: projection is not onto")
            return False
    names = set(B.families()) | set(A.families()) | set(C.families())
    for fam in sorted(names):
        for src, tgt, maps, label in ((A, B, inc, "inclusion"), (B, C, proj, "projection")):
            for c in cells:
                for k in range(n):
                    if c[k] == 0:
                        continue
                    t = _down(c, k)
                    lhs = get(maps, t, tgt.ranks.get(t, 0), src.ranks.get(t, 0)) @ _matrix(src, k, c, fam)
                    rhs = _matrix(tgt, k, c, fam) @ get(maps, c, tgt.ranks.get(c, 0), src.ranks.get(c, 0))
                    if lhs != rhs:
                        rep.fail(where, f"cell {c}: {label} does not commute with {fam} in direction {k + 1}")
                        return False
    return True


def _check_diagonal(rel, objs, where, rep) -> bool:
    X = objs[rel["objects"]["complex"]]
    k = int(rel["direction"]) - 1
    if not 0 <= k < X.dimension:
        rep.fail(where, f"direction {k + 1} out of range")
        return False
    fams = X.families()
    if "d_tilde" not in fams:
        return True
    for c in sorted(set(fams["d"][k]) | set(fams["d_tilde"][k])):
        if _matrix(X, k, c, "d") != _matrix(X, k, c, "d_tilde"):
            rep.fail(where, f"cell {c}: d and d~ differ in direction {k + 1}")
            return False
    return True


def replay_witness(obj, require_acyclic: bool = True) -> ReplayReport:
    """Validate a serialized chain: relations, acyclicity, content hashes and the ledger."""
    rep = ReplayReport()
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            rep.fail("file", f"invalid JSON: {e}")
            return rep
    try:
        objs = {}
        for oid, o in obj["objects"].items():
            X = complex_from_json(o)
            blob = json.dumps(complex_to_json(X), sort_keys=True, separators=(",", ":"))
            if hashlib.sha256(blob.encode()).hexdigest()[:16] != oid:
                rep.fail(f"object {oid}", "content hash does not match")
            objs[oid] = X
        relations = obj["relations"]
        target = {k: int(v) for k, v in obj["target"].items()}
    except (KeyError, TypeError, ValueError, ComplexFormatError) as e:
        rep.fail("file", f"malformed witness: {e}")
        return rep
    if require_acyclic:
        for oid, X in sorted(objs.items()):
            if not is_acyclic(X):
                rep.fail(f"object {oid}", "not acyclic")
    residual = dict(target)

    def add(oid, v):
        residual[oid] = residual.get(oid, 0) + v
        if residual[oid] == 0:
            del residual[oid]

    for n, rel in enumerate(relations):
        where = f"relation {n} ({rel.get('kind')}{': ' + rel['label'] if rel.get('label') else ''})"
        try:
            c = int(rel["coefficient"])
            if rel["kind"] == "ses":
                ok = _check_ses(rel, objs, where, rep)
                o = rel["objects"]
                add(o["total"], -c)
                add(o["sub"], c)
                add(o["quotient"], c)
            elif rel["kind"] == "diagonal":
                ok = _check_diagonal(rel, objs, where, rep)
                add(rel["objects"]["complex"], -c)
            else:
                rep.fail(where, "unknown relation kind")
                continue
        except (KeyError, TypeError, ValueError) as e:
            rep.fail(where, f"malformed relation: {e}")
            continue
        if ok:
            rep.good(where)
    if residual:
        rep.fail("ledger", f"target minus relations leaves {residual}")
    else:
        rep.good("ledger")
    return rep
