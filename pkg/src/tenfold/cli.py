"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage or inadmissible set,
3 parse error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import classify
from .acceptance import CheckResult, check_car, check_table, run_all
from .clifford import witness_iso_cl1
from .errors import InadmissibleSetError, ParseError, StructuralFailureError, TenfoldError
from .fock import FockSpace, build_quadratic_hamiltonian
from .instances import perturb
from .linalg import AntiLinearOp
from .nambu import BdGHamiltonian, NambuSpace, extract_bdg, flatten_bdg
from .symmetry import make_charge, make_phs, make_spin_generators, make_trs

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


# --- input documents ----------------------------------------------------------


def _parse_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ParseError("matrix must be a non-empty list of rows", where)
    width = len(value[0])
    out = np.zeros((len(value), width), dtype=complex)
    for i, row in enumerate(value):
        if len(row) != width:
            raise ParseError(f"row {i} has {len(row)} entries, expected {width}", f"{where}[{i}]")
        for j, entry in enumerate(row):
            if isinstance(entry, (int, float)) and not isinstance(entry, bool):
                out[i, j] = entry
            elif (
                isinstance(entry, list)
                and len(entry) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
            ):
                out[i, j] = complex(entry[0], entry[1])
            else:
                raise ParseError("entry must be a number or an [re, im] pair", f"{where}[{i}][{j}]")
    return out


def _dump_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _format_json(obj, indent=0) -> str:
    """Stable JSON with sorted keys and one matrix row per line."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = [f'{pad}  {json.dumps(k)}: {_format_json(obj[k], indent + 2).lstrip()}' for k in sorted(obj)]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and all(isinstance(r, list) and r and isinstance(r[0], list) for r in obj):
        rows = [pad + "  " + json.dumps(r) for r in obj]
        return pad + "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, list) and obj and all(isinstance(x, dict) for x in obj):
        return pad + "[\n" + ",\n".join(_format_json(x, indent + 2) for x in obj) + "\n" + pad + "]"
    return pad + json.dumps(obj)


@dataclass
class SymmetryEntry:
    kind: str
    matrix: Optional[np.ndarray] = None
    antilinear: bool = False
    spin_factorization: Optional[np.ndarray] = None

    def to_dict(self):
        d = {"kind": self.kind, "antilinear": self.antilinear}
        if self.matrix is not None:
            d["matrix"] = _dump_matrix(self.matrix)
        if self.spin_factorization is not None:
            d["spin_factorization"] = _dump_matrix(self.spin_factorization)
        return d


@dataclass
class InputDocument:
    dim_v: int
    theta: Optional[np.ndarray] = None
    xi: Optional[np.ndarray] = None
    P: Optional[np.ndarray] = None
    Delta: Optional[np.ndarray] = None
    symmetries: list = field(default_factory=list)
    seed: Optional[int] = None

    def to_dict(self):
        d = {"dim_v": self.dim_v, "symmetries": [s.to_dict() for s in self.symmetries]}
        if self.P is not None:
            d["bdg"] = {"P": _dump_matrix(self.P), "Delta": _dump_matrix(self.Delta)}
        else:
            d["theta"] = _dump_matrix(self.theta)
            d["xi"] = _dump_matrix(self.xi)
        if self.seed is not None:
            d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return _format_json(self.to_dict())


def _expect_shape(m, n, where):
    if m.shape != (n, n):
        raise ParseError(f"expected a {n}x{n} matrix, got {m.shape[0]}x{m.shape[1]}", where)
    return m


def parse_document(text: str) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", "$")
    n = raw.get("dim_v")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("dim_v must be a positive integer", "$.dim_v")
    has_fock = "theta" in raw or "xi" in raw
    has_bdg = "bdg" in raw
    if has_fock == has_bdg:
        raise ParseError("give exactly one of theta/xi or bdg", "$")
    doc = InputDocument(n)
    if has_bdg:
        bdg = raw["bdg"]
        if not isinstance(bdg, dict) or "P" not in bdg or "Delta" not in bdg:
            raise ParseError("bdg needs fields P and Delta", "$.bdg")
        doc.P = _expect_shape(_parse_matrix(bdg["P"], "$.bdg.P"), n, "$.bdg.P")
        doc.Delta = _expect_shape(_parse_matrix(bdg["Delta"], "$.bdg.Delta"), n, "$.bdg.Delta")
    else:
        doc.theta = _expect_shape(_parse_matrix(raw.get("theta", [[0] * n] * n), "$.theta"), n, "$.theta")
        doc.xi = _expect_shape(_parse_matrix(raw.get("xi", [[0] * n] * n), "$.xi"), n, "$.xi")
    syms = raw.get("symmetries", [])
    if not isinstance(syms, list):
        raise ParseError("symmetries must be a list", "$.symmetries")
    for k, s in enumerate(syms):
        where = f"$.symmetries[{k}]"
        if not isinstance(s, dict) or s.get("kind") not in ("TRS", "SRS", "Q", "PHS"):
            raise ParseError("kind must be one of TRS, SRS, Q, PHS", where)
        entry = SymmetryEntry(s["kind"], antilinear=bool(s.get("antilinear", False)))
        if s.get("matrix") is not None:
            entry.matrix = _expect_shape(_parse_matrix(s["matrix"], where + ".matrix"), n, where + ".matrix")
        if s.get("spin_factorization") is not None:
            entry.spin_factorization = _expect_shape(
                _parse_matrix(s["spin_factorization"], where + ".spin_factorization"), n, where + ".spin_factorization"
            )
        doc.symmetries.append(entry)
    seed = raw.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ParseError("seed must be an integer", "$.seed")
    doc.seed = seed
    return doc


def build_operators(N: NambuSpace, doc: InputDocument):
    ops = []
    for s in doc.symmetries:
        if s.kind == "TRS":
            if s.matrix is None or not s.antilinear:
                raise StructuralFailureError("TRS needs a matrix with antilinear: true")
            ops.append(make_trs(N, AntiLinearOp(s.matrix)))
        elif s.kind == "SRS":
            ops.extend(make_spin_generators(N, s.spin_factorization))
        elif s.kind == "Q":
            ops.append(make_charge(N))
        else:
            if s.matrix is None or s.antilinear:
                raise StructuralFailureError("PHS needs the linear matrix S")
            ops.append(make_phs(N, s.matrix))
    return ops


def build_hamiltonian(N: NambuSpace, doc: InputDocument) -> BdGHamiltonian:
    if doc.P is not None:
        return BdGHamiltonian(doc.P, doc.Delta)
    F = FockSpace(doc.dim_v)
    return extract_bdg(N, F, build_quadratic_hamiltonian(F, doc.theta, doc.xi))


def analyze_document(doc: InputDocument, seed: int = 0, perturbations: int = 5) -> dict:
    """Validate, classify, reduce and evaluate the invariant of a document.

    ``perturbations`` random symmetric perturbations (seeded) confirm the
    invariant is locally constant.
    """
    N = NambuSpace(doc.dim_v)
    ops = build_operators(N, doc)
    B = flatten_bdg(build_hamiltonian(N, doc))
    label, report = classify.derive_label_from_operators(N, B, ops)
    red = classify.reduce_pipeline(N, B, ops)
    inv = classify.invariant_value(red)
    rng = np.random.default_rng(seed)
    stable = all(
        classify.invariant_value(classify.reduce_pipeline(N, perturb(N, ops, B, rng), ops)) == inv
        for _ in range(perturbations)
    )
    view = label.abstract_view
    return {
        "label": {
            "cartan": label.cartan,
            "s": label.s,
            "k_group": label.k_group,
            "symmetries": classify.format_flags(label.flags),
            "abstract": {"trs_sign": view.trs_sign, "phs_sign": view.phs_sign, "chiral": view.chiral},
        },
        "validation": {k: float(f"{v:.3e}") for k, v in report.residuals.items()},
        "signs": {k: {"eta1": v.eta1, "eta2": v.eta2} for k, v in report.signs.items()},
        "reduced": {"space": red.space, "dim": int(red.element.shape[0]),
                    "relations": [r.name for r in red.relations.relations]},
        "invariant": {"group": inv.group_kind, "value": inv.value, "stable_under_perturbation": stable},
        "seed": seed,
    }


def load_input(name: str) -> str:
    """Read a file path or the name of a bundled example."""
    p = Path(name)
    if p.exists():
        return p.read_text()
    stem = name[:-5] if name.endswith(".json") else name
    res = resources.files("tenfold") / "data" / f"{stem}.json"
    if res.is_file():
        return res.read_text()
    raise FileNotFoundError(name)


def bundled_examples():
    return sorted(p.name[:-5] for p in (resources.files("tenfold") / "data").iterdir() if p.name.endswith(".json"))


# --- commands -----------------------------------------------------------------


def render_table() -> str:
    head = f"{'s':>1}  {'class':<5}  {'symmetries':<14}  {'K-group':<7}  {'abstract':<8}  TRS PHS"
    lines = [head, "-" * len(head)]
    for row in classify.TABLE:
        v = row.abstract_view
        sign = lambda x: "  " if x is None else f"{x:+d}"
        lines.append(
            f"{row.s:>1}  {row.cartan:<5}  {classify.format_flags(row.flags):<14}  {row.k_group:<7}  "
            f"{v.symmetries:<8}  {sign(v.trs_sign)} {sign(v.phs_sign)}".rstrip()
        )
    return "\n".join(lines)


def cmd_table(args) -> int:
    print(render_table())
    return EXIT_OK


def cmd_classify(args) -> int:
    label = classify.classify_set(classify.SymmetrySet.parse(args.symmetries))
    print(label)
    return EXIT_OK


def cmd_analyze(args) -> int:
    doc = parse_document(load_input(args.file))
    seed = args.seed if args.seed is not None else (doc.seed or 0)
    print(json.dumps(analyze_document(doc, seed), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_clifford_iso(args) -> int:
    w = witness_iso_cl1(args.r, args.s, args.r2, args.s2)
    print(w.report())
    return EXIT_OK if w.ok else EXIT_FAIL


def quick_checks():
    results = [check_table(), check_car(modes=[3], pairs=100)]
    t0 = time.perf_counter()
    count, ok = 0, True
    try:
        for r, s, r2, s2 in itertools.product(range(4), repeat=4):
            if r + s + r2 + s2 <= 3:
                witness_iso_cl1(r, s, r2, s2)
                count += 1
        detail = f"{count} Cl1 witnesses with r+s <= 3"
    except TenfoldError as exc:
        ok, detail = False, str(exc)
    results.append(CheckResult(4, "Clifford witnesses (small)", ok, detail, time.perf_counter() - t0, 10.0))
    return results


def cmd_selftest(args) -> int:
    if args.level == "quick":
        results = quick_checks()
        for r in results:
            print(r.line())
    else:
        # the oracle check reports per-class instance pair counts
        results = run_all(verbose=True)
    failed = [r for r in results if not (r.passed and r.in_time)]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tenfold", description="Tenfold-way classification of free-fermion systems.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("table", help="print the classification table").set_defaults(func=cmd_table)
    c = sub.add_parser("classify", help="classify a symmetry set")
    c.add_argument("--symmetries", required=True, help="comma separated subset of TRS,SRS,Q,PHS (or 'none')")
    c.set_defaults(func=cmd_classify)
    a = sub.add_parser("analyze", help="validate and classify a Hamiltonian file")
    a.add_argument("file", help="JSON input file or bundled example name")
    a.add_argument("--seed", type=int, default=None)
    a.set_defaults(func=cmd_analyze)
    k = sub.add_parser("clifford-iso", help="verify Cl_{r,s} (x) Cl_{r',s'} = Cl_{r+r',s+s'}")
    for name in ("r", "s", "r2", "s2"):
        k.add_argument(name, type=int)
    k.set_defaults(func=cmd_clifford_iso)
    t = sub.add_parser("selftest", help="run built-in checks")
    t.add_argument("--level", choices=("quick", "full"), default="quick")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InadmissibleSetError as exc:
        print(f"inadmissible: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        where = f" at {exc.location}" if exc.location else ""
        print(f"parse error{where}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"no such file or bundled example: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TenfoldError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
