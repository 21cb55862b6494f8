"""``chow-engine`` command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 input error, 3 guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import bitset, catalog, io
from .charpoly import CHAR_POLY_METHODS, char_poly, mu_vector, reduced_char_poly
from .matroid import AxiomViolation, Matroid, MatroidError, from_boolean, from_uniform
from .oracle import (DEFAULT_MONOMIAL_CAP, GuardExceeded, build_graded,
                     count_top_monomials, all_top_monomials, fy_basis, oracle_degree,
                     pairing_matrix, random_top_monomials)
from .psi import (deg_expanded, deg_monomial, deg_psi_minus_product, deg_psi_powers,
                  expand_monomial, psi_minus, psi_plus)
from .volume import eval_volume, minkowski_to_support, postnikov_volume, volume_polynomial

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class Mismatch(Exception):
    """Two routes that must agree did not."""


@dataclass
class RunReport:
    command: str
    source: str
    inputs: dict[str, Any] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    seed: int | None = None
    timing: float | None = None
    lines: list[str] = field(default_factory=list)

    def to_json(self, with_timing: bool = True) -> dict:
        out = {
            "command": self.command,
            "source": self.source,
            "inputs": self.inputs,
            "results": self.results,
            "warnings": self.warnings,
            "seed": self.seed,
        }
        if with_timing:
            out["timing_seconds"] = self.timing
        return out


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _source(args) -> tuple[Matroid, str]:
    if args.boolean is not None:
        return from_boolean(args.boolean), f"boolean {args.boolean}"
    if args.uniform is not None:
        r, n = args.uniform
        return from_uniform(r, n), f"uniform {r} {n}"
    if args.graph:
        return io.graph_from_json(args.graph), f"graph {args.graph}"
    if args.matrix:
        return io.matrix_from_json(args.matrix), f"matrix {args.matrix}"
    if args.flats:
        return io.matroid_from_json(args.flats), f"flats {args.flats}"
    return catalog.builtin(args.builtin), f"builtin {args.builtin}"


def _sets(M: Matroid, flats) -> list[str]:
    return [io.set_text(M, F) for F in flats]


def _frac(q: Fraction) -> str:
    return str(q)


def _poly_coeffs(p) -> list[int]:
    return list(reversed(p.coefficients))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_flats(M: Matroid, args, rep: RunReport) -> int:
    by_rank = []
    for k in range(M.rk + 1):
        by_rank.append([bitset.elements(F) for F in M.flats_of_rank(k)])
    rep.results = {
        "rank": M.rk,
        "n": M.n,
        "flat_count": len(M.flats),
        "flats_by_rank": by_rank,
        "covers": {bitset.fmt(F): [bitset.elements(G) for G in M.covers[F]] for F in M.flats},
        "loops": bitset.elements(M.loops()),
        "coloops": bitset.elements(M.coloops()),
        "simple": M.is_simple(),
    }
    rep.lines.append(f"{len(M.flats)} flats, rk(E) = {M.rk}")
    for k, level in enumerate(by_rank):
        rep.lines.append(f"  rank {k}: " + " ".join(bitset.fmt(bitset.mask_of(F)) for F in level))
    rep.lines.append(f"loops: {bitset.fmt(M.loops())}  coloops: {bitset.fmt(M.coloops())}  simple: {M.is_simple()}")
    return EXIT_OK


def cmd_charpoly(M: Matroid, args, rep: RunReport) -> int:
    polys = {name: char_poly(M, name) for name in CHAR_POLY_METHODS}
    chi = polys["whitney"]
    agree = all(p == chi for p in polys.values())
    rep.results = {
        "chi": str(chi),
        "chi_coefficients": _poly_coeffs(chi),
        "methods_agree": agree,
    }
    if not agree:
        rep.results["by_method"] = {k: str(v) for k, v in polys.items()}
        raise Mismatch("characteristic polynomial methods disagree: "
                       + ", ".join(f"{k}={v}" for k, v in polys.items()))
    rep.lines.append(f"χ(λ)  = {chi}")
    if not M.is_loopless:
        rep.warnings.append("matroid has a loop: χ = 0 and the reduced polynomial is undefined")
        rep.results.update({"reduced": None, "mu": None})
        return EXIT_OK
    reduced = reduced_char_poly(M)
    mus = list(mu_vector(M))
    rep.results.update({"reduced": str(reduced), "mu": mus})
    rep.lines.append(f"χ̄(λ)  = {reduced}")
    rep.lines.append(f"μ     = ({', '.join(map(str, mus))})")
    return EXIT_OK


def _trace(M: Matroid, m) -> list[dict]:
    out = []
    for term in expand_monomial(M, m):
        chain = (0,) + term.flag + (M.full,)
        factors = []
        for i in range(len(chain) - 1):
            if term.psi_degree == M.r - len(term.flag):
                factors.append(deg_psi_powers(M.interval(chain[i], chain[i + 1]), term.plus[i], term.minus[i]))
            else:
                factors.append(0)
        value = term.coefficient
        for f in factors:
            value *= f
        out.append({
            "coefficient": term.coefficient,
            "flag": _sets(M, term.flag),
            "a_plus": list(term.plus),
            "a_minus": list(term.minus),
            "interval_factors": factors,
            "value": value,
        })
    return out


def cmd_degree(M: Matroid, args, rep: RunReport) -> int:
    m = io.parse_monomial(args.monomial, M)
    rep.inputs["monomial"] = m.text(M)
    value = deg_monomial(M, m)
    rep.results["degree"] = value
    rep.lines.append(f"deg({m.text(M)}) = {value}")
    if args.trace:
        trace = _trace(M, m)
        rep.results["trace"] = trace
        total = sum(t["value"] for t in trace)
        for t in trace:
            rep.lines.append(
                f"  {t['coefficient']:+d} · flag {' ⊊ '.join(t['flag']) or '∅'}"
                f"  a+={tuple(t['a_plus'])} a-={tuple(t['a_minus'])}"
                f"  factors {t['interval_factors']} -> {t['value']}"
            )
        rep.lines.append(f"  expansion total = {total}")
        if m.degree == M.r and total != value:
            raise Mismatch(f"closed form {value} but expansion gives {total}")
    if args.oracle:
        check = oracle_degree(M, m, method=args.oracle_method, cap=args.cap) if m.degree == M.r else 0
        rep.results["oracle"] = check
        rep.results["oracle_method"] = args.oracle_method
        rep.lines.append(f"oracle ({args.oracle_method}) = {check}")
        if check != value:
            raise Mismatch(f"closed form {value} but oracle gives {check}")
    return EXIT_OK


def cmd_psi_degree(M: Matroid, args, rep: RunReport) -> int:
    if args.minus is not None:
        flats = [io.parse_flat(t, M) for t in args.minus]
        rep.inputs["minus"] = _sets(M, flats)
        value = deg_psi_minus_product(M, flats)
        label = " * ".join(f"psi-{s}" for s in _sets(M, flats))
    else:
        if args.exponents is None or len(args.exponents) != 2:
            raise io.ParseError("psi-degree needs two exponents 'a b' or --minus FLAT ...")
        a, b = args.exponents
        rep.inputs.update({"a": a, "b": b})
        value = deg_psi_powers(M, a, b)
        label = f"psi_0^{a} * psi_inf^{b}"
    rep.results["degree"] = value
    rep.lines.append(f"deg({label}) = {value}")
    return EXIT_OK


def cmd_volume(M: Matroid, args, rep: RunReport) -> int:
    if args.symbolic:
        poly = volume_polynomial(M)
        rep.results = {"terms": poly.to_json(), "denominator_factorial": poly.denominator_factorial,
                       "normalized": bool(poly.denominator_factorial)}
        note = f"/ {poly.denominator_factorial}!" if poly.denominator_factorial else "(raw degree, no factorial)"
        rep.lines.append(f"volume polynomial {note}, {len(poly.terms)} terms")
        for t in poly.terms:
            mono = " ".join(f"x{bitset.fmt(F)}" + (f"^{d}" if d > 1 else "") for F, d in zip(t.flag, t.exps))
            rep.lines.append(f"  {t.coef:+d} {mono}")
        return EXIT_OK
    if args.eval:
        n, x = io.vector_from_json(args.eval, "x")
        _match_n(M, n)
        rep.inputs["x"] = io.vector_to_json(n, "x", x)["x"]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            value = eval_volume(M, x)
        rep.warnings.extend(str(w.message) for w in caught)
        rep.results = {"volume": _frac(value), "normalized": len(M.flats) == 1 << M.n}
        rep.lines.append(f"volume = {value}")
        return EXIT_OK
    n, y = io.vector_from_json(args.postnikov, "y")
    _match_n(M, n)
    if len(M.flats) != 1 << M.n:
        raise io.ParseError("--postnikov needs a Boolean matroid source")
    rep.inputs["y"] = io.vector_to_json(n, "y", y)["y"]
    tuples = postnikov_volume(n, y)
    algebraic = eval_volume(M, minkowski_to_support(n, y))
    rep.results = {"postnikov": _frac(tuples), "eval": _frac(algebraic), "agree": tuples == algebraic}
    rep.lines.append(f"postnikov = {tuples}, eval = {algebraic}")
    if tuples != algebraic:
        raise Mismatch(f"Postnikov volume {tuples} differs from the degree formula {algebraic}")
    return EXIT_OK


def _match_n(M: Matroid, n: int) -> None:
    if n != M.n:
        raise io.ParseError(f"vector file has n = {n} but the matroid has {M.n} elements")


def _verify_pd(M: Matroid, ks, args, rep: RunReport) -> bool:
    ok = True
    certificates = []
    for k in ks:
        cert = pairing_matrix(M, k, oracle_fraction=args.oracle_fraction, seed=args.seed, cap=args.cap)
        rank = build_graded(M, k, args.cap).rank
        dual = len(fy_basis(M, M.r - k))
        diag_ok = cert.diag == cert.expected_diag
        passed = cert.unimodular and cert.triangular and diag_ok and rank == len(cert.rows) == dual \
            and not cert.oracle_mismatches
        ok &= passed
        entry = cert.to_json(M)
        entry.update({"oracle_rank": rank, "dual_size": dual, "expected_diag": cert.expected_diag,
                      "oracle_checked": cert.oracle_checked, "oracle_mismatches": cert.oracle_mismatches,
                      "anomaly": cert.anomaly, "pass": passed})
        if cert.oracle_skipped:
            rep.warnings.append(f"k={k}: oracle spot-check skipped ({cert.oracle_skipped})")
        certificates.append(entry)
        rep.lines.append(
            f"PD k={k}: {len(cert.rows)}x{len(cert.rows)} det={cert.det} triangular={cert.triangular} "
            f"diag±1={diag_ok} rank={rank} dual={dual} -> {'pass' if passed else 'FAIL'}"
        )
    rep.results["poincare"] = certificates
    return ok


def _verify_oracle(M: Matroid, args, rep: RunReport) -> bool:
    total = count_top_monomials(M)
    if args.samples is None and total <= 10_000:
        monomials, mode = all_top_monomials(M), "exhaustive"
    else:
        monomials, mode = random_top_monomials(M, args.samples or 1000, args.seed), "sampled"
    agree = 0
    mismatches = []
    for m in monomials:
        fast = deg_monomial(M, m)
        slow = deg_expanded(M, m)
        ref = oracle_degree(M, m, cap=args.cap)
        if fast == slow == ref:
            agree += 1
        elif len(mismatches) < 20:
            mismatches.append({"monomial": m.text(M), "closed_form": fast, "expansion": slow, "oracle": ref})
    rep.results["oracle"] = {"mode": mode, "checked": len(monomials), "agree": agree, "mismatches": mismatches}
    rep.lines.append(f"degree routes ({mode}): {agree}/{len(monomials)} agreements")
    return agree == len(monomials)


def _verify_self_intersection(M: Matroid, args, rep: RunReport) -> bool:
    from .oracle import linear_form, monomial_poly, poly_add, poly_mul
    from .psi import DivisorMonomial

    if M.r < 2:
        rep.results["self_intersection"] = {"checked": 0}
        return True
    piece = build_graded(M, 2, args.cap)
    failures = []
    for F in M.proper_flats:
        cls = monomial_poly(M, DivisorMonomial.from_pairs([(F, 2)]))
        poly_add(cls, poly_mul(M, {((F, 1),): 1}, linear_form(M, psi_minus(M, F) + psi_plus(M, F))))
        if not piece.is_zero(cls):
            failures.append(bitset.fmt(F))
    rep.results["self_intersection"] = {"checked": len(M.proper_flats), "failures": failures}
    rep.lines.append(f"self-intersection: {len(M.proper_flats) - len(failures)}/{len(M.proper_flats)} reduce to 0")
    return not failures


def cmd_verify(M: Matroid, args, rep: RunReport) -> int:
    if not (args.pd is not None or args.oracle or args.all):
        raise io.ParseError("verify needs --pd [k], --oracle or --all")
    rep.seed = args.seed
    ok = True
    if args.pd is not None or args.all:
        ks = range(M.r + 1) if args.pd in (None, -1) else [args.pd]
        for k in ks:
            if not 0 <= k <= M.r:
                raise io.ParseError(f"--pd degree must lie in 0..{M.r}")
        ok &= _verify_pd(M, ks, args, rep)
    if args.oracle or args.all:
        ok &= _verify_oracle(M, args, rep)
    if args.all:
        try:
            polys = {name: str(char_poly(M, name)) for name in CHAR_POLY_METHODS}
        except MatroidError as exc:
            polys = {"error": str(exc)}
        agree = len(set(polys.values())) == 1
        rep.results["charpoly"] = {"by_method": polys, "agree": agree}
        rep.lines.append(f"χ methods agree: {agree}")
        ok &= agree
        ok &= _verify_self_intersection(M, args, rep)
    rep.results["pass"] = ok
    if not ok:
        raise Mismatch("verification failed")
    return EXIT_OK


def cmd_export(M: Matroid, args, rep: RunReport) -> int:
    rep.results = io.matroid_to_json(M)
    rep.lines.append(json.dumps(rep.results))
    return EXIT_OK


COMMANDS: dict[str, Callable] = {
    "flats": cmd_flats,
    "charpoly": cmd_charpoly,
    "degree": cmd_degree,
    "psi-degree": cmd_psi_degree,
    "volume": cmd_volume,
    "verify": cmd_verify,
    "export": cmd_export,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _output_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default=default,
                     help="emit a JSON run report")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table", default=default,
                     help="emit plain text (default)")
    p.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="omit timing from JSON output")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0)
    p.add_argument("--cap", type=int, default=argparse.SUPPRESS if suppress else DEFAULT_MONOMIAL_CAP,
                   help="oracle chain-monomial guard")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chow-engine", description="Exact matroid Chow ring computations.")
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--boolean", type=int, metavar="N")
    src.add_argument("--uniform", type=int, nargs=2, metavar=("R", "N"))
    src.add_argument("--graph", metavar="FILE")
    src.add_argument("--matrix", metavar="FILE")
    src.add_argument("--flats", metavar="FILE")
    src.add_argument("--builtin", metavar="NAME", help=", ".join(catalog.names()))
    _output_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _output_flags(p, suppress=True)
        return p

    add("flats", "list the lattice of flats")
    add("charpoly", "characteristic polynomial, reduced polynomial and μ")
    p = add("degree", "degree of a divisor monomial")
    p.add_argument("monomial", help="e.g. 'D{0,1}^3 * D{0,1,2,3,4}^2 * D{E}'")
    p.add_argument("--trace", action="store_true", help="show the psi expansion")
    p.add_argument("--oracle", action="store_true", help="confirm with the quotient-ring oracle")
    p.add_argument("--oracle-method", choices=("linear", "rewrite"), default="linear")
    p = add("psi-degree", "degree of ψ_0^a ψ_∞^b or of a product of ψ^- classes")
    p.add_argument("exponents", type=int, nargs="*", metavar="A B")
    p.add_argument("--minus", nargs="+", metavar="FLAT")
    p = add("volume", "volume polynomial and generalized permutahedra")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--symbolic", action="store_true")
    mode.add_argument("--eval", metavar="X_JSON")
    mode.add_argument("--postnikov", metavar="Y_JSON")
    p = add("verify", "Poincaré duality and degree cross-checks")
    p.add_argument("--pd", type=int, nargs="?", const=-1, metavar="K")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--samples", type=int)
    p.add_argument("--oracle-fraction", type=float, default=0.1)
    p.add_argument("--all", action="store_true")
    add("export", "print the matroid in the flats JSON format")
    return parser


def _emit(rep: RunReport, args) -> None:
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.fmt == "json":
        print(json.dumps(rep.to_json(with_timing=not args.no_timing), indent=2, sort_keys=True))
    else:
        for line in rep.lines:
            print(line)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    rep = RunReport(command=args.command, source="")
    start = time.perf_counter()
    code = EXIT_OK
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            M, rep.source = _source(args)
            code = COMMANDS[args.command](M, args, rep)
        rep.warnings.extend(str(w.message) for w in caught)
    except Mismatch as exc:
        rep.warnings.append(f"mismatch: {exc}")
        code = EXIT_MISMATCH
    except GuardExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except AxiomViolation as exc:
        print(f"error: axiom ({exc.axiom}) violated: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MatroidError, ValueError, OSError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep.timing = round(time.perf_counter() - start, 6)
    _emit(rep, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
