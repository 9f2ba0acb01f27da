"""Command-line front end.

Every subcommand reads polynomials in the shared text grammar, either inline
(comma separated) or from ``--file``, which wins when both are given.  Exit
status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .apolarity import InverseSystem, apolar_algebra, apolar_ideal_piece, hilbert_function, socle_type
from .commuting import (CommutingTuple, find_cyclic_vector, hilb_tangent_dim, is_stable,
                        kernel_profile, principal_component_dim, socle_dim, tangent_space_dim)
from .errors import FiniteAlgError
from .ideals import DEFAULT_TRUNCATION_CAP, FiniteIdeal, colength, initial_ideal, intersect, minimal_generators
from .poly import OperatorPolynomial
from .raydeg import DEFAULT_SAMPLES, ray_decompose, verify_flatness_by_colength

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _text(args) -> str:
    if getattr(args, "file", None):
        return Path(args.file).read_text().strip()
    if not args.polys:
        raise UsageError("no polynomials given (inline or --file)")
    return args.polys


def _system(args) -> InverseSystem:
    return InverseSystem.parse(_text(args), args.vars)


def _ideal_from_text(text: str, args) -> FiniteIdeal:
    return FiniteIdeal.parse(text, args.vars, getattr(args, "add_power", None),
                             truncation_cap=args.truncation_cap)


def _ideal(args) -> FiniteIdeal:
    """Operator generators with --ideal, otherwise Ann of the dual generators."""
    if getattr(args, "ideal", False):
        return _ideal_from_text(_text(args), args)
    return FiniteIdeal.annihilator(_system(args))


def _load_tuple(path: str) -> CommutingTuple:
    from .catalog.runner import Fixture, Subject, fixture_path
    data = json.loads(fixture_path(path).read_text())
    if "kind" in data:
        return Subject(Fixture.from_json(data)).tuple
    return CommutingTuple.from_json(data)


def _tuple(args) -> CommutingTuple:
    if args.tuple:
        return _load_tuple(args.tuple)
    return _ideal(args).quotient.to_tuple()


def _fracs(text: str) -> list[Fraction]:
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def _mono(n: int, m) -> str:
    return str(OperatorPolynomial.monomial(m)) if any(m) else "1"


# ---------------------------------------------------------------- subcommands

def cmd_hf(args):
    h = hilbert_function(_system(args))
    return {"hilbert_function": list(h), "colength": h.colength}, str(h)


def cmd_apolar(args):
    E = _system(args)
    if args.degree is not None:
        piece = apolar_ideal_piece(E, args.degree)
        gens = [str(p) for p in piece.basis()]
        return {"degree": args.degree, "dim": piece.dim, "basis": gens}, "\n".join(gens) or "0"
    I = FiniteIdeal.annihilator(E)
    gens = [str(g) for g in minimal_generators(I)]
    return {"vars": E.nvars, "generators": gens}, "\n".join(gens)


def cmd_socle(args):
    if args.tuple or args.ideal:
        s = socle_dim(_tuple(args))
        return {"socle_dim": s}, str(s)
    st = socle_type(_system(args))
    return ({"socle_type": {str(k): v for k, v in st.items()}, "socle_dim": sum(st.values())},
            " ".join(f"{k}:{v}" for k, v in sorted(st.items())))


def cmd_algebra(args):
    if args.ideal:
        q = _ideal(args).quotient
        t, basis, one = q.to_tuple(), q.basis, q.one()
    else:
        A = apolar_algebra(_system(args))
        t, basis, one = A.tuple, A.basis, A.one
    n = len(t.matrices)
    names = [_mono(n, m) for m in basis]
    data = {"basis": names, **t.to_json(), "one": [str(x) for x in one]}
    lines = ["basis: " + ", ".join(names)]
    for i, m in enumerate(t.matrices, 1):
        lines.append(f"A{i} =")
        lines += ["  " + " ".join(f"{str(x):>4}" for x in row) for row in m.to_strings()]
    return data, "\n".join(lines)


def cmd_tangent(args):
    t = _tuple(args)
    dim = tangent_space_dim(t)
    data = {"d": t.d, "n": t.n, "tangent_dim": dim, "principal_component_dim": principal_component_dim(t.d, t.n)}
    if args.hilb:
        data["hilb_tangent_dim"] = hilb_tangent_dim(t, seed=args.seed)
        return data, f"{dim}\n{data['hilb_tangent_dim']}"
    return data, str(dim)


def cmd_stable(args):
    t = _tuple(args)
    if args.vector:
        v = _fracs(args.vector)
        ok = is_stable(t, v)
        return {"stable": ok, "vector": [str(x) for x in v]}, "stable" if ok else "not stable"
    v = find_cyclic_vector(t, seed=args.seed)
    data = {"stable": True, "vector": [str(x) for x in v], "seed": args.seed,
            "kernel_profile": list(kernel_profile(t))}
    return data, "cyclic vector: (" + ", ".join(str(x) for x in v) + ")"


def cmd_ray(args):
    I = _ideal(args)
    rd = ray_decompose(I, args.direction - 1)
    samples = _fracs(args.lambda_) if args.lambda_ else list(DEFAULT_SAMPLES)
    rep = verify_flatness_by_colength(rd, samples, lower=args.lower)
    data = {**rd.to_json(), "flatness": rep.to_json()}
    lines = [f"nu = {rd.nu}", f"q = {rd.q}", "J = " + ", ".join(str(g) for g in rd.J)]
    lines += [f"lambda = {lam}: colength {c}" for lam, c in rep.rows]
    lines.append("flat: PASS" if rep.passed else "flat: FAIL at " + ", ".join(map(str, rep.offending)))
    return data, "\n".join(lines)


def cmd_init_ideal(args):
    if not args.weight:
        raise UsageError("init-ideal needs --weight")
    w = [int(x) for x in args.weight.split(",")]
    I = _ideal_from_text(_text(args), args)
    if len(w) != I.nvars:
        raise UsageError(f"weight has {len(w)} entries for {I.nvars} variables")
    J = initial_ideal(I, w)
    gens = [str(g) for g in minimal_generators(J)]
    return {"weight": w, **J.to_json(), "generators": gens, "colength": colength(J)}, "\n".join(gens)


def cmd_intersect(args):
    ideals = [_ideal_from_text(t, args) for t in args.ideals]
    ideals += [FiniteIdeal.point(_fracs(p)) for p in args.point or []]
    if len(ideals) < 2:
        raise UsageError("intersect needs at least two ideals or points")
    out = ideals[0]
    for J in ideals[1:]:
        out = intersect(out, J)
    gens = [str(g) for g in minimal_generators(out)]
    return {**out.to_json(), "generators": gens, "colength": colength(out)}, f"colength {colength(out)}\n" + "\n".join(gens)


def cmd_verify_paper(args):
    from .catalog.runner import load_fixtures, run_all
    fixtures = load_fixtures()
    if args.fixture:
        wanted = set(args.fixture)
        fixtures = [f for f in fixtures if f.id in wanted]
        missing = wanted - {f.id for f in fixtures}
        if missing:
            raise UsageError("unknown fixture(s): " + ", ".join(sorted(missing)))
    report = run_all(fixtures)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(json.dumps(report.to_json(), indent=2) + "\n")
        (out / "report.tsv").write_text(report.to_tsv())
        (out / "table1.txt").write_text(report.table1_text())
        if not args.no_figures:
            from .catalog.figures import render_all
            render_all(report, out / "figures")
    text = report.summary_text() + "\n" + report.table1_text()
    return report.to_json(timing=False), text, 0 if report.passed else 1


COMMANDS = {
    "hf": cmd_hf, "apolar": cmd_apolar, "socle": cmd_socle, "algebra": cmd_algebra,
    "tangent": cmd_tangent, "stable": cmd_stable, "ray": cmd_ray, "init-ideal": cmd_init_ideal,
    "intersect": cmd_intersect, "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vars", type=int, default=None, help="number of variables")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for random searches (default {DEFAULT_SEED})")
    common.add_argument("--truncation-cap", type=int, default=DEFAULT_TRUNCATION_CAP)

    def polys(p, ideal_flag=True, tuple_flag=False):
        p.add_argument("polys", nargs="?", help="comma-separated polynomials")
        p.add_argument("--file", help="read the polynomials from a file")
        if ideal_flag:
            p.add_argument("--ideal", action="store_true", help="input is operator generators (a1..an) of an ideal")
            p.add_argument("--add-power", type=int, help="add the given power of the maximal ideal")
        if tuple_flag:
            p.add_argument("--tuple", help="JSON file or catalogue fixture with commuting matrices")

    ap = argparse.ArgumentParser(prog="finitealg", description="Exact computations with finite algebras.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("hf", parents=[common], help="Hilbert function of R/Ann(E)")
    polys(p, ideal_flag=False)
    p = sub.add_parser("apolar", parents=[common], help="generators of Ann(E)")
    polys(p, ideal_flag=False)
    p.add_argument("--degree", type=int, help="only the degree-k piece (homogeneous E)")
    p = sub.add_parser("socle", parents=[common], help="socle type or socle dimension")
    polys(p, tuple_flag=True)
    p = sub.add_parser("algebra", parents=[common], help="basis and multiplication matrices")
    polys(p)
    p = sub.add_parser("tangent", parents=[common], help="tangent dimension of the commuting variety")
    polys(p, tuple_flag=True)
    p.add_argument("--hilb", action="store_true", help="also print the Hilbert scheme tangent dimension")
    p = sub.add_parser("stable", parents=[common], help="cyclic vector test or search")
    polys(p, tuple_flag=True)
    p.add_argument("--vector", help="comma-separated vector to test")
    p = sub.add_parser("ray", parents=[common], help="ray decomposition and fibre colengths")
    polys(p)
    p.add_argument("--direction", type=int, default=1, help="1-based variable index")
    p.add_argument("--lambda", dest="lambda_", help="comma-separated sample values")
    p.add_argument("--lower", action="store_true", help="use the lower family")
    p = sub.add_parser("init-ideal", parents=[common], help="initial ideal for a weight")
    polys(p, ideal_flag=False)
    p.add_argument("--add-power", type=int)
    p.add_argument("--weight", help="comma-separated integers")
    p = sub.add_parser("intersect", parents=[common], help="intersection of ideals and points")
    p.add_argument("ideals", nargs="*", help="ideals, each as comma-separated generators")
    p.add_argument("--point", action="append", help="a rational point, comma separated (repeatable)")
    p.add_argument("--add-power", type=int)
    p = sub.add_parser("verify-paper", parents=[common], help="run the fixture catalogue")
    p.add_argument("--out", help="directory for report.json, report.tsv, table1.txt and figures")
    p.add_argument("--fixture", action="append", help="run only this fixture id (repeatable)")
    p.add_argument("--no-figures", action="store_true")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (FiniteAlgError, ValueError, FileNotFoundError, KeyError, ZeroDivisionError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if args.format == "json":
            print(json.dumps(err), file=sys.stderr)
        else:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    data, text, code = res if len(res) == 3 else (*res, 0)
    print(json.dumps(data, indent=2, sort_keys=True) if args.format == "json" else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
