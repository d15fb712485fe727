"""Command-line interface: ``sktnil <command> ...``.

Exit codes: 0 success, 1 negative verdict (not SKT, search did not
converge, irreducibility not certified), 2 input or precondition error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog
from .bismut import is_skt
from .compose import (
    CompositionSpec,
    abelian_J_propagation,
    certify_irreducible,
    compose,
    iterate_compose,
)
from .decomp import (
    decomposition_identity_defects,
    derivation_defects,
    proof_invariants,
    reassemble,
    split_codim2,
    vz_split,
)
from .errors import FALSIFICATION_EVENTS, SKTError
from .exactnum import format_rational, parse_rational
from .fileio import dump_report, form_to_list, read_algebra, serialize_algebra, write_algebra
from .hermitian import HermitianTriple, center_bracket_equivalence, center_is_J_invariant

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def _basis(S) -> list[list[str]]:
    return [_vec(b) for b in S.basis]


def _matrix(M) -> list[list[str]]:
    return [_vec(row) for row in M]


def load_triple(spec: str) -> HermitianTriple:
    """A file path, or a catalog name when no such file exists."""
    if os.path.exists(spec):
        return read_algebra(spec)
    if spec in catalog.NAMES:
        return catalog.get(spec).triple
    raise InputError(f"{spec}: no such file or catalog entry")


# --------------------------------------------------------------------------- rendering


def _render_text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "structured":
        return dump_report(report)
    return "\n".join(_render_text(report)) + "\n"


def emit(report: dict, args) -> None:
    text = render(report, args.format)
    sys.stdout.write(text)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)


# --------------------------------------------------------------------------- commands


def verify_report(T: HermitianTriple) -> dict:
    verdict = is_skt(T)
    L = T.L
    split = vz_split(T)
    return {
        "command": "verify",
        "name": T.name,
        "dim": T.dim,
        "step": L.nilpotency_step(),
        "center": _basis(L.center()),
        "derived": _basis(L.derived()),
        "split": {"v": _basis(split.v), "z": _basis(split.z)},
        "abelian_J": T.is_abelian_J(),
        "c": form_to_list(verdict.c),
        "c_text": str(verdict.c),
        "dc": form_to_list(verdict.dc),
        "dc_residual": format_rational(verdict.residual),
        "is_skt": verdict.is_skt,
        "center_J_invariant": center_is_J_invariant(T),
        "center_bracket_disagreements": [_vec(v) for v in center_bracket_equivalence(T)],
    }


def cmd_verify(args) -> int:
    T = load_triple(args.file)
    report = verify_report(T)
    emit(report, args)
    return EXIT_OK if report["is_skt"] else EXIT_NEGATIVE


def cmd_catalog(args) -> int:
    if args.catalog_command == "list":
        emit({"command": "catalog list", "entries": catalog.list_entries()}, args)
        return EXIT_OK
    try:
        entry = catalog.get(args.name)
    except catalog.UnknownEntry as exc:
        raise InputError(str(exc)) from None
    if args.output:
        write_algebra(entry.triple, args.output)
    else:
        sys.stdout.write(serialize_algebra(entry.triple))
    return EXIT_OK


def _flags(T: HermitianTriple, override: str | None) -> bool:
    if override is not None:
        return override == "yes"
    return bool(T.provenance.get("irreducible", False))


def cmd_compose(args) -> int:
    left, right = load_triple(args.left), load_triple(args.right)
    spec = CompositionSpec.from_indices(
        left, right, args.x_index, args.y_index, parse_rational(args.r), parse_rational(args.s)
    )
    out = compose(spec)
    flags = (_flags(left, args.left_irreducible), _flags(right, args.right_irreducible))
    cert = certify_irreducible(out, spec, flags)
    out.provenance["irreducible"] = cert.status == "certified"
    verdict = is_skt(out)
    report = {
        "command": "compose",
        "name": out.name,
        "dim": out.dim,
        "provenance": spec.provenance(),
        "is_skt": verdict.is_skt,
        "step": out.L.nilpotency_step(),
        "abelian_J": out.is_abelian_J(),
        "abelian_J_predicted": abelian_J_propagation(spec),
        "c_text": str(verdict.c),
        "irreducibility": {
            "status": cert.status,
            "factor_flags": list(cert.factor_irreducible_flags),
            "evidence": cert.evidence,
        },
    }
    if args.output:
        write_algebra(out, args.output)
    emit(report, args)
    return EXIT_OK if cert.status == "certified" else EXIT_NEGATIVE


def cmd_iterate(args) -> int:
    seeds = [load_triple(s) for s in args.seeds]
    out = iterate_compose(seeds, args.target_dim)
    verdict = is_skt(out)
    if args.output:
        write_algebra(out, args.output)
    emit(
        {
            "command": "iterate",
            "seeds": [s.name for s in seeds],
            "target_dim": args.target_dim,
            "name": out.name,
            "dim": out.dim,
            "is_skt": verdict.is_skt,
            "step": out.L.nilpotency_step(),
        },
        args,
    )
    return EXIT_OK if verdict.is_skt else EXIT_NEGATIVE


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j, got {text!r}") from None
    return a, b


def cmd_split(args) -> int:
    T = load_triple(args.file)
    D = split_codim2(T, args.complement)
    report = {
        "command": "split",
        "name": T.name,
        "complement": list(D.complement),
        "dim_n": D.n.dim,
        "A": _matrix(D.A),
        "B": _matrix(D.B),
        "X": _vec(D.X),
        "derivation_defects": [list(d) for d in derivation_defects(D)],
        "decomposition_identity_defects": decomposition_identity_defects(D),
        "reassembles": reassemble(D) == T.L,
        "n_is_skt": is_skt(D.triple_n).is_skt,
    }
    skt = is_skt(T).is_skt
    step = D.n.nilpotency_step()
    if skt and step is not None and step <= 2:
        report["invariants"] = proof_invariants(D, T)
    else:
        report["invariants"] = None
    report["falsification_events"] = len(FALSIFICATION_EVENTS)
    emit(report, args)
    ok = report["reassembles"] and not report["derivation_defects"] and not report["decomposition_identity_defects"]
    if report["invariants"] is not None:
        ok = ok and report["invariants"]["ok"]
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_search(args) -> int:
    from .search import SearchConfig, search_metric

    T = load_triple(args.file)
    cfg = SearchConfig(
        starts=args.starts,
        max_iters=args.max_iters,
        tol=args.tol,
        eigenvalue_band=args.band,
        rng_seed=args.seed,
    )
    result = search_metric(T.L, T.J, cfg, g0=T.g, name=T.name)
    report = {"command": "search", "name": T.name, "dim": T.dim, "step": T.L.nilpotency_step()}
    report.update(result.to_report())
    emit(report, args)
    return EXIT_OK if result.converged else EXIT_NEGATIVE


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "structured"), default=argparse.SUPPRESS,
        help="report format (structured = JSON)",
    )
    parser = argparse.ArgumentParser(
        prog="sktnil", description="SKT Hermitian structures on nilpotent Lie algebras", parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="validate a file and decide SKT")
    p.add_argument("file")
    p.add_argument("--report", help="also write the report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="browse the shipped examples")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    csub.add_parser("list", parents=[common])
    show = csub.add_parser("show", parents=[common])
    show.add_argument("name")
    show.add_argument("-o", "--output")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("compose", parents=[common], help="fuse two SKT triples")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--x-index", type=int)
    p.add_argument("--y-index", type=int)
    p.add_argument("--r", default="1")
    p.add_argument("--s", default="1")
    p.add_argument("--left-irreducible", choices=("yes", "no"),
                   help="assert factor irreducibility (default: the file's provenance flag)")
    p.add_argument("--right-irreducible", choices=("yes", "no"))
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("iterate", parents=[common], help="repeat compose up to a target dimension")
    p.add_argument("--seeds", nargs="+", required=True)
    p.add_argument("--target-dim", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("split", parents=[common], help="codimension-2 extraction")
    p.add_argument("file")
    p.add_argument("--complement", type=_pair, required=True, help="i,j with J e_i = e_j")
    p.add_argument("--report")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("search", parents=[common], help="numerical SKT metric search")
    p.add_argument("file")
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--band", type=float, default=10.0, help="allowed eigenvalue band of g relative to g0")
    p.add_argument("--report")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "text"
    try:
        return args.func(args)
    except (SKTError, InputError, ValueError, OSError) as exc:
        if args.format == "structured":
            err = {"error": type(exc).__name__, "message": str(exc)}
            for attr in ("axiom", "condition"):
                if hasattr(exc, attr):
                    err[attr] = getattr(exc, attr)
            if getattr(exc, "witness", None) is not None:
                err["witness"] = json.loads(json.dumps(exc.witness, default=str))
            sys.stderr.write(dump_report(err))
        else:
            sys.stderr.write(f"sktnil: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
