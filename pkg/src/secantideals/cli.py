"""Command-line interface: ``secantideals <command> ...`` or ``python -m secantideals``.

Every command prints one JSON document on stdout. Exit status is 0 on success,
2 when a check fails, 1 on bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .errors import InternalError, InvalidInput, UnsupportedCase
from .exact_linalg import SECOND_PRIME, default_prime, parse_domain
from .partitions import parse_partition


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _read_json(path: str | None):
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    return json.loads(text)


def _read_tensor(path: str | None):
    from .tensors import Tensor

    data = _read_json(path)
    # accept either a bare tensor or the report printed by ``tensor random``
    if "result" in data and isinstance(data["result"], dict) and "tensor" in data["result"]:
        data = data["result"]["tensor"]
    elif "tensor" in data:
        data = data["tensor"]
    return Tensor.from_dict(data)


# ---------------------------------------------------------------------------
# commands


def cmd_multiplicity(args):
    from .symrep import invariant_multiplicity

    parts = [parse_partition(p) for p in args.parts]
    if any(p.weight != args.d for p in parts):
        raise InvalidInput(f"every partition must have weight {args.d}")
    return {"multiplicity": invariant_multiplicity(parts)}


def cmd_decompose(args):
    from .symrep import isotypic_decomposition

    comps = isotypic_decomposition(args.d, args.dims)
    return {"components": [c.to_dict() for c in comps], "count": len(comps)}


def cmd_codim(args):
    from .resolution import codimension

    return {"codim": codimension(args.shape, args.r)}


def cmd_length_budget(args):
    from .resolution import resolution_length_budget

    return resolution_length_budget(args.shape, args.r).to_dict()


def cmd_tensor_random(args):
    from .tensors import random_rank_tensor, random_tensor

    domain = parse_domain(args.domain) if args.domain != "GF" else parse_domain(str(args.prime))
    if args.rank is None:
        T = random_tensor(args.shape, args.seed, domain)
    else:
        T = random_rank_tensor(args.shape, args.rank, args.seed, domain)
    return {"tensor": T.to_dict()}


def cmd_tensor_flatten(args):
    from .tensors import flatten

    T = _read_tensor(args.tensor)
    return {"split": list(args.split), "matrix": flatten(T, args.split).to_dict()}


def cmd_tensor_mrank(args):
    from .exact_linalg import rank
    from .tensors import flatten, multilinear_rank, splits

    T = _read_tensor(args.tensor)
    return {
        "multilinear_rank": list(multilinear_rank(T)),
        "flattening_ranks": [{"split": list(I), "rank": rank(flatten(T, I))} for I in splits(T.nfactors)],
    }


def _generator_set(args, shape):
    from . import equations as eq

    family = args.family
    if family == "strassen":
        if tuple(shape) == eq.STRASSEN_SHAPE:
            return eq.strassen_polys()
        return eq.inherited_strassen(shape, args.changes, args.change_seed)
    if family == "flat":
        if not args.split:
            raise UsageError("--family flat needs --split")
        size = args.size if args.size is not None else (args.r + 1 if args.r else None)
        if size is None:
            raise UsageError("--family flat needs --size or --r")
        return eq.flattening_minor_polys(shape, args.split, size)
    if family == "subspace":
        b = args.b or ((args.r,) * len(shape) if args.r else None)
        if b is None:
            raise UsageError("--family subspace needs --b or --r")
        return eq.subspace_variety_generators(shape, b)
    if args.r is None:
        raise UsageError("--family secant needs --r")
    return eq.secant_generators(shape, args.r, args.changes, args.change_seed)


def cmd_equations_gen(args):
    G = _generator_set(args, args.shape)
    out = G.to_dict()
    out["fingerprint"] = G.fingerprint()
    return out


def cmd_equations_eval(args):
    from .equations import generator_evaluate

    T = _read_tensor(args.tensor)
    G = _generator_set(args, T.shape)
    values = [generator_evaluate(g, T) for g in G]
    return {
        "label": G.label,
        "count": len(values),
        "domain": T.domain.name,
        "values": [T.domain.serialize(v) for v in values],
        "all_zero": all(v == 0 for v in values),
    }


def cmd_equations_jacobian(args):
    from .equations import jacobian_rank_at

    T = _read_tensor(args.tensor)
    G = _generator_set(args, T.shape)
    primes = [T.domain.p] if T.domain.characteristic else _primes(args)
    return {"label": G.label, "count": len(G), "jacobian_rank": {str(p): jacobian_rank_at(G, T, p) for p in primes}}


def cmd_membership(args):
    from .equations import membership_verdict

    T = _read_tensor(args.tensor)
    return membership_verdict(T, args.r).to_dict(T.domain)


def cmd_hilbert(args):
    from .polyring import hilbert_function

    G = _generator_set(args, args.shape)
    polys = G.sparse_polys()
    if len(polys) != len(G):
        raise UsageError("hilbert needs explicit polynomials; pass --changes 0")
    values = {str(p): [h for _, h in hilbert_function(polys, args.dmax, p, shape=G.shape, threads=args.threads)] for p in _primes(args)}
    return {"label": G.label, "count": len(G), "hilbert": values, "primes_agree": len({tuple(v) for v in values.values()}) == 1}


def cmd_hilbert_compare(args):
    from .resolution import hilbert_comparison

    report = hilbert_comparison(args.case, args.dmax, _primes(args), threads=args.threads)
    if not report["agree"]:
        raise CheckFailed(report)
    return report


def cmd_betti_check(args):
    from .resolution import betti_check

    report = betti_check(args.case)
    if not (report["agree"] and report["cap_ok"]):
        raise CheckFailed(report)
    return report


def cmd_bott(args):
    from .bott import check_acyclic_Sd_eta

    reports = [check_acyclic_Sd_eta(args.shape, args.r, d) for d in range(1, args.d + 1)] if args.upto else [
        check_acyclic_Sd_eta(args.shape, args.r, args.d)
    ]
    out = {"reports": reports, "acyclic": all(r["acyclic"] for r in reports)}
    if not out["acyclic"]:
        raise CheckFailed(out)
    return out


def _primes(args) -> list[int]:
    if args.prime == args.prime2:
        raise UsageError("--prime and --prime2 must differ")
    return [args.prime, args.prime2]


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    def shared(suppress: bool) -> argparse.ArgumentParser:
        # subcommands repeat the global options; SUPPRESS keeps them from
        # overwriting values given before the subcommand name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--seed", type=int, default=d(0), help="seed for every random choice (default 0)")
        p.add_argument("--prime", type=int, default=d(None), help="primary prime (env SECANTIDEALS_PRIME)")
        p.add_argument("--prime2", type=int, default=d(SECOND_PRIME), help="second prime for two-prime checks")
        p.add_argument("--threads", type=int, default=d(1), help="worker processes for elimination")
        p.add_argument("--output", "-o", default=d(None), help="write JSON here instead of stdout")
        p.add_argument("--verbose", "-v", action="store_true", default=d(False), help="progress on stderr")
        return p

    common = shared(True)
    parser = _Parser(prog="secantideals", description=__doc__.splitlines()[0], parents=[shared(False)])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, helptext, parent=sub):
        p = parent.add_parser(name, help=helptext, parents=[common])
        p.set_defaults(func=func, name=name)
        return p

    p = add("multiplicity", cmd_multiplicity, "multiplicity of a Schur module tuple in S^d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--parts", nargs="+", required=True, help='JSON partitions, e.g. "[2,1,1]"')

    p = add("decompose", cmd_decompose, "isotypic decomposition of S^d(C^a1 x ... x C^an)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--dims", type=_ints, required=True)

    for name, func, text in (("codim", cmd_codim, "expected codimension of sigma_r"), ("length-budget", cmd_length_budget, "resolution length bookkeeping")):
        p = add(name, func, text)
        p.add_argument("--shape", type=_ints, required=True)
        p.add_argument("--r", type=int, required=True)

    tensor = sub.add_parser("tensor", help="tensor utilities").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = add("random", cmd_tensor_random, "seeded random tensor", tensor)
    p.add_argument("--shape", type=_ints, required=True)
    p.add_argument("--rank", type=int, default=None, help="sum of this many decomposables; omit for generic")
    p.add_argument("--domain", default="QQ", help='QQ, GF (uses --prime) or "GF(p)"')
    p = add("flatten", cmd_tensor_flatten, "flattening matrix", tensor)
    p.add_argument("--tensor", default="-")
    p.add_argument("--split", type=_ints, required=True)
    p = add("mrank", cmd_tensor_mrank, "multilinear and flattening ranks", tensor)
    p.add_argument("--tensor", default="-")

    def family_args(p, need_shape):
        if need_shape:
            p.add_argument("--shape", type=_ints, required=True)
        p.add_argument("--family", choices=["flat", "subspace", "strassen", "secant"], default="secant")
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--split", type=_ints, default=None)
        p.add_argument("--size", type=int, default=None)
        p.add_argument("--b", type=_ints, default=None)
        p.add_argument("--changes", type=int, default=5, help="random coordinate changes for inherited quartics")
        p.add_argument("--change-seed", type=int, default=20070101)

    eqs = sub.add_parser("equations", help="generator sets").add_subparsers(dest="action", required=True, parser_class=_Parser)
    family_args(add("gen", cmd_equations_gen, "print a generator set", eqs), True)
    p = add("eval", cmd_equations_eval, "evaluate generators on a tensor", eqs)
    p.add_argument("--tensor", default="-")
    family_args(p, False)
    p = add("jacobian", cmd_equations_jacobian, "rank of the differentials at a tensor", eqs)
    p.add_argument("--tensor", default="-")
    family_args(p, False)

    p = add("membership", cmd_membership, "test a tensor against the implemented equations")
    p.add_argument("--tensor", default="-")
    p.add_argument("--r", type=int, required=True)

    p = add("hilbert", cmd_hilbert, "Hilbert function of a generator set, two primes")
    family_args(p, True)
    p.add_argument("--dmax", type=int, default=4)

    p = add("hilbert-compare", cmd_hilbert_compare, "computed vs tabulated Hilbert function")
    p.add_argument("--case", choices=["4factor", "3factor"], required=True)
    p.add_argument("--dmax", type=int, default=6)

    p = add("betti-check", cmd_betti_check, "expand an equivariant Betti table")
    p.add_argument("--case", choices=["4factor", "3factor"], required=True)

    p = add("bott", cmd_bott, "Bott check of S^d(eta)")
    p.add_argument("--shape", type=_ints, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--upto", action="store_true", help="check every degree 1..d")
    return parser


_NON_CONFIG = {"func", "output", "verbose", "name", "threads"}


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in _NON_CONFIG:
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr, format="%(message)s")
    try:
        if args.prime is None:
            args.prime = default_prime()
        parse_domain(str(args.prime))
        parse_domain(str(args.prime2))
        if args.threads < 1:
            raise UsageError("--threads must be positive")
    except (InvalidInput, ValueError, UsageError) as exc:
        print(f"secantideals: error: {exc}", file=sys.stderr)
        return 1

    command = args.name if getattr(args, "action", None) is None else f"{args.command} {args.name}"
    envelope = {
        "tool": "secantideals",
        "version": __version__,
        "command": command,
        "config": _config(args),
        "seed": args.seed,
        "primes": [args.prime, args.prime2],
    }
    try:
        envelope["result"] = args.func(args)
        envelope["status"] = "ok"
        code = 0
    except CheckFailed as exc:
        envelope["result"] = exc.report
        envelope["status"] = "check-failed"
        code = 2
    except InternalError as exc:
        envelope["error"] = str(exc)
        envelope["status"] = "check-failed"
        code = 2
    except (UsageError, InvalidInput, UnsupportedCase, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"secantideals: error: {exc}", file=sys.stderr)
        return 1
    _emit(envelope, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
