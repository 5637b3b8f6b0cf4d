"""Command line interface.

Exit codes: 0 success or property holds, 1 property fails, 2 input error,
3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace

from .catalog import catalog
from .colored_perm import GroupParams, coxeter_element, format_element, parse_element
from .decompose import chunk_decompose, rearranged_decompose, sbd, scd_from_sbd, su_decompose
from .io import (
    SchemaError, export_decomposition, export_dot, export_poset, import_decomposition,
    import_poset_file, verify_reference_table,
)
from .poset import Decomposition, MODES, rank_profile, verify_decomposition
from .reflection_order import DEFAULT_CAP, LatticeTooLarge, NCLattice, build_nc_lattice
from .sperner import (
    is_k_sperner_bruteforce, is_sperner, is_strongly_sperner, max_k_family_bruteforce,
    normalized_matching, sum_largest_ranks, BRUTE_CAP,
)

OK, FAILS, INPUT_ERROR, CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _params(family: str, d: int | None, n: int) -> GroupParams:
    if family == "g11n":
        if d not in (None, 1):
            raise InputError("family g11n takes d = 1")
        return GroupParams(1, n)
    if d is None or d < 2:
        raise InputError("family gddn needs --d of at least 2")
    return GroupParams(d, n)


def _load(path):
    try:
        return import_poset_file(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_build(args) -> int:
    params = _params(args.family, args.d, args.n)
    L = build_nc_lattice(params, cap=args.cap)
    meta = {"family": args.family, "d": params.d, "n": params.n,
            "coxeter": format_element(L.gamma)}
    export_poset(L.poset, args.out, meta)
    print(f"{params}: {len(L)} elements, rank vector {list(L.rank_vector())} -> {args.out}")
    return OK


def cmd_analyze(args) -> int:
    pf = _load(args.file)
    prof = rank_profile(pf.poset)
    if args.json:
        _emit({"elements": pf.poset.m} | asdict(prof))
        return OK
    show_all = not (args.rank_vector or args.gamma)
    if args.rank_vector or show_all:
        print("rank vector:", " ".join(map(str, prof.rank_vector)))
    if args.gamma or show_all:
        if prof.gamma_vector is None:
            print("gamma vector: undefined (rank vector not symmetric)")
        else:
            print("gamma vector:", " ".join(map(str, prof.gamma_vector)))
    if show_all:
        print(f"elements: {pf.poset.m}")
        print(f"symmetric: {prof.symmetric}, unimodal: {prof.unimodal}, "
              f"gamma nonnegative: {prof.gamma_nonnegative}")
    return OK


def _lattice_for(pf) -> tuple[NCLattice, list[int]]:
    """Rebuild the lattice named in the file meta; map lattice index -> file id."""
    meta = pf.meta
    if "family" not in meta or "n" not in meta:
        raise InputError("decompositions need a constructed lattice; file meta has no family/n")
    params = _params(meta["family"], meta.get("d"), meta["n"])
    gamma = coxeter_element(params)
    if "coxeter" in meta and parse_element(meta["coxeter"], params) != gamma:
        raise InputError("decompositions are built for the standard Coxeter element only")
    L = build_nc_lattice(params, cap=max(DEFAULT_CAP, pf.poset.m))
    labels = pf.poset.labels or ()
    to_file = [-1] * len(L)
    for fid, text in enumerate(labels):
        try:
            u = parse_element(text, params)
        except ValueError as exc:
            raise InputError(f"label {text!r} of element {fid}: {exc}") from None
        if u not in L:
            raise InputError(f"label {text!r} is not in NC({params})")
        to_file[L.index(u)] = fid
    if len(L) != pf.poset.m or -1 in to_file:
        raise InputError("file elements do not match the lattice named in meta")
    return L, to_file


def _relabel(D: Decomposition, to_file: list[int]) -> Decomposition:
    parts = []
    for p in D.parts:
        bmap = tuple(to_file[x] for x in p.boolean_map) if p.boolean_map else None
        parts.append(replace(p, elements=tuple(sorted(to_file[x] for x in p.elements)),
                             boolean_map=bmap))
    return Decomposition(tuple(parts))


def cmd_decompose(args) -> int:
    pf = _load(args.file)
    L, to_file = _lattice_for(pf)
    d1 = L.params.d == 1
    if args.mode == "chunks":
        if d1:
            raise InputError("chunks mode needs a G(d,d,n) lattice with d >= 2")
        D = chunk_decompose(L)
    elif args.mode == "rearranged":
        D = su_decompose(L) if d1 else rearranged_decompose(L)
    elif args.mode == "sbd":
        D = sbd(L)
    else:
        D = scd_from_sbd(L.poset, sbd(L))
    export_decomposition(_relabel(D, to_file), args.out)
    census = ", ".join(f"{k}:{v}" for k, v in D.census().items())
    print(f"{args.mode}: {len(D)} parts, census {{{census}}} -> {args.out}")
    return OK


def cmd_verify(args) -> int:
    pf = _load(args.file)
    try:
        D = import_decomposition(args.decomp)
    except OSError as exc:
        raise InputError(f"{args.decomp}: {exc.strerror}") from None
    modes = [args.expect] if args.expect in ("plain", "symmetric") else [args.expect, "symmetric"]
    ok = True
    for mode in modes:
        try:
            rep = verify_decomposition(pf.poset, D, mode)
        except ValueError as exc:
            print(f"{mode}: not a partition: {exc}")
            return FAILS
        for k, msg in rep.violations:
            print(f"{mode}: part {k}: {msg}")
        print(f"{mode}: {'ok' if rep.valid else 'FAILED'} ({len(D)} parts)")
        ok = ok and rep.valid
    return OK if ok else FAILS


def cmd_check(args) -> int:
    P = _load(args.file).poset
    chosen = args.sperner or args.strong_sperner or args.normalized_matching or args.k_family
    out, ok = {}, True
    if args.sperner:
        out["sperner"] = is_sperner(P)
        ok &= out["sperner"]
    if args.strong_sperner or not chosen:
        rep = is_strongly_sperner(P)
        out["sperner_report"] = asdict(rep) | {"strongly_sperner": rep.strongly_sperner}
        ok &= rep.strongly_sperner
    if args.normalized_matching:
        nm = normalized_matching(P)
        out["normalized_matching"] = asdict(nm)
        ok &= nm.holds
    if args.k_family is not None:
        k = args.k_family
        if k < 1:
            raise InputError("--k-family needs K >= 1")
        if P.m > BRUTE_CAP:
            print(f"k-family check is exhaustive and capped at {BRUTE_CAP} elements", file=sys.stderr)
            return CAP
        best = max_k_family_bruteforce(P, k)
        out["k_family"] = {"k": k, "max_family": best, "sum_largest_ranks": sum_largest_ranks(P, k),
                           "k_sperner": is_k_sperner_bruteforce(P, k)}
        ok &= out["k_family"]["k_sperner"]
    _emit(out)
    return OK if ok else FAILS


def cmd_catalog(args) -> int:
    params = _params(args.family, args.d, args.n)
    inv = catalog(args.family, params.d, params.n)
    _emit(asdict(inv))
    return OK


def cmd_export(args) -> int:
    export_dot(_load(args.file).poset, args.dot)
    return OK


def cmd_reference(args) -> int:
    rep = verify_reference_table(args.file, args.group)
    _emit(rep.to_json())
    return OK if rep.matches else FAILS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncp", description="Noncrossing partition lattices and Sperner checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build NC(W) and write it as a poset file")
    p.add_argument("--family", choices=["g11n", "gddn"], required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="rank vector and gamma vector")
    p.add_argument("file")
    p.add_argument("--rank-vector", action="store_true")
    p.add_argument("--gamma", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", help="decompose a constructed lattice")
    p.add_argument("file")
    p.add_argument("--mode", choices=["chunks", "rearranged", "sbd", "scd"], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="verify a decomposition file against a poset file")
    p.add_argument("file")
    p.add_argument("decomp")
    p.add_argument("--expect", choices=list(MODES), required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", help="Sperner-type properties")
    p.add_argument("file")
    p.add_argument("--sperner", action="store_true")
    p.add_argument("--strong-sperner", action="store_true")
    p.add_argument("--normalized-matching", action="store_true")
    p.add_argument("--k-family", type=int, metavar="K")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", help="degrees, Coxeter number and Catalan number")
    p.add_argument("--family", choices=["g11n", "gddn"], required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("export", help="write a DOT drawing of the Hasse diagram")
    p.add_argument("file")
    p.add_argument("--dot", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("reference", help="compare a poset file with the exceptional-group table")
    p.add_argument("file")
    p.add_argument("--group")
    p.set_defaults(func=cmd_reference)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except LatticeTooLarge as exc:
        print(f"ncp: {exc}", file=sys.stderr)
        return CAP
    except (InputError, SchemaError, ValueError) as exc:
        print(f"ncp: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
