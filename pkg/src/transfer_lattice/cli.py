"""``transfer-lattice`` command line.

Exit codes: 0 success, 1 a checked claim failed, 2 bad input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .family import (FamilyError, GroupFamily, r_g, reconstruct, subgroup_family, u_g,
                     validate_family)
from .groups import FiniteGroup, GroupError, GroupOrderError, subgroup_lattice
from .gsets import GSetError
from .hom_closed import enumerate_hom_closed, hom_closure, is_hom_closed
from .transfer import (EnumerationBudgetError, LatticeMismatchError, TransferPoset, TransferSystem, close,
                       enumerate_transfer_systems, join, meet, validate)
from .verify import SUITES

log = logging.getLogger("transfer_lattice")


def _emit(data) -> None:
    sys.stdout.write(io.dumps(data))


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise io.SpecError(f"cannot read {path}: {exc}") from exc


def _poset(g: FiniteGroup, args) -> TransferPoset:
    lat = subgroup_lattice(g)
    params = {"mode": args.mode, "global_closed": args.global_closed}

    def compute():
        full = enumerate_transfer_systems(lat, args.mode)
        return io.poset_to_json(enumerate_hom_closed(lat, full) if args.global_closed else full)

    if args.no_cache:
        data = compute()
    else:
        data = io.Cache().fetch(g, "enumerate", params, compute)
    return io.poset_from_json(data, g)


def _family(args, g: FiniteGroup | None = None) -> GroupFamily:
    if getattr(args, "family", None):
        return io.parse_family(args.family)
    if g is None:
        raise io.SpecError("--family is required here")
    return subgroup_family(g)


def cmd_group(args) -> int:
    _emit(io.parse_group(args.group).to_json())
    return 0


def cmd_lattice(args) -> int:
    _emit(io.lattice_json(io.parse_group(args.group)))
    return 0


def cmd_enumerate(args) -> int:
    g = io.parse_group(args.group)
    poset = _poset(g, args)
    if args.format == "count":
        print(len(poset))
    elif args.format == "dot":
        sys.stdout.write(io.poset_to_dot(poset, g.name))
    else:
        _emit(io.poset_to_json(poset))
    return 0


def cmd_export(args) -> int:
    g = io.parse_group(args.group)
    poset = _poset(g, args)
    text = io.poset_to_dot(poset, g.name)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(poset)} systems, {len(poset.covers)} covers to {args.out}")
    return 0


def _load_system(g: FiniteGroup, path: str):
    return io.transfer_from_json(_read_json(path), g)


def cmd_binary(args) -> int:
    g = io.parse_group(args.group)
    a, b = _load_system(g, args.first), _load_system(g, args.second)
    for t in (a, b):
        if not validate(t):
            raise io.SpecError(f"{io.transfer_to_json(t)} is not a transfer system")
    _emit(io.transfer_to_json(meet(a, b) if args.command == "meet" else join(a, b)))
    return 0


def _pairs(text: Sequence[str] | None) -> list[tuple[int, int]]:
    out = []
    for item in text or ():
        try:
            k, h = item.split(",")
            out.append((int(k), int(h)))
        except ValueError:
            raise io.SpecError(f"pair {item!r} should look like K,H") from None
    return out


def cmd_closure(args) -> int:
    g = io.parse_group(args.group)
    lat = subgroup_lattice(g)
    seed = _pairs(args.pair)
    if args.file:
        seed += _load_system(g, args.file).edges
    if args.check:
        v = validate(TransferSystem.from_edges(lat, seed))
        if not v:
            _emit({"ok": False, "axiom": v.axiom, "witness": [list(x) if isinstance(x, tuple) else x
                                                             for x in v.witness]})
            return 1
    _emit(io.transfer_to_json(close(lat, seed)))
    return 0


def cmd_hom_closure(args) -> int:
    g = io.parse_group(args.group)
    t = _load_system(g, args.file)
    if not validate(t):
        raise io.SpecError("input is not a transfer system")
    if args.check:
        res = is_hom_closed(t)
        if not res:
            _emit({"ok": False, "witness": io.witness_to_json(res.witness)})
            return 1
        _emit({"ok": True})
        return 0
    _emit(io.transfer_to_json(hom_closure(t)))
    return 0


def cmd_family(args) -> int:
    if args.action == "rg":
        g = io.parse_group(args.source)
        fam = _family(args, g)
        t = _load_system(fam.member(g.name), args.file)
        _emit(io.family_to_json(r_g(t, fam)))
        return 0
    fam = io.parse_family(args.family) if args.family else None
    s = io.family_from_json(_read_json(args.file), fam)
    if args.action == "validate":
        res = validate_family(s)
        if res:
            _emit({"ok": True})
            return 0
        w = res.witness
        _emit({"ok": False, "source": w.source, "target": w.target, "k": w.k, "h": w.h,
               "axiom": w.axiom, "theta": w.theta.to_json() if w.theta else None,
               "preimage": w.preimage, "l": w.l})
        return 1
    if args.action == "ug":
        _emit(io.transfer_to_json(u_g(s, args.target)))
        return 0
    _emit(io.family_to_json(reconstruct(s, args.big.split(","))))
    return 0


def cmd_query(args) -> int:
    g = io.parse_group(args.group)
    t = _load_system(g, args.file)
    if args.rg_target:
        member, k, h = args.rg_target
        fam = _family(args, g)
        m = fam.member(io.parse_group(member).name)
        lat = subgroup_lattice(m)
        k, h = int(k), int(h)
        n = len(lat.subgroups)
        if not (0 <= k < n and 0 <= h < n) or not lat.subgroups[k] <= lat.subgroups[h]:
            raise io.SpecError(f"({k}, {h}) is not an inclusion of subgroups of {m.name}")
        ok = r_g(t, fam)[m.name].le(k, h)
    else:
        if args.sub is None or args.sup is None:
            raise io.SpecError("give --sub and --sup, or --rg-target")
        lat = subgroup_lattice(g)
        n = len(lat.subgroups)
        if not (0 <= args.sub < n and 0 <= args.sup < n):
            raise io.SpecError(f"subgroup index out of range 0..{n - 1}")
        ok = t.le(args.sub, args.sup)
    print("admissible" if ok else "not admissible")
    return 0


def cmd_verify(args) -> int:
    claims = SUITES[args.suite]()
    for c in claims:
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.name}  ({c.detail})")
    return 0 if all(c.ok for c in claims) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transfer-lattice",
                                description="Transfer systems on finite groups.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_group(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("group", help="C<n>, S<n>, Q8, products like C2xC2, <spec>@<i>, or a JSON file")
        return sp

    with_group("group", "print a group as JSON").set_defaults(func=cmd_group)
    with_group("lattice", "print the subgroup lattice").set_defaults(func=cmd_lattice)

    for name, func in (("enumerate", cmd_enumerate), ("export", cmd_export)):
        sp = with_group(name, "all transfer systems" if name == "enumerate" else "write the Hasse diagram as DOT")
        sp.add_argument("--global-closed", action="store_true", help="only systems closed under all homomorphisms")
        sp.add_argument("--mode", choices=("auto", "exhaustive", "bfs"), default="auto")
        sp.add_argument("--no-cache", action="store_true")
        if name == "enumerate":
            sp.add_argument("--format", choices=("json", "dot", "count"), default="json")
        else:
            sp.add_argument("--out", default="-")
        sp.set_defaults(func=func)

    for name in ("meet", "join"):
        sp = with_group(name, f"{name} of two transfer systems")
        sp.add_argument("first")
        sp.add_argument("second")
        sp.set_defaults(func=cmd_binary)

    sp = with_group("closure", "least transfer system containing some pairs")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--pair", action="append", metavar="K,H")
    sp.add_argument("--check", action="store_true", help="fail with a witness unless already closed")
    sp.set_defaults(func=cmd_closure)

    sp = with_group("hom-closure", "least system closed under all homomorphisms")
    sp.add_argument("file")
    sp.add_argument("--check", action="store_true", help="only test closure, printing a witness on failure")
    sp.set_defaults(func=cmd_hom_closure)

    sp = sub.add_parser("family", help="systems over a family of groups")
    sp.add_argument("action", choices=("validate", "rg", "ug", "reconstruct"))
    sp.add_argument("file")
    sp.add_argument("--family", help="comma-separated member specs")
    sp.add_argument("--source", help="group of the input transfer system (rg)")
    sp.add_argument("--target", help="member to restrict to (ug)")
    sp.add_argument("--big", help="comma-separated big members (reconstruct)")
    sp.set_defaults(func=cmd_family)

    sp = with_group("query", "is a pair admissible")
    sp.add_argument("file")
    sp.add_argument("--sub", type=int)
    sp.add_argument("--sup", type=int)
    sp.add_argument("--rg-target", nargs=3, metavar=("MEMBER", "K", "H"))
    sp.add_argument("--family", help="comma-separated member specs for --rg-target")
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("verify", help="run a claim suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "family":
        needed = {"rg": "source", "ug": "target", "reconstruct": "big"}.get(args.action)
        if needed and not getattr(args, needed):
            parser.error(f"family {args.action} needs --{needed}")
    try:
        return args.func(args)
    except (GroupOrderError, EnumerationBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GroupError, io.SpecError, FamilyError, GSetError, LatticeMismatchError, KeyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
