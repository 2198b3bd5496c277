"""JSON and DOT serialization, group-spec parsing and the on-disk result cache."""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Callable

from .family import FamilyTransferSystem, GroupFamily
from .groups import (FiniteGroup, GroupError, Subgroup, make_cyclic, make_direct_product,
                     make_quaternion, make_symmetric, standalone_copies, subgroup_lattice)
from .hom_closed import HomWitness
from .transfer import TransferPoset, TransferSystem, make_poset

CACHE_VERSION = 1
CACHE_ENV = "TRANSFER_LATTICE_CACHE"

_ATOM = re.compile(r"^(C|S)(\d+)$|^Q8$")


class SpecError(ValueError):
    pass


def dumps(data: Any) -> str:
    """Canonical text: sorted keys, compact separators, trailing newline."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def _atom(token: str) -> FiniteGroup:
    m = _ATOM.match(token)
    if not m:
        raise SpecError(f"unknown group {token!r}; expected C<n>, S<n>, Q8 or a product with 'x'")
    if token == "Q8":
        return make_quaternion()
    n = int(m.group(2))
    return make_cyclic(n) if m.group(1) == "C" else make_symmetric(n)


def parse_group(spec: str) -> FiniteGroup:
    """``C<n>``, ``S<n>``, ``Q8``, products like ``C2xC2``, ``<spec>@<i>`` or a JSON file."""
    spec = spec.strip()
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read group file {spec}: {exc}") from exc
        return FiniteGroup.from_json(data)
    if "@" in spec:
        base, _, idx = spec.rpartition("@")
        g = parse_group(base)
        for copy in standalone_copies(g, include_whole=True):
            if copy.name == f"{g.name}@{idx}":
                return copy
        raise SpecError(f"{g.name} has no subgroup with index {idx}")
    parts = spec.split("x")
    if not all(parts):
        raise SpecError(f"malformed product {spec!r}")
    g = _atom(parts[0])
    for p in parts[1:]:
        g = make_direct_product(g, _atom(p))
    return g


def parse_family(specs: str | list[str]) -> GroupFamily:
    if isinstance(specs, str):
        specs = [s for s in specs.split(",") if s.strip()]
    return GroupFamily([parse_group(s) for s in specs])


def lattice_json(g: FiniteGroup) -> dict:
    lat = subgroup_lattice(g)
    return {"group": g.name,
            "subgroups": [s.to_json() for s in lat.subgroups],
            "classes": list(lat.conjugacy_class),
            "pairs": [list(p) for p in lat.pairs]}


def transfer_to_json(t: TransferSystem) -> dict:
    return {"group": t.lattice.parent.name, "edges": [list(e) for e in t.edges]}


def transfer_from_json(data: dict, group: FiniteGroup) -> TransferSystem:
    try:
        name, edges = data["group"], data["edges"]
        pairs = [(int(k), int(h)) for k, h in edges]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed transfer system JSON: {exc}") from exc
    if name != group.name:
        raise SpecError(f"transfer system is for {name}, not {group.name}")
    lat = subgroup_lattice(group)
    n = len(lat.subgroups)
    if any(not (0 <= k < n and 0 <= h < n) for k, h in pairs):
        raise SpecError(f"subgroup index out of range 0..{n - 1}")
    return TransferSystem.from_edges(lat, pairs)


def poset_to_json(p: TransferPoset) -> dict:
    return {"systems": [transfer_to_json(t) for t in p.systems],
            "covers": [list(c) for c in p.covers]}


def poset_from_json(data: dict, group: FiniteGroup) -> TransferPoset:
    systems = [transfer_from_json(s, group) for s in data["systems"]]
    poset = make_poset(subgroup_lattice(group), (t.mask for t in systems))
    if [list(c) for c in poset.covers] != data["covers"] or list(poset.systems) != systems:
        raise SpecError("poset JSON is not in canonical form")
    return poset


def family_to_json(s: FamilyTransferSystem) -> dict:
    return {"family": s.family.names,
            "systems": {n: [list(e) for e in t.edges] for n, t in s.per_member.items()}}


def family_from_json(data: dict, family: GroupFamily | None = None) -> FamilyTransferSystem:
    try:
        names, systems = data["family"], data["systems"]
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed family JSON: {exc}") from exc
    if family is None:
        family = parse_family(list(names))
    elif family.names != list(names):
        raise SpecError("family JSON lists different members")
    per = {}
    for g in family:
        per[g.name] = transfer_from_json({"group": g.name, "edges": systems.get(g.name, [])}, g)
    return FamilyTransferSystem(family, per)


def witness_to_json(w: HomWitness) -> dict:
    return {"theta": w.theta.to_json(), "k": w.k, "h": w.h, "preimage": w.preimage, "l": w.l}


def _edge_label(t: TransferSystem) -> str:
    return " ".join(f"{k}<{h}" for k, h in t.edges) or "{}"


def poset_to_dot(p: TransferPoset, name: str = "transfer_systems") -> str:
    """Hasse diagram, smallest system at the bottom."""
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for i, t in enumerate(p.systems):
        lines.append(f'  s{i} [label="{_edge_label(t)}"];')
    for a, b in p.covers:
        lines.append(f"  s{a} -> s{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, ".cache"))


def cache_key(group: FiniteGroup, op: str, params: dict | None = None) -> str:
    payload = dumps({"group": group.to_json(), "op": op, "params": params or {},
                     "version": CACHE_VERSION})
    return hashlib.sha256(payload.encode()).hexdigest()


class Cache:
    """Content-addressed JSON store; entries are written to a temp file and renamed."""

    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else cache_dir()

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str) -> Any | None:
        try:
            entry = json.loads(self._path(key).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None
        if entry.get("version") != CACHE_VERSION or entry.get("key") != key:
            return None
        return entry["value"]

    def put(self, key: str, value: Any) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(dumps({"key": key, "value": value, "version": CACHE_VERSION}))
            os.replace(tmp, self._path(key))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def fetch(self, group: FiniteGroup, op: str, params: dict | None,
              compute: Callable[[], Any]) -> Any:
        key = cache_key(group, op, params)
        hit = self.get(key)
        if hit is not None:
            return hit
        value = compute()
        self.put(key, value)
        return value


def subgroup_from_json(indices: list[int], group: FiniteGroup) -> Subgroup:
    mask = 0
    for x in indices:
        if not 0 <= int(x) < group.order:
            raise SpecError(f"element index {x} out of range")
        mask |= 1 << int(x)
    s = Subgroup(group, mask)
    if not s.is_subgroup():
        raise SpecError("element list is not a subgroup")
    return s
