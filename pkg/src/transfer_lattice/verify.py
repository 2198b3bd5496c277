"""Named claim suites run by ``transfer-lattice verify``."""

from __future__ import annotations

import itertools
import math
import time
from typing import Callable, Iterator, NamedTuple

import networkx as nx

from .family import (check_adjunction, enumerate_family_systems, r_g, reconstruct, subgroup_family,
                     u_g)
from .groups import (FiniteGroup, compose_perms, make_cyclic, make_quaternion, make_symmetric,
                     subgroup_lattice)
from .gsets import (all_gsets, admissible_family, blk, compose_orbits, coset_gset, disjoint_union,
                    is_admissible_gset, orbits, structure_violations, transfer_of_family)
from .hom_closed import enumerate_hom_closed, is_hom_closed
from .transfer import TransferSystem, enumerate_transfer_systems


class Claim(NamedTuple):
    name: str
    ok: bool
    detail: str = ""


# Hasse diagrams of the Σ3 posets as drawn, nodes labelled by drawing position
SIGMA3_FIGURE_COVERS = [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D"), ("D", "E"), ("C", "F"),
                        ("F", "G"), ("E", "G"), ("E", "I"), ("I", "J"), ("G", "J")]
SIGMA3_HOM_CLOSED_FIGURE_COVERS = [("K", "L"), ("K", "M"), ("L", "P"), ("M", "P"), ("P", "O")]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def cyclic_prime_powers(max_order: int = 64) -> Iterator[tuple[int, int]]:
    for p in (2, 3):
        n = 1
        while p ** n <= max_order and n <= 3:
            yield p, n
            n += 1


def cover_graph(covers) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_edges_from(covers)
    return g


def suite_catalan() -> list[Claim]:
    out = []
    for p, n in cyclic_prime_powers():
        g = make_cyclic(p ** n)
        lat = subgroup_lattice(g)
        start = time.perf_counter()
        full = enumerate_transfer_systems(lat)
        elapsed = time.perf_counter() - start
        out.append(Claim(f"|I_{g.name}| = {catalan(n + 1)}", len(full) == catalan(n + 1) and elapsed < 1,
                         f"got {len(full)} in {elapsed:.3f}s"))
        hc = enumerate_hom_closed(lat, full)
        chain = all(hc.leq(i, i + 1) for i in range(len(hc) - 1))
        rule = {TransferSystem.from_edges(lat, [(i, j) for i, j in lat.pairs if i >= n - m]).mask
                for m in range(n + 1)}
        ok = len(hc) == n + 1 and chain and {t.mask for t in hc.systems} == rule
        out.append(Claim(f"hom-closed on {g.name}: {n + 1} systems, a chain, i >= n-m rule", ok,
                         f"got {len(hc)}, chain={chain}"))
    return out


def suite_sigma3() -> list[Claim]:
    lat = subgroup_lattice(make_symmetric(3))
    start = time.perf_counter()
    full = enumerate_transfer_systems(lat)
    hc = enumerate_hom_closed(lat, full)
    elapsed = time.perf_counter() - start
    iso_full = nx.is_isomorphic(cover_graph(full.covers), cover_graph(SIGMA3_FIGURE_COVERS))
    iso_hc = nx.is_isomorphic(cover_graph(hc.covers), cover_graph(SIGMA3_HOM_CLOSED_FIGURE_COVERS))
    return [
        Claim("|I_S3| = 9", len(full) == 9, f"got {len(full)}"),
        Claim("|hom-closed S3| = 5", len(hc) == 5, f"got {len(hc)}"),
        Claim("S3 Hasse diagram matches the drawn poset", iso_full, f"{len(full.covers)} covers"),
        Claim("hom-closed S3 Hasse diagram matches the drawn poset", iso_hc, f"{len(hc.covers)} covers"),
        Claim("S3 runtime < 1s", elapsed < 1, f"{elapsed:.3f}s"),
    ]


def suite_q8() -> list[Claim]:
    lat = subgroup_lattice(make_quaternion())
    start = time.perf_counter()
    full = enumerate_transfer_systems(lat, "exhaustive")
    hc = enumerate_hom_closed(lat, full)
    elapsed = time.perf_counter() - start
    return [
        Claim("|I_Q8| = 68", len(full) == 68, f"got {len(full)}"),
        Claim("|hom-closed Q8| = 6", len(hc) == 6, f"got {len(hc)}"),
        Claim("Q8 exhaustive runtime < 10s", elapsed < 10, f"{elapsed:.3f}s"),
    ]


def adjunction_failures(g: FiniteGroup) -> dict[str, int]:
    """Counts of Galois-law, U∘R and reconstruction failures for the subgroup family of ``g``."""
    fam = subgroup_family(g)
    lat = subgroup_lattice(g)
    full = enumerate_transfer_systems(lat)
    family_systems = enumerate_family_systems(fam)
    galois = sum(not check_adjunction(t, s) for t in full.systems for s in family_systems)
    unit = sum(u_g(r_g(t, fam), g) != t for t in enumerate_hom_closed(lat, full).systems)
    rec = sum(reconstruct(s, g) != s for s in family_systems)
    return {"galois": galois, "u_g r_g": unit, "reconstruct": rec}


def suite_adjunction() -> list[Claim]:
    out = []
    for g in (make_cyclic(8), make_symmetric(3), make_quaternion()):
        fails = adjunction_failures(g)
        for law, n in fails.items():
            out.append(Claim(f"{law} on subgroup family of {g.name}", n == 0, f"{n} failures"))
    return out


def gset_failures(g: FiniteGroup, arities=(1, 2, 3), max_size: int = 4) -> dict[str, int]:
    lat = subgroup_lattice(g)
    full = enumerate_transfer_systems(lat)
    counts = {"structure": 0, "pullback": 0, "disjoint union": 0}
    for t in full.systems:
        closed = bool(is_hom_closed(t))
        for n in arities:
            for kind, _ in structure_violations(admissible_family(t, n), pullback=closed):
                counts["pullback" if kind == "pullback" else "structure"] += 1
    for h in lat.subgroups:
        sets = [a for n in range(max_size + 1) for a in all_gsets(h, n)]
        for t in full.systems:
            adm = [is_admissible_gset(t, a) for a in sets]
            for i, j in itertools.combinations_with_replacement(range(len(sets)), 2):
                if sets[i].size + sets[j].size > max_size:
                    continue
                joint = is_admissible_gset(t, disjoint_union(sets[i], sets[j]))
                counts["disjoint union"] += joint != (adm[i] and adm[j])
    return counts


def composition_failures(g: FiniteGroup) -> int:
    """Disagreements between induced-orbit admissibility and transitivity, over nested triples."""
    lat = subgroup_lattice(g)
    subs, top = lat.subgroups, lat.whole
    bad = 0
    for t in enumerate_transfer_systems(lat).systems:
        for k, h in itertools.product(range(len(subs)), repeat=2):
            if not subs[k] <= subs[h]:
                continue
            induced = compose_orbits(coset_gset(subs[top], subs[h]), coset_gset(subs[h], subs[k]))
            (orb,) = orbits(induced)
            if orb.stabilizer != subs[k]:
                bad += 1
            adm = is_admissible_gset(t, induced)
            if t.le(k, h) and t.le(h, top) and not adm:
                bad += 1
            if adm != t.le(k, top):
                bad += 1
    return bad


def blk_checks(max_blocks: int = 3, max_size: int = 2) -> tuple[int, tuple | None]:
    """Equal-size multiplicativity failures, and a counterexample pair for sizes (2, 1)."""
    bad = 0
    for k in range(1, max_blocks + 1):
        perms = list(itertools.permutations(range(k)))
        for size in range(max_size + 1):
            sizes = (size,) * k
            for a, b in itertools.product(perms, repeat=2):
                if blk(compose_perms(a, b), sizes) != compose_perms(blk(a, sizes), blk(b, sizes)):
                    bad += 1
    counter = None
    for a, b in itertools.product(itertools.permutations(range(2)), repeat=2):
        if blk(compose_perms(a, b), (2, 1)) != compose_perms(blk(a, (2, 1)), blk(b, (2, 1))):
            counter = (a, b)
            break
    return bad, counter


def suite_gsets() -> list[Claim]:
    out = []
    for g in (make_symmetric(3), make_quaternion()):
        for kind, n in gset_failures(g).items():
            out.append(Claim(f"{kind} closure of admissible data on {g.name}", n == 0, f"{n} failures"))
    n = composition_failures(make_symmetric(3))
    out.append(Claim("composition matches transitivity on S3", n == 0, f"{n} failures"))
    bad, counter = blk_checks()
    out.append(Claim("equal-size block permutations are multiplicative", bad == 0, f"{bad} failures"))
    out.append(Claim("block permutations of sizes (2,1) are not multiplicative", counter is not None,
                     f"witness {counter}"))
    round_trip = 0
    lat = subgroup_lattice(make_symmetric(3))
    for t in enumerate_transfer_systems(lat).systems:
        got = transfer_of_family([admissible_family(t, n) for n in (1, 2, 3)])
        want = [p for p in t.edges if lat.index_of[p] <= 3]
        round_trip += got.edges != want
    out.append(Claim("admissible families round-trip to S3 transfer systems", round_trip == 0,
                     f"{round_trip} failures"))
    return out


SUITES: dict[str, Callable[[], list[Claim]]] = {
    "catalan": suite_catalan,
    "sigma3": suite_sigma3,
    "q8": suite_q8,
    "adjunction": suite_adjunction,
    "gsets": suite_gsets,
}
