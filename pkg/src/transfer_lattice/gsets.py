"""Finite H-sets, their graph subgroups, and admissible families of graphs.

An H-set on ``n`` points is stored as one permutation of ``range(n)`` per
member of the acting subgroup; permutations compose right to left, so the
action is a homomorphism into ``make_symmetric(n)``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .groups import (FiniteGroup, GroupError, Homomorphism, Subgroup, _bits, compose_perms,
                     enumerate_homomorphisms, make_direct_product, make_symmetric, subgroup_lattice)
from .transfer import TransferSystem, _tables

MAX_ARITY = 4

Perm = tuple[int, ...]


class GSetError(ValueError):
    pass


class NotAGraphSubgroupError(GSetError):
    def __init__(self, element: int, label: str):
        super().__init__(f"{label} lies in the kernel side {{e}} x S_n")
        self.element = element


@functools.lru_cache(maxsize=None)
def _perm_index(n: int) -> dict[Perm, int]:
    return {p: i for i, p in enumerate(itertools.permutations(range(n)))}


def _identity(n: int) -> Perm:
    return tuple(range(n))


@dataclass(frozen=True)
class GSet:
    acting: Subgroup
    size: int
    images: tuple[Perm, ...]

    def __post_init__(self):
        if len(self.images) != self.acting.order:
            raise GSetError("need one permutation per element of the acting group")
        want = set(range(self.size))
        for p in self.images:
            if len(p) != self.size or set(p) != want:
                raise GSetError(f"{p} is not a permutation of {self.size} points")
        g, f = self.acting.parent, dict(zip(self.acting.elements, self.images))
        if f[g.identity] != _identity(self.size):
            raise GSetError("identity must act trivially")
        for a in self.acting.elements:
            for b in self.acting.elements:
                if f[g.table[a][b]] != compose_perms(f[a], f[b]):
                    raise GSetError("action is not a homomorphism")

    @classmethod
    def from_map(cls, acting: Subgroup, size: int, mapping: Mapping[int, Perm]) -> GSet:
        return cls(acting, size, tuple(tuple(mapping[x]) for x in acting.elements))

    def perm(self, x: int) -> Perm:
        return self.images[self.acting.position[x]]

    def action(self) -> Homomorphism:
        """The action as a homomorphism into the symmetric group."""
        sym = make_symmetric(self.size)
        idx = _perm_index(self.size)
        return Homomorphism(self.acting, sym.whole(), tuple(idx[p] for p in self.images))

    def to_json(self) -> dict:
        return {"group": self.acting.parent.name, "subgroup": list(self.acting.elements),
                "size": self.size, "images": [list(p) for p in self.images]}

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup) -> GSet:
        mask = 0
        for x in data["subgroup"]:
            mask |= 1 << int(x)
        return cls(Subgroup(group, mask), int(data["size"]),
                   tuple(tuple(int(i) for i in p) for p in data["images"]))


def gset_from_homomorphism(phi: Homomorphism) -> GSet:
    sym = phi.target.parent
    n = len(sym.elements[0]) if sym.elements[0] != "()" else 0
    perms = list(itertools.permutations(range(n)))
    return GSet(phi.source, n, tuple(perms[y] for y in phi.images))


def trivial_gset(h: Subgroup, n: int) -> GSet:
    return GSet(h, n, tuple(_identity(n) for _ in h.elements))


def coset_gset(h: Subgroup, k: Subgroup) -> GSet:
    """``h`` acting on ``h/k``; point 0 is the coset ``k`` itself.

    The other cosets follow in order of their smallest element index.
    """
    if not k <= h:
        raise GSetError("coset space needs k <= h")
    g = h.parent
    cosets: list[int] = [k.mask]
    seen = k.mask
    for x in h.elements:
        if not seen >> x & 1:
            c = 0
            for y in k.elements:
                c |= 1 << g.table[x][y]
            cosets.append(c)
            seen |= c
    where = {}
    for i, c in enumerate(cosets):
        for x in _bits(c):
            where[x] = i
    reps = [next(iter(_bits(c))) for c in cosets]
    images = tuple(tuple(where[g.table[x][r]] for r in reps) for x in h.elements)
    return GSet(h, len(cosets), images)


def regular_gset(h: Subgroup) -> GSet:
    return coset_gset(h, h.parent.trivial())


def pullback_gset(a: GSet, f: Homomorphism) -> GSet:
    """``f*(a)`` for ``f: K -> a.acting``."""
    if f.target.mask & ~a.acting.mask:
        raise GSetError("homomorphism must land in the acting group")
    return GSet(f.source, a.size, tuple(a.perm(y) for y in f.images))


def restrict_gset(a: GSet, k: Subgroup) -> GSet:
    if not k <= a.acting:
        raise GSetError("can only restrict to a subgroup of the acting group")
    return GSet(k, a.size, tuple(a.perm(x) for x in k.elements))


class Orbit(NamedTuple):
    representative: int
    stabilizer: Subgroup
    points: tuple[int, ...]


def orbits(a: GSet) -> list[Orbit]:
    out = []
    placed: set[int] = set()
    for start in range(a.size):
        if start in placed:
            continue
        pts = sorted({p[start] for p in a.images})
        placed.update(pts)
        stab = 0
        for x, p in zip(a.acting.elements, a.images):
            if p[start] == start:
                stab |= 1 << x
        out.append(Orbit(start, Subgroup(a.acting.parent, stab), tuple(pts)))
    return out


def orbit_type(a: GSet) -> tuple[int, ...]:
    """Sorted stabilizer classes, one per orbit; equal exactly for isomorphic H-sets."""
    g = a.acting.parent
    lat = subgroup_lattice(g)
    out = []
    for orb in orbits(a):
        conj = set()
        for x in a.acting.elements:
            m = 0
            for y in orb.stabilizer.elements:
                m |= 1 << g.conjugate(x, y)
            conj.add(lat.index[m])
        out.append(min(conj))
    return tuple(sorted(out))


def isomorphic(a: GSet, b: GSet) -> bool:
    return a.acting == b.acting and a.size == b.size and orbit_type(a) == orbit_type(b)


def is_admissible_gset(t: TransferSystem, a: GSet) -> bool:
    """Every orbit stabilizer K of the H-set satisfies K <=_t H."""
    lat = t.lattice
    if a.acting.parent != lat.parent:
        raise GSetError("acting group is not a subgroup of the transfer system's group")
    h = lat.index[a.acting.mask]
    return all(t.le(lat.index[o.stabilizer.mask], h) for o in orbits(a))


def disjoint_union(a: GSet, b: GSet) -> GSet:
    if a.acting != b.acting:
        raise GSetError("disjoint union needs a common acting group")
    n = a.size
    return GSet(a.acting, n + b.size,
                tuple(p + tuple(n + i for i in q) for p, q in zip(a.images, b.images)))


def blk(sigma: Sequence[int], sizes: Sequence[int]) -> Perm:
    """Move block ``i`` (of length ``sizes[i]``) to slot ``sigma[i]``, keeping its order."""
    k = len(sizes)
    if sorted(sigma) != list(range(k)):
        raise GSetError("sigma must permute the blocks")
    if any(s < 0 for s in sizes):
        raise GSetError("block sizes must be non-negative")
    slot_block = [0] * k
    for i, s in enumerate(sigma):
        slot_block[s] = i
    new_start = [0] * k
    pos = 0
    for slot in range(k):
        b = slot_block[slot]
        new_start[b] = pos
        pos += sizes[b]
    out = []
    for i, size in enumerate(sizes):
        out.extend(new_start[i] + j for j in range(size))
    return tuple(out)


def compose_orbits(big: GSet, small: GSet) -> GSet:
    """Induce ``small`` up along the transitive ``big``.

    ``small.acting`` must be the stabilizer of point 0 of ``big``.  For
    ``big = G/H`` and ``small = H/K`` the result is ``G/K`` on ``m*n`` points,
    each group element acting by a block permutation of per-block actions.
    """
    orbs = orbits(big)
    if len(orbs) != 1:
        raise GSetError("the outer G-set must be transitive")
    h = orbs[0].stabilizer
    if h != small.acting:
        raise GSetError("inner H-set must act by the stabilizer of point 0 of the outer one")
    g = big.acting.parent
    m, n = big.size, small.size
    transporter = [None] * m
    for x, p in zip(big.acting.elements, big.images):
        if transporter[p[0]] is None:
            transporter[p[0]] = x
    images = []
    for x, pi in zip(big.acting.elements, big.images):
        inner: list[int] = []
        for i in range(m):
            hi = g.table[g.table[g.inverses[transporter[pi[i]]]][x]][transporter[i]]
            inner.extend(i * n + v for v in small.perm(hi))
        images.append(compose_perms(blk(pi, (n,) * m), tuple(inner)))
    return GSet(big.acting, m * n, tuple(images))


@dataclass(frozen=True)
class GraphSubgroup:
    carrier: FiniteGroup
    mask: int
    domain: Subgroup
    images: tuple[Perm, ...]

    @property
    def arity(self) -> int:
        return len(self.images[0])

    def gset(self) -> GSet:
        return GSet(self.domain, self.arity, self.images)

    def subgroup(self) -> Subgroup:
        return Subgroup(self.carrier, self.mask)


def product_carrier(g: FiniteGroup, n: int) -> FiniteGroup:
    if n > MAX_ARITY:
        raise GroupError(f"arity {n} exceeds cap {MAX_ARITY}")
    return make_direct_product(g, make_symmetric(n))


def _graph_mask(carrier: FiniteGroup, domain: Subgroup, images: Iterable[Perm], n: int) -> int:
    idx = _perm_index(n)
    width = carrier.factors[1].order
    mask = 0
    for x, p in zip(domain.elements, images):
        mask |= 1 << (x * width + idx[p])
    return mask


def graph_of(a: GSet) -> GraphSubgroup:
    carrier = product_carrier(a.acting.parent, a.size)
    return GraphSubgroup(carrier, _graph_mask(carrier, a.acting, a.images, a.size),
                         a.acting, a.images)


def graph_to_witness(gamma: Subgroup) -> GraphSubgroup:
    """Recover ``(H', φ)`` from a graph subgroup of ``G x S_n``."""
    carrier = gamma.parent
    if carrier.factors is None:
        raise GSetError("graph subgroups live in a product built by make_direct_product")
    g, sym = carrier.factors
    width = sym.order
    n = len(sym.elements[0]) if sym.elements[0] != "()" else 0
    perms = list(itertools.permutations(range(n)))
    images: dict[int, Perm] = {}
    for z in gamma.elements:
        a, b = divmod(z, width)
        if a == g.identity and b != sym.identity:
            raise NotAGraphSubgroupError(z, carrier.elements[z])
        images[a] = perms[b]
    dom_mask = 0
    for a in images:
        dom_mask |= 1 << a
    domain = Subgroup(g, dom_mask)
    return GraphSubgroup(carrier, gamma.mask, domain, tuple(images[x] for x in domain.elements))


def graph_subgroups(g: FiniteGroup, n: int) -> list[GraphSubgroup]:
    """Every graph subgroup of ``g x S_n``, by subgroup then homomorphism order."""
    carrier = product_carrier(g, n)
    sym = make_symmetric(n)
    perms = list(itertools.permutations(range(n)))
    out = []
    for h in subgroup_lattice(g).subgroups:
        for phi in enumerate_homomorphisms(h, sym.whole()):
            imgs = tuple(perms[y] for y in phi.images)
            out.append(GraphSubgroup(carrier, _graph_mask(carrier, h, imgs, n), h, imgs))
    return out


@dataclass(frozen=True)
class AdmissibleFamily:
    transfer: TransferSystem
    arity: int
    graphs: tuple[GraphSubgroup, ...]

    @property
    def group(self) -> FiniteGroup:
        return self.transfer.lattice.parent

    @cached_property
    def masks(self) -> frozenset[int]:
        return frozenset(gr.mask for gr in self.graphs)

    def __contains__(self, item) -> bool:
        mask = item.mask if isinstance(item, (GraphSubgroup, Subgroup)) else item
        return mask in self.masks

    def to_json(self) -> list:
        return [[list(gr.domain.elements), [list(p) for p in gr.images]] for gr in self.graphs]


def admissible_family(t: TransferSystem, n: int) -> AdmissibleFamily:
    """Graph subgroups of ``G x S_n`` whose H-sets are admissible for ``t``."""
    keep = tuple(gr for gr in graph_subgroups(t.lattice.parent, n) if is_admissible_gset(t, gr.gset()))
    return AdmissibleFamily(t, n, keep)


def structure_violations(fam: AdmissibleFamily, *, pullback: bool = True) -> Iterable[tuple[str, object]]:
    """Check closure of an admissible family under pullback, subgroups and
    conjugation, and that every ``H x {e}`` is present.

    Pullback along arbitrary homomorphisms only holds when the underlying
    transfer system is hom-closed; pass ``pullback=False`` to skip it.
    """
    g, n = fam.group, fam.arity
    lat = subgroup_lattice(g)
    carrier = product_carrier(g, n)
    ident = _identity(n)
    for h in lat.subgroups:
        if _graph_mask(carrier, h, [ident] * h.order, n) not in fam:
            yield "trivial", h
    for gr in fam.graphs:
        a = gr.gset()
        for k in lat.subgroups if pullback else ():
            for f in enumerate_homomorphisms(k, gr.domain):
                pulled = pullback_gset(a, f)
                if _graph_mask(carrier, k, pulled.images, n) not in fam:
                    yield "pullback", (gr, f)
        for k in lat.subgroups:
            if k <= gr.domain:
                sub = restrict_gset(a, k)
                if _graph_mask(carrier, k, sub.images, n) not in fam:
                    yield "subgroup", (gr, k)
        for z in range(carrier.order):
            m = 0
            for y in _bits(gr.mask):
                m |= 1 << carrier.conjugate(z, y)
            if m not in fam:
                yield "conjugation", (gr, z)


class InconsistentFamilyError(GSetError):
    pass


def transfer_of_family(fams: Iterable[AdmissibleFamily]) -> TransferSystem:
    """Relation with ``K <= H`` exactly when the graph of ``H/K`` is admissible.

    Pairs whose index exceeds the largest supplied arity are left out.  Every
    supplied graph is cross-checked against the orbit criterion of the result.
    """
    by_arity = {f.arity: f for f in fams}
    if not by_arity:
        raise GSetError("need at least one admissible family")
    first = next(iter(by_arity.values()))
    g = first.group
    lat = subgroup_lattice(g)
    bit = _tables(lat).bit
    mask = 0
    for k, h in lat.pairs:
        n = lat.index_of[(k, h)]
        fam = by_arity.get(n)
        if fam is None:
            continue
        a = coset_gset(lat.subgroups[h], lat.subgroups[k])
        if graph_of(a).mask in fam:
            mask |= bit[(k, h)]
    t = TransferSystem(lat, mask)
    cap = max(by_arity)
    for n, fam in by_arity.items():
        for gr in graph_subgroups(g, n):
            stabs = orbits(gr.gset())
            if any(lat.index_of[(lat.index[o.stabilizer.mask], lat.index[gr.domain.mask])] > cap
                   for o in stabs):
                continue
            expected = is_admissible_gset(t, gr.gset())
            if expected != (gr.mask in fam):
                raise InconsistentFamilyError(
                    f"arity {n} graph over {gr.domain} disagrees with its orbits")
    return t


def all_gsets(h: Subgroup, n: int) -> list[GSet]:
    """Every action of ``h`` on ``range(n)``, one per homomorphism into the symmetric group."""
    return [gset_from_homomorphism(phi) for phi in enumerate_homomorphisms(h, make_symmetric(n).whole())]
