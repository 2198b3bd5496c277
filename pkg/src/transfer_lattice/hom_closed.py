"""Transfer systems closed under pullback along arbitrary homomorphisms."""

from __future__ import annotations

import functools
from typing import NamedTuple

from .groups import Homomorphism, SubgroupLattice, _bits, enumerate_homomorphisms, preimage_subgroup
from .transfer import (TransferPoset, TransferSystem, _tables, enumerate_transfer_systems, join,
                       make_poset)


class HomWitness(NamedTuple):
    theta: Homomorphism
    k: int
    h: int
    preimage: int
    l: int


class HomCheck(NamedTuple):
    ok: bool
    witness: HomWitness | None = None

    def __bool__(self):
        return self.ok


class _Pullbacks:
    """For each strict pair (K, H), the pairs (θ⁻¹(K), L) over all θ: L -> H."""

    def __init__(self, lat: SubgroupLattice, sources: tuple[int, ...], targets: tuple[int, ...]):
        self.lat = lat
        subs = lat.subgroups
        bit = _tables(lat).bit
        self.homs: dict[tuple[int, int], list[Homomorphism]] = {}
        implied = [0] * len(lat.pairs)
        for h in targets:
            for l in sources:
                homs = enumerate_homomorphisms(subs[l], subs[h])
                self.homs[(l, h)] = homs
                for theta in homs:
                    for k in _bits(lat.below[h]):
                        if k == h:
                            continue
                        j = lat.index[preimage_subgroup(theta, subs[k]).mask]
                        if j != l:
                            implied[lat.pair_index[(k, h)]] |= bit[(j, l)]
        self.implied = implied
        self.targets = targets

    def witness(self, t: TransferSystem) -> HomWitness | None:
        lat, subs = self.lat, self.lat.subgroups
        for (l, h), homs in self.homs.items():
            for k in _bits(lat.below[h]):
                if k == h or not t.le(k, h):
                    continue
                for theta in homs:
                    j = lat.index[preimage_subgroup(theta, subs[k]).mask]
                    if not t.le(j, l):
                        return HomWitness(theta, k, h, j, l)
        return None


@functools.lru_cache(maxsize=None)
def _pullbacks(lat: SubgroupLattice, exhaustive: bool) -> _Pullbacks:
    everything = tuple(range(len(lat.subgroups)))
    if exhaustive:
        return _Pullbacks(lat, everything, everything)
    reps = lat.class_representatives()
    return _Pullbacks(lat, reps, reps)


def is_hom_closed(t: TransferSystem, *, exhaustive: bool = False) -> HomCheck:
    """Whether ``K <=_t H`` implies ``θ⁻¹(K) <=_t L`` for every θ: L -> H.

    ``t`` must already be a transfer system.  Conjugation closure lets the
    check run over conjugacy-class representatives for L and H only;
    ``exhaustive=True`` quantifies over every pair of subgroups instead.
    """
    pb = _pullbacks(t.lattice, exhaustive)
    mask = t.mask
    for i in _bits(mask):
        if pb.implied[i] & ~mask:
            return HomCheck(False, pb.witness(t))
    return HomCheck(True)


def hom_closure(t: TransferSystem) -> TransferSystem:
    """Least hom-closed transfer system containing ``t``."""
    tb = _tables(t.lattice)
    pb = _pullbacks(t.lattice, False)
    mask = tb.close(t.mask)
    while True:
        grown = mask
        for i in _bits(mask):
            grown |= pb.implied[i]
        grown = tb.close(grown)
        if grown == mask:
            return TransferSystem(t.lattice, mask)
        mask = grown


def enumerate_hom_closed(lattice: SubgroupLattice, full: TransferPoset | None = None) -> TransferPoset:
    """The subposet of hom-closed systems with its own cover relation."""
    if full is None:
        full = enumerate_transfer_systems(lattice)
    return make_poset(lattice, (t.mask for t in full.systems if is_hom_closed(t)))


def join_report(sub: TransferPoset, full: TransferPoset) -> dict:
    """Whether joins of hom-closed systems, computed in the full poset, stay hom-closed."""
    escapes = []
    for i, a in enumerate(sub.systems):
        for b in sub.systems[i + 1:]:
            j = join(a, b)
            if j not in sub:
                escapes.append((a.edges, b.edges, j.edges))
    return {"group": full.lattice.parent.name, "pairs_checked": len(sub) * (len(sub) - 1) // 2,
            "sublattice": not escapes, "escapes": escapes}
