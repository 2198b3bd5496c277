"""Pullback-closed transfer systems over a finite family of groups.

A family system assigns a transfer system to every member and is closed under
preimages along every homomorphism from a subgroup of one member to a
subgroup of another.  ``r_g`` and ``u_g`` form the adjoint pair between a
single group's transfer systems and family systems.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, NamedTuple, Sequence

from .groups import (FiniteGroup, Homomorphism, Subgroup, _bits, enumerate_homomorphisms,
                     preimage_subgroup, standalone_copies, subgroup_lattice)
from .hom_closed import enumerate_hom_closed
from .transfer import TransferSystem, _tables, validate


class FamilyError(ValueError):
    pass


class EmbeddingError(FamilyError):
    """A family member does not embed into the chosen big member."""


class GroupFamily:
    def __init__(self, members: Sequence[FiniteGroup]):
        names = [g.name for g in members]
        if len(set(names)) != len(names):
            raise FamilyError(f"family members must have distinct names: {names}")
        self.members = tuple(members)
        self._by_name = {g.name: g for g in members}
        self.hom_cache: dict[tuple[Subgroup, Subgroup], list[Homomorphism]] = {}
        self._implications: dict[tuple[FiniteGroup, FiniteGroup], list[int]] = {}

    def __repr__(self):
        return f"GroupFamily({[g.name for g in self.members]})"

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.members]

    def member(self, g: FiniteGroup | str) -> FiniteGroup:
        name = g if isinstance(g, str) else g.name
        try:
            found = self._by_name[name]
        except KeyError:
            raise FamilyError(f"{name} is not a member of the family") from None
        if not isinstance(g, str) and found != g:
            raise FamilyError(f"{name} names a different group in this family")
        return found

    def homs(self, l: Subgroup, h: Subgroup) -> list[Homomorphism]:
        key = (l, h)
        if key not in self.hom_cache:
            self.hom_cache[key] = enumerate_homomorphisms(l, h)
        return self.hom_cache[key]

    def implications(self, src: FiniteGroup, dst: FiniteGroup) -> list[int]:
        """For each strict pair (K, H) of ``dst``, the mask of pairs (θ⁻¹(K), L)
        of ``src`` over every L <= src and θ: L -> H."""
        key = (src, dst)
        if key not in self._implications:
            sl, dl = subgroup_lattice(src), subgroup_lattice(dst)
            bit = _tables(sl).bit
            out = [0] * len(dl.pairs)
            for h_i, h in enumerate(dl.subgroups):
                for l_i, l in enumerate(sl.subgroups):
                    for theta in self.homs(l, h):
                        for k_i in _bits(dl.below[h_i]):
                            if k_i == h_i:
                                continue
                            j = sl.index[preimage_subgroup(theta, dl.subgroups[k_i]).mask]
                            if j != l_i:
                                out[dl.pair_index[(k_i, h_i)]] |= bit[(j, l_i)]
            self._implications[key] = out
        return self._implications[key]


def family_of_subgroups(g: FiniteGroup) -> GroupFamily:
    """``g`` together with a standalone copy of each proper subgroup."""
    return GroupFamily([g, *standalone_copies(g)])


class FamilyTransferSystem:
    def __init__(self, family: GroupFamily, per_member: dict[str, TransferSystem]):
        if set(per_member) != set(family.names):
            raise FamilyError("need exactly one transfer system per family member")
        for name, t in per_member.items():
            if t.lattice.parent != family.member(name):
                raise FamilyError(f"system for {name} lives on {t.lattice.parent.name}")
        self.family = family
        self.per_member = {name: per_member[name] for name in family.names}

    def __getitem__(self, name: str) -> TransferSystem:
        return self.per_member[name]

    def __eq__(self, other):
        if not isinstance(other, FamilyTransferSystem):
            return NotImplemented
        return self.family is other.family and self.per_member == other.per_member

    def __hash__(self):
        return hash(tuple(t.mask for t in self.per_member.values()))

    def __repr__(self):
        inner = ", ".join(f"{n}: {t.edges}" for n, t in self.per_member.items())
        return f"FamilyTransferSystem({{{inner}}})"

    def __le__(self, other: FamilyTransferSystem) -> bool:
        return all(t.mask & ~other.per_member[n].mask == 0 for n, t in self.per_member.items())

    @classmethod
    def uniform(cls, family: GroupFamily, complete: bool) -> FamilyTransferSystem:
        make = TransferSystem.complete if complete else TransferSystem.empty
        return cls(family, {g.name: make(subgroup_lattice(g)) for g in family})

    def meet(self, other: FamilyTransferSystem) -> FamilyTransferSystem:
        return FamilyTransferSystem(self.family, {
            n: TransferSystem(t.lattice, t.mask & other.per_member[n].mask)
            for n, t in self.per_member.items()})


class FamilyWitness(NamedTuple):
    source: str
    target: str
    k: int
    h: int
    theta: Homomorphism | None
    preimage: int | None
    l: int | None
    axiom: str | None = None


class FamilyCheck(NamedTuple):
    ok: bool
    witness: FamilyWitness | None = None

    def __bool__(self):
        return self.ok


def _pullback_witness(family: GroupFamily, src: FiniteGroup, dst: FiniteGroup,
                      t_src: TransferSystem, k: int, h: int) -> FamilyWitness:
    sl, dl = subgroup_lattice(src), subgroup_lattice(dst)
    for l_i, l in enumerate(sl.subgroups):
        for theta in family.homs(l, dl.subgroups[h]):
            j = sl.index[preimage_subgroup(theta, dl.subgroups[k]).mask]
            if not t_src.le(j, l_i):
                return FamilyWitness(src.name, dst.name, k, h, theta, j, l_i)
    raise AssertionError("implication table and witness search disagree")


def validate_family(s: FamilyTransferSystem) -> FamilyCheck:
    fam = s.family
    for g in fam:
        v = validate(s[g.name])
        if not v:
            return FamilyCheck(False, FamilyWitness(g.name, g.name, -1, -1, None, None, None, v.axiom))
    for src in fam:
        t_src = s[src.name]
        for dst in fam:
            imp = fam.implications(src, dst)
            t_dst = s[dst.name]
            for i in _bits(t_dst.mask):
                if imp[i] & ~t_src.mask:
                    k, h = t_dst.lattice.pairs[i]
                    return FamilyCheck(False, _pullback_witness(fam, src, dst, t_src, k, h))
    return FamilyCheck(True)


def u_g(s: FamilyTransferSystem, g: FiniteGroup | str) -> TransferSystem:
    """Underlying transfer system of ``s`` on the member ``g``."""
    return s[s.family.member(g).name]


def r_g(t: TransferSystem, family: GroupFamily) -> FamilyTransferSystem:
    """Largest family system whose restriction to ``t``'s group lies in ``t``.

    ``K < H <= M`` is admissible iff θ⁻¹(K) <=_t L for every L <= G and θ: L -> H.
    """
    g = family.member(t.lattice.parent)
    out = {}
    for m in family:
        imp = family.implications(g, m)
        mask = 0
        for i, need in enumerate(imp):
            if need & ~t.mask == 0:
                mask |= 1 << i
        out[m.name] = TransferSystem(subgroup_lattice(m), mask)
    return FamilyTransferSystem(family, out)


def check_adjunction(t: TransferSystem, s: FamilyTransferSystem) -> bool:
    """``u_g(s) ⊆ t`` iff ``s ⊆ r_g(t)``; False means a bug."""
    under = u_g(s, t.lattice.parent)
    left = under.mask & ~t.mask == 0
    right = s <= r_g(t, s.family)
    return left == right


def embeds(small: FiniteGroup, big: FiniteGroup) -> Homomorphism | None:
    """An injective homomorphism ``small -> big``, if one exists."""
    if big.order % small.order:
        return None
    for theta in enumerate_homomorphisms(small.whole(), big.whole()):
        if theta.is_injective:
            return theta
    return None


def reconstruct(s: FamilyTransferSystem, big: FiniteGroup | str | Iterable) -> FamilyTransferSystem:
    """``r_g(u_g(s, big))``, intersected over several big members when a list is given."""
    fam = s.family
    bigs = [big] if isinstance(big, (str, FiniteGroup)) else list(big)
    if not bigs:
        raise FamilyError("need at least one big member")
    bigs = [fam.member(b) for b in bigs]
    for m in fam:
        if all(embeds(m, b) is None for b in bigs):
            raise EmbeddingError(f"{m.name} does not embed into {', '.join(b.name for b in bigs)}")
    result = None
    for b in bigs:
        r = r_g(u_g(s, b), fam)
        result = r if result is None else result.meet(r)
    return result


def enumerate_family_systems(family: GroupFamily) -> list[FamilyTransferSystem]:
    """Every valid family system.

    Restricting a valid family system to one member gives a hom-closed system,
    so candidates are drawn from the product of the members' hom-closed posets.
    """
    options = [enumerate_hom_closed(subgroup_lattice(g)).systems for g in family]
    out = []
    for combo in itertools.product(*options):
        s = FamilyTransferSystem(family, {g.name: t for g, t in zip(family, combo)})
        if validate_family(s):
            out.append(s)
    return out


def induced_collisions(family: GroupFamily) -> list[tuple[tuple[str, tuple], tuple[str, tuple]]]:
    """Pairs of hom-closed systems on different members with equal ``r_g`` images."""
    seen: dict[tuple, tuple[str, tuple]] = {}
    out = []
    for g in family:
        for t in enumerate_hom_closed(subgroup_lattice(g)).systems:
            key = tuple(x.mask for x in r_g(t, family).per_member.values())
            tag = (g.name, tuple(t.edges))
            if key in seen:
                out.append((seen[key], tag))
            else:
                seen[key] = tag
    return out


@functools.lru_cache(maxsize=None)
def subgroup_family(g: FiniteGroup) -> GroupFamily:
    return family_of_subgroups(g)
