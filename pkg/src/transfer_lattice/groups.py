"""Finite groups as Cayley tables, their subgroup lattices and homomorphisms.

Elements of a group are the integers ``0..order-1``; ``table[a][b]`` is the
index of the product ``a*b``.  Subgroups are bitmasks over those indices.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

MAX_ORDER = 64
MAX_HOM_SOURCE = 48
_GENERATOR_SEARCH_BUDGET = 20_000


class GroupError(ValueError):
    """Raised for malformed group data."""


class GroupOrderError(GroupError):
    """Raised when a construction would exceed the order cap."""


def _check_order(n: int) -> None:
    if n > MAX_ORDER:
        raise GroupOrderError(f"group order {n} exceeds cap {MAX_ORDER}")


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _generate(table: Sequence[Sequence[int]], identity: int, gens: Iterable[int]) -> int:
    """Bitmask of the subgroup generated by ``gens``."""
    gens = list(gens)
    mask = 1 << identity
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            row = table[x]
            for g in gens:
                y = row[g]
                if not mask >> y & 1:
                    mask |= 1 << y
                    nxt.append(y)
        frontier = nxt
    return mask


def _minimal_generators(table, identity: int, members: Sequence[int]) -> tuple[int, ...]:
    target = 0
    for x in members:
        target |= 1 << x
    if target == 1 << identity:
        return ()
    reps: list[int] = []
    cyclic: dict[int, int] = {}
    for x in sorted(members):
        m = _generate(table, identity, (x,))
        if m == target:
            return (x,)
        if m not in cyclic:
            cyclic[m] = x
            reps.append(x)
    k = 2
    while math.comb(len(reps), k) <= _GENERATOR_SEARCH_BUDGET:
        for combo in itertools.combinations(reps, k):
            if _generate(table, identity, combo) == target:
                return combo
        k += 1
    # greedy fallback: may not be minimal, but always generates
    gens: list[int] = []
    cur = 1 << identity
    for x in sorted(reps, key=lambda r: -bin(_generate(table, identity, (r,))).count("1")):
        if not cur >> x & 1:
            gens.append(x)
            cur = _generate(table, identity, gens)
            if cur == target:
                break
    return tuple(sorted(gens))


class FiniteGroup:
    """A finite group given by its multiplication table.

    Instances are immutable.  Equality compares the name and the table, so two
    isomorphic copies with different names are distinct family members.
    """

    def __init__(self, name: str, elements: Sequence[str], table: Sequence[Sequence[int]],
                 *, generators: Sequence[int] | None = None, factors: tuple | None = None,
                 check: bool = True):
        n = len(elements)
        if n == 0:
            raise GroupError("a group needs at least one element")
        _check_order(n)
        self.name = name
        self.elements = tuple(str(e) for e in elements)
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.factors = factors
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise GroupError("table must be order x order")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise GroupError("table entries must be element indices")
        identity = None
        for e in range(n):
            if self.table[e] == tuple(range(n)) and all(self.table[x][e] == x for x in range(n)):
                identity = e
                break
        if identity is None:
            raise GroupError("table has no two-sided identity")
        self.identity = identity
        if check:
            self._check_axioms()
        if generators is None:
            generators = _minimal_generators(self.table, identity, range(n))
        self.generators = tuple(generators)
        if _generate(self.table, identity, self.generators) != (1 << n) - 1:
            raise GroupError("generators do not generate the group")
        self._hash = hash((self.name, self.table))

    def _check_axioms(self) -> None:
        t, n, e = self.table, self.order, self.identity
        for a in range(n):
            if e not in t[a]:
                raise GroupError(f"element {self.elements[a]} has no inverse")
        for a in range(n):
            ta = t[a]
            for b in range(n):
                ab = ta[b]
                tab, tb = t[ab], t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise GroupError("table is not associative")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self._hash == other._hash and self.name == other.name and self.table == other.table

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(row.index(e) for row in self.table)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != self.identity:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    def conjugate(self, g: int, x: int) -> int:
        """``g x g^-1``"""
        return self.table[self.table[g][x]][self.inverses[g]]

    @cached_property
    def index_of_label(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.elements)}

    def generate(self, gens: Iterable[int]) -> int:
        return _generate(self.table, self.identity, gens)

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def whole(self) -> Subgroup:
        return Subgroup(self, self.full_mask)

    def trivial(self) -> Subgroup:
        return Subgroup(self, 1 << self.identity)

    def center(self) -> Subgroup:
        t = self.table
        mask = 0
        for z in range(self.order):
            if all(t[z][x] == t[x][z] for x in range(self.order)):
                mask |= 1 << z
        return Subgroup(self, mask)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "elements": list(self.elements),
            "table": [list(row) for row in self.table],
        }

    @classmethod
    def from_json(cls, data: dict) -> FiniteGroup:
        try:
            name, order = data["name"], int(data["order"])
            elements, table = data["elements"], data["table"]
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupError(f"malformed group JSON: {exc}") from exc
        _check_order(order)
        if order != len(elements):
            raise GroupError("order does not match the element list")
        return cls(name, elements, table)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` stored as a bitmask of element indices."""

    parent: FiniteGroup
    mask: int

    def __repr__(self):
        labels = ",".join(self.parent.elements[i] for i in self.elements)
        return f"Subgroup({self.parent.name}: {{{labels}}})"

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    @cached_property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __le__(self, other: Subgroup) -> bool:
        return self.parent == other.parent and self.mask & ~other.mask == 0

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.mask != other.mask

    def is_subgroup(self) -> bool:
        g = self.parent
        if not self.mask >> g.identity & 1:
            return False
        for a in self.elements:
            if g.inverses[a] not in self:
                return False
            row = g.table[a]
            if any(not self.mask >> row[b] & 1 for b in self.elements):
                return False
        return True

    @cached_property
    def generators(self) -> tuple[int, ...]:
        g = self.parent
        if self.mask == g.full_mask:
            return g.generators
        return _minimal_generators(g.table, g.identity, self.elements)

    @cached_property
    def words(self) -> dict[int, tuple[int, int]]:
        """For each non-identity member x, a pair (y, s) with x = y*s, s a generator.

        Built breadth first, so following the pairs reaches the identity.
        """
        g = self.parent
        out: dict[int, tuple[int, int]] = {}
        seen = {g.identity}
        queue = deque([g.identity])
        while queue:
            y = queue.popleft()
            for s in self.generators:
                x = g.table[y][s]
                if x not in seen:
                    seen.add(x)
                    out[x] = (y, s)
                    queue.append(x)
        return out

    @cached_property
    def bfs_order(self) -> tuple[int, ...]:
        return tuple(self.words)

    def as_group(self, name: str | None = None) -> tuple[FiniteGroup, tuple[int, ...]]:
        """Re-index the members as a standalone group.

        Returns the group and the embedding (new index -> parent index).
        """
        pos = self.position
        g = self.parent
        table = [[pos[g.table[a][b]] for b in self.elements] for a in self.elements]
        labels = [g.elements[a] for a in self.elements]
        group = FiniteGroup(name or f"{g.name}<{','.join(map(str, self.elements))}>",
                            labels, table, check=False)
        return group, self.elements

    def to_json(self) -> list[int]:
        return list(self.elements)


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    _check_order(n)
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return _cached(FiniteGroup(f"C{n}", [str(k) for k in range(n)], table,
                               generators=(1,) if n > 1 else (), check=False))


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p∘q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def make_symmetric(n: int) -> FiniteGroup:
    """Symmetric group on ``0..n-1``; elements in lexicographic one-line order.

    ``n == 0`` gives the trivial group on the empty set.
    """
    if n < 0:
        raise GroupError("symmetric group degree must be non-negative")
    _check_order(math.factorial(n))
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[compose_perms(p, q)] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) or "()" for p in perms]
    gens: tuple[int, ...] = ()
    if n == 2:
        gens = (1,)
    elif n > 2:
        swap = (1, 0) + tuple(range(2, n))
        cycle = tuple(range(1, n)) + (0,)
        gens = (index[swap], index[cycle])
    return _cached(FiniteGroup(f"S{n}", labels, table, generators=gens, check=False))


def make_quaternion() -> FiniteGroup:
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    # unit quaternions as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    basis = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    unit = {  # axis products: (axis_a, axis_b) -> (sign, axis)
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }

    def mul(a, b):
        (sa, xa), (sb, xb) = a, b
        if xa == 0:
            return sa * sb, xb
        if xb == 0:
            return sa * sb, xa
        s, x = unit[(xa, xb)]
        return sa * sb * s, x

    index = {q: i for i, q in enumerate(basis)}
    table = [[index[mul(a, b)] for b in basis] for a in basis]
    return _cached(FiniteGroup("Q8", labels, table, generators=(2, 4), check=False))


def make_direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """``g × h`` with element ``(a, b)`` at index ``a*|h| + b``."""
    _check_order(g.order * h.order)
    m = h.order
    labels = [f"({a},{b})" for a in g.elements for b in h.elements]
    table = [[g.table[a // m][b // m] * m + h.table[a % m][b % m]
              for b in range(g.order * m)] for a in range(g.order * m)]
    return _cached(FiniteGroup(f"{g.name}x{h.name}", labels, table,
                               factors=(g, h), check=False))


_GROUPS: dict[FiniteGroup, FiniteGroup] = {}


def _cached(group: FiniteGroup) -> FiniteGroup:
    # one canonical instance per (name, table), so lattice caches are shared
    return _GROUPS.setdefault(group, group)


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """All subgroups of a group in canonical order with inclusion and conjugacy data."""

    parent: FiniteGroup
    subgroups: tuple[Subgroup, ...]
    index: dict[int, int] = field(repr=False)

    @cached_property
    def inclusion(self) -> tuple[tuple[bool, ...], ...]:
        subs = self.subgroups
        return tuple(tuple(a <= b for b in subs) for a in subs)

    @cached_property
    def below(self) -> tuple[int, ...]:
        """``below[h]``: bitmask over subgroup indices of the subgroups of ``h``."""
        return tuple(sum(1 << i for i, a in enumerate(self.subgroups) if a <= b)
                     for b in self.subgroups)

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Canonical list of strict comparable pairs ``(k, h)``, lexicographic."""
        n = len(self.subgroups)
        return tuple((k, h) for k in range(n) for h in range(n)
                     if k != h and self.below[h] >> k & 1)

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        return {p: i for i, p in enumerate(self.pairs)}

    @cached_property
    def index_of(self) -> dict[tuple[int, int], int]:
        """``[H:K]`` for every comparable pair, reflexive ones included."""
        subs = self.subgroups
        return {(k, h): subs[h].order // subs[k].order
                for h in range(len(subs)) for k in _bits(self.below[h])}

    @cached_property
    def conjugation_actions(self) -> tuple[tuple[int, ...], ...]:
        """Distinct permutations of subgroup indices induced by conjugation."""
        g = self.parent
        seen: dict[tuple[int, ...], None] = {}
        for x in range(g.order):
            perm = tuple(self.index[conjugate_subgroup(s, x).mask] for s in self.subgroups)
            seen.setdefault(perm, None)
        return tuple(seen)

    @cached_property
    def conjugacy_class(self) -> tuple[int, ...]:
        cls = [-1] * len(self.subgroups)
        nxt = 0
        for i in range(len(self.subgroups)):
            if cls[i] < 0:
                for perm in self.conjugation_actions:
                    cls[perm[i]] = nxt
                nxt += 1
        return tuple(cls)

    def class_representatives(self) -> tuple[int, ...]:
        seen: set[int] = set()
        out = []
        for i, c in enumerate(self.conjugacy_class):
            if c not in seen:
                seen.add(c)
                out.append(i)
        return tuple(out)

    def meet_index(self, a: int, b: int) -> int:
        return self.index[self.subgroups[a].mask & self.subgroups[b].mask]

    def index_of_subgroup(self, s: Subgroup) -> int:
        if s.parent != self.parent:
            raise GroupError("subgroup belongs to a different group")
        return self.index[s.mask]

    @property
    def whole(self) -> int:
        return len(self.subgroups) - 1

    @property
    def bottom(self) -> int:
        return 0

    def __len__(self):
        return len(self.subgroups)


@functools.lru_cache(maxsize=None)
def subgroup_lattice(g: FiniteGroup) -> SubgroupLattice:
    """Every subgroup of ``g``, found by joining cyclic subgroups until closed."""
    cyclic: dict[int, int] = {}
    for x in range(g.order):
        cyclic.setdefault(g.generate((x,)), x)
    found = {c: (x,) for c, x in cyclic.items()}
    queue = deque(found)
    while queue:
        s = queue.popleft()
        for c, x in cyclic.items():
            if c & ~s:
                gens = found[s] + (x,)
                j = _generate(g.table, g.identity, gens)
                if j not in found:
                    found[j] = gens
                    queue.append(j)
    subs = sorted((Subgroup(g, m) for m in found), key=lambda s: (s.order, s.elements))
    return SubgroupLattice(g, tuple(subs), {s.mask: i for i, s in enumerate(subs)})


def conjugate_subgroup(h: Subgroup, g: int) -> Subgroup:
    group = h.parent
    mask = 0
    for x in h.elements:
        mask |= 1 << group.conjugate(g, x)
    return Subgroup(group, mask)


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism between subgroups (possibly of different parents).

    ``images[i]`` is the parent index of the image of ``source.elements[i]``.
    """

    source: Subgroup
    target: Subgroup
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[self.source.position[x]]

    def is_homomorphism(self) -> bool:
        """All-pairs multiplicativity check."""
        sg, tg = self.source.parent, self.target.parent
        f = dict(zip(self.source.elements, self.images))
        if any(y not in self.target for y in self.images):
            return False
        for a in self.source.elements:
            for b in self.source.elements:
                if f[sg.table[a][b]] != tg.table[f[a]][f[b]]:
                    return False
        return True

    def kernel(self) -> Subgroup:
        return preimage_subgroup(self, self.target.parent.trivial())

    def image(self) -> Subgroup:
        mask = 0
        for y in self.images:
            mask |= 1 << y
        return Subgroup(self.target.parent, mask)

    @property
    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "map": [[x, y] for x, y in zip(self.source.elements, self.images)]}


def enumerate_homomorphisms(l: Subgroup, h: Subgroup) -> list[Homomorphism]:
    """All homomorphisms ``l -> h`` in lexicographic order of their image tuples.

    Generator images are searched with order-divisibility pruning and extended
    along the breadth-first words of ``l``; a candidate is kept when it respects
    every edge of the Cayley graph, which forces multiplicativity on all pairs.
    """
    if l.order > MAX_HOM_SOURCE:
        raise GroupOrderError(f"homomorphism source order {l.order} exceeds {MAX_HOM_SOURCE}")
    sg, tg = l.parent, h.parent
    gens = l.generators
    words = l.words
    order = l.bfs_order
    candidates = [[y for y in h.elements if sg.element_orders[s] % tg.element_orders[y] == 0]
                  for s in gens]
    stab, ttab = sg.table, tg.table
    out = []
    for choice in itertools.product(*candidates):
        gimg = dict(zip(gens, choice))
        f = {sg.identity: tg.identity}
        for x in order:
            if x == sg.identity:
                continue
            y, s = words[x]
            f[x] = ttab[f[y]][gimg[s]]
        if all(f[stab[x][s]] == ttab[f[x]][gimg[s]] for x in f for s in gens):
            out.append(Homomorphism(l, h, tuple(f[x] for x in l.elements)))
    out.sort(key=lambda m: m.images)
    return out


def preimage_subgroup(f: Homomorphism, k: Subgroup) -> Subgroup:
    mask = 0
    for x, y in zip(f.source.elements, f.images):
        if k.mask >> y & 1:
            mask |= 1 << x
    return Subgroup(f.source.parent, mask)


def standalone_copies(g: FiniteGroup, include_whole: bool = False) -> list[FiniteGroup]:
    """Each subgroup of ``g`` as a group of its own, named ``<g.name>@<index>``."""
    lat = subgroup_lattice(g)
    out = []
    for i, s in enumerate(lat.subgroups):
        if i == lat.whole and not include_whole:
            continue
        out.append(_cached(s.as_group(f"{g.name}@{i}")[0]))
    return out
