"""Transfer systems on a subgroup lattice: axioms, closure, lattice operations
and enumeration of the full poset.

A transfer system is stored as a bitmask over ``lattice.pairs``, the canonical
list of strict inclusions ``(k, h)``.  Reflexive pairs are implicit.
"""

from __future__ import annotations

import functools
import logging
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .groups import SubgroupLattice, _bits

log = logging.getLogger(__name__)

EXHAUSTIVE_PAIR_LIMIT = 24
DEFAULT_NODE_BUDGET = 200_000

AXIOMS = ("refinement", "transitivity", "restriction", "conjugation")


class LatticeMismatchError(ValueError):
    """Two transfer systems live on different subgroup lattices."""


class EnumerationBudgetError(RuntimeError):
    """Closure-BFS enumeration produced more systems than the node budget."""


@dataclass(frozen=True, eq=False)
class TransferSystem:
    lattice: SubgroupLattice
    mask: int

    def __eq__(self, other):
        if not isinstance(other, TransferSystem):
            return NotImplemented
        return self.mask == other.mask and self.lattice.parent == other.lattice.parent

    def __hash__(self):
        return hash((self.lattice.parent, self.mask))

    def __repr__(self):
        return f"TransferSystem({self.lattice.parent.name}, {self.edges})"

    @classmethod
    def empty(cls, lattice: SubgroupLattice) -> TransferSystem:
        return cls(lattice, 0)

    @classmethod
    def complete(cls, lattice: SubgroupLattice) -> TransferSystem:
        return cls(lattice, (1 << len(lattice.pairs)) - 1)

    @classmethod
    def from_edges(cls, lattice: SubgroupLattice, edges: Iterable[tuple[int, int]]) -> TransferSystem:
        return cls(lattice, _edges_to_mask(lattice, edges))

    @property
    def edges(self) -> list[tuple[int, int]]:
        pairs = self.lattice.pairs
        return [pairs[i] for i in _bits(self.mask)]

    def __len__(self):
        return bin(self.mask).count("1")

    def le(self, k: int, h: int) -> bool:
        """``k <=_T h``, reflexive pairs included."""
        if k == h:
            return True
        i = self.lattice.pair_index.get((k, h))
        return i is not None and bool(self.mask >> i & 1)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return self.le(*pair)


def _edges_to_mask(lattice: SubgroupLattice, edges: Iterable[tuple[int, int]]) -> int:
    mask = 0
    for k, h in edges:
        if k == h:
            continue
        try:
            mask |= 1 << lattice.pair_index[(k, h)]
        except KeyError:
            raise ValueError(f"({k}, {h}) is not a strict inclusion of subgroups") from None
    return mask


class _Tables:
    """Per-lattice precomputation shared by closure, validation and enumeration."""

    def __init__(self, lat: SubgroupLattice):
        self.lat = lat
        n = len(lat.subgroups)
        self.n = n
        self.npairs = len(lat.pairs)
        self.bit = {p: 1 << i for i, p in enumerate(lat.pairs)}
        # one-edge consequences: restriction to every L <= h, and conjugation
        direct: list[int] = []
        for k, h in lat.pairs:
            m = 0
            for l in _bits(lat.below[h]):
                j = lat.meet_index(l, k)
                if j != l:
                    m |= self.bit[(j, l)]
            for perm in lat.conjugation_actions:
                m |= self.bit[(perm[k], perm[h])]
            direct.append(m)
        self.direct = direct
        single = []
        for i in range(self.npairs):
            m, frontier = 1 << i, 1 << i
            while frontier:
                new = 0
                for j in _bits(frontier):
                    new |= direct[j]
                frontier = new & ~m
                m |= new
            single.append(m)
        self.single = single

    def to_adjacency(self, mask: int) -> list[int]:
        adj = [0] * self.n
        pairs = self.lat.pairs
        for i in _bits(mask):
            k, h = pairs[i]
            adj[k] |= 1 << h
        return adj

    def from_adjacency(self, adj: list[int]) -> int:
        mask = 0
        for k, row in enumerate(adj):
            for h in _bits(row):
                mask |= self.bit[(k, h)]
        return mask

    def transitive(self, mask: int) -> int:
        adj = self.to_adjacency(mask)
        for mid in range(self.n):
            bit = 1 << mid
            row = adj[mid]
            if not row:
                continue
            for a in range(self.n):
                if adj[a] & bit:
                    adj[a] |= row
        return self.from_adjacency(adj)

    def close(self, mask: int) -> int:
        while True:
            grown = mask
            for i in _bits(mask):
                grown |= self.single[i]
            grown = self.transitive(grown)
            if grown == mask:
                return mask
            mask = grown

    @functools.cached_property
    def clauses(self) -> list[tuple[int, int]]:
        """Horn clauses ``(premise mask, conclusion mask)`` spelling out the axioms."""
        out: set[tuple[int, int]] = set()
        pairs = self.lat.pairs
        for i, (a, b) in enumerate(pairs):
            for j, (b2, c) in enumerate(pairs):
                if b2 == b:
                    out.add(((1 << i) | (1 << j), self.bit[(a, c)]))
            for concl in _bits(self.direct[i]):
                if concl != i:
                    out.add((1 << i, 1 << concl))
        return sorted(out)


@functools.lru_cache(maxsize=None)
def _tables(lat: SubgroupLattice) -> _Tables:
    return _Tables(lat)


class Validation(NamedTuple):
    ok: bool
    axiom: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def violations(t: TransferSystem) -> Iterable[tuple[str, tuple]]:
    """Every axiom violation of ``t``, in the order of ``AXIOMS``."""
    lat = t.lattice
    npairs = len(lat.pairs)
    if t.mask >> npairs:
        for i in _bits(t.mask >> npairs):
            yield "refinement", ("bit", npairs + i)
    edges = t.edges
    heads: dict[int, list[int]] = {}
    for k, h in edges:
        heads.setdefault(k, []).append(h)
    for a, b in edges:
        for c in heads.get(b, ()):
            if not t.le(a, c):
                yield "transitivity", ((a, b), (b, c))
    for k, h in edges:
        for l in _bits(lat.below[h]):
            j = lat.meet_index(l, k)
            if not t.le(j, l):
                yield "restriction", ((k, h), l)
    for k, h in edges:
        for perm in lat.conjugation_actions:
            if not t.le(perm[k], perm[h]):
                yield "conjugation", ((k, h), (perm[k], perm[h]))


def validate(t: TransferSystem, lattice: SubgroupLattice | None = None) -> Validation:
    """Check the transfer-system axioms; report the first one violated with a witness."""
    if lattice is not None and lattice.parent != t.lattice.parent:
        raise LatticeMismatchError("transfer system belongs to a different lattice")
    for axiom, witness in violations(t):
        return Validation(False, axiom, witness)
    return Validation(True)


def close(lattice: SubgroupLattice, seed: Iterable[tuple[int, int]] | int = ()) -> TransferSystem:
    """Least transfer system containing the seed pairs."""
    mask = seed if isinstance(seed, int) else _edges_to_mask(lattice, seed)
    return TransferSystem(lattice, _tables(lattice).close(mask))


def transitive_closure(t: TransferSystem) -> TransferSystem:
    """Transitive closure only, without restriction or conjugation."""
    return TransferSystem(t.lattice, _tables(t.lattice).transitive(t.mask))


def _same_lattice(a: TransferSystem, b: TransferSystem) -> None:
    if a.lattice.parent != b.lattice.parent:
        raise LatticeMismatchError(
            f"{a.lattice.parent.name} and {b.lattice.parent.name} transfer systems do not mix")


def meet(a: TransferSystem, b: TransferSystem) -> TransferSystem:
    _same_lattice(a, b)
    return TransferSystem(a.lattice, a.mask & b.mask)


def join(a: TransferSystem, b: TransferSystem) -> TransferSystem:
    _same_lattice(a, b)
    return close(a.lattice, a.mask | b.mask)


def is_subsystem(a: TransferSystem, b: TransferSystem) -> bool:
    _same_lattice(a, b)
    return a.mask & ~b.mask == 0


@dataclass(frozen=True, eq=False)
class TransferPoset:
    lattice: SubgroupLattice
    systems: tuple[TransferSystem, ...]
    covers: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.systems)

    def index(self, t: TransferSystem) -> int:
        return self._positions[t.mask]

    @functools.cached_property
    def _positions(self) -> dict[int, int]:
        return {t.mask: i for i, t in enumerate(self.systems)}

    def __contains__(self, t: TransferSystem) -> bool:
        return t.mask in self._positions

    def leq(self, i: int, j: int) -> bool:
        return self.systems[i].mask & ~self.systems[j].mask == 0


def canonical_key(mask: int) -> tuple[int, int]:
    return bin(mask).count("1"), mask


def hasse_covers(masks: list[int]) -> list[tuple[int, int]]:
    """Cover pairs of a family of bitmasks ordered by containment.

    ``masks`` must be sorted by popcount, so containment only runs forwards.
    """
    n = len(masks)
    up = [0] * n
    for i in range(n):
        mi = masks[i]
        row = 0
        for j in range(i + 1, n):
            if mi & ~masks[j] == 0 and mi != masks[j]:
                row |= 1 << j
        up[i] = row
    covers = []
    for i in range(n):
        redundant = 0
        for j in _bits(up[i]):
            redundant |= up[j]
        covers.extend((i, j) for j in _bits(up[i] & ~redundant))
    return covers


def make_poset(lattice: SubgroupLattice, masks: Iterable[int]) -> TransferPoset:
    ordered = sorted(set(masks), key=canonical_key)
    systems = tuple(TransferSystem(lattice, m) for m in ordered)
    return TransferPoset(lattice, systems, tuple(hasse_covers(ordered)))


def _exhaustive_masks(lattice: SubgroupLattice) -> list[int]:
    tb = _tables(lattice)
    total = 1 << tb.npairs
    dtype = np.uint32 if tb.npairs <= 32 else np.uint64
    chunk = min(total, 1 << 20)
    clauses = [(dtype(p), dtype(c)) for p, c in tb.clauses]
    found: list[int] = []
    for start in range(0, total, chunk):
        m = np.arange(start, start + chunk, dtype=dtype)
        ok = np.ones(chunk, dtype=bool)
        for prem, concl in clauses:
            ok &= ((m & prem) != prem) | ((m & concl) != 0)
        found.extend(int(x) for x in m[ok])
    return found


def _bfs_masks(lattice: SubgroupLattice, budget: int) -> list[int]:
    tb = _tables(lattice)
    start = tb.close(0)
    seen = {start}
    queue = deque([start])
    full = (1 << tb.npairs) - 1
    while queue:
        m = queue.popleft()
        for i in _bits(full & ~m):
            c = tb.close(m | 1 << i)
            if c not in seen:
                seen.add(c)
                if len(seen) > budget:
                    raise EnumerationBudgetError(
                        f"more than {budget} transfer systems on {lattice.parent.name}")
                queue.append(c)
    return list(seen)


def enumerate_transfer_systems(lattice: SubgroupLattice, mode: str = "auto", *,
                               pair_limit: int = EXHAUSTIVE_PAIR_LIMIT,
                               budget: int = DEFAULT_NODE_BUDGET) -> TransferPoset:
    """The poset of all transfer systems on ``lattice``.

    ``exhaustive`` tests every subset of strict pairs against the axioms;
    ``bfs`` grows closed systems one edge at a time from the empty one.
    ``auto`` picks exhaustive up to ``pair_limit`` pairs.
    """
    npairs = len(lattice.pairs)
    if mode not in ("auto", "exhaustive", "bfs"):
        raise ValueError(f"unknown enumeration mode {mode!r}")
    if mode == "auto":
        mode = "exhaustive" if npairs <= pair_limit else "bfs"
    elif mode == "exhaustive" and npairs > pair_limit:
        warnings.warn(f"{npairs} pairs exceed the exhaustive limit {pair_limit}; using closure-BFS",
                      RuntimeWarning, stacklevel=2)
        mode = "bfs"
    log.debug("enumerating %s (%d pairs) in %s mode", lattice.parent.name, npairs, mode)
    masks = _exhaustive_masks(lattice) if mode == "exhaustive" else _bfs_masks(lattice, budget)
    return make_poset(lattice, masks)
