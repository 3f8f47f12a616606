"""Finite groups stored as Cayley tables.

Elements are the integers ``0 .. order-1``.  Every operation downstream is
exhaustive, so the table representation keeps them exact and simple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

MAX_ORDER = 64


class NotAGroup(ValueError):
    """Raised when a table violates one of the group axioms."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...] = field(repr=False)
    identity: int
    inv: tuple[int, ...] = field(repr=False)
    name: str = ""
    labels: tuple[str, ...] | None = field(default=None, repr=False)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inverse(self, x: int) -> int:
        return self.inv[x]

    def prod(self, xs: Iterable[int]) -> int:
        out = self.identity
        t = self.table
        for x in xs:
            out = t[out][x]
        return out

    def power(self, x: int, k: int) -> int:
        out = self.identity
        for _ in range(k % self._orders[x]):
            out = self.table[out][x]
        return out

    def conj(self, h: int, g: int) -> int:
        """Left conjugation ``h g h^-1``."""
        return self.table[self.table[h][g]][self.inv[h]]

    def commutator(self, a: int, b: int) -> int:
        """``a b a^-1 b^-1``."""
        t = self.table
        return t[t[t[a][b]][self.inv[a]]][self.inv[b]]

    def commute(self, x: int, y: int) -> bool:
        return self.table[x][y] == self.table[y][x]

    @cached_property
    def _orders(self) -> tuple[int, ...]:
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != self.identity:
                y = self.table[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    def element_order(self, x: int) -> int:
        return self._orders[x]

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.commute(x, y) for x in range(self.order) for y in range(x))

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls = tuple(sorted({self.conj(h, x) for h in range(self.order)}))
            seen.update(cls)
            classes.append(cls)
        return tuple(classes)

    @cached_property
    def _class_index(self) -> tuple[int, ...]:
        idx = [0] * self.order
        for i, cls in enumerate(self.conjugacy_classes):
            for x in cls:
                idx[x] = i
        return tuple(idx)

    def class_of(self, x: int) -> tuple[int, ...]:
        return self.conjugacy_classes[self._class_index[x]]

    def class_index(self, x: int) -> int:
        return self._class_index[x]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(self.order))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def group_from_table(order: int, table: Sequence[Sequence[int]], name: str = "",
                     labels: Sequence[str] | None = None) -> FiniteGroup:
    """Validate a Cayley table and build the group.

    Orders above ``MAX_ORDER`` are rejected, so associativity is always
    checked on every triple.
    """
    if order < 1:
        raise NotAGroup("order must be positive")
    if order > MAX_ORDER:
        raise NotAGroup(f"order {order} exceeds supported maximum {MAX_ORDER}")
    if len(table) != order or any(len(row) != order for row in table):
        raise NotAGroup(f"table must be {order}x{order}")
    t = tuple(tuple(int(v) for v in row) for row in table)
    for x, row in enumerate(t):
        for y, v in enumerate(row):
            if not 0 <= v < order:
                raise NotAGroup(f"closure: {x}*{y}={v} out of range")

    idents = [e for e in range(order)
              if all(t[e][x] == x and t[x][e] == x for x in range(order))]
    if not idents:
        raise NotAGroup("identity: no two-sided identity element")
    e = idents[0]

    inv = []
    for x in range(order):
        ys = [y for y in range(order) if t[x][y] == e and t[y][x] == e]
        if not ys:
            raise NotAGroup(f"inverse: element {x} has no two-sided inverse")
        inv.append(ys[0])

    for x, y, z in itertools.product(range(order), repeat=3):
        if t[t[x][y]][z] != t[x][t[y][z]]:
            raise NotAGroup(f"associativity: ({x}*{y})*{z} != {x}*({y}*{z})")

    return FiniteGroup(order=order, table=t, identity=e, inv=tuple(inv), name=name,
                       labels=tuple(labels) if labels else None)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # apply q first, then p
    return tuple(p[i] for i in q)


def group_from_permutations(generators: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Close a set of permutations (0-based image lists) into a table group.

    Elements are numbered by lexicographic order of the permutations, so the
    identity is always element 0.
    """
    gens = [tuple(int(i) for i in g) for g in generators]
    if not gens:
        raise NotAGroup("need at least one generator")
    n = len(gens[0])
    if any(len(g) != n or sorted(g) != list(range(n)) for g in gens):
        raise NotAGroup("generators must be permutations of the same degree")
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(g, p)
                if q not in seen:
                    if len(seen) >= MAX_ORDER:
                        raise NotAGroup(f"generated group exceeds order {MAX_ORDER}")
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    perms = sorted(seen)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[_compose(p, q)] for q in perms] for p in perms]
    labels = [_cycle_label(p) for p in perms]
    return group_from_table(len(perms), table, name=name, labels=labels)


def _cycle_label(p: tuple[int, ...]) -> str:
    seen: set[int] = set()
    cycles = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        cycles.append("(" + "".join(str(k + 1) for k in cyc) + ")")
    return "".join(cycles) or "()"


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with element k standing for the residue k."""
    table = [[(x + y) % n for y in range(n)] for x in range(n)]
    return group_from_table(n, table, name=f"C{n}")


@lru_cache(maxsize=None)
def builtin_group(name: str) -> FiniteGroup:
    key = name.strip()
    upper = key.upper()
    if upper.startswith("C") and upper[1:].isdigit():
        n = int(upper[1:])
        if not 1 <= n <= MAX_ORDER:
            raise KeyError(name)
        return cyclic_group(n)
    if upper in _PERM_BUILTINS:
        return group_from_permutations(_PERM_BUILTINS[upper], name=upper)
    raise KeyError(f"unknown built-in group {name!r}")


_PERM_BUILTINS = {
    "S3": [[1, 0, 2], [1, 2, 0]],
    "S4": [[1, 0, 2, 3], [1, 2, 3, 0]],
    "D4": [[1, 2, 3, 0], [3, 2, 1, 0]],
    # regular representation of Q8 on {1,i,j,k,-1,-i,-j,-k}
    "Q8": [[1, 4, 3, 6, 5, 0, 7, 2], [2, 7, 4, 1, 6, 3, 0, 5]],
}

BUILTIN_NAMES = tuple([f"C{n}" for n in range(1, 9)] + list(_PERM_BUILTINS))


# -- subgroups ---------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def conjugate(self, g: int) -> "Subgroup":
        G = self.parent
        return Subgroup(G, tuple(sorted({G.conj(g, h) for h in self.elements})))


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    elems = {G.identity}
    gens = [g for g in set(gens) if g != G.identity]
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.table[x][g]
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(elems)))


def whole_group(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, G.elements)


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def is_subgroup(G: FiniteGroup, elements: Iterable[int]) -> bool:
    s = set(elements)
    if G.identity not in s:
        return False
    return all(G.table[x][y] in s for x in s for y in s)


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found by joining cyclic subgroups until nothing new appears."""
    cyclic = {generated_subgroup(G, [x]) for x in G.elements}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C.issubset(H):
                    continue
                K = generated_subgroup(G, H.elements + C.elements)
                if K not in found:
                    found.add(K)
                    nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda H: (H.order, H.elements))


@dataclass(frozen=True)
class SubgroupClass:
    representatives: tuple[Subgroup, ...]

    @property
    def canonical_rep(self) -> Subgroup:
        return self.representatives[0]

    @property
    def subgroup_order(self) -> int:
        return self.canonical_rep.order

    def __contains__(self, H: Subgroup) -> bool:
        return H in self.representatives


def subgroup_class_of(H: Subgroup) -> SubgroupClass:
    G = H.parent
    members = sorted({H.conjugate(g) for g in G.elements}, key=lambda K: K.elements)
    return SubgroupClass(tuple(members))


def subgroup_classes(G: FiniteGroup) -> list[SubgroupClass]:
    """Conjugacy classes of subgroups, sorted by order then canonical representative."""
    seen: set[Subgroup] = set()
    classes = []
    for H in all_subgroups(G):
        if H in seen:
            continue
        cls = subgroup_class_of(H)
        seen.update(cls.representatives)
        classes.append(cls)
    classes.sort(key=lambda c: (c.subgroup_order, c.canonical_rep.elements))
    return classes


def centralizer(G: FiniteGroup, H: Subgroup | Iterable[int]) -> Subgroup:
    elems = H.elements if isinstance(H, Subgroup) else tuple(H)
    return Subgroup(G, tuple(g for g in G.elements if all(G.commute(g, h) for h in elems)))


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, G.elements)


def subclass_leq(c1: SubgroupClass, c2: SubgroupClass) -> bool:
    H = c1.canonical_rep
    return any(H.issubset(K) for K in c2.representatives)


# -- G-sets and equivariant maps ------------------------------------------------

@dataclass(frozen=True)
class GSet:
    """A finite left G-set: ``action[g][p]`` is the image of point ``p`` under ``g``."""

    group: FiniteGroup = field(repr=False)
    size: int
    action: tuple[tuple[int, ...], ...] = field(repr=False)
    labels: tuple = field(default=(), repr=False)

    def orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for p in range(self.size):
            if p in seen:
                continue
            orb = tuple(sorted({self.action[g][p] for g in self.group.elements}))
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, p: int) -> Subgroup:
        G = self.group
        return Subgroup(G, tuple(g for g in G.elements if self.action[g][p] == p))


def coset_space(G: FiniteGroup, H: Subgroup) -> GSet:
    """Left cosets ``G/H`` ordered by least element, with left translation."""
    cosets = sorted({tuple(sorted(G.mul(x, h) for h in H.elements)) for x in G.elements})
    where = {}
    for i, c in enumerate(cosets):
        for x in c:
            where[x] = i
    action = tuple(tuple(where[G.mul(g, c[0])] for c in cosets) for g in G.elements)
    return GSet(G, len(cosets), action, tuple(cosets))


@dataclass(frozen=True)
class EquivariantMapGroup:
    """The maps ``eta: T -> G`` with ``eta(g.p) = g eta(p) g^-1``, under pointwise product."""

    gset: GSet = field(repr=False)
    maps: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.maps)

    def multiply(self, f: tuple[int, ...], h: tuple[int, ...]) -> tuple[int, ...]:
        G = self.gset.group
        return tuple(G.mul(x, y) for x, y in zip(f, h))

    def is_closed(self) -> bool:
        s = set(self.maps)
        return all(self.multiply(f, h) in s for f in self.maps for h in self.maps)


def equivariant_maps(T: GSet) -> EquivariantMapGroup:
    """All conjugation-equivariant maps from a G-set into G.

    On each orbit a map is determined by its value at one base point, so we
    try every group element there and keep the ones that extend consistently.
    """
    G = T.group
    per_orbit: list[list[dict[int, int]]] = []
    for orb in T.orbits():
        base = orb[0]
        options = []
        for z in G.elements:
            assign: dict[int, int] = {}
            ok = True
            for g in G.elements:
                p = T.action[g][base]
                val = G.conj(g, z)
                if assign.setdefault(p, val) != val:
                    ok = False
                    break
            if ok:
                options.append(assign)
        per_orbit.append(options)
    maps = []
    for combo in itertools.product(*per_orbit):
        merged: dict[int, int] = {}
        for part in combo:
            merged.update(part)
        maps.append(tuple(merged[p] for p in range(T.size)))
    return EquivariantMapGroup(T, tuple(sorted(maps)))


# -- local indices ---------------------------------------------------------------

@dataclass(frozen=True)
class LocalIndex:
    """A cyclic stabilizer with its character, encoded by the generator sent to
    the privileged root ``exp(2 pi i / r)``."""

    group: FiniteGroup = field(compare=False, repr=False)
    generator: int
    order: int

    @property
    def subgroup(self) -> Subgroup:
        return generated_subgroup(self.group, [self.generator])


def local_index_from_element(G: FiniteGroup, h: int) -> LocalIndex:
    return LocalIndex(G, h, G.element_order(h))


def inverse_index(idx: LocalIndex) -> LocalIndex:
    return LocalIndex(idx.group, idx.group.inverse(idx.generator), idx.order)


def power_index(idx: LocalIndex, k: int) -> int:
    """The element of the stabilizer acting by ``xi^k``: the k-th power of the generator."""
    return idx.group.power(idx.generator, k)


def group_from_spec(spec) -> FiniteGroup:
    """A built-in name, ``{"name", "order", "table"}`` or ``{"perm_generators": [...]}``."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return builtin_group(spec)
    if not isinstance(spec, dict):
        raise NotAGroup(f"cannot read a group from {type(spec).__name__}")
    if "table" in spec:
        table = spec["table"]
        return group_from_table(int(spec.get("order", len(table))), table, name=spec.get("name", ""))
    if "perm_generators" in spec:
        return group_from_permutations(spec["perm_generators"], name=spec.get("name", ""))
    if "name" in spec:
        return builtin_group(spec["name"])
    raise NotAGroup("group spec needs a name, a table or perm_generators")


def group_to_spec(G: FiniteGroup):
    try:
        if G.name and builtin_group(G.name).table == G.table:
            return G.name
    except KeyError:
        pass
    return {"name": G.name, "order": G.order, "table": [list(row) for row in G.table]}
