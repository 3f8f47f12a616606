"""Multigraphs with an oriented-edge involution, and finite group actions on them.

Edge ``k`` joins ``ends[k] = (u, v)``.  It carries two oriented edges:
``2k`` runs from tail ``u`` to head ``v`` and ``2k+1`` is its mate, so the
mate of ``o`` is always ``o ^ 1``.  Loops and parallel edges are allowed.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .groups import FiniteGroup, Subgroup


class Disconnected(ValueError):
    pass


class NotCotree(ValueError):
    pass


class UnstableSet(ValueError):
    """An edge set to contract is not stable under the attached group action."""


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    ends: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for k, (u, v) in enumerate(self.ends):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {k} has an endpoint outside 0..{self.vertex_count - 1}")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(vertex_count, tuple((int(u), int(v)) for u, v in edges))

    @property
    def edge_count(self) -> int:
        return len(self.ends)

    @property
    def oriented_edges(self) -> range:
        return range(2 * len(self.ends))

    def head(self, o: int) -> int:
        u, v = self.ends[o >> 1]
        return u if o & 1 else v

    def tail(self, o: int) -> int:
        u, v = self.ends[o >> 1]
        return v if o & 1 else u

    @staticmethod
    def mate(o: int) -> int:
        return o ^ 1

    @staticmethod
    def edge_of(o: int) -> int:
        return o >> 1

    def is_loop(self, k: int) -> bool:
        u, v = self.ends[k]
        return u == v

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for o in self.oriented_edges:
            out[self.tail(o)].append(o)
        return tuple(tuple(x) for x in out)

    def out_edges(self, v: int) -> tuple[int, ...]:
        """Oriented edges leaving ``v`` (one per half-edge at ``v``), by id."""
        return self._out[v]

    def degree(self, v: int) -> int:
        return len(self._out[v])

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.vertex_count
        comps = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for o in self._out[x]:
                    y = self.head(o)
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def component_index(self) -> tuple[int, ...]:
        idx = [0] * self.vertex_count
        for i, comp in enumerate(self.components):
            for v in comp:
                idx[v] = i
        return tuple(idx)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count,
                "edges": [{"id": k, "ends": [u, v]} for k, (u, v) in enumerate(self.ends)]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        edges = sorted(data.get("edges", []), key=lambda e: e["id"])
        if [e["id"] for e in edges] != list(range(len(edges))):
            raise ValueError("edge ids must be 0..E-1")
        return cls.from_edges(int(data["vertices"]), (e["ends"] for e in edges))


def betti(graph: Graph) -> tuple[list[int], int]:
    """First Betti number per connected component, and the total ``E - V + c``."""
    per = [0] * len(graph.components)
    for k in range(graph.edge_count):
        per[graph.component_index[graph.ends[k][0]]] += 1
    for i, comp in enumerate(graph.components):
        per[i] += 1 - len(comp)
    return per, graph.edge_count - graph.vertex_count + len(graph.components)


def separating_edges(graph: Graph) -> frozenset[int]:
    """Bridges, by an iterative low-link search keyed on edge ids (so parallel edges count)."""
    n = graph.vertex_count
    disc = [-1] * n
    low = [0] * n
    bridges = set()
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(graph.out_edges(root)))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for o in it:
                if via != -1 and o == (via ^ 1):
                    continue
                w = graph.head(o)
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, o, iter(graph.out_edges(w))))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if via != -1:
                p = graph.tail(via)
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    bridges.add(via >> 1)
    return frozenset(bridges)


def is_tree_like(graph: Graph) -> bool:
    if not graph.is_connected():
        raise Disconnected("tree-likeness is defined for connected graphs")
    return len(separating_edges(graph)) == graph.vertex_count - 1


@dataclass(frozen=True)
class SpanningForest:
    edges: frozenset[int]
    roots: tuple[int, ...]
    # parent[v] = (parent vertex, oriented edge from parent to v); roots map to None
    parent: tuple[tuple[int, int] | None, ...]
    order: tuple[int, ...]  # vertices, parents before children

    def path_from_root(self, v: int) -> list[int]:
        """Oriented edges from the root of ``v``'s tree down to ``v``."""
        path = []
        while self.parent[v] is not None:
            p, o = self.parent[v]
            path.append(o)
            v = p
        path.reverse()
        return path


def spanning_forest(graph: Graph) -> SpanningForest:
    """Greedy forest taking edges in id order; each tree is rooted at its least vertex."""
    uf = list(range(graph.vertex_count))

    def find(x: int) -> int:
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    chosen = set()
    for k, (u, v) in enumerate(graph.ends):
        ru, rv = find(u), find(v)
        if ru != rv:
            uf[ru] = rv
            chosen.add(k)

    parent: list[tuple[int, int] | None] = [None] * graph.vertex_count
    seen = [False] * graph.vertex_count
    order = []
    roots = []
    for comp in graph.components:
        r = comp[0]
        roots.append(r)
        seen[r] = True
        queue = deque([r])
        while queue:
            x = queue.popleft()
            order.append(x)
            for o in graph.out_edges(x):
                if (o >> 1) in chosen:
                    y = graph.head(o)
                    if not seen[y]:
                        seen[y] = True
                        parent[y] = (x, o)
                        queue.append(y)
    return SpanningForest(frozenset(chosen), tuple(roots), tuple(parent), tuple(order))


def fundamental_cycle(graph: Graph, forest: SpanningForest, o: int) -> list[int]:
    """The circuit made of cotree edge ``o`` followed by the forest path back to its tail."""
    if (o >> 1) in forest.edges:
        raise NotCotree(f"edge {o >> 1} belongs to the spanning forest")
    t, h = graph.tail(o), graph.head(o)
    to_t = forest.path_from_root(t)
    to_h = forest.path_from_root(h)
    common = 0
    while common < min(len(to_t), len(to_h)) and to_t[common] == to_h[common]:
        common += 1
    # from h up to the meeting point, then down to t
    up = [x ^ 1 for x in reversed(to_h[common:])]
    down = to_t[common:]
    return [o] + up + down


def walk_is_closed(graph: Graph, walk: Sequence[int]) -> bool:
    if not walk:
        return True
    for a, b in zip(walk, walk[1:]):
        if graph.head(a) != graph.tail(b):
            return False
    return graph.head(walk[-1]) == graph.tail(walk[0])


# -- group actions ----------------------------------------------------------------

@dataclass(frozen=True)
class GraphGroupAction:
    graph: Graph
    group: FiniteGroup = field(compare=False)
    vertex_perm: tuple[tuple[int, ...], ...]
    edge_perm: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        G, gr = self.group, self.graph
        if len(self.vertex_perm) != G.order or len(self.edge_perm) != G.order:
            raise ValueError("need one permutation per group element")
        for g in G.elements:
            vp, ep = self.vertex_perm[g], self.edge_perm[g]
            if sorted(vp) != list(range(gr.vertex_count)):
                raise ValueError(f"vertex map of {g} is not a permutation")
            if sorted(ep) != list(gr.oriented_edges):
                raise ValueError(f"edge map of {g} is not a permutation")
            for o in gr.oriented_edges:
                if gr.head(ep[o]) != vp[gr.head(o)]:
                    raise ValueError(f"head compatibility fails for {g} on {o}")
                if ep[o ^ 1] != ep[o] ^ 1:
                    raise ValueError(f"mate compatibility fails for {g} on {o}")
        for g in G.elements:
            for h in G.elements:
                gh = G.mul(g, h)
                if any(self.vertex_perm[gh][v] != self.vertex_perm[g][self.vertex_perm[h][v]]
                       for v in range(gr.vertex_count)):
                    raise ValueError("vertex action is not a homomorphism")
                if any(self.edge_perm[gh][o] != self.edge_perm[g][self.edge_perm[h][o]]
                       for o in gr.oriented_edges):
                    raise ValueError("edge action is not a homomorphism")

    def vertex_orbits(self) -> list[tuple[int, ...]]:
        return _orbits(self.vertex_perm, self.graph.vertex_count)

    def edge_orbits(self) -> list[tuple[int, ...]]:
        return _orbits(self.edge_perm, 2 * self.graph.edge_count)

    def vertex_stabilizer(self, v: int) -> Subgroup:
        return Subgroup(self.group, tuple(g for g in self.group.elements
                                          if self.vertex_perm[g][v] == v))

    def edge_stabilizer(self, o: int) -> Subgroup:
        return Subgroup(self.group, tuple(g for g in self.group.elements
                                          if self.edge_perm[g][o] == o))


def _orbits(perms: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    seen = [False] * n
    out = []
    for x in range(n):
        if seen[x]:
            continue
        orb = sorted({p[x] for p in perms})
        for y in orb:
            seen[y] = True
        out.append(tuple(orb))
    return out


def trivial_action(graph: Graph, group: FiniteGroup) -> GraphGroupAction:
    vp = tuple(range(graph.vertex_count))
    ep = tuple(graph.oriented_edges)
    return GraphGroupAction(graph, group, (vp,) * group.order, (ep,) * group.order)


@dataclass(frozen=True)
class Contraction:
    graph: Graph
    vertex_map: tuple[int, ...]  # old vertex -> new vertex
    kept_edges: tuple[int, ...]  # new edge id -> old edge id
    action: GraphGroupAction | None = None

    @cached_property
    def edge_map(self) -> dict[int, int]:
        """Old edge id -> new edge id, for the surviving edges."""
        return {old: new for new, old in enumerate(self.kept_edges)}

    def oriented_map(self, o: int) -> int | None:
        new = self.edge_map.get(o >> 1)
        return None if new is None else 2 * new + (o & 1)


def contract(graph: Graph, D: Iterable[int], action: GraphGroupAction | None = None,
             *, oriented: bool = True) -> Contraction:
    """Contract the edges in ``D``.

    ``D`` holds oriented edge ids closed under the mate involution (or plain
    edge ids with ``oriented=False``).  Surviving edges keep their relative
    order; new vertices are numbered by their least old vertex.
    """
    D = set(D)
    if oriented:
        if any((o ^ 1) not in D for o in D):
            raise ValueError("contracted set must be closed under the mate involution")
        dead = {o >> 1 for o in D}
    else:
        dead = D
        D = {2 * k for k in dead} | {2 * k + 1 for k in dead}
    if action is not None:
        for g in action.group.elements:
            if any(action.edge_perm[g][o] not in D for o in D):
                raise UnstableSet(f"contracted set is not stable under element {g}")

    if not dead:
        return Contraction(graph, tuple(range(graph.vertex_count)), tuple(range(graph.edge_count)),
                           action)

    uf = list(range(graph.vertex_count))

    def find(x: int) -> int:
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    for k in dead:
        u, v = graph.ends[k]
        ru, rv = find(u), find(v)
        if ru != rv:
            uf[max(ru, rv)] = min(ru, rv)
    reps = sorted({find(v) for v in range(graph.vertex_count)})
    new_index = {r: i for i, r in enumerate(reps)}
    vmap = tuple(new_index[find(v)] for v in range(graph.vertex_count))
    kept = tuple(k for k in range(graph.edge_count) if k not in dead)
    g0 = Graph(len(reps), tuple((vmap[graph.ends[k][0]], vmap[graph.ends[k][1]]) for k in kept))

    act0 = None
    if action is not None:
        emap = {old: new for new, old in enumerate(kept)}
        vperm, eperm = [], []
        for g in action.group.elements:
            vp = [0] * g0.vertex_count
            for v in range(graph.vertex_count):
                vp[vmap[v]] = vmap[action.vertex_perm[g][v]]
            ep = [0] * (2 * len(kept))
            for new, old in enumerate(kept):
                for s in (0, 1):
                    img = action.edge_perm[g][2 * old + s]
                    ep[2 * new + s] = 2 * emap[img >> 1] + (img & 1)
            vperm.append(tuple(vp))
            eperm.append(tuple(ep))
        act0 = GraphGroupAction(g0, action.group, tuple(vperm), tuple(eperm))
    return Contraction(g0, vmap, kept, act0)


@dataclass(frozen=True)
class Quotient:
    graph: Graph
    vertex_proj: tuple[int, ...]
    edge_proj: tuple[int, ...]  # oriented edge upstairs -> oriented edge downstairs


def quotient_graph(action: GraphGroupAction) -> Quotient:
    """Orbit graph ``V/G, E/G``.  Quotient edge ``k`` runs in the direction of the
    orbit holding the least oriented id among the pair."""
    gr = action.graph
    vorbs = action.vertex_orbits()
    vproj = [0] * gr.vertex_count
    for i, orb in enumerate(vorbs):
        for v in orb:
            vproj[v] = i
    eorbs = action.edge_orbits()
    where = {}
    for i, orb in enumerate(eorbs):
        for o in orb:
            where[o] = i
    eproj = [0] * (2 * gr.edge_count)
    ends = []
    done = set()
    for orb in eorbs:
        o = orb[0]
        i, j = where[o], where[o ^ 1]
        if i == j:
            raise ValueError(f"the action reverses oriented edge {o}")
        if i in done:
            continue
        done.update((i, j))
        k = len(ends)
        ends.append((vproj[gr.tail(o)], vproj[gr.head(o)]))
        for x in eorbs[i]:
            eproj[x] = 2 * k
        for x in eorbs[j]:
            eproj[x] = 2 * k + 1
    return Quotient(Graph(len(vorbs), tuple(ends)), tuple(vproj), tuple(eproj))


# -- small-graph canonical forms ---------------------------------------------------

def canonical_form(graph: Graph, vertex_labels: Sequence | None = None,
                   edge_labels: Sequence | None = None) -> tuple:
    """Least relabelled edge list over all vertex orderings compatible with a
    degree/label refinement.  Only meant for the tiny graphs the scanner
    handles; edge labels must be orientation-independent."""
    n = graph.vertex_count
    vl = list(vertex_labels) if vertex_labels is not None else [0] * n
    el = list(edge_labels) if edge_labels is not None else [0] * graph.edge_count
    loops = [0] * n
    for k, (u, v) in enumerate(graph.ends):
        if u == v:
            loops[u] += 1
    inv = [(vl[v], graph.degree(v), loops[v]) for v in range(n)]
    cells: dict = {}
    for v in range(n):
        cells.setdefault(inv[v], []).append(v)
    keys = sorted(cells)
    best = None
    for choice in itertools.product(*(itertools.permutations(cells[k]) for k in keys)):
        pos = {}
        i = 0
        for block in choice:
            for v in block:
                pos[v] = i
                i += 1
        edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v]), el[k])
                       for k, (u, v) in enumerate(graph.ends))
        cand = tuple(edges)
        if best is None or cand < best:
            best = cand
    return (n, tuple(inv[v] for v in sorted(range(n), key=lambda v: inv[v])), best)


def isomorphic(a: Graph, b: Graph) -> bool:
    return canonical_form(a) == canonical_form(b)
