"""Decorated graphs, monodromy data of admissible G-covers, and the cover graph.

A cover is given by one monodromy tuple per base vertex
``(a_1, b_1, ..., a_g, b_g, c_1, ..., c_k)`` and one voltage per oriented base
edge.  The ``c`` entries at a vertex follow its outgoing oriented edges in id
order, then its markings; the entry for oriented edge ``o`` is the local index
read on the branch at the tail of ``o``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .graphs import (Contraction, Graph, GraphGroupAction, betti, canonical_form, contract,
                     quotient_graph)
from .groups import (FiniteGroup, Subgroup, SubgroupClass, coset_space, generated_subgroup,
                     group_from_spec, group_to_spec, subgroup_class_of)

DEFAULT_BUDGET = 10 ** 7


class IllFormed(ValueError):
    pass


class NotAbelian(ValueError):
    pass


# -- base graphs ---------------------------------------------------------------------

@dataclass(frozen=True)
class DecoratedGraph:
    graph: Graph
    genus: tuple[int, ...]
    r: tuple[int, ...]
    markings: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.markings:
            object.__setattr__(self, "markings", (0,) * self.graph.vertex_count)
        if len(self.genus) != self.graph.vertex_count or len(self.markings) != self.graph.vertex_count:
            raise IllFormed("genus and markings need one entry per vertex")
        if len(self.r) != self.graph.edge_count:
            raise IllFormed("r needs one entry per edge")

    def valence(self, v: int) -> int:
        return self.graph.degree(v) + self.markings[v]

    def is_stable(self) -> bool:
        return all(2 * g - 2 + self.valence(v) > 0 for v, g in enumerate(self.genus))

    @property
    def total_genus(self) -> int:
        return sum(self.genus) + betti(self.graph)[1]

    def validate(self, group: FiniteGroup | None = None, stable: bool = True) -> None:
        if any(g < 0 for g in self.genus) or any(m < 0 for m in self.markings):
            raise IllFormed("genus and markings must be non-negative")
        if any(x < 1 for x in self.r):
            raise IllFormed("edge orders must be positive")
        if not self.graph.is_connected():
            raise IllFormed("the base graph must be connected")
        if stable:
            for v, g in enumerate(self.genus):
                if 2 * g - 2 + self.valence(v) <= 0:
                    raise IllFormed(f"vertex {v} is unstable (genus {g}, valence {self.valence(v)})")
            if self.total_genus < 2:
                raise IllFormed(f"total genus {self.total_genus} is below 2")
        if group is not None:
            for k, x in enumerate(self.r):
                if group.order % x:
                    raise IllFormed(f"r({k}) = {x} does not divide |G| = {group.order}")

    def canonical_form(self) -> tuple:
        labels = [(g, m) for g, m in zip(self.genus, self.markings)]
        return canonical_form(self.graph, labels, self.r)

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["genus"] = list(self.genus)
        if any(self.markings):
            out["markings"] = list(self.markings)
        out["r"] = {str(k): x for k, x in enumerate(self.r)}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DecoratedGraph":
        graph = Graph.from_json(data)
        r = data.get("r", {})
        if isinstance(r, list):
            rs = tuple(int(x) for x in r)
        else:
            rs = tuple(int(r.get(str(k), 1)) for k in range(graph.edge_count))
        genus = tuple(int(g) for g in data.get("genus", [0] * graph.vertex_count))
        marks = tuple(int(m) for m in data.get("markings", [0] * graph.vertex_count))
        return cls(graph, genus, rs, marks)


# -- monodromy ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexMonodromy:
    vertex: int
    genus: int
    entries: tuple[int, ...]

    @property
    def surface(self) -> tuple[int, ...]:
        return self.entries[:2 * self.genus]

    @property
    def branch(self) -> tuple[int, ...]:
        return self.entries[2 * self.genus:]

    def relation_value(self, G: FiniteGroup) -> int:
        """``prod [a_i, b_i] * prod c_j``; the identity for a genuine monodromy."""
        out = G.identity
        s = self.surface
        for i in range(self.genus):
            out = G.mul(out, G.commutator(s[2 * i], s[2 * i + 1]))
        return G.mul(out, G.prod(self.branch))

    def image(self, G: FiniteGroup) -> Subgroup:
        return generated_subgroup(G, self.entries)


@dataclass(frozen=True)
class CoverDatum:
    base: DecoratedGraph
    group: FiniteGroup = field(compare=False, repr=False)
    monodromy: tuple[VertexMonodromy, ...]
    voltages: tuple[int, ...]

    @classmethod
    def assemble(cls, base: DecoratedGraph, group: FiniteGroup, surface: Sequence[Sequence[int]],
                 c: Sequence[int], voltages: Sequence[int] | None = None,
                 marks: Sequence[Sequence[int]] | None = None) -> "CoverDatum":
        """Build the tuples from per-vertex surface parts and per-oriented-edge indices."""
        gr = base.graph
        mons = []
        for v in range(gr.vertex_count):
            branch = [c[o] for o in gr.out_edges(v)]
            if marks is not None:
                branch.extend(marks[v])
            mons.append(VertexMonodromy(v, base.genus[v], tuple(surface[v]) + tuple(branch)))
        if voltages is None:
            voltages = (group.identity,) * (2 * gr.edge_count)
        return cls(base, group, tuple(mons), tuple(voltages))

    @cached_property
    def _slot(self) -> tuple[int, ...]:
        gr = self.base.graph
        slot = [0] * (2 * gr.edge_count)
        for v in range(gr.vertex_count):
            for i, o in enumerate(gr.out_edges(v)):
                slot[o] = i
        return tuple(slot)

    def c(self, o: int) -> int:
        mon = self.monodromy[self.base.graph.tail(o)]
        return mon.branch[self._slot[o]]

    @cached_property
    def indices(self) -> tuple[int, ...]:
        """Local index on every oriented base edge."""
        return tuple(self.c(o) for o in self.base.graph.oriented_edges)

    def marking_indices(self, v: int) -> tuple[int, ...]:
        return self.monodromy[v].branch[self.base.graph.degree(v):]

    @cached_property
    def vertex_subgroups(self) -> tuple[Subgroup, ...]:
        return tuple(m.image(self.group) for m in self.monodromy)

    def validate(self, stable: bool = True) -> None:
        G, base = self.group, self.base
        gr = base.graph
        base.validate(G, stable=stable)
        if len(self.monodromy) != gr.vertex_count:
            raise IllFormed("need one monodromy tuple per vertex")
        if len(self.voltages) != 2 * gr.edge_count:
            raise IllFormed("need one voltage per oriented edge")
        for v, mon in enumerate(self.monodromy):
            if mon.vertex != v or mon.genus != base.genus[v]:
                raise IllFormed(f"monodromy tuple {v} does not match its vertex")
            want = 2 * mon.genus + base.valence(v)
            if len(mon.entries) != want:
                raise IllFormed(f"vertex {v}: tuple has {len(mon.entries)} entries, expected {want}")
            if any(not 0 <= x < G.order for x in mon.entries):
                raise IllFormed(f"vertex {v}: entry outside the group")
            if mon.relation_value(G) != G.identity:
                raise IllFormed(f"vertex {v}: surface relation fails")
        for o in gr.oriented_edges:
            c, g = self.c(o), self.voltages[o]
            if self.voltages[o ^ 1] != G.inverse(g):
                raise IllFormed(f"voltage on {o ^ 1} is not the inverse of the voltage on {o}")
            if G.element_order(c) != base.r[o >> 1]:
                raise IllFormed(f"index on oriented edge {o} has order {G.element_order(c)}, "
                                f"r = {base.r[o >> 1]}")
            # the branch at the other end sees the inverse index, moved by the voltage
            if self.c(o ^ 1) != G.conj(G.inverse(g), G.inverse(c)):
                raise IllFormed(f"branch matching fails on edge {o >> 1}")


# -- cover graphs ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverGraph:
    datum: CoverDatum = field(repr=False)
    graph: Graph
    action: GraphGroupAction = field(repr=False)
    vertex_proj: tuple[int, ...]
    edge_proj: tuple[int, ...]  # oriented edge upstairs -> oriented edge of the base
    index: tuple[int, ...]  # b_F on oriented edges upstairs
    vertex_reps: tuple[tuple[int, int], ...]  # upstairs vertex -> (base vertex, least coset element)
    edge_reps: tuple[tuple[int, int], ...]  # upstairs edge -> (base edge, least coset element)

    @property
    def group(self) -> FiniteGroup:
        return self.datum.group

    def validate(self) -> None:
        G = self.group
        act, gr, base = self.action, self.graph, self.datum.base
        act.validate()
        for o in gr.oriented_edges:
            if self.index[o ^ 1] != G.inverse(self.index[o]):
                raise IllFormed(f"index cochain not balanced on {o}")
            for g in G.elements:
                if self.index[act.edge_perm[g][o]] != G.conj(g, self.index[o]):
                    raise IllFormed(f"index cochain not equivariant on {o}")
            stab = act.edge_stabilizer(o)
            if stab != generated_subgroup(G, [self.index[o]]):
                raise IllFormed(f"stabilizer of {o} is not generated by its index")
            if stab.order != base.r[self.edge_proj[o] >> 1]:
                raise IllFormed(f"stabilizer order of {o} differs from r")
        counts = [0] * base.graph.vertex_count
        for v in self.vertex_proj:
            counts[v] += 1
        for v, H in enumerate(self.datum.vertex_subgroups):
            if counts[v] * H.order != G.order:
                raise IllFormed(f"fiber over vertex {v} has the wrong size")
        ecounts = [0] * base.graph.edge_count
        for k in range(gr.edge_count):
            ecounts[self.edge_proj[2 * k] >> 1] += 1
        for k, r in enumerate(base.r):
            if ecounts[k] * r != G.order:
                raise IllFormed(f"fiber over edge {k} has the wrong size")
        q = quotient_graph(act)
        if canonical_form(q.graph) != canonical_form(base.graph):
            raise IllFormed("quotient of the cover is not the base graph")


def build_cover_graph(datum: CoverDatum, check: bool = True) -> CoverGraph:
    G = datum.group
    base = datum.base.graph
    if check:
        datum.validate(stable=False)
    t = G.table
    vertex_cosets = []
    where = []
    offsets = []
    reps = []
    n = 0
    for v, H in enumerate(datum.vertex_subgroups):
        cs = coset_space(G, H)
        vertex_cosets.append(cs)
        w = {}
        for i, coset in enumerate(cs.labels):
            for x in coset:
                w[x] = n + i
            reps.append((v, coset[0]))
        where.append(w)
        offsets.append(n)
        n += cs.size

    ends = []
    index = []
    eproj = []
    erep = []
    fibers = []  # base edge -> {element: upstairs edge id}
    for k in range(base.edge_count):
        o = 2 * k
        c, g = datum.c(o), datum.voltages[o]
        u, w = base.ends[k]
        C = generated_subgroup(G, [c])
        Hu, Hw = datum.vertex_subgroups[u], datum.vertex_subgroups[w]
        if c not in Hu:
            raise IllFormed(f"edge {k}: index {c} is not in the stabilizer at the tail")
        if G.conj(G.inverse(g), c) not in Hw:
            raise IllFormed(f"edge {k}: transported index is not in the stabilizer at the head")
        fiber = {}
        for coset in coset_space(G, C).labels:
            x = coset[0]
            e_id = len(ends)
            ends.append((where[u][x], where[w][t[x][g]]))
            b = G.conj(x, c)
            index.extend((b, G.inverse(b)))
            eproj.extend((o, o + 1))
            erep.append((k, x))
            for y in coset:
                fiber[y] = e_id
        fibers.append(fiber)
    graph = Graph(n, tuple(ends))

    vperm, eperm = [], []
    for g in G.elements:
        vp = [0] * n
        for i, (v, x) in enumerate(reps):
            vp[i] = where[v][t[g][x]]
        ep = [0] * (2 * len(ends))
        for e_id, (k, x) in enumerate(erep):
            img = fibers[k][t[g][x]]
            ep[2 * e_id] = 2 * img
            ep[2 * e_id + 1] = 2 * img + 1
        vperm.append(tuple(vp))
        eperm.append(tuple(ep))
    action = GraphGroupAction(graph, G, tuple(vperm), tuple(eperm))
    cover = CoverGraph(datum, graph, action, tuple(v for v, _ in reps), tuple(eproj), tuple(index),
                       tuple(reps), tuple(erep))
    if check:
        cover.validate()
    return cover


def type_function(cover: CoverGraph) -> tuple[int, ...]:
    """Conjugacy-class index of the local index over each oriented base edge."""
    G = cover.group
    base = cover.datum.base.graph
    out: list[int | None] = [None] * (2 * base.edge_count)
    for o, x in enumerate(cover.index):
        cls = G.class_index(x)
        bo = cover.edge_proj[o]
        if out[bo] is None:
            out[bo] = cls
        elif out[bo] != cls:
            raise IllFormed(f"lifts of base edge {bo} have different types")
    return tuple(out)


@dataclass(frozen=True)
class TrivialContraction:
    """``Gamma~_0`` and ``Gamma_0``: the cover and the base with trivial-index edges contracted."""

    upper: Contraction
    lower: Contraction
    index: tuple[int, ...]  # b_F on oriented edges of Gamma~_0
    edge_proj: tuple[int, ...]  # oriented edge of Gamma~_0 -> oriented edge of the base (original ids)


def contract_trivial(cover: CoverGraph, check: bool = True) -> TrivialContraction:
    G = cover.group
    base = cover.datum.base
    D = {o for o, x in enumerate(cover.index) if x == G.identity}
    D0 = {o for o in base.graph.oriented_edges if base.r[o >> 1] == 1}
    if {cover.edge_proj[o] for o in D} != D0:
        raise IllFormed("trivial indices upstairs do not lie exactly over edges with r = 1")
    upper = contract(cover.graph, D, cover.action)
    lower = contract(base.graph, D0)
    index = tuple(cover.index[2 * old + s] for old in upper.kept_edges for s in (0, 1))
    eproj = tuple(cover.edge_proj[2 * old + s] for old in upper.kept_edges for s in (0, 1))
    if check:
        q = quotient_graph(upper.action)
        if canonical_form(q.graph) != canonical_form(lower.graph):
            raise IllFormed("contraction does not commute with the quotient")
    return TrivialContraction(upper, lower, index, eproj)


# -- Hurwitz search -------------------------------------------------------------------------

def _mask(elems: Iterable[int]) -> int:
    m = 0
    for x in elems:
        m |= 1 << x
    return m


def _elements(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def closure_mask(G: FiniteGroup, gens: int) -> int:
    """Bitmask of the subgroup generated by the elements in bitmask ``gens``."""
    gl = [g for g in _elements(gens) if g != G.identity]
    seen = 1 << G.identity
    frontier = [G.identity]
    t = G.table
    while frontier:
        nxt = []
        for x in frontier:
            row = t[x]
            for g in gl:
                y = row[g]
                if not (seen >> y) & 1:
                    seen |= 1 << y
                    nxt.append(y)
        frontier = nxt
    return seen


def mask_subgroup(G: FiniteGroup, mask: int) -> Subgroup:
    return Subgroup(G, _elements(mask))


@lru_cache(maxsize=None)
def surface_table(G: FiniteGroup, genus: int) -> dict[int, dict[int, tuple[int, ...]]]:
    """For each value ``k`` of ``prod_{i<=genus} [a_i, b_i]``, the subgroups ``<a, b>``
    (as bitmasks) that occur, each with its first witness tuple."""
    if genus == 0:
        return {G.identity: {1 << G.identity: ()}}
    if genus == 1:
        out: dict[int, dict[int, tuple[int, ...]]] = {}
        for a in G.elements:
            for b in G.elements:
                k = G.commutator(a, b)
                K = closure_mask(G, (1 << a) | (1 << b))
                out.setdefault(k, {}).setdefault(K, (a, b))
        return out
    prev, one = surface_table(G, genus - 1), surface_table(G, 1)
    out = {}
    for k1, subs1 in prev.items():
        for k2, subs2 in one.items():
            k = G.mul(k1, k2)
            slot = out.setdefault(k, {})
            for K1, w1 in subs1.items():
                for K2, w2 in subs2.items():
                    K = closure_mask(G, K1 | K2)
                    if K not in slot:
                        slot[K] = w1 + w2
    return {k: dict(sorted(v.items())) for k, v in sorted(out.items())}


def vertex_options(G: FiniteGroup, genus: int, branch: Sequence[int]) -> dict[int, tuple[int, ...]]:
    """Achievable images ``H = <tuple>`` for a vertex of the given genus whose branch entries
    are fixed, mapped to a witness tuple ``(a_1, b_1, ..., c_1, ...)``."""
    kappa = G.inverse(G.prod(branch))
    cm = _mask(branch)
    out: dict[int, tuple[int, ...]] = {}
    for K, w in surface_table(G, genus).get(kappa, {}).items():
        H = closure_mask(G, K | cm)
        if H not in out:
            out[H] = w + tuple(branch)
    return out


@dataclass(frozen=True)
class Unrealizable:
    reason: str

    def __bool__(self) -> bool:
        return False


def hurwitz_realizable(genus: int, G: FiniteGroup, classes: Sequence[int],
                       image: Subgroup | SubgroupClass | None = None,
                       budget: int = DEFAULT_BUDGET) -> VertexMonodromy | Unrealizable:
    """Search for ``(a_1, b_1, ..., c_1, ..., c_k)`` with the surface relation, ``c_j`` in the
    class of ``classes[j]`` (given by any member) and image in the class of ``image``.

    The first entry ``c_1`` is fixed to its class representative (global conjugation).
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    cls = [G.class_of(h) for h in classes]
    want = None
    if image is not None:
        want = image if isinstance(image, SubgroupClass) else subgroup_class_of(image)
    choices = [c for c in cls]
    if choices:
        choices[0] = (choices[0][0],)
    space = 1
    for c in choices:
        space *= len(c)
    space += G.order ** 2 if genus else 0
    if space > budget:
        raise BudgetExceeded("hurwitz search", space, budget)
    for branch in itertools.product(*choices):
        for H, w in vertex_options(G, genus, branch).items():
            if want is None or mask_subgroup(G, H) in want:
                return VertexMonodromy(0, genus, w)
    what = "image class" if want is not None else "relation"
    return Unrealizable(f"no tuple of genus {genus} meets the {what} with these classes")


def abelian_two_point_check(datum: CoverDatum) -> bool:
    """For an abelian group and a base with exactly two markings: are the two
    marking indices inverse to each other?"""
    G = datum.group
    if not G.is_abelian:
        raise NotAbelian(f"{G.name or 'group'} is not abelian")
    marks = []
    for v in range(datum.base.graph.vertex_count):
        marks.extend(datum.marking_indices(v))
    if len(marks) != 2:
        raise IllFormed(f"expected exactly two markings, found {len(marks)}")
    return G.mul(marks[0], marks[1]) == G.identity


# -- JSON -----------------------------------------------------------------------------------

def cover_from_json(data: dict) -> CoverDatum:
    G = group_from_spec(data["group"])
    base = DecoratedGraph.from_json(data["base"])
    gr = base.graph
    mono = data.get("monodromy", {})
    if isinstance(mono, list):
        mono = {str(v): t for v, t in enumerate(mono)}
    mons = []
    for v in range(gr.vertex_count):
        entries = tuple(int(x) for x in mono.get(str(v), []))
        mons.append(VertexMonodromy(v, base.genus[v], entries))
    volts = [None] * (2 * gr.edge_count)
    for key, val in data.get("voltages", {}).items():
        o = int(key)
        if not 0 <= o < len(volts):
            raise IllFormed(f"voltage given for unknown oriented edge {o}")
        volts[o] = int(val)
    for o in range(0, len(volts), 2):
        a, b = volts[o], volts[o + 1]
        if a is None and b is None:
            volts[o] = volts[o + 1] = G.identity
        elif a is None:
            volts[o] = G.inverse(b)
        elif b is None:
            volts[o + 1] = G.inverse(a)
    return CoverDatum(base, G, tuple(mons), tuple(volts))


def cover_to_json(datum: CoverDatum) -> dict:
    return {
        "group": group_to_spec(datum.group),
        "base": datum.base.to_json(),
        "monodromy": {str(m.vertex): list(m.entries) for m in datum.monodromy},
        "voltages": {str(o): g for o, g in enumerate(datum.voltages) if o % 2 == 0},
    }
