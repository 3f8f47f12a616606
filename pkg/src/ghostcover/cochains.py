"""Equivariant G-valued cochains on G-graphs and the differential ``delta``.

``delta(a)(e) = a(head e) * a(tail e)^-1``.  Deciding whether a 1-cochain is
a coboundary is done by propagating along a spanning forest (one root per
orbit of components) and then choosing the root value so that the result is
equivariant.  Triviality on circuits alone is not enough once G moves
vertices around: the preimage must also satisfy ``a(g.v) = g a(v) g^-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import (GraphGroupAction, contract, fundamental_cycle, spanning_forest)


class CochainError(ValueError):
    pass


@dataclass(frozen=True)
class Cochain0:
    action: GraphGroupAction = field(repr=False)
    values: tuple[int, ...]

    def validate(self) -> None:
        act, G = self.action, self.action.group
        if len(self.values) != act.graph.vertex_count:
            raise CochainError("need one value per vertex")
        for g in G.elements:
            vp = act.vertex_perm[g]
            for v, x in enumerate(self.values):
                if self.values[vp[v]] != G.conj(g, x):
                    raise CochainError(f"0-cochain not equivariant: g={g}, v={v}")


@dataclass(frozen=True)
class Cochain1:
    action: GraphGroupAction = field(repr=False)
    values: tuple[int, ...]

    def validate(self) -> None:
        act, G = self.action, self.action.group
        if len(self.values) != 2 * act.graph.edge_count:
            raise CochainError("need one value per oriented edge")
        for o, x in enumerate(self.values):
            if self.values[o ^ 1] != G.inverse(x):
                raise CochainError(f"1-cochain not antisymmetric on oriented edge {o}")
        for g in G.elements:
            ep = act.edge_perm[g]
            for o, x in enumerate(self.values):
                if self.values[ep[o]] != G.conj(g, x):
                    raise CochainError(f"1-cochain not equivariant: g={g}, oriented edge {o}")

    def is_trivial(self) -> bool:
        e = self.action.group.identity
        return all(x == e for x in self.values)


def delta(a: Cochain0) -> Cochain1:
    act, G = a.action, a.action.group
    gr = act.graph
    vals = tuple(G.mul(a.values[gr.head(o)], G.inverse(a.values[gr.tail(o)]))
                 for o in gr.oriented_edges)
    return Cochain1(act, vals)


def circuit_value(b: Cochain1 | Sequence[int], circuit: Sequence[int], group=None) -> int:
    """Ordered product ``b(e_k) ... b(e_1)`` along a closed walk ``e_1 .. e_k``."""
    if isinstance(b, Cochain1):
        group, vals = b.action.group, b.values
    else:
        vals = b
    out = group.identity
    for o in circuit:
        out = group.mul(vals[o], out)
    return out


@dataclass(frozen=True)
class NotInImage:
    """Why a 1-cochain is not a coboundary.

    ``circuit`` is set when some circuit has non-trivial product (``value``).
    Otherwise the circuits are fine but no root value makes the preimage
    equivariant; ``root`` names the component root where the search failed.
    """

    circuit: tuple[int, ...] | None = None
    value: int | None = None
    root: int | None = None

    @property
    def reason(self) -> str:
        return "circuit" if self.circuit is not None else "equivariance"

    def __bool__(self) -> bool:
        return False


_FAIL = NotInImage()


class DeltaSolver:
    """Precomputed spanning data for repeated ``im delta`` membership tests on one G-graph."""

    def __init__(self, action: GraphGroupAction):
        self.action = action
        G = action.group
        gr = action.graph
        self.forest = spanning_forest(gr)
        comps = gr.components
        cidx = gr.component_index
        comp_perm = [tuple(cidx[action.vertex_perm[g][c[0]]] for c in comps) for g in G.elements]

        self.orbits = []  # (root, order, parent_edges, cotree, stabilizer, transports)
        seen = set()
        for ci, comp in enumerate(comps):
            if ci in seen:
                continue
            transports = {}  # component index -> least g carrying ci there
            for g in G.elements:
                cj = comp_perm[g][ci]
                transports.setdefault(cj, g)
            seen.update(transports)
            stab = tuple(g for g in G.elements if comp_perm[g][ci] == ci and g != G.identity)
            members = set(comp)
            order = [v for v in self.forest.order if v in members]
            steps = []
            for v in order[1:]:
                p, o = self.forest.parent[v]
                steps.append((v, p, o))
            cotree = [2 * k for k in range(gr.edge_count)
                      if k not in self.forest.edges and gr.ends[k][0] in members]
            others = [(cj, g) for cj, g in sorted(transports.items()) if cj != ci]
            self.orbits.append((order[0], order, steps, cotree, stab, others))

    def solve(self, bvals: Sequence[int], explain: bool = True) -> tuple[int, ...] | NotInImage:
        """Return a preimage (tuple of vertex values) or a ``NotInImage``; with
        ``explain=False`` the failing circuit is not materialized."""
        act = self.action
        G = act.group
        t, inv = G.table, G.inv
        gr = act.graph
        a = [None] * gr.vertex_count
        for root, order, steps, cotree, stab, others in self.orbits:
            P = {root: G.identity}
            for v, p, o in steps:
                P[v] = t[bvals[o]][P[p]]
            for o in cotree:
                h, tl = gr.head(o), gr.tail(o)
                if P[h] != t[bvals[o]][P[tl]]:
                    if not explain:
                        return _FAIL
                    circ = fundamental_cycle(gr, self.forest, o)
                    return NotInImage(tuple(circ), circuit_value(bvals, circ, G))
            z = None
            if stab:
                targets = [(g, P[act.vertex_perm[g][root]]) for g in stab]
                for cand in G.elements:
                    ci = inv[cand]
                    # need P(g.root) = g z g^-1 z^-1
                    if all(pg == t[t[t[g][cand]][inv[g]]][ci] for g, pg in targets):
                        z = cand
                        break
                if z is None:
                    return NotInImage(root=root)
            else:
                z = G.identity
            for v in order:
                a[v] = t[P[v]][z]
            for cj, g in others:
                vp = act.vertex_perm[g]
                gi = inv[g]
                for v in order:
                    a[vp[v]] = t[t[g][a[v]]][gi]
        return tuple(a)

    def circuits_trivial(self, bvals: Sequence[int]) -> bool | tuple[int, ...]:
        """Circuit condition alone, with a root per component and no equivariance.

        Returns True, or a failing circuit.
        """
        gr = self.action.graph
        G = self.action.group
        t = G.table
        for comp in gr.components:
            members = set(comp)
            P = {comp[0]: G.identity}
            for v in self.forest.order:
                if v in members and self.forest.parent[v] is not None:
                    p, o = self.forest.parent[v]
                    P[v] = t[bvals[o]][P[p]]
            for k in range(gr.edge_count):
                if k in self.forest.edges or gr.ends[k][0] not in members:
                    continue
                o = 2 * k
                if P[gr.head(o)] != t[bvals[o]][P[gr.tail(o)]]:
                    return tuple(fundamental_cycle(gr, self.forest, o))
        return True


def in_image_of_delta(b: Cochain1, solver: DeltaSolver | None = None) -> Cochain0 | NotInImage:
    """A preimage ``a`` with ``delta(a) == b`` (roots fixed where equivariance allows),
    or the reason none exists."""
    b.validate()
    solver = solver or DeltaSolver(b.action)
    res = solver.solve(b.values)
    if isinstance(res, NotInImage):
        return res
    a = Cochain0(b.action, res)
    a.validate()
    if delta(a).values != b.values:
        raise AssertionError("propagated preimage does not reproduce the cochain")
    return a


def circuit_condition(b: Cochain1) -> bool | tuple[int, ...]:
    """True when every circuit has trivial product; otherwise a failing circuit."""
    return DeltaSolver(b.action).circuits_trivial(b.values)


def image_restriction_check(b: Cochain1, contracted_edges: Sequence[int]) -> bool:
    """Membership of a cochain supported off ``contracted_edges`` (oriented ids),
    decided on the full graph and on the contraction; both answers must agree."""
    act = b.action
    G = act.group
    D = set(contracted_edges)
    if any(b.values[o] != G.identity for o in D):
        raise CochainError("cochain must be trivial on the contracted edges")
    full = not isinstance(in_image_of_delta(b), NotInImage)
    con = contract(act.graph, D, act)
    b0 = Cochain1(con.action, tuple(b.values[2 * old + s] for old in con.kept_edges for s in (0, 1)))
    small = not isinstance(in_image_of_delta(b0), NotInImage)
    if full != small:
        raise AssertionError("membership differs between the graph and its contraction")
    return full


def equivariant_cochains0(action: GraphGroupAction):
    """Enumerate C^0 by choosing a value at each vertex-orbit representative."""
    G = action.group
    orbits = action.vertex_orbits()
    reps = [orb[0] for orb in orbits]
    for choice in itertools.product(G.elements, repeat=len(reps)):
        vals: list[int | None] = [None] * action.graph.vertex_count
        ok = True
        for rep, z in zip(reps, choice):
            for g in G.elements:
                w = action.vertex_perm[g][rep]
                x = G.conj(g, z)
                if vals[w] is None:
                    vals[w] = x
                elif vals[w] != x:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield Cochain0(action, tuple(vals))


def equivariant_cochains1_basis(action: GraphGroupAction) -> list[tuple[int, list[int]]]:
    """For each pair of mate orbits, a representative oriented edge and its allowed values
    (the centralizer of its stabilizer)."""
    G = action.group
    out = []
    done = set()
    for orb in action.edge_orbits():
        o = orb[0]
        if o in done:
            continue
        done.update(orb)
        done.update(action.edge_perm[g][o ^ 1] for g in G.elements)
        stab = action.edge_stabilizer(o).elements
        allowed = [z for z in G.elements if all(G.commute(z, h) for h in stab)]
        out.append((o, allowed))
    return out


def extend_cochain1(action: GraphGroupAction, assignment: dict[int, int]) -> Cochain1:
    """Spread values given on representative oriented edges over their orbits and mates."""
    G = action.group
    vals: list[int | None] = [None] * (2 * action.graph.edge_count)
    for o, z in assignment.items():
        for g in G.elements:
            x = G.conj(g, z)
            o2 = action.edge_perm[g][o]
            if vals[o2] is not None and vals[o2] != x:
                raise CochainError(f"value {z} on {o} is not compatible with its stabilizer")
            vals[o2] = x
            vals[o2 ^ 1] = G.inverse(x)
    if any(v is None for v in vals):
        raise CochainError("assignment does not cover every edge orbit")
    return Cochain1(action, tuple(vals))
