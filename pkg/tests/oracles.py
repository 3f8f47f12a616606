"""Brute-force reference implementations used only by the tests.

Nothing here imports the algorithms it checks: subgroups come from subset
closure, bridges from edge removal, coboundaries from enumerating every
equivariant 0-cochain, ages from numerical eigenvalues.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from ghostcover.graphs import Graph, GraphGroupAction


# -- groups ----------------------------------------------------------------------------

def perm_group_elements(gens):
    """All products of the generators (composition p*q = p after q)."""
    n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


def subsets_closed_under_product(G):
    """Every subgroup, by testing all subsets containing the identity (|G| <= 8)."""
    others = [x for x in G.elements if x != G.identity]
    out = []
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            s = {G.identity, *extra}
            if all(G.mul(x, y) in s for x in s for y in s):
                out.append(frozenset(s))
    return out


def subgroups_by_generation(G):
    """All subgroups as unions generated by pairs of elements closed up (fine for order <= 24)."""
    subs = set()
    for x in G.elements:
        for y in G.elements:
            subs.add(_close(G, {x, y}))
    changed = True
    while changed:
        changed = False
        cur = list(subs)
        for a in cur:
            for b in cur:
                c = _close(G, a | b)
                if c not in subs:
                    subs.add(c)
                    changed = True
    return subs


def _close(G, s):
    s = set(s) | {G.identity}
    while True:
        new = {G.mul(x, y) for x in s for y in s} | s
        if new == s:
            return frozenset(s)
        s = new


def all_maps_equivariant(G, cosets, action):
    """Count maps eta: T -> G with eta(g.p) = g eta(p) g^-1, by trying all |G|^|T| maps."""
    n = len(cosets)
    count = 0
    for eta in itertools.product(G.elements, repeat=n):
        if all(eta[action[g][p]] == G.conj(g, eta[p]) for g in G.elements for p in range(n)):
            count += 1
    return count


# -- graphs ----------------------------------------------------------------------------

def connected_after_removal(n, ends, skip):
    adj = {v: set() for v in range(n)}
    for k, (u, v) in enumerate(ends):
        if k == skip:
            continue
        adj[u].add(v)
        adj[v].add(u)
    comp = {}
    c = 0
    for s in range(n):
        if s in comp:
            continue
        stack = [s]
        comp[s] = c
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp[y] = c
                    stack.append(y)
        c += 1
    return comp


def bridges_by_removal(n, ends):
    base = connected_after_removal(n, ends, -1)
    out = set()
    for k, (u, v) in enumerate(ends):
        if u == v:
            continue
        comp = connected_after_removal(n, ends, k)
        if comp[u] != comp[v]:
            out.add(k)
    return out


def random_multigraph(rng: random.Random, max_v=10, max_e=14, connected=True):
    n = rng.randint(1, max_v)
    ends = []
    if connected:
        for v in range(1, n):
            ends.append((rng.randrange(v), v))
    for _ in range(rng.randint(0, max_e - len(ends)) if max_e > len(ends) else 0):
        u, v = rng.randrange(n), rng.randrange(n)
        ends.append((min(u, v), max(u, v)))
    rng.shuffle(ends)
    return Graph(n, tuple(ends))


def random_ggraph(G, rng: random.Random, n_orbits=3, e_orbits=3, subgroups=None):
    """A G-graph built from cosets: vertex orbits G/H_i, edge orbits G/K with K inside the
    stabilizers of both ends.  Independent of the cover construction in the package."""
    subs = subgroups or [sorted(s) for s in subgroups_by_generation(G)]
    Hs = [frozenset(rng.choice(subs)) for _ in range(n_orbits)]

    def cosets(H):
        return sorted({tuple(sorted(G.mul(x, h) for h in H)) for x in G.elements})

    vcos = [cosets(H) for H in Hs]
    vid = {}
    n = 0
    for i, cs in enumerate(vcos):
        for c in cs:
            for x in c:
                vid[(i, x)] = n
            n += 1
    # vertex id of (orbit i, element x) -> x H_i
    ends = []
    edge_data = []  # (edge orbit, coset of K)
    for t in range(e_orbits):
        i, j = rng.randrange(n_orbits), rng.randrange(n_orbits)
        g = rng.choice(G.elements)
        # K must fix x H_i and x g H_j for x = 1: K <= H_i cap g H_j g^-1
        inter = frozenset(h for h in Hs[i] if G.mul(G.mul(G.inverse(g), h), g) in Hs[j])
        K = rng.choice([frozenset(s) for s in subs if frozenset(s) <= inter])
        for c in cosets(K):
            x = c[0]
            ends.append((vid[(i, x)], vid[(j, G.mul(x, g))]))
            edge_data.append((t, c))
    graph = Graph(n, tuple(ends))
    where = {}
    for e_id, (t, c) in enumerate(edge_data):
        for x in c:
            where[(t, x)] = e_id
    vperm = []
    eperm = []
    for h in G.elements:
        vp = [0] * n
        for (i, x), v in vid.items():
            vp[v] = vid[(i, G.mul(h, x))]
        ep = [0] * (2 * len(ends))
        for e_id, (t, c) in enumerate(edge_data):
            img = where[(t, G.mul(h, c[0]))]
            ep[2 * e_id] = 2 * img
            ep[2 * e_id + 1] = 2 * img + 1
        vperm.append(tuple(vp))
        eperm.append(tuple(ep))
    return GraphGroupAction(graph, G, tuple(vperm), tuple(eperm))


# -- cochains --------------------------------------------------------------------------

def all_equivariant_0cochains(action: GraphGroupAction) -> np.ndarray:
    """Every a in C^0 as rows of an array, from the full product over vertex-orbit
    representatives; each row is checked for equivariance."""
    G = action.group
    n = action.graph.vertex_count
    reps = []
    seen = set()
    for v in range(n):
        if v not in seen:
            reps.append(v)
            seen.update(action.vertex_perm[g][v] for g in G.elements)
    rows = []
    for choice in itertools.product(G.elements, repeat=len(reps)):
        a = [None] * n
        ok = True
        for v, z in zip(reps, choice):
            for g in G.elements:
                w = action.vertex_perm[g][v]
                val = G.conj(g, z)
                if a[w] is None:
                    a[w] = val
                elif a[w] != val:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            rows.append(a)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def all_0cochains_filtered(action: GraphGroupAction) -> np.ndarray:
    """Every a in G^V that happens to be equivariant (small V only)."""
    G = action.group
    n = action.graph.vertex_count
    T = np.array(G.table)
    INV = np.array(G.inv)
    grid = np.array(list(itertools.product(G.elements, repeat=n)), dtype=np.int64).reshape(-1, n)
    keep = np.ones(len(grid), dtype=bool)
    for g in G.elements:
        vp = action.vertex_perm[g]
        for v in range(n):
            # a(g v) == g a(v) g^-1
            keep &= grid[:, vp[v]] == T[T[g, grid[:, v]], INV[g]]
    return grid[keep]


def preimages(action: GraphGroupAction, b, cochains: np.ndarray) -> np.ndarray:
    """Rows a of ``cochains`` with a(head) a(tail)^-1 = b on every oriented edge."""
    G = action.group
    T = np.array(G.table)
    INV = np.array(G.inv)
    ok = np.ones(len(cochains), dtype=bool)
    gr = action.graph
    for o in range(2 * gr.edge_count):
        h, t = gr.head(o), gr.tail(o)
        ok &= T[cochains[:, h], INV[cochains[:, t]]] == b[o]
    return cochains[ok]


def abelian_coboundary(n, ends, values, modulus):
    """Is there f: V -> Z/n with f(v) - f(u) = values[k] on edge k = (u, v)?  Brute force."""
    for f in itertools.product(range(modulus), repeat=n):
        if all((f[v] - f[u] - x) % modulus == 0 for (u, v), x in zip(ends, values)):
            return True
    return False


# -- ages ------------------------------------------------------------------------------

def eigen_age(m: int, n_prime: int, u: int) -> Fraction:
    """Age of the m x m cyclic permutation matrix carrying the phase exp(2 pi i m u / n')
    on one entry: its m-th power is that scalar."""
    M = np.zeros((m, m), dtype=complex)
    for i in range(m - 1):
        M[i + 1, i] = 1
    M[0, m - 1] = np.exp(2j * np.pi * m * u / n_prime)
    eig = np.linalg.eigvals(M)
    total = 0
    for lam in eig:
        assert abs(abs(lam) - 1) < 1e-9
        ang = (np.angle(lam) / (2 * np.pi)) % 1.0
        k = int(round(ang * n_prime)) % n_prime
        assert abs(ang * n_prime - round(ang * n_prime)) < 1e-6
        total += k
    return Fraction(total, n_prime)
