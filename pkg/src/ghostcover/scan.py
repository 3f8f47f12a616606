"""Exhaustive enumeration of small bases and covers, and the junior scan."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .covers import (DEFAULT_BUDGET, CoverDatum, DecoratedGraph, VertexMonodromy,
                     build_cover_graph, closure_mask, cover_to_json, vertex_options)
from .errors import BudgetExceeded
from .ghost import (GHOST_BUDGET, LiftContext, JuniorVerdict, lifted_ghost_group, lifts,
                    quotient_age, qr_subgroup, verdict_from_lifted)
from .graphs import Graph, canonical_form, spanning_forest
from .groups import FiniteGroup, builtin_group, group_to_spec

log = logging.getLogger(__name__)

SCHEMA = 1


@dataclass(frozen=True)
class ScanBounds:
    group: FiniteGroup = field(repr=False)
    max_vertices: int = 3
    max_edges: int = 4
    max_genus: int = 2
    min_total_genus: int = 2
    max_total_genus: int | None = None
    r_values: tuple[int, ...] | None = None
    ghost_budget: int = GHOST_BUDGET
    cover_budget: int = DEFAULT_BUDGET
    reduce_abelian: bool = True
    markings: int = 0

    def validate(self) -> None:
        if self.max_vertices < 1 or self.max_edges < 0 or self.max_genus < 0:
            raise ValueError("bounds must be positive")
        if self.min_total_genus < 2:
            raise ValueError("min_total_genus must be at least 2")
        if self.max_total_genus is not None and self.max_total_genus < self.min_total_genus:
            raise ValueError("max_total_genus is below min_total_genus")
        if self.ghost_budget < 1 or self.cover_budget < 1:
            raise ValueError("budgets must be positive")
        for x in self.edge_orders:
            if x < 2 or self.group.order % x:
                raise ValueError(f"edge order {x} must be at least 2 and divide |G|")

    @property
    def edge_orders(self) -> tuple[int, ...]:
        """Explicit ``r_values``, else every element order above 1 (a divisor of |G| that is
        not an element order admits no index)."""
        if self.r_values is not None:
            return tuple(sorted(set(self.r_values)))
        G = self.group
        return tuple(sorted({G.element_order(x) for x in G.elements} - {1}))

    def to_json(self) -> dict:
        return {
            "group": group_to_spec(self.group),
            "max_vertices": self.max_vertices,
            "max_edges": self.max_edges,
            "max_genus": self.max_genus,
            "min_total_genus": self.min_total_genus,
            "max_total_genus": self.max_total_genus,
            "r_values": list(self.edge_orders),
            "ghost_budget": self.ghost_budget,
            "cover_budget": self.cover_budget,
            "reduce_abelian": self.reduce_abelian,
        }

    @classmethod
    def from_json(cls, data: dict, group: FiniteGroup | None = None) -> "ScanBounds":
        from .groups import group_from_spec
        G = group or group_from_spec(data["group"])
        r = data.get("r_values")
        return cls(G, int(data.get("max_vertices", 3)), int(data.get("max_edges", 4)),
                   int(data.get("max_genus", 2)), int(data.get("min_total_genus", 2)),
                   data.get("max_total_genus"), tuple(r) if r else None,
                   int(data.get("ghost_budget", GHOST_BUDGET)),
                   int(data.get("cover_budget", DEFAULT_BUDGET)),
                   bool(data.get("reduce_abelian", True)), int(data.get("markings", 0)))


# -- bases -------------------------------------------------------------------------------

def enumerate_graphs(max_vertices: int, max_edges: int) -> list[Graph]:
    """Connected multigraphs (loops allowed) up to isomorphism, ordered by size."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs = [(u, v) for u in range(n) for v in range(u, n)]
        for m in range(n - 1, max_edges + 1):
            seen = set()
            for edges in itertools.combinations_with_replacement(pairs, m):
                g = Graph(n, edges)
                if not g.is_connected():
                    continue
                cf = canonical_form(g)
                if cf in seen:
                    continue
                seen.add(cf)
                out.append(g)
    return out


def enumerate_bases(bounds: ScanBounds) -> Iterator[DecoratedGraph]:
    """Stable decorated graphs within the bounds, one per isomorphism class, every r >= 2."""
    rs = bounds.edge_orders
    for g in enumerate_graphs(bounds.max_vertices, bounds.max_edges):
        seen = set()
        n = g.vertex_count
        for marks in _marking_spreads(n, bounds.markings):
            for genus in itertools.product(range(bounds.max_genus + 1), repeat=n):
                for r in itertools.product(rs, repeat=g.edge_count):
                    base = DecoratedGraph(g, genus, r, marks)
                    if not base.is_stable():
                        continue
                    tg = base.total_genus
                    if tg < bounds.min_total_genus:
                        continue
                    if bounds.max_total_genus is not None and tg > bounds.max_total_genus:
                        continue
                    cf = base.canonical_form()
                    if cf in seen:
                        continue
                    seen.add(cf)
                    yield base


def _marking_spreads(n: int, total: int):
    if total == 0:
        yield (0,) * n
        return
    for combo in itertools.combinations_with_replacement(range(n), total):
        marks = [0] * n
        for v in combo:
            marks[v] += 1
        yield tuple(marks)


# -- covers --------------------------------------------------------------------------------

def cover_space_size(base: DecoratedGraph, G: FiniteGroup, reduce_abelian: bool = True) -> int:
    counts = Counter(G.element_order(x) for x in G.elements)
    forest = spanning_forest(base.graph)
    size = 1
    fixed = reduce_abelian and G.is_abelian
    for k, r in enumerate(base.r):
        size *= counts[r]
        if k not in forest.edges and not fixed:
            size *= G.order
    size *= G.order ** sum(base.markings)
    return size


def enumerate_covers(base: DecoratedGraph, G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                     reduce_abelian: bool = True) -> Iterator[CoverDatum]:
    """Every cover datum over ``base`` up to global conjugation, with spanning-forest
    voltages fixed to the identity.

    For abelian G with ``reduce_abelian`` every voltage is the identity: the cover's
    ghost data then depends on the indices alone.
    """
    size = cover_space_size(base, G, reduce_abelian)
    if size > budget:
        raise BudgetExceeded("cover space", size, budget)
    gr = base.graph
    forest = spanning_forest(gr)
    abelian = G.is_abelian
    fixed = reduce_abelian and abelian
    by_order: dict[int, list[int]] = {}
    for x in G.elements:
        by_order.setdefault(G.element_order(x), []).append(x)
    edge_choices = []
    for k, r in enumerate(base.r):
        volts = [G.identity] if (k in forest.edges or fixed) else list(G.elements)
        edge_choices.append([(c, g) for c in by_order.get(r, []) for g in volts])
    mark_choices = [list(G.elements)] * sum(base.markings)
    conj = [[G.conj(x, y) for y in G.elements] for x in G.elements]
    t, inv = G.table, G.inv
    out_edges = [gr.out_edges(v) for v in range(gr.vertex_count)]

    for combo in itertools.product(*edge_choices, *mark_choices):
        c = [0] * (2 * gr.edge_count)
        volt = [0] * (2 * gr.edge_count)
        for k in range(gr.edge_count):
            ck, gk = combo[k]
            c[2 * k] = ck
            volt[2 * k] = gk
            volt[2 * k + 1] = inv[gk]
            c[2 * k + 1] = conj[inv[gk]][inv[ck]]
        marks = combo[gr.edge_count:]
        stab = ()
        if not abelian:
            stab = _conjugation_stabilizer(G, conj, (tuple(c), tuple(volt), tuple(marks)))
            if stab is None:
                continue
        options = []
        pos = 0
        for v in range(gr.vertex_count):
            branch = [c[o] for o in out_edges[v]]
            branch.extend(marks[pos:pos + base.markings[v]])
            pos += base.markings[v]
            opts = vertex_options(G, base.genus[v], branch)
            if not opts:
                break
            options.append(sorted(opts.items()))
        else:
            for chosen in itertools.product(*options):
                Hs = tuple(H for H, _ in chosen)
                if stab and any(tuple(_conj_mask(G, conj, x, H) for H in Hs) < Hs for x in stab):
                    continue
                mons = tuple(VertexMonodromy(v, base.genus[v], w) for v, (_, w) in enumerate(chosen))
                yield CoverDatum(base, G, mons, tuple(volt))


def _conjugation_stabilizer(G: FiniteGroup, conj, head):
    """None if a conjugate of ``head`` is lexicographically smaller, else the
    non-identity elements fixing it."""
    flat = [y for part in head for y in part]
    stab = []
    for x in G.elements:
        if x == G.identity:
            continue
        row = conj[x]
        for y in flat:
            z = row[y]
            if z != y:
                if z < y:
                    return None
                break
        else:
            stab.append(x)
    return stab


def _conj_mask(G: FiniteGroup, conj, x: int, mask: int) -> int:
    out = 0
    row = conj[x]
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << row[i]
        mask >>= 1
        i += 1
    return out


def verdict_key(datum: CoverDatum, reduce_abelian: bool = True) -> tuple:
    """What the ghost verdict depends on: the graph, the edge orders, the indices and,
    unless G is abelian, the voltages and vertex stabilizers.  Genus does not enter."""
    base = datum.base
    key = (base.graph.vertex_count, base.graph.ends, base.r, datum.indices)
    if reduce_abelian and datum.group.is_abelian:
        return key
    Hs = tuple(closure_mask(datum.group, _maskof(m.entries)) for m in datum.monodromy)
    return key + (datum.voltages, Hs)


def _maskof(xs) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m


# -- scanning ------------------------------------------------------------------------------

@dataclass
class ScanReport:
    instance: int
    base: DecoratedGraph
    datum: CoverDatum
    verdict: JuniorVerdict

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "base_form": repr(self.base.canonical_form()),
            "cover": cover_to_json(self.datum),
            "verdict": self.verdict.to_json(),
        }

    def csv_row(self) -> list:
        v = self.verdict
        w = "" if v.witness is None else " ".join(map(str, v.witness))
        return [self.instance, repr(self.base.canonical_form()), int(v.is_junior), v.lifted_order,
                v.qr_order, w, "" if v.witness_age is None else str(v.witness_age)]


CSV_HEADER = ["instance", "base_form", "junior", "lifted_order", "qr_order", "witness", "witness_age"]


@dataclass
class ScanResult:
    bounds: ScanBounds
    reports: list[ScanReport]
    witnesses: list[ScanReport]
    skipped: list[dict]
    instances: int = 0
    bases: int = 0
    distinct_keys: int = 0
    lifted_histogram: Counter = field(default_factory=Counter)
    # structural checks, counted per distinct verdict key
    not_a_group: int = 0
    qr_sep_incomplete: list = field(default_factory=list)
    qr_nonseparating_axis: list = field(default_factory=list)
    qr_not_free: int = 0
    convention_mismatch: int = 0
    literal_disagreement: int = 0

    @property
    def complete(self) -> bool:
        return not self.skipped

    @property
    def status(self) -> str:
        if self.witnesses:
            return "witnesses"
        return "clean" if self.complete else "incomplete"

    def summary(self) -> dict:
        return {
            "schema": SCHEMA,
            "bounds": self.bounds.to_json(),
            "status": self.status,
            "complete": self.complete,
            "claim": ("no junior instance in this slice" if self.status == "clean" else
                      "slice incomplete: emptiness cannot be claimed" if self.status == "incomplete"
                      else f"{len(self.witnesses)} junior instances found"),
            "bases": self.bases,
            "instances": self.instances,
            "distinct_verdict_keys": self.distinct_keys,
            "lifted_order_histogram": {str(k): v for k, v in sorted(self.lifted_histogram.items())},
            "junior_count": len(self.witnesses),
            "skipped": self.skipped,
            "checks": {
                "lifted_not_a_group": self.not_a_group,
                "qr_missing_separating_axis": len(self.qr_sep_incomplete),
                "qr_axis_on_non_separating_edge": len(self.qr_nonseparating_axis),
                "quotient_not_qr_free": self.qr_not_free,
                "convention_mismatch": self.convention_mismatch,
                "literal_verdict_disagreement": self.literal_disagreement,
            },
            "witnesses": [w.to_json() for w in self.witnesses],
        }

    def exit_code(self) -> int:
        return {"clean": 0, "witnesses": 2, "incomplete": 3}[self.status]


def revalidate_witness(report: ScanReport) -> bool:
    """Independent re-check of a junior witness: it lifts, it is its own QR-reduced
    representative and its quotient age lies strictly between 0 and 1."""
    v = report.verdict
    if v.witness is None:
        return False
    cover = build_cover_graph(report.datum)
    if not lifts(v.witness, cover):
        return False
    lifted = lifted_ghost_group(cover)
    qr = qr_subgroup(lifted)
    if qr.project(v.witness) != tuple(v.witness):
        return False
    q = quotient_age(v.witness, qr)
    if not (Fraction(0) < q < Fraction(1)) or q != v.witness_age:
        return False
    if qr.is_full_on_separating() and any(v.witness[e] for e in qr.separating):
        return False
    return True


def analyse(datum: CoverDatum, ghost_budget: int = GHOST_BUDGET, check: bool = True) -> tuple[JuniorVerdict, JuniorVerdict, dict]:
    """Verdicts under both root conventions, plus the quasireflection structure checks."""
    cover = build_cover_graph(datum, check=check)
    ctx = LiftContext(cover, check=check)
    lifted = lifted_ghost_group(cover, ghost_budget, ctx)
    v = verdict_from_lifted(lifted)
    vc = verdict_from_lifted(lifted, conjugate_convention=True)
    qr = qr_subgroup(lifted)
    sep = ctx.separating
    checks = {
        "missing_sep": [e for e in sorted(sep) if qr.axis_orders[e] != lifted.r[e]],
        "nonsep_axis": [e for e in range(len(lifted.r)) if e not in sep and qr.axis_orders[e] > 1],
    }
    return v, vc, checks


_worker_cache: dict[tuple, tuple] = {}


def scan_base(bounds: ScanBounds, base: DecoratedGraph):
    """All instances over one base: ``(datum, key, verdict, conjugate verdict, checks)``
    tuples, or a skip record.  Verdicts are cached by key within the process."""
    try:
        covers = list(enumerate_covers(base, bounds.group, bounds.cover_budget, bounds.reduce_abelian))
    except BudgetExceeded as exc:
        return None, {"base": repr(base.canonical_form()), "reason": str(exc), "skipped": exc.needed}
    out = []
    for datum in covers:
        key = verdict_key(datum, bounds.reduce_abelian)
        hit = _worker_cache.get(key)
        if hit is None:
            try:
                hit = analyse(datum, bounds.ghost_budget, check=False)
            except BudgetExceeded as exc:
                return None, {"base": repr(base.canonical_form()), "reason": str(exc),
                              "skipped": exc.needed}
            _worker_cache[key] = hit
        out.append((datum, key) + hit)
    return out, None


def _scan_base_star(args):
    return scan_base(*args)


def scan_j_locus(bounds: ScanBounds, full_reports: bool = False, progress=None,
                 jobs: int = 1) -> ScanResult:
    """Scan every instance within the bounds.  Results are merged in base order, so the
    report does not depend on ``jobs``."""
    bounds.validate()
    res = ScanResult(bounds, [], [], [])
    bases = list(enumerate_bases(bounds))
    _worker_cache.clear()
    if jobs > 1:
        import multiprocessing
        pool = multiprocessing.Pool(jobs)
        stream = pool.imap(_scan_base_star, ((bounds, b) for b in bases), chunksize=4)
    else:
        pool = None
        stream = (scan_base(bounds, b) for b in bases)
    seen: set = set()
    try:
        for base, (items, skip) in zip(bases, stream):
            res.bases += 1
            if skip is not None:
                res.skipped.append(skip)
                continue
            for datum, key, v, vc, checks in items:
                res.instances += 1
                if key not in seen:
                    seen.add(key)
                    res.distinct_keys += 1
                    if not v.lifted_is_group:
                        res.not_a_group += 1
                        log.warning("lifted ghost set is not a group at instance %d", res.instances)
                    if not v.qr_free_check:
                        res.qr_not_free += 1
                    if v.is_junior != vc.is_junior:
                        res.convention_mismatch += 1
                    if v.is_junior != v.literal_junior:
                        res.literal_disagreement += 1
                    if checks["missing_sep"]:
                        res.qr_sep_incomplete.append((res.instances, checks["missing_sep"]))
                    if checks["nonsep_axis"]:
                        res.qr_nonseparating_axis.append((res.instances, checks["nonsep_axis"]))
                res.lifted_histogram[v.lifted_order] += 1
                rep = ScanReport(res.instances, base, datum, v)
                if v.is_junior:
                    res.witnesses.append(rep)
                if full_reports:
                    res.reports.append(rep)
            if progress is not None:
                progress(res)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return res
