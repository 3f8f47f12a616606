"""Ghost automorphisms: which elements of ``+_e Z/r(e)`` lift to the cover, the
quasireflection part, ages and the junior test.

A ghost element is a residue ``k_e`` per base edge.  It lifts when the cochain
``e~ -> b_F(e~)^k_e`` on the contracted cover is an (equivariant) coboundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterator, Sequence

from .cochains import Cochain0, Cochain1, DeltaSolver, NotInImage
from .covers import CoverGraph, TrivialContraction, contract_trivial
from .errors import BudgetExceeded, DomainError
from .graphs import separating_edges

GHOST_BUDGET = 10 ** 7


def ghost_group(r: Sequence[int], budget: int = GHOST_BUDGET) -> Iterator[tuple[int, ...]]:
    """All of ``+_e Z/r(e)`` in lexicographic order."""
    size = math.prod(r)
    if size > budget:
        raise BudgetExceeded("ghost group", size, budget)
    return itertools.product(*(range(x) for x in r))


class LiftContext:
    """Everything needed to test many ghost elements against one cover."""

    def __init__(self, cover: CoverGraph, check: bool = True):
        self.cover = cover
        self.r = cover.datum.base.r
        self.contracted: TrivialContraction = contract_trivial(cover, check)
        up = self.contracted.upper
        self.action = up.action
        self.solver = DeltaSolver(up.action)
        G = cover.group
        # per oriented edge of Gamma~_0: base edge id and the powers of its index
        self.edges = []
        for o, b in enumerate(self.contracted.index):
            k = self.contracted.edge_proj[o] >> 1
            pw = [G.identity]
            for _ in range(1, self.r[k]):
                pw.append(G.mul(pw[-1], b))
            self.edges.append((k, tuple(pw)))
        base = cover.datum.base
        lower = self.contracted.lower
        sep0 = separating_edges(lower.graph)
        # separating edges of Gamma_0, as ids of base edges
        self.separating = frozenset(lower.kept_edges[k] for k in sep0)
        self.support = tuple(k for k in range(base.graph.edge_count) if base.r[k] > 1)

    def cochain_values(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(pw[a[k] % len(pw)] for k, pw in self.edges)

    def test(self, a: Sequence[int]):
        return self.solver.solve(self.cochain_values(a))


@dataclass(frozen=True)
class LiftResult:
    lifts: bool
    witness: Cochain0 | None = None
    obstruction: NotInImage | None = None

    def __bool__(self) -> bool:
        return self.lifts


def lifts(a: Sequence[int], cover: CoverGraph, context: LiftContext | None = None) -> LiftResult:
    """Lifting test for one ghost element, with the preimage or the obstruction."""
    ctx = context or LiftContext(cover)
    r = ctx.r
    if len(a) != len(r):
        raise DomainError("ghost element needs one residue per base edge")
    a = tuple(x % m for x, m in zip(a, r))
    b = Cochain1(ctx.action, ctx.cochain_values(a))
    b.validate()
    res = ctx.solver.solve(b.values)
    if isinstance(res, NotInImage):
        return LiftResult(False, obstruction=res)
    w = Cochain0(ctx.action, res)
    w.validate()
    return LiftResult(True, witness=w)


@dataclass(frozen=True)
class LiftedGhostGroup:
    r: tuple[int, ...]
    elements: tuple[tuple[int, ...], ...]
    generators: tuple[tuple[int, ...], ...]
    is_group: bool
    separating: frozenset[int] = field(default_factory=frozenset)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a) -> bool:
        return tuple(a) in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)


def _add(a, b, r):
    return tuple((x + y) % m for x, y, m in zip(a, b, r))


def _greedy_generators(elements, r) -> list[tuple[int, ...]]:
    zero = tuple(0 for _ in r)
    span = {zero}
    gens = []
    for x in elements:
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        while frontier:
            nxt = []
            for y in frontier:
                z = _add(y, x, r)
                if z not in span:
                    span.add(z)
                    nxt.append(z)
            frontier = nxt
    return gens


def lifted_ghost_group(cover: CoverGraph, budget: int = GHOST_BUDGET,
                       context: LiftContext | None = None) -> LiftedGhostGroup:
    ctx = context or LiftContext(cover)
    r = tuple(ctx.r)
    solve, values = ctx.solver.solve, ctx.cochain_values
    elements = tuple(a for a in ghost_group(r, budget)
                     if not isinstance(solve(values(a), False), NotInImage))
    return _assemble(r, elements, ctx.separating)


def _assemble(r, elements, separating) -> LiftedGhostGroup:
    gens = _greedy_generators(elements, r)
    s = set(elements)
    zero = tuple(0 for _ in r)
    # every element lies in <gens> by construction, so closure under adding gens is enough
    ok = zero in s and all(_add(a, g, r) in s for g in gens for a in elements)
    return LiftedGhostGroup(r, elements, tuple(gens), ok, frozenset(separating))


@dataclass(frozen=True)
class QRSubgroup:
    """Lifted elements supported on one edge.  ``axis_orders[e]`` is the order of the
    part living on edge ``e``; the subgroup is their direct sum."""

    r: tuple[int, ...]
    axis_orders: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    separating: frozenset[int]

    @property
    def order(self) -> int:
        return math.prod(self.axis_orders)

    def project(self, a: Sequence[int]) -> tuple[int, ...]:
        """Representative of ``a`` modulo QR: reduce ``k_e`` modulo ``r_e / s_e``."""
        return tuple(x % (m // s) for x, m, s in zip(a, self.r, self.axis_orders))

    def project_separating(self, a: Sequence[int]) -> tuple[int, ...]:
        """Zero every separating coordinate."""
        return tuple(0 if e in self.separating else x for e, x in enumerate(a))

    def is_full_on_separating(self) -> bool:
        return all(self.axis_orders[e] == self.r[e] for e in self.separating)


def qr_subgroup(lifted: LiftedGhostGroup) -> QRSubgroup:
    r = lifted.r
    step = list(r)  # the axis part on e is generated by step[e]
    for a in lifted.elements:
        sup = [e for e, x in enumerate(a) if x]
        if len(sup) == 1:
            e = sup[0]
            step[e] = math.gcd(step[e], a[e])
    gens = tuple(tuple(step[e] if f == e else 0 for f in range(len(r)))
                 for e in range(len(r)) if step[e] < r[e])
    axis = tuple(m // d for m, d in zip(r, step))
    return QRSubgroup(r, axis, gens, lifted.separating)


def age(a: Sequence[int], r: Sequence[int], non_separating_only: bool = False,
        separating: frozenset[int] | set[int] = frozenset()) -> Fraction:
    """``sum k_e / r_e`` over the counted edges (residues taken in ``0..r_e-1``)."""
    total = Fraction(0)
    for e, (x, m) in enumerate(zip(a, r)):
        if non_separating_only and e in separating:
            continue
        total += Fraction(x % m, m)
    return total


def quotient_age(a: Sequence[int], qr: QRSubgroup) -> Fraction:
    """Age on the coordinates left after dividing by QR: ``tau_e = t_e^{s_e}`` is acted on
    by ``k_e s_e / r_e``."""
    total = Fraction(0)
    for x, m, s in zip(a, qr.r, qr.axis_orders):
        total += Fraction((x * s) % m, m)
    return total


@dataclass(frozen=True)
class JuniorVerdict:
    is_junior: bool
    witness: tuple[int, ...] | None
    witness_age: Fraction | None
    qr_free_check: bool
    lifted_order: int
    qr_order: int
    lifted_is_group: bool
    quotient_ages: tuple[tuple[tuple[int, ...], Fraction], ...]
    separating_full: bool  # QR contains every separating axis
    literal_junior: bool  # verdict when separating coordinates are simply dropped
    r: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.is_junior

    def to_json(self) -> dict:
        def elt(a):
            return {str(e): x for e, x in enumerate(a) if x}
        return {
            "lifted_order": self.lifted_order,
            "qr_order": self.qr_order,
            "lifted_is_group": self.lifted_is_group,
            "quotient_ages": [{"element": elt(a), "age": str(q)} for a, q in self.quotient_ages],
            "junior": self.is_junior,
            "witness": None if self.witness is None else {
                "element": elt(self.witness), "age": str(self.witness_age)},
            "qr_free_check": self.qr_free_check,
            "separating_full": self.separating_full,
            "literal_junior": self.literal_junior,
        }


def _conjugate(a, r):
    return tuple((-x) % m for x, m in zip(a, r))


def verdict_from_lifted(lifted: LiftedGhostGroup, conjugate_convention: bool = False) -> JuniorVerdict:
    r = lifted.r
    qr = qr_subgroup(lifted)
    classes = sorted({qr.project(a) for a in lifted.elements})
    zero = tuple(0 for _ in r)
    ages = []
    witness, wage = None, None
    qr_free = True
    for c in classes:
        if c == zero:
            continue
        rep = _conjugate(c, r) if conjugate_convention else c
        q = quotient_age(rep, qr)
        ages.append((c, q))
        moved = sum(1 for x, m, s in zip(rep, r, qr.axis_orders) if (x * s) % m)
        if moved <= 1:
            qr_free = False
        if 0 < q < 1 and (witness is None or q < wage):
            witness, wage = c, q
    literal = False
    for a in lifted.elements:
        p = qr.project_separating(a)
        if p == zero:
            continue
        rep = _conjugate(p, r) if conjugate_convention else p
        q = age(rep, r, True, qr.separating)
        if 0 < q < 1:
            literal = True
            break
    return JuniorVerdict(witness is not None, witness, wage, qr_free, lifted.order, qr.order,
                         lifted.is_group, tuple(ages), qr.is_full_on_separating(), literal, r)


def junior_verdict(cover: CoverGraph, budget: int = GHOST_BUDGET,
                   conjugate_convention: bool = False) -> JuniorVerdict:
    return verdict_from_lifted(lifted_ghost_group(cover, budget), conjugate_convention)


def cycle_age_bound(m: int, n_prime: int, u: int) -> Fraction:
    """``sum_{s<m} (s n'/m + u) / n'``: the age of an order-``n'`` element cycling ``m``
    coordinates whose ``m``-th power acts by ``xi^{m u}``."""
    if m < 1 or n_prime < 1 or n_prime % m:
        raise DomainError("need m >= 1 dividing n'")
    if not 0 <= u < n_prime // m:
        raise DomainError(f"u must lie in [0, {n_prime // m})")
    step = n_prime // m
    return sum((Fraction(s * step + u, n_prime) for s in range(m)), Fraction(0))
