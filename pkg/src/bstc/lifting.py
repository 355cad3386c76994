"""Extending partial choices to total ones that keep (alpha), (beta) or WARP.

Each ``*_liftable`` function decides the lifting problem and, on success,
returns the explicit total lifting; on failure it returns evidence:

* (alpha): a menu pair breaking the axiom, or a subset-closed family of menus
  whose rejected items cover its union;
* (beta): a menu pair breaking the axiom;
* WARP: a cycle of Euler regions forced to be strictly increasing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Sequence

from .choice import (
    Axiom, ChoiceError, EulerDiagram, PartialChoice, ResourceLimit, bits, check_axiom, envelope,
    euler_diagram, lowest_bit, popcount, rejection, relativized_domain, total_menus,
)


class LiftingError(ValueError):
    """A construction was called on a choice that violates its precondition."""


# --------------------------------------------------------------------------
# layered preorders

@dataclass(frozen=True)
class LayeredPreorder:
    """Total preorder given as an ordered partition, lowest layer first."""

    layers: tuple[frozenset, ...]
    membership: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = {}
        for i, layer in enumerate(self.layers):
            if not layer:
                raise ValueError("layers must be nonempty")
            for item in layer:
                if item in m:
                    raise ValueError(f"{item!r} occurs in two layers")
                m[item] = i
        object.__setattr__(self, "membership", m)

    @property
    def carrier(self) -> frozenset:
        return frozenset(self.membership)

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return self.membership[a] <= self.membership[b]

    def maximal(self, items: Iterable[Hashable]) -> frozenset:
        items = list(items)
        if not items:
            return frozenset()
        top = max(self.membership[i] for i in items)
        return frozenset(i for i in items if self.membership[i] == top)

    @classmethod
    def from_relation(cls, carrier: Sequence[Hashable], leq) -> "LayeredPreorder":
        """Layers of a total preorder given by a predicate ``leq(a, b)``."""
        carrier = list(carrier)
        for a in carrier:
            for b in carrier:
                if not (leq(a, b) or leq(b, a)):
                    raise ValueError(f"{a!r} and {b!r} are incomparable")
                for c in carrier:
                    if leq(a, b) and leq(b, c) and not leq(a, c):
                        raise ValueError("relation is not transitive")
        # number of strictly smaller elements determines the layer
        rank = {a: sum(1 for b in carrier if not leq(a, b)) for a in carrier}
        levels = sorted(set(rank.values()))
        return cls(tuple(frozenset(a for a in carrier if rank[a] == lv) for lv in levels))


@dataclass(frozen=True)
class StrictCycle:
    """Items that would each have to lie strictly below the next one, cyclically."""

    items: tuple


def find_layered_preorder(
    carrier: Sequence[Hashable],
    weak: Iterable[tuple[Hashable, Hashable]],
    strict: Iterable[tuple[Hashable, Hashable]],
) -> LayeredPreorder | StrictCycle:
    """Total preorder with ``a <= b`` for weak pairs and ``a < b`` for strict pairs.

    Such a preorder exists iff no cycle of the constraint graph uses a strict
    edge. The layering puts every item at the longest strict-path distance
    from below, so the layers are as few as the constraints allow.
    """
    carrier = list(carrier)
    idx = {a: i for i, a in enumerate(carrier)}
    n = len(carrier)
    succ: list[dict[int, bool]] = [dict() for _ in range(n)]
    for a, b in weak:
        succ[idx[a]].setdefault(idx[b], False)
    for a, b in strict:
        succ[idx[a]][idx[b]] = True

    comp = _strongly_connected(n, succ)
    for u in range(n):
        for v, is_strict in succ[u].items():
            if is_strict and comp[u] == comp[v]:
                path = _path(succ, v, u, comp)
                return StrictCycle(tuple(carrier[i] for i in [u] + path[:-1]))

    # longest path over the condensation; weak edges weigh 0, strict 1
    n_comp = max(comp, default=-1) + 1
    comp_succ: list[dict[int, int]] = [dict() for _ in range(n_comp)]
    indeg = [0] * n_comp
    for u in range(n):
        for v, is_strict in succ[u].items():
            cu, cv = comp[u], comp[v]
            if cu != cv:
                if cv not in comp_succ[cu]:
                    indeg[cv] += 1
                comp_succ[cu][cv] = max(comp_succ[cu].get(cv, 0), int(is_strict))
    level = [0] * n_comp
    ready = sorted(c for c in range(n_comp) if indeg[c] == 0)
    while ready:
        cu = ready.pop()
        for cv, w in comp_succ[cu].items():
            level[cv] = max(level[cv], level[cu] + w)
            indeg[cv] -= 1
            if indeg[cv] == 0:
                ready.append(cv)
    used = sorted(set(level))
    layers = [[] for _ in used]
    rank = {lv: i for i, lv in enumerate(used)}
    for i, a in enumerate(carrier):
        layers[rank[level[comp[i]]]].append(a)
    return LayeredPreorder(tuple(frozenset(layer) for layer in layers))


def _strongly_connected(n: int, succ: list[dict[int, bool]]) -> list[int]:
    """Tarjan's algorithm, iterative; returns a component id per node."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


def _path(succ: list[dict[int, bool]], start: int, goal: int, comp: list[int]) -> list[int]:
    """Shortest path from ``start`` to ``goal`` inside one component (BFS)."""
    prev = {start: None}
    queue = [start]
    for u in queue:
        if u == goal:
            break
        for v in succ[u]:
            if v not in prev and comp[v] == comp[start]:
                prev[v] = u
                queue.append(v)
    path = []
    u = goal
    while u is not None:
        path.append(u)
        u = prev[u]
    return path[::-1]


def ordered_partitions(items: Sequence) -> Iterator[tuple[frozenset, ...]]:
    """Every ordered partition of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in ordered_partitions(rest):
        # ``first`` joins an existing block or forms a new one at any position
        for i in range(len(part)):
            yield part[:i] + (part[i] | {first},) + part[i + 1:]
        for i in range(len(part) + 1):
            yield part[:i] + (frozenset([first]),) + part[i:]


# --------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class MenuPair:
    first: int
    second: int


@dataclass(frozen=True)
class ClosedFamily:
    menus: tuple[int, ...]


@dataclass(frozen=True)
class NoPreorder:
    cycle: tuple[int, ...] | None = None
    reason: str = "strict cycle"


@dataclass(frozen=True)
class LiftReport:
    liftable: bool
    witness: PartialChoice | None = None
    certificate: MenuPair | ClosedFamily | NoPreorder | None = None
    preorder: LayeredPreorder | None = None

    def __post_init__(self):
        if self.liftable != (self.witness is not None) or self.liftable == (self.certificate is not None):
            raise ValueError("a liftable report carries a witness, otherwise a certificate")

    def __bool__(self) -> bool:
        return self.liftable


# --------------------------------------------------------------------------
# (alpha)

def residue(c: PartialChoice, family: Iterable[int]) -> int:
    """Union of ``family`` minus the union of its rejection sets."""
    union = rejected = 0
    for m in family:
        union |= m
        rejected |= rejection(c, m)
    return union & ~rejected


def menu_unions(c: PartialChoice) -> list[int]:
    """Every union of a nonempty family of menus, smallest first."""
    seen = set()
    frontier = list(c.menus)
    seen.update(frontier)
    while frontier:
        nxt = []
        for u in frontier:
            for m in c.menus:
                v = u | m
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(seen, key=lambda m: (popcount(m), m))


def empty_residue_family(c: PartialChoice, closed_only: bool = True) -> tuple[int, ...] | None:
    """A nonempty family of menus with empty residue, or None.

    With ``closed_only`` the search runs over subset-closed families, which
    are exactly the relativized domains of unions of menus. Otherwise all
    nonempty subfamilies are enumerated.
    """
    if closed_only:
        for u in menu_unions(c):
            fam = relativized_domain(c, u)
            if residue(c, fam) == 0:
                return fam
        return None
    menus = c.menus
    for r in range(1, len(menus) + 1):
        for fam in itertools.combinations(menus, r):
            if residue(c, fam) == 0:
                return fam
    return None


def alpha_liftable(c: PartialChoice) -> LiftReport:
    chk = check_axiom(c, Axiom.ALPHA)
    if not chk:
        return LiftReport(False, certificate=MenuPair(*chk.witness))
    fam = empty_residue_family(c)
    if fam is not None:
        return LiftReport(False, certificate=ClosedFamily(fam))
    return LiftReport(True, witness=alpha_lift(c))


def alpha_lift(c: PartialChoice) -> PartialChoice:
    """Each menu keeps the items not rejected in any of its submenus."""
    sel = {}
    rej = [(m, rejection(c, m)) for m in c.menus]
    for a in total_menus(len(c.universe)):
        dropped = 0
        for m, r in rej:
            if m & ~a == 0:
                dropped |= r
        chosen = a & ~dropped
        if chosen == 0:
            raise LiftingError(f"no (alpha)-lifting: every item of {c.format_set(a)} is rejected below it")
        sel[a] = chosen
    out = PartialChoice(c.universe, sel)
    if not out.extends(c):
        raise LiftingError("choice violates (alpha); the construction does not extend it")
    return out


# --------------------------------------------------------------------------
# (beta)

def beta_liftable(c: PartialChoice) -> LiftReport:
    chk = check_axiom(c, Axiom.BETA)
    if not chk:
        return LiftReport(False, certificate=MenuPair(*chk.witness))
    return LiftReport(True, witness=beta_lift(c))


def _component_union(sets: list[int], seed: int) -> int:
    """Union of the intersection-graph component of the set containing ``seed``."""
    acc = 0
    for s in sets:
        if s & seed:
            acc = s
            break
    grown = True
    while grown:
        grown = False
        for s in sets:
            if s & acc and s & ~acc:
                acc |= s
                grown = True
    return acc


def beta_lift(c: PartialChoice) -> PartialChoice:
    """Lift a (beta)-consistent choice.

    The anchor of a menu is its least chosen item when the menu is in the
    domain, otherwise its least item. If the anchor is chosen from some
    submenu in the domain, the menu selects the union of the connected
    component (of overlapping choice sets of its submenus) through the anchor;
    else it selects the anchor alone.
    """
    if not check_axiom(c, Axiom.BETA):
        raise LiftingError("choice violates (beta)")
    sel = {}
    for a in total_menus(len(c.universe)):
        anchor = lowest_bit(c[a]) if a in c else lowest_bit(a)
        images = list(dict.fromkeys(c[m] for m in relativized_domain(c, a)))
        covered = 0
        for s in images:
            covered |= s
        sel[a] = _component_union(images, anchor) if anchor & covered else anchor
    out = PartialChoice(c.universe, sel)
    assert out.extends(c)
    return out


# --------------------------------------------------------------------------
# WARP

def choice_diagram(c: PartialChoice) -> EulerDiagram:
    """Euler diagram of the menus together with their choice sets."""
    family = list(dict.fromkeys(list(c.menus) + [c[m] for m in c.menus]))
    return euler_diagram(family)


def warp_constraints(c: PartialChoice, d: EulerDiagram) -> tuple[set, set]:
    """Weak and strict region pairs forced by the WARP-lifting conditions.

    Regions inside a choice set sit above every region of its menu; regions
    of the menu outside the choice set sit strictly below them.
    """
    weak, strict = set(), set()
    for m in c.menus:
        chosen = d.regions_within(c[m])
        for r in d.regions_within(m):
            for top in chosen:
                if r & c[m]:
                    weak.add((r, top))
                else:
                    strict.add((r, top))
    return weak, strict


def satisfies_warp_conditions(c: PartialChoice, d: EulerDiagram, p: LayeredPreorder) -> bool:
    """Check the two WARP-lifting conditions for a preorder on the regions."""
    if p.carrier != frozenset(d.regions):
        return False
    for m in c.menus:
        inside = d.regions_within(m)
        chosen = d.regions_within(c[m])
        for r in inside:
            for top in chosen:
                if not p.leq(r, top):
                    return False
        for r in p.maximal(envelope(d, m)):
            if r & ~c[m]:
                return False
    return True


def warp_liftable(c: PartialChoice) -> LiftReport:
    if not c.menus:
        p = LayeredPreorder(())
        return LiftReport(True, witness=warp_lift(c, p), preorder=p)
    d = choice_diagram(c)
    weak, strict = warp_constraints(c, d)
    found = find_layered_preorder(d.regions, weak, strict)
    if isinstance(found, StrictCycle):
        return LiftReport(False, certificate=NoPreorder(found.items))
    return LiftReport(True, witness=warp_lift(c, found), preorder=found)


def search_warp_preorder(c: PartialChoice, max_regions: int = 8) -> LayeredPreorder | None:
    """Exhaustive search over all layered preorders of the regions.

    Independent of the constraint-graph method in :func:`warp_liftable`;
    meant for cross-checking on small inputs.
    """
    if not c.menus:
        return LayeredPreorder(())
    d = choice_diagram(c)
    if len(d.regions) > max_regions:
        raise ResourceLimit(f"{len(d.regions)} regions exceed the cap of {max_regions}")
    for layers in ordered_partitions(d.regions):
        p = LayeredPreorder(layers)
        if satisfies_warp_conditions(c, d, p):
            return p
    return None


def warp_lift(c: PartialChoice, p: LayeredPreorder) -> PartialChoice:
    """Total WARP choice from a preorder on the regions.

    Items outside every menu and choice set are chosen whenever present;
    otherwise a menu selects its part of the top regions it meets.
    """
    d = choice_diagram(c) if c.menus else None
    if d is not None and not satisfies_warp_conditions(c, d, p):
        raise LiftingError("preorder does not satisfy the WARP-lifting conditions")
    support = d.support if d is not None else 0
    sel = {}
    for b in total_menus(len(c.universe)):
        outside = b & ~support
        if outside:
            sel[b] = outside
            continue
        top = 0
        for r in p.maximal(envelope(d, b)):
            top |= r
        sel[b] = top & b
    out = PartialChoice(c.universe, sel)
    assert out.extends(c)
    return out


def preorder_from_total_choice(c: PartialChoice, d: EulerDiagram) -> LayeredPreorder:
    """Region preorder read off a total WARP choice: ``E <= F`` iff ``c(E | F)`` meets ``F``."""
    if not c.is_total():
        raise ChoiceError("expected a total choice")
    return LayeredPreorder.from_relation(d.regions, lambda e, f: c[e | f] & f != 0)


def lift(c: PartialChoice, axiom: Axiom) -> LiftReport:
    if axiom is Axiom.ALPHA:
        return alpha_liftable(c)
    if axiom is Axiom.BETA:
        return beta_liftable(c)
    if axiom is Axiom.WARP:
        return warp_liftable(c)
    raise ValueError(f"lifting is not supported for {axiom.value}")


def element_names(c: PartialChoice, m: int) -> list[str]:
    return [c.universe[i] for i in bits(m)]
