"""Finite choice correspondences, consistency axioms and Euler diagrams.

Subsets of the universe are Python ints used as bit vectors: element ``i``
of ``universe`` is bit ``1 << i``. Menus and choice sets are such masks.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple


class ChoiceError(ValueError):
    """Invalid choice data."""


class ResourceLimit(RuntimeError):
    """A configured search cap was exceeded."""


class Axiom(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    RHO = "rho"
    WARP = "warp"


def popcount(m: int) -> int:
    return bin(m).count("1")


def bits(m: int) -> Iterator[int]:
    """Indices of the set bits of ``m``, ascending."""
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def submasks(m: int) -> Iterator[int]:
    """Nonempty submasks of ``m``."""
    s = m
    while s:
        yield s
        s = (s - 1) & m


def lowest_bit(m: int) -> int:
    return m & -m


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True, eq=False)
class PartialChoice:
    """A choice correspondence on a finite universe.

    ``selection`` maps each menu (nonempty mask) to its nonempty choice set.
    """

    universe: tuple[str, ...]
    selection: Mapping[int, int]
    _menus: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.universe)
        if len(set(self.universe)) != n:
            raise ChoiceError("duplicate element in universe")
        full = (1 << n) - 1
        for menu, chosen in self.selection.items():
            if menu <= 0 or menu & ~full:
                raise ChoiceError(f"menu {menu:#b} is empty or outside the universe")
            if chosen == 0:
                raise ChoiceError(f"empty selection for menu {self.format_set(menu)}")
            if chosen & ~menu:
                raise ChoiceError(f"selection not contained in menu {self.format_set(menu)}")
        object.__setattr__(self, "selection", dict(self.selection))
        object.__setattr__(self, "_menus", tuple(sorted(self.selection, key=lambda m: (popcount(m), m))))

    # -- construction helpers

    @classmethod
    def from_sets(cls, universe: Iterable[str], selection: Mapping[Iterable[str], Iterable[str]] | Iterable[tuple[Iterable[str], Iterable[str]]]) -> "PartialChoice":
        universe = tuple(universe)
        pos = {e: i for i, e in enumerate(universe)}
        items = selection.items() if isinstance(selection, Mapping) else selection
        sel: dict[int, int] = {}
        for menu, chosen in items:
            m = _to_mask(pos, menu)
            if m in sel:
                raise ChoiceError(f"duplicate menu {sorted(menu)}")
            sel[m] = _to_mask(pos, chosen)
        return cls(universe, sel)

    @classmethod
    def from_json(cls, data) -> "PartialChoice":
        """Build from the choice-data JSON object (or its text)."""
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ChoiceError(f"invalid JSON: {e}") from None
        if not isinstance(data, dict):
            raise ChoiceError("$: expected an object")
        universe = data.get("universe")
        if not isinstance(universe, list) or not all(isinstance(e, str) for e in universe):
            raise ChoiceError("$.universe: expected a list of strings")
        if len(set(universe)) != len(universe):
            raise ChoiceError("$.universe: duplicate element")
        entries = data.get("choice")
        if not isinstance(entries, list):
            raise ChoiceError("$.choice: expected a list")
        pos = {e: i for i, e in enumerate(universe)}
        sel: dict[int, int] = {}
        for k, entry in enumerate(entries):
            where = f"$.choice[{k}]"
            if not isinstance(entry, dict):
                raise ChoiceError(f"{where}: expected an object")
            masks = []
            for key in ("menu", "selected"):
                vals = entry.get(key)
                if not isinstance(vals, list) or not all(isinstance(v, str) for v in vals):
                    raise ChoiceError(f"{where}.{key}: expected a list of strings")
                for v in vals:
                    if v not in pos:
                        raise ChoiceError(f"{where}.{key}: unknown element {v!r}")
                masks.append(_to_mask(pos, vals))
            menu, chosen = masks
            if menu == 0:
                raise ChoiceError(f"{where}.menu: empty menu")
            if menu in sel:
                raise ChoiceError(f"{where}.menu: duplicate menu")
            if chosen == 0:
                raise ChoiceError(f"{where}.selected: empty selection")
            if chosen & ~menu:
                raise ChoiceError(f"{where}.selected: not a subset of the menu")
            sel[menu] = chosen
        return cls(tuple(universe), sel)

    def to_json(self) -> dict:
        return {
            "universe": list(self.universe),
            "choice": [
                {"menu": self.names(m), "selected": self.names(self.selection[m])}
                for m in self.menus
            ],
        }

    # -- queries

    @property
    def menus(self) -> tuple[int, ...]:
        """Menus ordered by size, then by mask value."""
        return self._menus

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    def __getitem__(self, menu: int) -> int:
        return self.selection[menu]

    def __contains__(self, menu: int) -> bool:
        return menu in self.selection

    def __len__(self) -> int:
        return len(self.selection)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialChoice):
            return NotImplemented
        return self.universe == other.universe and self.selection == other.selection

    def __hash__(self) -> int:
        return hash((self.universe, frozenset(self.selection.items())))

    def is_total(self) -> bool:
        return len(self.selection) == self.full

    def mask(self, names: Iterable[str]) -> int:
        return _to_mask({e: i for i, e in enumerate(self.universe)}, names)

    def names(self, m: int) -> list[str]:
        return [self.universe[i] for i in bits(m)]

    def format_set(self, m: int) -> str:
        return "{" + ",".join(self.names(m)) + "}"

    def restrict(self, menus: Iterable[int]) -> "PartialChoice":
        return PartialChoice(self.universe, {m: self.selection[m] for m in menus})

    def extends(self, other: "PartialChoice") -> bool:
        """True iff ``self`` agrees with ``other`` on every menu of ``other``."""
        return all(self.selection.get(m) == c for m, c in other.selection.items())

    def __repr__(self) -> str:
        body = ", ".join(f"{self.format_set(m)}->{self.format_set(self.selection[m])}" for m in self.menus)
        return f"PartialChoice({list(self.universe)}, {body})"


def _to_mask(pos: Mapping[str, int], names: Iterable[str]) -> int:
    m = 0
    for e in names:
        try:
            m |= 1 << pos[e]
        except KeyError:
            raise ChoiceError(f"unknown element {e!r}") from None
    return m


def rejection(c: PartialChoice, menu: int) -> int:
    """Rejected items of a menu: ``menu`` minus its choice set (possibly empty)."""
    if menu not in c:
        raise KeyError(f"{c.format_set(menu)} is not a menu")
    return menu & ~c[menu]


# --------------------------------------------------------------------------
# axioms

class AxiomCheck(NamedTuple):
    holds: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _alpha(ca: int, a: int, cb: int) -> bool:
    return is_subset(a & cb, ca)


def _beta(ca: int, cb: int) -> bool:
    return ca & cb == 0 or is_subset(ca, cb)


def _warp(ca: int, a: int, cb: int) -> bool:
    return a & cb == 0 or ca == a & cb


def _nested_pairs(c: PartialChoice) -> Iterator[tuple[int, int]]:
    """All pairs (A, B) of menus with A a subset of B, A == B included."""
    sel = c.selection
    menus = c.menus
    for b in menus:
        if (1 << popcount(b)) < len(menus):
            for a in submasks(b):
                if a in sel:
                    yield a, b
        else:
            for a in menus:
                if a & ~b == 0:
                    yield a, b


def check_axiom(c: PartialChoice, axiom: Axiom) -> AxiomCheck:
    """Check ``axiom`` over all pairs of menus; return a violating pair if any.

    For (gamma) and (rho) a pair is only constrained when the union of the two
    menus is itself a menu.
    """
    sel = c.selection
    if axiom in (Axiom.ALPHA, Axiom.BETA, Axiom.WARP):
        for a, b in _nested_pairs(c):
            ca, cb = sel[a], sel[b]
            if axiom is Axiom.ALPHA:
                ok = _alpha(ca, a, cb)
            elif axiom is Axiom.BETA:
                ok = _beta(ca, cb)
            else:
                ok = _warp(ca, a, cb)
            if not ok:
                return AxiomCheck(False, (a, b))
        return AxiomCheck(True)
    for a in c.menus:
        for b in c.menus:
            u = a | b
            if u not in sel:
                continue
            ca, cb, cu = sel[a], sel[b], sel[u]
            if axiom is Axiom.GAMMA:
                ok = is_subset(ca & cb, cu)
            else:
                ok = ca & ~cu == 0 or b & cu != 0
            if not ok:
                return AxiomCheck(False, (a, b))
    return AxiomCheck(True)


def rejection_monotone(c: PartialChoice) -> bool:
    """Nested menus have nested rejection sets."""
    return all(is_subset(rejection(c, a), rejection(c, b)) for a, b in _nested_pairs(c))


def warp_equals_alpha_and_beta(c: PartialChoice) -> bool:
    if not c.is_total():
        raise ChoiceError("expected a total choice")
    warp = check_axiom(c, Axiom.WARP).holds
    return warp == (check_axiom(c, Axiom.ALPHA).holds and check_axiom(c, Axiom.BETA).holds)


# --------------------------------------------------------------------------
# rationalizability

@dataclass(frozen=True)
class Rationalization:
    rationalizable: bool
    relation: frozenset[tuple[str, str]] | None = None

    def __bool__(self) -> bool:
        return self.rationalizable


def maximal(relation: Iterable[tuple[int, int]], menu: int) -> int:
    """Maximal elements of ``menu`` (mask) for a relation on element indices."""
    rel = set(relation)
    out = 0
    for a in bits(menu):
        beaten = any((b, a) in rel and (a, b) not in rel for b in bits(menu))
        if not beaten:
            out |= 1 << a
    return out


def is_rationalizable(c: PartialChoice) -> Rationalization:
    """Decide whether some binary relation has ``c(B)`` as its maximal elements.

    Only the strict part of a relation matters for maximality, so we search
    an asymmetric relation P: pairs ``(b, a)`` with ``a`` chosen from a menu
    containing ``b`` are forbidden, and every rejected ``a`` in a menu ``B``
    needs some ``b`` in ``B`` with ``b P a``. Pairs where both orientations are
    allowed are decided by backtracking.
    """
    n = len(c.universe)
    forbidden = set()
    for m in c.menus:
        for a in bits(c[m]):
            for b in bits(m):
                if b != a:
                    forbidden.add((b, a))
    # requirement clauses: for rejected a in menu m, one of (b, a) must hold
    clauses = []
    for m in c.menus:
        for a in bits(rejection(c, m)):
            options = [(b, a) for b in bits(m) if b != a and (b, a) not in forbidden]
            if not options:
                return Rationalization(False)
            clauses.append(options)
    chosen: set[tuple[int, int]] = set()

    def solve(i: int) -> bool:
        if i == len(clauses):
            return True
        if any(p in chosen for p in clauses[i]):
            return solve(i + 1)
        for b, a in clauses[i]:
            if (a, b) in chosen:
                continue
            chosen.add((b, a))
            if solve(i + 1):
                return True
            chosen.discard((b, a))
        return False

    if not solve(0):
        return Rationalization(False)
    rel = frozenset((c.universe[b], c.universe[a]) for b, a in chosen)
    rel |= frozenset((e, e) for e in c.universe[:n])
    return Rationalization(True, rel)


# --------------------------------------------------------------------------
# Euler diagrams

@dataclass(frozen=True)
class EulerDiagram:
    """Cells of the Venn/Euler partition of the union of ``family``.

    ``membership[i]`` lists the indices of the family members containing
    ``regions[i]``.
    """

    family: tuple[int, ...]
    regions: tuple[int, ...]
    membership: tuple[frozenset[int], ...]

    @property
    def support(self) -> int:
        out = 0
        for r in self.regions:
            out |= r
        return out

    def regions_within(self, s: int) -> tuple[int, ...]:
        return tuple(r for r in self.regions if r & ~s == 0)


def euler_diagram(family: Iterable[int]) -> EulerDiagram:
    family = tuple(family)
    if not family:
        raise ValueError("family must be nonempty")
    support = 0
    for s in family:
        support |= s
    cells: dict[frozenset[int], int] = {}
    for e in bits(support):
        sig = frozenset(i for i, s in enumerate(family) if s >> e & 1)
        cells[sig] = cells.get(sig, 0) | (1 << e)
    order = sorted(cells, key=lambda sig: lowest_bit(cells[sig]))
    d = EulerDiagram(family, tuple(cells[s] for s in order), tuple(order))
    covered = 0
    for r in d.regions:
        assert r and r & covered == 0
        covered |= r
    assert covered == support
    return d


def envelope(d: EulerDiagram, a: int) -> tuple[int, ...]:
    """Regions of ``d`` that meet ``a``."""
    return tuple(r for r in d.regions if r & a)


# --------------------------------------------------------------------------
# domains

def relativized_domain(c: PartialChoice, a: int) -> tuple[int, ...]:
    """Menus of ``c`` contained in ``a``."""
    return tuple(m for m in c.menus if m & ~a == 0)


def is_subset_closed(c: PartialChoice, family: Iterable[int]) -> bool:
    family = set(family)
    if not family <= set(c.menus):
        raise ValueError("family must consist of menus")
    union = 0
    for m in family:
        union |= m
    return all(m in family for m in relativized_domain(c, union))


def total_menus(n: int) -> range:
    """All nonempty subsets of an ``n``-element universe as masks."""
    return range(1, 1 << n)
