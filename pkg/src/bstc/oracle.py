"""Brute-force reference procedures for testing.

Nothing here reuses the solver's algorithms: axioms are re-stated as plain
predicates, total choices are enumerated menu by menu, and formulae are
compiled to Python expressions over integer bitmasks and evaluated on every
small assignment. Only the public value types are shared.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .choice import Axiom, PartialChoice
from .decider import FiniteModel, Semantics
from .syntax import (
    And, Atom, Choice, Difference, Empty, Formula, Iff, Implies, Intersection, Not, Or,
    Relation, SetVar, Singleton, Term, Union, atoms_of, subterms,
)

HARD_MAX_UNIVERSE = 4


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_universe: int = 3
    max_assignments: int = 50_000_000

    def __post_init__(self):
        if not 1 <= self.max_universe <= HARD_MAX_UNIVERSE:
            raise ValueError(f"max_universe must lie in 1..{HARD_MAX_UNIVERSE}")
        if self.max_assignments < 1:
            raise ValueError("max_assignments must be positive")


# --------------------------------------------------------------------------
# axioms as predicates on one ordered pair of menus

def _sub(a: int, b: int) -> bool:
    return a & ~b == 0


def _pair_ok(axiom: Axiom, a: int, ca: int, b: int, cb: int) -> bool:
    if axiom is Axiom.ALPHA:
        return not _sub(a, b) or _sub(a & cb, ca)
    if axiom is Axiom.BETA:
        return not (_sub(a, b) and ca & cb) or _sub(ca, cb)
    if axiom is Axiom.WARP:
        return not (_sub(a, b) and a & cb) or ca == a & cb
    raise ValueError(axiom)


def _union_ok(axiom: Axiom, a: int, ca: int, b: int, cb: int, cu: int) -> bool:
    if axiom is Axiom.GAMMA:
        return _sub(ca & cb, cu)
    if axiom is Axiom.RHO:
        return not (ca & ~cu) or bool(b & cu)
    raise ValueError(axiom)


def _consistent_with(axiom: Axiom | None, m: int, cm: int, assigned: dict[int, int]) -> bool:
    """Check every axiom instance that becomes decidable once ``m`` is assigned."""
    if axiom is None:
        return True
    if axiom in (Axiom.GAMMA, Axiom.RHO):
        known = dict(assigned)
        known[m] = cm
        for a, ca in known.items():
            for b, cb in known.items():
                u = a | b
                if u in known and m in (a, b, u):
                    if not _union_ok(axiom, a, ca, b, cb, known[u]):
                        return False
        return True
    if not _pair_ok(axiom, m, cm, m, cm):
        return False
    for a, ca in assigned.items():
        if not (_pair_ok(axiom, a, ca, m, cm) and _pair_ok(axiom, m, cm, a, ca)):
            return False
    return True


def _nonempty_subsets(m: int) -> list[int]:
    out = []
    s = m
    while s:
        out.append(s)
        s = (s - 1) & m
    return sorted(out)


def _extensions(n: int, fixed: dict[int, int], axiom: Axiom | None) -> Iterator[dict[int, int]]:
    """Total choices on ``n`` elements agreeing with ``fixed`` and satisfying ``axiom``."""
    menus = sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m))
    assigned: dict[int, int] = {}

    def rec(i: int) -> Iterator[dict[int, int]]:
        if i == len(menus):
            yield dict(assigned)
            return
        m = menus[i]
        options = [fixed[m]] if m in fixed else _nonempty_subsets(m)
        for cm in options:
            if _consistent_with(axiom, m, cm, assigned):
                assigned[m] = cm
                yield from rec(i + 1)
                del assigned[m]

    yield from rec(0)


def enumerate_total_choices(universe: Sequence[str], axiom: Axiom | None = None) -> Iterator[PartialChoice]:
    universe = tuple(universe)
    if len(universe) > HARD_MAX_UNIVERSE:
        raise BudgetExceeded(f"universe of size {len(universe)} exceeds {HARD_MAX_UNIVERSE}")
    for sel in _extensions(len(universe), {}, axiom):
        yield PartialChoice(universe, sel)


def oracle_liftable(c: PartialChoice, axiom: Axiom) -> bool:
    n = len(c.universe)
    if n > HARD_MAX_UNIVERSE:
        raise BudgetExceeded(f"universe of size {n} exceeds {HARD_MAX_UNIVERSE}")
    fixed = {m: c[m] for m in c.menus}
    return next(_extensions(n, fixed, axiom), None) is not None


# --------------------------------------------------------------------------
# formulae

class _NeedChoice(Exception):
    def __init__(self, menu: int):
        self.menu = menu


class _EmptyArgument(Exception):
    pass


def _compile(f: Formula, set_names: list[str], ivar_names: list[str]) -> Callable:
    """Python function ``(sets, elems, choose) -> bool`` for ``f``."""
    cache: dict[Term, str] = {}
    lines: list[str] = []

    def term(t: Term) -> str:
        if t in cache:
            return cache[t]
        if isinstance(t, SetVar):
            code = f"S[{set_names.index(t.name)}]"
        elif isinstance(t, Empty):
            code = "0"
        elif isinstance(t, Singleton):
            code = f"E[{ivar_names.index(t.var)}]"
        elif isinstance(t, Union):
            code = f"({term(t.left)} | {term(t.right)})"
        elif isinstance(t, Intersection):
            code = f"({term(t.left)} & {term(t.right)})"
        elif isinstance(t, Difference):
            code = f"({term(t.left)} & ~{term(t.right)})"
        elif isinstance(t, Choice):
            arg = term(t.arg)
            name = f"t{len(lines)}"
            lines.append(f"{name} = ch({arg})")
            code = name
        else:
            raise TypeError(t)
        cache[t] = code
        return code

    def form(g: Formula) -> str:
        if isinstance(g, Atom):
            left, right = term(g.left), term(g.right)
            if g.relation is Relation.EQ:
                return f"({left} == {right})"
            return f"(({left} & ~{right}) == 0)"
        if isinstance(g, Not):
            return f"(not {form(g.arg)})"
        if isinstance(g, And):
            return f"({form(g.left)} and {form(g.right)})"
        if isinstance(g, Or):
            return f"({form(g.left)} or {form(g.right)})"
        if isinstance(g, Implies):
            return f"((not {form(g.left)}) or {form(g.right)})"
        if isinstance(g, Iff):
            return f"({form(g.left)} == {form(g.right)})"
        raise TypeError(g)

    # choice values are computed eagerly so that every needed menu is known
    # before the propositional structure short-circuits
    body = form(f)
    src = "def _f(S, E, ch):\n"
    for line in lines:
        src += f"    {line}\n"
    src += f"    return {body}\n"
    ns: dict = {}
    exec(src, ns)
    return ns["_f"]


@dataclass(frozen=True)
class OracleResult:
    """``sat`` is definitive; its absence only means no model within the budget."""

    sat: bool
    model: FiniteModel | None
    universe_size: int | None
    explored: int

    def __str__(self) -> str:
        return "SAT" if self.sat else "NoModelWithinBudget"


def _axiom_of(s: Semantics) -> Axiom | None:
    return {Semantics.UNRESTRICTED: None, Semantics.ALPHA: Axiom.ALPHA,
            Semantics.BETA: Axiom.BETA, Semantics.WARP: Axiom.WARP}[s]


def oracle_sat(f: Formula, s: Semantics, budget: OracleBudget = OracleBudget()) -> OracleResult:
    """Search every model with at most ``budget.max_universe`` elements.

    Choice values are only branched on at the menus the formula evaluates;
    a satisfying partial choice is accepted when some total choice extends it
    and satisfies the semantics' axiom. Choice applied to the empty set makes
    an assignment inadmissible.
    """
    set_names = sorted({t.name for a in atoms_of(f) for side in (a.left, a.right)
                        for t in subterms(side) if isinstance(t, SetVar)})
    ivar_names = sorted({t.var for a in atoms_of(f) for side in (a.left, a.right)
                         for t in subterms(side) if isinstance(t, Singleton)})
    fn = _compile(f, set_names, ivar_names)
    axiom = _axiom_of(s)
    explored = 0
    lift_memo: dict[tuple, dict[int, int] | None] = {}

    for n in range(1, budget.max_universe + 1):
        full = (1 << n) - 1
        # individual variables up to a permutation of the universe: each new
        # variable either reuses an element or takes the next fresh one
        for elems in _canonical_elements(len(ivar_names), n):
            for sets in itertools.product(range(full + 1), repeat=len(set_names)):
                explored += 1
                if explored > budget.max_assignments:
                    raise BudgetExceeded(f"more than {budget.max_assignments} assignments")
                found = _search_choice(fn, sets, elems, n, axiom, lift_memo)
                if found is not None:
                    model = _as_model(n, set_names, ivar_names, sets, elems, found)
                    return OracleResult(True, model, n, explored)
    return OracleResult(False, None, None, explored)


def _canonical_elements(k: int, n: int) -> Iterator[tuple[int, ...]]:
    def rec(prefix: tuple[int, ...], used: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == k:
            yield prefix
            return
        for e in range(min(used + 1, n)):
            yield from rec(prefix + (e,), max(used, e + 1))

    for elems in rec((), 0):
        yield tuple(1 << e for e in elems)


def _search_choice(fn, sets, elems, n, axiom, memo) -> dict[int, int] | None:
    partial: dict[int, int] = {}

    def ch(arg: int) -> int:
        if arg == 0:
            raise _EmptyArgument()
        if arg not in partial:
            raise _NeedChoice(arg)
        return partial[arg]

    def rec() -> dict[int, int] | None:
        try:
            ok = fn(sets, elems, ch)
        except _EmptyArgument:
            return None
        except _NeedChoice as need:
            for cm in _nonempty_subsets(need.menu):
                partial[need.menu] = cm
                got = rec()
                if got is not None:
                    return got
                del partial[need.menu]
            return None
        if not ok:
            return None
        key = (n, axiom, tuple(sorted(partial.items())))
        if key not in memo:
            memo[key] = next(_extensions(n, partial, axiom), None)
        return memo[key]

    return rec()


def _as_model(n, set_names, ivar_names, sets, elems, choice: dict[int, int]) -> FiniteModel:
    universe = tuple(f"e{i}" for i in range(n))

    def names(m: int) -> frozenset[str]:
        return frozenset(universe[i] for i in range(n) if m >> i & 1)

    individuals = {v: universe[e.bit_length() - 1] for v, e in zip(ivar_names, elems)}
    return FiniteModel(
        universe=universe,
        individuals=individuals,
        sets={v: names(m) for v, m in zip(set_names, sets)},
        choice=PartialChoice(universe, choice),
        domain=(),
        rule="oracle",
    )
