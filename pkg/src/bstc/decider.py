"""Satisfiability of BSTC formulae under the four choice semantics.

Pipeline: flatten and complete the formula, replace every choice term
``c(T_i)`` by a fresh set variable ``C__i`` (adding the (alpha)- or
(beta)-conditions for those semantics), and decide the resulting choice-free
formula by searching over atom valuations and ample sets of places. A
solution yields a finite model whose choice is defined on the menus named by
the choice terms; the lifting constructions extend it to all menus.

Under WARP no extra conditions are added. Instead every theory-consistent
atom valuation is tested by looking for witness places whose induced partial
choice is WARP-liftable.
"""

from __future__ import annotations

import enum
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .choice import (
    Axiom, ChoiceError, PartialChoice, ResourceLimit, bits, check_axiom, popcount, total_menus,
)
from .lifting import LiftingError, alpha_lift, beta_lift, warp_liftable
from .normalizer import evaluate_prop, is_choice_flat, normalize, skeleton
from .places import AmpleCandidate, Place, PlaceSpace, pattern_mask
from .syntax import (
    EMPTY, And, Atom, Choice, Difference, Empty, Formula, FormulaIndex, Iff, Implies,
    Intersection, Not, Or, PropVar, Relation, SetVar, Singleton, Term, Union, build_index, conj,
    eq, map_terms, replace_subterm, sub, union_of,
)

CHOICE_PREFIX = "C__"
DEFAULT_MAX_ALPHA_K = 10
DEFAULT_VERIFY_CAP = 12


class Semantics(enum.Enum):
    UNRESTRICTED = "unrestricted"
    ALPHA = "alpha"
    BETA = "beta"
    WARP = "warp"

    @property
    def axioms(self) -> tuple[Axiom, ...]:
        return {
            Semantics.UNRESTRICTED: (),
            Semantics.ALPHA: (Axiom.ALPHA,),
            Semantics.BETA: (Axiom.BETA,),
            Semantics.WARP: (Axiom.WARP,),
        }[self]


# --------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class FiniteModel:
    """A finite set assignment.

    ``choice`` is total once the model is finished; ``domain`` lists the
    menus named by choice terms of the formula, and ``rule`` the construction
    used to extend the choice beyond them.
    """

    universe: tuple[str, ...]
    individuals: Mapping[str, str]
    sets: Mapping[str, frozenset[str]]
    choice: PartialChoice
    domain: tuple[int, ...] = ()
    rule: str | None = None

    def mask(self, names: Iterable[str]) -> int:
        return self.choice.mask(names)

    def to_json(self, full_listing_cap: int = 8) -> dict:
        c = self.choice
        out = {
            "universe": list(self.universe),
            "individuals": dict(sorted(self.individuals.items())),
            "sets": {k: sorted(v, key=self.universe.index) for k, v in sorted(self.sets.items())},
            "choice": {
                "rule": self.rule,
                "domain": [{"menu": c.names(m), "selected": c.names(c[m])} for m in self.domain],
            },
        }
        if c.is_total() and len(self.universe) <= full_listing_cap:
            out["choice"]["full"] = PartialChoice.to_json(c)["choice"]
        return out

    @classmethod
    def from_json(cls, data) -> "FiniteModel":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        universe = tuple(data["universe"])
        ch = data["choice"]
        domain_part = PartialChoice.from_json({"universe": list(universe), "choice": ch["domain"]})
        domain = tuple(domain_part.mask(e["menu"]) for e in ch["domain"])
        rule = ch.get("rule")
        if "full" in ch:
            choice = PartialChoice.from_json({"universe": list(universe), "choice": ch["full"]})
        else:
            choice = lift_with_rule(domain_part, rule)
        return cls(
            universe=universe,
            individuals=dict(data.get("individuals", {})),
            sets={k: frozenset(v) for k, v in data.get("sets", {}).items()},
            choice=choice,
            domain=domain,
            rule=rule,
        )


def identity_lift(c: PartialChoice) -> PartialChoice:
    """Choose the whole menu wherever ``c`` is undefined."""
    sel = {m: (c[m] if m in c else m) for m in total_menus(len(c.universe))}
    return PartialChoice(c.universe, sel)


def lift_with_rule(c: PartialChoice, rule: str | None) -> PartialChoice:
    if rule in (None, "identity"):
        return identity_lift(c)
    if rule == "alpha":
        return alpha_lift(c)
    if rule == "beta":
        return beta_lift(c)
    if rule == "warp":
        report = warp_liftable(c)
        if not report.liftable:
            raise LiftingError("partial choice is not WARP-liftable")
        return report.witness
    raise ValueError(f"unknown lifting rule {rule!r}")


_RULES = {
    Semantics.UNRESTRICTED: "identity",
    Semantics.ALPHA: "alpha",
    Semantics.BETA: "beta",
    Semantics.WARP: "warp",
}


def evaluate_term(t: Term, m: FiniteModel, pos: Mapping[str, int] | None = None) -> int:
    """Interpretation of ``t`` in ``m`` as a mask over ``m.universe``."""
    if pos is None:
        pos = {e: i for i, e in enumerate(m.universe)}
    if isinstance(t, SetVar):
        return sum(1 << pos[e] for e in m.sets[t.name])
    if isinstance(t, Empty):
        return 0
    if isinstance(t, Singleton):
        return 1 << pos[m.individuals[t.var]]
    if isinstance(t, Union):
        return evaluate_term(t.left, m, pos) | evaluate_term(t.right, m, pos)
    if isinstance(t, Intersection):
        return evaluate_term(t.left, m, pos) & evaluate_term(t.right, m, pos)
    if isinstance(t, Difference):
        return evaluate_term(t.left, m, pos) & ~evaluate_term(t.right, m, pos)
    if isinstance(t, Choice):
        arg = evaluate_term(t.arg, m, pos)
        if arg == 0:
            raise ChoiceError("choice applied to the empty set")
        if arg not in m.choice:
            raise ChoiceError(f"choice undefined on {m.choice.format_set(arg)}")
        return m.choice[arg]
    raise TypeError(f"not a term: {t!r}")


def evaluate_formula(f: Formula, m: FiniteModel) -> bool:
    pos = {e: i for i, e in enumerate(m.universe)}

    def ev(g: Formula) -> bool:
        if isinstance(g, Atom):
            left = evaluate_term(g.left, m, pos)
            right = evaluate_term(g.right, m, pos)
            return left == right if g.relation is Relation.EQ else left & ~right == 0
        if isinstance(g, Not):
            return not ev(g.arg)
        if isinstance(g, And):
            return ev(g.left) and ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) or ev(g.right)
        if isinstance(g, Implies):
            return (not ev(g.left)) or ev(g.right)
        if isinstance(g, Iff):
            return ev(g.left) == ev(g.right)
        raise TypeError(f"not a formula: {g!r}")

    return ev(f)


def verify_model(m: FiniteModel, f: Formula, s: Semantics, cap: int = DEFAULT_VERIFY_CAP) -> bool:
    """Evaluate ``f`` in ``m`` and check the axioms of ``s`` on every menu."""
    if len(m.universe) > cap:
        raise ResourceLimit(f"model of size {len(m.universe)} exceeds the verification cap {cap}")
    if not m.choice.is_total():
        return False
    idx = build_index(f)
    if any(v not in m.individuals for v in idx.individual_vars):
        return False
    if any(v not in m.sets for v in idx.set_vars):
        return False
    try:
        if not evaluate_formula(f, m):
            return False
    except ChoiceError:
        return False
    return all(check_axiom(m.choice, a).holds for a in s.axioms)


# --------------------------------------------------------------------------
# reductions

@dataclass(frozen=True)
class Reduction:
    """Choice-free formula equisatisfiable with a complete choice-flat one."""

    formula: Formula
    base: Formula
    axiom_conditions: tuple[Formula, ...]
    nonempty_conditions: tuple[Formula, ...]
    choice_vars: Mapping[Choice, SetVar]


def _require_flat(f: Formula) -> None:
    if not is_choice_flat(f):
        raise ValueError("formula is not choice-flat; normalize it first")


def _choice_vars(f: Formula) -> dict[Choice, SetVar]:
    chs = build_index(f).choice_terms
    return {ch: SetVar(f"{CHOICE_PREFIX}{i}") for i, ch in enumerate(chs, 1)}


def reduce_unrestricted(f: Formula) -> Reduction:
    """Read every choice term as an unstructured set variable."""
    _require_flat(f)
    cv = _choice_vars(f)
    base = map_terms(f, lambda t: replace_subterm(t, cv)) if cv else f
    return Reduction(base, base, (), (), cv)


def _pairs(cv: Mapping[Choice, SetVar]) -> Iterator[tuple[Term, SetVar, Term, SetVar]]:
    items = list(cv.items())
    for (ci, vi), (cj, vj) in itertools.product(items, repeat=2):
        yield ci.arg, vi, cj.arg, vj


def reduce_beta(f: Formula) -> Reduction:
    red = reduce_unrestricted(f)
    conds = tuple(
        Implies(And(sub(ti, tj), Not(eq(Intersection(ci, cj), EMPTY))), sub(ci, cj))
        for ti, ci, tj, cj in _pairs(red.choice_vars)
    )
    formula = conj(red.base, *conds) if conds else red.base
    return Reduction(formula, red.base, conds, (), red.choice_vars)


def reduce_alpha(f: Formula, max_k: int = DEFAULT_MAX_ALPHA_K) -> Reduction:
    red = reduce_unrestricted(f)
    cv = red.choice_vars
    k = len(cv)
    if k > max_k:
        raise ResourceLimit(f"{k} choice terms exceed the (alpha) cap of {max_k}")
    conds = tuple(
        Implies(sub(ti, tj), sub(Intersection(ti, cj), ci))
        for ti, ci, tj, cj in _pairs(cv)
    )
    items = list(cv.items())
    nonempty = []
    for r in range(1, k + 1):
        for group in itertools.combinations(items, r):
            union = union_of(*(ch.arg for ch, _ in group))
            rejected = union_of(*(Difference(ch.arg, v) for ch, v in group))
            nonempty.append(Not(eq(Difference(union, rejected), EMPTY)))
    nonempty = tuple(nonempty)
    extra = conds + nonempty
    formula = conj(red.base, *extra) if extra else red.base
    return Reduction(formula, red.base, conds, nonempty, cv)


def reduce(f: Formula, s: Semantics, max_alpha_k: int = DEFAULT_MAX_ALPHA_K) -> Reduction:
    if s is Semantics.ALPHA:
        return reduce_alpha(f, max_alpha_k)
    if s is Semantics.BETA:
        return reduce_beta(f)
    return reduce_unrestricted(f)


# --------------------------------------------------------------------------
# verdicts

class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    RESOURCE_LIMIT = "resource-limit"


@dataclass(frozen=True)
class Verdict:
    status: Status
    model: FiniteModel | None = None
    reason: str | None = None
    stats: Mapping[str, object] = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT

    def __str__(self) -> str:
        return self.status.value if self.reason is None else f"{self.status.value}: {self.reason}"


# --------------------------------------------------------------------------
# search

def set_partitions(items: Sequence[str]) -> Iterator[list[tuple[str, ...]]]:
    """Partitions of ``items``, finest first."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


def _partitions_finest_first(items: Sequence[str]) -> list[list[tuple[str, ...]]]:
    parts = [sorted(tuple(sorted(g)) for g in p) for p in set_partitions(items)]
    return sorted(parts, key=lambda p: (-len(p), p))


@dataclass
class Solution:
    """Places of a model: designated ones per variable group, then witnesses."""

    groups: list[tuple[str, ...]]
    designated: list[int]
    witnesses: list[int]

    @property
    def codes(self) -> list[int]:
        return self.designated + self.witnesses


def _top_conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        return _top_conjuncts(f.left) + _top_conjuncts(f.right)
    return [f]


def _prop_vars(p: Formula) -> list[int]:
    out: list[int] = []
    stack = [p]
    while stack:
        g = stack.pop()
        if isinstance(g, PropVar):
            out.append(g.index)
        elif isinstance(g, Not):
            stack.append(g.arg)
        else:
            stack.append(g.right)
            stack.append(g.left)
    return sorted(set(out), key=out.index)


class _Search:
    """DPLL over the atoms of a choice-free formula with an exact theory check.

    A partial valuation is theory-consistent iff some set of places makes its
    true atoms hold everywhere and gives each false atom a falsifying place,
    with exactly one place at each individual variable.
    """

    def __init__(self, f: Formula, max_generators: int | None = None, warp: "_WarpCheck | None" = None):
        self.formula = f
        self.idx = build_index(f)
        if self.idx.choice_terms:
            raise ValueError("expected a choice-free formula")
        sk = skeleton(f)
        assert sk.atom_table == self.idx.atoms
        self.prop = sk.prop
        self.n = sk.n_vars
        self.space = PlaceSpace(self.idx, max_generators)
        self.partitions = _partitions_finest_first(self.idx.individual_vars)
        self.conjuncts = [(c, _prop_vars(c)) for c in _top_conjuncts(self.prop)]
        self.warp = warp
        self.nodes = 0
        self.leaves = 0

    # -- propositional side

    def _unit(self, val: list) -> bool:
        """Propagate top-level conjuncts with a single open atom. False on conflict."""
        changed = True
        while changed:
            changed = False
            for c, vs in self.conjuncts:
                open_ = [v for v in vs if val[v] is None]
                if len(open_) != 1:
                    if not open_ and evaluate_prop(c, val) is False:
                        return False
                    continue
                status = evaluate_prop(c, val)
                if status is not None:
                    if status is False:
                        return False
                    continue
                v = open_[0]
                val[v] = True
                pos = evaluate_prop(c, val)
                val[v] = False
                neg = evaluate_prop(c, val)
                val[v] = None
                if pos is False and neg is False:
                    return False
                if pos is False or neg is False:
                    val[v] = pos is not False
                    changed = True
        return True

    def _branch_var(self, val: list) -> int | None:
        for c, vs in self.conjuncts:
            if evaluate_prop(c, val) is None:
                for v in vs:
                    if val[v] is None:
                        return v
        return None

    # -- theory side

    def _theory_propagate(self, val: list, table: np.ndarray) -> None:
        """Atoms that no admissible place falsifies must be true."""
        for a in range(self.n):
            if val[a] is None and not (table & self.space.fails[a]).any():
                val[a] = True

    def consistent(self, true_atoms: list[int], false_atoms: list[int], table: np.ndarray) -> Solution | None:
        sp = self.space
        free = table[:, 0]
        covered_free = {}
        hard = []
        for a in false_atoms:
            hit = free & sp.fails[a][:, 0]
            if hit.any():
                covered_free[a] = hit
            else:
                hard.append(a)
        for groups in self.partitions:
            cols = [pattern_mask(self.idx, g) for g in groups]
            if any(not table[:, col].any() for col in cols):
                continue
            designated = self._cover(table, cols, 0, hard, [])
            if designated is None:
                continue
            witnesses = []
            chosen = list(designated)
            for a in false_atoms:
                if any(self._falsifies(a, c) for c in chosen):
                    continue
                row = sp.first_row(covered_free[a]) if a in covered_free else None
                assert row is not None
                code = sp.code(row, 0)
                witnesses.append(code)
                chosen.append(code)
            return Solution(list(groups), designated, witnesses)
        return None

    def _falsifies(self, a: int, code: int) -> bool:
        sp = self.space
        row, col = code >> sp.s, code & (sp.cols - 1)
        return bool(sp.fails[a][row >> 3, col] >> (7 - (row & 7)) & 1)

    def _cover(self, table, cols: list[int], j: int, hard: list[int], chosen: list[int]) -> list[int] | None:
        """Pick one place per column so that every hard atom is falsified."""
        sp = self.space
        if j == len(cols):
            return list(chosen) if not hard else None
        col = cols[j]
        if not hard:
            row = sp.first_row(table[:, col])
            return self._cover(table, cols, j + 1, hard, chosen + [sp.code(row, col)])
        # group candidate rows by which hard atoms they falsify
        rows = sp.rows_of(table, col)
        bitsets = np.stack([np.unpackbits(sp.fails[a][:, col])[rows] for a in hard])
        seen = {}
        for i, r in enumerate(rows):
            key = tuple(bitsets[:, i].tolist())
            if key not in seen:
                seen[key] = int(r)
        for key in sorted(seen, key=lambda k: (-sum(k), k)):
            rest = [a for a, hit in zip(hard, key) if not hit]
            got = self._cover(table, cols, j + 1, rest, chosen + [sp.code(seen[key], col)])
            if got is not None:
                return got
        return None

    # -- driver

    def solutions(self, start: list | None = None) -> Iterator[tuple[list, Solution]]:
        val = list(start) if start is not None else [None] * self.n
        yield from self._dpll(val)

    def _dpll(self, val: list) -> Iterator[tuple[list, Solution]]:
        self.nodes += 1
        if not self._unit(val):
            return
        status = evaluate_prop(self.prop, val)
        if status is False:
            return
        true_atoms = [a for a in range(self.n) if val[a] is True]
        table = self.space.filtered(true_atoms)
        self._theory_propagate(val, table)
        if not self._unit(val):
            return
        status = evaluate_prop(self.prop, val)
        if status is False:
            return
        true_atoms = [a for a in range(self.n) if val[a] is True]
        false_atoms = [a for a in range(self.n) if val[a] is False]
        table = self.space.filtered(true_atoms)
        sol = self.consistent(true_atoms, false_atoms, table)
        if sol is None:
            return
        if status is True:
            self.leaves += 1
            if self.warp is None:
                yield val, sol
            else:
                found = self.warp.search(self, false_atoms, table)
                if found is not None:
                    yield val, found
            return
        v = self._branch_var(val)
        if v is None:
            v = next(a for a in range(self.n) if val[a] is None)
        for choice in (True, False):
            nxt = list(val)
            nxt[v] = choice
            yield from self._dpll(nxt)

    def roots(self, depth: int) -> list[list]:
        """Disjoint partial valuations covering the search space, in search order."""
        out: list[list] = []

        def walk(val: list, d: int) -> None:
            if not self._unit(val) or evaluate_prop(self.prop, val) is False:
                return
            v = self._branch_var(val) if d < depth else None
            if v is None:
                out.append(val)
                return
            for choice in (True, False):
                nxt = list(val)
                nxt[v] = choice
                walk(nxt, d + 1)

        walk([None] * self.n, 0)
        return out


class _WarpCheck:
    """Witness search for WARP: pick places whose induced choice is WARP-liftable."""

    def __init__(self, menus: Sequence[Term], chosen: Sequence[SetVar]):
        self.menus = list(menus)
        self.chosen = list(chosen)

    def signature(self, search: _Search, code: int) -> tuple[int, int]:
        p = search.space.place(code)
        idx = search.idx
        t = c = 0
        for i, (tm, ch) in enumerate(zip(self.menus, self.chosen)):
            t |= p.value(idx, tm) << i
            c |= p.value(idx, ch) << i
        return t, c

    def liftable(self, sigs: Iterable[tuple[int, int]], strict: bool) -> bool:
        """WARP-liftability of the choice induced by one element per signature."""
        sigs = sorted({s for s in sigs if s[0]})
        k = len(self.menus)
        sel: dict[int, int] = {}
        for i in range(k):
            menu = sum(1 << e for e, (t, _) in enumerate(sigs) if t >> i & 1)
            got = sum(1 << e for e, (_, c) in enumerate(sigs) if c >> i & 1)
            if menu == 0:
                continue
            bad = got == 0 or got & ~menu or sel.get(menu, got) != got
            if bad:
                if strict:
                    raise AssertionError("induced choice is not well defined")
                return True  # not yet a choice; cannot prune
            sel[menu] = got
        if not sel:
            return True
        universe = tuple(f"s{e}" for e in range(len(sigs)))
        return warp_liftable(PartialChoice(universe, sel)).liftable

    def search(self, search: _Search, false_atoms: list[int], table: np.ndarray) -> Solution | None:
        sp = search.space
        sig_cache: dict[int, tuple[int, int]] = {}

        def sig(code: int) -> tuple[int, int]:
            if code not in sig_cache:
                sig_cache[code] = self.signature(search, code)
            return sig_cache[code]

        def options(col: int, atoms: list[int]) -> list[int]:
            """One place per distinct (signature, falsified atoms) among a column."""
            rows = sp.rows_of(table, col)
            if not len(rows):
                return []
            hits = np.stack([np.unpackbits(sp.fails[a][:, col])[rows] for a in atoms]) if atoms else None
            seen = {}
            for i, r in enumerate(rows):
                code = sp.code(int(r), col)
                key = (sig(code), tuple(hits[:, i].tolist()) if hits is not None else ())
                seen.setdefault(key, code)
            return [seen[k] for k in sorted(seen, key=lambda k: (k[0] != (0, 0), -sum(k[1]), k))]

        def witnesses(pending: list[int], chosen: list[int], sigs: set) -> list[int] | None:
            pending = [a for a in pending if not any(search._falsifies(a, c) for c in chosen)]
            if not pending:
                return [] if self.liftable(sigs, strict=True) else None
            a = pending[0]
            opts = options(0, pending)
            opts = [c for c in opts if search._falsifies(a, c)]
            cheap = [c for c in opts if sig(c) in sigs or sig(c)[0] == 0]
            if cheap:
                opts = cheap[:1]
            for code in opts:
                new = sigs | {sig(code)}
                if not self.liftable(new, strict=False):
                    continue
                rest = witnesses(pending[1:], chosen + [code], new)
                if rest is not None:
                    return [code] + rest
            return None

        def designate(groups, cols, j: int, chosen: list[int], sigs: set) -> Solution | None:
            if j == len(cols):
                w = witnesses(false_atoms, chosen, sigs)
                return None if w is None else Solution(list(groups), list(chosen), w)
            for code in options(cols[j], false_atoms):
                new = sigs | {sig(code)}
                if not self.liftable(new, strict=False):
                    continue
                got = designate(groups, cols, j + 1, chosen + [code], new)
                if got is not None:
                    return got
            return None

        for groups in search.partitions:
            cols = [pattern_mask(search.idx, g) for g in groups]
            if any(not table[:, col].any() for col in cols):
                continue
            got = designate(groups, cols, 0, [], set())
            if got is not None:
                return got
        return None


# --------------------------------------------------------------------------
# model construction

def _internal(name: str) -> bool:
    return "__" in name


def build_model(candidate: AmpleCandidate, idx: FormulaIndex,
                 choice_vars: Mapping[Choice, SetVar] | None = None) -> FiniteModel:
    """Model with one element per place; the choice is defined on the named menus only.

    Designated places come first (in variable order), then the others by
    their bit pattern. Choice terms are read from the place values of
    ``choice_vars[c(T)]`` when given, otherwise of ``c(T)`` itself.
    """
    designated = []
    for x in idx.individual_vars:
        p = candidate.var_place[x]
        if p not in designated:
            designated.append(p)
    rest = sorted((p for p in candidate.places if p not in designated), key=lambda p: p.bits)
    places = designated + rest
    if not places:
        places = [Place(0)]
    return _model_from_places(places, idx, candidate.var_place, choice_vars)


def _model_from_places(places: list[Place], idx: FormulaIndex, var_place: Mapping[str, Place],
                       choice_vars: Mapping[Choice, SetVar] | None) -> FiniteModel:
    universe = tuple(f"a{i}" for i in range(1, len(places) + 1))
    elem = {p: e for p, e in zip(places, universe)}
    individuals = {x: elem[var_place[x]] for x in idx.individual_vars}
    sets = {
        v: frozenset(e for p, e in zip(places, universe) if p.value(idx, SetVar(v)))
        for v in idx.set_vars if not _internal(v)
    }

    def extent(t: Term) -> int:
        return sum(1 << i for i, p in enumerate(places) if p.value(idx, t))

    sel: dict[int, int] = {}
    chs = idx.choice_terms if choice_vars is None else tuple(choice_vars)
    for ch in chs:
        menu = extent(ch.arg)
        got = extent(ch if choice_vars is None else choice_vars[ch])
        if menu == 0:
            continue
        if sel.get(menu, got) != got:
            raise AssertionError("choice terms with equal arguments disagree")
        sel[menu] = got
    choice = PartialChoice(universe, sel)
    return FiniteModel(universe, individuals, sets, choice, choice.menus, None)


def extend_choice(m: FiniteModel, s: Semantics) -> FiniteModel:
    """Total choice extending the one on ``m.domain``, per the semantics' lifting."""
    try:
        total = lift_with_rule(m.choice, _RULES[s])
    except LiftingError as e:
        raise AssertionError(f"lifting failed on a solver model: {e}") from e
    return FiniteModel(m.universe, m.individuals, m.sets, total, m.domain, _RULES[s])


def _solution_model(search: _Search, sol: Solution, choice_vars: Mapping[Choice, SetVar]) -> FiniteModel:
    sp = search.space
    codes = list(dict.fromkeys(sol.codes)) or [0]
    places = [sp.place(c) for c in codes]
    var_place = {}
    for g, code in zip(sol.groups, sol.designated):
        for x in g:
            var_place[x] = sp.place(code)
    return _model_from_places(places, search.idx, var_place, choice_vars)


# --------------------------------------------------------------------------
# entry points

@dataclass(frozen=True)
class _Job:
    formula: Formula
    reduced: Formula
    semantics: Semantics
    choice_vars: tuple[tuple[Choice, SetVar], ...]
    max_generators: int | None
    verify_cap: int


def _make_search(job: _Job) -> _Search:
    warp = None
    if job.semantics is Semantics.WARP:
        cv = dict(job.choice_vars)
        warp = _WarpCheck([ch.arg for ch in cv], list(cv.values()))
    return _Search(job.reduced, job.max_generators, warp)


def _finish(job: _Job, search: _Search, sol: Solution) -> FiniteModel:
    model = _solution_model(search, sol, dict(job.choice_vars))
    model = extend_choice(model, job.semantics)
    if len(model.universe) <= job.verify_cap:
        assert verify_model(model, job.formula, job.semantics, job.verify_cap), "model failed verification"
    return model


def _run_subtree(job: _Job, root: list | None) -> tuple[FiniteModel | None, int, int]:
    search = _make_search(job)
    for _, sol in search.solutions(root):
        return _finish(job, search, sol), search.nodes, search.leaves
    return None, search.nodes, search.leaves


def decide(f: Formula, s: Semantics, *, max_generators: int | None = None,
           max_alpha_k: int = DEFAULT_MAX_ALPHA_K, jobs: int = 1,
           verify_cap: int = DEFAULT_VERIFY_CAP) -> Verdict:
    """Decide satisfiability of ``f`` under ``s``; SAT verdicts carry a checked model."""
    try:
        g = normalize(f)
        red = reduce(g, s, max_alpha_k)
        job = _Job(f, red.formula, s, tuple(red.choice_vars.items()), max_generators, verify_cap)
        stats = {"atoms": len(build_index(red.formula).atoms), "choice_terms": len(red.choice_vars)}
        if jobs > 1:
            model, nodes, leaves = _decide_parallel(job, jobs)
        else:
            model, nodes, leaves = _run_subtree(job, None)
    except ResourceLimit as e:
        return Verdict(Status.RESOURCE_LIMIT, reason=str(e))
    stats.update(nodes=nodes, leaves=leaves)
    if model is None:
        return Verdict(Status.UNSAT, stats=stats)
    stats["universe"] = len(model.universe)
    return Verdict(Status.SAT, model, stats=stats)


def _decide_parallel(job: _Job, jobs: int) -> tuple[FiniteModel | None, int, int]:
    search = _make_search(job)
    depth = max(1, (jobs - 1).bit_length() + 1)
    roots = search.roots(depth)
    nodes = leaves = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_subtree, job, r) for r in roots]
        try:
            # results are taken in search order, so the reported model is
            # the one the sequential search would find
            for fut in futures:
                model, n, lv = fut.result()
                nodes += n
                leaves += lv
                if model is not None:
                    return model, nodes, leaves
        finally:
            for fut in futures:
                fut.cancel()
    return None, nodes, leaves


def decide_bstc_minus(f: Formula, *, max_generators: int | None = None) -> Verdict:
    """Decide a choice-free formula."""
    if build_index(f).choice_terms:
        raise ValueError("formula contains choice terms")
    return decide(f, Semantics.UNRESTRICTED, max_generators=max_generators)


def decide_warp(f: Formula, **kwargs) -> Verdict:
    return decide(f, Semantics.WARP, **kwargs)
