"""Choice-flat form, completion, propositional skeleton and promising sets."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

from .syntax import (
    EMPTY, And, Atom, Choice, Formula, Iff, Implies, Not, Or, PropVar, SetVar, atoms_of,
    build_index, conj, eq, is_choice_free, map_terms, replace_subterm, sub, subterms,
    term_key,
)

FLAT_PREFIX = "X__flat_"
_FLAT_RE = re.compile(re.escape(FLAT_PREFIX) + r"(\d+)$")


def _nested_choices(f: Formula) -> list[Choice]:
    """Choice terms with a choice-free argument that sit inside another choice term."""
    found = set()
    for a in atoms_of(f):
        for side in (a.left, a.right):
            for t in subterms(side):
                if isinstance(t, Choice):
                    for inner in subterms(t.arg):
                        if isinstance(inner, Choice) and is_choice_free(inner.arg):
                            found.add(inner)
    return sorted(found, key=term_key)


def flatten(f: Formula) -> Formula:
    """Rewrite ``f`` into choice-flat form.

    Every choice term ``c(T)`` with choice-free ``T`` that occurs below another
    choice symbol is replaced everywhere by a fresh variable ``X__flat_<n>``,
    and the definition ``X__flat_<n> = c(T)`` is conjoined. Definitions come
    first, innermost first, followed by the rewritten body.
    """
    used = [int(m.group(1)) for name in build_index(f).set_vars
            if (m := _FLAT_RE.match(name))]
    counter = itertools.count(max(used, default=0) + 1)
    definitions = []
    body = f
    while True:
        nested = _nested_choices(body)
        if not nested:
            break
        mapping = {}
        for ch in nested:
            fresh = SetVar(f"{FLAT_PREFIX}{next(counter)}")
            mapping[ch] = fresh
            definitions.append(eq(fresh, ch))
        body = map_terms(body, lambda t: replace_subterm(t, mapping))
    if not definitions:
        return f
    return conj(*definitions, body)


def is_choice_flat(f: Formula) -> bool:
    return all(is_choice_free(ch.arg) for ch in build_index(f).choice_terms)


def completion_conditions(f: Formula) -> list[Formula]:
    """Choice and single-valuedness conditions for the choice terms of ``f``."""
    chs = build_index(f).choice_terms
    out: list[Formula] = []
    for ch in chs:
        out.append(Not(eq(ch, EMPTY)))
        out.append(sub(ch, ch.arg))
    for i, j in itertools.combinations(range(len(chs)), 2):
        out.append(Implies(eq(chs[i].arg, chs[j].arg), eq(chs[i], chs[j])))
    return out


def complete(f: Formula) -> Formula:
    """Conjoin the completion conditions to a choice-flat formula.

    Idempotent: a formula that already ends with its own conditions is
    returned unchanged.
    """
    conds = completion_conditions(f)
    if not conds:
        return f
    block = conj(*conds)
    if isinstance(f, And) and f.right == block:
        return f
    return And(f, block)


def normalize(f: Formula) -> Formula:
    return complete(flatten(f))


# --------------------------------------------------------------------------
# skeleton

@dataclass(frozen=True)
class Skeleton:
    prop: Formula
    atom_table: tuple[Atom, ...]

    @property
    def n_vars(self) -> int:
        return len(self.atom_table)


def skeleton(f: Formula) -> Skeleton:
    table: dict[Atom, int] = {}
    for a in atoms_of(f):
        table.setdefault(a, len(table))

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return PropVar(table[g])
        if isinstance(g, Not):
            return Not(walk(g.arg))
        return type(g)(walk(g.left), walk(g.right))

    return Skeleton(walk(f), tuple(table))


def evaluate_prop(p: Formula, valuation) -> bool | None:
    """Kleene three-valued evaluation; ``valuation[i]`` is True/False/None."""
    if isinstance(p, PropVar):
        return valuation[p.index]
    if isinstance(p, Not):
        v = evaluate_prop(p.arg, valuation)
        return None if v is None else not v
    left = evaluate_prop(p.left, valuation)
    if isinstance(p, And):
        if left is False:
            return False
        right = evaluate_prop(p.right, valuation)
        if right is False:
            return False
        return None if left is None or right is None else True
    if isinstance(p, Or):
        if left is True:
            return True
        right = evaluate_prop(p.right, valuation)
        if right is True:
            return True
        return None if left is None or right is None else False
    if isinstance(p, Implies):
        if left is False:
            return True
        right = evaluate_prop(p.right, valuation)
        if right is True:
            return True
        return None if left is None or right is None else False
    if isinstance(p, Iff):
        right = evaluate_prop(p.right, valuation)
        if left is None or right is None:
            return None
        return left == right
    raise TypeError(f"not a propositional formula: {p!r}")


def _propagate(prop: Formula, val: list) -> bool:
    """Fix every open variable whose opposite value falsifies ``prop``.

    Returns False on conflict. Mutates ``val``.
    """
    changed = True
    while changed:
        changed = False
        for i, v in enumerate(val):
            if v is not None:
                continue
            val[i] = True
            pos = evaluate_prop(prop, val)
            val[i] = False
            neg = evaluate_prop(prop, val)
            val[i] = None
            if pos is False and neg is False:
                return False
            if pos is False or neg is False:
                val[i] = pos is not False
                changed = True
    return True


def promising_sets(sk: Skeleton, largest_first: bool = False) -> Iterator[frozenset[int]]:
    """Atom-id sets whose "true exactly here" valuation satisfies the skeleton.

    Sets are produced by cardinality (ascending, or descending when
    ``largest_first``), lexicographically within a cardinality.
    """
    n = sk.n_vars
    sizes = range(n, -1, -1) if largest_first else range(n + 1)
    for size in sizes:
        yield from _sets_of_size(sk.prop, n, size)


def _sets_of_size(prop: Formula, n: int, size: int) -> Iterator[frozenset[int]]:
    def search(val: list) -> Iterator[frozenset[int]]:
        trues = [j for j, v in enumerate(val) if v is True]
        if len(trues) > size or n - val.count(False) < size:
            return
        status = evaluate_prop(prop, val)
        if status is False:
            return
        open_ = [j for j, v in enumerate(val) if v is None]
        if status is True:
            # every completion satisfies the skeleton
            for extra in itertools.combinations(open_, size - len(trues)):
                yield frozenset(trues).union(extra)
            return
        # branch on the smallest open id, "in" before "out": lexicographic order
        for choice in (True, False):
            nxt = list(val)
            nxt[open_[0]] = choice
            if _propagate(prop, nxt):
                yield from search(nxt)

    start = [None] * n
    if _propagate(prop, start):
        yield from search(start)


def is_satisfiable_prop(sk: Skeleton) -> bool:
    return next(promising_sets(sk), None) is not None
