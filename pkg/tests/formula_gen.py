"""Random small formulae for the decider suites."""

from __future__ import annotations

import random

from bstc.syntax import (
    EMPTY, And, Atom, Choice, Difference, Formula, Iff, Implies, Intersection, Not, Or,
    Relation, SetVar, Singleton, Term, Union,
)

SET_VARS = ("X", "Y", "Z")
IVARS = ("x", "y")


def _base_term(rng: random.Random, sets, ivars, depth: int) -> Term:
    if depth <= 0 or rng.random() < 0.4:
        pool = [SetVar(s) for s in sets] + [Singleton(v) for v in ivars]
        if rng.random() < 0.08:
            return EMPTY
        return rng.choice(pool)
    op = rng.choice((Union, Intersection, Difference))
    return op(_base_term(rng, sets, ivars, depth - 1), _base_term(rng, sets, ivars, depth - 1))


def _term(rng: random.Random, sets, ivars, choices, depth: int) -> Term:
    if choices and rng.random() < 0.3:
        return rng.choice(choices)
    if depth <= 0 or rng.random() < 0.45:
        return _base_term(rng, sets, ivars, 0)
    op = rng.choice((Union, Intersection, Difference))
    return op(_term(rng, sets, ivars, choices, depth - 1), _term(rng, sets, ivars, choices, depth - 1))


def random_formula(rng: random.Random) -> Formula:
    """At most 3 set variables, 2 individual variables, 2 choice terms, 6 atoms."""
    sets = SET_VARS[: rng.randint(1, 3)]
    ivars = IVARS[: rng.randint(0, 2)]
    n_choice = rng.randint(0, 2)
    choices = []
    for _ in range(n_choice):
        if ivars and rng.random() < 0.5:
            picked = rng.sample(ivars, rng.randint(1, len(ivars)))
            arg = Singleton(picked[0])
            for v in picked[1:]:
                arg = Union(arg, Singleton(v))
            if rng.random() < 0.4:
                arg = Union(arg, SetVar(rng.choice(sets)))
        else:
            arg = _base_term(rng, sets, ivars, 1)
        ch = Choice(arg)
        if ch not in choices:
            choices.append(ch)
    n_atoms = rng.randint(1, 6)
    atoms = []
    for _ in range(n_atoms):
        r = rng.random()
        if choices and ivars and r < 0.45:
            # membership of an individual in a choice set
            atoms.append(Atom(Relation.SUB, Singleton(rng.choice(ivars)), rng.choice(choices)))
            continue
        if len(choices) == 2 and r < 0.6:
            a, b = rng.sample(choices, 2)
            atoms.append(Atom(Relation.SUB, a.arg, b.arg))
            continue
        rel = rng.choice((Relation.EQ, Relation.SUB))
        atoms.append(Atom(rel, _term(rng, sets, ivars, choices, 2), _term(rng, sets, ivars, choices, 1)))
    # make sure every choice term occurs
    for i, ch in enumerate(choices):
        if not any(ch in _terms_of(a) for a in atoms):
            atoms[i % len(atoms)] = Atom(rng.choice((Relation.EQ, Relation.SUB)), ch, atoms[i % len(atoms)].right)
    return _combine(rng, atoms)


def _terms_of(a: Atom) -> set:
    from bstc.syntax import subterms
    return set(subterms(a.left)) | set(subterms(a.right))


def _combine(rng: random.Random, parts: list[Formula]) -> Formula:
    parts = [Not(p) if rng.random() < 0.35 else p for p in parts]
    rng.shuffle(parts)
    while len(parts) > 1:
        i = rng.randrange(len(parts) - 1)
        op = rng.choices((And, Or, Implies, Iff), weights=(7, 2, 2, 1))[0]
        node = op(parts[i], parts[i + 1])
        if rng.random() < 0.1:
            node = Not(node)
        parts[i:i + 2] = [node]
    return parts[0]


_MENU_ARGS = (
    Union(Singleton("x"), Singleton("y")),
    Union(Singleton("x"), SetVar("X")),
    Union(Union(Singleton("x"), Singleton("y")), SetVar("X")),
    SetVar("X"),
    Union(SetVar("X"), SetVar("Y")),
    Union(Singleton("y"), SetVar("Y")),
)


def random_choice_formula(rng: random.Random) -> Formula:
    """Membership literals on two choice terms over related menus."""
    a, b = rng.sample(_MENU_ARGS, 2)
    chs = (Choice(a), Choice(b))
    atoms: list[Formula] = []
    n_atoms = rng.randint(3, 6)
    extras = [
        Not(Atom(Relation.EQ, Singleton("x"), Singleton("y"))),
        Atom(Relation.SUB, a, b),
        Atom(Relation.SUB, Singleton("x"), SetVar("X")),
        Not(Atom(Relation.SUB, Singleton("y"), SetVar("X"))),
    ]
    while len(atoms) < n_atoms:
        if rng.random() < 0.7:
            lit: Formula = Atom(Relation.SUB, Singleton(rng.choice(IVARS)), rng.choice(chs))
            if rng.random() < 0.45:
                lit = Not(lit)
        else:
            lit = rng.choice(extras)
        atoms.append(lit)
    out = atoms[0]
    for p in atoms[1:]:
        out = And(out, p) if rng.random() < 0.85 else Or(out, p)
    return out
