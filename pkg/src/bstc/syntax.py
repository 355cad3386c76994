"""Abstract syntax of Boolean set terms with a choice symbol.

Terms, atoms and formulae are immutable dataclasses, so structural equality
and hashing come for free and can be used for de-duplication.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator


class Term:
    """Base class of set terms."""

    __slots__ = ()

    def __str__(self) -> str:
        return term_to_text(self)

    def children(self) -> tuple["Term", ...]:
        return ()


@dataclass(frozen=True, repr=False)
class SetVar(Term):
    name: str

    def __repr__(self) -> str:
        return f"SetVar({self.name!r})"


@dataclass(frozen=True, repr=False)
class Empty(Term):
    def __repr__(self) -> str:
        return "Empty()"


@dataclass(frozen=True, repr=False)
class Singleton(Term):
    var: str

    def __repr__(self) -> str:
        return f"Singleton({self.var!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Term):
    left: Term
    right: Term

    def children(self) -> tuple[Term, ...]:
        return (self.left, self.right)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Union(_Binary):
    pass


class Intersection(_Binary):
    pass


class Difference(_Binary):
    pass


@dataclass(frozen=True, repr=False)
class Choice(Term):
    arg: Term

    def children(self) -> tuple[Term, ...]:
        return (self.arg,)

    def __repr__(self) -> str:
        return f"Choice({self.arg!r})"


EMPTY = Empty()


class Relation(enum.Enum):
    EQ = "="
    SUB = "sub"


class Formula:
    """Base class of formulae (atoms and propositional combinations)."""

    __slots__ = ()

    def __str__(self) -> str:
        return formula_to_text(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    relation: Relation
    left: Term
    right: Term

    def __repr__(self) -> str:
        return f"Atom({self.relation.name}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class PropVar(Formula):
    """Propositional variable, used in skeletons only."""

    index: int

    def __repr__(self) -> str:
        return f"PropVar({self.index})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self) -> str:
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class _Connective(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Connective):
    pass


class Or(_Connective):
    pass


class Implies(_Connective):
    pass


class Iff(_Connective):
    pass


def eq(left: Term, right: Term) -> Atom:
    return Atom(Relation.EQ, left, right)


def sub(left: Term, right: Term) -> Atom:
    return Atom(Relation.SUB, left, right)


def conj(*parts: Formula) -> Formula:
    """Left-nested conjunction of one or more formulae."""
    if not parts:
        raise ValueError("conj() needs at least one operand")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        raise ValueError("disj() needs at least one operand")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def union_of(*terms: Term) -> Term:
    """Left-nested union; the empty union is the empty set."""
    if not terms:
        return EMPTY
    out = terms[0]
    for t in terms[1:]:
        out = Union(out, t)
    return out


# --------------------------------------------------------------------------
# traversal

def subterms(t: Term) -> Iterator[Term]:
    """All sub-terms of ``t`` (including ``t``), children first."""
    for ch in t.children():
        yield from subterms(ch)
    yield t


def atoms_of(f: Formula) -> Iterator[Atom]:
    """Atoms in left-to-right order of occurrence (with repetitions)."""
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from atoms_of(f.arg)
    elif isinstance(f, _Connective):
        yield from atoms_of(f.left)
        yield from atoms_of(f.right)


def is_choice_free(t: Term) -> bool:
    return not any(isinstance(s, Choice) for s in subterms(t))


def term_size(t: Term) -> int:
    return 1 + sum(term_size(ch) for ch in t.children())


def formula_size(f: Formula) -> int:
    """Number of nodes of the syntax tree, terms included."""
    if isinstance(f, Atom):
        return 1 + term_size(f.left) + term_size(f.right)
    if isinstance(f, Not):
        return 1 + formula_size(f.arg)
    if isinstance(f, _Connective):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1


def map_terms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` applying ``fn`` to the two sides of every atom."""
    if isinstance(f, Atom):
        return Atom(f.relation, fn(f.left), fn(f.right))
    if isinstance(f, Not):
        return Not(map_terms(f.arg, fn))
    if isinstance(f, _Connective):
        return type(f)(map_terms(f.left, fn), map_terms(f.right, fn))
    return f


def replace_subterm(t: Term, mapping: dict[Term, Term]) -> Term:
    """Bottom-up replacement of sub-terms found in ``mapping``."""
    if t in mapping:
        return mapping[t]
    if isinstance(t, _Binary):
        new = type(t)(replace_subterm(t.left, mapping), replace_subterm(t.right, mapping))
    elif isinstance(t, Choice):
        new = Choice(replace_subterm(t.arg, mapping))
    else:
        return t
    return mapping.get(new, new)


# --------------------------------------------------------------------------
# printing

_TERM_LEVEL = {Union: 1, Intersection: 2, Difference: 2}
_TERM_OP = {Union: "+", Intersection: "&", Difference: "-"}


def term_to_text(t: Term, level: int = 0) -> str:
    if isinstance(t, SetVar):
        return t.name
    if isinstance(t, Empty):
        return "0"
    if isinstance(t, Singleton):
        return "{" + t.var + "}"
    if isinstance(t, Choice):
        return f"c({term_to_text(t.arg)})"
    if isinstance(t, _Binary):
        own = _TERM_LEVEL[type(t)]
        # left-associative: the right operand binds one level tighter
        text = f"{term_to_text(t.left, own)} {_TERM_OP[type(t)]} {term_to_text(t.right, own + 1)}"
        return f"({text})" if own < level else text
    raise TypeError(f"not a term: {t!r}")


# precedence: <-> 1, -> 2 (right assoc), or 3, and 4, not 5
_FORM_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}
_FORM_OP = {Iff: "<->", Implies: "->", Or: "or", And: "and"}


def formula_to_text(f: Formula, level: int = 0) -> str:
    if isinstance(f, Atom):
        op = "=" if f.relation is Relation.EQ else "sub"
        return f"{term_to_text(f.left)} {op} {term_to_text(f.right)}"
    if isinstance(f, PropVar):
        return f"P{f.index + 1}"
    if isinstance(f, Not):
        return f"not {formula_to_text(f.arg, 5)}"
    if isinstance(f, _Connective):
        own = _FORM_LEVEL[type(f)]
        if isinstance(f, Implies):
            lhs, rhs = own + 1, own
        else:
            lhs, rhs = own, own + 1
        text = f"{formula_to_text(f.left, lhs)} {_FORM_OP[type(f)]} {formula_to_text(f.right, rhs)}"
        return f"({text})" if own < level else text
    raise TypeError(f"not a formula: {f!r}")


def term_key(t: Term) -> tuple[int, str]:
    """Sort key: smaller terms first, then by printed form."""
    return (term_size(t), term_to_text(t))


# --------------------------------------------------------------------------
# index

@dataclass(frozen=True)
class FormulaIndex:
    """Terms, variables, choice terms and atoms of a formula, in a fixed order.

    ``terms`` is closed under sub-terms, always contains the empty set, and is
    sorted so that every term comes after its sub-terms.
    """

    terms: tuple[Term, ...]
    individual_vars: tuple[str, ...]
    set_vars: tuple[str, ...]
    choice_terms: tuple[Choice, ...]
    atoms: tuple[Atom, ...]
    _pos: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._pos.update({t: i for i, t in enumerate(self.terms)})

    def position(self, t: Term) -> int:
        return self._pos[t]

    @property
    def k(self) -> int:
        return len(self.choice_terms)

    @cached_property
    def singletons(self) -> tuple[Singleton, ...]:
        return tuple(t for t in self.terms if isinstance(t, Singleton))

    def atom_id(self, a: Atom) -> int:
        return self.atoms.index(a)


def build_index(f: Formula) -> FormulaIndex:
    seen_atoms: dict[Atom, None] = {}
    terms: set[Term] = {EMPTY}
    for a in atoms_of(f):
        seen_atoms.setdefault(a, None)
        terms.update(subterms(a.left))
        terms.update(subterms(a.right))
    ordered = tuple(sorted(terms, key=term_key))
    return FormulaIndex(
        terms=ordered,
        individual_vars=tuple(sorted({t.var for t in ordered if isinstance(t, Singleton)})),
        set_vars=tuple(sorted({t.name for t in ordered if isinstance(t, SetVar)})),
        choice_terms=tuple(t for t in ordered if isinstance(t, Choice)),
        atoms=tuple(seen_atoms),
    )


__all__ = [
    "Term", "SetVar", "Empty", "EMPTY", "Singleton", "Union", "Intersection",
    "Difference", "Choice", "Relation", "Formula", "Atom", "PropVar", "Not", "And", "Or",
    "Implies", "Iff", "eq", "sub", "conj", "disj", "union_of", "subterms", "atoms_of",
    "is_choice_free", "term_size", "formula_size", "map_terms", "replace_subterm",
    "term_to_text", "formula_to_text", "term_key", "FormulaIndex", "build_index",
]
