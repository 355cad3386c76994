"""Places: Boolean valuations of the terms of a formula.

A place is fixed by its values on the generator slots (set variables,
singletons ``{x}`` and choice terms); the value of ``0`` is false and the
Boolean operators determine the rest.

:class:`PlaceSpace` evaluates every generator assignment at once with numpy.
Assignments are numbered so that the singleton slots occupy the low bits:
the places carrying a given pattern of individual variables then form one
column of a ``(rows, 2**s)`` table, where ``s`` is the number of individual
variables. Column 0 holds the places true at no singleton.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .choice import ResourceLimit
from .syntax import (
    Atom, Choice, Difference, Empty, FormulaIndex, Intersection, Relation, SetVar, Singleton,
    Term, Union,
)

DEFAULT_MAX_GENERATORS = 24
_CHUNK_BITS = 16


def max_generators_from_env(default: int = DEFAULT_MAX_GENERATORS) -> int:
    raw = os.environ.get("BSTC_MAX_PLACES")
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"BSTC_MAX_PLACES must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("BSTC_MAX_PLACES must be positive")
    return value


def generator_slots(idx: FormulaIndex) -> tuple[Term, ...]:
    """Singletons first (low bits), then set variables and choice terms."""
    singles = tuple(Singleton(v) for v in idx.individual_vars)
    rest = tuple(t for t in idx.terms if isinstance(t, (SetVar, Choice)))
    return singles + rest


@dataclass(frozen=True)
class Place:
    """Values of a place on ``idx.terms``: bit ``i`` is the value at term ``i``."""

    bits: int

    def value(self, idx: FormulaIndex, t: Term) -> bool:
        return bool(self.bits >> idx.position(t) & 1)

    def satisfies(self, idx: FormulaIndex, a: Atom) -> bool:
        left, right = self.value(idx, a.left), self.value(idx, a.right)
        return left == right if a.relation is Relation.EQ else (not left or right)


def evaluate_place(idx: FormulaIndex, generators: Mapping[Term, bool]) -> Place:
    """The place extending a generator assignment."""
    vals: dict[Term, bool] = {}
    for t in idx.terms:
        if isinstance(t, Empty):
            v = False
        elif isinstance(t, (SetVar, Singleton, Choice)):
            if t not in generators:
                raise KeyError(f"no value for generator {t}")
            v = bool(generators[t])
        elif isinstance(t, Union):
            v = vals[t.left] or vals[t.right]
        elif isinstance(t, Intersection):
            v = vals[t.left] and vals[t.right]
        elif isinstance(t, Difference):
            v = vals[t.left] and not vals[t.right]
        else:
            raise TypeError(f"unexpected term {t!r}")
        vals[t] = v
    return Place(sum(1 << i for i, t in enumerate(idx.terms) if vals[t]))


def _eval_terms(idx: FormulaIndex, slots: tuple[Term, ...], codes: np.ndarray) -> dict[Term, np.ndarray]:
    slot_pos = {t: i for i, t in enumerate(slots)}
    vals: dict[Term, np.ndarray] = {}
    zeros = np.zeros(codes.shape, dtype=bool)
    for t in idx.terms:
        if isinstance(t, Empty):
            v = zeros
        elif t in slot_pos:
            v = ((codes >> slot_pos[t]) & 1).astype(bool)
        elif isinstance(t, Singleton):
            # singleton of a variable absent from the slot list cannot happen
            raise AssertionError(t)
        elif isinstance(t, Union):
            v = vals[t.left] | vals[t.right]
        elif isinstance(t, Intersection):
            v = vals[t.left] & vals[t.right]
        elif isinstance(t, Difference):
            v = vals[t.left] & ~vals[t.right]
        else:
            raise TypeError(f"unexpected term {t!r}")
        vals[t] = v
    return vals


def _atom_holds(a: Atom, vals: dict[Term, np.ndarray]) -> np.ndarray:
    left, right = vals[a.left], vals[a.right]
    return left == right if a.relation is Relation.EQ else (~left | right)


class PlaceSpace:
    """All places of a formula, with per-atom truth tables.

    ``holds[a]`` is a packed bit table of shape ``(ceil(rows / 8), 2**s)``;
    bit ``(r, col)`` says whether atom ``a`` holds at the place with code
    ``col + (r << s)``.
    """

    def __init__(self, idx: FormulaIndex, max_generators: int | None = None):
        if max_generators is None:
            max_generators = max_generators_from_env()
        self.idx = idx
        self.slots = generator_slots(idx)
        self.g = len(self.slots)
        if self.g > max_generators:
            raise ResourceLimit(
                f"{self.g} generator slots exceed the cap of {max_generators}")
        self.s = len(idx.individual_vars)
        self.rows = 1 << (self.g - self.s)
        self.cols = 1 << self.s
        n = 1 << self.g
        chunk = 1 << max(_CHUNK_BITS, self.s + 3)
        tables = [np.empty((self.rows, self.cols), dtype=bool) for _ in idx.atoms]
        for start in range(0, n, chunk):
            codes = np.arange(start, min(n, start + chunk), dtype=np.int64)
            vals = _eval_terms(idx, self.slots, codes)
            r0 = start >> self.s
            block = len(codes) >> self.s
            for tab, a in zip(tables, idx.atoms):
                tab[r0:r0 + block] = _atom_holds(a, vals).reshape(block, self.cols)
        self.holds = [np.packbits(t, axis=0) for t in tables]
        self.fails = [np.packbits(~t, axis=0) for t in tables]
        # padding bits of the last packed row stay zero in ``everything``
        self.everything = np.packbits(np.ones((self.rows, self.cols), dtype=bool), axis=0)

    def code(self, row: int, col: int) -> int:
        return col | (row << self.s)

    def filtered(self, true_atoms: Iterable[int]) -> np.ndarray:
        """Packed table of the places satisfying every atom in ``true_atoms``."""
        out = self.everything.copy()
        for a in true_atoms:
            out &= self.holds[a]
        return out

    @staticmethod
    def rows_of(table: np.ndarray, col: int) -> np.ndarray:
        return np.flatnonzero(np.unpackbits(table[:, col]))

    @staticmethod
    def first_row(column: np.ndarray) -> int | None:
        """Lowest set row of one packed column."""
        nz = np.flatnonzero(column)
        if not len(nz):
            return None
        byte = int(nz[0])
        return byte * 8 + (8 - int(column[byte]).bit_length())

    def place(self, code: int) -> Place:
        gens = {t: bool(code >> i & 1) for i, t in enumerate(self.slots)}
        return evaluate_place(self.idx, gens)

    def codes(self, table: np.ndarray) -> list[int]:
        out = []
        for col in range(self.cols):
            out.extend(self.code(int(r), col) for r in self.rows_of(table, col))
        return sorted(out)


def pattern_mask(idx: FormulaIndex, group: Iterable[str]) -> int:
    """Column index for the places true exactly at the singletons of ``group``."""
    pos = {v: i for i, v in enumerate(idx.individual_vars)}
    return sum(1 << pos[v] for v in group)


def enumerate_filtered_places(idx: FormulaIndex, A: Iterable[Atom],
                              max_generators: int | None = None) -> list[Place]:
    """Places satisfying every atom of ``idx`` that is not in ``A``.

    ``A`` lists the atoms meant to be false; the remaining ones must hold at
    every place of an ample set.
    """
    space = PlaceSpace(idx, max_generators)
    A = set(A)
    keep = [i for i, a in enumerate(idx.atoms) if a not in A]
    return [space.place(c) for c in space.codes(space.filtered(keep))]


@dataclass(frozen=True)
class AmpleCandidate:
    places: frozenset[Place]
    var_place: Mapping[str, Place]


def is_ample(candidate: AmpleCandidate, A: Iterable[Atom], idx: FormulaIndex) -> tuple[bool, str | None]:
    """Check the ampleness conditions for the set ``A`` of false atoms.

    Atoms outside ``A`` must hold at every place; each atom in ``A`` needs a
    place where it fails. Each individual variable needs its designated place
    in the set, and no other place may be true at that variable.
    """
    A = set(A)
    places = candidate.places
    for x in idx.individual_vars:
        px = candidate.var_place.get(x)
        if px is None or px not in places:
            return False, f"no designated place for {x}"
        if not px.value(idx, Singleton(x)):
            return False, f"designated place of {x} is false at {{{x}}}"
        others = [p for p in places if p != px and p.value(idx, Singleton(x))]
        if others:
            return False, f"more than one place at {x}"
    for a in idx.atoms:
        if a in A:
            if not any(not p.satisfies(idx, a) for p in places):
                kind = "differ" if a.relation is Relation.EQ else "exceed"
                return False, f"no place where the sides of '{a}' {kind}"
        else:
            for p in places:
                if not p.satisfies(idx, a):
                    return False, f"'{a}' fails at some place"
    return True, None
