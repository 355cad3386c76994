"""Reference partial choices and their encodings as formulae."""

from __future__ import annotations

import itertools

from .choice import PartialChoice, bits, popcount
from .syntax import Atom, Choice, Formula, Not, Relation, Singleton, conj, union_of


def cyclic_pairs() -> PartialChoice:
    """Every menu of at most two items on {x, y, z}, with a cyclic pairwise choice.

    x beats y, y beats z and z beats x. The choice is rationalizable by that
    cyclic relation and satisfies WARP on its domain, yet no total choice
    extending it satisfies (alpha) or WARP.
    """
    return PartialChoice.from_sets("xyz", {
        "x": "x", "y": "y", "z": "z",
        "xy": "x", "yz": "y", "xz": "z",
    })


def alpha_gap() -> PartialChoice:
    """A choice on {x, y, z, w} that satisfies (alpha) but has no (alpha)-lifting.

    The domain is every menu except {x,w}, {y,z}, {y,w}, {z,w} and the whole
    universe. Each item is rejected in some menu, so the whole domain is a
    subset-closed family with empty residue. The choice is not
    rationalizable, and it violates (beta) and WARP.
    """
    excluded = {"xw", "yz", "yw", "zw", "xyzw"}
    selected = {"xy": "x", "xz": "xz", "xyz": "xz", "xyw": "w", "xzw": "xw", "yzw": "y"}
    sel = {}
    for r in range(1, 5):
        for menu in itertools.combinations("xyzw", r):
            key = "".join(menu)
            if key not in excluded:
                sel[key] = selected.get(key, key)
    return PartialChoice.from_sets("xyzw", sel)


def encode_choice(c: PartialChoice) -> Formula:
    """Formula stating that distinct individuals realize the choice data of ``c``.

    Universe elements become individual variables (names must start with a
    lowercase letter). Singleton menus are skipped since their choice is forced.
    """
    for e in c.universe:
        if not e[:1].islower() or "__" in e:
            raise ValueError(f"element {e!r} cannot serve as an individual variable")
    parts: list[Formula] = []
    for m in c.menus:
        if popcount(m) == 1:
            continue
        ch = Choice(union_of(*(Singleton(c.universe[i]) for i in bits(m))))
        for i in bits(m):
            member = Atom(Relation.SUB, Singleton(c.universe[i]), ch)
            parts.append(member if c[m] >> i & 1 else Not(member))
    for a, b in itertools.combinations(c.universe, 2):
        parts.append(Not(Atom(Relation.EQ, Singleton(a), Singleton(b))))
    if not parts:
        raise ValueError("nothing to encode")
    return conj(*parts)


__all__ = ["cyclic_pairs", "alpha_gap", "encode_choice"]
