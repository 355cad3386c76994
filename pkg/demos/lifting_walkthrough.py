"""Check axioms on two small choice data sets and try to extend them to all menus.

Run with ``python3 demos/lifting_walkthrough.py``.
"""

from __future__ import annotations

from pathlib import Path

from bstc import Axiom, ClosedFamily, NoPreorder, PartialChoice, check_axiom, is_rationalizable, lift

DATA = Path(__file__).parent / "data"


def describe(name: str, c: PartialChoice) -> None:
    print(f"== {name}: {len(c)} menu{'' if len(c) == 1 else 's'} over {{{', '.join(c.universe)}}}")
    for m in c.menus:
        print(f"   c({c.format_set(m)}) = {c.format_set(c[m])}")
    for axiom in Axiom:
        res = check_axiom(c, axiom)
        extra = "" if res.holds else f" on {c.format_set(res.witness[0])}, {c.format_set(res.witness[1])}"
        print(f"   ({axiom.value}) {'holds' if res.holds else 'fails'}{extra}")
    print(f"   rationalizable: {bool(is_rationalizable(c))}")
    for axiom in (Axiom.ALPHA, Axiom.BETA, Axiom.WARP):
        rep = lift(c, axiom)
        if rep.liftable:
            full = rep.witness
            print(f"   ({axiom.value})-lifting found, c+({full.format_set(full.full)}) = "
                  f"{full.format_set(full[full.full])}")
        elif isinstance(rep.certificate, ClosedFamily):
            print(f"   no ({axiom.value})-lifting: {len(rep.certificate.menus)} menus reject every item")
        elif isinstance(rep.certificate, NoPreorder):
            cycle = " < ".join(c.format_set(r) for r in rep.certificate.cycle)
            print(f"   no ({axiom.value})-lifting: regions forced into a cycle {cycle}")
        else:
            print(f"   no ({axiom.value})-lifting: the axiom already fails on the data")
    print()


def main() -> None:
    for name in ("cyclic_pairs", "alpha_gap", "single_menu"):
        c = PartialChoice.from_json((DATA / f"{name}.choice.json").read_text())
        describe(name, c)


if __name__ == "__main__":
    main()
