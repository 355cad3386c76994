"""Decide a handful of formulas under each choice semantics.

Run with ``python3 demos/semantics_table.py``. Every SAT verdict comes with a
model that has already passed ``verify_model``.
"""

from __future__ import annotations

import time
from pathlib import Path

from bstc import Semantics, decide, parse_formula

DATA = Path(__file__).parent / "data"

FORMULAS = {
    "contraction kept": "x != y and {x} + {y} sub X and c(X) = {x} and c({x} + {y}) = {x}",
    "contraction broken": "x != y and {x} + {y} sub X and c(X) = {x} and c({x} + {y}) = {y}",
    "expansion broken": "x != y and X = {x} + {y} + Y and c({x} + {y}) = {x} + {y}"
                        " and x in c(X) and y notin c(X)",
    "strict subset": (DATA / "strict_subset.bstc").read_text(),
    "cyclic pairs": (DATA / "cyclic_pairs.bstc").read_text(),
    "alpha gap": (DATA / "alpha_gap.bstc").read_text(),
}


def main() -> None:
    order = list(Semantics)
    print(f"{'formula':<20}" + "".join(f"{s.value:>14}" for s in order) + f"{'time':>9}")
    for name, src in FORMULAS.items():
        f = parse_formula(src)
        start = time.perf_counter()
        cells = []
        for s in order:
            v = decide(f, s)
            cells.append(f"{v.status.value} ({len(v.model.universe)})" if v.sat else v.status.value)
        elapsed = time.perf_counter() - start
        print(f"{name:<20}" + "".join(f"{cell:>14}" for cell in cells) + f"{elapsed:>8.2f}s")
    print("\nnumbers in parentheses are model sizes")


if __name__ == "__main__":
    main()
