"""Two-sided cells, a-values and closed-form checks for the cell modules.

Also looks for generator dependence of the integer constants in the cell
action (same (z, w) entry, different s).

    python scripts/cell_survey.py A3 A3:3,2,1 B3 H3 D4
"""

from __future__ import annotations

import argparse
import time

from twistkl.cells import Cells
from twistkl.coxeter import build_group, named_matrix, parse_star
from twistkl.invmod import InvolutionModule


def survey(spec: str) -> None:
    name, _, star = spec.partition(":")
    mat = named_matrix(name)
    g = build_group(mat, parse_star(star or None, mat.rank))
    t = time.perf_counter()
    C = Cells(InvolutionModule(g))
    d = C.two_sided_cells()
    print(f"== {spec}: |W| = {g.order()}, {len(d.cells)} cells")
    varying = 0
    for c, members in enumerate(d.cells):
        C.verify_72(c)
        C.parity_split(c)
        C.verify_cell_relations(c)
        dep = C.s_dependence(c)
        varying += len(dep)
        basis = C.cell_module(c).basis
        plus = sum(1 for x in basis if g.parity(x) == 1)
        print(
            f"  cell {c:>2}: size {len(members):>4}  a = {d.a_values[members[0]]:>2}"
            f"  |I cap c| = {len(basis):>3} (eps +1: {plus}, -1: {len(basis) - plus})"
        )
        for k, v in list(dep.items())[:3]:
            print(f"      s-dependent entry {k}: {v}")
    print(f"  closed form, parity split, relations: ok; s-dependent entries: {varying};"
          f" {time.perf_counter() - t:.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("groups", nargs="*", default=["A2", "B2", "G2", "A3", "A3:3,2,1", "B3", "H3"])
    for spec in ap.parse_args().groups:
        survey(spec)


if __name__ == "__main__":
    main()
