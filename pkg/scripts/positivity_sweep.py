"""Sweep both positivity checks over a list of groups and print a summary table.

    python scripts/positivity_sweep.py --groups A3 A3:3,2,1 B3 H3 D4 --module A2 B2 G2
"""

from __future__ import annotations

import argparse
import itertools
import time
from dataclasses import dataclass, field

from twistkl.coxeter import build_group, named_matrix, parse_star
from twistkl.errors import PositivityViolated
from twistkl.invmod import InvolutionModule


@dataclass
class SweepConfig:
    pointwise: list[str] = field(default_factory=lambda: ["A3", "A3:3,2,1", "B3", "H3", "D4", "D4:3,2,1,4"])
    module: list[str] = field(default_factory=lambda: ["A2", "A2:2,1", "B2", "G2", "A3", "A3:3,2,1"])


def load(spec: str) -> InvolutionModule:
    name, _, star = spec.partition(":")
    mat = named_matrix(name)
    return InvolutionModule(build_group(mat, parse_star(star or None, mat.rank)))


def pointwise(spec: str) -> tuple[int, int]:
    M = load(spec)
    I = M.group.twisted_involutions()
    M.compute_columns(I)
    bad = 0
    for y, w in itertools.product(I, repeat=2):
        try:
            M.positivity_pointwise(y, w)
        except PositivityViolated:
            bad += 1
    return len(I) ** 2, bad


def module(spec: str) -> tuple[int, int, int]:
    M = load(spec)
    g = M.group
    I = g.twisted_involutions()
    M.hecke.product_table()
    n = bad = odd = 0
    for z in g.elements():
        for w in I:
            b = M.b_const(z, w)
            for w2 in I:
                r = M.positivity_module(z, w, w2, b)
                n += 1
                bad += not r.ok
                odd += r.b_has_odd_degree
    return n, bad, odd


def main() -> None:
    cfg = SweepConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="*", default=cfg.pointwise)
    ap.add_argument("--module", nargs="*", default=cfg.module)
    args = ap.parse_args()
    print(f"{'group':<12} {'check':<10} {'tuples':>8} {'fail':>5} {'odd b':>6} {'sec':>7}")
    for spec in args.groups:
        t = time.perf_counter()
        n, bad = pointwise(spec)
        print(f"{spec:<12} {'pointwise':<10} {n:>8} {bad:>5} {'-':>6} {time.perf_counter() - t:>7.2f}")
    for spec in args.module:
        t = time.perf_counter()
        n, bad, odd = module(spec)
        print(f"{spec:<12} {'module':<10} {n:>8} {bad:>5} {odd:>6} {time.perf_counter() - t:>7.2f}")


if __name__ == "__main__":
    main()
