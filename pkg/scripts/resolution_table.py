"""Minimal resolutions of every simple of the stable algebra, checked against
the cuboid prediction, plus Koszul type and syzygy period.

    python3 scripts/resolution_table.py --n 2 --m 4 --verbose
"""
import argparse
import sys
from dataclasses import dataclass

from pyramid_algebras.algebra import build_algebra, quadratic_dual, stable_extension
from pyramid_algebras.quiver import generate_quiver
from pyramid_algebras.resolution import (compare, format_table, koszul_classify, minimal_resolution, period,
                                         predict_resolution)


@dataclass
class TableConfig:
    n: int = 1
    m: int = 4
    verbose: bool = False


def main(cfg: TableConfig) -> int:
    S = stable_extension(build_algebra(generate_quiver(cfg.n, cfg.m)))
    diffs = 0
    for i in S.vertices:
        rep = minimal_resolution(S, i, stop_at_terminal=True)
        d = compare(rep, predict_resolution(i, cfg.m))
        diffs += bool(d)
        if cfg.verbose:
            sys.stdout.write(format_table(rep))
        print(f"S{i}: q={rep.q} terminal={rep.terminal} {d.describe()}")
    D = quadratic_dual(S)
    print(f"stable: {koszul_classify(S)} period {period(S)}")
    print(f"dual:   {koszul_classify(D)} period {period(D)}")
    return 1 if diffs else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--verbose", action="store_true")
    sys.exit(main(TableConfig(**vars(p.parse_args()))))
