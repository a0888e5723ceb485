"""Run the theorem corpus over a grid of (n, m) and print a summary.

    python3 scripts/run_corpus.py --nmax 3 --mmax 4 --workers 4 --junit corpus.xml
"""
import argparse
import sys
import time
from dataclasses import dataclass
from typing import Optional

from pyramid_algebras.algebra import ANTICOMMUTATIVE, COMMUTATIVE
from pyramid_algebras.linalg import field_from_name
from pyramid_algebras.verification import THEOREMS, run_corpus


@dataclass
class CorpusConfig:
    nmax: int = 2
    mmax: int = 4
    scheme: str = "anticommutative"
    field: Optional[str] = None
    workers: int = 1
    junit: Optional[str] = None
    theorems: Optional[list] = None


def main(cfg: CorpusConfig) -> int:
    scheme = ANTICOMMUTATIVE if cfg.scheme == "anticommutative" else COMMUTATIVE
    t0 = time.perf_counter()
    rep = run_corpus(cfg.nmax, cfg.mmax, theorems=cfg.theorems, scheme=scheme,
                     field=field_from_name(cfg.field), workers=cfg.workers)
    for r in rep.results:
        print(f"{r.status.upper():<12} {r.theorem:<20} n={r.n} m={r.m}  {r.detail}")
    c = rep.counts()
    print(f"{c['pass']} passed, {c['fail']} failed, {c['inconclusive']} inconclusive "
          f"in {time.perf_counter() - t0:.1f}s")
    if cfg.junit:
        with open(cfg.junit, "w", encoding="utf-8") as fh:
            fh.write(rep.to_junit())
    return rep.exit_code


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--mmax", type=int, default=4)
    p.add_argument("--scheme", choices=["anticommutative", "commutative"], default="anticommutative")
    p.add_argument("--field", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--junit")
    p.add_argument("--theorem", action="append", choices=sorted(THEOREMS), dest="theorems")
    sys.exit(main(CorpusConfig(**vars(p.parse_args()))))
