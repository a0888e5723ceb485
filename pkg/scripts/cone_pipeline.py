"""Iterate the cone step from Lambda(1) and compare each stage with the
direct construction.

    python3 scripts/cone_pipeline.py --m 3 --steps 2
"""
import argparse
import json
import sys
from dataclasses import dataclass

from pyramid_algebras.algebra import build_algebra, relation_set
from pyramid_algebras.constructions import cone, projective_injective_report
from pyramid_algebras.quiver import generate_quiver


@dataclass
class ConeConfig:
    m: int = 3
    steps: int = 2
    manifest: bool = False


def main(cfg: ConeConfig) -> int:
    lam = build_algebra(generate_quiver(1, cfg.m))
    bad = 0
    for _ in range(cfg.steps):
        res = cone(lam)
        lam = res.lam
        N = lam.skeleton.n
        direct = build_algebra(generate_quiver(N, cfg.m))
        same = lam.dims_table() == direct.dims_table() and relation_set(lam) == relation_set(direct)
        pi = sum(r.proj_inj for r in projective_injective_report(lam))
        print(f"Lambda({N}) m={cfg.m}: {len(lam.vertices)} vertices, {len(lam.relations)} relations, "
              f"matches direct: {same}, projective-injectives: {pi}")
        if cfg.manifest:
            print(json.dumps(res.manifest, indent=2, sort_keys=True))
        bad += not same
    return 1 if bad else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--steps", type=int, default=2)
    p.add_argument("--manifest", action="store_true")
    sys.exit(main(ConeConfig(**vars(p.parse_args()))))
