"""Pullback census over the fixture categories.

For each category: cospans, cospans without a pullback, and (for finite
sets and spaces) how often the direct fibered-product construction lands
among the pullbacks found by universal-property search.

    python3 scripts/pullback_census.py --max-finset 3 --max-fintop 2
"""

import argparse
import time
from dataclasses import dataclass

from spanforge import ApexExceedsCap, canonicalize, enumerate_cospans, find_pullbacks
from spanforge.catalog import b2_lattice, fibered_product_oracle, gen_finset, gen_finsurj, gen_fintop, z2


@dataclass
class CensusConfig:
    max_finset: int = 3
    max_fintop: int = 2
    surj_sizes: tuple = (1, 2)


def census(cat, oracle_kind=None):
    t0 = time.perf_counter()
    without = agreed = disagreed = 0
    for C in enumerate_cospans(cat):
        pbs = find_pullbacks(cat, C)
        without += not pbs
        if oracle_kind is None:
            continue
        try:
            S = fibered_product_oracle(oracle_kind, cat, C)
        except ApexExceedsCap:
            continue
        if canonicalize(cat, S) in {canonicalize(cat, P) for P in pbs}:
            agreed += 1
        else:
            disagreed += 1
    return {"category": cat.name, "morphisms": cat.n_morphisms, "cospans": len(enumerate_cospans(cat)),
            "without_pullback": without, "oracle_agree": agreed if oracle_kind else "-",
            "oracle_disagree": disagreed if oracle_kind else "-", "seconds": round(time.perf_counter() - t0, 2)}


def main(cfg: CensusConfig):
    rows = [census(gen_finset(cfg.max_finset), "finset"),
            census(gen_fintop(cfg.max_fintop), "fintop"),
            census(gen_finsurj(list(cfg.surj_sizes))),
            census(b2_lattice()),
            census(z2())]
    cols = list(rows[0])
    print("  ".join(f"{c:>16}" for c in cols))
    for r in rows:
        print("  ".join(f"{str(r[c]):>16}" for c in cols))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-finset", type=int, default=CensusConfig.max_finset)
    ap.add_argument("--max-fintop", type=int, default=CensusConfig.max_fintop)
    ap.add_argument("--surj-sizes", default="1,2")
    a = ap.parse_args()
    main(CensusConfig(a.max_finset, a.max_fintop, tuple(int(s) for s in a.surj_sizes.split(","))))
