"""Span tightness and the laws of Span(C, F) on the fixture functors.

Prints, per functor, the tightness verdict with its first witness and the
outcome of the exhaustive law check (forcing construction when the functor
is not span tight, so undefined composites show up as failures).

    python3 scripts/tightness_demo.py
"""

import argparse
from dataclasses import dataclass

from spanforge import Functor, build_span_category, check_category_laws, identity_functor, is_span_tight
from spanforge.catalog import (b2_lattice, gen_finsurj, gen_inclusion, gen_poset, incl_fixture,
                               negative_tightness_fixture, walking_iso, z2)


@dataclass
class DemoConfig:
    mode: str = "exhaustive"
    samples: int = 500
    seed: int = 0


def discrete_into_iso():
    disc = gen_poset(["p", "q"], [], name="discrete2")
    W = walking_iso()
    return Functor("discrete2_to_walking_iso", disc, W, [W.obj("x"), W.obj("y")], [W.mor("id_x"), W.mor("id_y")])


def functors():
    yield "INCL (surjections on {1,2} into FINSET04)", incl_fixture()
    yield "surjections on {1,2,3} into themselves", identity_functor(gen_finsurj([1, 2, 3]))
    yield "B2 onto the walking isomorphism", negative_tightness_fixture()
    yield "discrete 2 into the walking isomorphism", discrete_into_iso()
    yield "Id on B2", identity_functor(b2_lattice())
    yield "Id on Z2", identity_functor(z2())
    yield "B2 into itself", gen_inclusion(b2_lattice(), b2_lattice())


def main(cfg: DemoConfig):
    for label, F in functors():
        tight = is_span_tight(F)
        print(f"{label}: span tight = {tight.verdict}")
        if not tight.verdict:
            ce = tight.counterexample
            c = ce["cospan"]
            print(f"    first witness: {ce['reason']} for cospan ({c['c_L']}, {c['c_R']})")
        SC = build_span_category(F, force=True)
        laws = check_category_laws(SC, cfg.mode, cfg.samples, cfg.seed)
        st = laws.stats
        print(f"    laws: {laws.verdict}  classes={st['classes']} pairs={st['composable_pairs']} "
              f"undefined composites={st['undefined_composites']}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mode", choices=["exhaustive", "sampled"], default=DemoConfig.mode)
    ap.add_argument("--samples", type=int, default=DemoConfig.samples)
    ap.add_argument("--seed", type=int, default=DemoConfig.seed)
    a = ap.parse_args()
    main(DemoConfig(a.mode, a.samples, a.seed))
