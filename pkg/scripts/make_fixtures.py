"""Write the fixture suite as interchange JSON files.

    python3 scripts/make_fixtures.py [outdir]
"""

import json
import sys
from pathlib import Path

from spanforge import identity_functor
from spanforge.catalog import (b2_lattice, gen_finset, gen_finsurj, gen_fintop, gen_forgetful,
                               gen_hom_functor, incl_fixture, negative_tightness_fixture, walking_iso, z2)
from spanforge.category import category_to_dict, functor_to_dict


def dump(obj, path):
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def main(outdir="fixtures"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    cats = {
        "finset04": gen_finset(4),
        "finset02": gen_finset(2),
        "finsurj12": gen_finsurj([1, 2]),
        "fintop02": gen_fintop(2),
        "b2": b2_lattice(),
        "z2": z2(),
        "walking_iso": walking_iso(),
    }
    files = {}
    for key, cat in cats.items():
        files[cat.name] = f"{key}.json"
        dump(category_to_dict(cat), out / f"{key}.json")

    def functor(F, fname):
        dump(functor_to_dict(F, files[F.source.name], files[F.target.name]), out / fname)

    functor(incl_fixture(), "INCL.functor.json")
    functor(negative_tightness_fixture(), "negative_tightness.functor.json")
    for key in ("b2", "z2", "finsurj12"):
        functor(identity_functor(cats[key]), f"id_{key}.functor.json")
    functor(gen_hom_functor(cats["z2"], 0, cats["finset04"]), "hom_z2.functor.json")
    for x, name in enumerate(cats["b2"].objects):
        functor(gen_hom_functor(cats["b2"], x, cats["finset04"]), f"hom_b2_{name}.functor.json")
    functor(gen_forgetful(cats["fintop02"], cats["finset02"]), "forget_fintop02.functor.json")
    print(f"wrote {len(list(out.glob('*.json')))} files to {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])
