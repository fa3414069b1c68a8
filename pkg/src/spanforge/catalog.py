"""Generators for the fixture categories and functors.

Function-based categories (finite sets, surjections, finite spaces) name
each morphism ``"<src>_<tgt>:<values>"`` where ``values`` lists the images
of ``0, 1, ...`` as digits, so names alone determine the underlying map.
Within a hom-set maps are ordered lexicographically by value vector.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .category import FiniteCategory, Functor, identity_functor
from .errors import (ApexExceedsCap, CapExceeded, HomSetTooLarge, NotAGroup,
                     NotAPartialOrder, ValidationError)
from .spans import Cospan, Span

FINSET_CAP = 4
FINTOP_CAP = 3
FREE_PATH_CAP = 12


def _map_name(src: str, tgt: str, values) -> str:
    return f"{src}_{tgt}:{''.join(str(v) for v in values)}"


def map_values(name: str) -> tuple[int, ...]:
    """Recover the value vector from a function-style morphism name."""
    return tuple(int(c) for c in name.rsplit(":", 1)[1])


def _function_category(name, objects, sizes, maps_between):
    """Category whose morphisms are functions; ``maps_between(a, b)`` lists value vectors."""
    n_obj = len(objects)
    morphisms = []
    vals = {}      # (a, b) -> array of value vectors, one row per map
    lookup = {}    # (a, b) -> array from base-|b| code to MorId (-1 if not a morphism)
    for a in range(n_obj):
        for b in range(n_obj):
            vs = [tuple(v) for v in maps_between(a, b)]
            m, n = sizes[a], sizes[b]
            table = np.full(n ** m, -1, dtype=np.int64)
            for v in vs:
                table[_code(v, n)] = len(morphisms)
                morphisms.append((_map_name(objects[a], objects[b], v), a, b))
            vals[a, b] = np.array(vs, dtype=np.int64).reshape(len(vs), m)
            lookup[a, b] = table
    identity = [int(lookup[x, x][_code(range(sizes[x]), sizes[x])]) for x in range(n_obj)]
    tables = []
    for x in range(n_obj):
        rows = []
        for a in range(n_obj):
            fa = vals[a, x]
            if not len(fa):
                continue
            cols = []
            for b in range(n_obj):
                gb = vals[x, b]
                if not len(gb):
                    continue
                comp = gb[:, fa]                        # (n_g, n_f, |a|): g[f[i]]
                weights = sizes[b] ** np.arange(sizes[a] - 1, -1, -1, dtype=np.int64)
                codes = (comp * weights).sum(axis=-1) if sizes[a] else np.zeros(comp.shape[:2], np.int64)
                cols.append(lookup[a, b][codes].T)      # (n_f, n_g)
            rows.append(np.concatenate(cols, axis=1) if cols else np.zeros((len(fa), 0), np.int64))
        out_n = sum(len(vals[x, b]) for b in range(n_obj))
        tables.append(np.concatenate(rows, axis=0) if rows else np.zeros((0, out_n), np.int64))
    return FiniteCategory(name, objects, morphisms, identity, tables)


def _code(values, n: int) -> int:
    c = 0
    for v in values:
        c = c * n + v
    return c


def _all_functions(m: int, n: int):
    return itertools.product(range(n), repeat=m)


@lru_cache(maxsize=None)
def gen_finset(max_size: int) -> FiniteCategory:
    """Sets ``S0..S{max_size}`` and all functions between them."""
    if not 0 <= max_size <= FINSET_CAP:
        raise CapExceeded(f"finset max_size must be in 0..{FINSET_CAP}")
    sizes = list(range(max_size + 1))
    objects = [f"S{n}" for n in sizes]
    return _function_category(f"FINSET0{max_size}", objects, sizes,
                              lambda a, b: _all_functions(sizes[a], sizes[b]))


@lru_cache(maxsize=None)
def _gen_finsurj(sizes: tuple[int, ...]) -> FiniteCategory:
    if not sizes or any(not 1 <= s <= FINSET_CAP for s in sizes) or len(set(sizes)) != len(sizes):
        raise CapExceeded(f"finsurj sizes must be distinct values in 1..{FINSET_CAP}")
    sizes = tuple(sorted(sizes))
    objects = [f"S{n}" for n in sizes]

    def surjections(a, b):
        return (v for v in _all_functions(sizes[a], sizes[b]) if len(set(v)) == sizes[b])

    return _function_category("FINSURJ" + "".join(map(str, sizes)), objects, sizes, surjections)


def gen_finsurj(sizes: Sequence[int]) -> FiniteCategory:
    """Sets of the given sizes with surjective functions only."""
    return _gen_finsurj(tuple(sorted(int(s) for s in sizes)))


@lru_cache(maxsize=None)
def topologies(n: int) -> tuple[tuple[int, ...], ...]:
    """All topologies on ``{0..n-1}`` as sorted tuples of open-set bitmasks."""
    full = (1 << n) - 1
    middle = [m for m in range(1, full)]
    found = []
    for r in range(len(middle) + 1):
        for extra in itertools.combinations(middle, r):
            opens = {0, full, *extra}
            if all((u | v) in opens and (u & v) in opens for u in opens for v in opens):
                found.append(tuple(sorted(opens)))
    return tuple(sorted(set(found)))


def _continuous(values, top_src, top_tgt) -> bool:
    opens = set(top_src)
    for v in top_tgt:
        pre = 0
        for i, y in enumerate(values):
            if v >> y & 1:
                pre |= 1 << i
        if pre not in opens:
            return False
    return True


def fintop_object(name: str) -> tuple[int, tuple[int, ...]]:
    """``"T2.3"`` -> (2 points, the 4th topology on 2 points)."""
    n, k = name[1:].split(".")
    return int(n), topologies(int(n))[int(k)]


@lru_cache(maxsize=None)
def gen_fintop(max_points: int) -> FiniteCategory:
    """All labelled topologies on ``n <= max_points`` points and continuous maps."""
    if not 0 <= max_points <= FINTOP_CAP:
        raise CapExceeded(f"fintop max_points must be in 0..{FINTOP_CAP}")
    spaces = [(n, k, t) for n in range(max_points + 1) for k, t in enumerate(topologies(n))]
    objects = [f"T{n}.{k}" for n, k, _ in spaces]
    sizes = [n for n, _, _ in spaces]

    def continuous_maps(a, b):
        return (v for v in _all_functions(sizes[a], sizes[b]) if _continuous(v, spaces[a][2], spaces[b][2]))

    return _function_category(f"FINTOP0{max_points}", objects, sizes, continuous_maps)


def gen_poset(elements: Sequence[str], relation, name: str = "poset") -> FiniteCategory:
    """The category of a partial order given as ``(x, y)`` pairs meaning ``x <= y``.

    Reflexive pairs are added; antisymmetry and transitivity are checked.
    """
    elements = [str(e) for e in elements]
    idx = {e: i for i, e in enumerate(elements)}
    leq = set()
    for x, y in relation:
        if x not in idx or y not in idx:
            raise NotAPartialOrder(f"relation mentions unknown element in {(x, y)!r}")
        leq.add((idx[x], idx[y]))
    leq |= {(i, i) for i in range(len(elements))}
    for (a, b) in leq:
        if a != b and (b, a) in leq:
            raise NotAPartialOrder(f"{elements[a]} <= {elements[b]} <= {elements[a]}")
        for (c, d) in leq:
            if b == c and (a, d) not in leq:
                raise NotAPartialOrder(f"not transitive: {elements[a]} <= {elements[b]} <= {elements[d]}")
    pairs = sorted(leq)
    morphisms = [(f"{elements[a]}<={elements[b]}", a, b) for a, b in pairs]
    index = {p: i for i, p in enumerate(pairs)}
    identity = [index[i, i] for i in range(len(elements))]
    return FiniteCategory.from_compose(name, elements, morphisms, identity,
                                       lambda f, g: index[pairs[f][0], pairs[g][1]])


def b2_lattice() -> FiniteCategory:
    """The four-element Boolean lattice ``bot <= a, b <= top``."""
    return _b2()


@lru_cache(maxsize=None)
def _b2():
    rel = [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top"), ("bot", "top")]
    return gen_poset(["bot", "a", "b", "top"], rel, name="B2")


def gen_group(table: Sequence[Sequence], elements: Sequence[str] | None = None,
              name: str = "group", obj: str = "*") -> FiniteCategory:
    """One-object category of a group; ``table[i][j]`` is the product ``i·j``.

    Entries may be indices or element names.  Composition ``g∘f`` is ``g·f``.
    """
    n = len(table)
    if elements is None:
        elements = [str(i) for i in range(n)]
    elements = [str(e) for e in elements]
    idx = {e: i for i, e in enumerate(elements)}
    try:
        mult = [[idx[str(v)] if str(v) in idx else int(v) for v in row] for row in table]
    except ValueError as exc:
        raise NotAGroup(f"bad table entry: {exc}") from None
    if any(len(row) != n for row in mult) or any(not 0 <= v < n for row in mult for v in row):
        raise NotAGroup("table must be square with entries naming elements")
    units = [e for e in range(n) if all(mult[e][x] == x == mult[x][e] for x in range(n))]
    if not units:
        raise NotAGroup("no identity element")
    e = units[0]
    for a, b, c in itertools.product(range(n), repeat=3):
        if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
            raise NotAGroup(f"not associative at {(elements[a], elements[b], elements[c])}")
    for a in range(n):
        if not any(mult[a][b] == e == mult[b][a] for b in range(n)):
            raise NotAGroup(f"{elements[a]} has no inverse")
    morphisms = [(el, 0, 0) for el in elements]
    return FiniteCategory.from_compose(name, [obj], morphisms, [e], lambda f, g: mult[g][f])


def z2() -> FiniteCategory:
    return _z2()


@lru_cache(maxsize=None)
def _z2():
    return gen_group([["e", "s"], ["s", "e"]], ["e", "s"], name="Z2")


def gen_free(objects: Sequence[str], edges: Sequence[tuple[str, str, str]],
             max_path_len: int = FREE_PATH_CAP, name: str = "free") -> FiniteCategory:
    """Free category on an acyclic graph; ``edges`` are ``(name, src, tgt)``.

    Paths are named by their edge names joined with ``"."`` in travel order.
    """
    objects = [str(o) for o in objects]
    idx = {o: i for i, o in enumerate(objects)}
    out_edges = {i: [] for i in range(len(objects))}
    for e, s, t in edges:
        out_edges[idx[s]].append((str(e), idx[t]))
    paths = []  # (edge names, src, tgt)

    def walk(start, node, trail, seen):
        for e, t in out_edges[node]:
            if t in seen:
                raise CapExceeded("graph has a cycle; its free category is infinite")
            if len(trail) + 1 > max_path_len:
                raise CapExceeded(f"path longer than {max_path_len}")
            paths.append((trail + (e,), start, t))
            walk(start, t, trail + (e,), seen | {t})

    for x in range(len(objects)):
        walk(x, x, (), {x})
    paths.sort(key=lambda p: (p[1], p[2], p[0]))
    ids = [((), x, x) for x in range(len(objects))]
    allp = ids + paths
    morphisms = [(f"id_{objects[x]}", x, x) for x in range(len(objects))]
    morphisms += [(".".join(p), s, t) for p, s, t in paths]
    index = {(p, s, t): i for i, (p, s, t) in enumerate(allp)}

    def compose(f, g):
        pf, sf, _ = allp[f]
        pg, _, tg = allp[g]
        return index[pf + pg, sf, tg]

    return FiniteCategory.from_compose(name, objects, morphisms, range(len(objects)), compose)


def gen_inclusion(sub: FiniteCategory, sup: FiniteCategory,
                  object_matching: Mapping[str, str] | None = None,
                  morphism_matching: Mapping[str, str] | None = None,
                  name: str | None = None) -> Functor:
    """Inclusion functor; unmatched names map to the same name in ``sup``."""
    object_matching = object_matching or {}
    morphism_matching = morphism_matching or {}
    om = [sup.obj(object_matching.get(o, o)) for o in sub.objects]
    mm = [sup.mor(morphism_matching.get(m, m)) for m in sub.mor_names]
    if len(set(om)) != len(om) or len(set(mm)) != len(mm):
        raise ValidationError(_single("NotAFunctor", "matching is not injective"), "functor")
    return Functor(name or f"incl_{sub.name}_{sup.name}", sub, sup, om, mm)


def _single(kind, message):
    from .errors import ValidationReport
    r = ValidationReport()
    r.add(kind, message)
    return r


def incl_fixture() -> Functor:
    """Surjections on {1, 2} included into FINSET04."""
    return gen_inclusion(gen_finsurj([1, 2]), gen_finset(4), name="INCL")


def gen_forgetful(top: FiniteCategory, sets: FiniteCategory, name: str | None = None) -> Functor:
    """Forget the topology: ``T{n}.k`` goes to ``S{n}``, maps keep their values."""
    om, mm = [], []
    for o in top.objects:
        om.append(sets.obj(f"S{fintop_object(o)[0]}"))
    for m in range(top.n_morphisms):
        s, t = top.objects[top.src[m]], top.objects[top.tgt[m]]
        ns, nt = fintop_object(s)[0], fintop_object(t)[0]
        mm.append(sets.mor(_map_name(f"S{ns}", f"S{nt}", map_values(top.mor_names[m]))))
    return Functor(name or f"forget_{top.name}", top, sets, om, mm)


def gen_hom_functor(cat: FiniteCategory, B: int, target: FiniteCategory, name: str | None = None) -> Functor:
    """``Hom(B, -)`` into a finite-set category.

    ``X`` goes to the set indexing ``hom(B, X)`` in MorId order and ``f`` to
    postcomposition ``β ↦ f∘β``.
    """
    homs = {x: [int(m) for m in cat.hom(B, x)] for x in range(cat.n_objects)}
    cap = max((int(o[1:]) for o in target.objects if o.startswith("S")), default=-1)
    if any(len(h) > cap for h in homs.values()):
        raise HomSetTooLarge(f"some hom({cat.objects[B]}, X) exceeds the target's largest set S{cap}")
    om = [target.obj(f"S{len(homs[x])}") for x in range(cat.n_objects)]
    mm = []
    for f in range(cat.n_morphisms):
        x, y = int(cat.src[f]), int(cat.tgt[f])
        pos_y = {m: i for i, m in enumerate(homs[y])}
        vals = [pos_y[cat.compose(beta, f)] for beta in homs[x]]
        mm.append(target.mor(_map_name(f"S{len(homs[x])}", f"S{len(homs[y])}", vals)))
    return Functor(name or f"Hom({cat.objects[B]},-)", cat, target, om, mm)


def _finset_size(name: str) -> int:
    if name.startswith("S"):
        return int(name[1:])
    return fintop_object(name)[0]


def fibered_product_oracle(kind: str, cat: FiniteCategory, C: Cospan) -> Span:
    """Construct the fibered-product span directly from element pairs.

    ``kind`` is ``"finset"`` or ``"fintop"``; for spaces the apex carries the
    subspace topology of the product.  Raises :class:`ApexExceedsCap` when
    the apex is not an object of ``cat``.
    """
    cl, cr = C.left, C.right
    vl, vr = map_values(cat.mor_names[cl]), map_values(cat.mor_names[cr])
    pairs = [(x, y) for x in range(len(vl)) for y in range(len(vr)) if vl[x] == vr[y]]
    k = len(pairs)
    left_name, right_name = cat.objects[cat.src[cl]], cat.objects[cat.src[cr]]
    if kind == "finset":
        apex = f"S{k}"
    elif kind == "fintop":
        _, top_l = fintop_object(left_name)
        _, top_r = fintop_object(right_name)
        opens = {0}
        rects = []
        for u in top_l:
            for v in top_r:
                rects.append(sum(1 << i for i, (x, y) in enumerate(pairs) if u >> x & 1 and v >> y & 1))
        # closing the traces of open rectangles under unions gives the subspace topology
        changed = True
        opens |= set(rects)
        while changed:
            changed = False
            for a in list(opens):
                for b in rects:
                    if a | b not in opens:
                        opens.add(a | b)
                        changed = True
        top = tuple(sorted(opens))
        if k > FINTOP_CAP or top not in topologies(k):
            raise ApexExceedsCap(f"fibered product has {k} points")
        apex = f"T{k}.{topologies(k).index(top)}"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if apex not in cat.obj_index:
        raise ApexExceedsCap(f"fibered product apex {apex} (size {k}) is not in {cat.name}")
    sl = cat.mor(_map_name(apex, left_name, [x for x, _ in pairs]))
    sr = cat.mor(_map_name(apex, right_name, [y for _, y in pairs]))
    return Span(sl, sr)


def walking_iso() -> FiniteCategory:
    """Two objects ``x, y`` and a single isomorphism between them."""
    morphisms = [("id_x", 0, 0), ("i", 0, 1), ("j", 1, 0), ("id_y", 1, 1)]
    table = {(0, 0): 0, (0, 1): 1, (1, 2): 0, (1, 3): 1, (2, 0): 2, (2, 1): 3, (3, 2): 2, (3, 3): 3}
    return FiniteCategory.from_table("walking_iso", ["x", "y"], morphisms, [0, 3], table)


def negative_tightness_fixture() -> Functor:
    """A functor that has F-pullbacks everywhere but is not span tight.

    The lattice B2 is sent onto the walking isomorphism (``bot, a -> x`` and
    ``b, top -> y``).  Every span of the walking isomorphism is a pullback,
    so both ``(a<=top, a<=top)`` and ``(b<=top, b<=top)`` are F-pullbacks of
    ``(top<=top, top<=top)``, yet no morphism ``a -> b`` exists upstairs to
    lift the span isomorphism between their images.
    """
    src, tgt = b2_lattice(), walking_iso()
    side = {"bot": "x", "a": "x", "b": "y", "top": "y"}
    om = [tgt.obj(side[o]) for o in src.objects]
    arrow = {("x", "x"): "id_x", ("x", "y"): "i", ("y", "x"): "j", ("y", "y"): "id_y"}
    mm = []
    for m in range(src.n_morphisms):
        s, t = src.objects[src.src[m]], src.objects[src.tgt[m]]
        mm.append(tgt.mor(arrow[side[s], side[t]]))
    return Functor("B2_to_walking_iso", src, tgt, om, mm)


def terminal() -> FiniteCategory:
    return FiniteCategory.from_table("terminal", ["*"], [("id", 0, 0)], [0], {(0, 0): 0})


FIXTURES = {
    "finset04": lambda: gen_finset(4),
    "finsurj12": lambda: gen_finsurj([1, 2]),
    "fintop02": lambda: gen_fintop(2),
    "b2": b2_lattice,
    "z2": z2,
    "terminal": terminal,
    "walking_iso": walking_iso,
}


def identity_on(name: str) -> Functor:
    return identity_functor(FIXTURES[name]())
