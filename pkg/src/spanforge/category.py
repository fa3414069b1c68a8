"""Finite categories and functors stored as validated composition tables.

Objects and morphisms are dense integer ids assigned in declaration order.
Composition is stored per object ``x`` as a matrix whose rows are the
morphisms *into* ``x`` and whose columns are the morphisms *out of* ``x``;
entry ``[f, g]`` holds ``g∘f`` (first ``f``, then ``g``).
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DanglingReference, NotComposable, NotIso, ValidationError, ValidationReport

# cap on witnesses recorded per issue kind
MAX_WITNESSES = 20
# largest (n1 * n2 * n3) block materialized at once during the associativity pass
_ASSOC_CHUNK = 1 << 22


class FiniteCategory:
    """An immutable finite category.

    Build one with :meth:`from_compose` (a Python composition function),
    :meth:`from_table` (an explicit ``{(f, g): g∘f}`` mapping) or
    :func:`validate_category` (the JSON interchange format).  Construction
    validates every axiom and raises :class:`ValidationError` on failure.
    """

    def __init__(self, name, objects, morphisms, identity, tables, *, report=None):
        report = report if report is not None else ValidationReport()
        self.name = str(name)
        self.objects = tuple(str(o) for o in objects)
        self.obj_index = {o: i for i, o in enumerate(self.objects)}
        if len(self.obj_index) != len(self.objects):
            report.add("DuplicateObject", "object names must be unique", "objects")
        morphisms = list(morphisms)
        self.mor_names = tuple(str(m[0]) for m in morphisms)
        self.mor_index = {m: i for i, m in enumerate(self.mor_names)}
        if len(self.mor_index) != len(self.mor_names):
            report.add("DuplicateMorphism", "morphism ids must be unique", "morphisms")
        n_obj = len(self.objects)
        for i, (_, s, t) in enumerate(morphisms):
            if not (0 <= s < n_obj and 0 <= t < n_obj):
                report.add("DanglingReference", f"morphism {self.mor_names[i]!r} has an unknown endpoint",
                           f"morphisms[{i}]")
        if not report.ok:
            raise ValidationError(report)
        self.src = np.array([m[1] for m in morphisms], dtype=np.int64)
        self.tgt = np.array([m[2] for m in morphisms], dtype=np.int64)
        self.identity = np.array(list(identity), dtype=np.int64)

        ids = np.arange(len(morphisms), dtype=np.int64)
        self._in = [ids[self.tgt == x] for x in range(n_obj)]
        self._out = [ids[self.src == x] for x in range(n_obj)]
        self.inpos = np.zeros(len(morphisms), dtype=np.int64)
        self.outpos = np.zeros(len(morphisms), dtype=np.int64)
        for x in range(n_obj):
            self.inpos[self._in[x]] = np.arange(len(self._in[x]))
            self.outpos[self._out[x]] = np.arange(len(self._out[x]))
        self._hom = {}
        for x in range(n_obj):
            for y in range(n_obj):
                self._hom[x, y] = ids[(self.src == x) & (self.tgt == y)]
        self._tables = [np.asarray(t, dtype=np.int32) for t in tables]

        self._check(report)
        if not report.ok:
            raise ValidationError(report)
        for t in self._tables:
            t.setflags(write=False)

    # construction helpers

    @classmethod
    def from_compose(cls, name, objects, morphisms, identity,
                     compose: Callable[[int, int], int]):
        """Build the tables by calling ``compose(f, g) -> g∘f`` on every composable pair."""
        morphisms = list(morphisms)
        n_obj = len(objects)
        ins = [[i for i, m in enumerate(morphisms) if m[2] == x] for x in range(n_obj)]
        outs = [[i for i, m in enumerate(morphisms) if m[1] == x] for x in range(n_obj)]
        tables = []
        for x in range(n_obj):
            t = np.empty((len(ins[x]), len(outs[x])), dtype=np.int64)
            for i, f in enumerate(ins[x]):
                for j, g in enumerate(outs[x]):
                    t[i, j] = compose(f, g)
            tables.append(t)
        return cls(name, objects, morphisms, identity, tables)

    @classmethod
    def from_table(cls, name, objects, morphisms, identity,
                   table: Mapping[tuple[int, int], int], where: Mapping | None = None):
        """Build from an explicit ``{(first, then): composite}`` mapping.

        ``where`` optionally maps each key to a location string used in
        validation messages (e.g. ``"composition[12]"``).
        """
        report = ValidationReport()
        morphisms = list(morphisms)
        n_obj = len(objects)
        n_mor = len(morphisms)
        ins = [[i for i, m in enumerate(morphisms) if m[2] == x] for x in range(n_obj)]
        outs = [[i for i, m in enumerate(morphisms) if m[1] == x] for x in range(n_obj)]
        inpos = {}
        outpos = {}
        for x in range(n_obj):
            inpos.update({f: i for i, f in enumerate(ins[x])})
            outpos.update({g: j for j, g in enumerate(outs[x])})
        tables = [np.full((len(ins[x]), len(outs[x])), -1, dtype=np.int64) for x in range(n_obj)]
        where = where or {}
        for (f, g), h in table.items():
            loc = where.get((f, g), "composition")
            if not (0 <= f < n_mor and 0 <= g < n_mor and 0 <= h < n_mor):
                report.add("DanglingReference", "composition entry names an unknown morphism", loc)
                continue
            if morphisms[f][2] != morphisms[g][1]:
                report.add("SpuriousComposite", "entry given for a non-composable pair", loc,
                           (morphisms[f][0], morphisms[g][0]))
                continue
            tables[morphisms[f][2]][inpos[f], outpos[g]] = h
        if not report.ok:
            raise ValidationError(report)
        return cls(name, objects, morphisms, identity, tables, report=report)

    # validation

    def _check(self, report: ValidationReport) -> None:
        n_obj = len(self.objects)
        n_mor = len(self.mor_names)
        if len(self.identity) != n_obj:
            report.add("BadIdentity", "every object needs exactly one identity", "identities")
            return
        for x, e in enumerate(self.identity):
            if not 0 <= e < n_mor:
                report.add("DanglingReference", f"identity of {self.objects[x]!r} is unknown",
                           f"identities.{self.objects[x]}")
                return
            if self.src[e] != x or self.tgt[e] != x:
                report.add("BadIdentity", f"identity of {self.objects[x]!r} is not an endomorphism of it",
                           f"identities.{self.objects[x]}", (self.mor_names[e],))
        if not report.ok:
            return
        for x in range(n_obj):
            t = self._tables[x]
            if t.shape != (len(self._in[x]), len(self._out[x])):
                report.add("MissingComposite", f"composition table at {self.objects[x]!r} has wrong shape")
                return
        names = self.mor_names
        counts = {}

        def note(kind, message, witness):
            counts[kind] = counts.get(kind, 0) + 1
            if counts[kind] <= MAX_WITNESSES:
                report.add(kind, message, "composition", witness)

        for x in range(n_obj):
            t = self._tables[x]
            for i, j in zip(*np.nonzero(t < 0)):
                f, g = self._in[x][i], self._out[x][j]
                note("MissingComposite", "composable pair has no composite", (names[f], names[g]))
            ok = t >= 0
            safe = np.where(ok, t, 0)
            bad = ok & ((self.src[safe] != self.src[self._in[x]][:, None])
                        | (self.tgt[safe] != self.tgt[self._out[x]][None, :]))
            for i, j in zip(*np.nonzero(bad)):
                f, g = self._in[x][i], self._out[x][j]
                note("BadComposite", "composite has the wrong source or target",
                     (names[f], names[g], names[t[i, j]]))
        if not report.ok:
            return

        for x in range(n_obj):
            t = self._tables[x]
            e = self.identity[x]
            right = t[:, self.outpos[e]]  # id_x ∘ f
            for i in np.nonzero(right != self._in[x])[0]:
                f = self._in[x][i]
                note("BadIdentity", "id_tgt(f)∘f != f", (names[f],))
            left = t[self.inpos[e], :]  # g ∘ id_x
            for j in np.nonzero(left != self._out[x])[0]:
                g = self._out[x][j]
                note("BadIdentity", "g∘id_src(g) != g", (names[g],))
        if not report.ok:
            return

        for x in range(n_obj):
            n1 = len(self._in[x])
            if n1 == 0:
                continue
            tx = self._tables[x]
            for y in range(n_obj):
                hom = self._hom[x, y]
                n3 = len(self._out[y])
                if len(hom) == 0 or n3 == 0:
                    continue
                ty = self._tables[y]
                step = max(1, _ASSOC_CHUNK // max(1, n1 * n3))
                for k0 in range(0, len(hom), step):
                    gs = hom[k0:k0 + step]
                    hg = ty[self.inpos[gs], :]                 # (n2, n3): h∘g
                    lhs = tx[:, self.outpos[hg]]                # (h∘g)∘f
                    gf = tx[:, self.outpos[gs]]                 # (n1, n2): g∘f
                    rhs = ty[self.inpos[gf], :]                 # h∘(g∘f)
                    neq = lhs != rhs
                    if not neq.any():
                        continue
                    diff = np.argwhere(neq)
                    for i, j, k in diff[:MAX_WITNESSES]:
                        f, g, h = self._in[x][i], gs[j], self._out[y][k]
                        note("AssociativityViolation", "(h∘g)∘f != h∘(g∘f)",
                             (names[f], names[g], names[h]))
                    if len(diff) > MAX_WITNESSES:
                        counts["AssociativityViolation"] += len(diff) - MAX_WITNESSES

    # basic queries

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_names)

    def hom(self, a: int, b: int) -> np.ndarray:
        return self._hom[a, b]

    def morphisms_into(self, x: int) -> np.ndarray:
        return self._in[x]

    def morphisms_out_of(self, x: int) -> np.ndarray:
        return self._out[x]

    def compose(self, f: int, g: int) -> int:
        """``g∘f``; raises :class:`NotComposable` unless ``tgt(f) == src(g)``."""
        self._check_mor(f)
        self._check_mor(g)
        x = self.tgt[f]
        if x != self.src[g]:
            raise NotComposable(f"cannot compose {self.mor_names[f]!r} then {self.mor_names[g]!r}")
        return int(self._tables[x][self.inpos[f], self.outpos[g]])

    def then(self, fs, g: int) -> np.ndarray:
        """``g∘f`` for every ``f`` in ``fs`` (all with target ``src(g)``)."""
        fs = np.asarray(fs, dtype=np.int64)
        return self._tables[self.src[g]][self.inpos[fs], self.outpos[g]]

    def after(self, f: int, gs) -> np.ndarray:
        """``g∘f`` for every ``g`` in ``gs`` (all with source ``tgt(f)``)."""
        gs = np.asarray(gs, dtype=np.int64)
        return self._tables[self.tgt[f]][self.inpos[f], self.outpos[gs]]

    def table(self, x: int) -> np.ndarray:
        return self._tables[x]

    def _check_mor(self, m):
        if not 0 <= m < self.n_morphisms:
            raise DanglingReference(f"no morphism with id {m} in {self.name!r}")

    def _check_obj(self, x):
        if not 0 <= x < self.n_objects:
            raise DanglingReference(f"no object with id {x} in {self.name!r}")

    def obj(self, name: str) -> int:
        try:
            return self.obj_index[name]
        except KeyError:
            raise DanglingReference(f"no object named {name!r} in {self.name!r}") from None

    def mor(self, name: str) -> int:
        try:
            return self.mor_index[name]
        except KeyError:
            raise DanglingReference(f"no morphism named {name!r} in {self.name!r}") from None

    @cached_property
    def inverse(self) -> np.ndarray:
        """``inverse[f]`` is the inverse of ``f`` or -1."""
        inv = np.full(self.n_morphisms, -1, dtype=np.int64)
        for a in range(self.n_objects):
            for b in range(self.n_objects):
                fs, gs = self._hom[a, b], self._hom[b, a]
                if len(fs) == 0 or len(gs) == 0:
                    continue
                gf = self._tables[b][self.inpos[fs]][:, self.outpos[gs]]   # g∘f
                fg = self._tables[a][self.inpos[gs]][:, self.outpos[fs]]   # f∘g
                ok = (gf == self.identity[a]) & (fg.T == self.identity[b])
                rows, cols = np.nonzero(ok)
                inv[fs[rows]] = gs[cols]
        return inv

    @cached_property
    def isos_into(self) -> list[np.ndarray]:
        """Isomorphisms with target ``x``, in MorId order."""
        inv = self.inverse
        return [m[inv[m] >= 0] for m in self._in]

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, {self.n_objects} objects, {self.n_morphisms} morphisms)"


class Functor:
    """A validated functor between two :class:`FiniteCategory` instances."""

    def __init__(self, name, source: FiniteCategory, target: FiniteCategory,
                 object_map: Sequence[int], morphism_map: Sequence[int]):
        self.name = str(name)
        self.source = source
        self.target = target
        self.object_map = np.array(list(object_map), dtype=np.int64)
        self.morphism_map = np.array(list(morphism_map), dtype=np.int64)
        report = self._check()
        if not report.ok:
            raise ValidationError(report, "functor")
        self.object_map.setflags(write=False)
        self.morphism_map.setflags(write=False)

    def _check(self) -> ValidationReport:
        report = ValidationReport()
        src, tgt = self.source, self.target
        if len(self.object_map) != src.n_objects:
            report.add("DanglingReference", "object_map must cover every source object", "object_map")
        if len(self.morphism_map) != src.n_morphisms:
            report.add("DanglingReference", "morphism_map must cover every source morphism", "morphism_map")
        if not report.ok:
            return report
        if np.any((self.object_map < 0) | (self.object_map >= tgt.n_objects)):
            report.add("DanglingReference", "object_map hits an unknown target object", "object_map")
        if np.any((self.morphism_map < 0) | (self.morphism_map >= tgt.n_morphisms)):
            report.add("DanglingReference", "morphism_map hits an unknown target morphism", "morphism_map")
        if not report.ok:
            return report
        om, mm = self.object_map, self.morphism_map
        names = src.mor_names
        for m in range(src.n_morphisms):
            if tgt.src[mm[m]] != om[src.src[m]] or tgt.tgt[mm[m]] != om[src.tgt[m]]:
                report.add("NotAFunctor", "image does not respect source/target", f"morphism_map.{names[m]}",
                           (names[m],))
        for x in range(src.n_objects):
            if mm[src.identity[x]] != tgt.identity[om[x]]:
                report.add("NotAFunctor", "identity not preserved", f"object_map.{src.objects[x]}",
                           (names[src.identity[x]],))
        if not report.ok:
            return report
        for x in range(src.n_objects):
            ins, outs = src.morphisms_into(x), src.morphisms_out_of(x)
            if len(ins) == 0 or len(outs) == 0:
                continue
            lhs = mm[src.table(x)]
            rhs = tgt.table(om[x])[tgt.inpos[mm[ins]]][:, tgt.outpos[mm[outs]]]
            for i, j in np.argwhere(lhs != rhs)[:MAX_WITNESSES]:
                report.add("NotAFunctor", "F(g∘f) != F(g)∘F(f)", "morphism_map",
                           (names[ins[i]], names[outs[j]]))
        return report

    def __call__(self, m: int) -> int:
        return apply_functor(self, m)

    def __repr__(self):
        return f"Functor({self.name!r}: {self.source.name} -> {self.target.name})"


# module-level operations

def compose(cat: FiniteCategory, f: int, g: int) -> int:
    return cat.compose(f, g)


def hom_set(cat: FiniteCategory, a: int, b: int) -> list[int]:
    cat._check_obj(a)
    cat._check_obj(b)
    return [int(m) for m in cat.hom(a, b)]


def invert(cat: FiniteCategory, f: int) -> int:
    cat._check_mor(f)
    g = int(cat.inverse[f])
    if g < 0:
        raise NotIso(f"{cat.mor_names[f]!r} is not an isomorphism")
    return g


def is_iso(cat: FiniteCategory, f: int) -> bool:
    return bool(cat.inverse[f] >= 0)


def apply_functor(F: Functor, m: int) -> int:
    F.source._check_mor(m)
    return int(F.morphism_map[m])


def apply_functor_obj(F: Functor, x: int) -> int:
    F.source._check_obj(x)
    return int(F.object_map[x])


def identity_functor(cat: FiniteCategory) -> Functor:
    return Functor(f"Id_{cat.name}", cat, cat, range(cat.n_objects), range(cat.n_morphisms))


def validate_category(raw: Mapping) -> FiniteCategory:
    """Parse and validate a category in the JSON interchange format."""
    report = ValidationReport()
    for key in ("name", "objects", "morphisms", "identities", "composition"):
        if key not in raw:
            report.add("DanglingReference", f"missing key {key!r}", key)
    if not report.ok:
        raise ValidationError(report)
    objects = [str(o) for o in raw["objects"]]
    obj_index = {o: i for i, o in enumerate(objects)}
    morphisms = []
    for i, m in enumerate(raw["morphisms"]):
        s, t = obj_index.get(m.get("src"), -1), obj_index.get(m.get("tgt"), -1)
        if s < 0 or t < 0:
            report.add("DanglingReference", f"morphism {m.get('id')!r} names an unknown object",
                       f"morphisms[{i}]")
        morphisms.append((str(m.get("id")), s, t))
    mor_index = {m[0]: i for i, m in enumerate(morphisms)}
    identity = []
    for o in objects:
        e = raw["identities"].get(o)
        if e not in mor_index:
            report.add("DanglingReference" if e is not None else "BadIdentity",
                       f"identity of {o!r} missing or unknown", f"identities.{o}")
            identity.append(-1)
        else:
            identity.append(mor_index[e])
    extra = set(raw["identities"]) - set(objects)
    for o in sorted(extra):
        report.add("DanglingReference", f"identity given for unknown object {o!r}", f"identities.{o}")
    table = {}
    where = {}
    for i, entry in enumerate(raw["composition"]):
        loc = f"composition[{i}]"
        try:
            f, g, h = (mor_index[entry[k]] for k in ("first", "then", "equals"))
        except KeyError:
            report.add("DanglingReference", "composition entry names an unknown morphism", loc)
            continue
        if (f, g) in table:
            report.add("DuplicateComposite", "pair listed twice", loc, (entry["first"], entry["then"]))
            continue
        table[f, g] = h
        where[f, g] = loc
    if not report.ok:
        raise ValidationError(report)
    return FiniteCategory.from_table(raw["name"], objects, morphisms, identity, table, where)


def validate_functor(raw: Mapping, src: FiniteCategory, tgt: FiniteCategory) -> Functor:
    """Parse a functor description (names) against two validated categories."""
    report = ValidationReport()
    om, mm = raw.get("object_map", {}), raw.get("morphism_map", {})
    object_map = []
    for o in src.objects:
        if o not in om or om[o] not in tgt.obj_index:
            report.add("DanglingReference", f"object {o!r} unmapped or mapped to an unknown object",
                       f"object_map.{o}")
            object_map.append(-1)
        else:
            object_map.append(tgt.obj_index[om[o]])
    morphism_map = []
    for m in src.mor_names:
        if m not in mm or mm[m] not in tgt.mor_index:
            report.add("DanglingReference", f"morphism {m!r} unmapped or mapped to an unknown morphism",
                       f"morphism_map.{m}")
            morphism_map.append(-1)
        else:
            morphism_map.append(tgt.mor_index[mm[m]])
    if not report.ok:
        raise ValidationError(report, "functor")
    return Functor(raw.get("name", "F"), src, tgt, object_map, morphism_map)


def category_to_dict(cat: FiniteCategory) -> dict:
    names = cat.mor_names
    composition = []
    for f in range(cat.n_morphisms):
        x = cat.tgt[f]
        row = cat.table(x)[cat.inpos[f]]
        for g, h in zip(cat.morphisms_out_of(x), row):
            composition.append((f, int(g), int(h)))
    composition.sort()
    return {
        "name": cat.name,
        "objects": list(cat.objects),
        "morphisms": [{"id": names[m], "src": cat.objects[cat.src[m]], "tgt": cat.objects[cat.tgt[m]]}
                      for m in range(cat.n_morphisms)],
        "identities": {cat.objects[x]: names[cat.identity[x]] for x in range(cat.n_objects)},
        "composition": [{"first": names[f], "then": names[g], "equals": names[h]}
                        for f, g, h in composition],
    }


def functor_to_dict(F: Functor, source_path: str, target_path: str) -> dict:
    s, t = F.source, F.target
    return {
        "name": F.name,
        "source": source_path,
        "target": target_path,
        "object_map": {s.objects[x]: t.objects[F.object_map[x]] for x in range(s.n_objects)},
        "morphism_map": {s.mor_names[m]: t.mor_names[F.morphism_map[m]] for m in range(s.n_morphisms)},
    }


def composable_pairs(cat: FiniteCategory) -> Iterable[tuple[int, int]]:
    for f in range(cat.n_morphisms):
        for g in cat.morphisms_out_of(cat.tgt[f]):
            yield f, int(g)
