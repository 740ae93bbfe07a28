"""Finite categories given by explicit composition data.

Morphisms and objects are addressed by integer index; names are kept for
I/O only.  Three concrete representations share one interface:

* ``TableCategory``  -- an explicit composition table (loaded from JSON),
* ``ConcreteCategory`` -- morphisms are functions between finite carriers
  (used by the Delta, F, poset and tree generators),
* ``ProductCategory`` -- the product of two categories, composed lazily.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import (
    AssociativityViolation,
    DanglingReference,
    DuplicateName,
    IdentityViolation,
    MissingComposite,
    SizeOverflow,
    ValidationError,
    cap,
)


@dataclass(frozen=True)
class Verdict:
    """Answer with an optional witness; truthy iff ``ok`` is True.

    ``ok`` is None for an undecided three-valued answer.
    """

    ok: Optional[bool]
    witness: object = None
    note: str = ""

    def __bool__(self):
        return self.ok is True

    @property
    def answer(self):
        return {True: "yes", False: "no", None: "unknown"}[self.ok]


@dataclass(frozen=True)
class MorphismClass:
    mono: bool
    epi: bool
    split_mono: bool
    split_epi: bool
    iso: bool
    section: Optional[int] = None
    retraction: Optional[int] = None


class FinCategory:
    def __init__(self, name, objects, morphisms, dom, cod, identities):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(morphisms)
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.identities = tuple(identities)
        self._cache = {}
        self._obj_index = None
        self._mor_index = None

    def __repr__(self):
        return (f"<{type(self).__name__} {self.name!r}: {len(self.objects)} objects, "
                f"{len(self.morphisms)} morphisms>")

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.morphisms)

    def object_index(self, name):
        if self._obj_index is None:
            self._obj_index = {n: i for i, n in enumerate(self.objects)}
        try:
            return self._obj_index[name]
        except KeyError:
            raise DanglingReference(f"unknown object {name!r}", witness=name) from None

    def morphism_index(self, name):
        if self._mor_index is None:
            self._mor_index = {n: i for i, n in enumerate(self.morphisms)}
        try:
            return self._mor_index[name]
        except KeyError:
            raise DanglingReference(f"unknown morphism {name!r}", witness=name) from None

    def _buckets(self):
        b = self._cache.get("buckets")
        if b is None:
            b = {}
            for f in range(self.n_morphisms):
                b.setdefault((self.dom[f], self.cod[f]), []).append(f)
            b = {k: tuple(v) for k, v in b.items()}
            self._cache["buckets"] = b
        return b

    def hom(self, a, b) -> tuple:
        return self._buckets().get((a, b), ())

    def into(self, b) -> tuple:
        """All morphisms with codomain ``b`` in index order."""
        key = ("into", b)
        r = self._cache.get(key)
        if r is None:
            r = tuple(sorted(itertools.chain.from_iterable(
                self.hom(a, b) for a in range(self.n_objects))))
            self._cache[key] = r
        return r

    def out_of(self, a) -> tuple:
        key = ("out", a)
        r = self._cache.get(key)
        if r is None:
            r = tuple(sorted(itertools.chain.from_iterable(
                self.hom(a, b) for b in range(self.n_objects))))
            self._cache[key] = r
        return r

    def compose(self, g, f) -> int:
        """The composite ``g . f`` (``f`` first); requires cod(f) == dom(g)."""
        raise NotImplementedError

    def composable_pairs(self) -> Iterator[tuple]:
        for b in range(self.n_objects):
            ins, outs = self.into(b), self.out_of(b)
            for g in outs:
                for f in ins:
                    yield g, f

    def is_identity(self, f):
        return self.identities[self.dom[f]] == f and self.dom[f] == self.cod[f]

    def classify(self, f) -> MorphismClass:
        memo = self._cache.setdefault("class", {})
        c = memo.get(f)
        if c is None:
            c = memo[f] = _classify_generic(self, f)
        return c

    def mono_leq(self, c, d) -> bool:
        """Whether some mono c -> d exists."""
        return any(self.classify(f).mono for f in self.hom(c, d))

    def to_spec(self) -> dict:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "morphisms": [{"name": n, "dom": self.objects[self.dom[i]],
                           "cod": self.objects[self.cod[i]]}
                          for i, n in enumerate(self.morphisms)],
            "identities": {self.objects[a]: self.morphisms[i]
                           for a, i in enumerate(self.identities)},
            "composition": [{"g": self.morphisms[g], "f": self.morphisms[f],
                             "gf": self.morphisms[self.compose(g, f)]}
                            for g, f in sorted(self.composable_pairs())],
        }


def _classify_generic(cat, f):
    A, B = cat.dom[f], cat.cod[f]
    mono = True
    for X in range(cat.n_objects):
        seen = set()
        for g in cat.hom(X, A):
            h = cat.compose(f, g)
            if h in seen:
                mono = False
                break
            seen.add(h)
        if not mono:
            break
    epi = True
    for Y in range(cat.n_objects):
        seen = set()
        for h in cat.hom(B, Y):
            k = cat.compose(h, f)
            if k in seen:
                epi = False
                break
            seen.add(k)
        if not epi:
            break
    retraction = next((r for r in cat.hom(B, A)
                       if cat.compose(r, f) == cat.identities[A]), None)
    section = next((s for s in cat.hom(B, A)
                    if cat.compose(f, s) == cat.identities[B]), None)
    split_mono = retraction is not None
    split_epi = section is not None
    return MorphismClass(
        mono=mono, epi=epi, split_mono=split_mono, split_epi=split_epi,
        iso=split_mono and split_epi, section=section, retraction=retraction)


class TableCategory(FinCategory):
    def __init__(self, name, objects, morphisms, dom, cod, identities, table):
        super().__init__(name, objects, morphisms, dom, cod, identities)
        self._table = table

    def compose(self, g, f):
        return self._table[(g, f)]


class ConcreteCategory(FinCategory):
    """Objects are finite carriers ``range(size)``; morphisms are maps given as tuples."""

    def __init__(self, name, objects, sizes, maps, size_cap=None):
        # maps: iterable of (name, dom, cod, image-tuple); identities must be present
        names, dom, cod, images = [], [], [], []
        limit = cap("morphisms", size_cap)
        for n, a, b, img in maps:
            names.append(n)
            dom.append(a)
            cod.append(b)
            images.append(tuple(img))
            if len(names) > limit:
                raise SizeOverflow(f"{name}: more than {limit} morphisms", witness=limit)
        self.images = tuple(images)
        self._lookup = {(dom[i], cod[i], images[i]): i for i in range(len(names))}
        self.sizes = tuple(sizes)
        ids = [self._lookup[(a, a, tuple(range(n)))] for a, n in enumerate(self.sizes)]
        super().__init__(name, objects, names, dom, cod, ids)

    def compose(self, g, f):
        gi = self.images[g]
        return self._lookup[(self.dom[f], self.cod[g], tuple(gi[x] for x in self.images[f]))]


class ProductCategory(FinCategory):
    """``left x right`` with object (a, b) at index a*|right| + b and likewise for morphisms."""

    def __init__(self, left: FinCategory, right: FinCategory, size_cap=None):
        n_mor = left.n_morphisms * right.n_morphisms
        limit = cap("morphisms", size_cap)
        if n_mor > limit:
            raise SizeOverflow(
                f"product {left.name} x {right.name} has {n_mor} morphisms (cap {limit})",
                witness=n_mor)
        self.left, self.right = left, right
        m2, n2 = right.n_objects, right.n_morphisms
        objects = [f"({a},{b})" for a in left.objects for b in right.objects]
        names = [f"({f},{g})" for f in left.morphisms for g in right.morphisms]
        dom = [left.dom[i] * m2 + right.dom[j]
               for i in range(left.n_morphisms) for j in range(n2)]
        cod = [left.cod[i] * m2 + right.cod[j]
               for i in range(left.n_morphisms) for j in range(n2)]
        ids = [left.identities[a] * n2 + right.identities[b]
               for a in range(left.n_objects) for b in range(m2)]
        super().__init__(f"{left.name}x{right.name}", objects, names, dom, cod, ids)

    def split_object(self, x):
        return divmod(x, self.right.n_objects)

    def split_morphism(self, f):
        return divmod(f, self.right.n_morphisms)

    def pair_object(self, a, b):
        return a * self.right.n_objects + b

    def pair_morphism(self, f, g):
        return f * self.right.n_morphisms + g

    def hom(self, x, y):
        key = ("hom", x, y)
        r = self._cache.get(key)
        if r is None:
            (a1, b1), (a2, b2) = self.split_object(x), self.split_object(y)
            n2 = self.right.n_morphisms
            r = tuple(i * n2 + j for i in self.left.hom(a1, a2)
                      for j in self.right.hom(b1, b2))
            self._cache[key] = r
        return r

    def compose(self, g, f):
        g1, g2 = self.split_morphism(g)
        f1, f2 = self.split_morphism(f)
        return self.pair_morphism(self.left.compose(g1, f1), self.right.compose(g2, f2))

    def classify(self, f):
        # componentwise; agreement with the generic scan is checked in the test suite
        memo = self._cache.setdefault("class", {})
        c = memo.get(f)
        if c is None:
            f1, f2 = self.split_morphism(f)
            c1, c2 = self.left.classify(f1), self.right.classify(f2)
            sec = (self.pair_morphism(c1.section, c2.section)
                   if c1.section is not None and c2.section is not None else None)
            ret = (self.pair_morphism(c1.retraction, c2.retraction)
                   if c1.retraction is not None and c2.retraction is not None else None)
            c = memo[f] = MorphismClass(
                mono=c1.mono and c2.mono, epi=c1.epi and c2.epi,
                split_mono=c1.split_mono and c2.split_mono,
                split_epi=c1.split_epi and c2.split_epi,
                iso=c1.iso and c2.iso, section=sec, retraction=ret)
        return c

    def mono_leq(self, c, d):
        (a1, b1), (a2, b2) = self.split_object(c), self.split_object(d)
        return self.left.mono_leq(a1, a2) and self.right.mono_leq(b1, b2)


@dataclass(frozen=True)
class FullSubcategory:
    category: FinCategory = field(compare=False, hash=False, repr=False)
    objects: frozenset

    @classmethod
    def of(cls, cat, objects: Iterable):
        idx = [cat.object_index(o) if isinstance(o, str) else int(o) for o in objects]
        for i in idx:
            if not 0 <= i < cat.n_objects:
                raise DanglingReference(f"object index {i} out of range", witness=i)
        return cls(cat, frozenset(idx))

    @classmethod
    def empty(cls, cat):
        return cls(cat, frozenset())

    @classmethod
    def whole(cls, cat):
        return cls(cat, frozenset(range(cat.n_objects)))

    def __contains__(self, x):
        return x in self.objects

    def __len__(self):
        return len(self.objects)

    def __le__(self, other):
        return self.objects <= other.objects

    def __lt__(self, other):
        return self.objects < other.objects

    def __or__(self, other):
        return FullSubcategory(self.category, self.objects | other.objects)

    def sorted(self):
        return sorted(self.objects)

    def names(self):
        return [self.category.objects[i] for i in self.sorted()]

    def __str__(self):
        return "{" + ", ".join(self.names()) + "}"


# -- operations -------------------------------------------------------------

def build_category(spec: dict) -> TableCategory:
    """Validate a JSON-style category description and build a ``TableCategory``."""
    try:
        name = spec.get("name", "C")
        objects = list(spec["objects"])
        mor_specs = list(spec["morphisms"])
        id_spec = dict(spec["identities"])
        comp_spec = list(spec["composition"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed category description: {exc}") from None

    if len(set(objects)) != len(objects):
        dup = next(o for o in objects if objects.count(o) > 1)
        raise DuplicateName(f"duplicate object name {dup!r}", witness=dup)
    obj_index = {o: i for i, o in enumerate(objects)}
    names, dom, cod = [], [], []
    for m in mor_specs:
        for key in ("dom", "cod"):
            if m[key] not in obj_index:
                raise DanglingReference(
                    f"morphism {m['name']!r} has unknown {key} {m[key]!r}", witness=m["name"])
        names.append(m["name"])
        dom.append(obj_index[m["dom"]])
        cod.append(obj_index[m["cod"]])
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DuplicateName(f"duplicate morphism name {dup!r}", witness=dup)
    if len(names) > cap("morphisms"):
        raise SizeOverflow(f"{len(names)} morphisms exceed the cap", witness=len(names))
    mor_index = {n: i for i, n in enumerate(names)}

    identities = []
    for o in objects:
        if o not in id_spec:
            raise IdentityViolation(f"object {o!r} has no identity", witness=o)
        i = mor_index.get(id_spec[o])
        if i is None:
            raise DanglingReference(f"identity {id_spec[o]!r} is not a listed morphism",
                                    witness=id_spec[o])
        if dom[i] != obj_index[o] or cod[i] != obj_index[o]:
            raise IdentityViolation(f"identity {id_spec[o]!r} is not an endomorphism of {o!r}",
                                    witness=id_spec[o])
        identities.append(i)
    for o in id_spec:
        if o not in obj_index:
            raise DanglingReference(f"identity given for unknown object {o!r}", witness=o)

    table = {}
    for entry in comp_spec:
        try:
            g, f, gf = mor_index[entry["g"]], mor_index[entry["f"]], mor_index[entry["gf"]]
        except KeyError as exc:
            raise DanglingReference(f"composition entry {entry} names unknown morphism {exc}",
                                    witness=entry) from None
        if cod[f] != dom[g]:
            raise DanglingReference(f"composition entry {entry} is not composable", witness=entry)
        if dom[gf] != dom[f] or cod[gf] != cod[g]:
            raise DanglingReference(
                f"composite {entry['gf']!r} of {entry} has the wrong domain or codomain",
                witness=entry)
        if table.get((g, f), gf) != gf:
            raise ValidationError(f"conflicting composition entries for {entry}", witness=entry)
        table[(g, f)] = gf

    cat = TableCategory(name, objects, names, dom, cod, identities, table)
    for g, f in cat.composable_pairs():
        if (g, f) not in table:
            raise MissingComposite(f"no composite listed for {names[g]} . {names[f]}",
                                   witness=[names[g], names[f]])
    _check_identity_laws(cat)
    _check_associativity(cat)
    return cat


def _check_identity_laws(cat):
    for f in range(cat.n_morphisms):
        if cat.compose(f, cat.identities[cat.dom[f]]) != f:
            raise IdentityViolation(f"{cat.morphisms[f]} . id != {cat.morphisms[f]}",
                                    witness=[cat.morphisms[f], "right"])
        if cat.compose(cat.identities[cat.cod[f]], f) != f:
            raise IdentityViolation(f"id . {cat.morphisms[f]} != {cat.morphisms[f]}",
                                    witness=[cat.morphisms[f], "left"])


def _check_associativity(cat):
    """Vectorized check of h(gf) = (hg)f over every composable triple."""
    n = cat.n_objects
    local = {}
    for (a, b), fs in cat._buckets().items():
        for k, f in enumerate(fs):
            local[f] = k
    tables = {}

    def table(a, b, c):
        key = (a, b, c)
        if key not in tables:
            gs, fs = cat.hom(b, c), cat.hom(a, b)
            t = np.empty((len(gs), len(fs)), dtype=np.int32)
            for i, g in enumerate(gs):
                for j, f in enumerate(fs):
                    t[i, j] = local[cat.compose(g, f)]
            tables[key] = t
        return tables[key]

    for a, b, c, d in itertools.product(range(n), repeat=4):
        F, G, H = cat.hom(a, b), cat.hom(b, c), cat.hom(c, d)
        if not (F and G and H):
            continue
        t_abc, t_acd = table(a, b, c), table(a, c, d)
        t_bcd, t_abd = table(b, c, d), table(a, b, d)
        for hi in range(len(H)):
            lhs = t_acd[hi][t_abc]                  # h.(g.f)  shape (G, F)
            rhs = t_abd[t_bcd[hi]]                  # (h.g).f  shape (G, F)
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                gi, fi = bad[0]
                w = [cat.morphisms[H[hi]], cat.morphisms[G[gi]], cat.morphisms[F[fi]]]
                raise AssociativityViolation(f"(h.g).f != h.(g.f) for {w}", witness=w)


def classify_morphism(cat: FinCategory, f: int) -> MorphismClass:
    return cat.classify(f)


def split_epi_mono_factor(cat: FinCategory, f: int) -> Optional[tuple]:
    """Return ``(e, m)`` with ``f = m . e``, ``e`` split epi and ``m`` mono, or None.

    Any such ``m`` equals ``f . s`` for a section ``s`` of ``e``, so scanning the
    split epis out of dom(f) in index order yields the lexicographically least pair.
    """
    if isinstance(cat, ProductCategory):
        f1, f2 = cat.split_morphism(f)
        p1 = split_epi_mono_factor(cat.left, f1)
        p2 = split_epi_mono_factor(cat.right, f2)
        if p1 is None or p2 is None:
            return None
        return cat.pair_morphism(p1[0], p2[0]), cat.pair_morphism(p1[1], p2[1])
    for e in cat.out_of(cat.dom[f]):
        ce = cat.classify(e)
        if not ce.split_epi:
            continue
        m = cat.compose(f, ce.section)
        if cat.classify(m).mono and cat.compose(m, e) == f:
            return e, m
    return None


def has_factorization_property(cat: FinCategory) -> Verdict:
    memo = cat._cache.get("factorization")
    if memo is None:
        if isinstance(cat, ProductCategory):
            v1 = has_factorization_property(cat.left)
            v2 = has_factorization_property(cat.right)
            if not v1:
                memo = Verdict(False, cat.pair_morphism(
                    v1.witness, cat.right.identities[0]))
            elif not v2:
                memo = Verdict(False, cat.pair_morphism(
                    cat.left.identities[0], v2.witness))
            else:
                memo = Verdict(True)
        else:
            memo = Verdict(True)
            for f in range(cat.n_morphisms):
                if split_epi_mono_factor(cat, f) is None:
                    memo = Verdict(False, f)
                    break
        cat._cache["factorization"] = memo
    return memo


def product(cat1: FinCategory, cat2: FinCategory, size_cap=None) -> ProductCategory:
    return ProductCategory(cat1, cat2, size_cap=size_cap)


def mono_preorder(cat: FinCategory) -> list:
    """``leq[c][d]`` is True iff a mono c -> d exists."""
    memo = cat._cache.get("mono_preorder")
    if memo is None:
        n = cat.n_objects
        memo = [[cat.mono_leq(c, d) for d in range(n)] for c in range(n)]
        cat._cache["mono_preorder"] = memo
    return memo


def monos_into(cat: FinCategory, d: int) -> Iterator[int]:
    for f in cat.into(d):
        if cat.classify(f).mono:
            yield f


def is_subobject_closed(cat: FinCategory, S: FullSubcategory) -> Verdict:
    for d in S.sorted():
        for c in range(cat.n_objects):
            if c in S:
                continue
            for f in cat.hom(c, d):
                if cat.classify(f).mono:
                    return Verdict(False, f)
    return Verdict(True)


def terminal_object(cat: FinCategory) -> Optional[int]:
    for t in range(cat.n_objects):
        if all(len(cat.hom(x, t)) == 1 for x in range(cat.n_objects)):
            return t
    return None
