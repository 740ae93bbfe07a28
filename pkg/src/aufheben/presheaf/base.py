"""Finite presheaves, subpresheaves and natural transformations.

A presheaf stores, for every morphism f: C -> D, its action X(D) -> X(C) as a
tuple of local element indices.  Elements also carry a global index (object
blocks laid out in object order) so that subpresheaves are plain int bitmasks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import (
    DanglingReference,
    FunctorialityViolation,
    NaturalityViolation,
    ValidationError,
)
from ..fincat import FinCategory


class FinPresheaf:
    def __init__(self, category: FinCategory, elements, actions, validate=True):
        self.category = category
        self.elements = tuple(tuple(e) for e in elements)
        self.actions = tuple(tuple(a) for a in actions)
        if len(self.elements) != category.n_objects:
            raise ValidationError("one element list per object is required")
        if len(self.actions) != category.n_morphisms:
            raise ValidationError("one action per morphism is required")
        self.offsets = []
        total = 0
        for els in self.elements:
            self.offsets.append(total)
            total += len(els)
        self.size = total
        self.obj_of = [d for d, els in enumerate(self.elements) for _ in els]
        self._down = None
        if validate:
            self._validate()

    def __repr__(self):
        return f"<FinPresheaf over {self.category.name}: {list(map(len, self.elements))}>"

    def _validate(self):
        cat = self.category
        for f in range(cat.n_morphisms):
            a = self.actions[f]
            if len(a) != len(self.elements[cat.cod[f]]):
                raise FunctorialityViolation(
                    f"action of {cat.morphisms[f]} is not total", witness=cat.morphisms[f])
            n_dom = len(self.elements[cat.dom[f]])
            if any(not 0 <= y < n_dom for y in a):
                raise FunctorialityViolation(
                    f"action of {cat.morphisms[f]} leaves its domain", witness=cat.morphisms[f])
        for d in range(cat.n_objects):
            ident = self.actions[cat.identities[d]]
            for x, y in enumerate(ident):
                if x != y:
                    raise FunctorialityViolation(
                        f"x.id != x for {self.elements[d][x]}",
                        witness=[self.elements[d][x], cat.morphisms[cat.identities[d]]])
        for g, f in cat.composable_pairs():
            ag, af, agf = self.actions[g], self.actions[f], self.actions[cat.compose(g, f)]
            for x in range(len(ag)):
                if af[ag[x]] != agf[x]:
                    raise FunctorialityViolation(
                        "(x.g).f != x.(g f)",
                        witness=[self.elements[cat.cod[g]][x], cat.morphisms[g], cat.morphisms[f]])

    # -- indexing ----------------------------------------------------------

    def gid(self, d, x):
        return self.offsets[d] + x

    def local(self, g):
        d = self.obj_of[g]
        return d, g - self.offsets[d]

    def element_index(self, d, name):
        try:
            return self.elements[d].index(name)
        except ValueError:
            raise DanglingReference(f"no element {name!r} at {self.category.objects[d]}",
                                    witness=name) from None

    def act(self, f, x):
        """x . f for x in X(cod f); returns a local index in X(dom f)."""
        return self.actions[f][x]

    @property
    def top(self):
        return (1 << self.size) - 1

    def object_mask(self, d):
        return ((1 << len(self.elements[d])) - 1) << self.offsets[d]

    def down(self, g):
        """Bitmask of the elements x.f for the element with global index g."""
        if self._down is None:
            cat = self.category
            down = []
            for d, els in enumerate(self.elements):
                into = cat.into(d)
                for x in range(len(els)):
                    m = 0
                    for f in into:
                        m |= 1 << (self.offsets[cat.dom[f]] + self.actions[f][x])
                    down.append(m)
            self._down = down
        return self._down[g]

    def element_preorder(self):
        """leq[g][h] iff g = h.f for some f."""
        n = self.size
        return [[bool(self.down(h) >> g & 1) for h in range(n)] for g in range(n)]

    def describe(self, mask):
        """Per-object element names of a bitmask, keyed by object name."""
        out = {}
        for d, els in enumerate(self.elements):
            out[self.category.objects[d]] = [els[x] for x in range(len(els))
                                             if mask >> (self.offsets[d] + x) & 1]
        return out

    def to_spec(self):
        cat = self.category
        return {
            "category": cat.name,
            "elements": {cat.objects[d]: list(els) for d, els in enumerate(self.elements)},
            "actions": {cat.morphisms[f]: {self.elements[cat.cod[f]][x]:
                                           self.elements[cat.dom[f]][y]
                                           for x, y in enumerate(self.actions[f])}
                        for f in range(cat.n_morphisms)},
        }


@dataclass(frozen=True)
class Subpresheaf:
    host: FinPresheaf = field(compare=False, hash=False, repr=False)
    mask: int

    def parts(self):
        X = self.host
        return [[x for x in range(len(els)) if self.mask >> (X.offsets[d] + x) & 1]
                for d, els in enumerate(X.elements)]

    def is_closed(self):
        X = self.host
        m = self.mask
        g = 0
        while m >> g:
            if m >> g & 1 and X.down(g) & ~self.mask:
                return False
            g += 1
        return True

    def __le__(self, other):
        return self.mask & ~other.mask == 0

    def __and__(self, other):
        return Subpresheaf(self.host, self.mask & other.mask)

    def __or__(self, other):
        return Subpresheaf(self.host, self.mask | other.mask)

    def describe(self):
        return self.host.describe(self.mask)


@dataclass(frozen=True)
class PresheafMap:
    source: FinPresheaf = field(compare=False, hash=False, repr=False)
    target: FinPresheaf = field(compare=False, hash=False, repr=False)
    components: tuple  # per object: tuple of local target indices

    def validate(self):
        S, T = self.source, self.target
        cat = S.category
        for f in range(cat.n_morphisms):
            c, d = cat.dom[f], cat.cod[f]
            for x in range(len(S.elements[d])):
                if self.components[c][S.act(f, x)] != T.act(f, self.components[d][x]):
                    raise NaturalityViolation(
                        "h(x).f != h(x.f)", witness=[S.elements[d][x], cat.morphisms[f]])
        return self

    def __call__(self, d, x):
        return self.components[d][x]

    def image_mask(self):
        T = self.target
        m = 0
        for d, comp in enumerate(self.components):
            for y in comp:
                m |= 1 << T.gid(d, y)
        return m

    def is_mono(self):
        return all(len(set(c)) == len(c) for c in self.components)

    def is_epi(self):
        return all(len(set(c)) == len(els) for c, els in zip(self.components, self.target.elements))

    def after(self, other: "PresheafMap") -> "PresheafMap":
        """self . other"""
        return PresheafMap(other.source, self.target,
                           tuple(tuple(mine[y] for y in theirs)
                                 for mine, theirs in zip(self.components, other.components)))


# -- constructors -------------------------------------------------------------

def build_presheaf(cat: FinCategory, spec: dict) -> FinPresheaf:
    """Presheaf from the JSON description ``{"elements": ..., "actions": ...}``."""
    try:
        el_spec = spec["elements"]
        act_spec = spec.get("actions", {})
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed presheaf description: {exc}") from None
    for o in el_spec:
        cat.object_index(o)
    elements = [list(el_spec.get(o, [])) for o in cat.objects]
    for d, els in enumerate(elements):
        if len(set(els)) != len(els):
            raise ValidationError(f"duplicate element at {cat.objects[d]}", witness=els)
    pos = [{e: i for i, e in enumerate(els)} for els in elements]
    for name in act_spec:
        cat.morphism_index(name)
    actions = []
    for f in range(cat.n_morphisms):
        c, d = cat.dom[f], cat.cod[f]
        if f == cat.identities[d] and cat.morphisms[f] not in act_spec:
            actions.append(tuple(range(len(elements[d]))))
            continue
        table = act_spec.get(cat.morphisms[f])
        if table is None:
            if elements[d]:
                raise FunctorialityViolation(f"no action given for {cat.morphisms[f]}",
                                             witness=cat.morphisms[f])
            table = {}
        row = []
        for x in elements[d]:
            if x not in table or table[x] not in pos[c]:
                raise FunctorialityViolation(
                    f"action of {cat.morphisms[f]} undefined or dangling at {x!r}",
                    witness=[x, cat.morphisms[f]])
            row.append(pos[c][table[x]])
        actions.append(tuple(row))
    return FinPresheaf(cat, elements, actions)


def representable(cat: FinCategory, C: int) -> FinPresheaf:
    """y(C): elements at D are the morphisms D -> C, acting by precomposition."""
    homs = [cat.hom(d, C) for d in range(cat.n_objects)]
    pos = [{f: i for i, f in enumerate(h)} for h in homs]
    actions = []
    for f in range(cat.n_morphisms):
        c = cat.dom[f]
        actions.append(tuple(pos[c][cat.compose(x, f)] for x in homs[cat.cod[f]]))
    return FinPresheaf(cat, [[cat.morphisms[x] for x in h] for h in homs], actions,
                       validate=False)


def terminal_presheaf(cat: FinCategory) -> FinPresheaf:
    return FinPresheaf(cat, [["*"]] * cat.n_objects, [(0,)] * cat.n_morphisms, validate=False)


def empty_presheaf(cat: FinCategory) -> FinPresheaf:
    return FinPresheaf(cat, [[]] * cat.n_objects, [()] * cat.n_morphisms, validate=False)


def identity_map(X: FinPresheaf) -> PresheafMap:
    return PresheafMap(X, X, tuple(tuple(range(len(els))) for els in X.elements))


def restrict(X: FinPresheaf, mask: int):
    """The subpresheaf ``mask`` as a presheaf in its own right, with its inclusion."""
    cat = X.category
    keep = [[x for x in range(len(els)) if mask >> (X.offsets[d] + x) & 1]
            for d, els in enumerate(X.elements)]
    pos = [{x: i for i, x in enumerate(k)} for k in keep]
    actions = [tuple(pos[cat.dom[f]][X.act(f, x)] for x in keep[cat.cod[f]])
               for f in range(cat.n_morphisms)]
    Y = FinPresheaf(cat, [[X.elements[d][x] for x in k] for d, k in enumerate(keep)],
                    actions, validate=False)
    return Y, PresheafMap(Y, X, tuple(tuple(k) for k in keep))


def element_map(X: FinPresheaf, D: int, x: int) -> PresheafMap:
    """The map y(D) -> X classifying x in X(D)."""
    cat = X.category
    Y = representable(cat, D)
    comps = tuple(tuple(X.act(f, x) for f in cat.hom(b, D)) for b in range(cat.n_objects))
    return PresheafMap(Y, X, comps)


def representable_map(cat: FinCategory, m: int) -> PresheafMap:
    """y(m): y(dom m) -> y(cod m), postcomposition with m."""
    A, B = representable(cat, cat.dom[m]), representable(cat, cat.cod[m])
    comps = []
    for d in range(cat.n_objects):
        pos = {f: i for i, f in enumerate(cat.hom(d, cat.cod[m]))}
        comps.append(tuple(pos[cat.compose(m, x)] for x in cat.hom(d, cat.dom[m])))
    return PresheafMap(A, B, tuple(comps))


def coproduct(parts, names=None) -> FinPresheaf:
    cat = parts[0].category
    names = names or [f"{i}" for i in range(len(parts))]
    elements, actions = [], []
    for d in range(cat.n_objects):
        elements.append([f"{tag}:{e}" for tag, P in zip(names, parts) for e in P.elements[d]])
    for f in range(cat.n_morphisms):
        row = []
        shift_dom = 0
        for P in parts:
            row.extend(shift_dom + y for y in P.actions[f])
            shift_dom += len(P.elements[cat.dom[f]])
        actions.append(tuple(row))
    return FinPresheaf(cat, elements, actions, validate=False)


def quotient(X: FinPresheaf, pairs):
    """Quotient by the least congruence identifying the given (object, x, y) pairs.

    Returns the quotient presheaf and the projection map.
    """
    cat = X.category
    parent = list(range(X.size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    work = [(X.gid(d, x), X.gid(d, y)) for d, x, y in pairs]
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        (d, x), (_, y) = X.local(a), X.local(b)
        for f in cat.into(d):
            c = cat.dom[f]
            work.append((X.gid(c, X.act(f, x)), X.gid(c, X.act(f, y))))
    reps = [sorted({find(X.gid(d, x)) for x in range(len(els))})
            for d, els in enumerate(X.elements)]
    pos = [{r: i for i, r in enumerate(rs)} for rs in reps]
    elements = [[X.elements[d][X.local(r)[1]] for r in rs] for d, rs in enumerate(reps)]
    actions = []
    for f in range(cat.n_morphisms):
        c, d = cat.dom[f], cat.cod[f]
        actions.append(tuple(pos[c][find(X.gid(c, X.act(f, X.local(r)[1])))]
                             for r in reps[d]))
    Q = FinPresheaf(cat, elements, actions, validate=False)
    proj = PresheafMap(X, Q, tuple(tuple(pos[d][find(X.gid(d, x))] for x in range(len(els)))
                                   for d, els in enumerate(X.elements)))
    return Q, proj


def random_presheaf(cat: FinCategory, rng: random.Random, max_reps=2, max_size=40):
    """A random presheaf: a subpresheaf of a coproduct of representables, then a
    random quotient.  Retries until the result has at most ``max_size`` elements."""
    from .lattice import subpresheaf_closure  # local import: lattice imports base
    for _ in range(100):
        k = rng.randint(1, max_reps)
        reps = [representable(cat, rng.randrange(cat.n_objects)) for _ in range(k)]
        X = coproduct(reps)
        if X.size == 0 or X.size > 4 * max_size:
            continue
        seed = 0
        for g in range(X.size):
            if rng.random() < 0.3:
                seed |= 1 << g
        if seed == 0:
            seed = 1 << rng.randrange(X.size)
        X, _ = restrict(X, subpresheaf_closure(X, seed).mask)
        pairs = []
        for _ in range(rng.randint(0, 2)):
            d = rng.randrange(cat.n_objects)
            if len(X.elements[d]) >= 2:
                x, y = rng.sample(range(len(X.elements[d])), 2)
                pairs.append((d, x, y))
        X, _ = quotient(X, pairs)
        if X.size <= max_size:
            return X
    raise ValidationError("could not sample a small enough presheaf")
