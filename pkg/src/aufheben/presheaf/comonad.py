"""The principal comonad of an ideal: I-generated cores and the on-top calculus."""

from __future__ import annotations

import random

from ..fincat import FinCategory, Verdict
from ..ideals import MorphismIdeal, require_idempotent
from .base import (
    FinPresheaf,
    PresheafMap,
    Subpresheaf,
    random_presheaf,
    representable_map,
    restrict,
)
from .lattice import enumerate_subpresheaves, implies_mask, map_on_top, subpresheaf_closure


def core_mask(cat: FinCategory, I: MorphismIdeal, X: FinPresheaf, within=None) -> int:
    """Elements y.f with f in I; restricted to the subpresheaf ``within`` when given
    (both y and y.f must then lie in it)."""
    full = X.top if within is None else within
    out = 0
    for f in sorted(I.members):
        c, e = cat.dom[f], cat.cod[f]
        act = X.actions[f]
        for y in range(len(X.elements[e])):
            if full >> X.gid(e, y) & 1:
                out |= 1 << X.gid(c, act[y])
    return out & full


def i_generated_core(cat: FinCategory, I: MorphismIdeal, X: FinPresheaf, check=True) -> Subpresheaf:
    if check:
        require_idempotent(cat, I)
    core = Subpresheaf(X, core_mask(cat, I, X))
    assert core.is_closed(), "core of a two-sided ideal must be action-closed"
    return core


def is_minimal(cat, I, X, check=True) -> bool:
    return i_generated_core(cat, I, X, check=check).mask == X.top


def element_on_top(cat: FinCategory, I: MorphismIdeal, X: FinPresheaf, D: int, x: int,
                   check=True, core=None) -> Verdict:
    """For every f: E -> D, x.f is I-generated or x.(f g) = x for some g: D -> E.

    Witness: the failing f.
    """
    if core is None:
        core = i_generated_core(cat, I, X, check=check).mask
    for f in cat.into(D):
        E = cat.dom[f]
        xf = X.act(f, x)
        if core >> X.gid(E, xf) & 1:
            continue
        if not any(X.act(g, xf) == x for g in cat.hom(D, E)):
            return Verdict(False, f)
    return Verdict(True)


def element_on_top_oracle(cat: FinCategory, I: MorphismIdeal, X: FinPresheaf, D: int, x: int,
                          limit=None, check=True, subs=None, core=None) -> Verdict:
    """The element map y(D) -> X factors through u v (u => core) for every subpresheaf u."""
    if core is None:
        core = i_generated_core(cat, I, X, check=check).mask
    return map_on_top(X, (X, D, x), core, limit=limit, subs=subs)


def has_skeletal_boundaries(cat: FinCategory, I: MorphismIdeal, X: FinPresheaf,
                            limit=None, check=True) -> Verdict:
    core = i_generated_core(cat, I, X, check=check).mask
    return map_on_top(X, X.top, core, limit=limit)


def on_top_masks(cat, I, X, limit=None):
    """Per-element (fast, oracle) verdict bitmasks; handy for cross-validation."""
    core = i_generated_core(cat, I, X).mask
    subs = enumerate_subpresheaves(X, limit)
    implied = [u | implies_mask(X, u, core) for u in subs]
    fast = oracle = 0
    for g in range(X.size):
        d, x = X.local(g)
        if element_on_top(cat, I, X, d, x, core=core):
            fast |= 1 << g
        img = X.down(g)
        if all(img & ~w == 0 for w in implied):
            oracle |= 1 << g
    return fast, oracle


def image_factor(h: PresheafMap):
    """Epi part onto the image and the image as a subpresheaf of the target."""
    m = Subpresheaf(h.target, h.image_mask())
    Y, incl = restrict(h.target, m.mask)
    pos = [{y: i for i, y in enumerate(c)} for c in incl.components]
    e = PresheafMap(h.source, Y, tuple(tuple(pos[d][y] for y in comp)
                                       for d, comp in enumerate(h.components)))
    return e, m


def pullback_failure(cat: FinCategory, I: MorphismIdeal, m: PresheafMap):
    """For a mono m: X -> Y, an element x outside core(X) with m(x) in core(Y), or None."""
    X, Y = m.source, m.target
    cx, cy = core_mask(cat, I, X), core_mask(cat, I, Y)
    for g in range(X.size):
        if cx >> g & 1:
            continue
        d, x = X.local(g)
        if cy >> Y.gid(d, m(d, x)) & 1:
            return d, x
    return None


def inclusion_pullback_failure(cat, I, Y: FinPresheaf, sub: int):
    """Same test for the inclusion of the subpresheaf ``sub`` into Y."""
    cx = core_mask(cat, I, Y, within=sub)
    bad = sub & core_mask(cat, I, Y) & ~cx
    if bad:
        g = (bad & -bad).bit_length() - 1
        return Y.local(g)
    return None


def sampled_pullback_failure(cat, I, samples=20, seed=0):
    """Check the core's naturality squares at monos between representables and at
    random subpresheaf inclusions of random presheaves (seeded)."""
    for m in range(cat.n_morphisms):
        if cat.classify(m).mono:
            bad = pullback_failure(cat, I, representable_map(cat, m))
            if bad is not None:
                return {"mono": cat.morphisms[m], "element": bad}
    rng = random.Random(seed)
    for k in range(samples):
        Y = random_presheaf(cat, rng)
        seed_mask = 0
        for g in range(Y.size):
            if rng.random() < 0.4:
                seed_mask |= 1 << g
        sub = subpresheaf_closure(Y, seed_mask).mask
        bad = inclusion_pullback_failure(cat, I, Y, sub)
        if bad is not None:
            return {"sample": k, "seed": seed, "element": bad}
    return None
