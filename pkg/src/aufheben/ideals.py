"""Two-sided morphism ideals and the ideal/subcategory correspondence."""

from __future__ import annotations

from dataclasses import dataclass, field

from .downsets import bits, iter_downsets
from .errors import InvalidParams, NotAnIdeal, NotIdempotent, cap
from .fincat import (
    FinCategory,
    FullSubcategory,
    Verdict,
    has_factorization_property,
    is_subobject_closed,
    mono_preorder,
    split_epi_mono_factor,
)


@dataclass(frozen=True)
class MorphismIdeal:
    category: FinCategory = field(compare=False, hash=False, repr=False)
    members: frozenset

    @classmethod
    def of(cls, cat, morphisms):
        return cls(cat, frozenset(cat.morphism_index(m) if isinstance(m, str) else int(m)
                                  for m in morphisms))

    def __contains__(self, f):
        return f in self.members

    def __len__(self):
        return len(self.members)

    def __le__(self, other):
        return self.members <= other.members

    def names(self):
        return sorted(self.category.morphisms[f] for f in self.members)

    def with_domain(self, a):
        return [f for f in self.category.out_of(a) if f in self.members]

    def with_codomain(self, b):
        return [f for f in self.category.into(b) if f in self.members]


def check_ideal(cat: FinCategory, I: MorphismIdeal) -> Verdict:
    """Both closure conditions; the witness is a (composite, side) pair that escapes."""
    for f in sorted(I.members):
        for h in cat.into(cat.dom[f]):
            if cat.compose(f, h) not in I:
                return Verdict(False, (f, h, "right"))
        for g in cat.out_of(cat.cod[f]):
            if cat.compose(g, f) not in I:
                return Verdict(False, (g, f, "left"))
    return Verdict(True)


def two_sided_closure(cat: FinCategory, gens) -> MorphismIdeal:
    members = set()
    work = [cat.morphism_index(g) if isinstance(g, str) else g for g in gens]
    while work:
        f = work.pop()
        if f in members:
            continue
        members.add(f)
        for g in cat.out_of(cat.cod[f]):
            gf = cat.compose(g, f)
            if gf not in members:
                work.append(gf)
        for h in cat.into(cat.dom[f]):
            fh = cat.compose(f, h)
            if fh not in members:
                work.append(fh)
    return MorphismIdeal(cat, frozenset(members))


def is_idempotent(cat: FinCategory, I: MorphismIdeal) -> Verdict:
    """Every member is a composite of two members; the witness is an indecomposable one."""
    v = check_ideal(cat, I)
    if not v:
        raise NotAnIdeal("not a two-sided ideal", witness=v.witness)
    for f in sorted(I.members):
        a, b = cat.dom[f], cat.cod[f]
        if not any(cat.compose(g, h) == f
                   for h in I.with_domain(a)
                   for g in cat.hom(cat.cod[h], b) if g in I):
            return Verdict(False, f)
    return Verdict(True)


def require_idempotent(cat, I):
    v = is_idempotent(cat, I)
    if not v:
        raise NotIdempotent(f"{cat.morphisms[v.witness]} has no factorization inside the ideal",
                            witness=cat.morphisms[v.witness])


def ideal_of_subcategory(cat: FinCategory, S: FullSubcategory) -> MorphismIdeal:
    """Morphisms factoring through some object of S."""
    members = set()
    for c in S.sorted():
        ins, outs = cat.into(c), cat.out_of(c)
        for v in ins:
            for u in outs:
                members.add(cat.compose(u, v))
    return MorphismIdeal(cat, frozenset(members))


def subcategory_of_ideal(cat: FinCategory, I: MorphismIdeal) -> FullSubcategory:
    return FullSubcategory(cat, frozenset(d for d in range(cat.n_objects)
                                          if cat.identities[d] in I))


def enumerate_closed_subcategories(cat: FinCategory, limit=None):
    """Subobject-closed full subcategories (downsets of the mono preorder),
    ordered by size and then lexicographically by object index."""
    leq = mono_preorder(cat)
    limit = cap("downsets", limit)
    found = [frozenset(bits(m)) for m in iter_downsets(cat.n_objects, leq, limit=limit)]
    found.sort(key=lambda s: (len(s), sorted(s)))
    return [FullSubcategory(cat, s) for s in found]


def count_closed_subcategories(cat: FinCategory) -> int:
    return sum(1 for _ in iter_downsets(cat.n_objects, mono_preorder(cat)))


def satisfies_mc_sufficient(cat: FinCategory, I: MorphismIdeal) -> Verdict:
    """Every f in I factors as f = g.b with some s such that s.b is in I and b.s.b = b."""
    for f in sorted(I.members):
        d, e = cat.dom[f], cat.cod[f]
        found = False
        for b in cat.out_of(d):
            B = cat.cod[b]
            if not any(cat.compose(g, b) == f for g in cat.hom(B, e)):
                continue
            for s in cat.hom(B, d):
                sb = cat.compose(s, b)
                if sb in I and cat.compose(b, sb) == b:
                    found = True
                    break
            if found:
                break
        if not found:
            return Verdict(False, f)
    return Verdict(True)


def representable_pullback_failure(cat: FinCategory, I: MorphismIdeal):
    """Scan the naturality squares of the core at every mono between representables.

    At a representable the I-generated elements are exactly the members of I,
    so the square at y(m) fails to be a pullback iff some x is outside I while
    m.x is inside.  Returns (m, x) or None.
    """
    for m in range(cat.n_morphisms):
        if not cat.classify(m).mono:
            continue
        for x in cat.into(cat.dom[m]):
            if x not in I and cat.compose(m, x) in I:
                return m, x
    return None


def is_mono_cartesian(cat: FinCategory, I: MorphismIdeal, samples=20, seed=0) -> Verdict:
    """Three-valued mono-cartesianness test.

    With split-epi/mono factorizations the answer is exact (yes/no).  Without
    them, the sufficient condition can only answer yes, and a sampled pullback
    oracle can only answer no; otherwise the answer is unknown.
    """
    require_idempotent(cat, I)
    if has_factorization_property(cat):
        S = subcategory_of_ideal(cat, I)
        J = ideal_of_subcategory(cat, S)
        extra = sorted(I.members - J.members)
        if extra:
            e, m = split_epi_mono_factor(cat, extra[0])
            return Verdict(False, m, note="mono in the ideal whose domain identity is missing")
        closed = is_subobject_closed(cat, S)
        if not closed:
            return Verdict(False, closed.witness,
                           note="mono in the ideal whose domain identity is missing")
        return Verdict(True)
    if satisfies_mc_sufficient(cat, I):
        return Verdict(True, note="sufficient condition")
    bad = representable_pullback_failure(cat, I)
    if bad is not None:
        return Verdict(False, bad, note="naturality square at a representable mono")
    from .presheaf.comonad import sampled_pullback_failure
    bad = sampled_pullback_failure(cat, I, samples=samples, seed=seed)
    if bad is not None:
        return Verdict(False, bad, note="naturality square at a sampled presheaf mono")
    return Verdict(None, note="no counterexample found; sufficient condition fails")


def factor_preorder(cat: FinCategory):
    """f <= g iff f = u.g.v for some u, v (ideals are exactly the downsets)."""
    n = cat.n_morphisms
    leq = [[False] * n for _ in range(n)]
    for g in range(n):
        for v in cat.into(cat.dom[g]):
            gv = cat.compose(g, v)
            for u in cat.out_of(cat.cod[g]):
                leq[cat.compose(u, gv)][g] = True
    return leq


def all_idempotent_ideals(cat: FinCategory, max_morphisms=20):
    """Exhaustive listing for small categories (tests only)."""
    if cat.n_morphisms > max_morphisms:
        raise InvalidParams(f"exhaustive mode needs <= {max_morphisms} morphisms",
                            witness=cat.n_morphisms)
    out = []
    for mask in iter_downsets(cat.n_morphisms, factor_preorder(cat)):
        I = MorphismIdeal(cat, frozenset(bits(mask)))
        if is_idempotent(cat, I):
            out.append(I)
    return out
