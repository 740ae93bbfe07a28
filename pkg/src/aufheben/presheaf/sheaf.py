"""Plus-construction and sheafification for ideal topologies, and the coend
formula for the left adjoint of sheafification."""

from __future__ import annotations

from ..errors import CarrierOverflow, cap
from ..fincat import FinCategory
from ..ideals import MorphismIdeal, require_idempotent
from .base import FinPresheaf, PresheafMap, representable, restrict


def enumerate_maps(A: FinPresheaf, P: FinPresheaf, limit=None) -> list:
    """All natural transformations A -> P, as per-object component tuples."""
    cat = A.category
    limit = cap("carrier", limit)
    order = sorted(range(A.size), key=lambda g: (-bin(A.down(g)).count("1"), g))
    assign = [-1] * A.size
    out = []

    def assign_orbit(g, p):
        d, x = A.local(g)
        new = []
        for f in cat.into(d):
            h = A.gid(cat.dom[f], A.act(f, x))
            q = P.act(f, p)
            if assign[h] == -1:
                assign[h] = q
                new.append(h)
            elif assign[h] != q:
                for k in new:
                    assign[k] = -1
                return None
        return new

    def rec(i):
        while i < len(order) and assign[order[i]] != -1:
            i += 1
        if i == len(order):
            out.append(tuple(tuple(assign[A.gid(d, x)] for x in range(len(els)))
                             for d, els in enumerate(A.elements)))
            if len(out) > limit:
                raise CarrierOverflow(f"more than {limit} natural transformations", witness=limit)
            return
        g = order[i]
        d = A.obj_of[g]
        for p in range(len(P.elements[d])):
            new = assign_orbit(g, p)
            if new is not None:
                rec(i + 1)
                for k in new:
                    assign[k] = -1

    rec(0)
    return out


def _sieve(cat, I, D):
    return [f for f in cat.into(D) if f in I]


def plus_construction(cat: FinCategory, I: MorphismIdeal, P: FinPresheaf, check=True,
                      limit=None):
    """P+(D) = matching families over the sieve I(-, D); returns (P+, unit)."""
    if check:
        require_idempotent(cat, I)
    sieves, families = [], []
    for D in range(cat.n_objects):
        sieve = _sieve(cat, I, D)
        sieves.append(sieve)
        Y = representable(cat, D)
        mask = 0
        for f in sieve:
            c = cat.dom[f]
            mask |= 1 << Y.gid(c, cat.hom(c, D).index(f))
        A, incl = restrict(Y, mask)
        fams = set()
        for comps in enumerate_maps(A, P, limit=limit):
            fam = []
            for f in sieve:
                c = cat.dom[f]
                local = incl.components[c].index(cat.hom(c, D).index(f))
                fam.append(comps[c][local])
            fams.add(tuple(fam))
        families.append(sorted(fams))
    index = [{fam: i for i, fam in enumerate(fs)} for fs in families]
    spos = [{f: i for i, f in enumerate(s)} for s in sieves]

    actions = []
    for h in range(cat.n_morphisms):
        C, D = cat.dom[h], cat.cod[h]
        row = []
        for fam in families[D]:
            new = tuple(fam[spos[D][cat.compose(h, k)]] for k in sieves[C])
            row.append(index[C][new])
        actions.append(tuple(row))
    names = [[_family_name(cat, P, sieves[D], fam) for fam in families[D]]
             for D in range(cat.n_objects)]
    Pp = FinPresheaf(cat, names, actions, validate=False)
    unit = PresheafMap(P, Pp, tuple(
        tuple(index[D][tuple(P.act(f, x) for f in sieves[D])]
              for x in range(len(P.elements[D])))
        for D in range(cat.n_objects)))
    return Pp, unit


def _family_name(cat, P, sieve, fam):
    return "(" + ",".join(f"{cat.morphisms[f]}:{P.elements[cat.dom[f]][x]}"
                          for f, x in zip(sieve, fam)) + ")"


def sheafify(cat: FinCategory, I: MorphismIdeal, P: FinPresheaf, check=True, limit=None):
    """aP = (P+)+ with the composite unit."""
    if check:
        require_idempotent(cat, I)
    P1, u1 = plus_construction(cat, I, P, check=False, limit=limit)
    P2, u2 = plus_construction(cat, I, P1, check=False, limit=limit)
    if check:
        # aP is a sheaf, so its own plus unit (hence a(aP)'s unit) is bijective
        u3 = plus_construction(cat, I, P2, check=False, limit=limit)[1]
        assert u3.is_mono() and u3.is_epi(), "sheafification did not produce a sheaf"
    return P2, u2.after(u1)


def is_separated(cat, I, P, check=True) -> bool:
    return plus_construction(cat, I, P, check=check)[1].is_mono()


def is_sheaf(cat, I, P, check=True) -> bool:
    u = plus_construction(cat, I, P, check=check)[1]
    return u.is_mono() and u.is_epi()


def coend_skeleton(cat: FinCategory, I: MorphismIdeal, Q: FinPresheaf, check=True, limit=None):
    """Q_! as an explicit quotient of triples (x in Q(D), f in I(C, D), g in I(B, C)),
    with the counit [x, f, g] -> x.(f g)."""
    if check:
        require_idempotent(cat, I)
    limit = cap("carrier", limit)
    members = sorted(I.members)
    into = {c: [g for g in members if cat.cod[g] == c] for c in range(cat.n_objects)}

    carriers = []
    for B in range(cat.n_objects):
        triples = []
        for f in members:
            C, D = cat.dom[f], cat.cod[f]
            for g in into[C]:
                if cat.dom[g] != B:
                    continue
                for x in range(len(Q.elements[D])):
                    triples.append((x, f, g))
        if len(triples) > limit:
            raise CarrierOverflow(f"{len(triples)} triples at {cat.objects[B]}", witness=limit)
        carriers.append(triples)

    classes = []
    for B, triples in enumerate(carriers):
        pos = {t: i for i, t in enumerate(triples)}
        parent = list(range(len(triples)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(s, t):
            a, b = find(pos[s]), find(pos[t])
            if a != b:
                parent[max(a, b)] = min(a, b)

        pairs = sorted({(f, g) for _, f, g in triples})
        for f, g in pairs:
            D = cat.cod[f]
            # (x'.u, f, g) ~ (x', u f, g) for u: D -> D'
            for u in cat.out_of(D):
                uf = cat.compose(u, f)
                for x2 in range(len(Q.elements[cat.cod[u]])):
                    union((Q.act(u, x2), f, g), (x2, uf, g))
        for g in {g for _, _, g in triples}:
            C = cat.cod[g]
            # (x, f' h, g) ~ (x, f', h g) for h: C -> C'
            for h in cat.out_of(C):
                hg = cat.compose(h, g)
                for f2 in members:
                    if cat.dom[f2] != cat.cod[h]:
                        continue
                    f2h = cat.compose(f2, h)
                    for x in range(len(Q.elements[cat.cod[f2]])):
                        union((x, f2h, g), (x, f2, hg))
        groups = {}
        for i, t in enumerate(triples):
            groups.setdefault(find(i), []).append(t)
        reps = sorted(min(ts) for ts in groups.values())
        rep_of = {}
        for ts in groups.values():
            r = min(ts)
            for t in ts:
                rep_of[t] = r
        classes.append((reps, rep_of))

    index = [{r: i for i, r in enumerate(reps)} for reps, _ in classes]
    actions = []
    for k in range(cat.n_morphisms):
        B2, B = cat.dom[k], cat.cod[k]
        reps, _ = classes[B]
        _, rep_of2 = classes[B2]
        actions.append(tuple(index[B2][rep_of2[(x, f, cat.compose(g, k))]] for x, f, g in reps))
    names = [[f"[{Q.elements[cat.cod[f]][x]}|{cat.morphisms[f]}|{cat.morphisms[g]}]"
              for x, f, g in reps] for reps, _ in classes]
    Qs = FinPresheaf(cat, names, actions, validate=False)

    comps = []
    for B, (reps, rep_of) in enumerate(classes):
        values = {}
        for (x, f, g), r in rep_of.items():
            values.setdefault(r, set()).add(Q.act(cat.compose(f, g), x))
        assert all(len(v) == 1 for v in values.values()), "counit is not well defined on a class"
        comps.append(tuple(next(iter(values[r])) for r in reps))
    counit = PresheafMap(Qs, Q, tuple(comps))
    if check:
        from .comonad import core_mask
        assert counit.image_mask() == core_mask(cat, I, Q), "counit image differs from the core"
    return Qs, counit
