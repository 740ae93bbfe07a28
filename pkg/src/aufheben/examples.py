"""Generators for the example sites: truncations of Delta and F, posets,
the idempotent splitting of the 4-element graphic monoid, and finite trees."""

from __future__ import annotations

import itertools
import json
import warnings
from importlib import resources

from .errors import InvalidParams, TruncationWarning, ValidationError
from .fincat import ConcreteCategory, FinCategory, TableCategory, build_category


def _map_name(src, tgt, img):
    return f"{src}->{tgt}:" + ".".join(map(str, img))


def delta(n: int, size_cap=None) -> ConcreteCategory:
    """Objects [0..n]; morphisms all monotone maps."""
    if n < 0:
        raise InvalidParams("delta needs n >= 0", witness=n)
    objects = [f"[{k}]" for k in range(n + 1)]
    sizes = [k + 1 for k in range(n + 1)]

    def maps():
        for a, b in itertools.product(range(n + 1), repeat=2):
            for img in itertools.combinations_with_replacement(range(b + 1), a + 1):
                yield _map_name(objects[a], objects[b], img), a, b, img

    return ConcreteCategory(f"delta{n}", objects, sizes, maps(), size_cap=size_cap)


def fin(n: int, size_cap=None) -> ConcreteCategory:
    """Objects are the sets of size 1..n; morphisms all functions."""
    if n < 1:
        raise InvalidParams("fin needs n >= 1", witness=n)
    objects = [str(k) for k in range(1, n + 1)]
    sizes = list(range(1, n + 1))

    def maps():
        for a, b in itertools.product(range(n), repeat=2):
            for img in itertools.product(range(sizes[b]), repeat=sizes[a]):
                yield _map_name(objects[a], objects[b], img), a, b, img

    return ConcreteCategory(f"fin{n}", objects, sizes, maps(), size_cap=size_cap)


def poset(elements, relations, name="poset") -> TableCategory:
    """The poset generated by ``relations`` (pairs a <= b), seen as a category."""
    elements = list(elements)
    idx = {e: i for i, e in enumerate(elements)}
    if len(idx) != len(elements):
        raise InvalidParams("duplicate poset element", witness=elements)
    n = len(elements)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in relations:
        if a not in idx or b not in idx:
            raise InvalidParams(f"relation {a}<={b} mentions an unknown element", witness=[a, b])
        leq[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                raise InvalidParams("relations are not antisymmetric",
                                    witness=[elements[i], elements[j]])
    pairs = [(i, j) for i in range(n) for j in range(n) if leq[i][j]]
    mor = {p: k for k, p in enumerate(pairs)}
    names = [f"{elements[i]}<={elements[j]}" for i, j in pairs]
    table = {(mor[(j, k)], mor[(i, j)]): mor[(i, k)]
             for (i, j) in pairs for (j2, k) in pairs if j2 == j}
    return TableCategory(name, elements, names, [p[0] for p in pairs],
                         [p[1] for p in pairs], [mor[(i, i)] for i in range(n)], table)


def chain(n: int) -> TableCategory:
    """The chain 0 <= 1 <= ... <= n-1."""
    els = [str(i) for i in range(n)]
    return poset(els, list(zip(els, els[1:])), name=f"chain{n}")


def graphic() -> TableCategory:
    """Idempotent splitting of the 4-element graphic monoid: objects 1, G, D."""
    data = resources.files("aufheben.data").joinpath("graphic.json").read_text()
    return build_category(json.loads(data))


# -- trees ------------------------------------------------------------------

def _canonical(children, v):
    return "(" + "".join(sorted(_canonical(children, c) for c in children[v])) + ")"


def parse_tree(text: str):
    """Parse a parenthesized rooted tree into a parent array (root first, preorder)."""
    parents, stack = [], []
    for ch in text:
        if ch == "(":
            parents.append(stack[-1] if stack else -1)
            stack.append(len(parents) - 1)
        elif ch == ")":
            if not stack:
                raise InvalidParams(f"unbalanced tree {text!r}", witness=text)
            stack.pop()
        else:
            raise InvalidParams(f"bad character in tree {text!r}", witness=text)
    if stack or not parents or parents.count(-1) != 1:
        raise InvalidParams(f"not a single rooted tree: {text!r}", witness=text)
    return parents


def canonical_tree(text: str) -> str:
    parents = parse_tree(text)
    children = [[] for _ in parents]
    for v, p in enumerate(parents):
        if p >= 0:
            children[p].append(v)
    return _canonical(children, 0)


def rooted_trees(n: int):
    """Canonical strings of all rooted trees with exactly n nodes."""
    out = set()
    for parents in itertools.product(*[range(i) for i in range(1, n)]):
        children = [[] for _ in range(n)]
        for v, p in enumerate(parents, start=1):
            children[p].append(v)
        out.add(_canonical(children, 0))
    return sorted(out)


def _ancestor_pairs(parents):
    pairs = []
    for v in range(len(parents)):
        u = v
        while u >= 0:
            pairs.append((u, v))
            u = parents[u]
    return pairs


def _subtree_shapes(text):
    """Canonical forms of the trees embedding monotonically and injectively into ``text``."""
    parents = parse_tree(text)
    n = len(parents)
    shapes = set()
    anc = set(_ancestor_pairs(parents))
    for r in range(1, n):
        for sub in itertools.combinations(range(n), r):
            # induced order on a subset with a least element is again a tree
            root = [u for u in sub if all((u, v) in anc for v in sub)]
            if not root:
                continue
            par = []
            pos = {v: i for i, v in enumerate(sub)}
            for v in sub:
                lower = [u for u in sub if u != v and (u, v) in anc]
                par.append(pos[max(lower, key=lambda u: sum((w, u) in anc for w in sub))]
                           if lower else -1)
            children = [[] for _ in sub]
            for i, p in enumerate(par):
                if p >= 0:
                    children[p].append(i)
            shapes.add(_canonical(children, par.index(-1)))
    return shapes


def trees(max_nodes: int, extra=(), size_cap=None) -> ConcreteCategory:
    """Rooted trees with at most ``max_nodes`` nodes (plus ``extra`` trees), as
    posets with the root at the bottom; morphisms are all monotone maps."""
    if max_nodes < 1:
        raise InvalidParams("trees needs max_nodes >= 1", witness=max_nodes)
    shapes = [t for k in range(1, max_nodes + 1) for t in rooted_trees(k)]
    for t in extra:
        c = canonical_tree(t)
        if c not in shapes:
            shapes.append(c)
            missing = _subtree_shapes(c) - set(shapes)
            if missing:
                warnings.warn(f"truncation is not closed under subobjects; missing {sorted(missing)}",
                              TruncationWarning, stacklevel=2)
    posets = []
    for t in shapes:
        parents = parse_tree(t)
        posets.append((len(parents), _ancestor_pairs(parents)))

    def maps():
        for a, b in itertools.product(range(len(shapes)), repeat=2):
            na, rel_a = posets[a]
            nb, rel_b = posets[b]
            ok_b = set(rel_b)
            for img in itertools.product(range(nb), repeat=na):
                if all((img[u], img[v]) in ok_b for u, v in rel_a):
                    yield _map_name(shapes[a], shapes[b], img), a, b, img

    return ConcreteCategory(f"trees{max_nodes}", shapes, [p[0] for p in posets], maps(),
                            size_cap=size_cap)


# a surjection of trees without a section: two 2-chains over a root onto a
# 2-leaf fork sitting over a 2-chain
NONSPLIT_SOURCE = "((())(()))"
NONSPLIT_TARGET = "((()()))"


def nonsplit_surjection(cat: FinCategory) -> int:
    """Index of the non-split surjection in a trees category containing both shapes."""
    src = cat.object_index(canonical_tree(NONSPLIT_SOURCE))
    tgt = cat.object_index(canonical_tree(NONSPLIT_TARGET))
    # source preorder: 0 root, 1-2 first branch, 3-4 second; target: 0 root, 1 mid, 2-3 leaves
    for f in cat.hom(src, tgt):
        img = cat.images[f]
        if img[0] == 0 and img[1] == img[3] == 1 and {img[2], img[4]} == {2, 3}:
            return f
    raise ValidationError("surjection not found")


def generate_example(kind: str, *params, size_cap=None) -> FinCategory:
    try:
        if kind == "delta":
            (n,) = params
            return delta(int(n), size_cap=size_cap)
        if kind == "fin":
            (n,) = params
            return fin(int(n), size_cap=size_cap)
        if kind == "graphic":
            if params:
                raise InvalidParams("graphic takes no parameters", witness=list(params))
            return graphic()
        if kind == "trees":
            n, *extra = params
            return trees(int(n), extra=extra, size_cap=size_cap)
        if kind == "poset":
            (spec,) = params
            if isinstance(spec, str):
                spec = json.loads(spec)
            return poset(spec["elements"], [tuple(r) for r in spec.get("relations", [])],
                         name=spec.get("name", "poset"))
        if kind == "chain":
            (n,) = params
            return chain(int(n))
    except (ValueError, TypeError, KeyError) as exc:
        raise InvalidParams(f"bad parameters for {kind}: {exc}", witness=list(map(str, params))) from None
    raise InvalidParams(f"unknown example kind {kind!r}", witness=kind)
