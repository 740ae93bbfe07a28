"""The Heyting algebra of subpresheaves and the boundary calculus on it."""

from __future__ import annotations

from ..downsets import iter_downsets
from ..errors import CapExceeded, CountOverflow, cap
from ..fincat import Verdict
from .base import FinPresheaf, PresheafMap, Subpresheaf


def subpresheaf_closure(X: FinPresheaf, seed) -> Subpresheaf:
    """Least subpresheaf containing ``seed`` (a bitmask, or per-object iterables
    of local indices)."""
    if not isinstance(seed, int):
        m = 0
        for d, xs in enumerate(seed):
            for x in xs:
                m |= 1 << X.gid(d, x)
        seed = m
    out = 0
    g = 0
    while seed >> g:
        if seed >> g & 1:
            out |= X.down(g)
        g += 1
    return Subpresheaf(X, out)


def implies_mask(X: FinPresheaf, u: int, v: int) -> int:
    """(U => V): the elements x all of whose restrictions lying in U lie in V."""
    bad = u & ~v
    out = 0
    for g in range(X.size):
        if X.down(g) & bad == 0:
            out |= 1 << g
    return out


def heyting(X: FinPresheaf, U: Subpresheaf, V: Subpresheaf, op: str) -> Subpresheaf:
    if op == "meet":
        return Subpresheaf(X, U.mask & V.mask)
    if op == "join":
        return Subpresheaf(X, U.mask | V.mask)
    if op == "implies":
        return Subpresheaf(X, implies_mask(X, U.mask, V.mask))
    raise ValueError(f"unknown lattice operation {op!r}")


def enumerate_subpresheaves(X: FinPresheaf, limit=None) -> list:
    """All subpresheaves as bitmasks, ordered by (popcount, mask)."""
    limit = cap("subpresheaves", limit)
    try:
        found = list(iter_downsets(X.size, X.element_preorder(), limit=limit))
    except CountOverflow as exc:
        raise CapExceeded(f"more than {limit} subpresheaves", witness=limit) from exc
    found.sort(key=lambda m: (bin(m).count("1"), m))
    return found


def _image(f):
    """Image bitmask of a map into X, an element (D, x), or a bitmask."""
    if isinstance(f, PresheafMap):
        return f.image_mask()
    if isinstance(f, Subpresheaf):
        return f.mask
    if isinstance(f, tuple):
        X, d, x = f
        return X.down(X.gid(d, x))
    return f


def boundary_leq(X: FinPresheaf, f, u: int, v: int) -> bool:
    """Whether f factors through u v (u => v)."""
    w = u | implies_mask(X, u, v)
    return _image(f) & ~w == 0


def map_on_top(X: FinPresheaf, f, v: int, limit=None, subs=None) -> Verdict:
    """The boundary condition for every subpresheaf u of X; witness = failing u."""
    img = _image(f)
    for u in subs if subs is not None else enumerate_subpresheaves(X, limit):
        if img & ~(u | implies_mask(X, u, v)):
            return Verdict(False, u)
    return Verdict(True)


def is_boolean_object(X: FinPresheaf, limit=None) -> Verdict:
    """Every subpresheaf is complemented; witness = an uncomplemented one."""
    top = X.top
    for u in enumerate_subpresheaves(X, limit):
        if u | implies_mask(X, u, 0) != top:
            return Verdict(False, u)
    return Verdict(True)


def bounded_depth_values(X: FinPresheaf, d: int, subs: list) -> set:
    """All values of the depth-d formula as its variables range over ``subs``."""
    values = {u | implies_mask(X, u, 0) for u in subs}
    for _ in range(d):
        values = {u | implies_mask(X, u, s) for u in subs for s in values}
    return values


def bounded_depth_holds(X: FinPresheaf, d: int, limit=None) -> bool:
    subs = enumerate_subpresheaves(X, limit)
    return bounded_depth_values(X, d, subs) == {X.top}


def heyting_dim(X: FinPresheaf, max_d: int, limit=None):
    """Least d for which the depth-d formula is valid; -1 for the one-element
    lattice; None when no d <= max_d works."""
    subs = enumerate_subpresheaves(X, limit)
    if len(subs) == 1:
        return -1
    values = {u | implies_mask(X, u, 0) for u in subs}
    for d in range(max_d + 1):
        if d:
            values = {u | implies_mask(X, u, s) for u in subs for s in values}
        if values == {X.top}:
            return d
    return None
