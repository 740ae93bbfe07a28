"""Downset enumeration for finite preorders, with sets encoded as int bitmasks."""

from .errors import CountOverflow


def _strict_classes(n, leq):
    """Collapse a preorder to its poset of equivalence classes.

    Returns (classes, below) where classes[k] is the bitmask of class k and
    below[k] is the bitmask of classes strictly below k.  Classes come out in
    a linear extension (every class after all classes below it).
    """
    cls_of = [-1] * n
    classes = []
    for i in range(n):
        if cls_of[i] >= 0:
            continue
        k = len(classes)
        mask = 0
        for j in range(n):
            if leq[i][j] and leq[j][i]:
                cls_of[j] = k
                mask |= 1 << j
        classes.append(mask)
    m = len(classes)
    rep = [(c & -c).bit_length() - 1 for c in classes]
    below_sets = [[l for l in range(m) if l != k and leq[rep[l]][rep[k]]] for k in range(m)]
    order = sorted(range(m), key=lambda k: len(below_sets[k]))
    pos = {k: i for i, k in enumerate(order)}
    classes = [classes[k] for k in order]
    below = []
    for k in order:
        b = 0
        for l in below_sets[k]:
            b |= 1 << pos[l]
        below.append(b)
    return classes, below


def iter_downsets(n, leq, limit=None):
    """Yield every downset of the preorder ``leq`` on range(n) as a bitmask.

    Each branch of the search yields at least one downset, so the work is
    linear in the output.  Raises CountOverflow once more than ``limit``
    downsets have been produced.
    """
    classes, below = _strict_classes(n, leq)
    m = len(classes)
    count = 0
    stack = [(0, 0, 0)]  # (next class, chosen classes, element mask)
    while stack:
        k, chosen, mask = stack.pop()
        if k == m:
            count += 1
            if limit is not None and count > limit:
                raise CountOverflow(f"more than {limit} downsets", witness=limit)
            yield mask
            continue
        stack.append((k + 1, chosen, mask))
        if below[k] & ~chosen == 0:
            stack.append((k + 1, chosen | (1 << k), mask | classes[k]))


def count_downsets(n, leq):
    """Number of downsets, without a cap."""
    return sum(1 for _ in iter_downsets(n, leq))


def bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
