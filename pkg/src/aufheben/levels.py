"""Successors of subobject-closed full subcategories and related site-level checks."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

from .errors import FormulaOnlyWarning, InvalidParams, NoTerminal, NotClosed
from .fincat import (
    FinCategory,
    FullSubcategory,
    ProductCategory,
    Verdict,
    has_factorization_property,
    is_subobject_closed,
    monos_into,
    terminal_object,
)
from .ideals import MorphismIdeal, enumerate_closed_subcategories, require_idempotent


def _require_closed(cat, S):
    v = is_subobject_closed(cat, S)
    if not v:
        f = v.witness
        raise NotClosed(f"{S} is not closed under subobjects: {cat.morphisms[f]}",
                        witness=cat.morphisms[f])


def _warn_formula_only(cat):
    if not has_factorization_property(cat):
        warnings.warn(f"{cat.name} lacks split-epi/mono factorizations; "
                      "successor is formula-only", FormulaOnlyWarning, stacklevel=3)


def in_successor(cat: FinCategory, S: FullSubcategory, d: int) -> bool:
    for f in monos_into(cat, d):
        if cat.dom[f] not in S and not cat.classify(f).iso:
            return False
    return True


def successor(cat: FinCategory, S: FullSubcategory, check=True) -> FullSubcategory:
    """Objects D such that every mono C -> D has C in S or is an isomorphism."""
    if check:
        _require_closed(cat, S)
        _warn_formula_only(cat)
    return FullSubcategory(cat, frozenset(d for d in range(cat.n_objects)
                                          if d in S or in_successor(cat, S, d)))


def successor_chain(cat: FinCategory) -> list:
    _warn_formula_only(cat)
    chain = [FullSubcategory.empty(cat)]
    for _ in range(cat.n_objects + 2):
        nxt = successor(cat, chain[-1], check=False)
        chain.append(nxt)
        if nxt == chain[-2]:
            chain.pop()
            break
    return chain


def map_on_top_of_ideal(cat: FinCategory, e: int, I: MorphismIdeal, check=True) -> Verdict:
    """For every f into dom(e): e.f is in I or e.f.g = e for some g. Witness: a failing f."""
    if check:
        require_idempotent(cat, I)
    E = cat.dom[e]
    for f in cat.into(E):
        ef = cat.compose(e, f)
        if ef in I:
            continue
        if not any(cat.compose(ef, g) == e for g in cat.hom(E, cat.dom[f])):
            return Verdict(False, f)
    return Verdict(True)


def on_top_ideal(cat: FinCategory, I: MorphismIdeal) -> MorphismIdeal:
    require_idempotent(cat, I)
    return MorphismIdeal(cat, frozenset(e for e in range(cat.n_morphisms)
                                        if map_on_top_of_ideal(cat, e, I, check=False)))


@dataclass(frozen=True)
class PrecohesiveReport:
    has_terminal: bool
    terminal: int | None
    every_object_has_point: bool
    points: dict  # object -> first point, or None when pointless
    pointless: int | None = None

    def to_json(self, cat):
        return {
            "has_terminal": self.has_terminal,
            "terminal": None if self.terminal is None else cat.objects[self.terminal],
            "every_object_has_point": self.every_object_has_point,
            "points": {cat.objects[d]: (None if p is None else cat.morphisms[p])
                       for d, p in sorted(self.points.items())},
            "pointless": None if self.pointless is None else cat.objects[self.pointless],
        }


def check_precohesive_hypotheses(cat: FinCategory) -> PrecohesiveReport:
    t = terminal_object(cat)
    if t is None:
        return PrecohesiveReport(False, None, False, {}, None)
    points = {d: next(iter(cat.hom(t, d)), None) for d in range(cat.n_objects)}
    pointless = next((d for d, p in points.items() if p is None), None)
    return PrecohesiveReport(True, t, pointless is None, points, pointless)


def edgewise_connected(cat: FinCategory, D: int, D1: FullSubcategory) -> Verdict:
    """Every pair of distinct points of D factors jointly through some E -> D with E in D1."""
    t = terminal_object(cat)
    if t is None:
        raise NoTerminal(f"{cat.name} has no terminal object")
    pts = cat.hom(t, D)
    for i, u in enumerate(pts):
        for v in pts[i + 1:]:
            if not _joined(cat, t, D, D1, u, v):
                return Verdict(False, (u, v))
    return Verdict(True)


def _joined(cat, t, D, D1, u, v):
    for E in D1.sorted():
        epts = cat.hom(t, E)
        for f in cat.hom(E, D):
            images = {cat.compose(f, p) for p in epts}
            if u in images and v in images:
                return True
    return False


def product_subcategory(P: ProductCategory, S1: FullSubcategory, S2: FullSubcategory):
    return FullSubcategory(P, frozenset(P.pair_object(a, b) for a in S1.objects
                                        for b in S2.objects))


@dataclass
class LevelPoset:
    category: FinCategory = field(repr=False)
    levels: list
    successor: list  # index into levels
    formula_only: bool = False

    def covers(self):
        out = []
        for i, a in enumerate(self.levels):
            for j, b in enumerate(self.levels):
                if a < b and not any(a < c < b for c in self.levels):
                    out.append((i, j))
        return out

    def to_json(self):
        return {
            "category": self.category.name,
            "levels": [s.names() for s in self.levels],
            "covers": [list(p) for p in self.covers()],
            "successor": list(self.successor),
            "formula_only": self.formula_only,
        }

    def to_dot(self):
        lines = ["digraph levels {", "  rankdir=BT;", "  node [shape=box];"]
        for i, s in enumerate(self.levels):
            label = "{" + ", ".join(s.names()) + "}"
            lines.append(f"  L{i} [label={json.dumps(label)}];")
        for i, j in self.covers():
            lines.append(f"  L{i} -> L{j};")
        for i, j in enumerate(self.successor):
            lines.append(f'  L{i} -> L{j} [style=dashed, label="succ"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def level_poset(cat: FinCategory, limit=None) -> LevelPoset:
    levels = enumerate_closed_subcategories(cat, limit=limit)
    formula_only = not has_factorization_property(cat)
    index = {s.objects: i for i, s in enumerate(levels)}
    succ = []
    for s in levels:
        t = successor(cat, s, check=False)
        if t.objects not in index:
            raise InvalidParams(f"successor of {s} is not subobject-closed", witness=t.names())
        succ.append(index[t.objects])
    return LevelPoset(cat, levels, succ, formula_only)
