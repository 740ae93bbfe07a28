"""Command-line front end.

Exit codes: 0 on success, 1 on a domain error (JSON on stderr), 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import AufhebenError, InvalidParams, ValidationError
from .examples import generate_example
from .fincat import (
    FullSubcategory,
    build_category,
    has_factorization_property,
    is_subobject_closed,
)
from .ideals import (
    MorphismIdeal,
    ideal_of_subcategory,
    is_idempotent,
    is_mono_cartesian,
    subcategory_of_ideal,
    two_sided_closure,
)
from .levels import level_poset, map_on_top_of_ideal, successor, successor_chain
from .presheaf import (
    build_presheaf,
    element_on_top,
    heyting_dim,
    i_generated_core,
    is_boolean_object,
    sheafify,
)


class UsageError(Exception):
    pass


def split_names(text):
    """Split a comma-separated name list, ignoring commas nested in brackets."""
    if text is None or text.strip() == "":
        return []
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


def _read_json(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc.msg})",
                              witness={"line": exc.lineno, "column": exc.colno}) from None


def _load_category(path):
    return build_category(_read_json(path))


def _emit(doc, out):
    out.write(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _subcat(cat, text):
    return FullSubcategory.of(cat, split_names(text))


def _ideal(cat, args):
    if args.generators is not None and args.subcat is not None:
        raise UsageError("give either --generators or --subcat, not both")
    if args.generators is not None:
        return two_sided_closure(cat, [cat.morphism_index(n) for n in split_names(args.generators)])
    if args.subcat is not None:
        return ideal_of_subcategory(cat, _subcat(cat, args.subcat))
    raise UsageError("an ideal needs --generators or --subcat")


def _verdict(v, render=str):
    return {"answer": v.answer, "witness": None if v.witness is None else render(v.witness)}


def cmd_check(args, out):
    cat = _load_category(args.category)
    fp = has_factorization_property(cat)
    _emit({"name": cat.name, "objects": cat.n_objects, "morphisms": cat.n_morphisms,
           "valid": True,
           "factorization": _verdict(fp, lambda f: cat.morphisms[f])}, out)


def cmd_classify(args, out):
    cat = _load_category(args.category)
    targets = ([cat.morphism_index(n) for n in split_names(args.morphism)]
               if args.morphism else range(cat.n_morphisms))
    doc = {}
    for f in targets:
        c = cat.classify(f)
        doc[cat.morphisms[f]] = {
            "dom": cat.objects[cat.dom[f]], "cod": cat.objects[cat.cod[f]],
            "mono": c.mono, "epi": c.epi, "split_mono": c.split_mono,
            "split_epi": c.split_epi, "iso": c.iso,
            "retraction": None if c.retraction is None else cat.morphisms[c.retraction],
            "section": None if c.section is None else cat.morphisms[c.section],
        }
    _emit(doc, out)


def cmd_levels(args, out):
    cat = _load_category(args.category)
    lp = level_poset(cat)
    if args.dot is not None:
        dot = lp.to_dot()
        if args.dot == "-":
            out.write(dot)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(dot)
    if args.json or args.dot is None or args.dot != "-":
        _emit(lp.to_json(), out)


def cmd_chain(args, out):
    cat = _load_category(args.category)
    _emit({"category": cat.name, "chain": [s.names() for s in successor_chain(cat)]}, out)


def cmd_successor(args, out):
    cat = _load_category(args.category)
    S = _subcat(cat, args.subcat)
    _emit({"subcategory": S.names(), "successor": successor(cat, S).names()}, out)


def cmd_ideal(args, out):
    cat = _load_category(args.category)
    I = _ideal(cat, args)
    idem = is_idempotent(cat, I)
    doc = {"ideal": sorted(I.names()),
           "idempotent": _verdict(idem, lambda f: cat.morphisms[f])}
    if idem:
        S = subcategory_of_ideal(cat, I)
        doc["subcategory"] = S.names()
        doc["subobject_closed"] = _verdict(is_subobject_closed(cat, S), lambda f: cat.morphisms[f])
        doc["mono_cartesian"] = _verdict(is_mono_cartesian(cat, I),
                                         lambda w: cat.morphisms[w] if isinstance(w, int) else w)
    _emit(doc, out)


def cmd_ontop(args, out):
    cat = _load_category(args.category)
    I = _ideal(cat, args)
    e = cat.morphism_index(args.map)
    v = map_on_top_of_ideal(cat, e, I)
    _emit({"map": args.map, "ideal": sorted(I.names()),
           "on_top": _verdict(v, lambda f: cat.morphisms[f])}, out)


def cmd_presheaf(args, out):
    cat = _load_category(args.category)
    spec = _read_json(args.presheaf)
    if isinstance(spec, dict) and spec.get("category") not in (None, cat.name):
        raise InvalidParams(f"presheaf is over {spec['category']!r}, not {cat.name!r}",
                            witness=spec["category"])
    X = build_presheaf(cat, spec)
    I = ideal_of_subcategory(cat, _subcat(cat, args.ideal_subcat))
    doc = {"category": cat.name, "ideal": sorted(I.names()),
           "elements": X.to_spec()["elements"]}
    if args.core:
        doc["core"] = i_generated_core(cat, I, X).describe()
    elif args.sheafify:
        aP, unit = sheafify(cat, I, X)
        doc["sheaf"] = aP.to_spec()["elements"]
        doc["unit"] = {cat.objects[d]: {X.elements[d][x]: aP.elements[d][y]
                                        for x, y in enumerate(comp)}
                       for d, comp in enumerate(unit.components)}
    elif args.boolean:
        v = is_boolean_object(X)
        doc["boolean"] = _verdict(v, lambda m: X.describe(m))
    elif args.dim is not None:
        d = heyting_dim(X, args.dim)
        doc["dim"] = "exceeds max" if d is None else d
    elif args.ontop is not None:
        obj, sep, name = args.ontop.partition(":")
        if not sep:
            raise UsageError("--ontop expects OBJECT:ELEMENT")
        D = cat.object_index(obj)
        x = X.element_index(D, name)
        v = element_on_top(cat, I, X, D, x)
        doc["ontop"] = {"element": args.ontop, **_verdict(v, lambda f: cat.morphisms[f])}
    _emit(doc, out)


def cmd_example(args, out):
    cat = generate_example(args.kind, *args.params)
    _emit(cat.to_spec(), out)


def build_parser():
    p = argparse.ArgumentParser(prog="aufheben",
                                description="Levels and successors for finite sites.")
    sub = p.add_subparsers(dest="command", required=True)

    def cat_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("category", help="category JSON file, or - for stdin")
        sp.set_defaults(func=func)
        return sp

    cat_cmd("check", cmd_check, "validate a category file")
    sp = cat_cmd("classify", cmd_classify, "mono/epi/split classification")
    sp.add_argument("--morphism", help="comma-separated morphism names (default: all)")
    sp = cat_cmd("levels", cmd_levels, "poset of subobject-closed subcategories")
    sp.add_argument("--dot", nargs="?", const="-", help="write DOT (to a file, or stdout)")
    sp.add_argument("--json", action="store_true", help="emit JSON (default)")
    cat_cmd("chain", cmd_chain, "successor chain from the empty subcategory")
    sp = cat_cmd("successor", cmd_successor, "successor of a subcategory")
    sp.add_argument("--subcat", required=True)
    for name, func, text in (
            ("ideal", cmd_ideal, "closure, idempotence and mono-cartesianness of an ideal"),
            ("ontop", cmd_ontop, "whether a map is on top of an ideal")):
        sp = cat_cmd(name, func, text)
        sp.add_argument("--generators", help="comma-separated morphism names")
        sp.add_argument("--subcat", help="comma-separated object names")
        if name == "ontop":
            sp.add_argument("--map", required=True)

    sp = cat_cmd("presheaf", cmd_presheaf, "presheaf computations")
    sp.add_argument("presheaf", help="presheaf JSON file, or - for stdin")
    sp.add_argument("--ideal-subcat", default="")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--core", action="store_true")
    grp.add_argument("--sheafify", action="store_true")
    grp.add_argument("--boolean", action="store_true")
    grp.add_argument("--dim", type=int, metavar="N")
    grp.add_argument("--ontop", metavar="D:x")

    sp = sub.add_parser("example", help="emit a generated category")
    sp.add_argument("kind", choices=["delta", "fin", "graphic", "trees", "poset", "chain"])
    sp.add_argument("params", nargs="*")
    sp.set_defaults(func=cmd_example)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.command == "presheaf" and args.category == "-" and args.presheaf == "-":
        err.write("aufheben: only one input may come from stdin\n")
        return 2
    try:
        args.func(args, out)
    except UsageError as exc:
        err.write(f"aufheben: {exc}\n")
        return 2
    except AufhebenError as exc:
        err.write(json.dumps(exc.to_json(), sort_keys=True, default=str) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
