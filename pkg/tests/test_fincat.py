import itertools

import pytest
from hypothesis import given, settings, strategies as st

from aufheben.errors import (
    AssociativityViolation,
    DanglingReference,
    DuplicateName,
    IdentityViolation,
    MissingComposite,
    SizeOverflow,
)
from aufheben.examples import chain, delta, fin, graphic, poset
from aufheben.fincat import (
    FullSubcategory,
    _classify_generic,
    build_category,
    classify_morphism,
    has_factorization_property,
    is_subobject_closed,
    mono_preorder,
    product,
    split_epi_mono_factor,
    terminal_object,
)

from oracles import count_monotone


def one_object(table=None):
    return {
        "name": "pt",
        "objects": ["*"],
        "morphisms": [{"name": "id", "dom": "*", "cod": "*"}],
        "identities": {"*": "id"},
        "composition": [{"g": "id", "f": "id", "gf": "id"}] if table is None else table,
    }


def two_element_monoid(square):
    """One object with id and e, where e*e = ``square``."""
    return {
        "name": "m2",
        "objects": ["*"],
        "morphisms": [{"name": "id", "dom": "*", "cod": "*"},
                      {"name": "e", "dom": "*", "cod": "*"}],
        "identities": {"*": "id"},
        "composition": [
            {"g": "id", "f": "id", "gf": "id"},
            {"g": "id", "f": "e", "gf": "e"},
            {"g": "e", "f": "id", "gf": "e"},
            {"g": "e", "f": "e", "gf": square},
        ],
    }


def test_one_object_category():
    c = build_category(one_object())
    assert c.n_objects == 1 and c.n_morphisms == 1
    assert classify_morphism(c, 0).iso


def test_chain_composition_is_forced():
    c = chain(3)
    assert c.n_morphisms == 6
    f, g = c.morphism_index("0<=1"), c.morphism_index("1<=2")
    assert c.morphisms[c.compose(g, f)] == "0<=2"


def test_missing_composite():
    with pytest.raises(MissingComposite):
        build_category(one_object(table=[]))


def test_wrong_codomain_in_table():
    spec = two_element_monoid("e")
    spec["objects"].append("o")
    spec["morphisms"].append({"name": "id_o", "dom": "o", "cod": "o"})
    spec["identities"]["o"] = "id_o"
    spec["composition"].append({"g": "id_o", "f": "id", "gf": "id"})
    with pytest.raises(DanglingReference):
        build_category(spec)


def test_duplicate_names():
    spec = one_object()
    spec["morphisms"].append({"name": "id", "dom": "*", "cod": "*"})
    with pytest.raises(DuplicateName):
        build_category(spec)


def test_identity_law_checked():
    spec = two_element_monoid("e")
    spec["composition"][1] = {"g": "id", "f": "e", "gf": "id"}
    with pytest.raises(IdentityViolation):
        build_category(spec)


def test_associativity_checked():
    # {1, a, b} with aa = b, ab = b, ba = a, bb = b: (aa)a = ba = a but a(aa) = ab = b
    table = {("a", "a"): "b", ("a", "b"): "b", ("b", "a"): "a", ("b", "b"): "b"}
    comp = []
    for g, f in itertools.product("1ab", repeat=2):
        gf = f if g == "1" else g if f == "1" else table[(g, f)]
        comp.append({"g": g, "f": f, "gf": gf})
    spec = {
        "name": "bad",
        "objects": ["*"],
        "morphisms": [{"name": n, "dom": "*", "cod": "*"} for n in "1ab"],
        "identities": {"*": "1"},
        "composition": comp,
    }
    with pytest.raises(AssociativityViolation) as exc:
        build_category(spec)
    assert exc.value.witness is not None


def test_roundtrip_through_spec():
    g = graphic()
    again = build_category(g.to_spec())
    assert again.morphisms == g.morphisms
    assert all(again.compose(a, b) == g.compose(a, b) for a, b in g.composable_pairs())


def test_delta_hom_sizes_match_monotone_counts():
    d = delta(3)
    for a, b in itertools.product(range(4), repeat=2):
        assert len(d.hom(a, b)) == count_monotone(a, b)


def test_delta1_homs():
    d = delta(1)
    a, b = d.object_index("[0]"), d.object_index("[1]")
    assert (len(d.hom(a, b)), len(d.hom(b, a)), len(d.hom(b, b))) == (2, 1, 3)


def test_fin2_homs():
    f = fin(2)
    one, two = f.object_index("1"), f.object_index("2")
    assert (len(f.hom(two, two)), len(f.hom(one, two)), len(f.hom(two, one)),
            len(f.hom(one, one))) == (4, 2, 1, 1)


def test_identity_is_iso_with_itself():
    d = delta(2)
    for i in d.identities:
        c = classify_morphism(d, i)
        assert c.iso and c.retraction == i and c.section == i


def test_face_map_is_split_mono_not_epi():
    d = delta(2)
    for f in d.hom(d.object_index("[0]"), d.object_index("[1]")):
        c = classify_morphism(d, f)
        assert c.mono and c.split_mono and not c.epi
        assert d.compose(c.retraction, f) == d.identities[d.dom[f]]


def test_fin_mono_epi_are_injective_surjective():
    f = fin(3)
    for m in range(f.n_morphisms):
        img = f.images[m]
        c = classify_morphism(f, m)
        assert c.mono == (len(set(img)) == len(img))
        assert c.epi == (len(set(img)) == f.sizes[f.cod[m]])
        # every function between nonempty sets splits on the side it is injective/surjective
        assert c.split_mono == c.mono and c.split_epi == c.epi


def test_factorization_of_mono_and_split_epi():
    f = fin(3)
    for m in range(f.n_morphisms):
        c = classify_morphism(f, m)
        e, mm = split_epi_mono_factor(f, m)
        assert f.compose(mm, e) == m
        assert classify_morphism(f, e).split_epi and classify_morphism(f, mm).mono
        if c.mono:
            assert c.split_mono
        if c.split_epi and c.mono:
            assert c.iso


def test_factor_of_mono_in_delta_uses_identity():
    d = delta(2)
    for m in range(d.n_morphisms):
        c = classify_morphism(d, m)
        if c.mono and not c.split_epi:
            e, mm = split_epi_mono_factor(d, m)
            assert classify_morphism(d, e).iso


@pytest.mark.parametrize("n", [1, 2, 3])
def test_delta_and_fin_have_factorizations(n):
    assert has_factorization_property(delta(n))
    assert has_factorization_property(fin(n))


def test_graphic_has_factorizations():
    assert has_factorization_property(graphic())


def test_chain_squared():
    p = product(chain(2), chain(2))
    assert (p.n_objects, p.n_morphisms) == (4, 9)


def test_product_with_point():
    pt = build_category(one_object())
    d = delta(2)
    p = product(d, pt)
    assert (p.n_objects, p.n_morphisms) == (d.n_objects, d.n_morphisms)


def test_product_cap():
    with pytest.raises(SizeOverflow):
        product(fin(3), fin(3), size_cap=100)


def _flags(c):
    return (c.mono, c.epi, c.split_mono, c.split_epi, c.iso)


@pytest.mark.parametrize("left,right", [(fin(2), delta(1)), (fin(3), fin(2)), (graphic(), chain(2))])
def test_product_classification_matches_generic_scan(left, right):
    p = product(left, right)
    for f in range(p.n_morphisms):
        assert _flags(p.classify(f)) == _flags(_classify_generic(p, f))


def test_product_mono_iff_components_mono():
    p = product(fin(3), fin(2))
    for f in range(p.n_morphisms):
        a, b = p.split_morphism(f)
        assert p.classify(f).mono == (p.left.classify(a).mono and p.right.classify(b).mono)


def test_mono_preorder_fin():
    f = fin(3)
    leq = mono_preorder(f)
    for a, b in itertools.product(range(3), repeat=2):
        assert leq[a][b] == (a <= b)


def test_mono_preorder_graphic():
    g = graphic()
    leq = mono_preorder(g)
    one, G, D = (g.object_index(o) for o in "1GD")
    assert leq[one][D] and leq[one][G] and not leq[D][one]


def test_subobject_closed():
    f = fin(3)
    assert is_subobject_closed(f, FullSubcategory.empty(f))
    assert is_subobject_closed(f, FullSubcategory.whole(f))
    v = is_subobject_closed(f, FullSubcategory.of(f, ["2"]))
    assert not v
    m = v.witness
    assert f.objects[f.dom[m]] == "1" and f.classify(m).mono


def test_terminal():
    assert graphic().objects[terminal_object(graphic())] == "1"
    assert delta(3).objects[terminal_object(delta(3))] == "[0]"
    two = poset(["a", "b"], [], name="discrete")
    assert terminal_object(two) is None


def test_dangling_object_lookup():
    with pytest.raises(DanglingReference):
        delta(1).object_index("[7]")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 200), st.integers(0, 200), st.integers(0, 200))
def test_composition_associative_in_fin3(i, j, k):
    f = fin(3)
    a = i % f.n_morphisms
    # walk to a composable triple
    b = f.out_of(f.cod[a])[j % len(f.out_of(f.cod[a]))]
    c = f.out_of(f.cod[b])[k % len(f.out_of(f.cod[b]))]
    assert f.compose(c, f.compose(b, a)) == f.compose(f.compose(c, b), a)
