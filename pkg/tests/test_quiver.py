import pytest

from eicheck.category import has_unique_factorisation
from eicheck.groups import cyclic_group, preset_group
from eicheck.quiver import (Biset, CyclicQuiver, EIQuiver, build_free_category,
                            free_roundtrip_check, quiver_of_unfactorisables)
from tests.test_category import two_element_biset_category


def trivial_biset(size, target, source):
    left = [[x for x in range(size)] for _ in range(target.order)]
    right = [[x for _ in range(source.order)] for x in range(size)]
    return Biset(size, left, right)


def test_single_vertex_group():
    g = preset_group("S3")
    q = EIQuiver((g,), ())
    cat = build_free_category(q)
    assert cat.n_objects == 1 and cat.n_morphisms == 6


def test_two_vertex_single_arrow_is_a2():
    c1 = cyclic_group(1)
    q = EIQuiver((c1, c1), ((0, 1, trivial_biset(1, c1, c1)),))
    cat = build_free_category(q)
    assert cat.n_morphisms == 3
    assert len(cat.hom_set(0, 1)) == 1


def test_free_action_biset():
    c2 = cyclic_group(2)
    # 2-element biset: target C2 acts freely, source C2 trivially
    left = [[0, 1], [1, 0]]
    right = [[0, 0], [1, 1]]
    q = EIQuiver((c2, c2), ((0, 1, Biset(2, left, right)),))
    cat = build_free_category(q)
    assert len(cat.hom_set(0, 1)) == 2
    assert cat.n_morphisms == 6


def test_cyclic_quiver_rejected():
    c1 = cyclic_group(1)
    with pytest.raises(CyclicQuiver):
        EIQuiver((c1, c1), ((0, 1, trivial_biset(1, c1, c1)),
                            (1, 0, trivial_biset(1, c1, c1))))
    with pytest.raises(CyclicQuiver):
        EIQuiver((c1,), ((0, 0, trivial_biset(1, c1, c1)),))


def test_fiber_product_counts():
    # chain of two arrows with middle group C2: sizes 2 and 2, glued over C2
    c1 = cyclic_group(1)
    c2 = cyclic_group(2)
    b1 = Biset(2, [[0, 1], [1, 0]], [[0], [1]])        # target C2 free on left
    b2 = Biset(2, [[0, 1]], [[0, 1], [1, 0]])          # source C2 free on right
    q = EIQuiver((c1, c2, c1), ((0, 1, b1), (1, 2, b2)))
    cat = build_free_category(q)
    # fiber product: 2*2 elements / C2-gluing = 2 classes
    assert len(cat.hom_set(0, 2)) == 2
    # independent path enumeration: one path, |b2 x_{C2} b1| = 2
    assert has_unique_factorisation(cat).ok


def test_free_categories_have_unique_factorisation():
    c2 = cyclic_group(2)
    c3 = cyclic_group(3)
    b = trivial_biset(3, c3, c2)
    q = EIQuiver((c2, c3), ((0, 1, b),))
    cat = build_free_category(q)
    assert has_unique_factorisation(cat).ok


def test_quiver_of_unfactorisables(a2, a3, diamond):
    assert len(quiver_of_unfactorisables(a2).arrows) == 1
    assert len(quiver_of_unfactorisables(a3).arrows) == 2
    assert len(quiver_of_unfactorisables(diamond).arrows) == 4


def test_roundtrip(a3, diamond, c2_object):
    assert free_roundtrip_check(a3)
    assert not free_roundtrip_check(diamond)
    assert free_roundtrip_check(c2_object)
    assert free_roundtrip_check(two_element_biset_category())


def test_roundtrip_matches_unique_factorisation(a2, a3, diamond):
    for cat in (a2, a3, diamond, two_element_biset_category()):
        assert free_roundtrip_check(cat) == has_unique_factorisation(cat).ok
