import pytest

from eicheck.groups import (CoefficientField, NoInverse, NotAssociative,
                            all_families, all_subgroups, centraliser,
                            conjugacy_class_of_subgroup, cyclic_group,
                            direct_product, family_closure,
                            is_cyclic_prime_power, is_kx_finite,
                            klein_four_group, make_group, normaliser,
                            opposite_group, preset_group, quaternion_group,
                            subgroup_closure, transporter_set)


def test_trivial_group():
    g = make_group([[0]])
    assert g.order == 1 and g.identity == 0


def test_c2_table():
    g = make_group([[0, 1], [1, 0]])
    assert g.order == 2
    assert g.inverse == (0, 1)


def test_s3_order_census():
    g = preset_group("S3")
    assert g.order == 6
    # brute-force order census over the table: three elements of order 2
    orders = sorted(g.element_order(a) for a in g.elements())
    assert orders == [1, 2, 2, 2, 3, 3]


def test_bad_tables_rejected():
    with pytest.raises(NotAssociative):
        # order-5 commutative loop with two-sided inverses, not associative
        make_group([
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ])
    with pytest.raises(Exception):
        make_group([[1, 1], [1, 1]])
    with pytest.raises(NoInverse):
        make_group([[0, 1, 2], [1, 2, 0], [2, 1, 0]])


def test_presets_validate():
    for name in ["C1", "C4", "C6", "V4", "S3", "D8", "Q8", "A4", "C2xC4"]:
        g = preset_group(name)
        make_group(g.table)  # re-validate from scratch


def test_subgroup_closure_trivial_and_c3(s3):
    triv = subgroup_closure(s3, [])
    assert triv.members == (s3.identity,)
    three = [a for a in s3.elements() if s3.element_order(a) == 3][0]
    h = subgroup_closure(s3, [three])
    assert h.order == 3


def test_subgroup_closure_d8_four_element(d8):
    # <t, s^2 t> = {1, t, s^2 t, s^2}
    t = d8.labels.index("t")
    s2t = d8.labels.index("s^2t")
    h = subgroup_closure(d8, [t, s2t])
    assert h.order == 4
    s2 = d8.labels.index("s^2")
    assert set(h.members) == {d8.identity, t, s2t, s2}


def test_normaliser_centraliser_weyl(s3):
    triv = s3.trivial_subgroup()
    assert normaliser(s3, triv).order == 6
    assert centraliser(s3, triv).order == 6
    assert len(transporter_set(s3, triv, triv)) == 6
    three = [a for a in s3.elements() if s3.element_order(a) == 3][0]
    c3 = subgroup_closure(s3, [three])
    assert normaliser(s3, c3).order == 6
    assert centraliser(s3, c3).order == 3
    # |W| * |H| = |N|
    assert normaliser(s3, c3).order // c3.order == 2


def test_transporter_d8(d8):
    t = d8.labels.index("t")
    tau = subgroup_closure(d8, [t])
    c = subgroup_closure(d8, [t, d8.labels.index("s^2t")])
    trans = transporter_set(d8, tau, c)
    s = d8.labels.index("s")
    assert s in trans  # s t s^-1 = s^2 t lies in C


def test_normaliser_containments(s3, d8):
    for g in (s3, d8):
        for h in all_subgroups(g):
            n = normaliser(g, h)
            c = centraliser(g, h)
            assert set(h.members) <= set(n.members)
            assert set(c.members) <= set(n.members)
            assert n.order % h.order == 0
            assert set(transporter_set(g, h, h)) == set(n.members)


def test_cyclic_prime_power():
    triv = cyclic_group(1).full_subgroup()
    r = is_cyclic_prime_power(triv)
    assert r.is_cyclic_prime_power and r.trivial
    c4 = cyclic_group(4).full_subgroup()
    r = is_cyclic_prime_power(c4)
    assert r.is_cyclic_prime_power and (r.prime, r.exponent) == (2, 2)
    v4 = klein_four_group().full_subgroup()
    assert not is_cyclic_prime_power(v4).is_cyclic_prime_power
    c6 = cyclic_group(6).full_subgroup()
    assert not is_cyclic_prime_power(c6).is_cyclic_prime_power


def test_kx_finite():
    c2 = cyclic_group(2).full_subgroup()
    assert is_kx_finite(c2, CoefficientField(0))
    assert not is_kx_finite(c2, CoefficientField(2))
    s3 = preset_group("S3").full_subgroup()
    assert is_kx_finite(s3, CoefficientField(5))
    assert not is_kx_finite(s3, CoefficientField(3))
    assert not is_kx_finite(s3, CoefficientField(2))


def test_family_closure(s3):
    fam = family_closure(s3, [])
    assert len(fam) == 1 and fam[0].is_trivial()
    three = [a for a in s3.elements() if s3.element_order(a) == 3][0]
    c3 = subgroup_closure(s3, [three])
    fam = family_closure(s3, [c3])
    assert [h.order for h in fam] == [1, 3]
    two = [a for a in s3.elements() if s3.element_order(a) == 2][0]
    c2 = subgroup_closure(s3, [two])
    fam = family_closure(s3, [c2])
    assert [h.order for h in fam] == [1, 2, 2, 2]


def test_family_closure_idempotent_monotone(s3):
    subs = all_subgroups(s3)
    fam = family_closure(s3, subs[:2])
    again = family_closure(s3, fam)
    assert [h.members for h in again] == [h.members for h in fam]
    bigger = family_closure(s3, subs)
    assert set(h.members for h in fam) <= set(h.members for h in bigger)


def test_all_subgroups_counts():
    assert len(all_subgroups(cyclic_group(12))) == 6
    assert len(all_subgroups(preset_group("S3"))) == 6
    assert len(all_subgroups(preset_group("D8"))) == 10
    assert len(all_subgroups(quaternion_group())) == 6
    assert len(all_subgroups(preset_group("A4"))) == 10


def test_all_families_s3(s3):
    fams = all_families(s3)
    # down-closed class sets containing the trivial class
    assert len(fams) == 5


def test_direct_product_and_opposite():
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    assert v4.order == 4
    assert sorted(v4.element_order(a) for a in v4.elements()) == [1, 2, 2, 2]
    q8 = quaternion_group()
    op = opposite_group(q8)
    assert op.mul(2, 4) == q8.mul(4, 2)


def test_conjugacy_classes_d8(d8):
    subs = all_subgroups(d8)
    reps = set()
    for h in subs:
        cls = conjugacy_class_of_subgroup(h)
        reps.add(tuple(s.members for s in cls)[0])
    assert len(reps) == 8  # 8 conjugacy classes of subgroups


def test_all_families_counts(d8):
    from eicheck.groups import all_families
    fams_c4 = all_families(cyclic_group(4))
    assert len(fams_c4) == 3  # {1}, {1,C2}, {1,C2,C4}
    fams_d8 = all_families(d8)
    assert all(fam[0].is_trivial() for fam in fams_d8)
    assert len(fams_d8) > 10
