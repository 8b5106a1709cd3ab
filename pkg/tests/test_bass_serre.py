import pytest

from eicheck.bass_serre import (NotConnected, NotInjective, ReducedWord,
                                expand_fixed_subtree, fixed_subtree_states,
                                normaliser_finiteness, reduce_word,
                                validate_gog, verify_normalising_word)
from eicheck.groups import (GroupMap, Subgroup, cyclic_group, preset_group,
                            subgroup_closure)


def inclusion_map(sub: Subgroup):
    """GroupMap from the subgroup (as standalone group) into its parent."""
    grp, emb = sub.as_group()
    return grp, GroupMap(grp, sub.parent, emb)


def d8_amalgam():
    """Two copies of D8 glued along the four-element subgroup {1,t,s^2 t,s^2}."""
    d8 = preset_group("D8")
    t = d8.labels.index("t")
    s2t = d8.labels.index("s^2t")
    c = subgroup_closure(d8, [t, s2t])
    cg, emb = inclusion_map(c)
    return validate_gog((d8, d8), ((0, 1, cg, emb, emb),)), d8


def klein_loop():
    """V4 loop: one side embeds identically, the other by the 3-cycle a->b->c."""
    v4 = preset_group("V4")
    ident = GroupMap(v4, v4, tuple(range(4)))
    iota = GroupMap(v4, v4, (0, 2, 3, 1))  # a -> b -> c -> a
    return validate_gog((v4,), ((0, 0, v4, ident, iota),)), v4


def sl2z_datum():
    """C4 and C6 glued along C2."""
    c4, c6, c2 = cyclic_group(4), cyclic_group(6), cyclic_group(2)
    into4 = GroupMap(c2, c4, (0, 2))
    into6 = GroupMap(c2, c6, (0, 3))
    return validate_gog((c4, c6), ((0, 1, c2, into4, into6),))


def free_product_c2_c2():
    a, b, triv = cyclic_group(2), cyclic_group(2), cyclic_group(1)
    ea = GroupMap(triv, a, (0,))
    eb = GroupMap(triv, b, (0,))
    return validate_gog((a, b), ((0, 1, triv, ea, eb),))


def test_validate_single_vertex():
    g = validate_gog((preset_group("S3"),), ())
    assert g.n_directed == 0


def test_validate_sl2z():
    g = sl2z_datum()
    assert g.n_directed == 2
    assert g.origin(0) == 0 and g.target(0) == 1
    assert g.origin(1) == 1 and g.target(1) == 0


def test_non_injective_rejected():
    c4, c2 = cyclic_group(4), cyclic_group(2)
    squash = GroupMap(c2, c4, (0, 0))
    with pytest.raises(NotInjective):
        validate_gog((c4, c4), ((0, 1, c2, squash, GroupMap(c2, c4, (0, 2))),))


def test_disconnected_rejected():
    c1 = cyclic_group(1)
    with pytest.raises(NotConnected):
        validate_gog((c1, c1), ())


def test_initial_states_empty_when_not_subconjugate():
    gog = free_product_c2_c2()
    f = gog.vertex_groups[0].full_subgroup()
    graph = fixed_subtree_states(gog, 0, f)
    assert not graph.initial


def test_d8_states_cycle():
    gog, d8 = d8_amalgam()
    t = d8.labels.index("t")
    f = subgroup_closure(d8, [t])
    graph = fixed_subtree_states(gog, 0, f)
    assert graph.initial
    states = graph.states()
    # pushing tau across flips it to s^2 tau and back
    assert len(states) >= 2


def test_klein_three_cycle_states():
    gog, v4 = klein_loop()
    f = subgroup_closure(v4, [1])  # <a>
    graph = fixed_subtree_states(gog, 0, f)
    states = graph.states()
    # the forward loop cycles <a> -> <b> -> <c> -> <a>
    forward = [s for s in states if s[0] == 0]
    assert len(forward) == 3


def test_sl2z_z3_finite_normaliser():
    gog = sl2z_datum()
    c6 = gog.vertex_groups[1]
    f = subgroup_closure(c6, [2])  # order-3 subgroup of C6
    assert f.order == 3
    res = normaliser_finiteness(gog, 1, f)
    assert not res.is_infinite
    assert res.normaliser_order == 6


def test_free_product_left_factor_finite():
    gog = free_product_c2_c2()
    f = gog.vertex_groups[0].full_subgroup()
    res = normaliser_finiteness(gog, 0, f)
    assert not res.is_infinite
    assert res.normaliser_order == 2


def test_trivial_subgroup_infinite_normaliser():
    for gog in (free_product_c2_c2(), sl2z_datum()):
        f = gog.vertex_groups[0].trivial_subgroup()
        res = normaliser_finiteness(gog, 0, f)
        assert res.is_infinite


def test_d8_infinite_with_canonical_witness():
    gog, d8 = d8_amalgam()
    t = d8.labels.index("t")
    f = subgroup_closure(d8, [t])
    res = normaliser_finiteness(gog, 0, f)
    assert res.is_infinite
    w = res.witness
    s = d8.labels.index("s")
    s_inv = d8.inverse[s]
    # canonical witness: 1 y s ybar s^-1
    assert w.edges == (0, 1)
    assert w.labels == (d8.identity, s, s_inv)
    chain, ok = verify_normalising_word(gog, 0, f.members, w)
    assert ok


def test_klein_infinite_with_cube_witness():
    gog, v4 = klein_loop()
    f = subgroup_closure(v4, [1])
    res = normaliser_finiteness(gog, 0, f)
    assert res.is_infinite
    w = res.witness
    # canonical witness: 1 t 1 t 1 t 1
    assert w.edges == (0, 0, 0)
    assert w.labels == (0, 0, 0, 0)
    chain, ok = verify_normalising_word(gog, 0, f.members, w)
    assert ok


def test_expansion_line_for_free_product():
    gog = free_product_c2_c2()
    f = gog.vertex_groups[0].trivial_subgroup()
    levels, nodes = expand_fixed_subtree(gog, 0, f, 6)
    assert levels == [1, 2, 2, 2, 2, 2, 2]


def test_d8_expansion_levels_nonzero():
    gog, d8 = d8_amalgam()
    t = d8.labels.index("t")
    f = subgroup_closure(d8, [t])
    levels, _ = expand_fixed_subtree(gog, 0, f, 8)
    assert all(size > 0 for size in levels)


def test_expansion_matches_verdict():
    cases = []
    gog, d8 = d8_amalgam()
    t = d8.labels.index("t")
    cases.append((gog, 0, subgroup_closure(d8, [t])))
    gog2 = sl2z_datum()
    cases.append((gog2, 1, subgroup_closure(gog2.vertex_groups[1], [2])))
    gog3 = free_product_c2_c2()
    cases.append((gog3, 0, gog3.vertex_groups[0].full_subgroup()))
    gog4, v4 = klein_loop()
    cases.append((gog4, 0, subgroup_closure(v4, [1])))
    for gog, base, f in cases:
        res = normaliser_finiteness(gog, base, f)
        levels, _ = expand_fixed_subtree(gog, base, f, 10)
        assert res.is_infinite == (levels[10] > 0)


def test_sl2z_expansion_levels():
    gog = sl2z_datum()
    f = subgroup_closure(gog.vertex_groups[1], [2])
    levels, _ = expand_fixed_subtree(gog, 1, f, 4)
    assert levels == [1, 0, 0, 0, 0]


def test_witness_chain_replay():
    gog, d8 = d8_amalgam()
    t = d8.labels.index("t")
    f = subgroup_closure(d8, [t])
    res = normaliser_finiteness(gog, 0, f)
    chain, ok = verify_normalising_word(gog, 0, f.members, res.witness)
    assert ok
    s2t = d8.labels.index("s^2t")
    assert chain[1] == (0, t)          # entering the edge group as <t>
    assert (0, s2t) in chain           # pushed through <s^2 t>


def test_reduce_word_cancellation():
    gog = free_product_c2_c2()
    # 1 y 1 ybar 1 collapses to the identity word
    w = ReducedWord(0, (0, 1), (0, 0, 0))
    red = reduce_word(gog, w)
    assert red.edges == ()
    assert red.labels == (0,)
