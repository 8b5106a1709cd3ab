import random

from eicheck.category import has_unique_factorisation, validate_ei
from eicheck.corpus import (fixed_stratum, generate_corpus, random_gog,
                            random_gog_query, random_gposet)
from eicheck.groups import CoefficientField, cyclic_group
from eicheck.oracle import group_algebra_radical
from eicheck.linalg import ExactField


def test_corpus_contract():
    corpus = generate_corpus(seed=0)
    assert len(corpus) >= 100
    names = [n for n, _ in corpus]
    assert len(set(names)) == len(names)
    for name, cat in corpus:
        assert cat.is_skeletal()
        assert cat.n_morphisms <= 300
        # re-validate from raw parts
        validate_ei(cat.n_objects, list(zip(cat.src, cat.dst)),
                    list(cat.identity), dict(cat.compose_table))


def test_corpus_deterministic():
    a = generate_corpus(seed=0)
    b = generate_corpus(seed=0)
    assert [n for n, _ in a] == [n for n, _ in b]
    for (_, c1), (_, c2) in zip(a, b):
        assert c1.src == c2.src and c1.compose_table == c2.compose_table
    c = generate_corpus(seed=1)
    assert any(x.compose_table != y.compose_table
               for (_, x), (_, y) in zip(a, c))


def test_fixed_stratum_contains_failure_modes():
    named = dict(fixed_stratum())
    assert not has_unique_factorisation(named["diamond"]).ok
    assert not has_unique_factorisation(named["diamond-swap-transporter"]).ok
    # the non-UFP-with-groups witness really has nontrivial groups
    cat = named["diamond-swap-transporter"]
    assert any(cat.endo_group(c)[0].order > 1 for c in range(cat.n_objects))
    assert named["big-free-chain"].n_morphisms == 148


def test_random_gposet_valid():
    rng = random.Random(3)
    for _ in range(10):
        p = random_gposet(rng)
        assert p.group.order <= 12


def test_random_gog_valid():
    rng = random.Random(5)
    for _ in range(10):
        gog = random_gog(rng)
        base, sub = random_gog_query(rng, gog)
        assert sub.parent == gog.vertex_groups[base]


def test_maschke_cross_check():
    # |H| invertible in k iff the group algebra kH is semisimple
    for n in (1, 2, 3, 4, 6, 8):
        grp = cyclic_group(n)
        for p in (0, 2, 3, 5):
            k = CoefficientField(p)
            rad = group_algebra_radical(grp, ExactField(p))
            assert k.invertible(n) == (len(rad) == 0), (n, p)


def test_free_stratum_has_unique_factorisation():
    corpus = generate_corpus(seed=0)
    free_entries = [(n, c) for n, c in corpus if n.startswith("free")]
    assert len(free_entries) >= 40
    for name, cat in free_entries[:15]:
        assert has_unique_factorisation(cat).ok, name


def test_orbit_stabiliser_invariant_on_corpus():
    from eicheck.category import biset_decomposition
    corpus = generate_corpus(seed=0)
    for name, cat in corpus[:20]:
        for (c, d) in sorted(cat.hom):
            if c == d:
                continue
            dec = biset_decomposition(cat, c, d)
            total = dec.target_order * dec.source_order
            for orbit, stab in zip(dec.orbits, dec.stabilisers):
                assert len(orbit) * stab.order == total, name
            assert sum(len(o) for o in dec.orbits) == len(cat.hom_set(c, d))


def test_random_gposets_satisfy_esc_and_s():
    from eicheck.constructions import check_condition_s, check_esc
    rng = random.Random(11)
    for _ in range(15):
        p = random_gposet(rng)
        assert check_condition_s(p)
        assert check_esc(p)


def test_corpus_single_object_limit_gives_groups():
    corpus = generate_corpus(seed=0, min_size=40, max_objects=1)
    assert len(corpus) >= 40
    for name, cat in corpus:
        assert cat.n_objects == 1, name
