"""Acceptance suite: one test per criterion, exact expectations, with the
stated runtime budgets enforced.  Each test prints a pass line so a -s run
reads as a checklist."""

import json
import random
import subprocess
import sys
import time

import pytest

from eicheck.bass_serre import (normaliser_finiteness, subtree_reaches_depth,
                                verify_normalising_word)
from eicheck.category import (decide_hereditary, factorisation_poset,
                              has_unique_factorisation,
                              has_unique_factorisation_ladder, opposite,
                              skeletalise)
from eicheck.constructions import (check_usc, decide_orbit_hereditary,
                                   decide_quillen_hereditary,
                                   decide_transporter_hereditary,
                                   orbit_category, quillen_category,
                                   transporter_category)
from eicheck.corpus import (generate_corpus, random_gog, random_gog_query,
                            random_gposet)
from eicheck.groups import (CoefficientField, all_families, all_subgroups,
                            preset_group, subgroup_closure)
from eicheck.oracle import (group_set_projectivity_check,
                            induced_projective_check, is_hereditary_oracle,
                            omega_verify, oracle_gldim)

CHARS = [CoefficientField(p) for p in (0, 2, 3, 5)]
K0, K2, K3 = CoefficientField(0), CoefficientField(2), CoefficientField(3)


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(seed=0)


def test_criterion_1_decider_oracle_agreement(corpus):
    """Decider equals oracle on the whole corpus, all chars, both sides."""
    t0 = time.time()
    assert len(corpus) >= 100
    assert all(cat.n_morphisms <= 300 for _, cat in corpus)
    cases = disagreements = 0
    for name, cat in corpus:
        opposed = None
        for k in CHARS:
            for side in ("left", "right"):
                verdict = decide_hereditary(cat, k, side).hereditary
                if side == "right":
                    if opposed is None:
                        opposed = opposite(cat)
                    work = opposed
                else:
                    work = cat
                if verdict != is_hereditary_oracle(work, k):
                    disagreements += 1
                cases += 1
    elapsed = time.time() - t0
    assert disagreements == 0
    assert elapsed < 600, f"sweep took {elapsed:.0f}s"
    print(f"PASS criterion 1: {cases} cases agree, {elapsed:.0f}s")


def test_criterion_2_fixed_regressions(corpus):
    named = dict(corpus)
    assert oracle_gldim(named["a2"], K0, 3).value == 1
    diamond = named["diamond"]
    assert oracle_gldim(diamond, K0, 3).value == 2
    assert not has_unique_factorisation(diamond).ok
    c2 = named["group-c2"]
    assert oracle_gldim(c2, K2, 3).display() == ">3"
    assert oracle_gldim(c2, K3, 3).value == 0
    biset = named["two-element-biset"]
    v2 = decide_hereditary(biset, K2, "left")
    assert not v2.hereditary
    assert "stabiliser-orders" in v2.failed_clauses()
    assert not is_hereditary_oracle(biset, K2)
    for side in ("left", "right"):
        v0 = decide_hereditary(biset, K0, side)
        assert v0.hereditary
    assert is_hereditary_oracle(biset, K0)
    assert is_hereditary_oracle(opposite(biset), K0)
    print("PASS criterion 2: fixed regression table exact")


def test_criterion_3_unique_factorisation_double_check(corpus):
    t0 = time.time()
    for name, cat in corpus:
        chain = has_unique_factorisation(cat).ok
        ladder = has_unique_factorisation_ladder(cat).ok
        assert chain == ladder, name
    print(f"PASS criterion 3: chain/ladder agree on {len(corpus)} categories, "
          f"{time.time() - t0:.0f}s")


def test_criterion_4_differential_forms(corpus):
    t0 = time.time()
    runs = 0
    for name, cat in corpus:
        for k in CHARS:
            rep = omega_verify(cat, k)
            assert rep.ok, name
            assert rep.dim_omega == rep.dim_tensor_square - rep.dim_algebra
            if has_unique_factorisation(cat).ok:
                assert rep.unfactorisable_tensor_dim == rep.dim_omega, name
            runs += 1
    elapsed = time.time() - t0
    assert elapsed < 300, f"omega sweep took {elapsed:.0f}s"
    print(f"PASS criterion 4: {runs} omega checks, {elapsed:.0f}s")


def test_criterion_5_induced_projectives(corpus):
    t0 = time.time()
    runs = 0
    for name, cat in corpus:
        for k in CHARS:
            if decide_hereditary(cat, k, "left").hereditary:
                rep = induced_projective_check(cat, k)
                assert rep.ok, (name, k.characteristic, rep.mismatches())
                runs += 1
    print(f"PASS criterion 5: {runs} induced-module checks, zero mismatches, "
          f"{time.time() - t0:.0f}s")


def test_criterion_6_construction_equivalences():
    t0 = time.time()
    chars = [CoefficientField(p) for p in (0, 2, 3, 5, 7)]
    rng = random.Random(2024)
    gposets = [random_gposet(rng) for _ in range(30)]
    for i, p in enumerate(gposets):
        cat = skeletalise(transporter_category(p))[0]
        assert check_usc(p) == has_unique_factorisation(cat).ok, i
        _assert_projections_injective(cat)
        for k in chars:
            fast = decide_transporter_hereditary(p, k).hereditary
            general = decide_hereditary(cat, k, "left").hereditary
            assert fast == general, (i, k.characteristic)
    orbit_cases = quillen_cases = 0
    for gname in ("S3", "D8", "C4", "V4"):
        grp = preset_group(gname)
        for fam in all_families(grp):
            ocat = orbit_category(grp, fam)
            qcat = quillen_category(grp, fam)
            for k in chars:
                ov = decide_orbit_hereditary(grp, fam, k).hereditary
                assert ov == is_hereditary_oracle(ocat, k), (gname, k.characteristic)
                assert ov == decide_hereditary(ocat, k, "left").hereditary
                assert ov == decide_hereditary(ocat, k, "right").hereditary
                orbit_cases += 1
                qv = decide_quillen_hereditary(grp, fam, k).hereditary
                assert qv == is_hereditary_oracle(qcat, k), (gname, k.characteristic)
                quillen_cases += 1
    print(f"PASS criterion 6: 30 group posets, {orbit_cases} orbit and "
          f"{quillen_cases} Quillen cases, {time.time() - t0:.0f}s")


def _assert_projections_injective(cat):
    """Both projections of every transporter biset stabiliser are injective."""
    from eicheck.category import biset_decomposition
    for (c, d) in sorted(cat.hom):
        if c == d:
            continue
        dec = biset_decomposition(cat, c, d)
        for stab in dec.stabilisers:
            nc = dec.source_order
            assert len({p // nc for p in stab.members}) == stab.order
            assert len({p % nc for p in stab.members}) == stab.order


ORDER_LE_12_GROUPS = (
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12",
    "V4", "S3", "D8", "D10", "D12", "Q8", "A4", "C2xC4", "C2xC6", "C3xC3",
    "C2xC2xC2",
)


def test_criterion_7_permutation_module_projectivity():
    t0 = time.time()
    checks = 0
    for gname in ORDER_LE_12_GROUPS:
        grp = preset_group(gname)
        assert grp.order <= 12
        for sub in all_subgroups(grp):
            action = _coset_action(grp, sub)
            for k in (K0, K2, K3):
                rep = group_set_projectivity_check(grp, action, k)
                assert rep.ok, (gname, sub.members, k.characteristic)
                assert rep.stabilisers_invertible == k.invertible(sub.order)
                checks += 1
    print(f"PASS criterion 7: {checks} coset-module checks agree, "
          f"{time.time() - t0:.0f}s")


def _coset_action(grp, sub):
    cosets = []
    seen = set()
    for g in grp.elements():
        cs = tuple(sorted(grp.mul(g, h) for h in sub.members))
        if cs not in seen:
            seen.add(cs)
            cosets.append(cs)
    index = {cs: i for i, cs in enumerate(cosets)}
    return [[index[tuple(sorted(grp.mul(g, x) for x in cs))] for cs in cosets]
            for g in grp.elements()]


def test_criterion_8_tree_normalisers():
    from tests.test_bass_serre import (d8_amalgam, free_product_c2_c2,
                                       klein_loop, sl2z_datum)
    t0 = time.time()
    gog, d8 = d8_amalgam()
    t = d8.labels.index("t")
    f = subgroup_closure(d8, [t])
    res = normaliser_finiteness(gog, 0, f)
    s = d8.labels.index("s")
    assert res.is_infinite
    assert res.witness.edges == (0, 1)
    assert res.witness.labels == (d8.identity, s, d8.inverse[s])
    gog2, v4 = klein_loop()
    res2 = normaliser_finiteness(gog2, 0, subgroup_closure(v4, [1]))
    assert res2.is_infinite
    assert res2.witness.edges == (0, 0, 0)
    assert res2.witness.labels == (0, 0, 0, 0)
    gog3 = sl2z_datum()
    res3 = normaliser_finiteness(gog3, 1, subgroup_closure(gog3.vertex_groups[1], [2]))
    assert not res3.is_infinite and res3.normaliser_order == 6
    gog4 = free_product_c2_c2()
    res4 = normaliser_finiteness(gog4, 0, gog4.vertex_groups[0].full_subgroup())
    assert not res4.is_infinite and res4.normaliser_order == 2
    # randomised agreement with the explicit expansion oracle at depth 10
    rng = random.Random(99)
    agreements = 0
    while agreements < 50:
        gog = random_gog(rng)
        base, sub = random_gog_query(rng, gog)
        verdict = normaliser_finiteness(gog, base, sub)
        deep = subtree_reaches_depth(gog, base, sub, 10)
        assert verdict.is_infinite == deep, (agreements, base, sub.members)
        if verdict.is_infinite:
            chain, ok = verify_normalising_word(gog, base, sub.members,
                                                verdict.witness)
            assert ok
        agreements += 1
    print(f"PASS criterion 8: regressions exact, 50 random graphs agree, "
          f"{time.time() - t0:.0f}s")


def test_criterion_9_determinism(tmp_path):
    t0 = time.time()
    outputs = []
    for run in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "eicheck.cli", "verify-all",
             "--seed", "0", "--char", "0,3", "--side", "left"],
            capture_output=True)
        assert proc.returncode == 0, proc.stderr.decode()
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
    report = json.loads(outputs[0])
    assert report["summary"]["total"] >= 100
    assert not report["summary"]["failed"]
    print(f"PASS criterion 9: byte-identical verify-all reports, "
          f"{time.time() - t0:.0f}s")


def test_hereditary_implies_chain_factorisations(corpus):
    """Hereditary verdict forces every factorisation poset to be a chain."""
    for name, cat in corpus:
        if decide_hereditary(cat, K0, "left").hereditary:
            for alpha in cat.morphisms():
                if not cat.is_invertible(alpha):
                    assert factorisation_poset(cat, alpha).is_chain(), name
