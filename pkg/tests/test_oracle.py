from eicheck.category import one_object_category, validate_ei
from eicheck.groups import CoefficientField, cyclic_group, preset_group
from eicheck.linalg import ExactField, Matrix
from eicheck.modules import (free_cover_and_kernel, hom_dim, regular_module,
                             simple_top_at, top_module)
from eicheck.oracle import (algebra_radical_general, group_algebra_radical,
                            group_radicals, group_set_projectivity_check,
                            induced_projective_check, is_hereditary_oracle,
                            omega_verify, oracle_ext_dim, oracle_gldim,
                            radical, split_group_module,
                            _group_regular_module)
from tests.test_category import two_element_biset_category

K0 = CoefficientField(0)
K2 = CoefficientField(2)
K3 = CoefficientField(3)
K5 = CoefficientField(5)


# -- matrices ----------------------------------------------------------------

def test_matrix_rank_nullspace_rational():
    f = ExactField(0)
    m = Matrix(f, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert m.rank() == 2
    null = m.nullspace()
    assert len(null) == 1
    for row in m.rows:
        assert sum(a * b for a, b in zip(row, null[0])) == 0


def test_matrix_mod_p():
    f = ExactField(2)
    m = Matrix(f, [[1, 1], [1, 1]])
    assert m.rank() == 1
    assert len(m.nullspace()) == 1


def test_matrix_solve():
    f = ExactField(0)
    a = Matrix(f, [[1, 0], [1, 1], [0, 2]])
    b = Matrix(f, [[1], [3], [4]])
    x = a.solve(b)
    assert x is not None
    assert a.mul(x) == b
    bad = Matrix(f, [[1], [1], [1]])
    assert a.solve(bad) is None


# -- radical -----------------------------------------------------------------

def test_group_algebra_radical_c2():
    assert group_algebra_radical(cyclic_group(2), ExactField(0)) == []
    assert group_algebra_radical(cyclic_group(2), ExactField(3)) == []
    rad2 = group_algebra_radical(cyclic_group(2), ExactField(2))
    assert len(rad2) == 1
    assert rad2[0] == [1, 1]  # 1 + g


def test_group_algebra_radical_orders():
    # dim rad(F_p[C_n]) = n - n/p^v where p^v || n (semisimple part has dim n/p^v)
    for n, p, expected in [(4, 2, 3), (6, 2, 3), (6, 3, 4), (12, 2, 9), (8, 2, 7)]:
        rad = group_algebra_radical(cyclic_group(n), ExactField(p))
        assert len(rad) == expected, (n, p)


def test_group_algebra_radical_s3():
    # F_3[S3]: two 1-dim simples survive, radical has dimension 4
    rad = group_algebra_radical(preset_group("S3"), ExactField(3))
    assert len(rad) == 4
    # F_2[S3]/rad = F_2 x M_2(F_2), so the radical is 1-dimensional
    rad = group_algebra_radical(preset_group("S3"), ExactField(2))
    assert len(rad) == 1


def test_radical_structural_with_verification(a2, diamond, c2_object):
    rep = radical(a2, K0)
    assert rep.dim == 1 and rep.verified
    rep = radical(diamond, K0)
    assert rep.dim == 5 and rep.verified  # 4 covers + 1 long composite
    rep = radical(c2_object, K2)
    assert rep.dim == 1 and rep.verified
    rep = radical(c2_object, K3)
    assert rep.dim == 0 and rep.verified


def test_general_radical_matches_structural(a2, c2_object):
    # category algebra of a2 over Q: radical = span of the arrow
    cat = a2
    n = cat.n_morphisms
    products = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            t = cat.compose_table.get((i, j))
            if t is not None:
                products[i][j][t] = 1
    rad = algebra_radical_general(products, n, ExactField(0))
    assert len(rad) == 1


# -- covers, ext, gldim -------------------------------------------------------

def test_free_cover_of_regular_module(a2):
    field = ExactField(0)
    rads = group_radicals(a2, field)
    reg = regular_module(a2, field).module
    cover = free_cover_and_kernel(a2, field, reg, rads)
    assert cover.kernel.total_dim == 0


def test_simple_source_kernel(a2):
    field = ExactField(0)
    rads = group_radicals(a2, field)
    s0 = simple_top_at(a2, field, rads, 0)
    cover = free_cover_and_kernel(a2, field, s0, rads)
    assert cover.kernel.dims == (0, 1)


def test_ext0_regular(a2):
    field = ExactField(0)
    reg = regular_module(a2, field).module
    assert hom_dim(a2, field, reg, reg) == a2.n_morphisms


def test_ext1_between_simples(a2):
    field = ExactField(0)
    rads = group_radicals(a2, field)
    s0 = simple_top_at(a2, field, rads, 0)
    s1 = simple_top_at(a2, field, rads, 1)
    assert oracle_ext_dim(a2, K0, s0, s1, 1) == 1
    assert oracle_ext_dim(a2, K0, s1, s0, 1) == 0


def test_ext2_periodic_f2c2(c2_object):
    field = ExactField(2)
    rads = group_radicals(c2_object, field)
    k_triv = simple_top_at(c2_object, field, rads, 0)
    assert oracle_ext_dim(c2_object, K2, k_triv, k_triv, 1) == 1
    assert oracle_ext_dim(c2_object, K2, k_triv, k_triv, 2) == 1


def test_gldim_regressions(a2, diamond, c2_object):
    assert oracle_gldim(a2, K0, 3).value == 1
    assert oracle_gldim(diamond, K0, 3).value == 2
    assert oracle_gldim(c2_object, K2, 3).value is None
    assert oracle_gldim(c2_object, K2, 3).display() == ">3"
    assert oracle_gldim(c2_object, K3, 3).value == 0


def test_gldim_a3(a3):
    assert oracle_gldim(a3, K0, 2).value == 1
    assert oracle_gldim(a3, K2, 2).value == 1


def test_hereditary_oracle(a2, diamond, c2_object):
    assert is_hereditary_oracle(a2, K0)
    assert not is_hereditary_oracle(diamond, K0)
    assert is_hereditary_oracle(c2_object, K3)
    assert not is_hereditary_oracle(c2_object, K2)


def test_gldim_independent_of_relabelling(diamond):
    # permuting the object order changes cover generator order; result agrees
    perm = [3, 1, 0, 2]
    inv = [perm.index(i) for i in range(4)]
    arrows = [(inv[diamond.src[f]], inv[diamond.dst[f]]) for f in diamond.morphisms()]
    ident = [0] * 4
    for c in range(4):
        ident[inv[c]] = diamond.identity[c]
    cat2 = validate_ei(4, arrows, ident, dict(diamond.compose_table))
    assert oracle_gldim(cat2, K0, 3).value == oracle_gldim(diamond, K0, 3).value


# -- omega --------------------------------------------------------------------

def test_omega_one_object():
    cat = one_object_category(preset_group("S3"))
    rep = omega_verify(cat, K0)
    assert rep.dim_omega == 0
    assert rep.ok


def test_omega_a2(a2):
    rep = omega_verify(a2, K0)
    assert rep.dim_tensor_square == 4
    assert rep.dim_omega == 1
    assert rep.unfactorisable_tensor_dim == 1
    assert rep.ok


def test_omega_two_element_biset():
    cat = two_element_biset_category()
    rep = omega_verify(cat, K0)
    assert rep.ok
    assert rep.dim_omega == 2  # two unfactorisables
    assert rep.unfactorisable_tensor_dim == rep.dim_omega


def test_omega_diamond(diamond):
    rep = omega_verify(diamond, K0)
    assert rep.ok
    assert rep.unfactorisable_tensor_dim is None  # not UFP


# -- induced projectives --------------------------------------------------------

def test_induced_a2(a2):
    rep = induced_projective_check(a2, K0)
    assert rep.ok
    labels = {c.label: (c.expected, c.got) for c in rep.checks}
    assert labels["regular-at-0"][0] == (1, 1)
    assert labels["regular-at-1"][0] == (0, 1)


def test_induced_one_object_group():
    cat = one_object_category(preset_group("S3"))
    rep = induced_projective_check(cat, K0)
    assert rep.ok


def test_induced_two_element_biset():
    cat = two_element_biset_category()
    rep = induced_projective_check(cat, K0)
    assert rep.ok


def test_split_regular_module_c4():
    grp = cyclic_group(4)
    field = ExactField(0)
    reg = _group_regular_module(grp, field)
    parts = split_group_module(grp, field, reg)
    dims = sorted(p.dim for p in parts)
    # over Q: trivial + sign + one 2-dimensional piece
    assert dims == [1, 1, 2]


def test_split_regular_module_s3_char5():
    grp = preset_group("S3")
    field = ExactField(5)
    reg = _group_regular_module(grp, field)
    parts = split_group_module(grp, field, reg)
    assert sum(p.dim for p in parts) == 6
    assert sorted(p.dim for p in parts) == [1, 1, 2, 2]


# -- permutation modules -------------------------------------------------------

def _coset_action(grp, sub):
    cosets = []
    seen = set()
    for g in grp.elements():
        cs = tuple(sorted(grp.mul(g, h) for h in sub.members))
        if cs not in seen:
            seen.add(cs)
            cosets.append(cs)
    index = {cs: i for i, cs in enumerate(cosets)}
    table = []
    for g in grp.elements():
        row = []
        for cs in cosets:
            moved = tuple(sorted(grp.mul(g, x) for x in cs))
            row.append(index[moved])
        table.append(row)
    return table


def test_group_set_projectivity_point():
    grp = cyclic_group(2)
    point = [[0], [0]]
    rep = group_set_projectivity_check(grp, point, K2)
    assert not rep.projective_by_oracle and not rep.stabilisers_invertible
    assert rep.ok
    rep = group_set_projectivity_check(grp, point, K3)
    assert rep.projective_by_oracle and rep.ok


def test_group_set_projectivity_regular():
    grp = preset_group("S3")
    action = [[grp.mul(g, x) for x in grp.elements()] for g in grp.elements()]
    for k in (K0, K2, K3):
        rep = group_set_projectivity_check(grp, action, k)
        assert rep.projective_by_oracle and rep.ok


def test_group_set_projectivity_cosets():
    grp = preset_group("S3")
    from eicheck.groups import all_subgroups
    for sub in all_subgroups(grp):
        act = _coset_action(grp, sub)
        for k in (K0, K2, K3):
            rep = group_set_projectivity_check(grp, act, k)
            assert rep.ok, (sub.members, k)


def test_kernel_module_is_functorial(diamond):
    field = ExactField(0)
    rads = group_radicals(diamond, field)
    top, _ = top_module(diamond, field, rads)
    cov = free_cover_and_kernel(diamond, field, top, rads)
    cov.kernel.validate()


def test_kernel_functorial_with_groups():
    from tests.test_category import two_element_biset_category
    cat = two_element_biset_category()
    for p in (0, 2):
        field = ExactField(p)
        rads = group_radicals(cat, field)
        top, _ = top_module(cat, field, rads)
        cov = free_cover_and_kernel(cat, field, top, rads)
        cov.kernel.validate()


def test_radical_verification_mixed_category():
    from eicheck.corpus import diamond_swap_transporter
    cat = diamond_swap_transporter()
    rep = radical(cat, K2)
    assert rep.endo_radical_dims.count(1) == 2  # two C2 endo groups
    assert rep.nilpotency_index == 3
    assert rep.quotient_radical_dim == 0
    rep = radical(cat, K3)
    assert rep.endo_radical_dims == (0, 0, 0)
    assert rep.verified
