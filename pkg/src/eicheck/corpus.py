"""Deterministic test-corpus generation.

Three strata: free categories on random quivers (unique factorisation by
construction), categories of random posets (unique factorisation iff the
poset has unique saturated chains), and a fixed hand-built stratum of
regression categories including the failure modes.
"""

from __future__ import annotations

import random

from .category import (EICategory, one_object_category, poset_category,
                       skeletalise, validate_ei)
from .constructions import GPoset, orbit_category, quillen_category, transporter_category
from .groups import (FiniteGroup, GroupMap, all_subgroups, cyclic_group,
                     klein_four_group, preset_group, subgroup_closure,
                     symmetric_group_3)
from .quiver import Biset, EIQuiver, SizeLimitExceeded, build_free_category

GROUP_POOL = ("C1", "C1", "C2", "C2", "C3", "C4", "V4", "C6", "S3")


def two_element_biset_category() -> EICategory:
    """Two C2-objects, a 2-element hom set, target acting freely and source
    trivially; the stabiliser is {1} x C2 and behaves asymmetrically."""
    arrows = [(0, 0), (0, 0), (1, 1), (1, 1), (0, 1), (0, 1)]
    identities = [0, 2]
    table = {}
    c2 = [[0, 1], [1, 0]]
    for a in range(2):
        for b in range(2):
            table[(a, b)] = c2[a][b]
            table[(a + 2, b + 2)] = c2[a][b] + 2
    for arr in (4, 5):
        table[(arr, 0)] = arr
        table[(arr, 1)] = arr
    table[(2, 4)] = 4
    table[(2, 5)] = 5
    table[(3, 4)] = 5
    table[(3, 5)] = 4
    return validate_ei(2, arrows, identities, table)


def diamond_swap_transporter() -> EICategory:
    """Skeleton of the diamond poset with the middle swap: fails unique
    factorisation with nontrivial endomorphism groups present."""
    leq = [[i == j for j in range(4)] for i in range(4)]
    for x, y in [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]:
        leq[x][y] = True
    p = GPoset(tuple(tuple(r) for r in leq), cyclic_group(2),
               ((0, 1, 2, 3), (0, 2, 1, 3)))
    return skeletalise(transporter_category(p))[0]


def fixed_stratum():
    """Hand-built regression categories, in a stable order."""
    s3 = symmetric_group_3()
    two = [a for a in s3.elements() if s3.element_order(a) == 2][0]
    c2_in_s3 = subgroup_closure(s3, [two])
    c4 = cyclic_group(4)
    out = [
        ("a2", poset_category([(0, 1)], 2)),
        ("a3", poset_category([(0, 1), (1, 2), (0, 2)], 3)),
        ("chain4", poset_category([(i, j) for i in range(4) for j in range(i + 1, 4)], 4)),
        ("diamond", poset_category([(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)], 4)),
        ("bipartite22", poset_category([(0, 2), (0, 3), (1, 2), (1, 3)], 4)),
        ("group-c2", one_object_category(cyclic_group(2))),
        ("group-c3", one_object_category(cyclic_group(3))),
        ("group-s3", one_object_category(s3)),
        ("group-v4", one_object_category(klein_four_group())),
        ("two-element-biset", two_element_biset_category()),
        ("diamond-swap-transporter", diamond_swap_transporter()),
        ("orbit-s3-c2", orbit_category(s3, [s3.trivial_subgroup(), c2_in_s3])),
        ("quillen-c4-all", quillen_category(c4, all_subgroups(c4))),
        ("big-free-chain", big_free_chain()),
    ]
    return out


# ---------------------------------------------------------------------------
# random posets


def random_poset_category(rng: random.Random, max_points=5) -> EICategory:
    n = rng.randint(2, max_points)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.45:
                leq[i][j] = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if leq[x][y] and leq[y][z]:
                    leq[x][z] = True
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y and leq[x][y]]
    return poset_category(pairs, n)


# ---------------------------------------------------------------------------
# random quivers


def _random_subgroup(rng, grp: FiniteGroup, max_index):
    for _ in range(8):
        gens = [rng.randrange(grp.order) for _ in range(rng.randint(0, 2))]
        h = subgroup_closure(grp, gens)
        if grp.order // h.order <= max_index:
            return h
    return grp.full_subgroup()


def _product_with_op(target: FiniteGroup, source: FiniteGroup) -> FiniteGroup:
    nc = source.order
    n = target.order * nc
    table = [[0] * n for _ in range(n)]
    for a in range(target.order):
        for b in range(nc):
            for a2 in range(target.order):
                for b2 in range(nc):
                    table[a * nc + b][a2 * nc + b2] = target.mul(a, a2) * nc + source.mul(b2, b)
    return FiniteGroup(table, name="prod", _validated=True)


def transitive_biset(target: FiniteGroup, source: FiniteGroup, stabiliser_gens) -> Biset:
    """Transitive biset (G_d x G_c^op)/H; element (a, b) has index a*|G_c|+b."""
    prod = _product_with_op(target, source)
    h = subgroup_closure(prod, stabiliser_gens)
    hset = set(h.members)
    cosets = []
    seen = set()
    for x in prod.elements():
        cs = tuple(sorted(prod.mul(x, m) for m in hset))
        if cs not in seen:
            seen.add(cs)
            cosets.append(cs)
    index = {cs: i for i, cs in enumerate(cosets)}
    nc = source.order

    def move(p_elt, cs):
        return tuple(sorted(prod.mul(p_elt, x) for x in cs))

    left = [[index[move(g * nc + source.identity, cs)] for cs in cosets]
            for g in range(target.order)]
    right = [[index[move(target.identity * nc + hh, cs)] for hh in range(nc)]
             for cs in cosets]
    return Biset(len(cosets), left, right)


def _coset_biset(rng, target: FiniteGroup, source: FiniteGroup, max_size):
    """Transitive biset for a random stabiliser of index at most max_size."""
    prod = _product_with_op(target, source)
    h = _random_subgroup(rng, prod, max_size)
    return transitive_biset(target, source, h.members)


def big_free_chain() -> EICategory:
    """148-dimensional free category on the chain S3 -> C6 -> C4 -> V4 with
    size 12/12/8 transitive bisets; exercises the oracle at scale."""
    s3 = symmetric_group_3()
    c6, c4, v4 = cyclic_group(6), cyclic_group(4), klein_four_group()
    b1 = transitive_biset(c6, s3, [2 * 6 + 0])
    b2 = transitive_biset(c4, c6, [2 * 6 + 3])
    b3 = transitive_biset(v4, c4, [1 * 4 + 2])
    quiv = EIQuiver((s3, c6, c4, v4), ((0, 1, b1), (1, 2, b2), (2, 3, b3)))
    return build_free_category(quiv, max_morphisms=400)


def _union_biset(rng, target, source, max_size):
    """Disjoint union of one or two transitive bisets, size capped."""
    first = _coset_biset(rng, target, source, max_size)
    if first.size < max_size and rng.random() < 0.4:
        second = _coset_biset(rng, target, source, max_size - first.size)
        off = first.size
        left = [list(row) + [x + off for x in row2]
                for row, row2 in zip(first.left, second.left)]
        right = [list(r) for r in first.right] + \
                [[x + off for x in r] for r in second.right]
        return Biset(first.size + second.size, left, right)
    return first


def random_free_category(rng: random.Random, max_dim, max_objects=4) -> EICategory | None:
    n = rng.randint(2, max_objects) if max_objects > 1 else 1
    groups = tuple(preset_group(rng.choice(GROUP_POOL)) for _ in range(n))
    arrows = []
    if n > 1:
        n_arrows = rng.randint(1, 3)
        for _ in range(n_arrows):
            i = rng.randrange(n - 1)
            j = rng.randrange(i + 1, n)
            biset = _union_biset(rng, groups[j], groups[i], max_size=12)
            arrows.append((i, j, biset))
    try:
        quiv = EIQuiver(groups, tuple(arrows))
        cat = build_free_category(quiv, max_morphisms=max_dim)
    except SizeLimitExceeded:
        return None
    if any(len(cat.hom_set(c, d)) > 64 for c in range(n) for d in range(n)):
        return None
    return cat


def generate_corpus(seed=0, min_size=100, max_dim=300, max_objects=4):
    """Deterministic list of (name, skeletal EICategory).

    With max_objects = 1 every entry is a one-object category, i.e. a group.
    """
    rng = random.Random(seed)
    out = [(name, cat) for name, cat in fixed_stratum()
           if cat.n_objects <= max_objects and cat.n_morphisms <= max_dim]
    target_posets = 40 if max_objects > 1 else 0
    target_free = max(min_size - len(out) - target_posets, 40)
    made = 0
    while made < target_free:
        cat = random_free_category(rng, max_dim, max_objects)
        if cat is None:
            continue
        out.append((f"free{made:03d}", cat))
        made += 1
    for i in range(target_posets):
        out.append((f"poset{i:03d}", random_poset_category(rng, max_points=max_objects + 1)))
    for name, cat in out:
        assert cat.is_skeletal(), name
    return out


# ---------------------------------------------------------------------------
# random group posets and graphs of groups (for the construction sweeps)


def _poset_automorphisms(leq):
    from itertools import permutations
    n = len(leq)
    out = []
    for perm in permutations(range(n)):
        if all(leq[x][y] == leq[perm[x]][perm[y]] for x in range(n) for y in range(n)):
            out.append(perm)
    return out


def random_gposet(rng: random.Random, max_points=5) -> GPoset:
    n = rng.randint(2, max_points)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                leq[i][j] = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if leq[x][y] and leq[y][z]:
                    leq[x][z] = True
    autos = _poset_automorphisms(leq)

    def closure(gens):
        perms = {tuple(range(n))}
        frontier = [tuple(range(n))]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = tuple(g[cur[i]] for i in range(n))
                if nxt not in perms:
                    perms.add(nxt)
                    frontier.append(nxt)
        return perms

    gens = [rng.choice(autos) for _ in range(rng.randint(1, 2))]
    perms = closure(gens)
    if len(perms) > 12:   # keep transporter biset computations desk-sized
        perms = closure(gens[:1])
    elements = sorted(perms)
    index = {p: i for i, p in enumerate(elements)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in elements]
             for p in elements]
    grp = FiniteGroup(table, name="Aut", _validated=True)
    return GPoset(tuple(tuple(r) for r in leq), grp, tuple(elements))


GOG_GROUP_POOL = ("C1", "C2", "C2", "C3", "C4", "C6", "C8", "V4", "D8", "Q8")


def _embed_cyclic(rng, order, grp: FiniteGroup):
    """A random embedding of C_order into grp, or None."""
    cands = [a for a in grp.elements() if grp.element_order(a) == order]
    if order > 1 and not cands:
        return None
    gen = rng.choice(cands) if order > 1 else grp.identity
    images = [grp.power(gen, i) for i in range(order)]
    return GroupMap(cyclic_group(order), grp, tuple(images))


def random_gog(rng: random.Random):
    """Connected graph of groups: <= 3 vertices, groups of order <= 8,
    cyclic edge groups, possibly one extra edge or loop."""
    from .bass_serre import validate_gog
    n = rng.randint(1, 3)
    groups = tuple(preset_group(rng.choice(GOG_GROUP_POOL)) for _ in range(n))
    edges = []
    # spanning tree
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v))
    if rng.random() < 0.5:
        u = rng.randrange(n)
        v = rng.randrange(n)
        edges.append((u, v) if u <= v else (v, u))
    records = []
    for u, v in edges:
        common = [d for d in (1, 2, 3, 4)
                  if any(groups[u].element_order(a) == d for a in groups[u].elements())
                  and any(groups[v].element_order(a) == d for a in groups[v].elements())]
        order = rng.choice(common)
        emb_u = _embed_cyclic(rng, order, groups[u])
        emb_v = _embed_cyclic(rng, order, groups[v])
        records.append((u, v, cyclic_group(order), emb_u, emb_v))
    return validate_gog(groups, records)


def random_gog_query(rng: random.Random, gog):
    """A (base vertex, subgroup) pair for a normaliser query."""
    base = rng.randrange(len(gog.vertex_groups))
    grp = gog.vertex_groups[base]
    gens = [rng.randrange(grp.order) for _ in range(rng.randint(0, 1))]
    return base, subgroup_closure(grp, gens)
