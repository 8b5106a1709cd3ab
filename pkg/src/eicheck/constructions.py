"""Transporter, orbit, and Quillen categories with specialised deciders.

The builders produce honest EICategory values (validated composition
tables), so every specialised verdict can be cross-checked against both
the general combinatorial decision and the linear-algebra oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import (Clause, EICategory, HereditarityVerdict, validate_ei)
from .groups import (CoefficientField, FiniteGroup, Subgroup, centraliser,
                     is_cyclic_prime_power, normaliser, transporter_set)


class ConditionSViolated(ValueError):
    pass


class UnsupportedEmbedding(ValueError):
    """A family member was not presented inside the claimed vertex group."""


# ---------------------------------------------------------------------------
# group posets and transporter categories


@dataclass(frozen=True)
class GPoset:
    """Finite poset with an order-preserving group action."""

    leq: tuple              # boolean matrix
    group: FiniteGroup
    action: tuple           # permutation of points per group element

    def __post_init__(self):
        object.__setattr__(self, "leq", tuple(tuple(bool(x) for x in row)
                                              for row in self.leq))
        object.__setattr__(self, "action", tuple(tuple(r) for r in self.action))
        n = len(self.leq)
        for row in self.leq:
            if len(row) != n:
                raise ValueError("order relation must be square")
        for x in range(n):
            if not self.leq[x][x]:
                raise ValueError("order relation must be reflexive")
            for y in range(n):
                if x != y and self.leq[x][y] and self.leq[y][x]:
                    raise ValueError("order relation must be antisymmetric")
                for z in range(n):
                    if self.leq[x][y] and self.leq[y][z] and not self.leq[x][z]:
                        raise ValueError("order relation must be transitive")
        g = self.group
        if len(self.action) != g.order:
            raise ValueError("one permutation per group element required")
        for a in g.elements():
            if sorted(self.action[a]) != list(range(n)):
                raise ValueError(f"action of element {a} is not a permutation")
        for a in g.elements():
            for b in g.elements():
                for x in range(n):
                    if self.action[g.mul(a, b)][x] != self.action[a][self.action[b][x]]:
                        raise ValueError("action is not a homomorphism")
        for a in g.elements():
            for x in range(n):
                for y in range(n):
                    if self.leq[x][y] != self.leq[self.action[a][x]][self.action[a][y]]:
                        raise ValueError("action does not preserve the order")

    @property
    def size(self):
        return len(self.leq)

    def act(self, a, x):
        return self.action[a][x]

    def stabiliser(self, x) -> Subgroup:
        return Subgroup(self.group,
                        tuple(a for a in self.group.elements() if self.act(a, x) == x))


def trivial_gposet(leq_pairs, n) -> GPoset:
    from .groups import cyclic_group
    leq = [[i == j for j in range(n)] for i in range(n)]
    for x, y in leq_pairs:
        leq[x][y] = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if leq[x][y] and leq[y][z]:
                    leq[x][z] = True
    return GPoset(tuple(tuple(r) for r in leq), cyclic_group(1),
                  (tuple(range(n)),))


def check_condition_s(p: GPoset) -> bool:
    """If gx <= x then gx = x.  Always true for finite posets; checked
    because it is exactly what makes the transporter category EI."""
    for a in p.group.elements():
        for x in range(p.size):
            gx = p.act(a, x)
            if p.leq[gx][x] and gx != x:
                return False
    return True


def transporter_category(p: GPoset) -> EICategory:
    """Objects are poset elements, morphisms x -> y the group elements with
    gx <= y, composition by group multiplication."""
    if not check_condition_s(p):
        raise ConditionSViolated("action moves a point strictly down")
    morphs = []
    index = {}
    for x in range(p.size):
        for y in range(p.size):
            for g in p.group.elements():
                if p.leq[p.act(g, x)][y]:
                    index[(x, y, g)] = len(morphs)
                    morphs.append((x, y, g))
    identities = [index[(x, x, p.group.identity)] for x in range(p.size)]
    table = {}
    for gi, (y1, z, h) in enumerate(morphs):
        for fi, (x, y2, g) in enumerate(morphs):
            if y2 == y1:
                table[(gi, fi)] = index[(x, z, p.group.mul(h, g))]
    labels = [f"{x}->{y}:{p.group.label(g)}" for (x, y, g) in morphs]
    return validate_ei(p.size, [(x, y) for (x, y, _) in morphs], identities, table,
                       morphism_labels=labels)


def _covers(p: GPoset):
    n = p.size
    cov = [[False] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x != y and p.leq[x][y]:
                if not any(p.leq[x][z] and p.leq[z][y] and z not in (x, y)
                           for z in range(n)):
                    cov[x][y] = True
    return cov


def check_esc(p: GPoset) -> bool:
    """Every related pair is joined by a saturated chain (finite: always)."""
    cov = _covers(p)
    n = p.size
    reach = [[x == y for y in range(n)] for x in range(n)]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            for y in range(n):
                if not reach[x][y]:
                    if any(reach[x][z] and cov[z][y] for z in range(n)):
                        reach[x][y] = True
                        changed = True
    return all(reach[x][y] for x in range(n) for y in range(n)
               if x != y and p.leq[x][y])


def check_usc(p: GPoset) -> bool:
    """At most one saturated chain between any two points."""
    cov = _covers(p)
    n = p.size
    counts = [[0] * n for _ in range(n)]
    order = sorted(range(n), key=lambda x: sum(1 for z in range(n)
                                               if z != x and p.leq[z][x]))
    for x in range(n):
        counts[x][x] = 1
    for y in order:
        for x in range(n):
            if x != y:
                counts[x][y] = sum(counts[x][z] for z in range(n) if cov[z][y])
    return all(counts[x][y] <= 1 for x in range(n) for y in range(n) if x != y)


def decide_transporter_hereditary(p: GPoset, k: CoefficientField) -> HereditarityVerdict:
    """Hereditary iff the poset has unique saturated chains and all point
    stabilisers (and their pairwise intersections along <) have invertible
    order.  Left and right verdicts coincide for transporter categories."""
    if not check_condition_s(p):
        raise ConditionSViolated("action moves a point strictly down")
    if not check_esc(p):
        raise ValueError("saturated chains must exist (automatic for finite posets)")
    usc = check_usc(p)
    stab_fail = []
    for x in range(p.size):
        s = p.stabiliser(x)
        if not k.invertible(s.order):
            stab_fail.append((x, s.order))
    inter_fail = []
    for x in range(p.size):
        for y in range(p.size):
            if x != y and p.leq[x][y]:
                sx = set(p.stabiliser(x).members)
                sy = set(p.stabiliser(y).members)
                order = len(sx & sy)
                if not k.invertible(order):
                    inter_fail.append((x, y, order))
    clauses = (
        Clause("saturated-chain-uniqueness", usc),
        Clause("stabilisers-invertible", not stab_fail, tuple(stab_fail)),
        Clause("stabiliser-intersections-invertible", not inter_fail, tuple(inter_fail)),
    )
    return HereditarityVerdict("both", all(c.ok for c in clauses), clauses)


# ---------------------------------------------------------------------------
# orbit categories


def _conjugacy_class_reps(g: FiniteGroup, family):
    """Deduplicate a family by conjugacy; canonical (order, members) order."""
    seen = {}
    for h in family:
        key = min(h.conjugate(x).members for x in g.elements())
        if key not in seen:
            seen[key] = Subgroup(g, key)
    return [seen[k] for k in sorted(seen, key=lambda m: (len(m), m))]


def orbit_category(g: FiniteGroup, family) -> EICategory:
    """Skeletal orbit category: objects G/K for class representatives K,
    hom(G/L, G/K) realised as right cosets of K in the transporter."""
    reps = _conjugacy_class_reps(g, family)
    morphs = []
    index = {}
    coset_rep = {}
    for i, l in enumerate(reps):
        for j, kk in enumerate(reps):
            seen = set()
            for x in transporter_set(g, l, kk):
                coset = tuple(sorted(g.mul(a, x) for a in kk.members))
                if coset not in seen:
                    seen.add(coset)
                    key = (i, j, coset)
                    index[key] = len(morphs)
                    coset_rep[key] = coset[0]
                    morphs.append(key)
    identities = [index[(i, i, tuple(sorted(reps[i].members)))]
                  for i in range(len(reps))]
    table = {}
    for gi, (j1, m, _) in enumerate(morphs):
        hrep = coset_rep[morphs[gi]]
        for fi, (i, j2, _) in enumerate(morphs):
            if j2 != j1:
                continue
            grep = coset_rep[morphs[fi]]
            prod = g.mul(hrep, grep)
            coset = tuple(sorted(g.mul(a, prod) for a in reps[m].members))
            table[(gi, fi)] = index[(i, m, coset)]
    labels = [f"G/{reps[i].members}->G/{reps[j].members}" for (i, j, _) in morphs]
    olabels = [f"G/{h.members}" for h in reps]
    return validate_ei(len(reps), [(i, j) for (i, j, _) in morphs], identities,
                       table, object_labels=olabels, morphism_labels=labels)


def decide_orbit_hereditary(source, family, k: CoefficientField) -> HereditarityVerdict:
    """Orbit-category hereditarity from group data alone.

    For a finite group: the group order must be invertible, all family
    members must be cyclic of prime power order with invertible order, and
    every Weyl group of a nontrivial member must have invertible order (the
    Weyl group of the trivial subgroup is exempt).  For a graph of finite
    groups the same clauses apply with vertex-group orders in place of |G|
    and the tree-action normaliser computation supplying Weyl groups; that
    verdict is criterion-only, since the category itself is infinite.
    """
    from .bass_serre import GraphOfGroups, normaliser_finiteness
    if isinstance(source, GraphOfGroups):
        return _decide_orbit_gog(source, family, k)
    g = source
    reps = _conjugacy_class_reps(g, family)
    ambient_ok = k.invertible(g.order)
    cyc_fail, order_fail, weyl_fail = [], [], []
    for h in reps:
        r = is_cyclic_prime_power(h)
        if not r.is_cyclic_prime_power:
            cyc_fail.append((h.members, r.reason))
        if not k.invertible(h.order):
            order_fail.append((h.members, h.order))
        if not h.is_trivial():
            w = normaliser(g, h).order // h.order
            if not k.invertible(w):
                weyl_fail.append((h.members, w))
    clauses = (
        Clause("ambient-group-ring", ambient_ok,
               () if ambient_ok else ((g.order,),)),
        Clause("members-cyclic-prime-power", not cyc_fail, tuple(cyc_fail)),
        Clause("member-orders-invertible", not order_fail, tuple(order_fail)),
        Clause("weyl-groups-invertible", not weyl_fail, tuple(weyl_fail)),
    )
    return HereditarityVerdict("both", all(c.ok for c in clauses), clauses)


def _decide_orbit_gog(gog, family, k):
    from .bass_serre import normaliser_finiteness
    vg_fail = []
    for v, grp in enumerate(gog.vertex_groups):
        if not k.invertible(grp.order):
            vg_fail.append((v, grp.order))
    cyc_fail, order_fail, weyl_fail = [], [], []
    for vertex, sub in family:
        if not 0 <= vertex < len(gog.vertex_groups) or sub.parent != gog.vertex_groups[vertex]:
            raise UnsupportedEmbedding(
                f"family member {sub.members} is not a subgroup of vertex group {vertex}")
        r = is_cyclic_prime_power(sub)
        if not r.is_cyclic_prime_power:
            cyc_fail.append((vertex, sub.members, r.reason))
        if not k.invertible(sub.order):
            order_fail.append((vertex, sub.members, sub.order))
        if not sub.is_trivial():
            res = normaliser_finiteness(gog, vertex, sub)
            if res.is_infinite:
                weyl_fail.append((vertex, sub.members, "infinite normaliser"))
            else:
                w = res.normaliser_order // sub.order
                if not k.invertible(w):
                    weyl_fail.append((vertex, sub.members, w))
    clauses = (
        Clause("vertex-group-rings", not vg_fail, tuple(vg_fail)),
        Clause("members-cyclic-prime-power", not cyc_fail, tuple(cyc_fail)),
        Clause("member-orders-invertible", not order_fail, tuple(order_fail)),
        Clause("weyl-groups-invertible", not weyl_fail, tuple(weyl_fail)),
    )
    return HereditarityVerdict("both", all(c.ok for c in clauses), clauses,
                               criterion_only=True)


# ---------------------------------------------------------------------------
# Quillen categories


def quillen_category(g: FiniteGroup, family) -> EICategory:
    """Objects are class representatives, hom(H, K) the right centraliser
    cosets inside the transporter (conjugation maps H into K)."""
    reps = _conjugacy_class_reps(g, family)
    cents = [centraliser(g, h) for h in reps]
    morphs = []
    index = {}
    coset_rep = {}
    for i, h in enumerate(reps):
        for j, kk in enumerate(reps):
            seen = set()
            for x in transporter_set(g, h, kk):
                coset = tuple(sorted(g.mul(x, c) for c in cents[i].members))
                if coset not in seen:
                    seen.add(coset)
                    key = (i, j, coset)
                    index[key] = len(morphs)
                    coset_rep[key] = coset[0]
                    morphs.append(key)
    identities = [index[(i, i, tuple(sorted(cents[i].members)))]
                  for i in range(len(reps))]
    table = {}
    for gi, (j1, m, _) in enumerate(morphs):
        hrep = coset_rep[morphs[gi]]
        for fi, (i, j2, _) in enumerate(morphs):
            if j2 != j1:
                continue
            grep = coset_rep[morphs[fi]]
            prod = g.mul(hrep, grep)
            coset = tuple(sorted(g.mul(prod, c) for c in cents[i].members))
            table[(gi, fi)] = index[(i, m, coset)]
    olabels = [f"Q{h.members}" for h in reps]
    return validate_ei(len(reps), [(i, j) for (i, j, _) in morphs], identities,
                       table, object_labels=olabels)


def decide_quillen_hereditary(g: FiniteGroup, family, k: CoefficientField) -> HereditarityVerdict:
    """Hereditary iff all members are cyclic of prime power order and every
    automorphism group N(K)/C(K) has invertible order; the left and right
    verdicts coincide."""
    reps = _conjugacy_class_reps(g, family)
    cyc_fail, aut_fail = [], []
    for h in reps:
        r = is_cyclic_prime_power(h)
        if not r.is_cyclic_prime_power:
            cyc_fail.append((h.members, r.reason))
        aut = normaliser(g, h).order // centraliser(g, h).order
        if not k.invertible(aut):
            aut_fail.append((h.members, aut))
    clauses = (
        Clause("members-cyclic-prime-power", not cyc_fail, tuple(cyc_fail)),
        Clause("automorphism-group-rings", not aut_fail, tuple(aut_fail)),
    )
    return HereditarityVerdict("both", all(c.ok for c in clauses), clauses)
