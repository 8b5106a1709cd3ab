"""EI quivers and the free EI category they generate.

A quiver assigns a finite group to each vertex and a two-sided group set
to each arrow.  The generated category has hom-sets built from tuples of
arrow-biset elements along directed paths, glued over the intermediate
groups; tuples are canonicalised to the least member of their orbit so
composition tables come out deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import EICategory, unfactorisables, validate_ei
from .groups import FiniteGroup


class QuiverError(ValueError):
    pass


class CyclicQuiver(QuiverError):
    pass


class SizeLimitExceeded(QuiverError):
    pass


@dataclass(frozen=True)
class Biset:
    """A finite (G_target, G_source)-set: commuting left and right actions."""

    size: int
    left: tuple    # left[g][x] for g in target group
    right: tuple   # right[x][h] for h in source group

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(tuple(r) for r in self.left))
        object.__setattr__(self, "right", tuple(tuple(r) for r in self.right))

    def validate(self, target: FiniteGroup, source: FiniteGroup):
        if len(self.left) != target.order or any(len(r) != self.size for r in self.left):
            raise QuiverError("left action table has wrong shape")
        if len(self.right) != self.size or any(len(r) != source.order for r in self.right):
            raise QuiverError("right action table has wrong shape")
        for x in range(self.size):
            if self.left[target.identity][x] != x:
                raise QuiverError("left action: identity does not fix elements")
            if self.right[x][source.identity] != x:
                raise QuiverError("right action: identity does not fix elements")
        for g1 in target.elements():
            for g2 in target.elements():
                for x in range(self.size):
                    if self.left[target.mul(g1, g2)][x] != self.left[g1][self.left[g2][x]]:
                        raise QuiverError("left action not associative")
        for h1 in source.elements():
            for h2 in source.elements():
                for x in range(self.size):
                    if self.right[x][source.mul(h1, h2)] != self.right[self.right[x][h1]][h2]:
                        raise QuiverError("right action not associative")
        for g in target.elements():
            for h in source.elements():
                for x in range(self.size):
                    if self.left[g][self.right[x][h]] != self.right[self.left[g][x]][h]:
                        raise QuiverError("actions do not commute")


@dataclass(frozen=True)
class EIQuiver:
    """Acyclic quiver with vertex groups and arrow bisets."""

    groups: tuple            # FiniteGroup per vertex
    arrows: tuple            # (source vertex, target vertex, Biset)

    def __post_init__(self):
        n = len(self.groups)
        for s, t, biset in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise QuiverError("arrow endpoint out of range")
            if s == t:
                raise CyclicQuiver("loops are not allowed")
            biset.validate(self.groups[t], self.groups[s])
        if self._has_cycle():
            raise CyclicQuiver("quiver has an oriented cycle")

    def _has_cycle(self):
        n = len(self.groups)
        adj = {v: [] for v in range(n)}
        for s, t, _ in self.arrows:
            adj[s].append(t)
        state = [0] * n

        def dfs(v):
            state[v] = 1
            for w in adj[v]:
                if state[w] == 1 or (state[w] == 0 and dfs(w)):
                    return True
            state[v] = 2
            return False

        return any(state[v] == 0 and dfs(v) for v in range(n))

    def paths(self, c, d):
        """All directed arrow-index paths from c to d."""
        out = []

        def dfs(v, acc):
            if v == d and acc:
                out.append(tuple(acc))
            for i, (s, t, _) in enumerate(self.arrows):
                if s == v:
                    acc.append(i)
                    dfs(t, acc)
                    acc.pop()

        dfs(c, [])
        return sorted(out)


def _canonical_tuple(quiver: EIQuiver, path, tup):
    """Least representative of a path tuple modulo the middle-group moves
    (x_{i+1}, x_i) -> (x_{i+1}·g, g^{-1}·x_i)."""
    if len(tup) <= 1:
        return tuple(tup)
    orbit = {tuple(tup)}
    frontier = [tuple(tup)]
    while frontier:
        cur = frontier.pop()
        for i in range(len(path) - 1):
            mid_group = quiver.groups[quiver.arrows[path[i]][1]]
            b_lo = quiver.arrows[path[i]][2]
            b_hi = quiver.arrows[path[i + 1]][2]
            for g in mid_group.elements():
                ginv = mid_group.inverse[g]
                nxt = list(cur)
                nxt[i + 1] = b_hi.right[cur[i + 1]][g]
                nxt[i] = b_lo.left[ginv][cur[i]]
                nxt = tuple(nxt)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
    return min(orbit)


def build_free_category(quiver: EIQuiver, max_morphisms=4000) -> EICategory:
    """The free EI category on the quiver: endomorphisms are the vertex
    groups, cross morphisms are path tuples glued over intermediate groups.
    """
    n = len(quiver.groups)
    morphs = []     # (c, d, payload); payload = ('endo', g) or ('path', path, tuple)
    index = {}

    def add(c, d, payload):
        key = (c, d, payload)
        if key not in index:
            index[key] = len(morphs)
            morphs.append(key)
            if len(morphs) > max_morphisms:
                raise SizeLimitExceeded(f"free category exceeds {max_morphisms} morphisms")
        return index[key]

    for c in range(n):
        for g in quiver.groups[c].elements():
            add(c, c, ("endo", g))
    for c in range(n):
        for d in range(n):
            if c == d:
                continue
            for path in quiver.paths(c, d):
                seen = set()
                from itertools import product as iproduct
                sizes = [range(quiver.arrows[i][2].size) for i in path]
                for tup in iproduct(*sizes):
                    canon = _canonical_tuple(quiver, path, tup)
                    if canon not in seen:
                        seen.add(canon)
                        add(c, d, ("path", path, canon))

    identities = [index[(c, c, ("endo", quiver.groups[c].identity))] for c in range(n)]
    table = {}
    for gi, (tc, td, gpay) in enumerate(morphs):
        for fi, (fc, fd, fpay) in enumerate(morphs):
            if fd != tc:
                continue
            table[(gi, fi)] = _compose(quiver, index, fc, td, gpay, fpay)
    arrows_typed = [(c, d) for (c, d, _) in morphs]
    labels = [_label(quiver, payload) for (_, _, payload) in morphs]
    return validate_ei(n, arrows_typed, identities, table,
                       morphism_labels=labels)


def _compose(quiver, index, src, dst, gpay, fpay):
    if gpay[0] == "endo" and fpay[0] == "endo":
        grp = quiver.groups[src]
        return index[(src, dst, ("endo", grp.mul(gpay[1], fpay[1])))]
    if gpay[0] == "endo":
        # left action on the last tuple slot
        path, tup = fpay[1], list(fpay[2])
        biset = quiver.arrows[path[-1]][2]
        tup[-1] = biset.left[gpay[1]][tup[-1]]
        canon = _canonical_tuple(quiver, path, tuple(tup))
        return index[(src, dst, ("path", path, canon))]
    if fpay[0] == "endo":
        path, tup = gpay[1], list(gpay[2])
        biset = quiver.arrows[path[0]][2]
        tup[0] = biset.right[tup[0]][fpay[1]]
        canon = _canonical_tuple(quiver, path, tuple(tup))
        return index[(src, dst, ("path", path, canon))]
    path = fpay[1] + gpay[1]
    tup = fpay[2] + gpay[2]
    canon = _canonical_tuple(quiver, path, tup)
    return index[(src, dst, ("path", path, canon))]


def _label(quiver, payload):
    if payload[0] == "endo":
        return f"g{payload[1]}"
    return "p" + "".join(f"[{a}:{x}]" for a, x in zip(payload[1], payload[2]))


def quiver_of_unfactorisables(cat: EICategory) -> EIQuiver:
    """Vertices are the objects with their endomorphism groups; one arrow per
    object pair carrying the unfactorisable morphisms as a two-sided set."""
    groups = []
    mids_of = []
    for c in range(cat.n_objects):
        grp, mids = cat.endo_group(c)
        groups.append(grp)
        mids_of.append(mids)
    arrows = []
    for (c, d), umids in sorted(unfactorisables(cat).items()):
        pos = {m: i for i, m in enumerate(umids)}
        left = [[pos[cat.compose(mids_of[d][g], m)] for m in umids]
                for g in range(groups[d].order)]
        right = [[pos[cat.compose(m, mids_of[c][h])] for h in range(groups[c].order)]
                 for m in umids]
        arrows.append((c, d, Biset(len(umids), left, right)))
    return EIQuiver(tuple(groups), tuple(arrows))


def free_roundtrip_check(cat: EICategory, max_morphisms=4000) -> bool:
    """Whether the category is isomorphic to the free category on its quiver
    of unfactorisables.

    The canonical functor from the free category (send a tuple of
    unfactorisables to its composite, endomorphisms to themselves) is
    well-defined and surjective on every hom-set, so the two categories are
    isomorphic exactly when all hom-set cardinalities agree.
    """
    free = build_free_category(quiver_of_unfactorisables(cat), max_morphisms)
    for c in range(cat.n_objects):
        for d in range(cat.n_objects):
            n_free = len(free.hom_set(c, d))
            n_cat = len(cat.hom_set(c, d))
            if n_free < n_cat:
                raise AssertionError(
                    "free category has fewer morphisms than its base; "
                    "the canonical functor cannot be surjective")
            if n_free != n_cat:
                return False
    return True
