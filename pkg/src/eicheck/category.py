"""Finite EI categories with full composition tables.

A category is stored as an indexed morphism list (ids 0..m-1 with source
and target), a composition table on composable pairs, and one identity
per object.  Validation enforces the EI property: every endomorphism
monoid must be a group.  Everything downstream (factorisation posets,
biset decompositions, the hereditarity decision) is brute force over
these tables, which is exact and fast at hom-set sizes <= ~64.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import CoefficientField, FiniteGroup, Subgroup


class CategoryError(ValueError):
    """Raised when raw data fails category or EI validation."""


class NotAssociativeComposition(CategoryError):
    def __init__(self, h, g, f):
        super().__init__(f"composition not associative at morphisms ({h},{g},{f})")
        self.witness = (h, g, f)


class BadIdentity(CategoryError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class BadComposition(CategoryError):
    pass


class EndoNotInvertible(CategoryError):
    def __init__(self, obj, morphism):
        super().__init__(f"endomorphism {morphism} of object {obj} is not invertible")
        self.witness = (obj, morphism)


class NonDirectedAfterSkeleton(CategoryError):
    pass


class NotSkeletal(CategoryError):
    pass


class EICategory:
    """Immutable finite EI category.  Build via validate_ei()."""

    __slots__ = ("n_objects", "src", "dst", "identity", "hom", "compose_table",
                 "object_labels", "morphism_labels", "_cache")

    def __init__(self, n_objects, src, dst, identity, compose_table,
                 object_labels=None, morphism_labels=None):
        self.n_objects = n_objects
        self.src = tuple(src)
        self.dst = tuple(dst)
        self.identity = tuple(identity)
        self.compose_table = dict(compose_table)
        hom = {}
        for i in range(len(self.src)):
            hom.setdefault((self.src[i], self.dst[i]), []).append(i)
        self.hom = {k: tuple(sorted(v)) for k, v in hom.items()}
        self.object_labels = tuple(object_labels) if object_labels else tuple(
            f"x{i}" for i in range(n_objects))
        self.morphism_labels = tuple(morphism_labels) if morphism_labels else tuple(
            f"m{i}" for i in range(len(self.src)))
        self._cache = {}

    # -- basic access -------------------------------------------------------

    @property
    def n_morphisms(self):
        return len(self.src)

    def morphisms(self):
        return range(len(self.src))

    def hom_set(self, c, d):
        return self.hom.get((c, d), ())

    def compose(self, g, f):
        """g after f.  Raises KeyError if not composable."""
        return self.compose_table[(g, f)]

    def is_identity(self, f):
        return f == self.identity[self.src[f]]

    def invertibles(self):
        key = "invertibles"
        if key not in self._cache:
            inv = {}
            for f in self.morphisms():
                c, d = self.src[f], self.dst[f]
                for g in self.hom_set(d, c):
                    if (self.compose(g, f) == self.identity[c]
                            and self.compose(f, g) == self.identity[d]):
                        inv[f] = g
                        break
            self._cache[key] = inv
        return self._cache[key]

    def is_invertible(self, f):
        return f in self.invertibles()

    def inverse(self, f):
        return self.invertibles()[f]

    def endo_group(self, c):
        """End(c) as a FiniteGroup together with local-index -> morphism id."""
        key = ("endo", c)
        if key not in self._cache:
            mids = self.hom_set(c, c)
            pos = {m: i for i, m in enumerate(mids)}
            table = [[pos[self.compose(a, b)] for b in mids] for a in mids]
            labels = [self.morphism_labels[m] for m in mids]
            grp = FiniteGroup(table, labels=labels, name=f"G_{self.object_labels[c]}",
                              _validated=True)
            self._cache[key] = (grp, mids)
        return self._cache[key]

    def object_leq(self, c, d):
        """The object preorder: c <= d iff hom(c, d) is nonempty."""
        return c == d or bool(self.hom_set(c, d))

    def iso_classes(self):
        """Partition of objects into isomorphism classes (sorted lists)."""
        key = "iso_classes"
        if key not in self._cache:
            inv = self.invertibles()
            parent = list(range(self.n_objects))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for f in inv:
                a, b = find(self.src[f]), find(self.dst[f])
                if a != b:
                    parent[max(a, b)] = min(a, b)
            classes = {}
            for c in range(self.n_objects):
                classes.setdefault(find(c), []).append(c)
            self._cache[key] = [sorted(v) for _, v in sorted(classes.items())]
        return self._cache[key]

    def is_skeletal(self):
        return all(len(cls) == 1 for cls in self.iso_classes())

    def __repr__(self):
        return (f"EICategory({self.n_objects} objects, "
                f"{self.n_morphisms} morphisms)")


def validate_ei(n_objects, arrows, identities, compose_pairs,
                object_labels=None, morphism_labels=None) -> EICategory:
    """Validate raw data and build an EICategory.

    arrows: list of (src, dst) per morphism id; identities: per-object
    morphism id; compose_pairs: mapping (g, f) -> g∘f, or an iterable of
    (g, f, gf) triples, total on composable pairs.
    """
    if n_objects <= 0:
        raise CategoryError("category must have at least one object")
    src = [a for a, _ in arrows]
    dst = [b for _, b in arrows]
    m = len(arrows)
    if len(identities) != n_objects:
        raise BadIdentity("one identity per object required")
    for c, i in enumerate(identities):
        if not (0 <= i < m) or src[i] != c or dst[i] != c:
            raise BadIdentity(f"identity of object {c} must be an endomorphism", c)
    if isinstance(compose_pairs, dict):
        table = dict(compose_pairs)
    else:
        table = {}
        for g, f, gf in compose_pairs:
            table[(g, f)] = gf
    # totality and typing
    for f in range(m):
        for g in range(m):
            composable = dst[f] == src[g]
            if composable and (g, f) not in table:
                raise BadComposition(f"composition undefined for composable pair ({g},{f})")
            if not composable and (g, f) in table:
                raise BadComposition(f"composition defined for non-composable pair ({g},{f})")
            if composable:
                gf = table[(g, f)]
                if not (0 <= gf < m) or src[gf] != src[f] or dst[gf] != dst[g]:
                    raise BadComposition(f"composite of ({g},{f}) has wrong type")
    # identities neutral
    for f in range(m):
        if table[(f, identities[src[f]])] != f or table[(identities[dst[f]], f)] != f:
            raise BadIdentity(f"identity not neutral on morphism {f}", f)
    # associativity: h∘(g∘f) == (h∘g)∘f over composable triples
    by_src = {}
    for g in range(m):
        by_src.setdefault(src[g], []).append(g)
    for f in range(m):
        for g in by_src.get(dst[f], ()):
            gf = table[(g, f)]
            for h in by_src.get(dst[g], ()):
                if table[(h, gf)] != table[(table[(h, g)], f)]:
                    raise NotAssociativeComposition(h, g, f)
    cat = EICategory(n_objects, src, dst, identities, table,
                     object_labels=object_labels, morphism_labels=morphism_labels)
    # EI property: every endomorphism is invertible
    inv = cat.invertibles()
    for c in range(n_objects):
        for f in cat.hom_set(c, c):
            if f not in inv:
                raise EndoNotInvertible(c, f)
    # antisymmetry of <= on iso classes (automatic for EI, checked defensively)
    reps = [cls[0] for cls in cat.iso_classes()]
    cls_of = {}
    for r, cls in zip(reps, cat.iso_classes()):
        for c in cls:
            cls_of[c] = r
    for c in range(n_objects):
        for d in range(n_objects):
            if cls_of[c] != cls_of[d] and cat.hom_set(c, d) and cat.hom_set(d, c):
                raise NonDirectedAfterSkeleton(
                    f"objects {c}, {d} in distinct iso classes with morphisms both ways")
    return cat


# ---------------------------------------------------------------------------
# builders


def poset_category(leq_pairs, n, labels=None) -> EICategory:
    """The poset category: one morphism x -> y per relation x <= y."""
    leq = {(x, y) for x, y in leq_pairs}
    for x in range(n):
        leq.add((x, x))
    # transitivity closure sanity (input should already be transitive)
    for x, y in sorted(leq):
        for z in range(n):
            if (y, z) in leq:
                leq.add((x, z))
    arrows = sorted(leq)
    index = {a: i for i, a in enumerate(arrows)}
    identities = [index[(x, x)] for x in range(n)]
    table = {}
    for (x, y), f in index.items():
        for (y2, z), g in index.items():
            if y2 == y:
                table[(g, f)] = index[(x, z)]
    mlabels = [f"{x}->{y}" for x, y in arrows]
    return validate_ei(n, arrows, identities, table,
                       object_labels=labels, morphism_labels=mlabels)


def one_object_category(g: FiniteGroup) -> EICategory:
    arrows = [(0, 0)] * g.order
    table = {(a, b): g.mul(a, b) for a in g.elements() for b in g.elements()}
    return validate_ei(1, arrows, [g.identity], table,
                       object_labels=[g.name], morphism_labels=list(g.labels))


# ---------------------------------------------------------------------------
# skeleton and opposite


def skeletalise(cat: EICategory):
    """Full subcategory on least-index representatives of iso classes.

    Returns (skeleton, object_map) where object_map sends each original
    object to its representative's new index.
    """
    classes = cat.iso_classes()
    reps = [cls[0] for cls in classes]
    new_index = {r: i for i, r in enumerate(reps)}
    object_map = {}
    for cls in classes:
        for c in cls:
            object_map[c] = new_index[cls[0]]
    keep = [f for f in cat.morphisms()
            if cat.src[f] in new_index and cat.dst[f] in new_index]
    mmap = {f: i for i, f in enumerate(keep)}
    arrows = [(new_index[cat.src[f]], new_index[cat.dst[f]]) for f in keep]
    identities = [mmap[cat.identity[r]] for r in reps]
    table = {}
    for (g, f), gf in cat.compose_table.items():
        if g in mmap and f in mmap:
            table[(mmap[g], mmap[f])] = mmap[gf]
    skel = validate_ei(len(reps), arrows, identities, table,
                       object_labels=[cat.object_labels[r] for r in reps],
                       morphism_labels=[cat.morphism_labels[f] for f in keep])
    return skel, object_map


def opposite(cat: EICategory) -> EICategory:
    """Reverse all morphisms; composition is transposed."""
    arrows = [(cat.dst[f], cat.src[f]) for f in cat.morphisms()]
    table = {(f, g): gf for (g, f), gf in cat.compose_table.items()}
    return validate_ei(cat.n_objects, arrows, list(cat.identity), table,
                       object_labels=list(cat.object_labels),
                       morphism_labels=list(cat.morphism_labels))


# ---------------------------------------------------------------------------
# factorisation structure


def unfactorisables(cat: EICategory) -> dict:
    """Per object pair, the non-invertible morphisms admitting no
    factorisation into two non-invertibles.  Requires a skeletal category.
    """
    _require_skeletal(cat)
    key = "unfactorisables"
    if key in cat._cache:
        return cat._cache[key]
    out = {}
    for (c, d), mids in sorted(cat.hom.items()):
        if c == d:
            continue
        unf = []
        for alpha in mids:
            factorable = False
            for t in range(cat.n_objects):
                if t == c or t == d:
                    continue
                for f in cat.hom_set(c, t):
                    for g in cat.hom_set(t, d):
                        if cat.compose(g, f) == alpha:
                            factorable = True
                            break
                    if factorable:
                        break
                if factorable:
                    break
            if not factorable:
                unf.append(alpha)
        if unf:
            out[(c, d)] = tuple(unf)
    cat._cache[key] = out
    return out


@dataclass(frozen=True)
class FactorisationPoset:
    """Poset of factorisation classes [t, g, f] of a fixed morphism."""

    alpha: int
    reps: tuple          # one (t, g, f) triple per class
    classes: tuple       # all triples per class
    leq: tuple           # boolean matrix on class indices

    @property
    def size(self):
        return len(self.reps)

    def is_chain(self):
        n = len(self.reps)
        return all(self.leq[i][j] or self.leq[j][i]
                   for i in range(n) for j in range(i + 1, n))


def factorisation_poset(cat: EICategory, alpha: int) -> FactorisationPoset:
    """All ways of writing alpha = g∘f through an intermediate object,
    up to sliding an isomorphism across the factorisation.
    """
    x, y = cat.src[alpha], cat.dst[alpha]
    triples = []
    for t in range(cat.n_objects):
        for f in cat.hom_set(x, t):
            for g in cat.hom_set(t, y):
                if cat.compose(g, f) == alpha:
                    triples.append((t, g, f))
    triples.sort()
    inv = cat.invertibles()
    # equivalence orbits under (t,g,f) -> (t', g∘h^-1, h∘f) for isos h: t -> t'
    assigned = {}
    reps, classes = [], []
    for tr in triples:
        if tr in assigned:
            continue
        orbit = {tr}
        frontier = [tr]
        while frontier:
            t, g, f = frontier.pop()
            for t2 in range(cat.n_objects):
                for h in cat.hom_set(t, t2):
                    if h not in inv:
                        continue
                    nxt = (t2, cat.compose(g, inv[h]), cat.compose(h, f))
                    if nxt not in orbit:
                        orbit.add(nxt)
                        frontier.append(nxt)
        idx = len(reps)
        for member in orbit:
            assigned[member] = idx
        reps.append(min(orbit))
        classes.append(tuple(sorted(orbit)))
    n = len(reps)
    leq = [[False] * n for _ in range(n)]
    for i in range(n):
        t1, g1, f1 = reps[i]
        for j in range(n):
            t2, g2, f2 = reps[j]
            if i == j:
                leq[i][j] = True
                continue
            for h in cat.hom_set(t1, t2):
                if cat.compose(h, f1) == f2 and cat.compose(g2, h) == g1:
                    leq[i][j] = True
                    break
    # partial-order sanity: antisymmetry and transitivity hold in an EI category
    for i in range(n):
        for j in range(n):
            assert not (i != j and leq[i][j] and leq[j][i]), "factorisation order not antisymmetric"
            for k in range(n):
                assert not (leq[i][j] and leq[j][k]) or leq[i][k], \
                    "factorisation order not transitive"
    return FactorisationPoset(alpha, tuple(reps), tuple(classes),
                              tuple(tuple(r) for r in leq))


@dataclass(frozen=True)
class UniqueFactorisationResult:
    ok: bool
    witness: int | None = None  # a morphism whose factorisation poset is not a chain

    def __bool__(self):
        return self.ok


def has_unique_factorisation(cat: EICategory) -> UniqueFactorisationResult:
    """Unique factorisation: every morphism's factorisation poset is a chain.

    For finite categories this is equivalent to factorisations into
    unfactorisables being unique up to a commuting ladder of isomorphisms.
    """
    _require_skeletal(cat)
    key = "unique-factorisation"
    if key not in cat._cache:
        result = UniqueFactorisationResult(True)
        for alpha in cat.morphisms():
            if cat.is_invertible(alpha):
                continue
            if not factorisation_poset(cat, alpha).is_chain():
                result = UniqueFactorisationResult(False, alpha)
                break
        cat._cache[key] = result
    return cat._cache[key]


def has_unique_factorisation_ladder(cat: EICategory) -> UniqueFactorisationResult:
    """Independent oracle: enumerate all chains of unfactorisables for each
    morphism and search for commuting ladders of isomorphisms directly.
    """
    _require_skeletal(cat)
    unf = unfactorisables(cat)
    unf_out = {}
    for (c, d), mids in unf.items():
        unf_out.setdefault(c, []).extend((m, d) for m in mids)

    memo = {}

    def chains(alpha):
        if alpha in memo:
            return memo[alpha]
        x, y = cat.src[alpha], cat.dst[alpha]
        if x == y:
            return []
        out = []
        if alpha in unf.get((x, y), ()):
            out.append((alpha,))
        for u, t in unf_out.get(x, ()):
            if t == y:
                continue
            for beta in cat.hom_set(t, y):
                if cat.compose(beta, u) == alpha:
                    out.extend((u,) + rest for rest in chains(beta))
        memo[alpha] = out
        return out

    inv = cat.invertibles()

    def ladder_equivalent(ch1, ch2):
        if len(ch1) != len(ch2):
            return False
        n = len(ch1)

        def extend(i, h_prev):
            # h_prev: iso x_{i-1} -> x'_{i-1} already chosen (identity at i=1)
            if i == n:
                return True
            lhs_needed = cat.compose(ch2[i - 1], h_prev) if h_prev is not None else ch2[i - 1]
            ti = cat.dst[ch1[i - 1]]
            ti2 = cat.dst[ch2[i - 1]]
            for h in cat.hom_set(ti, ti2):
                if h not in inv:
                    continue
                if cat.compose(h, ch1[i - 1]) != lhs_needed:
                    continue
                if i == n - 1:
                    if cat.compose(ch2[n - 1], h) == ch1[n - 1]:
                        return True
                elif extend(i + 1, h):
                    return True
            return False

        if n == 1:
            return ch1[0] == ch2[0]
        return extend(1, None)

    for alpha in cat.morphisms():
        if cat.is_invertible(alpha):
            continue
        chs = chains(alpha)
        for i in range(len(chs)):
            for j in range(i + 1, len(chs)):
                if not ladder_equivalent(chs[i], chs[j]):
                    return UniqueFactorisationResult(False, alpha)
    return UniqueFactorisationResult(True)


def _require_skeletal(cat):
    if not cat.is_skeletal():
        raise NotSkeletal("operation requires a skeletal category; call skeletalise() first")


# ---------------------------------------------------------------------------
# biset decomposition


@dataclass(frozen=True)
class BisetDecomposition:
    """Orbit decomposition of hom(c, d) under End(d) x End(c)^op."""

    source: int
    target: int
    orbits: tuple              # tuple of sorted morphism-id tuples
    stabilisers: tuple         # Subgroup of product_group per orbit (least rep)
    product_group: FiniteGroup  # End(d) x End(c)^op
    target_order: int          # |End(d)|
    source_order: int          # |End(c)|

    def projection_to_target(self, i) -> tuple:
        """Sorted local End(d)-indices of the first projection of stabiliser i."""
        nc = self.source_order
        return tuple(sorted({p // nc for p in self.stabilisers[i].members}))


def biset_decomposition(cat: EICategory, c, d) -> BisetDecomposition:
    """Decompose hom(c, d) into transitive bisets with explicit stabilisers."""
    _require_skeletal(cat)
    if c == d:
        raise CategoryError("biset decomposition applies to distinct objects")
    gd, gd_mids = cat.endo_group(d)
    gc, gc_mids = cat.endo_group(c)
    nd, nc = gd.order, gc.order
    # product End(d) x End(c)^op; element (a, b) at index a*nc + b
    table = [[0] * (nd * nc) for _ in range(nd * nc)]
    for a in range(nd):
        for b in range(nc):
            for a2 in range(nd):
                for b2 in range(nc):
                    table[a * nc + b][a2 * nc + b2] = gd.mul(a, a2) * nc + gc.mul(b2, b)
    prod = FiniteGroup(table, name=f"End({d})xEnd({c})^op", _validated=True)

    def act(a, b, alpha):
        return cat.compose(gd_mids[a], cat.compose(alpha, gc_mids[b]))

    mids = cat.hom_set(c, d)
    seen = set()
    orbits, stabs = [], []
    for alpha in mids:
        if alpha in seen:
            continue
        orbit = sorted({act(a, b, alpha) for a in range(nd) for b in range(nc)})
        seen.update(orbit)
        rep = orbit[0]
        stab = tuple(a * nc + b for a in range(nd) for b in range(nc)
                     if act(a, b, rep) == rep)
        orbits.append(tuple(orbit))
        stabs.append(Subgroup(prod, stab))
    return BisetDecomposition(c, d, tuple(orbits), tuple(stabs), prod, nd, nc)


# ---------------------------------------------------------------------------
# hereditarity criteria


@dataclass(frozen=True)
class Clause:
    name: str
    ok: bool
    witnesses: tuple = ()

    def to_json(self):
        return {"name": self.name, "ok": self.ok,
                "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses]}


@dataclass(frozen=True)
class HereditarityVerdict:
    side: str
    hereditary: bool
    clauses: tuple
    criterion_only: bool = False

    @property
    def verdict(self):
        return "hereditary" if self.hereditary else "not-hereditary"

    def failed_clauses(self):
        return tuple(c.name for c in self.clauses if not c.ok)

    def to_json(self):
        out = {"side": self.side, "verdict": self.verdict,
               "clauses": [c.to_json() for c in self.clauses]}
        if self.criterion_only:
            out["criterion_only"] = True
        return out


def stabiliser_invertibility_report(cat: EICategory, k: CoefficientField) -> Clause:
    """All biset stabiliser orders invertible in k (symmetric in the pair)."""
    failures = []
    for (c, d) in sorted(cat.hom):
        if c == d:
            continue
        dec = biset_decomposition(cat, c, d)
        for i, stab in enumerate(dec.stabilisers):
            if not k.invertible(stab.order):
                failures.append((c, d, dec.orbits[i][0], stab.order))
    return Clause("stabiliser-orders", not failures, tuple(failures))


def projection_invertibility_report(cat: EICategory, k: CoefficientField) -> Clause:
    """Orders of target-side projections of biset stabilisers invertible in k."""
    failures = []
    for (c, d) in sorted(cat.hom):
        if c == d:
            continue
        dec = biset_decomposition(cat, c, d)
        for i in range(len(dec.orbits)):
            proj = dec.projection_to_target(i)
            if not k.invertible(len(proj)):
                failures.append((c, d, dec.orbits[i][0], len(proj)))
    return Clause("stabiliser-projections", not failures, tuple(failures))


def group_ring_report(cat: EICategory, k: CoefficientField) -> Clause:
    """k[End(c)] hereditary for every object c.

    For a finite group this means the group order is invertible in k
    (the group algebra is then semisimple; otherwise its global
    dimension is infinite).
    """
    failures = []
    for c in range(cat.n_objects):
        grp, _ = cat.endo_group(c)
        if not k.invertible(grp.order):
            failures.append((c, grp.order))
    return Clause("endomorphism-group-rings", not failures, tuple(failures))


def decide_hereditary(cat: EICategory, k: CoefficientField, side="left") -> HereditarityVerdict:
    """Combinatorial hereditarity decision for the category algebra over k.

    The algebra is (left) hereditary iff every endomorphism group ring is
    hereditary, the category has unique factorisation, and all biset
    stabilisers and their target projections have invertible order.  The
    right side is decided on the opposite category.
    """
    _require_skeletal(cat)
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    work = opposite(cat) if side == "right" else cat
    unique = has_unique_factorisation(work)
    clauses = (
        group_ring_report(work, k),
        Clause("unique-factorisation", unique.ok,
               () if unique.ok else (unique.witness,)),
        stabiliser_invertibility_report(work, k),
        projection_invertibility_report(work, k),
    )
    return HereditarityVerdict(side, all(c.ok for c in clauses), clauses)
