"""Modules over finite EI category algebras and their homological algebra.

A left module is a functor: one vector space per object, one matrix per
morphism.  Kernels, images, Hom spaces and Ext groups are all computed
object-wise with exact linear algebra, so nothing here ever touches the
full algebra dimension at once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import EICategory
from .linalg import ExactField, Matrix, column_matrix


class ModulePresentation:
    """Left module over the category algebra: dims and action matrices."""

    __slots__ = ("cat", "field", "dims", "maps")

    def __init__(self, cat: EICategory, field: ExactField, dims, maps):
        self.cat = cat
        self.field = field
        self.dims = tuple(dims)
        self.maps = dict(maps)  # morphism id -> Matrix, identities omitted

    @property
    def total_dim(self):
        return sum(self.dims)

    def act(self, f) -> Matrix:
        if self.cat.is_identity(f):
            return Matrix.identity(self.field, self.dims[self.cat.src[f]])
        return self.maps[f]

    def is_zero(self):
        return self.total_dim == 0

    def validate(self):
        """Check functoriality on the whole composition table (tests only)."""
        cat = self.cat
        for f in cat.morphisms():
            m = self.act(f)
            assert m.nrows == self.dims[cat.dst[f]] and m.ncols == self.dims[cat.src[f]]
        for (g, f), gf in cat.compose_table.items():
            assert self.act(g).mul(self.act(f)) == self.act(gf), (g, f)

    def __repr__(self):
        return f"ModulePresentation(dims={self.dims})"


def zero_module(cat, field):
    return ModulePresentation(cat, field, (0,) * cat.n_objects, {})


def generating_morphisms(cat: EICategory):
    """Morphisms generating the category under composition:
    endomorphism group generators plus all unfactorisables."""
    key = "generating_morphisms"
    if key not in cat._cache:
        from .category import unfactorisables
        gens = []
        for c in range(cat.n_objects):
            grp, mids = cat.endo_group(c)
            gens.extend(mids[a] for a in grp.generators())
        for (_, _), mids in sorted(unfactorisables(cat).items()):
            gens.extend(mids)
        cat._cache[key] = tuple(sorted(gens))
    return cat._cache[key]


def morphism_factorisations(cat: EICategory):
    """Express every morphism as generator∘(shorter morphism): a map
    mid -> (generator mid, tail mid), with None at identities.  BFS order is
    recorded so action matrices can be extended by single products."""
    key = "morphism_factorisations"
    if key not in cat._cache:
        gens = generating_morphisms(cat)
        step = {cat.identity[c]: None for c in range(cat.n_objects)}
        order = sorted(step)
        frontier = list(order)
        while frontier:
            nxt = []
            for m in frontier:
                d = cat.dst[m]
                for g in gens:
                    if cat.src[g] != d:
                        continue
                    gm = cat.compose(g, m)
                    if gm not in step:
                        step[gm] = (g, m)
                        nxt.append(gm)
                        order.append(gm)
            frontier = nxt
        assert len(step) == cat.n_morphisms, "generators do not reach every morphism"
        cat._cache[key] = (tuple(order), step)
    return cat._cache[key]


def extend_generator_maps(cat, field, dims, gen_maps):
    """Complete a morphism->Matrix dict given on generators to all
    non-identity morphisms, multiplying along cached factorisations."""
    order, step = morphism_factorisations(cat)
    maps = dict(gen_maps)
    for m in order:
        if step[m] is None or m in maps:
            continue
        g, tail = step[m]
        tail_mat = (Matrix.identity(field, dims[cat.src[tail]])
                    if cat.is_identity(tail) else maps[tail])
        maps[m] = maps[g].mul(tail_mat)
    for c in range(cat.n_objects):
        maps.pop(cat.identity[c], None)
    return maps


# ---------------------------------------------------------------------------
# free modules


@dataclass
class FreeModule:
    """Direct sum of representables A·e_c, one summand per generator slot."""

    module: ModulePresentation
    slots: tuple                 # object of each summand
    basis: dict                  # object -> list of (slot, morphism id)
    index: dict                  # object -> {(slot, mid): position}


def free_module(cat: EICategory, field: ExactField, slot_objects) -> FreeModule:
    slots = tuple(slot_objects)
    basis = {d: [] for d in range(cat.n_objects)}
    for i, c in enumerate(slots):
        for d in range(cat.n_objects):
            for mid in cat.hom_set(c, d):
                basis[d].append((i, mid))
    index = {d: {key: pos for pos, key in enumerate(basis[d])} for d in basis}
    dims = tuple(len(basis[d]) for d in range(cat.n_objects))
    maps = {}
    for f in cat.morphisms():
        if cat.is_identity(f):
            continue
        c, d = cat.src[f], cat.dst[f]
        mat = [[0] * dims[c] for _ in range(dims[d])]
        for pos, (i, mid) in enumerate(basis[c]):
            mat[index[d][(i, cat.compose(f, mid))]][pos] = 1
        maps[f] = Matrix(field, mat, dims[c])
    return FreeModule(ModulePresentation(cat, field, dims, maps), slots, basis, index)


def regular_module(cat, field):
    """The algebra as a left module over itself: one slot per object."""
    return free_module(cat, field, range(cat.n_objects))


# ---------------------------------------------------------------------------
# radical action and tops


def radical_action_vectors(cat, field, module, group_radicals, d):
    """Vectors spanning (J·M)(d): images of unfactorisables into d (these
    already span all non-invertible images) plus the action of rad(k·End(d))."""
    from .category import unfactorisables
    vecs = []
    for (c, d2), umids in unfactorisables(cat).items():
        if d2 != d:
            continue
        for f in umids:
            m = module.act(f)
            for j in range(m.ncols):
                vecs.append(m.column(j))
    grp, mids = cat.endo_group(d)
    for rad_vec in group_radicals[d]:
        op = None
        for a, coeff in enumerate(rad_vec):
            if coeff == 0:
                continue
            term = module.act(mids[a])
            scaled = Matrix(field, [[x * coeff for x in row] for row in term.rows],
                            term.ncols)
            op = scaled if op is None else Matrix(
                field, [[x + y for x, y in zip(r1, r2)]
                        for r1, r2 in zip(op.rows, scaled.rows)], term.ncols)
        if op is not None:
            for j in range(op.ncols):
                vecs.append(op.column(j))
    return vecs


def top_module(cat, field, group_radicals):
    """A/J as a left module: at each object, k·End(c)/rad, lower objects act by 0."""
    dims = []
    projections = []   # object -> (projection matrix, quotient basis columns)
    for c in range(cat.n_objects):
        grp, _ = cat.endo_group(c)
        proj, free_cols = _quotient_projection(field, group_radicals[c], grp.order)
        dims.append(len(free_cols))
        projections.append((proj, free_cols))
    maps = {}
    for f in cat.morphisms():
        if cat.is_identity(f):
            continue
        c, d = cat.src[f], cat.dst[f]
        if c != d:
            maps[f] = Matrix.zero(field, dims[d], dims[c])
            continue
        grp, mids = cat.endo_group(c)
        a = mids.index(f)
        n = grp.order
        reg = [[0] * n for _ in range(n)]
        for b in range(n):
            reg[grp.mul(a, b)][b] = 1
        proj, free_cols = projections[c]
        lift = column_matrix(field, [[1 if i == j else 0 for i in range(n)]
                                     for j in free_cols], n)
        maps[f] = proj.mul(Matrix(field, reg, n)).mul(lift)
    return ModulePresentation(cat, field, dims, maps), projections


def _quotient_projection(field, rad_rows, n):
    """Projection k^n -> k^n/span(rad_rows) in the non-pivot coordinate basis.

    Each pivot coordinate e_p satisfies e_p = -sum_j red[r][j] e_j modulo the
    span (j over non-pivot columns), which gives its projection column.
    """
    if not rad_rows:
        return Matrix.identity(field, n), list(range(n))
    mat = Matrix(field, [list(v) for v in rad_rows], n)
    red, pivots = mat.rref()
    free_cols = [j for j in range(n) if j not in pivots]
    rows = [[0] * n for _ in free_cols]
    for i, fc in enumerate(free_cols):
        rows[i][fc] = 1
        for r, pc in enumerate(pivots):
            rows[i][pc] = field.normalize(-red.rows[r][fc])
    return Matrix(field, rows, n), free_cols


def simple_top_at(cat, field, group_radicals, c):
    """The summand of A/J concentrated at object c."""
    full, _ = top_module(cat, field, group_radicals)
    dims = [0] * cat.n_objects
    dims[c] = full.dims[c]
    maps = {}
    for f in cat.morphisms():
        if cat.is_identity(f):
            continue
        a, b = cat.src[f], cat.dst[f]
        if a == c and b == c:
            maps[f] = full.maps[f]
        else:
            maps[f] = Matrix.zero(field, dims[b], dims[a])
    return ModulePresentation(cat, field, dims, maps)


# ---------------------------------------------------------------------------
# spans, generators, covers, kernels


def echelon_span(field, vectors, ambient_dim):
    """Row-echelon basis of the span of the given vectors."""
    if not vectors:
        return []
    mat = Matrix(field, [list(v) for v in vectors], ambient_dim)
    red, pivots = mat.rref()
    return [red.rows[i] for i in range(len(pivots))]


class _SpanTracker:
    """Incremental echelon form for membership tests."""

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.rows = []
        self.pivots = []

    def contains(self, vec):
        return self._reduce(vec) is None

    def add(self, vec):
        """Add vector; returns True if it enlarged the span."""
        red = self._reduce(vec)
        if red is None:
            return False
        row, p = red
        self.rows.append(row)
        self.pivots.append(p)
        return True

    def _reduce(self, vec):
        f = self.field
        v = [f.normalize(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p] != 0:
                c = v[p]
                v = [f.normalize(a - c * b) for a, b in zip(v, row)]
        for p in range(self.dim):
            if v[p] != 0:
                inv = _field_inv(f, v[p])
                v = [f.normalize(x * inv) for x in v]
                return v, p
        return None

    @property
    def rank(self):
        return len(self.rows)


def _field_inv(field, x):
    if field.p:
        return pow(int(x), field.p - 2, field.p)
    from fractions import Fraction
    return Fraction(1) / Fraction(x)


def object_topological_order(cat):
    """Objects in a linear extension of the preorder (sources first)."""
    key = "topo_order"
    if key not in cat._cache:
        below = [sum(1 for c in range(cat.n_objects)
                     if c != d and cat.hom_set(c, d)) for d in range(cat.n_objects)]
        cat._cache[key] = sorted(range(cat.n_objects), key=lambda d: (below[d], d))
    return cat._cache[key]


def module_generators(cat, field, module, group_radicals):
    """A small generating set [(object, coordinate vector)] of the module.

    Greedy along a topological object order: add a basis vector whenever it
    lies outside span(J·M + reach of current generators) at its object.
    Nakayama's lemma guarantees the result generates.
    """
    gens = []
    reach = [_SpanTracker(field, module.dims[d]) for d in range(cat.n_objects)]

    def add_generator(c, vec):
        gens.append((c, tuple(vec)))
        for d in range(cat.n_objects):
            if cat.hom_set(c, d):
                for mid in cat.hom_set(c, d):
                    reach[d].add(module.act(mid).apply(list(vec)))

    for c in object_topological_order(cat):
        if module.dims[c] == 0:
            continue
        combined = _SpanTracker(field, module.dims[c])
        for v in radical_action_vectors(cat, field, module, group_radicals, c):
            combined.add(v)
        n_seen = 0
        for j in range(module.dims[c]):
            for row in reach[c].rows[n_seen:]:
                combined.add(row)
            n_seen = len(reach[c].rows)
            unit = [0] * module.dims[c]
            unit[j] = 1
            if not combined.contains(unit):
                add_generator(c, unit)
                for row in reach[c].rows[n_seen:]:
                    combined.add(row)
                n_seen = len(reach[c].rows)
    return gens


@dataclass
class CoverResult:
    free: FreeModule
    surjection: dict     # object -> Matrix: free(d) -> module(d)
    kernel: ModulePresentation
    embedding: dict      # object -> Matrix: kernel(d) -> free(d)
    generators: list


def free_cover_and_kernel(cat, field, module, group_radicals) -> CoverResult:
    """Surject a free module onto `module` and present the kernel."""
    gens = module_generators(cat, field, module, group_radicals)
    fm = free_module(cat, field, [c for c, _ in gens])
    surj = {}
    for d in range(cat.n_objects):
        cols = []
        for (slot, mid) in fm.basis[d]:
            c, vec = gens[slot]
            cols.append(module.act(mid).apply(list(vec)))
        surj[d] = column_matrix(field, cols, module.dims[d])
    # sanity: surjectivity object-wise
    for d in range(cat.n_objects):
        if module.dims[d] and surj[d].rank() != module.dims[d]:
            raise AssertionError("free cover is not surjective")
    emb = {}
    kdims = []
    for d in range(cat.n_objects):
        null = surj[d].nullspace()
        emb[d] = column_matrix(field, null, fm.module.dims[d])
        kdims.append(len(null))
    gen_maps = {}
    for f in generating_morphisms(cat):
        if cat.is_identity(f):
            continue
        c, d = cat.src[f], cat.dst[f]
        if kdims[c] == 0 or kdims[d] == 0:
            gen_maps[f] = Matrix.zero(field, kdims[d], kdims[c])
            continue
        img = fm.module.act(f).mul(emb[c])
        sol = emb[d].solve(img)
        if sol is None:
            raise AssertionError("kernel is not action-stable")
        gen_maps[f] = sol
    kmaps = extend_generator_maps(cat, field, kdims, gen_maps)
    kernel = ModulePresentation(cat, field, kdims, kmaps)
    return CoverResult(fm, surj, kernel, emb, gens)


# ---------------------------------------------------------------------------
# Hom and Ext


def hom_space(cat, field, m, n):
    """Basis of Hom(M, N) as lists of per-object matrices (flattened)."""
    offsets = []
    total = 0
    for c in range(cat.n_objects):
        offsets.append(total)
        total += n.dims[c] * m.dims[c]
    if total == 0:
        return [], offsets, 0

    def var(c, i, j):
        return offsets[c] + i * m.dims[c] + j

    rows = []
    for f in generating_morphisms(cat):
        if cat.is_identity(f):
            continue
        c, d = cat.src[f], cat.dst[f]
        mf, nf = m.act(f), n.act(f)
        # N(f) phi_c - phi_d M(f) = 0, entries (i, j): i < n.dims[d], j < m.dims[c]
        for i in range(n.dims[d]):
            for j in range(m.dims[c]):
                row = [0] * total
                for t in range(n.dims[c]):
                    row[var(c, t, j)] += nf.rows[i][t]
                for s in range(m.dims[d]):
                    row[var(d, i, s)] -= mf.rows[s][j]
                rows.append(row)
    if not rows:
        basis = []
        for j in range(total):
            v = [0] * total
            v[j] = 1
            basis.append(v)
        return basis, offsets, total
    mat = Matrix(field, rows, total)
    return mat.nullspace(), offsets, total


def hom_dim(cat, field, m, n):
    basis, _, _ = hom_space(cat, field, m, n)
    return len(basis)


def ext1_dim_from_cover(cat, field, cover: CoverResult, n) -> int:
    """dim Ext^1(M, N) from a fixed cover 0 -> K -> P -> M -> 0:
    Hom(K, N) modulo restrictions of Hom(P, N)."""
    k = cover.kernel
    hk, offsets_k, total_k = hom_space(cat, field, k, n)
    if not hk:
        return 0
    hp, offsets_p, total_p = hom_space(cat, field, cover.free.module, n)
    restricted = []
    for phi in hp:
        vec = [0] * total_k
        for c in range(cat.n_objects):
            if k.dims[c] == 0 or n.dims[c] == 0:
                continue
            # phi_c as matrix, then compose with embedding K(c) -> P(c)
            pc = cover.free.module.dims[c]
            mat = [[phi[offsets_p[c] + i * pc + j] for j in range(pc)]
                   for i in range(n.dims[c])]
            comp = Matrix(field, mat, pc).mul(cover.embedding[c])
            for i in range(n.dims[c]):
                for j in range(k.dims[c]):
                    vec[offsets_k[c] + i * k.dims[c] + j] = comp.rows[i][j]
        restricted.append(vec)
    if not restricted:
        return len(hk)
    rank = Matrix(field, restricted, total_k).rank()
    return len(hk) - rank


def ext_dim(cat, field, m, n, i, group_radicals) -> int:
    """dim Ext^i(M, N) by dimension shifting along a free resolution."""
    if i == 0:
        return hom_dim(cat, field, m, n)
    current = m
    covers = []
    for _ in range(i):
        cov = free_cover_and_kernel(cat, field, current, group_radicals)
        covers.append(cov)
        current = cov.kernel
    return ext1_dim_from_cover(cat, field, covers[-1], n)


# Fast Ext^1(-, A/J): the top module vanishes on non-invertible morphisms, so
# Hom(X, A/J) splits into independent per-object blocks cut out by two small
# conditions: kill the images from below, commute with the endo generators.


def _lower_image_span(cat, field, module, c):
    from .category import unfactorisables
    vecs = []
    for (a, b), umids in unfactorisables(cat).items():
        if b != c:
            continue
        for u in umids:
            mat = module.act(u)
            for j in range(mat.ncols):
                vecs.append(mat.column(j))
    return echelon_span(field, vecs, module.dims[c])


def _hom_block_into_top(cat, field, module, top, c):
    """Basis of Hom(module, top-summand-at-c), each element a flattened
    (top.dims[c] x module.dims[c]) matrix."""
    s, m = top.dims[c], module.dims[c]
    if s == 0 or m == 0:
        return []
    lower = _lower_image_span(cat, field, module, c)
    grp, mids = cat.endo_group(c)
    rows = []

    def var(i, j):
        return i * m + j

    for vec in lower:   # phi @ v = 0 for image vectors v
        for i in range(s):
            row = [0] * (s * m)
            for j in range(m):
                if vec[j] != 0:
                    row[var(i, j)] = vec[j]
            rows.append(row)
    for a in grp.generators():
        g = mids[a]
        mg = module.act(g)
        tg = top.act(g)
        for i in range(s):
            for j in range(m):
                row = [0] * (s * m)
                for t in range(s):
                    row[var(t, j)] += tg.rows[i][t]
                for t in range(m):
                    row[var(i, t)] -= mg.rows[t][j]
                rows.append(row)
    if not rows:
        basis = []
        for idx in range(s * m):
            v = [0] * (s * m)
            v[idx] = 1
            basis.append(v)
        return basis
    return Matrix(field, rows, s * m).nullspace()


def ext1_dim_vs_top(cat, field, cover: CoverResult, top) -> int:
    """dim Ext^1(M, A/J) from the cover 0 -> K -> P -> M -> 0, computed
    one object at a time."""
    total = 0
    k = cover.kernel
    p = cover.free.module
    for c in range(cat.n_objects):
        hk = _hom_block_into_top(cat, field, k, top, c)
        if not hk:
            continue
        hp = _hom_block_into_top(cat, field, p, top, c)
        s = top.dims[c]
        restricted = []
        for phi in hp:
            mat = Matrix(field, [phi[i * p.dims[c]:(i + 1) * p.dims[c]]
                                 for i in range(s)], p.dims[c])
            comp = mat.mul(cover.embedding[c])
            restricted.append([x for row in comp.rows for x in row])
        rank = Matrix(field, restricted, s * k.dims[c]).rank() if restricted else 0
        total += len(hk) - rank
    return total


# ---------------------------------------------------------------------------
# global dimension


@dataclass(frozen=True)
class GldimResult:
    value: int | None    # None means the bound was exceeded
    bound: int

    def display(self) -> str:
        return str(self.value) if self.value is not None else f">{self.bound}"

    def at_most(self, n) -> bool:
        return self.value is not None and self.value <= n


def gldim_upto(cat, field, bound, group_radicals, collect_kernels=None) -> GldimResult:
    """Projective dimension of A/J, capped at `bound`.

    For a finite-dimensional algebra this equals the global dimension.
    Projectivity of each syzygy K is tested as Ext^1(K, A/J) = 0 via the
    next cover.
    """
    top, _ = top_module(cat, field, group_radicals)
    current = top
    for i in range(bound + 1):
        if current.is_zero():
            return GldimResult(max(i - 1, 0), bound)
        cov = free_cover_and_kernel(cat, field, current, group_radicals)
        if collect_kernels is not None:
            collect_kernels.append(cov)
        if ext1_dim_vs_top(cat, field, cov, top) == 0:
            return GldimResult(i, bound)
        current = cov.kernel
    return GldimResult(None, bound)
