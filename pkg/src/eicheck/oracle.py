"""Ground-truth oracle: exact computations with the category algebra.

Everything a verdict of the combinatorial decider can be checked against:
the Jacobson radical (structural, with an independent general-purpose
radical algorithm for verification), syzygies, Ext groups, global
dimension, the degree-one differential-forms sequence, and the
induced-module structure of projectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .category import EICategory, has_unique_factorisation, unfactorisables
from .groups import CoefficientField, FiniteGroup
from .linalg import ExactField, Matrix, column_matrix
from .modules import (GldimResult, ModulePresentation, _quotient_projection,
                      echelon_span, ext1_dim_vs_top, ext_dim,
                      free_cover_and_kernel, gldim_upto, top_module)


class RadicalVerificationFailed(RuntimeError):
    pass


class ExactnessFailure(RuntimeError):
    pass


def exact_field(k: CoefficientField) -> ExactField:
    return ExactField(k.characteristic)


# ---------------------------------------------------------------------------
# algebra presentation


@dataclass(frozen=True)
class AlgebraPresentation:
    """Category algebra: morphism basis with single-morphism-or-zero products."""

    cat: EICategory
    field: ExactField

    @property
    def dim(self):
        return self.cat.n_morphisms

    def product(self, i, j):
        """Index of e_i * e_j, or None when the morphisms do not compose."""
        return self.cat.compose_table.get((i, j))

    def unit_idempotents(self):
        return self.cat.identity


def category_algebra(cat: EICategory, k: CoefficientField) -> AlgebraPresentation:
    return AlgebraPresentation(cat, exact_field(k))


# ---------------------------------------------------------------------------
# radical: general algorithm and the structural one


def algebra_radical_general(products, n, field: ExactField):
    """Radical of an associative algebra given dense structure vectors.

    products[i][j] is the coefficient vector of e_i * e_j (integer entries;
    for prime fields these are the canonical lifts 0..p-1).

    Characteristic 0 uses the trace-form kernel.  Characteristic p uses the
    divided-trace chain: starting from the full algebra, repeatedly cut by
    x |-> tr(L(x·y)^{p^i}) / p^i mod p for all y in the previous layer,
    for every i with p^i <= n.
    """
    if n == 0:
        return []
    left_mult = []
    for a in range(n):
        mat = [[0] * n for _ in range(n)]
        for b in range(n):
            vec = products[a][b]
            for t, coeff in enumerate(vec):
                if coeff:
                    mat[t][b] = int(coeff)
        left_mult.append(mat)

    def lmat_of(vec):
        out = [[0] * n for _ in range(n)]
        for a, coeff in enumerate(vec):
            if coeff:
                la = left_mult[a]
                for i in range(n):
                    row = la[i]
                    orow = out[i]
                    for j in range(n):
                        if row[j]:
                            orow[j] += coeff * row[j]
        return out

    def alg_product(u, v):
        out = [0] * n
        for a, ca in enumerate(u):
            if not ca:
                continue
            for b, cb in enumerate(v):
                if not cb:
                    continue
                vec = products[a][b]
                for t, coeff in enumerate(vec):
                    if coeff:
                        out[t] += ca * cb * coeff
        return [field.normalize(x) for x in out]

    if field.p == 0:
        gram = [[0] * n for _ in range(n)]
        traces = [sum(left_mult[a][i][i] for i in range(n)) for a in range(n)]
        for i in range(n):
            for j in range(n):
                vec = products[i][j]
                gram[i][j] = sum(int(vec[a]) * traces[a] for a in range(n))
        return Matrix(field, gram, n).nullspace()

    p = field.p
    basis = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    i = 0
    power = 1
    while power <= n:
        rows = []
        for y in basis:
            row = []
            for x in basis:
                z = alg_product(x, y)
                lifted = lmat_of([int(c) % p for c in z])
                tr = _trace_of_power(lifted, power)
                if tr % power != 0:
                    raise RadicalVerificationFailed(
                        f"divided trace not integral at layer {i}")
                row.append((tr // power) % p)
            rows.append(row)
        kernel = Matrix(field, rows, len(basis)).nullspace()
        basis = [[field.normalize(sum(co * b[t] for co, b in zip(coords, basis)))
                  for t in range(n)] for coords in kernel]
        if not basis:
            return []
        i += 1
        power *= p
    return basis


def _trace_of_power(mat, k):
    """Trace of an integer matrix power (exact, big integers)."""
    n = len(mat)
    if k == 1:
        return sum(mat[i][i] for i in range(n))
    result = None
    base = mat
    e = k
    while e:
        if e & 1:
            result = base if result is None else _int_matmul(result, base)
        e >>= 1
        if e:
            base = _int_matmul(base, base)
    return sum(result[i][i] for i in range(n))


def _int_matmul(a, b):
    n = len(a)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(n):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(n):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def group_algebra_radical(grp: FiniteGroup, field: ExactField):
    """rad(kG) basis (vectors of length |G|); zero when |G| is invertible."""
    n = grp.order
    if field.p == 0 or n % field.p != 0:
        return []
    products = [[_unit_vec(grp.mul(a, b), n) for b in range(n)] for a in range(n)]
    return algebra_radical_general(products, n, field)


def _unit_vec(i, n):
    v = [0] * n
    v[i] = 1
    return v


def group_radicals(cat: EICategory, field: ExactField):
    """Per-object rad(k·End(c)) bases, cached on the category."""
    key = ("group_radicals", field.p)
    if key not in cat._cache:
        rads = []
        for c in range(cat.n_objects):
            grp, _ = cat.endo_group(c)
            rads.append(group_algebra_radical(grp, field))
        cat._cache[key] = rads
    return cat._cache[key]


@dataclass
class RadicalReport:
    dim: int
    noninvertible_ids: tuple
    endo_radical_dims: tuple
    nilpotency_index: int | None
    quotient_radical_dim: int | None

    @property
    def verified(self):
        return ((self.nilpotency_index is None or self.nilpotency_index >= 1)
                and (self.quotient_radical_dim in (None, 0)))


def radical(cat: EICategory, k: CoefficientField, verify=True) -> RadicalReport:
    """The radical of the category algebra: non-invertible morphisms plus the
    radicals of the endomorphism group algebras.

    With verify=True, checks a posteriori that the ideal is nilpotent and
    that the quotient has zero radical under the general algorithm.
    """
    field = exact_field(k)
    rads = group_radicals(cat, field)
    noninv = tuple(f for f in cat.morphisms() if not cat.is_invertible(f))
    j_dim = len(noninv) + sum(len(r) for r in rads)
    nil_index = None
    quot_rad = None
    if verify:
        nil_index = _check_nilpotent(cat, field, noninv, rads)
        quot_rad = _check_quotient_semisimple(cat, field, rads)
        if quot_rad != 0:
            raise RadicalVerificationFailed("quotient algebra has nonzero radical")
    return RadicalReport(j_dim, noninv, tuple(len(r) for r in rads),
                         nil_index, quot_rad)


def _check_nilpotent(cat, field, noninv, rads):
    """Power the radical ideal's span until it hits zero; returns the index."""
    m = cat.n_morphisms
    gens = [{f: 1} for f in noninv]
    for c in range(cat.n_objects):
        _, mids = cat.endo_group(c)
        for rvec in rads[c]:
            gens.append({mids[a]: co for a, co in enumerate(rvec) if co})

    def mult(u, v):
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                t = cat.compose_table.get((a, b))
                if t is not None:
                    out[t] = field.normalize(out.get(t, 0) + ca * cb)
        return {t: c for t, c in out.items() if c != 0}

    current = gens
    for step in range(1, m + 2):
        # echelonise the next power's span, with dedup on sparse supports
        products = []
        seen = set()
        for u in gens:
            for v in current:
                w = mult(u, v)
                keyw = tuple(sorted((t, str(c)) for t, c in w.items()))
                if w and keyw not in seen:
                    seen.add(keyw)
                    products.append(w)
        if not products:
            return step
        dense = [[w.get(t, 0) for t in range(m)] for w in products]
        red, pivots = Matrix(field, dense, m).rref()
        current = [{t: red.rows[i][t] for t in range(m) if red.rows[i][t] != 0}
                   for i in range(len(pivots))]
    raise RadicalVerificationFailed("radical ideal is not nilpotent")


def _check_quotient_semisimple(cat, field, rads):
    """Run the general radical algorithm on A/J; expected dimension 0."""
    blocks = []   # (group, quotient projection, lift columns)
    offsets = []
    total = 0
    for c in range(cat.n_objects):
        grp, mids = cat.endo_group(c)
        proj, free_cols = _quotient_projection(field, rads[c], grp.order)
        blocks.append((grp, proj, free_cols))
        offsets.append(total)
        total += len(free_cols)
    products = [[None] * total for _ in range(total)]
    for ci, (grp, proj, free_cols) in enumerate(blocks):
        off = offsets[ci]
        n = grp.order
        for ia, a in enumerate(free_cols):
            for ib, b in enumerate(free_cols):
                prod = grp.mul(a, b)
                unit = _unit_vec(prod, n)
                coords = proj.apply(unit)
                vec = [0] * total
                for t, coeff in enumerate(coords):
                    vec[off + t] = int(coeff) % field.p if field.p else coeff
                products[off + ia][off + ib] = vec
    zero = [0] * total
    for i in range(total):
        for j in range(total):
            if products[i][j] is None:
                products[i][j] = list(zero)
    # integer lifts for the general algorithm
    lifted = [[[_lift(field, x) for x in vec] for vec in row] for row in products]
    return len(algebra_radical_general(lifted, total, field))


def _lift(field, x):
    if field.p:
        return int(x) % field.p
    fx = Fraction(x)
    if fx.denominator != 1:
        raise RadicalVerificationFailed("non-integral quotient structure constants")
    return int(fx)


# ---------------------------------------------------------------------------
# global dimension and hereditarity


def oracle_gldim(cat: EICategory, k: CoefficientField, bound: int,
                 collect_kernels=None) -> GldimResult:
    field = exact_field(k)
    return gldim_upto(cat, field, bound, group_radicals(cat, field),
                      collect_kernels=collect_kernels)


def is_hereditary_oracle(cat: EICategory, k: CoefficientField) -> bool:
    """Ground truth: global dimension of the category algebra at most 1."""
    return oracle_gldim(cat, k, 1).value is not None


def oracle_ext_dim(cat: EICategory, k: CoefficientField, m, n, i) -> int:
    field = exact_field(k)
    return ext_dim(cat, field, m, n, i, group_radicals(cat, field))


# ---------------------------------------------------------------------------
# differential-forms sequence (degree one)


@dataclass
class OmegaReport:
    dim_algebra: int
    dim_tensor_square: int
    dim_omega: int
    kappa_injective: bool
    multiplication_surjective: bool
    composite_zero: bool
    exact: bool
    unfactorisable_tensor_dim: int | None   # set when unique factorisation holds

    @property
    def ok(self):
        checks = [self.kappa_injective, self.multiplication_surjective,
                  self.composite_zero, self.exact,
                  self.dim_omega == self.dim_tensor_square - self.dim_algebra]
        if self.unfactorisable_tensor_dim is not None:
            checks.append(self.unfactorisable_tensor_dim == self.dim_omega)
        return all(checks)


def omega_verify(cat: EICategory, k: CoefficientField) -> OmegaReport:
    """Verify the short exact sequence 0 -> Omega -> A (x)_R A -> A -> 0,
    with R the sum of the endomorphism group algebras.

    The tensor square has a combinatorial basis: orbits of pairs
    (beta, alpha) under the middle endomorphism group.  kappa sends a class
    [beta, alpha] (alpha non-invertible) to [beta, alpha] - [beta∘alpha, id],
    which is injective by inspection of the block structure; exactness then
    reduces to orbit counting plus the entrywise identity m∘kappa = 0.
    """
    # orbit basis of A (x)_R A
    tensor_basis = {}
    for c in range(cat.n_objects):
        for t in range(cat.n_objects):
            if not cat.hom_set(c, t):
                continue
            grp, mids = cat.endo_group(t)
            for d in range(cat.n_objects):
                homtd = cat.hom_set(t, d)
                if not homtd:
                    continue
                seen = set()
                for beta in homtd:
                    for alpha in cat.hom_set(c, t):
                        if (beta, alpha) in seen:
                            continue
                        orbit = set()
                        frontier = [(beta, alpha)]
                        while frontier:
                            b2, a2 = frontier.pop()
                            if (b2, a2) in orbit:
                                continue
                            orbit.add((b2, a2))
                            for g in mids:
                                ginv = cat.inverse(g)
                                nxt = (cat.compose(b2, ginv), cat.compose(g, a2))
                                if nxt not in orbit:
                                    frontier.append(nxt)
                        seen.update(orbit)
                        rep = min(orbit)
                        tensor_basis[rep] = orbit
    dim_aa = len(tensor_basis)
    rep_of = {}
    for rep, orbit in tensor_basis.items():
        for member in orbit:
            rep_of[member] = rep
    dim_a = cat.n_morphisms
    # omega basis: classes whose second slot is non-invertible
    omega_basis = [rep for rep in tensor_basis if not cat.is_invertible(rep[1])]
    dim_omega = len(omega_basis)
    # the invertible-slot classes biject with morphisms via composition
    id_sector = [rep for rep in tensor_basis if cat.is_invertible(rep[1])]
    surjective = len(id_sector) == dim_a and len(
        {cat.compose(b, a) for (b, a) in id_sector}) == dim_a
    # kappa: [beta, alpha] -> e[beta,alpha] - e[beta∘alpha, id]; m∘kappa = 0
    composite_zero = True
    kappa_injective = True
    seen_heads = set()
    for (beta, alpha) in omega_basis:
        comp = cat.compose(beta, alpha)
        tail = rep_of[(comp, cat.identity[cat.src[alpha]])]
        if cat.compose(*tail) != comp:
            composite_zero = False
        if (beta, alpha) in seen_heads or cat.is_invertible(alpha):
            kappa_injective = False
        seen_heads.add((beta, alpha))
    exact = dim_omega == dim_aa - dim_a
    unf_dim = None
    if has_unique_factorisation(cat):
        unf_dim = _unfactorisable_tensor_dim(cat)
    report = OmegaReport(dim_a, dim_aa, dim_omega, kappa_injective,
                         surjective, composite_zero, exact, unf_dim)
    if not report.ok:
        raise ExactnessFailure(f"differential-forms sequence failed: {report}")
    return report


def _unfactorisable_tensor_dim(cat):
    """dim of C (x)_R U (x)_R C by orbit counting over triples."""
    unf = unfactorisables(cat)
    total = 0
    for (c, d), umids in sorted(unf.items()):
        gd, gd_mids = cat.endo_group(d)
        gc, gc_mids = cat.endo_group(c)
        for a in range(cat.n_objects):
            homac = cat.hom_set(a, c)
            if not homac:
                continue
            for b in range(cat.n_objects):
                homdb = cat.hom_set(d, b)
                if not homdb:
                    continue
                seen = set()
                for beta in homdb:
                    for u in umids:
                        for alpha in homac:
                            if (beta, u, alpha) in seen:
                                continue
                            orbit = set()
                            frontier = [(beta, u, alpha)]
                            while frontier:
                                trip = frontier.pop()
                                if trip in orbit:
                                    continue
                                orbit.add(trip)
                                b2, u2, a2 = trip
                                for g in gd_mids:
                                    nxt = (cat.compose(b2, g),
                                           cat.compose(cat.inverse(g), u2), a2)
                                    if nxt not in orbit:
                                        frontier.append(nxt)
                                for h in gc_mids:
                                    nxt = (b2, cat.compose(u2, h),
                                           cat.compose(cat.inverse(h), a2))
                                    if nxt not in orbit:
                                        frontier.append(nxt)
                            seen.update(orbit)
                            total += 1
    return total


# ---------------------------------------------------------------------------
# induced-module structure of projectives


@dataclass
class InducedCheck:
    label: str
    expected: tuple
    got: tuple

    @property
    def ok(self):
        return self.expected == self.got


@dataclass
class InducedReport:
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def mismatches(self):
        return [c for c in self.checks if not c.ok]


def induced_projective_check(cat: EICategory, k: CoefficientField) -> InducedReport:
    """Dimension-vector verification that projectives are induced modules.

    Requires every endomorphism group algebra to be semisimple (which the
    hereditarity criteria guarantee).  Checks, per object c:
      * tensoring the regular k·End(c)-module up reproduces A·e_c,
      * the same holds summand-by-summand for a direct decomposition of
        the regular module,
    and for the first syzygy kernel K of A/J that the modules induced from
    the layer quotients S_x(K) reproduce K's dimension vector.
    """
    field = exact_field(k)
    rads = group_radicals(cat, field)
    if any(rads[c] for c in range(cat.n_objects)):
        raise ValueError("induced-module check requires semisimple endomorphism algebras")
    checks = []
    for c in range(cat.n_objects):
        grp, _ = cat.endo_group(c)
        regular = _group_regular_module(grp, field)
        induced = tuple(_induced_dim(cat, field, c, regular, d)
                        for d in range(cat.n_objects))
        free_dims = tuple(len(cat.hom_set(c, d)) for d in range(cat.n_objects))
        checks.append(InducedCheck(f"regular-at-{c}", free_dims, induced))
        summands = split_group_module(grp, field, regular)
        total = [0] * cat.n_objects
        for s in summands:
            for d in range(cat.n_objects):
                total[d] += _induced_dim(cat, field, c, s, d)
        checks.append(InducedCheck(f"summands-at-{c}", free_dims, tuple(total)))
    kernels = []
    res = gldim_upto(cat, field, 1, rads, collect_kernels=kernels)
    if res.value is not None and res.value <= 1 and kernels:
        kern = kernels[0].kernel
        expected = tuple(kern.dims)
        got = [0] * cat.n_objects
        for x in range(cat.n_objects):
            layer = _layer_quotient(cat, field, kern, x)
            if layer is None:
                continue
            for d in range(cat.n_objects):
                got[d] += _induced_dim(cat, field, x, layer, d)
        checks.append(InducedCheck("syzygy-kernel", expected, tuple(got)))
    return InducedReport(checks)


@dataclass
class GroupModule:
    """A module over a single finite group: action matrix per element."""

    grp: FiniteGroup
    field: ExactField
    dim: int
    mats: dict   # element -> Matrix

    def act(self, g):
        if g == self.grp.identity:
            return Matrix.identity(self.field, self.dim)
        return self.mats[g]


def _group_regular_module(grp, field):
    mats = {}
    n = grp.order
    for a in grp.elements():
        if a == grp.identity:
            continue
        mat = [[0] * n for _ in range(n)]
        for b in range(n):
            mat[grp.mul(a, b)][b] = 1
        mats[a] = Matrix(field, mat, n)
    return GroupModule(grp, field, n, mats)


def _induced_dim(cat, field, c, gmod: GroupModule, d) -> int:
    """dim of (k·hom(c,d)) (x)_{k·End(c)} M via coinvariants per orbit."""
    grp, mids = cat.endo_group(c)
    hom = cat.hom_set(c, d)
    if not hom or gmod.dim == 0:
        return 0
    local_of = {m: i for i, m in enumerate(mids)}
    seen = set()
    total = 0
    for alpha in hom:
        if alpha in seen:
            continue
        orbit = {alpha}
        frontier = [alpha]
        while frontier:
            a2 = frontier.pop()
            for g in mids:
                nxt = cat.compose(a2, g)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        seen.update(orbit)
        stab = [local_of[g] for g in mids if cat.compose(alpha, g) == alpha]
        rows = []
        for s in stab:
            mat = gmod.act(s)
            for i in range(gmod.dim):
                row = [mat.rows[i][j] - (1 if i == j else 0) for j in range(gmod.dim)]
                rows.append(row)
        rank = Matrix(field, rows, gmod.dim).rank() if rows else 0
        total += gmod.dim - rank
    return total


def _layer_quotient(cat, field, module: ModulePresentation, x):
    """S_x(M) = M(x) / (images from all other objects), as a group module."""
    grp, mids = cat.endo_group(x)
    n = module.dims[x]
    if n == 0:
        return None
    vecs = []
    for c in range(cat.n_objects):
        if c == x:
            continue
        for f in cat.hom_set(c, x):
            mat = module.act(f)
            for j in range(mat.ncols):
                vecs.append(mat.column(j))
    span = echelon_span(field, vecs, n)
    proj, free_cols = _quotient_projection(field, span, n)
    qdim = len(free_cols)
    if qdim == 0:
        return None
    lift = column_matrix(field, [[1 if i == j else 0 for i in range(n)]
                                 for j in free_cols], n)
    mats = {}
    for a_local, mid in enumerate(mids):
        if cat.is_identity(mid):
            continue
        mats[a_local] = proj.mul(module.act(mid)).mul(lift)
    return GroupModule(grp, field, qdim, mats)


# ---------------------------------------------------------------------------
# splitting group modules (best effort, exact)


def split_group_module(grp, field, gmod: GroupModule):
    """Decompose a module over a semisimple group algebra into direct
    summands by Fitting decompositions along endomorphisms.

    Over prime fields minimal polynomials are fully factored (brute force
    over small-degree polynomials); over the rationals only rational roots
    are extracted, so summands that stay glued over Q are returned whole.
    The dimension bookkeeping downstream is valid for any decomposition.
    """
    if gmod.dim == 0:
        return []
    endos = _commutant_basis(grp, field, gmod)
    if len(endos) <= 1:
        return [gmod]
    for e in _endo_candidates(field, endos):
        factors = _minpoly_factors(field, e)
        if len(factors) <= 1:
            continue
        pieces = []
        for fac in factors:
            op = _poly_eval(field, fac, e)
            op_pow = op
            for _ in range(gmod.dim):
                op_pow = op_pow.mul(op)
            basis = op_pow.nullspace()
            if basis:
                pieces.append(_restrict_module(grp, field, gmod, basis))
        if len(pieces) > 1:
            out = []
            for piece in pieces:
                out.extend(split_group_module(grp, field, piece))
            return out
    return [gmod]


def _commutant_basis(grp, field, gmod):
    n = gmod.dim
    gens = grp.generators()
    if not gens:
        gens = ()
    rows = []
    for g in gens:
        mat = gmod.act(g)
        # X*act - act*X = 0, unknown X flattened row-major
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for t in range(n):
                    row[i * n + t] += mat.rows[t][j]
                    row[t * n + j] -= mat.rows[i][t]
                rows.append(row)
    if not rows:
        basis = []
        for i in range(n * n):
            v = [0] * (n * n)
            v[i] = 1
            basis.append(v)
    else:
        basis = Matrix(field, rows, n * n).nullspace()
    return [Matrix(field, [v[i * n:(i + 1) * n] for i in range(n)], n) for v in basis]


def _endo_candidates(field, endos):
    for e in endos:
        yield e
    for i in range(len(endos)):
        for j in range(i + 1, len(endos)):
            yield Matrix(field, [[a + b for a, b in zip(r1, r2)]
                                 for r1, r2 in zip(endos[i].rows, endos[j].rows)],
                         endos[i].ncols)


def _minpoly(field, mat):
    """Minimal polynomial coefficients (low to high), monic.

    Flattened powers of the matrix are stacked until the first linear
    dependence; at that point the top coefficient is necessarily nonzero.
    """
    n = mat.nrows
    powers = [Matrix.identity(field, n)]
    while True:
        rows = [sum(p.rows, []) for p in powers]
        null = Matrix(field, [list(c) for c in zip(*rows)], len(rows)).nullspace()
        if null:
            coeffs = list(null[0])
            inv = _inv_scalar(field, coeffs[-1])
            return [field.normalize(Fraction(c) * Fraction(inv)) if field.p == 0
                    else (int(c) * inv) % field.p for c in coeffs]
        powers.append(powers[-1].mul(mat))


def _inv_scalar(field, x):
    if field.p:
        return pow(int(x), field.p - 2, field.p)
    return Fraction(1) / Fraction(x)


def _minpoly_factors(field, mat):
    """Distinct irreducible factors of the minimal polynomial (see caveats
    in split_group_module)."""
    coeffs = _minpoly(field, mat)
    if field.p:
        return _factor_poly_mod_p(coeffs, field.p)
    return _rational_root_factors(coeffs)


def _rational_root_factors(coeffs):
    """Distinct (x - r) factors over Q plus one rootless leftover factor.

    Each root is divided out with full multiplicity so the returned factors
    are pairwise coprime, as the Fitting decomposition requires.
    """
    from math import gcd
    fracs = [Fraction(c) for c in coeffs]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    a0, an = ints[0], ints[-1]
    cand = {Fraction(0)} if a0 == 0 else set()
    for pnum in _divisors(abs(a0) or 1):
        for qden in _divisors(abs(an)):
            cand.add(Fraction(pnum, qden))
            cand.add(Fraction(-pnum, qden))
    roots = sorted(r for r in cand
                   if sum(Fraction(c) * r**i for i, c in enumerate(ints)) == 0)
    factors = [[-r, Fraction(1)] for r in roots]
    rem = [Fraction(c) for c in coeffs]
    for fac in factors:
        while True:
            q, r = _poly_divmod_q(rem, fac)
            if r:
                break
            rem = q
    if len(rem) > 1:
        factors.append(rem)
    return factors


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend([d, n // d])
        d += 1
    return sorted(set(out))


def _poly_divmod_q(num, den):
    """Polynomial division over Q; remainder comes back without zero tail."""
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while True:
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        coeff = num[-1] / den[-1]
        shift = len(num) - len(den)
        q[shift] = coeff
        for i, dc in enumerate(den):
            num[shift + i] -= coeff * dc
        num.pop()
    return q, num


def _factor_poly_mod_p(coeffs, p):
    """Distinct irreducible factors by trial division over F_p (small degrees)."""
    poly = [int(c) % p for c in coeffs]
    while poly and poly[-1] == 0:
        poly.pop()
    factors = []
    d = 1
    while len(poly) > 1 and d <= (len(poly) - 1) // 2:
        for cand in _monic_polys(p, d):
            if (len(poly) - 1) < d:
                break
            while len(poly) - 1 >= d:
                q, r = _poly_divmod_p(poly, cand, p)
                if any(r):
                    break
                if cand not in factors:
                    factors.append(cand)
                poly = q
        d += 1
    if len(poly) > 1:
        factors.append(poly)
    return factors


def _monic_polys(p, d):
    """All monic polynomials of degree d over F_p (low-to-high coefficients)."""
    from itertools import product as iproduct
    for tail in iproduct(range(p), repeat=d):
        yield list(tail) + [1]


def _poly_divmod_p(num, den, p):
    num = [x % p for x in num]
    dd = len(den) - 1
    inv = pow(den[-1], p - 2, p) if den[-1] != 1 else 1
    q = [0] * max(len(num) - dd, 0)
    while len(num) - 1 >= dd and any(num):
        while num and num[-1] % p == 0:
            num.pop()
        if len(num) - 1 < dd:
            break
        coeff = (num[-1] * inv) % p
        shift = len(num) - 1 - dd
        q[shift] = coeff
        for i, dc in enumerate(den):
            num[shift + i] = (num[shift + i] - coeff * dc) % p
        num.pop()
    r = num
    return q, r


def _poly_eval(field, coeffs, mat):
    n = mat.nrows
    out = Matrix.zero(field, n, n)
    power = Matrix.identity(field, n)
    for i, c in enumerate(coeffs):
        if c != 0:
            scaled = Matrix(field, [[x * c for x in row] for row in power.rows], n)
            out = Matrix(field, [[a + b for a, b in zip(r1, r2)]
                                 for r1, r2 in zip(out.rows, scaled.rows)], n)
        if i + 1 < len(coeffs):
            power = power.mul(mat)
    return out


def _restrict_module(grp, field, gmod, basis_vectors):
    emb = column_matrix(field, basis_vectors, gmod.dim)
    dim = len(basis_vectors)
    mats = {}
    for a in grp.elements():
        if a == grp.identity:
            continue
        sol = emb.solve(gmod.act(a).mul(emb))
        assert sol is not None, "summand not action-stable"
        mats[a] = sol
    return GroupModule(grp, field, dim, mats)


# ---------------------------------------------------------------------------
# projectivity of permutation modules over a group ring


@dataclass
class GroupSetReport:
    orbit_stabiliser_orders: tuple
    stabilisers_invertible: bool
    projective_by_oracle: bool

    @property
    def ok(self):
        return self.stabilisers_invertible == self.projective_by_oracle


def group_set_projectivity_check(grp: FiniteGroup, action, k: CoefficientField) -> GroupSetReport:
    """kX projective over kG iff all point stabilisers have invertible order.

    `action` is a table: action[g][x] = g·x.  The projectivity side is
    decided by the syzygy oracle on the one-object category of G.
    """
    from .category import one_object_category
    npts = len(action[0]) if action else 0
    for g in grp.elements():
        if sorted(action[g]) != list(range(npts)):
            raise ValueError(f"action of element {g} is not a permutation")
        for h in grp.elements():
            gh = grp.mul(g, h)
            for x in range(npts):
                if action[g][action[h][x]] != action[gh][x]:
                    raise ValueError("not a group action")
    # orbit stabiliser orders
    seen = set()
    stab_orders = []
    for x in range(npts):
        if x in seen:
            continue
        orbit = {action[g][x] for g in grp.elements()}
        seen.update(orbit)
        stab_orders.append(sum(1 for g in grp.elements() if action[g][x] == x))
    invertible = all(k.invertible(s) for s in stab_orders)

    cat = one_object_category(grp)
    field = exact_field(k)
    maps = {}
    for g in grp.elements():
        if g == grp.identity:
            continue
        mat = [[0] * npts for _ in range(npts)]
        for x in range(npts):
            mat[action[g][x]][x] = 1
        maps[g] = Matrix(field, mat, npts)
    module = ModulePresentation(cat, field, (npts,), maps)
    rads = group_radicals(cat, field)
    cover = free_cover_and_kernel(cat, field, module, rads)
    top, _ = top_module(cat, field, rads)
    projective = ext1_dim_vs_top(cat, field, cover, top) == 0
    return GroupSetReport(tuple(sorted(stab_orders)), invertible, projective)
