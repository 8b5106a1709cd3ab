"""Finite groups given by explicit Cayley tables.

Elements are the indices 0..n-1.  All derived sets (subgroups, cosets,
transporters) are kept as sorted tuples so that every computation is
deterministic.  Groups at this scale (order <= ~48) are validated in
O(n^3), which keeps the rest of the library honest: nothing downstream
needs permutation-group algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product


class GroupTableError(ValueError):
    """Raised when a multiplication table is not a group table."""


class NotAssociative(GroupTableError):
    def __init__(self, a, b, c):
        super().__init__(f"not associative at ({a},{b},{c})")
        self.witness = (a, b, c)


class NoIdentity(GroupTableError):
    def __init__(self):
        super().__init__("no two-sided identity element")


class NoInverse(GroupTableError):
    def __init__(self, a):
        super().__init__(f"element {a} has no two-sided inverse")
        self.witness = a


class FiniteGroup:
    """Immutable group on indices 0..n-1 with a full multiplication table."""

    __slots__ = ("table", "order", "identity", "inverse", "labels", "name", "_cache")

    def __init__(self, table, labels=None, name="G", _validated=False):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        if not _validated:
            _validate_table(self.table)
        self.identity = _find_identity(self.table)
        self.inverse = _find_inverses(self.table, self.identity)
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(self.order))
        self.name = name
        self._cache = {}

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inverse[g])

    def elements(self):
        return range(self.order)

    def element_order(self, a: int) -> int:
        n = 1
        x = a
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse[a], -k)
        x = self.identity
        for _ in range(k):
            x = self.mul(x, a)
        return x

    def label(self, a: int) -> str:
        return self.labels[a]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def generators(self):
        """A small generating set, found greedily (deterministic)."""
        gens = []
        span = {self.identity}
        for a in range(self.order):
            if a not in span:
                gens.append(a)
                span = _closure(self, span | {a})
                if len(span) == self.order:
                    break
        return tuple(gens)


def _validate_table(table):
    n = len(table)
    if n == 0:
        raise GroupTableError("empty table")
    for row in table:
        if len(row) != n:
            raise GroupTableError("table is not square")
        for x in row:
            if not 0 <= x < n:
                raise GroupTableError(f"entry {x} out of range 0..{n - 1}")
    e = _find_identity(table)
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            raise NoInverse(a)
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise NotAssociative(a, b, c)


def _find_identity(table):
    n = len(table)
    for e in range(n):
        if all(table[e][a] == a and table[a][e] == a for a in range(n)):
            return e
    raise NoIdentity()


def _find_inverses(table, e):
    n = len(table)
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == e and table[b][a] == e:
                inv[a] = b
                break
        if inv[a] is None:
            raise NoInverse(a)
    return tuple(inv)


def make_group(table, labels=None, name="G") -> FiniteGroup:
    """Validate a multiplication table and build the group."""
    return FiniteGroup(table, labels=labels, name=name)


# ---------------------------------------------------------------------------
# presets


def cyclic_group(n: int) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["1"] + [f"g{'^%d' % i if i > 1 else ''}" for i in range(1, n)]
    return FiniteGroup(table, labels=labels, name=f"C{n}", _validated=True)


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given (even) order; elements s^i t^e."""
    if order % 2 or order < 2:
        raise ValueError("dihedral order must be even and >= 2")
    n = order // 2

    def idx(i, e):
        return e * n + i

    table = [[0] * order for _ in range(order)]
    labels = [""] * order
    for i, e in product(range(n), range(2)):
        labels[idx(i, e)] = _dihedral_label(i, e)
        for j, f in product(range(n), range(2)):
            # (s^i t^e)(s^j t^f) = s^(i + j or i - j) t^(e xor f)
            k = (i + j) % n if e == 0 else (i - j) % n
            table[idx(i, e)][idx(j, f)] = idx(k, e ^ f)
    return FiniteGroup(table, labels=labels, name=f"D{order}", _validated=True)


def _dihedral_label(i, e):
    s = {0: "", 1: "s", 2: "s^2", 3: "s^3"}.get(i, f"s^{i}")
    t = "t" if e else ""
    return (s + t) or "1"


def symmetric_group_3() -> FiniteGroup:
    g = dihedral_group(6)
    return FiniteGroup(g.table, labels=g.labels, name="S3", _validated=True)


def klein_four_group() -> FiniteGroup:
    table = [
        [0, 1, 2, 3],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
        [3, 2, 1, 0],
    ]
    return FiniteGroup(table, labels=["1", "a", "b", "c"], name="V4", _validated=True)


def quaternion_group() -> FiniteGroup:
    """Q8 = {1, -1, i, -i, j, -j, k, -k}."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    mul = {}
    sign = lambda s, x: x if s == 1 else _q_neg(x)
    base = {
        ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
        ("i", "1"): "i", ("j", "1"): "j", ("k", "1"): "k",
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }
    for (a, b), c in base.items():
        mul[(a, b)] = c
    full = {}
    for a, b in product(names, names):
        sa, ua = (-1, a[1:]) if a.startswith("-") else (1, a)
        sb, ub = (-1, b[1:]) if b.startswith("-") else (1, b)
        c = mul[(ua, ub)]
        sc, uc = (-1, c[1:]) if c.startswith("-") else (1, c)
        s = sa * sb * sc
        full[(a, b)] = uc if s == 1 else f"-{uc}"
    index = {nm: i for i, nm in enumerate(names)}
    table = [[index[full[(a, b)]] for b in names] for a in names]
    return FiniteGroup(table, labels=names, name="Q8", _validated=True)


def _q_neg(x):
    return x[1:] if x.startswith("-") else f"-{x}"


def alternating_group_4() -> FiniteGroup:
    perms = []
    for p in product(range(4), repeat=4):
        if sorted(p) != [0, 1, 2, 3]:
            continue
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        if inversions % 2 == 0:
            perms.append(p)
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(4))] for q in perms] for p in perms]
    labels = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(table, labels=labels, name="A4", _validated=True)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product; element (a, b) has index a*|H| + b."""
    nh = h.order
    n = g.order * nh
    table = [[0] * n for _ in range(n)]
    labels = [""] * n
    for a, b in product(g.elements(), h.elements()):
        labels[a * nh + b] = f"({g.label(a)},{h.label(b)})"
        for c, d in product(g.elements(), h.elements()):
            table[a * nh + b][c * nh + d] = g.mul(a, c) * nh + h.mul(b, d)
    return FiniteGroup(table, labels=labels, name=f"{g.name}x{h.name}", _validated=True)


def opposite_group(g: FiniteGroup) -> FiniteGroup:
    table = [[g.table[b][a] for b in g.elements()] for a in g.elements()]
    return FiniteGroup(table, labels=g.labels, name=f"{g.name}^op", _validated=True)


_PRESET_BUILDERS = {
    "V4": klein_four_group,
    "S3": symmetric_group_3,
    "Q8": quaternion_group,
    "A4": alternating_group_4,
}


def preset_group(name: str) -> FiniteGroup:
    """Named groups: C{n}, D{2n}, V4, S3, Q8, A4, and x-products thereof."""
    name = name.strip()
    if "x" in name:
        parts = name.split("x")
        g = preset_group(parts[0])
        for part in parts[1:]:
            g = direct_product(g, preset_group(part))
        return g
    if name in _PRESET_BUILDERS:
        return _PRESET_BUILDERS[name]()
    if name.startswith("C") and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    if name.startswith("D") and name[1:].isdigit():
        return dihedral_group(int(name[1:]))
    raise ValueError(f"unknown group preset {name!r}")


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `parent`, stored as a sorted tuple of element indices."""

    parent: FiniteGroup
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))
        g = self.parent
        ms = set(self.members)
        if g.identity not in ms:
            raise ValueError("subgroup must contain the identity")
        for a in self.members:
            if g.inverse[a] not in ms:
                raise ValueError(f"subgroup not closed under inverse at {a}")
            for b in self.members:
                if g.mul(a, b) not in ms:
                    raise ValueError(f"subgroup not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, a: int) -> bool:
        return a in set(self.members)

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.members) <= set(other.members)

    def is_trivial(self) -> bool:
        return self.order == 1

    def conjugate(self, g: int) -> "Subgroup":
        par = self.parent
        return Subgroup(par, tuple(par.conj(g, x) for x in self.members))

    def as_group(self):
        """The subgroup as a standalone FiniteGroup plus the index embedding."""
        mem = self.members
        pos = {a: i for i, a in enumerate(mem)}
        table = [[pos[self.parent.mul(a, b)] for b in mem] for a in mem]
        labels = [self.parent.label(a) for a in mem]
        grp = FiniteGroup(table, labels=labels, name=f"{self.parent.name}-sub", _validated=True)
        return grp, mem

    def __repr__(self):
        return f"Subgroup({self.parent.name}, {self.members})"


def _closure(g: FiniteGroup, seed):
    members = set(seed) | {g.identity}
    frontier = list(members)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for x in (g.mul(a, b), g.mul(b, a)):
                    if x not in members:
                        members.add(x)
                        new.append(x)
            inv = g.inverse[a]
            if inv not in members:
                members.add(inv)
                new.append(inv)
        frontier = new
    return members


def subgroup_closure(g: FiniteGroup, gens) -> Subgroup:
    """Smallest subgroup of g containing the given elements."""
    for a in gens:
        if not 0 <= a < g.order:
            raise ValueError(f"generator {a} not an element of {g.name}")
    return Subgroup(g, tuple(sorted(_closure(g, gens))))


def normaliser(g: FiniteGroup, h: Subgroup) -> Subgroup:
    """N_G(H) = {x : xHx^-1 = H}."""
    hs = set(h.members)
    members = [x for x in g.elements() if {g.conj(x, a) for a in hs} == hs]
    return Subgroup(g, tuple(members))


def centraliser(g: FiniteGroup, h: Subgroup) -> Subgroup:
    """C_G(H) = {x : xa = ax for all a in H}."""
    members = [x for x in g.elements()
               if all(g.mul(x, a) == g.mul(a, x) for a in h.members)]
    return Subgroup(g, tuple(members))


def transporter_set(g: FiniteGroup, h: Subgroup, k: Subgroup) -> tuple:
    """Trans_G(H, K) = {x : xHx^-1 <= K}, as a sorted element tuple."""
    ks = set(k.members)
    return tuple(x for x in g.elements()
                 if all(g.conj(x, a) in ks for a in h.members))


@dataclass(frozen=True)
class CyclicPrimePowerReport:
    is_cyclic_prime_power: bool
    prime: int = 0
    exponent: int = 0
    trivial: bool = False
    reason: str = ""


def is_cyclic_prime_power(h: Subgroup) -> CyclicPrimePowerReport:
    """Whether H is cyclic of prime power order (trivial H flagged separately)."""
    n = h.order
    if n == 1:
        return CyclicPrimePowerReport(True, prime=1, exponent=0, trivial=True)
    p = _least_prime_factor(n)
    m, e = n, 0
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        return CyclicPrimePowerReport(False, reason=f"order {n} is not a prime power")
    g = h.parent
    if not any(g.element_order(a) == n for a in h.members):
        return CyclicPrimePowerReport(False, reason=f"no element of order {n}")
    return CyclicPrimePowerReport(True, prime=p, exponent=e)


def _least_prime_factor(n):
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


@dataclass(frozen=True)
class CoefficientField:
    """A field descriptor: characteristic 0 (rationals) or a prime p."""

    characteristic: int = 0

    def __post_init__(self):
        c = self.characteristic
        if c != 0 and (c < 2 or any(c % d == 0 for d in range(2, int(c**0.5) + 1))):
            raise ValueError(f"characteristic must be 0 or prime, got {c}")

    def invertible(self, n: int) -> bool:
        """Whether the integer n is invertible in the field."""
        if self.characteristic == 0:
            return n != 0
        return n % self.characteristic != 0


def is_kx_finite(h: Subgroup, k: CoefficientField) -> bool:
    """Finite with order invertible in k.

    Every group handled here is finite, so the 'locally' variant of this
    predicate collapses to a single divisibility test.
    """
    return k.invertible(h.order)


# ---------------------------------------------------------------------------
# subgroup lattices and families


def all_subgroups(g: FiniteGroup) -> list:
    """All subgroups, sorted by (order, members)."""
    key = "all_subgroups"
    if key in g._cache:
        return g._cache[key]
    seen = {(g.identity,)}
    frontier = [(g.identity,)]
    while frontier:
        new = []
        for mem in frontier:
            ms = set(mem)
            for a in g.elements():
                if a in ms:
                    continue
                ext = tuple(sorted(_closure(g, ms | {a})))
                if ext not in seen:
                    seen.add(ext)
                    new.append(ext)
        frontier = new
    subs = [Subgroup(g, mem) for mem in sorted(seen, key=lambda m: (len(m), m))]
    g._cache[key] = subs
    return subs


def conjugacy_class_of_subgroup(h: Subgroup) -> list:
    g = h.parent
    seen = {h.members}
    for x in g.elements():
        seen.add(h.conjugate(x).members)
    return [Subgroup(g, mem) for mem in sorted(seen, key=lambda m: (len(m), m))]


def family_closure(g: FiniteGroup, seeds) -> list:
    """Close a set of subgroups under conjugation and passage to subgroups.

    Always contains the trivial subgroup.  Result is sorted by
    (order, members), giving a canonical ordering.
    """
    members = {(g.identity,)}
    frontier = [s.members for s in seeds]
    members.update(frontier)
    while frontier:
        new = []
        for mem in frontier:
            h = Subgroup(g, mem)
            for x in g.elements():
                cm = h.conjugate(x).members
                if cm not in members:
                    members.add(cm)
                    new.append(cm)
            sub_grp, emb = h.as_group()
            for s in all_subgroups(sub_grp):
                sm = tuple(sorted(emb[i] for i in s.members))
                if sm not in members:
                    members.add(sm)
                    new.append(sm)
        frontier = new
    return [Subgroup(g, mem) for mem in sorted(members, key=lambda m: (len(m), m))]


def all_families(g: FiniteGroup) -> list:
    """Every family of subgroups of g (each given as a sorted subgroup list).

    Families correspond to down-closed sets of subgroup conjugacy classes
    containing the class of the trivial subgroup.
    """
    subs = all_subgroups(g)
    class_of = {}
    classes = []
    for h in subs:
        if h.members in class_of:
            continue
        cls = conjugacy_class_of_subgroup(h)
        idx = len(classes)
        classes.append(cls)
        for c in cls:
            class_of[c.members] = idx
    n = len(classes)
    # class i is below class j if some member of i is contained in some member of j
    below = [[any(set(a.members) <= set(b.members) for a in classes[i] for b in classes[j])
              for j in range(n)] for i in range(n)]
    families = []
    for mask in range(1, 1 << n):
        if not mask & 1:  # class 0 is the trivial subgroup
            continue
        chosen = [i for i in range(n) if mask >> i & 1]
        ok = all(not below[i][j] or (mask >> i & 1)
                 for j in chosen for i in range(n))
        if ok:
            fam = [h for j in chosen for h in classes[j]]
            fam.sort(key=lambda s: (s.order, s.members))
            families.append(fam)
    families.sort(key=lambda fam: (len(fam), [s.members for s in fam]))
    return families


@dataclass(frozen=True)
class GroupMap:
    """A homomorphism given by its element-wise images."""

    source: FiniteGroup
    target: FiniteGroup
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        if len(self.images) != self.source.order:
            raise ValueError("image list has wrong length")
        for x in self.images:
            if not 0 <= x < self.target.order:
                raise ValueError(f"image {x} out of range")
        if self.images[self.source.identity] != self.target.identity:
            raise ValueError("map does not preserve the identity")
        for a in self.source.elements():
            for b in self.source.elements():
                if self.images[self.source.mul(a, b)] != self.target.mul(self.images[a], self.images[b]):
                    raise ValueError(f"map not multiplicative at ({a},{b})")

    def __call__(self, a: int) -> int:
        return self.images[a]

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.images))))

    def preimage(self, members) -> tuple:
        ms = set(members)
        return tuple(a for a in self.source.elements() if self.images[a] in ms)
