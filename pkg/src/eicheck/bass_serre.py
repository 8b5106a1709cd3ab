"""Normalisers of finite subgroups in fundamental groups of finite graphs
of finite groups.

The subgroup F (inside a base vertex group) fixes a subtree of the tree
the fundamental group acts on.  Walking away from the base vertex, F can
be pushed across an edge after conjugating it into the edge group's image;
abstracting a walk to (current directed edge, subgroup of the edge group)
gives a finite state graph whose infinite non-backtracking walks are
exactly the rays of the fixed subtree.  The normaliser is infinite iff
that graph has a reachable cycle; a cycle unrolls into an explicit
infinite-order normalising word, a cycle-free graph yields the finite
fixed subtree, whose centre stabiliser contains the whole normaliser.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import FiniteGroup, GroupMap, Subgroup


class GraphOfGroupsError(ValueError):
    pass


class NotConnected(GraphOfGroupsError):
    pass


class NotInjective(GraphOfGroupsError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} embedding is not injective")
        self.edge = edge


class SubgroupNotInVertexGroup(GraphOfGroupsError):
    pass


@dataclass(frozen=True)
class GraphOfGroups:
    """Finite connected graph of finite groups.

    Each undirected edge record is (u, v, edge group, embedding into G_u,
    embedding into G_v).  Directed edge 2i runs u -> v, its reverse 2i+1
    runs v -> u.  Crossing a directed edge carries the origin-side image of
    the edge group to the target-side image.
    """

    vertex_groups: tuple
    edge_records: tuple

    def __post_init__(self):
        for idx, (u, v, egrp, emb_u, emb_v) in enumerate(self.edge_records):
            for emb, host in ((emb_u, u), (emb_v, v)):
                if emb.source is not egrp and emb.source != egrp:
                    raise GraphOfGroupsError(f"edge {idx}: embedding source mismatch")
                if emb.target != self.vertex_groups[host]:
                    raise GraphOfGroupsError(f"edge {idx}: embedding target mismatch")
                if not emb.is_injective():
                    raise NotInjective(idx)
        n = len(self.vertex_groups)
        if n == 0:
            raise GraphOfGroupsError("graph must have at least one vertex")
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, *_ in self.edge_records:
            parent[find(u)] = find(v)
        if len({find(x) for x in range(n)}) != 1:
            raise NotConnected("graph of groups must be connected")

    @property
    def n_directed(self):
        return 2 * len(self.edge_records)

    def origin(self, e):
        u, v, *_ = self.edge_records[e // 2]
        return u if e % 2 == 0 else v

    def target(self, e):
        u, v, *_ = self.edge_records[e // 2]
        return v if e % 2 == 0 else u

    def reverse(self, e):
        return e ^ 1

    def edge_group(self, e) -> FiniteGroup:
        return self.edge_records[e // 2][2]

    def beta(self, e) -> GroupMap:
        """Embedding of the edge group into the origin vertex group."""
        _, _, _, emb_u, emb_v = self.edge_records[e // 2]
        return emb_u if e % 2 == 0 else emb_v

    def alpha(self, e) -> GroupMap:
        """Embedding of the edge group into the target vertex group."""
        _, _, _, emb_u, emb_v = self.edge_records[e // 2]
        return emb_v if e % 2 == 0 else emb_u


def validate_gog(vertex_groups, edge_records) -> GraphOfGroups:
    return GraphOfGroups(tuple(vertex_groups), tuple(edge_records))


# ---------------------------------------------------------------------------
# reduced words


@dataclass(frozen=True)
class ReducedWord:
    """A word r_0 y_1 r_1 ... y_n r_n based at `base`: labels r_i live in the
    successive vertex groups along the edge path."""

    base: int
    edges: tuple
    labels: tuple

    def __post_init__(self):
        assert len(self.labels) == len(self.edges) + 1

    def display(self, gog: GraphOfGroups) -> str:
        parts = []
        vertex = self.base
        for i, e in enumerate(self.edges):
            parts.append(gog.vertex_groups[vertex].label(self.labels[i]))
            parts.append(f"e{e}")
            vertex = gog.target(e)
        parts.append(gog.vertex_groups[vertex].label(self.labels[-1]))
        return "".join(parts)


def reduce_word(gog: GraphOfGroups, word: ReducedWord) -> ReducedWord:
    """Cancel backtracks y·a·ybar with a in the target-side edge image."""
    edges = list(word.edges)
    labels = list(word.labels)
    changed = True
    while changed:
        changed = False
        for i in range(len(edges) - 1):
            if edges[i + 1] != gog.reverse(edges[i]):
                continue
            alpha = gog.alpha(edges[i])
            image = {alpha(x): x for x in alpha.source.elements()}
            mid = labels[i + 1]
            if mid in image:
                beta = gog.beta(edges[i])
                through = beta(image[mid])
                grp = gog.vertex_groups[gog.origin(edges[i])]
                merged = grp.mul(labels[i], grp.mul(through, labels[i + 2]))
                edges[i:i + 2] = []
                labels[i:i + 3] = [merged]
                changed = True
                break
    return ReducedWord(word.base, tuple(edges), tuple(labels))


def canonicalise_word(gog: GraphOfGroups, word: ReducedWord) -> ReducedWord:
    """Lexicographically least label sequence in the word's equivalence
    class: at each junction, edge-group content is pushed left greedily.
    Greedy is exact here because the embeddings are injective."""
    word = reduce_word(gog, word)
    edges = list(word.edges)
    labels = list(word.labels)
    vertex = word.base
    for i, e in enumerate(edges):
        grp_before = gog.vertex_groups[gog.origin(e)]
        grp_after = gog.vertex_groups[gog.target(e)]
        beta, alpha = gog.beta(e), gog.alpha(e)
        best = None
        for a in gog.edge_group(e).elements():
            moved = grp_before.mul(labels[i], beta(a))
            if best is None or moved < best[0]:
                best = (moved, a)
        moved, a = best
        labels[i] = moved
        labels[i + 1] = grp_after.mul(grp_after.inverse[alpha(a)], labels[i + 1])
        vertex = gog.target(e)
    return ReducedWord(word.base, tuple(edges), tuple(labels))


def verify_normalising_word(gog: GraphOfGroups, base, f_members, word: ReducedWord):
    """Replay the subgroup chain of a word; returns the chain and whether the
    word conjugates the subgroup back to itself exactly."""
    grp = gog.vertex_groups[base]
    current = tuple(sorted(f_members))
    vertex = base
    chain = [current]
    for i, e in enumerate(word.edges):
        if gog.origin(e) != vertex:
            return chain, False
        g = word.labels[i]
        vgrp = gog.vertex_groups[vertex]
        conj = tuple(sorted(vgrp.mul(vgrp.inverse[g], vgrp.mul(x, g))
                            for x in current))
        beta = gog.beta(e)
        image = set(beta.images)
        if not set(conj) <= image:
            return chain, False
        pre = beta.preimage(conj)
        alpha = gog.alpha(e)
        current = tuple(sorted(alpha(x) for x in pre))
        vertex = gog.target(e)
        chain.append(current)
    if vertex != base:
        return chain, False
    g = word.labels[-1]
    vgrp = gog.vertex_groups[vertex]
    final = tuple(sorted(vgrp.mul(vgrp.inverse[g], vgrp.mul(x, g)) for x in current))
    chain.append(final)
    return chain, final == tuple(sorted(f_members))


# ---------------------------------------------------------------------------
# the state graph


@dataclass
class StateGraph:
    """States (directed edge, subgroup of its edge group) with transitions;
    initial states correspond to the first step away from the base vertex."""

    gog: GraphOfGroups
    base: int
    subgroup: tuple
    initial: dict        # state -> least conjugator in G_base
    transitions: dict    # state -> dict target_state -> least conjugator

    def states(self):
        out = set(self.initial)
        for s, targets in self.transitions.items():
            out.add(s)
            out.update(targets)
        return sorted(out)


def _conjugate_set(grp, a, members):
    ainv = grp.inverse[a]
    return tuple(sorted(grp.mul(ainv, grp.mul(x, a)) for x in members))


def _step_options(gog, vertex, members, arrival_edge):
    """All (edge, subgroup-of-edge-group, least conjugator) moves from a
    vertex carrying `members`, excluding the backtrack move."""
    grp = gog.vertex_groups[vertex]
    out = {}
    for z in range(gog.n_directed):
        if gog.origin(z) != vertex:
            continue
        beta = gog.beta(z)
        image = set(beta.images)
        excluded = None
        if arrival_edge is not None and z == gog.reverse(arrival_edge):
            excluded = set(gog.alpha(arrival_edge).images)
        for a in grp.elements():
            if excluded is not None and a in excluded:
                continue
            conj = _conjugate_set(grp, a, members)
            if not set(conj) <= image:
                continue
            pre = tuple(sorted(beta.preimage(conj)))
            key = (z, pre)
            if key not in out:
                out[key] = a
    return out


def fixed_subtree_states(gog: GraphOfGroups, base, f: Subgroup) -> StateGraph:
    """Build the reachable state graph for pushing F from the base vertex."""
    if f.parent != gog.vertex_groups[base]:
        raise SubgroupNotInVertexGroup("subgroup must live in the base vertex group")
    members = f.members
    initial = {}
    for (z, pre), a in sorted(_step_options(gog, base, members, None).items()):
        initial[(z, pre)] = a
    transitions = {}
    frontier = sorted(initial)
    seen = set(frontier)
    while frontier:
        state = frontier.pop(0)
        e, kmem = state
        alpha = gog.alpha(e)
        carried = tuple(sorted(alpha(x) for x in kmem))
        opts = _step_options(gog, gog.target(e), carried, e)
        transitions[state] = {st: a for st, a in sorted(opts.items())}
        for st in transitions[state]:
            if st not in seen:
                seen.add(st)
                frontier.append(st)
    return StateGraph(gog, base, members, initial, transitions)


# ---------------------------------------------------------------------------
# verdict


@dataclass
class NormaliserResult:
    is_infinite: bool
    witness: ReducedWord | None = None
    normaliser: Subgroup | None = None
    normaliser_order: int | None = None
    centre_kind: str | None = None   # "vertex" or "edge"

    @property
    def verdict(self):
        return "infinite" if self.is_infinite else "finite"


def _find_cycle_state(graph: StateGraph):
    """Reachable state lying on a cycle, minimising (distance, state key)."""
    dist = {}
    order = []
    frontier = sorted(graph.initial)
    for s in frontier:
        dist[s] = 0
    while frontier:
        s = frontier.pop(0)
        order.append(s)
        for t in sorted(graph.transitions.get(s, ())):
            if t not in dist:
                dist[t] = dist[s] + 1
                frontier.append(t)
    candidates = []
    for s in order:
        # BFS from successors back to s
        frontier2 = sorted(graph.transitions.get(s, ()))
        seen = set(frontier2)
        found = s in seen
        while frontier2 and not found:
            x = frontier2.pop(0)
            for t in sorted(graph.transitions.get(x, ())):
                if t == s:
                    found = True
                    break
                if t not in seen:
                    seen.add(t)
                    frontier2.append(t)
        if found:
            candidates.append((dist[s], s))
    if not candidates:
        return None, dist
    return min(candidates)[1], dist


def _shortest_state_path(graph: StateGraph, sources, goal):
    """BFS path (list of states) from any source state to goal."""
    frontier = sorted(sources)
    prev = {s: None for s in frontier}
    if goal in prev:
        return [goal]
    while frontier:
        s = frontier.pop(0)
        for t in sorted(graph.transitions.get(s, ())):
            if t not in prev:
                prev[t] = s
                if t == goal:
                    path = [t]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return list(reversed(path))
                frontier.append(t)
    return None


def _cycle_through(graph: StateGraph, s):
    """Shortest nonempty state cycle s -> ... -> s."""
    succ = sorted(graph.transitions.get(s, ()))
    back = _shortest_state_path(graph, succ, s)
    if back is None:
        return None
    return [s] + back


def normaliser_finiteness(gog: GraphOfGroups, base, f: Subgroup) -> NormaliserResult:
    """Decide finiteness of the normaliser of F in the fundamental group.

    Infinite exactly when the state graph has a reachable cycle; the cycle
    is unrolled (out along the walk, around the cycle, straight back) and
    the resulting word is reduced and canonicalised.  Finite verdicts
    compute the fixed subtree explicitly and intersect the normaliser into
    the stabiliser of its centre.
    """
    graph = fixed_subtree_states(gog, base, f)
    cyc_state, dist = _find_cycle_state(graph)
    if cyc_state is None:
        return _finite_normaliser(gog, base, f)
    prefix = _shortest_state_path(graph, sorted(graph.initial), cyc_state)
    cycle = _cycle_through(graph, cyc_state)
    witness = _unroll_witness(gog, graph, base, f.members, prefix, cycle)
    chain, ok = verify_normalising_word(gog, base, f.members, witness)
    assert ok, "witness does not normalise the subgroup"
    return NormaliserResult(True, witness=witness)


def _unroll_witness(gog, graph, base, f_members, prefix, cycle):
    """Word for  u_cycle_end * u_cycle_start^{-1}  where u_i is the walk word."""
    walk_states = prefix + cycle[1:]
    j = len(prefix)
    # conjugators: a_0 for the initial state, then per transition
    labels = [graph.initial[prefix[0]]]
    for i in range(1, len(walk_states)):
        src, dst = walk_states[i - 1], walk_states[i]
        is_last = i == len(walk_states) - 1
        if is_last:
            labels.append(_closing_conjugator(gog, src, dst))
        else:
            labels.append(graph.transitions[src][dst])
    edges = [s[0] for s in walk_states]
    # straight back along the prefix: reversed edges, inverted labels
    back_edges = [gog.reverse(prefix[i][0]) for i in range(j - 1, -1, -1)]
    back_labels = []
    for i in range(j - 1, -1, -1):
        vertex = gog.origin(prefix[i][0])
        grp = gog.vertex_groups[vertex]
        back_labels.append(grp.inverse[labels[i]])
    word = ReducedWord(base, tuple(edges + back_edges),
                       tuple(labels + [gog.vertex_groups[gog.target(edges[-1])].identity]
                             + back_labels))
    return canonicalise_word(gog, word)


def _closing_conjugator(gog, src, dst):
    """Conjugator for the final cycle transition, chosen with least inverse
    so a round trip reads as a conjugation followed by its undoing."""
    e, kmem = src
    z, target_k = dst
    vertex = gog.target(e)
    grp = gog.vertex_groups[vertex]
    alpha = gog.alpha(e)
    carried = tuple(sorted(alpha(x) for x in kmem))
    beta = gog.beta(z)
    goal = tuple(sorted(beta(x) for x in target_k))
    excluded = set(gog.alpha(e).images) if z == gog.reverse(e) else None
    best = None
    for a in grp.elements():
        if excluded is not None and a in excluded:
            continue
        if _conjugate_set(grp, a, carried) != goal:
            continue
        inv = grp.inverse[a]
        if best is None or inv < best[0]:
            best = (inv, a)
    assert best is not None, "cycle transition lost its conjugators"
    return best[1]


# ---------------------------------------------------------------------------
# explicit fixed subtree


@dataclass
class TreeNode:
    node_id: int
    parent: int | None
    vertex: int
    members: tuple          # pulled-back subgroup inside the vertex group
    arrival_edge: int | None
    arrival_rep: int | None
    depth: int


def _children(gog, node: TreeNode, next_id):
    """Distinct fixed tree edges leaving a node: (edge, coset) choices."""
    grp = gog.vertex_groups[node.vertex]
    out = []
    for z in range(gog.n_directed):
        if gog.origin(z) != node.vertex:
            continue
        beta = gog.beta(z)
        image = frozenset(beta.images)
        backtrack_excluded = (node.arrival_edge is not None
                              and z == gog.reverse(node.arrival_edge))
        seen_cosets = set()
        for a in grp.elements():
            coset = frozenset(grp.mul(a, b) for b in image)
            if coset in seen_cosets:
                continue
            seen_cosets.add(coset)
            rep = min(coset)
            if backtrack_excluded and rep in image:
                continue
            conj = _conjugate_set(grp, rep, node.members)
            if not set(conj) <= image:
                continue
            pre = beta.preimage(conj)
            alpha = gog.alpha(z)
            child_members = tuple(sorted(alpha(x) for x in pre))
            out.append(TreeNode(next_id + len(out), node.node_id,
                                gog.target(z), child_members, z, rep,
                                node.depth + 1))
    return out


MAX_EXPANSION_DEPTH = 64


def expand_fixed_subtree(gog: GraphOfGroups, base, f: Subgroup, depth: int):
    """Explicit fixed subtree to the given depth: (level sizes, nodes)."""
    if depth > MAX_EXPANSION_DEPTH:
        raise ValueError(f"expansion depth {depth} exceeds bound {MAX_EXPANSION_DEPTH}")
    if f.parent != gog.vertex_groups[base]:
        raise SubgroupNotInVertexGroup("subgroup must live in the base vertex group")
    root = TreeNode(0, None, base, f.members, None, None, 0)
    nodes = [root]
    levels = [1]
    current = [root]
    for _ in range(depth):
        nxt = []
        for node in current:
            kids = _children(gog, node, len(nodes) + len(nxt))
            nxt.extend(kids)
        nodes.extend(nxt)
        levels.append(len(nxt))
        current = nxt
        if not nxt:
            levels.extend([0] * (depth - len(levels) + 1))
            break
    return levels[:depth + 1], nodes


def subtree_reaches_depth(gog: GraphOfGroups, base, f: Subgroup, depth,
                          node_budget=500_000) -> bool:
    """Whether the fixed subtree has a vertex at the given depth: the level
    there is nonempty.  Depth-first with early exit, so an infinite subtree
    answers quickly without materialising whole levels."""
    if f.parent != gog.vertex_groups[base]:
        raise SubgroupNotInVertexGroup("subgroup must live in the base vertex group")
    root = TreeNode(0, None, base, f.members, None, None, 0)
    stack = [root]
    visited = 0
    while stack:
        node = stack.pop()
        visited += 1
        if visited > node_budget:
            raise RuntimeError("fixed-subtree search exceeded its node budget")
        if node.depth >= depth:
            return True
        stack.extend(reversed(_children(gog, node, 0)))
    return False


def _finite_normaliser(gog, base, f: Subgroup) -> NormaliserResult:
    graph = fixed_subtree_states(gog, base, f)
    bound = len(graph.states()) + 2
    levels, nodes = expand_fixed_subtree(gog, base, f, bound)
    assert levels[-1] == 0, "state graph is acyclic but the tree keeps growing"
    # centre of the finite tree: midpoint of a longest path
    adj = {n.node_id: [] for n in nodes}
    for n in nodes:
        if n.parent is not None:
            adj[n.parent].append(n.node_id)
            adj[n.node_id].append(n.parent)

    def bfs_farthest(start):
        prev = {start: None}
        order = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for y in sorted(adj[x]):
                    if y not in prev:
                        prev[y] = x
                        nxt.append(y)
                        order.append(y)
            frontier = nxt
        far = order[-1] if order else start
        # retrieve path
        path = [far]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return far, list(reversed(path))

    u, _ = bfs_farthest(0)
    v, path = bfs_farthest(u)
    by_id = {n.node_id: n for n in nodes}
    if len(path) % 2 == 1:
        centre = by_id[path[len(path) // 2]]
        grp = gog.vertex_groups[centre.vertex]
        members = [s for s in grp.elements()
                   if _conjugate_set(grp, s, centre.members) == centre.members]
        norm = Subgroup(grp, tuple(members))
        return NormaliserResult(False, normaliser=norm,
                                normaliser_order=norm.order, centre_kind="vertex")
    hi = by_id[path[len(path) // 2]]
    lo = by_id[path[len(path) // 2 - 1]]
    child = hi if hi.parent == lo.node_id else lo
    parent = by_id[child.parent]
    grp = gog.vertex_groups[parent.vertex]
    beta = gog.beta(child.arrival_edge)
    rep = child.arrival_rep
    stab = sorted(grp.mul(grp.mul(rep, beta(x)), grp.inverse[rep])
                  for x in beta.source.elements())
    members = [s for s in stab
               if _conjugate_set(grp, s, parent.members) == parent.members]
    norm = Subgroup(grp, tuple(members))
    return NormaliserResult(False, normaliser=norm,
                            normaliser_order=norm.order, centre_kind="edge")
