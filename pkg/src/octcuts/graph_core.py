"""Immutable undirected graphs with stable integer ids.

Vertex ids are small non-negative integers.  A graph carries an *id bound*:
every id is strictly below it, and operations that create vertices (vertex
identification, gadget insertion) allocate fresh ids at the bound, so ids are
never reused or renumbered.  Deleting vertices simply shrinks the active
vertex set; remaining ids keep their meaning, which lets separate artifacts
(vertex sets, colorings, replacement maps) refer to each other across
operations.

Adjacency is stored twice: as sorted neighbor tuples (deterministic
iteration) and as integer bitmasks (fast set algebra in the solvers).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping, Sequence


def mask_of(ids: Iterable[int]) -> int:
    """Pack an iterable of vertex ids into a bitmask."""
    m = 0
    for v in ids:
        m |= 1 << v
    return m


def ids_of(mask: int) -> list[int]:
    """Unpack a bitmask into an ascending list of vertex ids."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


class Graph:
    """An immutable simple undirected graph.

    Parameters
    ----------
    vertices:
        Iterable of vertex ids (non-negative ints).  The active vertex set;
        it need not be contiguous.
    edges:
        Iterable of ``(u, v)`` pairs with ``u != v`` and both endpoints in
        `vertices`.  Duplicates and orientation are normalized away.
    id_bound:
        Optional upper bound for ids.  Defaults to ``max(vertices) + 1``.
        Must be strictly greater than every id.  Fresh ids allocated by
        graph-rewriting operations start here.
    """

    __slots__ = ("_vertices", "_sorted", "_adj", "_mask", "_m", "_id_bound",
                 "_vmask", "_hash")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]],
                 id_bound: int | None = None):
        vs = frozenset(vertices)
        for v in vs:
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"bad vertex id {v!r}")
        adj: dict[int, set[int]] = {v: set() for v in vs}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u}, {v}) leaves the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        bound = (max(vs) + 1) if vs else 0
        if id_bound is not None:
            if id_bound < bound:
                raise ValueError(f"id_bound {id_bound} below max id")
            bound = id_bound
        self._vertices = vs
        self._sorted = tuple(sorted(vs))
        self._adj = {v: tuple(sorted(adj[v])) for v in self._sorted}
        self._mask = {v: mask_of(adj[v]) for v in self._sorted}
        self._m = sum(len(a) for a in adj.values()) // 2
        self._id_bound = bound
        self._vmask = mask_of(vs)
        self._hash = None

    @classmethod
    def from_order(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        """Build a graph on the contiguous vertex set ``0 .. n-1``."""
        return cls(range(n), edges, id_bound=n)

    # -- basic queries ---------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return self._vertices

    @property
    def sorted_vertices(self) -> tuple[int, ...]:
        return self._sorted

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return self._m

    @property
    def id_bound(self) -> int:
        return self._id_bound

    @property
    def vertex_mask(self) -> int:
        return self._vmask

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def adj_mask(self, v: int) -> int:
        return self._mask[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_vertex(self, v: int) -> bool:
        return v in self._vertices

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._vertices and bool(self._mask[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate edges as sorted pairs, in lexicographic order."""
        for u in self._sorted:
            for v in self._adj[u]:
                if v > u:
                    yield (u, v)

    def neighborhood(self, s: Iterable[int]) -> frozenset[int]:
        """Open neighborhood of a vertex set (never includes the set)."""
        ss = set(s)
        m = 0
        for v in ss:
            m |= self._mask[v]
        return frozenset(ids_of(m & ~mask_of(ss)))

    # -- derived graphs --------------------------------------------------

    def subgraph(self, scope: Iterable[int]) -> "Graph":
        """Induced subgraph on ``scope & vertices``; ids and id bound kept."""
        keep = self._vertices & frozenset(scope)
        km = mask_of(keep)
        edges = []
        for u in sorted(keep):
            rest = self._mask[u] & km
            for v in ids_of(rest):
                if v > u:
                    edges.append((u, v))
        return Graph(keep, edges, id_bound=self._id_bound)

    def without(self, drop: Iterable[int]) -> "Graph":
        """Induced subgraph after deleting `drop`; ids and id bound kept."""
        return self.subgraph(self._vertices - frozenset(drop))

    # -- equality --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, tuple(self.edges())))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, id_bound={self._id_bound})"


@dataclass(frozen=True)
class TwoColoring:
    """A partial proper 2-coloring: a map from vertex ids to ``{0, 1}``.

    The domain is whatever set the coloring was computed on; callers that
    need totality on a scope check it themselves.
    """

    assignment: Mapping[int, int]

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def get(self, v: int, default: int | None = None) -> int | None:
        return self.assignment.get(v, default)

    def __contains__(self, v: int) -> bool:
        return v in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.assignment)

    def color_class(self, c: int) -> frozenset[int]:
        return frozenset(v for v, cc in self.assignment.items() if cc == c)

    def restrict(self, keys: Iterable[int]) -> "TwoColoring":
        ks = set(keys)
        return TwoColoring({v: c for v, c in self.assignment.items() if v in ks})


class ColoringDisagreement(ValueError):
    """Two colorings disagree on their shared vertex."""

    def __init__(self, vertex: int):
        super().__init__(f"colorings disagree at vertex {vertex}")
        self.vertex = vertex


def two_coloring(g: Graph, scope: Iterable[int] | None = None
                 ) -> TwoColoring | tuple[int, ...]:
    """Properly 2-color ``g[scope]`` or exhibit an odd cycle.

    Parameters
    ----------
    g:
        The host graph.
    scope:
        Vertex set to color; defaults to all of ``g``.  Ids outside the
        graph are ignored.

    Returns
    -------
    TwoColoring
        A proper 2-coloring of the induced subgraph, when it is bipartite.
        Each component is colored independently; the lowest id in a
        component gets color 0.
    tuple of int
        Otherwise, an odd cycle witness: a sequence of distinct vertices of
        odd length, consecutive ones adjacent and the last adjacent to the
        first, entirely inside the scope.
    """
    sset = g.vertices if scope is None else (g.vertices & frozenset(scope))
    smask = mask_of(sset)
    color: dict[int, int] = {}
    parent: dict[int, int] = {}
    depth: dict[int, int] = {}
    for root in sorted(sset):
        if root in color:
            continue
        color[root] = 0
        parent[root] = root
        depth[root] = 0
        queue = [root]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for v in ids_of(g.adj_mask(u) & smask):
                if v not in color:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return _close_odd_cycle(u, v, parent, depth)
    return TwoColoring(color)


def _close_odd_cycle(u: int, v: int, parent: Mapping[int, int],
                     depth: Mapping[int, int]) -> tuple[int, ...]:
    # Walk both endpoints of the offending edge up to their lowest common
    # ancestor in the BFS forest; the two tree paths plus the edge close an
    # odd cycle because u and v sit at depths of equal parity.
    up, vp = u, v
    left, right = [u], [v]
    while depth[up] > depth[vp]:
        up = parent[up]
        left.append(up)
    while depth[vp] > depth[up]:
        vp = parent[vp]
        right.append(vp)
    while up != vp:
        up = parent[up]
        vp = parent[vp]
        left.append(up)
        right.append(vp)
    # left ends at the ancestor; right also ends at it.
    return tuple(left + right[-2::-1])


def combine_colorings(f_left: TwoColoring, f_right: TwoColoring,
                      v0: int) -> TwoColoring:
    """Merge two partial 2-colorings whose domains overlap exactly in `v0`.

    Raises
    ------
    ColoringDisagreement
        If the colorings assign `v0` different colors.
    ValueError
        If the domains overlap anywhere else, or miss `v0`.
    """
    shared = f_left.domain & f_right.domain
    if shared != {v0}:
        raise ValueError(f"domains must overlap exactly in {{{v0}}}, "
                         f"got overlap {sorted(shared)}")
    if f_left[v0] != f_right[v0]:
        raise ColoringDisagreement(v0)
    merged = dict(f_left.assignment)
    merged.update(f_right.assignment)
    return TwoColoring(merged)


def components(g: Graph, scope: Iterable[int] | None = None
               ) -> list[frozenset[int]]:
    """Connected components of ``g[scope]``, ordered by smallest member id.

    An empty scope yields an empty list.
    """
    sset = g.vertices if scope is None else (g.vertices & frozenset(scope))
    smask = mask_of(sset)
    seen = 0
    out: list[frozenset[int]] = []
    for root in sorted(sset):
        rbit = 1 << root
        if seen & rbit:
            continue
        comp = rbit
        frontier = rbit
        while frontier:
            nxt = 0
            for v in ids_of(frontier):
                nxt |= g.adj_mask(v)
            frontier = nxt & smask & ~comp
            comp |= frontier
        seen |= comp
        out.append(frozenset(ids_of(comp)))
    return out


def identify_sets(g: Graph, groups: Sequence[Iterable[int]]
                  ) -> tuple[Graph, dict[int, int]]:
    """Contract each group of vertices into a single fresh vertex.

    Groups must be pairwise disjoint subsets of the vertex set.  Each
    non-empty group is replaced by a fresh vertex (ids allocated at the id
    bound, in group order); edges are redirected and de-duplicated, and
    edges inside a group vanish.  Empty groups are skipped.

    Returns the contracted graph and a map from group index to fresh id.
    """
    gsets = [frozenset(grp) for grp in groups]
    seen: set[int] = set()
    for i, grp in enumerate(gsets):
        if not grp <= g.vertices:
            raise ValueError(f"group {i} leaves the vertex set")
        if grp & seen:
            raise ValueError(f"group {i} overlaps an earlier group")
        seen |= grp
    rep: dict[int, int] = {}
    fresh: dict[int, int] = {}
    next_id = g.id_bound
    for i, grp in enumerate(gsets):
        if not grp:
            continue
        fresh[i] = next_id
        for v in grp:
            rep[v] = next_id
        next_id += 1
    vertices = (g.vertices - seen) | set(fresh.values())
    edges = set()
    for u, v in g.edges():
        ru = rep.get(u, u)
        rv = rep.get(v, v)
        if ru != rv:
            edges.add((min(ru, rv), max(ru, rv)))
    return Graph(vertices, edges, id_bound=next_id), fresh


def bypass(g: Graph, u: Iterable[int]) -> Graph:
    """Delete `u` and re-wire around it.

    For every connected component of ``g[u]``, its external neighborhood
    becomes a clique; then `u` is removed.  Composing bypasses over disjoint
    sets equals a single bypass of their union.
    """
    uset = frozenset(u) & g.vertices
    if not uset <= g.vertices:
        raise ValueError("bypass set leaves the vertex set")
    keep = g.vertices - uset
    kmask = mask_of(keep)
    edges = set()
    for a, b in g.edges():
        if a in keep and b in keep:
            edges.add((a, b))
    for comp in components(g, uset):
        ext = 0
        for v in comp:
            ext |= g.adj_mask(v)
        ext_ids = ids_of(ext & kmask)
        for i, a in enumerate(ext_ids):
            for b in ext_ids[i + 1:]:
                edges.add((a, b))
    return Graph(keep, edges, id_bound=g.id_bound)


# -- text formats ---------------------------------------------------------

def graph_to_lines(g: Graph, comments: Iterable[str] = ()) -> list[str]:
    """Render a graph in the plain text format.

    ``p <n> <m>`` with n the id bound, then one ``e <u> <v>`` line per edge
    in lexicographic order.  Ids absent from the active vertex set simply
    never appear in edges; they read back as isolated vertices.
    """
    lines = [f"# {c}" for c in comments]
    lines.append(f"p {g.id_bound} {g.m}")
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return lines


def write_graph(g: Graph, dst: str | IO[str], comments: Iterable[str] = ()) -> None:
    text = "\n".join(graph_to_lines(g, comments)) + "\n"
    if isinstance(dst, str):
        with open(dst, "w") as fh:
            fh.write(text)
    else:
        dst.write(text)


def graph_from_lines(lines: Iterable[str]) -> Graph:
    n = None
    m_declared = None
    edges = []
    for ln, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {ln}: duplicate p line")
            if len(parts) != 3:
                raise ValueError(f"line {ln}: malformed p line")
            n, m_declared = int(parts[1]), int(parts[2])
            if n < 0 or m_declared < 0:
                raise ValueError(f"line {ln}: negative counts")
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {ln}: edge before p line")
            if len(parts) != 3:
                raise ValueError(f"line {ln}: malformed e line")
            u, v = int(parts[1]), int(parts[2])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"line {ln}: vertex id out of range")
            if u == v:
                raise ValueError(f"line {ln}: self-loop")
            edges.append((u, v))
        else:
            raise ValueError(f"line {ln}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing p line")
    g = Graph.from_order(n, edges)
    if m_declared != g.m:
        raise ValueError(f"p line declares {m_declared} edges, found {g.m}")
    return g


def read_graph(src: str | IO[str]) -> Graph:
    if isinstance(src, str):
        with open(src) as fh:
            return graph_from_lines(fh)
    return graph_from_lines(src)


def read_vertex_set(src: str | IO[str]) -> frozenset[int]:
    """Read a whitespace-separated vertex set file (# comments allowed)."""
    if isinstance(src, str):
        with open(src) as fh:
            text = fh.read()
    else:
        text = src.read()
    ids: set[int] = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        ids.update(int(tok) for tok in line.split())
    return frozenset(ids)


def write_vertex_set(s: Iterable[int], dst: str | IO[str]) -> None:
    text = " ".join(str(v) for v in sorted(s)) + "\n"
    if isinstance(dst, str):
        with open(dst, "w") as fh:
            fh.write(text)
    else:
        dst.write(text)
