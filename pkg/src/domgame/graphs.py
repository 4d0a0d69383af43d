"""Small-graph toolkit for the domination game.

Graphs are capped at 64 vertices so every vertex set fits in one machine
word; adjacency is stored as closed-neighborhood bitmasks (each vertex is
in its own neighborhood), which is the shape the game solver consumes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_VERTICES = 64


class CapacityError(ValueError):
    """A construction would exceed the 64-vertex cap."""


class Graph6Error(ValueError):
    """Malformed graph6 text; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True, slots=True)
class VertexSet:
    """Immutable set of vertex ids backed by a single int bitmask."""

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("vertex-set bitmask must be non-negative")

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in ids:
            if v < 0:
                raise ValueError(f"vertex id {v} is negative")
            bits |= 1 << v
        return cls(bits)

    def ids(self) -> tuple[int, ...]:
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self.bits >> v) & 1 == 1

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & ~other.bits)

    def issubset(self, other: "VertexSet") -> bool:
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.bits & other.bits == 0

    def add(self, v: int) -> "VertexSet":
        if v < 0:
            raise ValueError(f"vertex id {v} is negative")
        return VertexSet(self.bits | (1 << v))

    def complement(self, order: int) -> "VertexSet":
        """Complement within {0, ..., order-1}."""
        return VertexSet(((1 << order) - 1) & ~self.bits)

    def to_csv(self) -> str:
        """Sorted comma-separated ids; the empty set is the empty string."""
        return ",".join(str(v) for v in self.ids())

    @classmethod
    def from_csv(cls, text: str) -> "VertexSet":
        text = text.strip()
        if not text:
            return cls(0)
        try:
            ids = [int(part) for part in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad dominated-set text {text!r}") from exc
        return cls.from_ids(ids)

    def __repr__(self) -> str:
        return f"VertexSet({{{self.to_csv()}}})"


class Graph:
    """Undirected simple graph on vertices 0..order-1, at most 64 of them."""

    __slots__ = ("order", "closed_nbhd")

    def __init__(self, order: int, closed_nbhd: Iterable[VertexSet]):
        if order < 0:
            raise ValueError("order must be non-negative")
        if order > MAX_VERTICES:
            raise CapacityError(f"order {order} exceeds the {MAX_VERTICES}-vertex cap")
        nbhd = tuple(closed_nbhd)
        if len(nbhd) != order:
            raise ValueError(f"expected {order} neighborhoods, got {len(nbhd)}")
        stray = ~((1 << order) - 1)
        for v, ns in enumerate(nbhd):
            if ns.bits & stray:
                raise ValueError(f"neighborhood of {v} mentions vertices >= {order}")
            if v not in ns:
                raise ValueError(f"closed neighborhood of {v} must contain {v}")
        for v, ns in enumerate(nbhd):
            for u in ns:
                if v not in nbhd[u]:
                    raise ValueError(f"adjacency is not symmetric at ({v}, {u})")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "closed_nbhd", nbhd)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if order < 0:
            raise ValueError("order must be non-negative")
        if order > MAX_VERTICES:
            raise CapacityError(f"order {order} exceeds the {MAX_VERTICES}-vertex cap")
        masks = [1 << v for v in range(order)]
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge ({u}, {v}) out of range for order {order}")
            if u == v:
                raise ValueError(f"self-loop at {u} not allowed")
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return cls(order, (VertexSet(m) for m in masks))

    @property
    def full_set(self) -> VertexSet:
        return VertexSet((1 << self.order) - 1)

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self.order and 0 <= v < self.order):
            return False
        return u != v and v in self.closed_nbhd[u]

    def degree(self, v: int) -> int:
        return len(self.closed_nbhd[v]) - 1

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.order):
            for v in self.closed_nbhd[u]:
                if v > u:
                    out.append((u, v))
        return out

    @property
    def edge_count(self) -> int:
        return sum(len(ns) - 1 for ns in self.closed_nbhd) // 2

    def components(self) -> list[VertexSet]:
        """Connected components as vertex sets, ordered by least vertex."""
        seen = 0
        out = []
        for start in range(self.order):
            if (seen >> start) & 1:
                continue
            comp = 1 << start
            frontier = comp
            while frontier:
                grown = comp
                bits = frontier
                while bits:
                    low = bits & -bits
                    grown |= self.closed_nbhd[low.bit_length() - 1].bits
                    bits ^= low
                frontier = grown & ~comp
                comp = grown
            seen |= comp
            out.append(VertexSet(comp))
        return out

    def is_connected(self) -> bool:
        return self.order > 0 and len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.is_connected() and self.edge_count == self.order - 1

    def is_forest(self) -> bool:
        return self.edge_count == self.order - len(self.components())

    def relabel(self, perm: Iterable[int]) -> "Graph":
        """Apply a permutation: vertex v of self becomes perm[v]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.order)):
            raise ValueError("perm is not a permutation of the vertex ids")
        return Graph.from_edges(
            self.order, [(perm[u], perm[v]) for u, v in self.edges()]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.order == other.order and self.closed_nbhd == other.closed_nbhd

    def __hash__(self) -> int:
        return hash((self.order, self.closed_nbhd))

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.edges()})"


@dataclass(frozen=True, slots=True)
class PartialState:
    """A graph together with the set of vertices already dominated."""

    graph: Graph
    dominated: VertexSet = VertexSet(0)

    def __post_init__(self):
        if not self.dominated.issubset(self.graph.full_set):
            raise ValueError("dominated set mentions vertices outside the graph")

    @property
    def is_over(self) -> bool:
        return self.dominated.bits == self.graph.full_set.bits

    @property
    def undominated(self) -> VertexSet:
        return self.dominated.complement(self.graph.order)

    def with_dominated(self, extra: VertexSet) -> "PartialState":
        return PartialState(self.graph, self.dominated | extra)


class PathKind(enum.Enum):
    """End-domination pattern of a pre-dominated path component."""

    PRIME = "pprime"          # one extra end vertex, dominated
    DOUBLE_PRIME = "pdprime"  # two extra end vertices, both dominated


@dataclass(frozen=True, slots=True)
class PathComponent:
    """A path with n undominated interior vertices and dominated end(s)."""

    kind: PathKind
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("component size must be non-negative")

    @property
    def order(self) -> int:
        return self.n + (1 if self.kind is PathKind.PRIME else 2)

    def label(self) -> str:
        return f"{self.kind.value}:{self.n}"

    @classmethod
    def from_label(cls, text: str) -> "PathComponent":
        kind_text, sep, n_text = text.partition(":")
        if not sep:
            raise ValueError(f"bad component label {text!r}, expected kind:size")
        try:
            kind = PathKind(kind_text)
        except ValueError:
            raise ValueError(f"unknown component kind {kind_text!r}") from None
        try:
            n = int(n_text)
        except ValueError:
            raise ValueError(f"bad component size {n_text!r}") from None
        return cls(kind, n)


def build_path(n: int) -> Graph:
    """Path on n vertices, 0 - 1 - ... - (n-1)."""
    if n < 1:
        raise ValueError("path needs at least one vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def build_path_component(component: PathComponent) -> PartialState:
    """Realize a pre-dominated path component as a concrete state.

    PRIME n is a path on n+1 vertices with endpoint 0 dominated;
    DOUBLE_PRIME n is a path on n+2 vertices with both endpoints dominated.
    """
    order = component.order
    graph = build_path(order)
    if component.kind is PathKind.PRIME:
        dominated = VertexSet.from_ids([0])
    else:
        dominated = VertexSet.from_ids([0, order - 1])
    return PartialState(graph, dominated)


def build_spider(p: int, q: int, r: int) -> Graph:
    """Three-legged spider: a center vertex with three legs of 4p, 4q, 4r edges.

    Vertex 0 is the center; each leg is a consecutive block of vertices.
    Legs of length zero are allowed (they simply do not exist).
    """
    if min(p, q, r) < 0:
        raise ValueError("leg parameters must be non-negative")
    lengths = [4 * p, 4 * q, 4 * r]
    order = 1 + sum(lengths)
    if order > MAX_VERTICES:
        raise CapacityError(f"spider would have {order} vertices")
    edges = []
    nxt = 1
    for length in lengths:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(order, edges)


def cut_edge(graph: Graph, u: int, v: int, pre_dominated: VertexSet) -> PartialState:
    """Split the edge uv: remove it, then attach a dominated pendant to each side.

    The new vertex `order` is adjacent only to v and the new vertex `order+1`
    only to u; both are dominated in the result, along with `pre_dominated`.
    """
    if not graph.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    if not pre_dominated.issubset(graph.full_set):
        raise ValueError("pre-dominated set mentions vertices outside the graph")
    order = graph.order
    if order + 2 > MAX_VERTICES:
        raise CapacityError(f"cut would produce {order + 2} vertices")
    u_new, v_new = order, order + 1
    edges = [e for e in graph.edges() if e != (min(u, v), max(u, v))]
    edges.append((v, u_new))
    edges.append((u, v_new))
    new_graph = Graph.from_edges(order + 2, edges)
    dominated = pre_dominated | VertexSet.from_ids([u_new, v_new])
    return PartialState(new_graph, dominated)


def disjoint_union(a: PartialState, b: PartialState) -> PartialState:
    """Disjoint union of two states; b's vertices are shifted past a's."""
    offset = a.graph.order
    order = offset + b.graph.order
    if order > MAX_VERTICES:
        raise CapacityError(f"union would have {order} vertices")
    edges = a.graph.edges() + [(u + offset, v + offset) for u, v in b.graph.edges()]
    graph = Graph.from_edges(order, edges)
    dominated = VertexSet(a.dominated.bits | (b.dominated.bits << offset))
    return PartialState(graph, dominated)


# --- graph6 ---------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def emit_graph6(graph: Graph) -> str:
    """Canonical graph6 line for a graph (no header, no trailing newline)."""
    n = graph.order
    if n <= 62:
        chars = [chr(n + 63)]
    else:
        chars = ["~", chr(((n >> 12) & 63) + 63), chr(((n >> 6) & 63) + 63), chr((n & 63) + 63)]
    group = 0
    filled = 0
    for col in range(1, n):
        col_bits = graph.closed_nbhd[col].bits
        for row in range(col):
            group = (group << 1) | ((col_bits >> row) & 1)
            filled += 1
            if filled == 6:
                chars.append(chr(group + 63))
                group = 0
                filled = 0
    if filled:
        chars.append(chr((group << (6 - filled)) + 63))
    return "".join(chars)


def parse_graph6(text: str) -> Graph:
    """Parse one graph6 line; raises Graph6Error with a byte offset on bad input."""
    line = text.strip()
    base = 0
    if line.startswith(_G6_HEADER):
        base = len(_G6_HEADER)
        line = line[base:]
    if not line:
        raise Graph6Error("empty graph6 text", base)
    for i, ch in enumerate(line):
        code = ord(ch)
        if code < 63 or code > 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range", base + i)
    if line[0] == "~":
        if len(line) >= 2 and line[1] == "~":
            raise Graph6Error("graph6 orders above 258047 are not supported", base)
        if len(line) < 4:
            raise Graph6Error("truncated extended order field", base + len(line))
        n = ((ord(line[1]) - 63) << 12) | ((ord(line[2]) - 63) << 6) | (ord(line[3]) - 63)
        body_at = 4
    else:
        n = ord(line[0]) - 63
        body_at = 1
    if n > MAX_VERTICES:
        raise Graph6Error(f"order {n} exceeds the {MAX_VERTICES}-vertex cap", base)
    bit_count = n * (n - 1) // 2
    need = (bit_count + 5) // 6
    body = line[body_at:]
    if len(body) < need:
        raise Graph6Error(
            f"bit field truncated: need {need} bytes, got {len(body)}",
            base + len(line),
        )
    if len(body) > need:
        raise Graph6Error("trailing data after bit field", base + body_at + need)
    masks = [1 << v for v in range(n)]
    pairs = ((row, col) for col in range(1, n) for row in range(col))
    for ch in body:
        group = ord(ch) - 63
        for k in range(5, -1, -1):
            pair = next(pairs, None)
            if pair is None:
                break  # remaining bits of the last byte are padding
            if (group >> k) & 1:
                row, col = pair
                masks[row] |= 1 << col
                masks[col] |= 1 << row
    return Graph(n, (VertexSet(m) for m in masks))


# --- edge-list text format ------------------------------------------------


def emit_edge_list(graph: Graph) -> str:
    """Plain text: a header line "n m" then one "u v" line per edge."""
    lines = [f"{graph.order} {graph.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty edge-list text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header line {lines[0]!r}, expected 'n m'")
    try:
        order, m = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError(f"bad header line {lines[0]!r}, expected integers") from None
    if len(lines) - 1 != m:
        raise ValueError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"bad edge line {ln!r}") from None
    return Graph.from_edges(order, edges)


def parse_dominated(text: str, order: int) -> VertexSet:
    """Parse the dominated-set sidecar format against a known graph order."""
    vs = VertexSet.from_csv(text)
    if not vs.issubset(VertexSet((1 << order) - 1)):
        raise ValueError(f"dominated set {text!r} mentions vertices >= {order}")
    return vs


def build_from_spec(spec: str) -> Graph:
    """Builtin graph constructors by textual name.

    Supported: ``path:N``, ``spider:P,Q,R``, ``pprime:N`` / ``pdprime:N``
    (which build the underlying path; their dominated sets come from
    :func:`builtin_state`).
    """
    return builtin_state(spec).graph


def builtin_state(spec: str) -> PartialState:
    """Builtin constructors as partial states (pre-dominated where applicable)."""
    name, sep, args = spec.partition(":")
    if not sep:
        raise ValueError(f"bad builtin spec {spec!r}, expected name:args")
    try:
        if name == "path":
            return PartialState(build_path(int(args)))
        if name == "spider":
            parts = [int(x) for x in args.split(",")]
            if len(parts) != 3:
                raise ValueError("spider takes three leg parameters")
            return PartialState(build_spider(*parts))
        if name in (PathKind.PRIME.value, PathKind.DOUBLE_PRIME.value):
            return build_path_component(PathComponent(PathKind(name), int(args)))
    except ValueError as exc:
        raise ValueError(f"bad builtin spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown builtin {name!r}")


def state_from_text(text: str) -> PartialState:
    """Resolve a textual graph source: builtin spec or graph6 string.

    Builtin specs always contain a colon, which graph6 bodies cannot.
    """
    if ":" in text and not text.startswith(">>graph6<<"):
        return builtin_state(text)
    return PartialState(parse_graph6(text))
