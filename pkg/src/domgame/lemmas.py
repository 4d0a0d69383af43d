"""Executable checkers for the domination-game inequalities.

Each checker evaluates both sides of its inequality with the exact solver
(never with closed forms) and returns verdict records that serialize to
JSON lines. Random instances are drawn from seeded generators so every
batch is reproducible from its recorded seed.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from functools import reduce

from .graphs import (
    Graph,
    PartialState,
    PathComponent,
    VertexSet,
    build_path_component,
    cut_edge,
    disjoint_union,
    emit_graph6,
    parse_graph6,
)
from .solver import GameConfig, PassEntitlement, SolverPool, Turn

_D = GameConfig(Turn.DOMINATOR)
_S = GameConfig(Turn.STALLER)
_D_SP = GameConfig(Turn.DOMINATOR, PassEntitlement.STALLER_PASS)
_S_SP = GameConfig(Turn.STALLER, PassEntitlement.STALLER_PASS)


class SolverInvariantError(RuntimeError):
    """A proven bound failed, which can only mean a solver bug."""


class Classification(enum.Enum):
    PLUS = "PLUS"
    EQUAL = "EQUAL"
    MINUS = "MINUS"


@dataclass(frozen=True, slots=True)
class QuarterWeight:
    """Exact weight in integer quarters; no floating point anywhere."""

    quarters: int

    def __post_init__(self):
        if self.quarters < 0:
            raise ValueError("weight must be non-negative")

    def __add__(self, other: "QuarterWeight") -> "QuarterWeight":
        return QuarterWeight(self.quarters + other.quarters)

    @property
    def ceil_to_moves(self) -> int:
        return (self.quarters + 3) // 4


_QUARTER_REMAINDER = (0, 4, 6, 7)  # weights 0, 1, 3/2, 7/4 for n mod 4 = 0..3


def weight(component: PathComponent) -> QuarterWeight:
    """Weight of an end-dominated path component: 2q plus a remainder term."""
    q, r = divmod(component.n, 4)
    return QuarterWeight(8 * q + _QUARTER_REMAINDER[r])


@dataclass(frozen=True, slots=True)
class LemmaVerdict:
    lemma_id: str
    instance: dict
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_record(self, seed: int | None = None) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "seed": seed,
            "instance": self.instance,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
        }


class InclusionBranch(enum.Enum):
    C_SUBSET_B = "C_SUBSET_B"
    SINGLETON_W = "SINGLETON_W"


@dataclass(frozen=True, slots=True)
class InclusionWitness:
    u: int
    v: int
    B: VertexSet
    C: VertexSet
    satisfied: bool
    branch: InclusionBranch | None


def check_inclusion_property(u: int, v: int, B: VertexSet, C: VertexSet) -> InclusionWitness:
    """Literal evaluation of the two-branch inclusion condition on (B, C)."""
    if C.issubset(B):
        return InclusionWitness(u, v, B, C, True, InclusionBranch.C_SUBSET_B)
    ends = VertexSet.from_ids([u, v])
    extra = C - B
    if ends.issubset(C) and len(extra) == 1 and extra.issubset(ends):
        return InclusionWitness(u, v, B, C, True, InclusionBranch.SINGLETON_W)
    return InclusionWitness(u, v, B, C, False, None)


def _pool(pool: SolverPool | None) -> SolverPool:
    return pool if pool is not None else SolverPool()


def _graph_instance(g: Graph, **rest) -> dict:
    inst = {"graph6": emit_graph6(g)}
    inst.update(rest)
    return inst


def check_union_lemma(components: list[PathComponent], pool: SolverPool | None = None) -> LemmaVerdict:
    """Staller-start value of a disjoint union of end-dominated paths is at
    most the ceiling of the summed component weights."""
    if not components:
        raise ValueError("need at least one component")
    for c in components:
        if c.n < 1:
            raise ValueError("components with no undominated vertices are not covered")
    union = reduce(disjoint_union, (build_path_component(c) for c in components))
    lhs = _pool(pool).value(union, _S)
    rhs = sum((weight(c) for c in components), QuarterWeight(0)).ceil_to_moves
    instance = {"components": [c.label() for c in components]}
    return LemmaVerdict("union", instance, lhs, rhs)


def _require_nested(g: Graph, outer: VertexSet, inner: VertexSet, names: str):
    if not outer.issubset(g.full_set):
        raise ValueError(f"{names[0]} mentions vertices outside the graph")
    if not inner.issubset(outer):
        raise ValueError(f"precondition {names[-1]} subset-of {names[0]} fails")


def check_cutting_lemma(
    g: Graph, u: int, v: int, A: VertexSet, B: VertexSet, pool: SolverPool | None = None
) -> tuple[LemmaVerdict, LemmaVerdict]:
    """Cutting an edge (with the smaller pre-dominated set) never lowers the
    game value: gamma_g(G|A) <= gamma_g(G_uv|B) and the same Staller-start."""
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    _require_nested(g, A, B, "AB")
    pool = _pool(pool)
    cut = cut_edge(g, u, v, B)
    instance = _graph_instance(g, u=u, v=v, A=list(A.ids()), B=list(B.ids()))
    whole = PartialState(g, A)
    return (
        LemmaVerdict("cutting:d", instance, pool.value(whole, _D), pool.value(cut, _D)),
        LemmaVerdict("cutting:s", instance, pool.value(whole, _S), pool.value(cut, _S)),
    )


def check_extended_cutting(
    g: Graph,
    u: int,
    v: int,
    A: VertexSet,
    B: VertexSet,
    C: VertexSet,
    pool: SolverPool | None = None,
) -> list[LemmaVerdict]:
    """Full two-sided chains around the cut value, plus the +2 corollary.

    For C <= B <= A: gamma_g(G|A) <= gamma_g(G_uv|B) <= gamma_g^sp(G|C) + 1,
    the same chain Staller-start, and gamma(G_uv|B) <= gamma(G|C) + 2 both ways.

    The S-start right-hand bound is refutable: on graphs with cycles the two
    dominated split vertices can hand Staller more than the one extra move the
    Staller-pass value accounts for (smallest known witness has 5 vertices).
    A violated verdict for it reports that gap, not a solver fault. No
    counterexample to the D-start bound or either +2 corollary is known.
    """
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    _require_nested(g, A, B, "AB")
    _require_nested(g, B, C, "BC")
    pool = _pool(pool)
    cut = cut_edge(g, u, v, B)
    instance = _graph_instance(
        g, u=u, v=v, A=list(A.ids()), B=list(B.ids()), C=list(C.ids())
    )
    on_a = PartialState(g, A)
    on_c = PartialState(g, C)
    mid_d = pool.value(cut, _D)
    mid_s = pool.value(cut, _S)
    return [
        LemmaVerdict("extended-cutting:d:left", instance, pool.value(on_a, _D), mid_d),
        LemmaVerdict("extended-cutting:d:right", instance, mid_d, pool.value(on_c, _D_SP) + 1),
        LemmaVerdict("extended-cutting:s:left", instance, pool.value(on_a, _S), mid_s),
        LemmaVerdict("extended-cutting:s:right", instance, mid_s, pool.value(on_c, _S_SP) + 1),
        LemmaVerdict("extended-cutting:d:corollary", instance, mid_d, pool.value(on_c, _D) + 2),
        LemmaVerdict("extended-cutting:s:corollary", instance, mid_s, pool.value(on_c, _S) + 2),
    ]


def check_predominated_cut(
    g: Graph, u: int, v: int, B: VertexSet, C: VertexSet, pool: SolverPool | None = None
) -> tuple[LemmaVerdict, LemmaVerdict]:
    """When both cut ends are already dominated, cutting cannot raise the
    value: gamma_g(G_uv|B) <= gamma_g(G|C) for {u,v} <= C <= B."""
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    _require_nested(g, B, C, "BC")
    if not VertexSet.from_ids([u, v]).issubset(C):
        raise ValueError("precondition {u,v} subset-of C fails")
    pool = _pool(pool)
    cut = cut_edge(g, u, v, B)
    on_c = PartialState(g, C)
    instance = _graph_instance(g, u=u, v=v, B=list(B.ids()), C=list(C.ids()))
    return (
        LemmaVerdict("predominated-cut:d", instance, pool.value(cut, _D), pool.value(on_c, _D)),
        LemmaVerdict("predominated-cut:s", instance, pool.value(cut, _S), pool.value(on_c, _S)),
    )


def check_pass_lemma(
    g: Graph, u: int, v: int, B: VertexSet, C: VertexSet, pool: SolverPool | None = None
) -> tuple[LemmaVerdict, LemmaVerdict]:
    """Cut value against the Staller-pass value plus one move, for any (B, C)
    satisfying the inclusion condition.

    Same status as the extended chains: the D-start form has no known
    counterexample, the S-start form is refutable on graphs with cycles.
    """
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    if not (B.issubset(g.full_set) and C.issubset(g.full_set)):
        raise ValueError("B and C must be sets of graph vertices")
    witness = check_inclusion_property(u, v, B, C)
    if not witness.satisfied:
        raise ValueError(
            "(B, C) fails the inclusion property: C is not a subset of B, and "
            "C does not both contain {u,v} and exceed B by exactly one of them"
        )
    pool = _pool(pool)
    cut = cut_edge(g, u, v, B)
    on_c = PartialState(g, C)
    instance = _graph_instance(g, u=u, v=v, B=list(B.ids()), C=list(C.ids()))
    return (
        LemmaVerdict("pass-cut:d", instance, pool.value(cut, _D), 1 + pool.value(on_c, _D_SP)),
        LemmaVerdict("pass-cut:s", instance, pool.value(cut, _S), 1 + pool.value(on_c, _S_SP)),
    )


def check_continuation(
    g: Graph, A: VertexSet, B: VertexSet, pool: SolverPool | None = None
) -> tuple[LemmaVerdict, LemmaVerdict]:
    """More pre-dominated vertices never hurt: value(G|A) <= value(G|B) for B <= A."""
    _require_nested(g, A, B, "AB")
    pool = _pool(pool)
    on_a, on_b = PartialState(g, A), PartialState(g, B)
    instance = _graph_instance(g, A=list(A.ids()), B=list(B.ids()))
    return (
        LemmaVerdict("continuation:d", instance, pool.value(on_a, _D), pool.value(on_b, _D)),
        LemmaVerdict("continuation:s", instance, pool.value(on_a, _S), pool.value(on_b, _S)),
    )


def check_no_minus(
    g: Graph, S: VertexSet, pool: SolverPool | None = None
) -> LemmaVerdict:
    """Partially dominated forests never favor moving first for Staller:
    gamma_g(F|S) <= gamma_g_prime(F|S)."""
    if not g.is_forest():
        raise ValueError("the no-minus inequality is only asserted for forests")
    if not S.issubset(g.full_set):
        raise ValueError("S mentions vertices outside the graph")
    pool = _pool(pool)
    state = PartialState(g, S)
    instance = _graph_instance(g, S=list(S.ids()))
    return LemmaVerdict("no-minus", instance, pool.value(state, _D), pool.value(state, _S))


def classification_of(gamma_g: int, gamma_g_prime: int) -> Classification:
    """PLUS, EQUAL, or MINUS from already-computed game values."""
    diff = gamma_g_prime - gamma_g
    if diff == 1:
        return Classification.PLUS
    if diff == 0:
        return Classification.EQUAL
    if diff == -1:
        return Classification.MINUS
    raise SolverInvariantError(
        f"gamma_g={gamma_g} and gamma_g_prime={gamma_g_prime} differ by more than one"
    )


def classify(g: Graph, pool: SolverPool | None = None) -> Classification:
    """PLUS, EQUAL, or MINUS by comparing Staller-start with Dominator-start."""
    pool = _pool(pool)
    state = PartialState(g)
    return classification_of(pool.value(state, _D), pool.value(state, _S))


# --- batches ----------------------------------------------------------------

LEMMA_NAMES = (
    "cutting",
    "extended-cutting",
    "union",
    "predominated-cut",
    "pass",
    "continuation",
    "no-minus",
)


@dataclass(slots=True)
class LemmaBatch:
    lemma: str
    seed: int | None
    verdicts: list[LemmaVerdict] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(1 for v in self.verdicts if not v.holds)

    @property
    def holds(self) -> bool:
        return self.violations == 0

    def to_jsonl(self) -> str:
        return "\n".join(
            json.dumps(v.to_record(self.seed), sort_keys=True) for v in self.verdicts
        ) + ("\n" if self.verdicts else "")


def check_instance(lemma: str, instance: dict, pool: SolverPool | None = None) -> list[LemmaVerdict]:
    """Evaluate one serialized instance dict for the named lemma.

    Instance fields by lemma (vertex sets are lists of vertex ids):
      union: components (list of labels like "pprime:4", "pdprime:3")
      cutting: graph6, u, v, A, B
      extended-cutting: graph6, u, v, A, B, C
      predominated-cut / pass: graph6, u, v, B, C
      continuation: graph6, A, B
      no-minus: graph6, S
    Missing fields raise ValueError naming the field.
    """
    pool = _pool(pool)
    try:
        if lemma == "union":
            comps = [PathComponent.from_label(t) for t in instance["components"]]
            return [check_union_lemma(comps, pool)]
        g = parse_graph6(instance["graph6"])
        sets = {
            k: VertexSet.from_ids(instance[k]) for k in ("A", "B", "C", "S") if k in instance
        }
        if lemma == "cutting":
            return list(
                check_cutting_lemma(g, instance["u"], instance["v"], sets["A"], sets["B"], pool)
            )
        if lemma == "extended-cutting":
            return check_extended_cutting(
                g, instance["u"], instance["v"], sets["A"], sets["B"], sets["C"], pool
            )
        if lemma == "predominated-cut":
            return list(
                check_predominated_cut(g, instance["u"], instance["v"], sets["B"], sets["C"], pool)
            )
        if lemma == "pass":
            return list(
                check_pass_lemma(g, instance["u"], instance["v"], sets["B"], sets["C"], pool)
            )
        if lemma == "continuation":
            return list(check_continuation(g, sets["A"], sets["B"], pool))
        if lemma == "no-minus":
            return [check_no_minus(g, sets["S"], pool)]
    except KeyError as exc:
        raise ValueError(f"instance for {lemma!r} is missing field {exc}") from None
    raise ValueError(f"unknown lemma {lemma!r}; expected one of {', '.join(LEMMA_NAMES)}")


def run_lemma_batch(
    lemma: str,
    instances: list[dict] | None = None,
    seed: int | None = None,
    count: int | None = None,
    pool: SolverPool | None = None,
) -> LemmaBatch:
    """Evaluate explicit instances, or `count` seeded random ones."""
    if lemma not in LEMMA_NAMES:
        raise ValueError(f"unknown lemma {lemma!r}; expected one of {', '.join(LEMMA_NAMES)}")
    if (instances is None) == (seed is None and count is None):
        raise ValueError("provide either explicit instances or a seed and count")
    pool = _pool(pool)
    if instances is None:
        if seed is None or count is None or count < 1:
            raise ValueError("random mode needs a seed and a positive count")
        rnd = random.Random(seed)
        instances = [sample_instance(lemma, rnd) for _ in range(count)]
        batch = LemmaBatch(lemma, seed)
    else:
        batch = LemmaBatch(lemma, None)
    for inst in instances:
        batch.verdicts.extend(check_instance(lemma, inst, pool))
    return batch


# --- seeded instance generators ----------------------------------------------


def random_connected_graph(rnd: random.Random, min_order: int = 2, max_order: int = 9) -> Graph:
    """Random tree plus random extra edges; connected by construction."""
    n = rnd.randint(min_order, max_order)
    edges = set(_random_tree_edges(rnd, n))
    density = rnd.random() * 0.5
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rnd.random() < density:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def random_forest(rnd: random.Random, max_order: int = 9) -> Graph:
    """One or two random trees, shifted apart."""
    n = rnd.randint(1, max_order)
    split = rnd.randint(0, n) if rnd.random() < 0.4 else n
    edges = list(_random_tree_edges(rnd, split))
    edges += [(u + split, v + split) for u, v in _random_tree_edges(rnd, n - split)]
    return Graph.from_edges(n, edges)


def _random_tree_edges(rnd: random.Random, n: int) -> list[tuple[int, int]]:
    # random attachment: each new vertex hangs off an earlier one
    return [(rnd.randrange(v), v) for v in range(1, n)]


def random_subset(rnd: random.Random, of: VertexSet) -> VertexSet:
    keep_rate = rnd.random()
    return VertexSet.from_ids([v for v in of if rnd.random() < keep_rate])


def sample_instance(lemma: str, rnd: random.Random) -> dict:
    """One random instance dict satisfying the lemma's preconditions."""
    if lemma == "union":
        comps = [
            PathComponent.from_label(
                f"{rnd.choice(['pprime', 'pdprime'])}:{rnd.randint(1, 6)}"
            )
            for _ in range(rnd.randint(1, 3))
        ]
        return {"components": [c.label() for c in comps]}
    if lemma == "no-minus":
        g = random_forest(rnd)
        return _graph_instance(g, S=list(random_subset(rnd, g.full_set).ids()))
    g = random_connected_graph(rnd)
    everything = g.full_set
    if lemma == "continuation":
        a = random_subset(rnd, everything)
        return _graph_instance(g, A=list(a.ids()), B=list(random_subset(rnd, a).ids()))
    u, v = rnd.choice(g.edges())
    if lemma == "cutting":
        a = random_subset(rnd, everything)
        return _graph_instance(
            g, u=u, v=v, A=list(a.ids()), B=list(random_subset(rnd, a).ids())
        )
    if lemma == "extended-cutting":
        a = random_subset(rnd, everything)
        b = random_subset(rnd, a)
        return _graph_instance(
            g, u=u, v=v, A=list(a.ids()), B=list(b.ids()), C=list(random_subset(rnd, b).ids())
        )
    if lemma == "predominated-cut":
        ends = VertexSet.from_ids([u, v])
        c = ends | random_subset(rnd, everything)
        b = c | random_subset(rnd, everything)
        return _graph_instance(g, u=u, v=v, B=list(b.ids()), C=list(c.ids()))
    if lemma == "pass":
        if rnd.random() < 0.5:
            b = random_subset(rnd, everything)
            c = random_subset(rnd, b)
        else:
            w, other = (u, v) if rnd.random() < 0.5 else (v, u)
            b = random_subset(rnd, everything - VertexSet.from_ids([w])).add(other)
            c = VertexSet.from_ids([u, v]) | random_subset(rnd, b)
        return _graph_instance(g, u=u, v=v, B=list(b.ids()), C=list(c.ids()))
    raise ValueError(f"unknown lemma {lemma!r}")
