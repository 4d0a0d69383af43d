"""Exact minimax solver for the domination game on partially dominated graphs.

Dominator and Staller alternate picking vertices; every move must newly
dominate something, Dominator drives the move count down, Staller drives it
up. Variants let one named player skip a single turn at zero cost. Values
are computed by plain depth-first minimax over dominated-set bitmasks with
a per-graph transposition table; there is deliberately no pruning, so the
table can be switched off to audit the search.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Union

from .graphs import (
    Graph,
    PartialState,
    PathComponent,
    PathKind,
    VertexSet,
    build_path_component,
)

_WIN_CAP = 1 << 20  # above any reachable move count

#: Move sentinel for a zero-cost skipped turn.
PASS = "pass"


class Turn(enum.Enum):
    DOMINATOR = "dominator"
    STALLER = "staller"

    @property
    def opponent(self) -> "Turn":
        return Turn.STALLER if self is Turn.DOMINATOR else Turn.DOMINATOR


class PassEntitlement(enum.Enum):
    """Who, if anyone, holds a one-shot zero-cost pass."""

    NONE = "none"
    STALLER_PASS = "staller"
    DOMINATOR_PASS = "dominator"


@dataclass(frozen=True, slots=True)
class GameConfig:
    first_mover: Turn = Turn.DOMINATOR
    pass_entitlement: PassEntitlement = PassEntitlement.NONE


StateLike = Union[PartialState, Graph, PathComponent]


def as_state(x: StateLike) -> PartialState:
    """Coerce a graph or path component to an undominated/pre-dominated state."""
    if isinstance(x, PartialState):
        return x
    if isinstance(x, Graph):
        return PartialState(x)
    if isinstance(x, PathComponent):
        return build_path_component(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a game state")


def legal_moves(state: PartialState) -> VertexSet:
    """Vertices whose closed neighborhood is not yet fully dominated."""
    dom = state.dominated.bits
    bits = 0
    for v, ns in enumerate(state.graph.closed_nbhd):
        if ns.bits | dom != dom:
            bits |= 1 << v
    return VertexSet(bits)


# internal encodings: mover 0 = Dominator, 1 = Staller;
# entitlement 0 = none left, 1 = Staller may pass, 2 = Dominator may pass
_MOVER = {Turn.DOMINATOR: 0, Turn.STALLER: 1}
_ENTITLEMENT = {PassEntitlement.NONE: 0, PassEntitlement.STALLER_PASS: 1, PassEntitlement.DOMINATOR_PASS: 2}


class GameSolver:
    """Reusable solver for one graph; values are cached across queries.

    Cached values are positions (dominated set, mover, remaining pass
    entitlement), so queries over different starting sets, starters and pass
    variants on the same graph share work. `use_memo=False` rebuilds every
    value from scratch, as an audit mode.
    """

    def __init__(self, graph: Graph, use_memo: bool = True):
        self.graph = graph
        self._nbhd = tuple(ns.bits for ns in graph.closed_nbhd)
        self._full = (1 << graph.order) - 1
        self._memo: dict[int, int] | None = {} if use_memo else None

    def value(self, dominated: VertexSet, cfg: GameConfig = GameConfig()) -> int:
        if not dominated.issubset(self.graph.full_set):
            raise ValueError("dominated set mentions vertices outside the graph")
        return self._search(
            dominated.bits, _MOVER[cfg.first_mover], _ENTITLEMENT[cfg.pass_entitlement]
        )

    def _search(self, dom: int, mover: int, entitlement: int) -> int:
        if dom == self._full:
            return 0
        memo = self._memo
        if memo is not None:
            key = (dom << 3) | (mover << 2) | entitlement
            hit = memo.get(key)
            if hit is not None:
                return hit
        if mover == 0:
            best = _WIN_CAP
            for nb in self._nbhd:
                nd = dom | nb
                if nd != dom:
                    val = self._search(nd, 1, entitlement) + 1
                    if val < best:
                        best = val
            if entitlement == 2:
                val = self._search(dom, 1, 0)
                if val < best:
                    best = val
        else:
            best = -1
            for nb in self._nbhd:
                nd = dom | nb
                if nd != dom:
                    val = self._search(nd, 0, entitlement) + 1
                    if val > best:
                        best = val
            if entitlement == 1:
                val = self._search(dom, 0, 0)
                if val > best:
                    best = val
        if memo is not None:
            memo[key] = best
        return best

    def optimal_move(self, dominated: VertexSet, cfg: GameConfig = GameConfig()):
        """Lowest-id optimal vertex for the player to move; PASS only if no
        vertex achieves the value and the pass does."""
        if dominated.bits == self._full:
            raise ValueError("game is already over")
        mover = _MOVER[cfg.first_mover]
        entitlement = _ENTITLEMENT[cfg.pass_entitlement]
        target = self._search(dominated.bits, mover, entitlement)
        for v, nb in enumerate(self._nbhd):
            nd = dominated.bits | nb
            if nd == dominated.bits:
                continue
            if self._search(nd, 1 - mover, entitlement) + 1 == target:
                return v
        mover_may_pass = (mover == 0 and entitlement == 2) or (mover == 1 and entitlement == 1)
        if mover_may_pass and self._search(dominated.bits, 1 - mover, 0) == target:
            return PASS
        raise AssertionError("no move achieves the minimax value")

    def trace(self, dominated: VertexSet, cfg: GameConfig = GameConfig()) -> list[dict]:
        """Optimal play-through: one {mover, move} entry per action."""
        dom = dominated
        turn = cfg.first_mover
        rule = cfg.pass_entitlement
        out = []
        while dom.bits != self._full:
            move = self.optimal_move(dom, GameConfig(turn, rule))
            out.append({"mover": turn.value, "move": move})
            if move == PASS:
                rule = PassEntitlement.NONE
            else:
                dom = dom | VertexSet(self._nbhd[move])
            turn = turn.opponent
        return out


class SolverPool:
    """Per-graph solver cache used to share transposition tables in sweeps."""

    def __init__(self):
        self._solvers: dict[Graph, GameSolver] = {}

    def solver(self, graph: Graph) -> GameSolver:
        s = self._solvers.get(graph)
        if s is None:
            s = GameSolver(graph)
            self._solvers[graph] = s
        return s

    def value(self, state: StateLike, cfg: GameConfig = GameConfig()) -> int:
        st = as_state(state)
        return self.solver(st.graph).value(st.dominated, cfg)


def solve(state: StateLike, cfg: GameConfig = GameConfig()) -> int:
    """Number of moves under optimal play from the given state."""
    st = as_state(state)
    return GameSolver(st.graph).value(st.dominated, cfg)


def optimal_move(state: StateLike, cfg: GameConfig = GameConfig()):
    st = as_state(state)
    return GameSolver(st.graph).optimal_move(st.dominated, cfg)


_CFG_D = GameConfig(Turn.DOMINATOR, PassEntitlement.NONE)
_CFG_S = GameConfig(Turn.STALLER, PassEntitlement.NONE)
_CFG_D_SP = GameConfig(Turn.DOMINATOR, PassEntitlement.STALLER_PASS)
_CFG_S_SP = GameConfig(Turn.STALLER, PassEntitlement.STALLER_PASS)
_CFG_D_DP = GameConfig(Turn.DOMINATOR, PassEntitlement.DOMINATOR_PASS)
_CFG_S_DP = GameConfig(Turn.STALLER, PassEntitlement.DOMINATOR_PASS)


def gamma_g(state: StateLike) -> int:
    """Game domination number, Dominator moves first."""
    return solve(state, _CFG_D)


def gamma_g_prime(state: StateLike) -> int:
    """Game domination number, Staller moves first."""
    return solve(state, _CFG_S)


def gamma_g_sp(state: StateLike) -> int:
    """Dominator-start value when Staller holds a one-shot pass."""
    return solve(state, _CFG_D_SP)


def gamma_g_sp_prime(state: StateLike) -> int:
    """Staller-start value when Staller holds a one-shot pass."""
    return solve(state, _CFG_S_SP)


def gamma_g_dp(state: StateLike) -> int:
    """Dominator-start value when Dominator holds a one-shot pass."""
    return solve(state, _CFG_D_DP)


def gamma_g_dp_prime(state: StateLike) -> int:
    """Staller-start value when Dominator holds a one-shot pass."""
    return solve(state, _CFG_S_DP)


def closed_form_path_value(kind: PathKind, n: int, first: Turn = Turn.DOMINATOR) -> int:
    """Known exact value of an end-dominated path component with n open vertices.

    The value is the same for both end patterns, so `kind` only documents
    which component the caller means. Dominator-start: ceil(n/2), except one
    less when n = 3 (mod 4). Staller-start: ceil(n/2), except one more when
    n = 2 (mod 4).
    """
    if not isinstance(kind, PathKind):
        raise TypeError("kind must be a PathKind")
    if n < 0:
        raise ValueError("component size must be non-negative")
    half_up = (n + 1) // 2
    if first is Turn.DOMINATOR:
        return half_up - 1 if n % 4 == 3 else half_up
    return half_up + 1 if n % 4 == 2 else half_up
