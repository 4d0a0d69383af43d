"""Compiled hot path for bulk tree scanning.

The census at order 16-17 runs millions of exact game solves, so the scan
uses an iterative minimax compiled with numba over a flat int16 value table
indexed by (dominated-mask << 1) | mover. Semantics are identical to the
pure solver (no pass variants are needed while scanning; criticality only
involves plain Dominator/Staller-start values), and the test suite pins the
kernel against the reference solver tree-by-tree. When numba is missing the
same interface falls back to the pure solver.
"""

from __future__ import annotations

from .graphs import Graph, VertexSet
from .solver import GameConfig, GameSolver, Turn

try:  # pragma: no cover - exercised implicitly by which path the tests hit
    import numpy as np
    from numba import njit

    HAVE_KERNEL = True
except Exception:  # pragma: no cover
    np = None
    HAVE_KERNEL = False

#: largest order the flat table layout supports (2^(n+1) int16 entries)
MAX_KERNEL_ORDER = 24

_UNSET = -1
_BIG = 32000

if HAVE_KERNEL:

    @njit(cache=True)
    def _value(nbhd, full, memo, dom0, mover0):
        """Moves left under optimal play from (dom0, mover0); fills `memo`."""
        if dom0 == full:
            return 0
        key0 = (dom0 << 1) | mover0
        if memo[key0] >= 0:
            return memo[key0]
        n = nbhd.shape[0]
        sdom = np.empty(n + 2, np.int64)
        smover = np.empty(n + 2, np.int8)
        snext = np.empty(n + 2, np.int16)
        sbest = np.empty(n + 2, np.int16)
        sp = 0
        sdom[0] = dom0
        smover[0] = mover0
        snext[0] = 0
        sbest[0] = _BIG if mover0 == 0 else -1
        while sp >= 0:
            dom = sdom[sp]
            mover = smover[sp]
            v = snext[sp]
            pushed = False
            while v < n:
                nd = dom | nbhd[v]
                if nd != dom:
                    if nd == full:
                        child = 0
                    else:
                        child = memo[(nd << 1) | (1 - mover)]
                    if child >= 0:
                        val = child + 1
                        if mover == 0:
                            if val < sbest[sp]:
                                sbest[sp] = val
                        else:
                            if val > sbest[sp]:
                                sbest[sp] = val
                    else:
                        # unsolved child: suspend this frame at v, descend
                        snext[sp] = v
                        sp += 1
                        sdom[sp] = nd
                        smover[sp] = 1 - mover
                        snext[sp] = 0
                        sbest[sp] = _BIG if mover == 1 else -1
                        pushed = True
                        break
                v += 1
            if pushed:
                continue
            memo[(dom << 1) | mover] = sbest[sp]
            sp -= 1
        return memo[key0]

    @njit(cache=True)
    def _first_refuter(nbhd, full, memo, base, trial, floor):
        """First vertex v (in trial order) with value(G|v) = base, else -1.

        Returns -2 - v when the probed value leaves [floor, base]: above
        base is impossible (pre-dominating a vertex cannot lengthen the
        game), below floor breaks the caller's drop bound."""
        for i in range(trial.shape[0]):
            v = trial[i]
            val = _value(nbhd, full, memo, 1 << v, 0)
            if val > base or val < floor:
                return -2 - v
            if val == base:
                return v
        return -1


class FastScanner:
    """Reusable criticality prober; one flat value table, reset per graph."""

    def __init__(self, max_order: int):
        if not 1 <= max_order <= MAX_KERNEL_ORDER:
            raise ValueError(f"fast path supports orders 1..{MAX_KERNEL_ORDER}")
        self.max_order = max_order
        self.kernel = HAVE_KERNEL
        if HAVE_KERNEL:
            self._memo = np.full(1 << (max_order + 1), _UNSET, dtype=np.int16)

    def criticality(
        self,
        bits: list[int],
        trial_order: list[int] | None = None,
        *,
        max_drop: int = 2,
    ):
        """(gamma_g, refuting vertex or None) for the graph with closed
        neighborhoods `bits`; a refuter v has value(G|v) = gamma_g.

        Every probed value is checked against gamma_g - max_drop on the
        fly; a value outside [gamma_g - max_drop, gamma_g] raises. The
        default 2 is the bound that holds on every graph; scans over
        forests pass 1, so each probe doubles as an invariant check."""
        n = len(bits)
        if n > self.max_order:
            raise ValueError(f"order {n} above this scanner's cap {self.max_order}")
        order = trial_order if trial_order is not None else range(n)
        if not self.kernel:
            return _criticality_pure(bits, order, max_drop)
        memo = self._memo[: 1 << (n + 1)]
        memo.fill(_UNSET)
        nbhd = np.array(bits, dtype=np.int64)
        full = (1 << n) - 1
        base = int(_value(nbhd, full, memo, 0, 0))
        trial = np.fromiter(order, dtype=np.int64, count=n)
        refuter = int(_first_refuter(nbhd, full, memo, base, trial, base - max_drop))
        if refuter < -1:
            raise RuntimeError(_drop_message(-2 - refuter, base, max_drop))
        return base, (None if refuter < 0 else refuter)

    def game_values(self, bits: list[int]):
        """(gamma_g, gamma_g_prime) sharing one table; used by kernel tests."""
        n = len(bits)
        if not self.kernel:
            g = _graph_from_bits(bits)
            solver = GameSolver(g)
            return (
                solver.value(VertexSet(0), GameConfig(Turn.DOMINATOR)),
                solver.value(VertexSet(0), GameConfig(Turn.STALLER)),
            )
        memo = self._memo[: 1 << (n + 1)]
        memo.fill(_UNSET)
        nbhd = np.array(bits, dtype=np.int64)
        full = (1 << n) - 1
        return (
            int(_value(nbhd, full, memo, 0, 0)),
            int(_value(nbhd, full, memo, 0, 1)),
        )

    def warmup(self):
        """Force kernel compilation outside timed/parallel sections."""
        self.criticality([1] if self.max_order < 2 else [1 | 2, 1 | 2])
        return self


def _graph_from_bits(bits: list[int]) -> Graph:
    return Graph(len(bits), (VertexSet(b) for b in bits))


def _drop_message(v: int, base: int, max_drop: int) -> str:
    return (
        f"pre-dominating vertex {v} moved the game value outside "
        f"[{base - max_drop}, {base}] (gamma_g = {base}, allowed drop "
        f"{max_drop}); solver fault or a graph outside the caller's class"
    )


def _criticality_pure(bits: list[int], order, max_drop: int = 2) -> tuple[int, int | None]:
    """Reference implementation of the probe on the pure solver."""
    g = _graph_from_bits(bits)
    solver = GameSolver(g)
    cfg = GameConfig(Turn.DOMINATOR)
    base = solver.value(VertexSet(0), cfg)
    for v in order:
        val = solver.value(VertexSet(1 << v), cfg)
        if val > base or val < base - max_drop:
            raise RuntimeError(_drop_message(v, base, max_drop))
        if val == base:
            return base, v
    return base, None
