"""Classical ball permuting: deterministic, randomized and nondeterministic oracles.

A swap (i, j) always exchanges the contents of positions i and j.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .perm import Perm, compose, identity, swap_positions, validate

ENUMERATE_LIMIT = 16
SWEEP_MAX_N = 8
BRUTE_MAX_OPTIONAL = 25


@dataclass(frozen=True)
class SwapProgram:
    n: int
    swaps: tuple[tuple[int, int], ...]
    probs: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        swaps = tuple((int(i), int(j)) for i, j in self.swaps)
        object.__setattr__(self, "swaps", swaps)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        for i, j in swaps:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"swap ({i}, {j}) must satisfy 1 <= i < j <= {self.n}")
        if self.probs is not None:
            probs = tuple(float(p) for p in self.probs)
            object.__setattr__(self, "probs", probs)
            if len(probs) != len(swaps):
                raise ValueError("probs and swaps differ in length")
            if any(not 0 <= p <= 1 for p in probs):
                raise ValueError("probabilities must lie in [0, 1]")

    @property
    def adjacent(self) -> bool:
        return all(j == i + 1 for i, j in self.swaps)

    def require_probs(self) -> tuple[float, ...]:
        if self.probs is None:
            raise ValueError("program has no probabilities")
        return self.probs

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> SwapProgram:
        probs = obj.get("probs")
        return cls(
            int(obj["n"]),
            tuple((int(a), int(b)) for a, b in obj.get("swaps", [])),
            None if probs is None else tuple(float(p) for p in probs),
        )

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"n": self.n, "swaps": [list(s) for s in self.swaps]}
        if self.probs is not None:
            out["probs"] = list(self.probs)
        return out


def _run(n: int, swaps: Sequence[tuple[int, int]]) -> Perm:
    w = list(range(1, n + 1))
    for i, j in swaps:
        w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
    return tuple(w)


def dball_run(p: SwapProgram) -> Perm:
    """Apply every swap in order to (1, ..., n)."""
    return _run(p.n, p.swaps)


def adjacent_expansion(p: SwapProgram) -> SwapProgram:
    """(i, j) becomes (i)(i+1)...(j-1)...(i+1)(i); only the middle swap keeps p."""
    swaps: list[tuple[int, int]] = []
    probs: list[float] = []
    given = p.probs if p.probs is not None else (1.0,) * len(p.swaps)
    for (i, j), q in zip(p.swaps, given):
        path = [(k, k + 1) for k in range(i, j - 1)]
        swaps += path + [(j - 1, j)] + path[::-1]
        probs += [1.0] * len(path) + [q] + [1.0] * len(path)
    return SwapProgram(p.n, tuple(swaps), tuple(probs) if p.probs is not None else None)


def rball_sample(p: SwapProgram, rng: np.random.Generator) -> Perm:
    probs = p.require_probs()
    coins = rng.random(len(p.swaps)) < np.array(probs)
    w = list(range(1, p.n + 1))
    for (i, j), take in zip(p.swaps, coins):
        if take:
            w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
    return tuple(w)


def rball_sample_many(p: SwapProgram, shots: int, rng: np.random.Generator) -> list[Perm]:
    return [rball_sample(p, rng) for _ in range(shots)]


def rball_exact_dist(p: SwapProgram) -> dict[Perm, float]:
    """Exact output law by propagating a distribution over S_n swap by swap."""
    probs = p.require_probs()
    if p.n > SWEEP_MAX_N and len(p.swaps) > 20:
        raise ValueError("exact distribution needs m <= 20 or n <= 8")
    dist: dict[Perm, float] = {identity(p.n): 1.0}
    for (i, j), q in zip(p.swaps, probs):
        if q == 0.0:
            continue
        nxt: dict[Perm, float] = {}
        for w, pw in dist.items():
            if q < 1.0:
                nxt[w] = nxt.get(w, 0.0) + pw * (1 - q)
            v = swap_positions(w, i, j)
            nxt[v] = nxt.get(v, 0.0) + pw * q
        dist = nxt
    return dist


def _stochastic(p: float, k: int) -> np.ndarray:
    """(1-p) I + p L_(k,k+1) on the 6 permutations of S_3 in rank order."""
    perms = list(itertools.permutations((1, 2, 3)))
    index = {w: r for r, w in enumerate(perms)}
    m = (1 - p) * np.eye(6)
    for col, w in enumerate(perms):
        m[index[swap_positions(w, k, k + 1)], col] += p
    return m


def yb_probabilities(x: float, y: float) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Swap probabilities (p1, p2, p3) for R_1 R_2 R_1 and (p1', p2', p3') for R_2 R_1 R_2."""
    if x < 0 or y < 0:
        raise ValueError("x and y must be nonnegative")
    lhs = (x / (1 + x), (x + y) / (1 + x + y), y / (1 + y))
    rhs = (y / (1 + y), (x + y) / (1 + x + y), x / (1 + x))
    return lhs, rhs


def classical_yb_check(x: float, y: float) -> float:
    """max |R_1(p1)R_2(p2)R_1(p3) - R_2(p1')R_1(p2')R_2(p3')| over matrix entries."""
    (a1, a2, a3), (b1, b2, b3) = yb_probabilities(x, y)
    lhs = _stochastic(a1, 1) @ _stochastic(a2, 2) @ _stochastic(a3, 1)
    rhs = _stochastic(b1, 2) @ _stochastic(b2, 1) @ _stochastic(b3, 2)
    return float(np.max(np.abs(lhs - rhs)))


# -- nondeterministic acceptance --------------------------------------------------


@dataclass(frozen=True)
class Decision:
    """Outcome of a Ball decision. ``witness`` lists the indices of applied optional swaps."""

    accepted: bool
    witness: tuple[int, ...] | None = None
    method: str = ""

    def __bool__(self) -> bool:
        return self.accepted


def _split(p: SwapProgram) -> tuple[list[int], list[int]]:
    probs = p.require_probs()
    optional = [k for k, q in enumerate(probs) if 0 < q < 1]
    forced = [k for k, q in enumerate(probs) if q == 1]
    return optional, forced


def _apply_indices(p: SwapProgram, chosen: set[int]) -> Perm:
    probs = p.require_probs()
    swaps = [s for k, s in enumerate(p.swaps) if probs[k] == 1 or k in chosen]
    return _run(p.n, swaps)


def ball_decide_bruteforce(p: SwapProgram, target: Sequence[int]) -> Decision:
    """Does some choice of optional swaps (p = 1 always applied, p = 0 never) give target?

    Up to 16 optional swaps every subset is tried; beyond that (n <= 8) a
    sweep over reachable permutations, remembering one witness each, is used.
    """
    target = validate(target)
    if len(target) != p.n:
        raise ValueError("target size does not match program")
    optional, _ = _split(p)
    if len(optional) <= ENUMERATE_LIMIT:
        for r in range(len(optional) + 1):
            for subset in itertools.combinations(optional, r):
                if _apply_indices(p, set(subset)) == target:
                    return Decision(True, subset, "enumerate")
        return Decision(False, None, "enumerate")
    if p.n > SWEEP_MAX_N:
        raise ValueError(f"{len(optional)} optional swaps and n={p.n} exceed the brute-force bounds")
    probs = p.require_probs()
    reach: dict[Perm, tuple[int, ...]] = {identity(p.n): ()}
    for k, ((i, j), q) in enumerate(zip(p.swaps, probs)):
        if q == 0:
            continue
        nxt: dict[Perm, tuple[int, ...]] = {}
        for w, wit in reach.items():
            v = swap_positions(w, i, j)
            if q == 1:
                nxt.setdefault(v, wit)
            else:
                nxt.setdefault(w, wit)
                nxt.setdefault(v, wit + (k,))
        reach = nxt
    if target in reach:
        return Decision(True, reach[target], "sweep")
    return Decision(False, None, "sweep")


def count_accepting_subsets(p: SwapProgram, target: Sequence[int]) -> int:
    target = validate(target)
    optional, _ = _split(p)
    if len(optional) > BRUTE_MAX_OPTIONAL:
        raise ValueError("too many optional swaps to count")
    return sum(
        _apply_indices(p, set(subset)) == target
        for r in range(len(optional) + 1)
        for subset in itertools.combinations(optional, r)
    )


# -- edge-disjoint paths ---------------------------------------------------------


Node = tuple[str, int]


@dataclass(frozen=True)
class EdpInstance:
    """Wire diagram of an adjacent swap program as a planar DAG.

    Each swap is an internal node merging the two wires at its positions;
    ``sources[p-1]`` feeds position p and ``sinks[p-1]`` drains it. The sink at
    final position p carries the number target[p], and a path system routes
    source ℓ to the sink numbered ℓ.
    """

    n: int
    nodes: tuple[Node, ...]
    edges: tuple[tuple[Node, Node], ...]
    sources: tuple[Node, ...]
    sinks: tuple[Node, ...]
    sink_numbers: tuple[int, ...]
    swap_positions: tuple[int, ...] = field(default_factory=tuple)

    def out_edges(self) -> dict[Node, list[int]]:
        out: dict[Node, list[int]] = {v: [] for v in self.nodes}
        for e, (tail, _) in enumerate(self.edges):
            out[tail].append(e)
        return out

    def degrees(self) -> dict[Node, tuple[int, int]]:
        indeg = {v: 0 for v in self.nodes}
        outdeg = {v: 0 for v in self.nodes}
        for tail, head in self.edges:
            outdeg[tail] += 1
            indeg[head] += 1
        return {v: (indeg[v], outdeg[v]) for v in self.nodes}


def _require_strict_adjacent(p: SwapProgram) -> None:
    probs = p.require_probs()
    if not p.adjacent:
        raise ValueError("program must use adjacent swaps only")
    if any(not 0 < q < 1 for q in probs):
        raise ValueError("every probability must lie strictly between 0 and 1")


def build_edp_instance(p: SwapProgram, target: Sequence[int]) -> EdpInstance:
    _require_strict_adjacent(p)
    target = validate(target)
    if len(target) != p.n:
        raise ValueError("target size does not match program")
    n = p.n
    sources = tuple(("s", k) for k in range(1, n + 1))
    sinks = tuple(("t", k) for k in range(1, n + 1))
    internal = tuple(("v", k) for k in range(1, len(p.swaps) + 1))
    edges: list[tuple[Node, Node]] = []
    wire: list[Node] = list(sources)  # current tail feeding each position
    for k, (i, _) in enumerate(p.swaps, start=1):
        v = ("v", k)
        edges.append((wire[i - 1], v))
        edges.append((wire[i], v))
        wire[i - 1] = v
        wire[i] = v
    for pos in range(n):
        edges.append((wire[pos], sinks[pos]))
    # internal nodes emit their two outgoing edges in position order
    return EdpInstance(
        n,
        sources + internal + sinks,
        tuple(edges),
        sources,
        sinks,
        tuple(target),
        tuple(i for i, _ in p.swaps),
    )


def count_edp_path_systems(inst: EdpInstance) -> int:
    """Edge-disjoint path systems routing source ℓ to the sink numbered ℓ (exhaustive)."""
    out = inst.out_edges()
    sink_of = {inst.sink_numbers[pos]: inst.sinks[pos] for pos in range(inst.n)}
    used = [False] * len(inst.edges)

    def paths(node: Node, goal: Node) -> Any:
        if node == goal:
            yield []
            return
        for e in out[node]:
            if used[e]:
                continue
            used[e] = True
            for rest in paths(inst.edges[e][1], goal):
                yield [e] + rest
            used[e] = False

    def route(label: int) -> int:
        if label > inst.n:
            return 1
        total = 0
        for _ in paths(inst.sources[label - 1], sink_of[label]):
            total += route(label + 1)
        return total

    return route(1)


def demazure_product(n: int, positions: Sequence[int]) -> Perm:
    """Largest word reachable by applying a subword of the adjacent swaps."""
    w = list(range(1, n + 1))
    for k in positions:
        if w[k - 1] < w[k]:
            w[k - 1], w[k] = w[k], w[k - 1]
    return tuple(w)


def bruhat_leq(u: Sequence[int], w: Sequence[int]) -> bool:
    """u <= w in Bruhat order (rank-matrix criterion)."""
    n = len(u)
    if len(w) != n:
        raise ValueError("size mismatch")
    for j in range(1, n + 1):
        cu = cw = 0
        for i in range(n):
            cu += u[i] >= j
            cw += w[i] >= j
            if cu > cw:
                return False
    return True


def ball_adj_star_decide(p: SwapProgram, target: Sequence[int]) -> Decision:
    """Polynomial decision for adjacent programs whose swaps are all optional.

    Sweeping the EDP nodes in topological order and crossing the two incoming
    routes whenever that creates an inversion yields the maximal reachable
    word D. The reachable set is exactly the Bruhat interval [e, D], so the
    answer is ``target <= D``. A witness is peeled off from the last swap
    backwards, testing the shorter prefix's interval each time.
    """
    inst = build_edp_instance(p, target)
    target = validate(target)
    n = inst.n
    prefix_tops = [identity(n)]
    routes = list(range(1, n + 1))  # label currently travelling on each position's wire
    for k in inst.swap_positions:
        if routes[k - 1] < routes[k]:
            routes[k - 1], routes[k] = routes[k], routes[k - 1]
        prefix_tops.append(tuple(routes))
    if not bruhat_leq(target, prefix_tops[-1]):
        return Decision(False, None, "bruhat")
    chosen = []
    u = target
    for idx in range(len(inst.swap_positions) - 1, -1, -1):
        if bruhat_leq(u, prefix_tops[idx]):
            continue
        u = swap_positions(u, inst.swap_positions[idx], inst.swap_positions[idx] + 1)
        chosen.append(idx)
    if u != identity(n):
        raise AssertionError("witness reconstruction failed")
    return Decision(True, tuple(sorted(chosen)), "bruhat")


# -- WPPP -------------------------------------------------------------------------


def _check_sets(sets: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    out = []
    for s in sets:
        t = tuple(sorted(int(x) for x in s))
        if len(set(t)) != len(t) or any(not 1 <= x <= n for x in t):
            raise ValueError(f"bad subset {s} of [1..{n}]")
        out.append(t)
    return out


def wppp_reduce(sets: Sequence[Sequence[int]], n: int) -> SwapProgram:
    """Each set S contributes |S| copies of the list of all transpositions in S, p = 1/2."""
    swaps: list[tuple[int, int]] = []
    for s in _check_sets(sets, n):
        pairs = list(itertools.combinations(s, 2))
        swaps += pairs * len(s)
    return SwapProgram(n, tuple(swaps), (0.5,) * len(swaps))


def wppp_brute(sets: Sequence[Sequence[int]], target: Sequence[int], n: int) -> bool:
    """Is target = π_1∘π_2∘…∘π_m with each π_j permuting only S_j?"""
    target = validate(target)
    if len(target) != n:
        raise ValueError("target size does not match n")
    checked = _check_sets(sets, n)
    if any(len(s) > 6 for s in checked):
        raise ValueError("brute force limited to |S_j| <= 6")
    reach = {identity(n)}
    for s in checked:
        local = []
        for images in itertools.permutations(s):
            pi = list(range(1, n + 1))
            for a, b in zip(s, images):
                pi[a - 1] = b
            local.append(tuple(pi))
        reach = {compose(w, pi) for w in reach for pi in local}
    return target in reach
