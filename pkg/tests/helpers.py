"""Random circuit and program generators shared by the test modules."""

from __future__ import annotations

import math

import numpy as np

from ballperm.classical import SwapProgram
from ballperm.state import Circuit, Gate, LabelSwap, PartialSwap, Rapidity


def random_partial_swap(rng: np.random.Generator, n: int, side: str, adjacent: bool = True) -> PartialSwap:
    theta = float(rng.uniform(-math.pi, math.pi))
    if adjacent:
        i = int(rng.integers(1, n))
        return PartialSwap(theta, i, i + 1, side)
    i, j = sorted(int(x) for x in rng.choice(np.arange(1, n + 1), size=2, replace=False))
    return PartialSwap(theta, i, j, side)


def random_label_swap(rng: np.random.Generator, n: int) -> LabelSwap:
    pos = int(rng.integers(1, n))
    pairs = {}
    for _ in range(int(rng.integers(1, 4))):
        a, b = sorted(int(x) for x in rng.choice(np.arange(1, n + 1), size=2, replace=False))
        pairs[(a, b)] = float(rng.uniform(-math.pi, math.pi))
    return LabelSwap.from_pairs(pairs, pos)


def random_circuit(
    rng: np.random.Generator,
    n: int,
    m: int,
    side: str | None = "left",
    adjacent: bool = True,
    label_swaps: bool = False,
) -> Circuit:
    """m random gates on n labels. side=None mixes left and right gates."""
    gates: list[Gate] = []
    for _ in range(m):
        if label_swaps and rng.random() < 0.25:
            gates.append(random_label_swap(rng, n))
            continue
        s = side if side is not None else str(rng.choice(["left", "right"]))
        gates.append(random_partial_swap(rng, n, s, adjacent))
    return Circuit(n, tuple(gates))


def random_rapidity_circuit(rng: np.random.Generator, n: int, m: int, side: str = "left") -> Circuit:
    gates = tuple(Rapidity(float(rng.normal(scale=2)), int(rng.integers(1, n)), side) for _ in range(m))
    return Circuit(n, gates)


def random_adjacent_program(rng: np.random.Generator, n: int, m: int) -> SwapProgram:
    swaps = tuple((k, k + 1) for k in (int(x) for x in rng.integers(1, n, size=m)))
    probs = tuple(float(p) for p in rng.uniform(0.05, 0.95, size=m))
    return SwapProgram(n, swaps, probs)


def tvd(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
