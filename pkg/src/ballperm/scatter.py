"""Straight-line scattering diagrams compiled into rapidity circuits.

Labels ride lines. Every crossing of two lines becomes a rapidity gate at the
current adjacency index of the pair, acting on positions (side="right").
Postselected gadgets build arbitrary partial swaps out of collisions plus
demolition measurements of ancilla particles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .perm import Perm
from .state import (
    BallState,
    Circuit,
    Demolition,
    Gate,
    PartialSwap,
    Rapidity,
    branches,
    circuit_matrix,
    init_state,
)

TIE_TOL = 1e-9
TRANSMIT_RAPIDITY = 10.0


@dataclass(frozen=True)
class ScatterConfig:
    positions: tuple[float, ...]
    velocities: tuple[float, ...]
    c: float = 1.0

    def __post_init__(self) -> None:
        pos = tuple(float(x) for x in self.positions)
        vel = tuple(float(v) for v in self.velocities)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "velocities", vel)
        if not pos:
            raise ValueError("need at least one particle")
        if len(pos) != len(vel):
            raise ValueError("positions and velocities differ in length")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")
        if self.c <= 0:
            raise ValueError("interaction strength c must be positive")

    @property
    def n(self) -> int:
        return len(self.positions)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> ScatterConfig:
        return cls(tuple(obj["positions"]), tuple(obj["velocities"]), float(obj.get("c", 1.0)))

    def to_json(self) -> dict[str, Any]:
        return {"positions": list(self.positions), "velocities": list(self.velocities), "c": self.c}


@dataclass(frozen=True)
class CollisionEvent:
    time: float
    pos: int
    left: int
    right: int
    rapidity: float


@dataclass(frozen=True)
class CompiledScattering:
    circuit: Circuit
    events: tuple[CollisionEvent, ...]
    signature: Perm


def collision_events(cfg: ScatterConfig) -> list[CollisionEvent]:
    n = cfg.n
    p, v = cfg.positions, cfg.velocities
    raw = []
    for i in range(n):
        for j in range(i + 1, n):
            if v[i] > v[j]:
                raw.append(((p[j] - p[i]) / (v[i] - v[j]), i + 1, j + 1))
    raw.sort()
    for (t1, *_), (t2, *_) in zip(raw, raw[1:]):
        if t2 - t1 < TIE_TOL:
            raise ValueError(f"simultaneous collisions near t={t1:.12g}")
    order = list(range(1, n + 1))
    events = []
    for t, a, b in raw:
        k = order.index(a)
        if order[k + 1] != b:
            raise ValueError("lines are not adjacent at their crossing")
        order[k], order[k + 1] = b, a
        events.append(CollisionEvent(t, k + 1, a, b, v[a - 1] - v[b - 1]))
    return events


def compile_trajectories(cfg: ScatterConfig) -> CompiledScattering:
    events = collision_events(cfg)
    order = list(range(1, cfg.n + 1))
    for e in events:
        order[e.pos - 1], order[e.pos] = order[e.pos], order[e.pos - 1]
    gates = tuple(Rapidity(e.rapidity, e.pos, "right") for e in events)
    return CompiledScattering(Circuit(cfg.n, gates), tuple(events), tuple(order))


def _r_matrix(z: float, k: int, side: str = "left") -> np.ndarray:
    return circuit_matrix(Circuit(3, (Rapidity(z, k, side),)))


def ybe_residual_general(
    lhs: tuple[float, float, float], rhs: tuple[float, float, float], side: str = "left"
) -> float:
    """||R(l1,1)R(l2,2)R(l3,1) - R(r1,2)R(r2,1)R(r3,2)|| (operator products, spectral norm)."""
    a = _r_matrix(lhs[0], 1, side) @ _r_matrix(lhs[1], 2, side) @ _r_matrix(lhs[2], 1, side)
    b = _r_matrix(rhs[0], 2, side) @ _r_matrix(rhs[1], 1, side) @ _r_matrix(rhs[2], 2, side)
    return float(np.linalg.norm(a - b, 2))


def ybe_residual(x: float, y: float, side: str = "left") -> float:
    """Residual of R(x,1)R(x+y,2)R(y,1) = R(y,2)R(x+y,1)R(x,2)."""
    return ybe_residual_general((x, x + y, y), (y, x + y, x), side)


def amplitude_form_check(V: float, c: float = 1.0) -> complex:
    """Phase γ with (-ic I + V L)/(ic + V) = γ (cosθ I + i sinθ L), θ = atan(V/c).

    Raises if |γ| != 1 or the operator identity fails by more than 1e-12.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    theta = math.atan2(V, c)
    gamma = -1j * math.hypot(c, V) / (1j * c + V)
    lswap = np.array([[0, 1], [1, 0]], dtype=complex)
    lhs = (-1j * c * np.eye(2) + V * lswap) / (1j * c + V)
    rhs = gamma * (math.cos(theta) * np.eye(2) + 1j * math.sin(theta) * lswap)
    if abs(abs(gamma) - 1) > 1e-12 or np.max(np.abs(lhs - rhs)) > 1e-12:
        raise ArithmeticError("scattering amplitudes do not match the rapidity gate")
    return complex(gamma)


def scattering_amplitudes(V: float, c: float = 1.0) -> tuple[complex, complex]:
    """(reflection, transmission) amplitudes -ic/(ic+V) and V/(ic+V)."""
    return -1j * c / (1j * c + V), V / (1j * c + V)


def signature_invariance_check(cfg1: ScatterConfig, cfg2: ScatterConfig, atol: float = 1e-12) -> bool:
    if cfg1.velocities != cfg2.velocities:
        raise ValueError("configs must share the same velocities")
    a, b = compile_trajectories(cfg1), compile_trajectories(cfg2)
    if a.signature != b.signature:
        raise ValueError("configs have different permutation signatures")
    if cfg1.n > 6:
        raise ValueError("matrix comparison limited to n <= 6")
    return bool(np.max(np.abs(circuit_matrix(a.circuit) - circuit_matrix(b.circuit))) <= atol)


# -- postselected gadgets ------------------------------------------------------


@dataclass(frozen=True)
class ScatterProgram:
    """A rapidity circuit with postselected demolitions plus the word it starts from.

    Ancilla labels are larger than every data label, so once all ancillas are
    removed the register holds the data labels unchanged.
    """

    circuit: Circuit
    initial_word: Perm
    n_data: int
    theta: tuple[float, ...] = field(default_factory=tuple)
    success_probability: float = 1.0

    def initial_state(self) -> BallState:
        return init_state(self.circuit.n, self.initial_word)


def _bounce_rapidity(z1: float, z2: float) -> float:
    # ancilla velocity ±z2/2 meeting a data particle moving at ∓z1/2
    return (z1 + z2) / 2


def compile_x_gadget(z1: float, z2: float, bounce: float | None = None) -> ScatterProgram:
    """Four-particle gadget: data labels 1,2 between ancillas 3 (left) and 4 (right).

    The data pair collides with rapidity z1, each data particle bounces off its
    ancilla, and the pair collides again with rapidity z2. Keeping only runs in
    which both ancillas are detected where they started leaves
    X(atan z1 + atan z2) on the data.
    """
    if not (math.isfinite(z1) and math.isfinite(z2)):
        raise ValueError("rapidities must be finite")
    r = _bounce_rapidity(z1, z2) if bounce is None else bounce
    gates: tuple[Gate, ...] = (
        Rapidity(z1, 2, "right"),
        Rapidity(r, 1, "right"),
        Rapidity(r, 3, "right"),
        Rapidity(z2, 2, "right"),
        Demolition(1, postselect=3),
        Demolition(3, postselect=3),
    )
    theta = math.atan(z1) + math.atan(z2)
    success = 1 / (1 + r * r) ** 2
    return ScatterProgram(Circuit(4, gates), (3, 1, 2, 4), 2, (theta,), success)


def effective_angle(z1: float, z2: float) -> float:
    return math.atan(z1) + math.atan(z2)


def _reduce_angle(theta: float) -> float:
    """Representative in (-π, π]; X(θ + 2π) = X(θ)."""
    t = math.remainder(theta, 2 * math.pi)
    if t <= -math.pi:
        t += 2 * math.pi
    return t


def compile_x_circuit_to_scattering(
    C: Circuit, transmit: float = TRANSMIT_RAPIDITY
) -> ScatterProgram:
    """Stationary layout: one left and one right ancilla per gate.

    Register: [a_m .. a_1 | data 1..n | b_1 .. b_m]. Gate g first collides its
    data pair (rapidity z = tan(θ/2)), then a_g travels in from the left by
    transmission, bounces off the pair's left particle and is detected in
    place; b_g does the same from the right; finally the pair collides again
    with rapidity z. Left-side gates acting on |id> are replayed in reverse as
    position gates, which gives the same output state.
    """
    gates = []
    sides = set()
    for g in C.gates:
        if isinstance(g, Rapidity):
            g = g.as_partial_swap()
        if not isinstance(g, PartialSwap):
            raise ValueError("only partial-swap gates can be compiled to scattering")
        if abs(g.i - g.j) != 1:
            raise ValueError("only adjacent partial swaps can be compiled")
        sides.add(g.side)
        gates.append((_reduce_angle(g.theta), min(g.i, g.j)))
    if len(sides) > 1:
        raise ValueError("mixed left/right circuits are not supported")
    if sides == {"left"}:
        gates.reverse()

    n, m = C.n, len(gates)
    if m == 0:
        return ScatterProgram(Circuit(n, ()), tuple(range(1, n + 1)), n, (), 1.0)

    left = [n + g for g in range(m, 0, -1)]  # a_m .. a_1
    right = [n + m + g for g in range(1, m + 1)]  # b_1 .. b_m
    word = tuple(left) + tuple(range(1, n + 1)) + tuple(right)
    labels = {("a", g): n + g for g in range(1, m + 1)}
    labels.update({("b", g): n + m + g for g in range(1, m + 1)})

    def demolish(key: tuple[str, int]) -> int:
        gone = labels.pop(key)
        for other, lab in labels.items():
            if lab > gone:
                labels[other] = lab - 1
        return gone

    out: list[Gate] = []
    thetas = []
    success = 1.0
    t_amp = transmit * transmit / (1 + transmit * transmit)
    n_left = m
    for g, (theta, k) in enumerate(gates, start=1):
        if abs(theta - math.pi) < 1e-12:
            raise ValueError("a full swap with angle pi cannot be split into two finite rapidities")
        z = math.tan(theta / 2)
        r = _bounce_rapidity(z, z)
        thetas.append(theta)
        base = n_left  # data position j sits at base + j
        out.append(Rapidity(z, base + k, "right"))
        # left ancilla a_g at position base travels to base + k - 1
        for j in range(k - 1):
            out.append(Rapidity(transmit, base + j, "right"))
            success *= t_amp
        out.append(Rapidity(r, base + k - 1, "right"))
        out.append(Demolition(base + k - 1, postselect=labels[("a", g)]))
        demolish(("a", g))
        n_left -= 1
        base = n_left
        # right ancilla b_g at base + n + 1 travels to base + k + 2
        for j in range(n, k + 1, -1):
            out.append(Rapidity(transmit, base + j, "right"))
            success *= t_amp
        out.append(Rapidity(r, base + k + 1, "right"))
        out.append(Demolition(base + k + 2, postselect=labels[("b", g)]))
        demolish(("b", g))
        out.append(Rapidity(z, base + k, "right"))
        success *= 1 / (1 + r * r) ** 2
    return ScatterProgram(Circuit(n + 2 * m, tuple(out)), word, n, tuple(thetas), success)


def program_distribution(prog: ScatterProgram) -> tuple[dict[Perm, float], float]:
    """Conditional data distribution and the simulated success probability."""
    bs = branches(prog.circuit, prog.initial_state())
    total = sum(b.weight for b in bs)
    if total <= 0:
        raise ValueError("postselection never succeeds")
    dist: dict[Perm, float] = {}
    for b in bs:
        for w, a in b.state.amps.items():
            dist[w] = dist.get(w, 0.0) + b.weight * abs(a) ** 2 / total
    return dist, total


def gadget_data_map(prog: ScatterProgram) -> np.ndarray:
    """Postselected (unnormalized) 2×2 map of a four-particle gadget on its data words."""
    if prog.circuit.n != 4 or prog.n_data != 2:
        raise ValueError("expects a four-particle gadget")
    cols = []
    for data in ((1, 2), (2, 1)):
        word = (3,) + data + (4,)
        bs = branches(prog.circuit, init_state(4, word))
        col = np.zeros(2, dtype=complex)
        for b in bs:
            scale = math.sqrt(b.weight)
            col[0] += scale * b.state.amplitude((1, 2))
            col[1] += scale * b.state.amplitude((2, 1))
        cols.append(col)
    return np.array(cols).T


def gadget_fidelity(prog: ScatterProgram) -> float:
    """|Tr(X(θ)^† M)| / (2 ||M||_F/√2): 1 when M is X(θ) up to a scalar."""
    m = gadget_data_map(prog)
    theta = prog.theta[0]
    x = np.array([[math.cos(theta), 1j * math.sin(theta)], [1j * math.sin(theta), math.cos(theta)]])
    nrm = np.linalg.norm(m)
    if nrm == 0:
        return 0.0
    return float(abs(np.vdot(x, m)) / (np.linalg.norm(x) * nrm))

