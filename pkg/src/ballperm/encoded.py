"""Qubits simulated inside the permutation space.

Two encodings live here:

* Hamming embedding: a weight-k qubit string becomes the uniform
  superposition of words whose "one" labels occupy its 1-positions. Position
  swaps then act exactly like exchange interactions.
* Label pairs: qubit q owns labels (2q-1, 2q) at positions (2q-1, 2q), with
  |0> = |ab> and |1> = i|ba>. Position partial swaps give real rotations and
  label-dependent swaps give a CNOT.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from .numfmt import parse_angle
from .perm import Perm
from .state import BallState, Circuit, LabelSwap, PartialSwap

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class QubitState:
    n: int
    amps: dict[str, complex]

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amps.values()))

    def amplitude(self, bits: str) -> complex:
        return self.amps.get(bits, 0j)

    def to_vector(self) -> np.ndarray:
        v = np.zeros(2**self.n, dtype=complex)
        for bits, a in self.amps.items():
            v[int(bits, 2)] += a
        return v

    @classmethod
    def from_vector(cls, n: int, v: np.ndarray) -> QubitState:
        return cls(n, {format(k, f"0{n}b"): complex(v[k]) for k in np.flatnonzero(v)})


def qubit_state(amps: Mapping[str, complex]) -> QubitState:
    """Normalized state from bitstring weights."""
    if not amps:
        raise ValueError("empty state")
    lengths = {len(b) for b in amps}
    if len(lengths) != 1 or any(set(b) - {"0", "1"} for b in amps):
        raise ValueError("bitstrings must be 0/1 strings of one length")
    nrm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    if nrm == 0:
        raise ValueError("zero vector")
    return QubitState(lengths.pop(), {b: complex(a) / nrm for b, a in amps.items()})


def apply_exchange(s: QubitState, theta: float, i: int, j: int) -> QubitState:
    """T(θ,i,j) = cosθ I + i sinθ E, with E exchanging bits i and j."""
    if i == j or not (1 <= i <= s.n and 1 <= j <= s.n):
        raise IndexError(f"bad qubit pair ({i}, {j}) for n={s.n}")
    c, sn = math.cos(theta), math.sin(theta)
    out: dict[str, complex] = defaultdict(complex)
    for bits, a in s.amps.items():
        b = list(bits)
        b[i - 1], b[j - 1] = b[j - 1], b[i - 1]
        out[bits] += c * a
        out["".join(b)] += 1j * sn * a
    return QubitState(s.n, dict(out))


def weight(bits: str) -> int:
    return bits.count("1")


def _one_labels(n: int, k: int, one_labels: str) -> set[int]:
    if one_labels == "top":
        return set(range(n - k + 1, n + 1))
    if one_labels == "bottom":
        return set(range(1, k + 1))
    raise ValueError(f"one_labels must be 'top' or 'bottom', got {one_labels!r}")


def embed_hamming(s: QubitState, one_labels: str = "top") -> BallState:
    """Uniform superposition of words whose one-labels sit on the 1-bits.

    ``one_labels="top"`` uses labels n-k+1..n for the ones, ``"bottom"`` uses 1..k.
    """
    weights = {weight(b) for b in s.amps}
    if len(weights) != 1:
        raise ValueError("embedding needs a state of fixed Hamming weight")
    k = weights.pop()
    n = s.n
    ones = sorted(_one_labels(n, k, one_labels))
    zeros = sorted(set(range(1, n + 1)) - set(ones))
    scale = 1 / math.sqrt(math.factorial(k) * math.factorial(n - k))
    out: dict[Perm, complex] = defaultdict(complex)
    for bits, a in s.amps.items():
        one_pos = [p for p, b in enumerate(bits) if b == "1"]
        zero_pos = [p for p, b in enumerate(bits) if b == "0"]
        for po in itertools.permutations(ones):
            for pz in itertools.permutations(zeros):
                w = [0] * n
                for p, lab in zip(one_pos, po):
                    w[p] = lab
                for p, lab in zip(zero_pos, pz):
                    w[p] = lab
                out[tuple(w)] += scale * a
    return BallState(n, dict(out))


def decode_sample(sigma: Sequence[int], k: int, one_labels: str = "top") -> str:
    """Bit p is 1 iff the label at position p is a one-label."""
    n = len(sigma)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    ones = _one_labels(n, k, one_labels)
    return "".join("1" if x in ones else "0" for x in sigma)


def decode_distribution(dist: Mapping[Perm, float], k: int, one_labels: str = "top") -> dict[str, float]:
    out: dict[str, float] = defaultdict(float)
    for w, p in dist.items():
        out[decode_sample(w, k, one_labels)] += p
    return dict(out)


def exchange_circuit_to_ball(n: int, gates: Sequence[tuple[float, int, int]]) -> Circuit:
    """Position partial swaps mirroring a list of (θ, i, j) exchange gates."""
    return Circuit(n, tuple(PartialSwap(th, i, j, "right") for th, i, j in gates))


def logical_qubit_vectors() -> tuple[QubitState, QubitState]:
    """Three-spin logical pair: (|010> - |100>)/√2 and (|010> + |100> - 2|001>)/√6."""
    zero = QubitState(3, {"010": 1 / math.sqrt(2), "100": -1 / math.sqrt(2)})
    one = QubitState(3, {"010": 1 / math.sqrt(6), "100": 1 / math.sqrt(6), "001": -2 / math.sqrt(6)})
    return zero, one


def inner(a: QubitState, b: QubitState) -> complex:
    return sum((a.amplitude(k).conjugate() * v for k, v in b.amps.items()), 0j)


# -- label-pair scheme ---------------------------------------------------------


@dataclass(frozen=True)
class Rot:
    """Real rotation |0> -> cosθ|0> + sinθ|1>, |1> -> cosθ|1> - sinθ|0>."""

    theta: float
    q: int


@dataclass(frozen=True)
class Cnot:
    c: int
    t: int


QubitGate = Union[Rot, Cnot]


@dataclass(frozen=True)
class QubitCircuit:
    n: int
    gates: tuple[QubitGate, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise ValueError("need at least one qubit")
        for g in self.gates:
            qs = (g.q,) if isinstance(g, Rot) else (g.c, g.t)
            if any(not 1 <= q <= self.n for q in qs):
                raise ValueError(f"gate {g} out of range for {self.n} qubits")
            if isinstance(g, Cnot) and g.c == g.t:
                raise ValueError("control and target must differ")

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> QubitCircuit:
        gates: list[QubitGate] = []
        for g in obj.get("gates", []):
            kind = g.get("kind")
            if kind == "rot":
                gates.append(Rot(parse_angle(g["theta"]), int(g["q"])))
            elif kind == "cnot":
                gates.append(Cnot(int(g["c"]), int(g["t"])))
            else:
                raise ValueError(f"unsupported qubit gate {kind!r}: only real rotations and CNOT are encodable")
        return cls(int(obj["n"]), tuple(gates))

    def to_json(self) -> dict[str, Any]:
        gates = [
            {"kind": "rot", "theta": g.theta, "q": g.q} if isinstance(g, Rot) else {"kind": "cnot", "c": g.c, "t": g.t}
            for g in self.gates
        ]
        return {"n": self.n, "gates": gates}


def _apply_qubit_gate(v: np.ndarray, n: int, g: QubitGate) -> np.ndarray:
    t = v.reshape((2,) * n + v.shape[1:])
    if isinstance(g, Rot):
        c, s = math.cos(g.theta), math.sin(g.theta)
        ax = g.q - 1
        a0 = np.take(t, 0, axis=ax)
        a1 = np.take(t, 1, axis=ax)
        t = np.stack([c * a0 - s * a1, s * a0 + c * a1], axis=ax)
    else:
        t = t.copy()
        idx: list[Any] = [slice(None)] * t.ndim
        idx[g.c - 1] = 1
        sub = t[tuple(idx)]
        tax = g.t - 1 if g.t < g.c else g.t - 2
        t[tuple(idx)] = np.flip(sub, axis=tax)
    return t.reshape(v.shape)


def qubit_unitary(qc: QubitCircuit) -> np.ndarray:
    if qc.n > 10:
        raise ValueError("dense qubit simulation limited to n <= 10")
    m = np.eye(2**qc.n, dtype=complex)
    for g in qc.gates:
        m = _apply_qubit_gate(m, qc.n, g)
    return m


def simulate_qubits(qc: QubitCircuit, s: QubitState) -> QubitState:
    if s.n != qc.n:
        raise ValueError("size mismatch")
    v = s.to_vector()
    for g in qc.gates:
        v = _apply_qubit_gate(v, qc.n, g)
    return QubitState.from_vector(qc.n, v)


def pair_labels(q: int) -> tuple[int, int]:
    return 2 * q - 1, 2 * q


def encode_pairs(s: QubitState) -> BallState:
    """|0> = |ab>, |1> = i|ba> for every qubit's label pair."""
    out: dict[Perm, complex] = {}
    for bits, a in s.amps.items():
        w: list[int] = []
        for q, b in enumerate(bits, start=1):
            lo, hi = pair_labels(q)
            w.extend((lo, hi) if b == "0" else (hi, lo))
        out[tuple(w)] = out.get(tuple(w), 0j) + a * 1j ** weight(bits)
    return BallState(2 * s.n, out)


def decode_pairs(s: BallState) -> tuple[QubitState, float]:
    """Inverse of ``encode_pairs``; also returns the squared norm outside the code space."""
    if s.n % 2:
        raise ValueError("label-pair code needs an even register")
    nq = s.n // 2
    out: dict[str, complex] = {}
    leak = 0.0
    for w, a in s.amps.items():
        bits = []
        ok = True
        for q in range(1, nq + 1):
            lo, hi = pair_labels(q)
            pair = w[2 * q - 2 : 2 * q]
            if pair == (lo, hi):
                bits.append("0")
            elif pair == (hi, lo):
                bits.append("1")
            else:
                ok = False
                break
        if not ok:
            leak += abs(a) ** 2
            continue
        key = "".join(bits)
        out[key] = out.get(key, 0j) + a / 1j ** weight(key)
    return QubitState(nq, out), leak


def _travel_table(mediator: int, others: Sequence[int], toward_right: bool) -> dict[tuple[int, int], float]:
    # moving across label z costs i; coming back costs -i, so the phases cancel
    table = {}
    for z in others:
        if toward_right:
            table[(mediator, z)] = HALF_PI
            table[(z, mediator)] = -HALF_PI
        else:
            table[(z, mediator)] = HALF_PI
            table[(mediator, z)] = -HALF_PI
    return table


def encoded_cnot_gates(nq: int, c: int, t: int) -> tuple[LabelSwap, ...]:
    """Label-dependent swaps realizing CNOT(c -> t) on the label-pair code.

    When the control reads 1 its pair is (b, a), which places one control label
    next to the inside of the pair. That label walks to the target, mediates a
    phased exchange of the target pair, and walks back. For control 0 no table
    entry ever matches, so nothing moves.
    """
    if c == t or not (1 <= c <= nq and 1 <= t <= nq):
        raise ValueError("bad control/target")
    a, b = pair_labels(c)
    x, y = pair_labels(t)
    bystanders = [lab for lab in range(1, 2 * nq + 1) if lab not in (a, b, x, y)]
    exchange = {(x, y): HALF_PI, (y, x): -HALF_PI}
    gates: list[LabelSwap] = []
    if t > c:
        m = a
        walk_table = _travel_table(m, bystanders, True)
        start, stop = 2 * c, 2 * t - 2  # mediator position when control is 1 / next to x
        outward = list(range(start, stop))
        p = stop
        meet = {(m, x): HALF_PI, (m, y): HALF_PI}
        inner = [(p, meet), (p + 1, meet), (p, exchange), (p + 1, meet), (p, meet)]
    else:
        m = b
        walk_table = _travel_table(m, bystanders, False)
        start, stop = 2 * c - 1, 2 * t + 1
        outward = list(range(start - 1, stop - 1, -1))
        q = stop
        meet = {(x, m): HALF_PI, (y, m): HALF_PI}
        inner = [(q - 1, meet), (q - 2, meet), (q - 1, exchange), (q - 2, meet), (q - 1, meet)]
    for pos in outward:
        gates.append(LabelSwap.from_pairs(walk_table, pos))
    for pos, table in inner:
        gates.append(LabelSwap.from_pairs(table, pos))
    for pos in reversed(outward):
        gates.append(LabelSwap.from_pairs(walk_table, pos))
    return tuple(gates)


def encoded_cnot_zscheme(nq: int = 2, c: int = 1, t: int = 2) -> Circuit:
    return Circuit(2 * nq, encoded_cnot_gates(nq, c, t))


def compile_qubit_circuit(qc: QubitCircuit) -> Circuit:
    gates: list[PartialSwap | LabelSwap] = []
    for g in qc.gates:
        if isinstance(g, Rot):
            lo, hi = pair_labels(g.q)
            gates.append(PartialSwap(g.theta, lo, hi, "right"))
        else:
            gates.extend(encoded_cnot_gates(qc.n, g.c, g.t))
    return Circuit(2 * qc.n, tuple(gates))


# -- two-copy sampling ---------------------------------------------------------


def samp_tqp_distribution(qc: QubitCircuit) -> dict[tuple[str, str], float]:
    """Joint law of (x, y) after C acts on the left half of (1/√2^n) Σ|x>|x>."""
    u = qubit_unitary(qc)
    probs = np.abs(u) ** 2 / 2**qc.n
    fmt = f"0{qc.n}b"
    return {
        (format(x, fmt), format(y, fmt)): float(probs[x, y])
        for x, y in zip(*np.nonzero(probs))
    }


def samp_tqp_run(qc: QubitCircuit, shots: int, rng: np.random.Generator) -> list[tuple[str, str]]:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = samp_tqp_distribution(qc)
    keys = sorted(dist)
    p = np.array([dist[k] for k in keys])
    idx = rng.choice(len(keys), size=shots, p=p / p.sum())
    return [keys[i] for i in idx]


def samp_tqp_overlap(qc: QubitCircuit) -> complex:
    """<ψ|(C ⊗ I)|ψ> for the maximally entangled ψ, from the state vectors."""
    dim = 2**qc.n
    psi = np.eye(dim, dtype=complex).ravel() / math.sqrt(dim)
    out = (qubit_unitary(qc) @ np.eye(dim)).ravel() / math.sqrt(dim)
    return complex(np.vdot(psi, out))
