"""Exact sparse simulation over the permutation space.

A state is a mapping from one-line words to complex amplitudes. Gates are
immutable records; applying one returns a fresh state. Dense matrices are
available for small n through ``circuit_matrix``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Union

import numpy as np

from .config import check_size
from .numfmt import parse_angle
from .perm import Perm, all_perms, identity, rank, swap_labels, swap_positions, unrank, validate

ATOL = 1e-9
# postselection on a branch below this probability is treated as impossible
ZERO_PROB = 1e-20

SIDES = ("left", "right")


@dataclass(frozen=True)
class PartialSwap:
    """cosθ·I + i·sinθ·L on the pair (i, j).

    side="left" exchanges the labels i and j; side="right" exchanges the
    contents of positions i and j.
    """

    theta: float
    i: int
    j: int = 0
    side: str = "left"

    def __post_init__(self) -> None:
        if self.j == 0:
            object.__setattr__(self, "j", self.i + 1)
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.i == self.j or min(self.i, self.j) < 1:
            raise ValueError(f"bad pair ({self.i}, {self.j})")


@dataclass(frozen=True)
class Rapidity:
    """R(z) = X(atan z): the two-body scattering gate."""

    z: float
    pos: int
    side: str = "left"

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.pos < 1:
            raise ValueError("pos must be >= 1")

    @property
    def theta(self) -> float:
        return math.atan(self.z)

    def as_partial_swap(self) -> PartialSwap:
        return PartialSwap(self.theta, self.pos, self.pos + 1, self.side)


@dataclass(frozen=True)
class LabelSwap:
    """Position swap of (pos, partner) whose angle depends on the labels found there.

    ``thetas`` maps the ordered contents (a, b) to an angle; a pair listed in
    one order only gets the same angle in the other, and unlisted pairs act as
    the identity. Unitarity needs θ_ab ≡ θ_ba (mod π).
    """

    thetas: tuple[tuple[tuple[int, int], float], ...]
    pos: int
    partner: int = 0

    def __post_init__(self) -> None:
        if self.partner == 0:
            object.__setattr__(self, "partner", self.pos + 1)
        if self.pos == self.partner or min(self.pos, self.partner) < 1:
            raise ValueError(f"bad positions ({self.pos}, {self.partner})")
        table = {(int(a), int(b)): float(th) for (a, b), th in self.thetas}
        for (a, b), th in list(table.items()):
            table.setdefault((b, a), th)
        for (a, b), th in table.items():
            if a == b:
                raise ValueError(f"label pair ({a}, {b}) must be distinct")
            other = table.get((b, a), th)
            if not _congruent_mod_pi(th, other):
                raise ValueError(f"angles for ({a},{b}) and ({b},{a}) differ by a non-multiple of pi")
        object.__setattr__(self, "thetas", tuple(sorted(table.items())))

    @classmethod
    def from_pairs(cls, pairs: Mapping[tuple[int, int], float], pos: int, partner: int = 0) -> LabelSwap:
        """Each listed (a, b) also fixes (b, a) unless that is listed too."""
        return cls(tuple(pairs.items()), pos, partner)

    def angle(self, a: int, b: int) -> float:
        return self._table().get((a, b), 0.0)

    def _table(self) -> dict[tuple[int, int], float]:
        return dict(self.thetas)


@dataclass(frozen=True)
class Demolition:
    """Measure the label at ``pos`` and remove that register."""

    pos: int
    postselect: int | None = None

    def __post_init__(self) -> None:
        if self.pos < 1:
            raise ValueError("pos must be >= 1")


Gate = Union[PartialSwap, LabelSwap, Rapidity, Demolition]


_QUARTER_TURNS = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def cos_sin(theta: float) -> tuple[float, float]:
    """(cos θ, sin θ), exact when θ is a multiple of π/2."""
    q = theta / (math.pi / 2)
    r = round(q)
    if abs(q - r) < 1e-13:
        return _QUARTER_TURNS[r % 4]
    return math.cos(theta), math.sin(theta)


def _congruent_mod_pi(a: float, b: float) -> bool:
    r = (a - b) / math.pi
    return abs(r - round(r)) < 1e-12


def _gate_positions(g: Gate) -> tuple[int, ...]:
    if isinstance(g, PartialSwap):
        return (g.i, g.j)
    if isinstance(g, Rapidity):
        return (g.pos, g.pos + 1)
    if isinstance(g, LabelSwap):
        return (g.pos, g.partner)
    return (g.pos,)


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        size = self.n
        for idx, g in enumerate(self.gates):
            if max(_gate_positions(g)) > size:
                raise ValueError(f"gate {idx} ({g}) out of range for a register of {size}")
            if isinstance(g, Demolition):
                if g.postselect is not None and not 1 <= g.postselect <= size:
                    raise ValueError(f"gate {idx}: postselect label {g.postselect} out of range")
                size -= 1
                if size < 1:
                    raise ValueError("cannot demolish the last register")

    @property
    def final_n(self) -> int:
        return self.n - sum(isinstance(g, Demolition) for g in self.gates)

    @property
    def has_demolition(self) -> bool:
        return any(isinstance(g, Demolition) for g in self.gates)

    def then(self, other: Circuit) -> Circuit:
        if other.n != self.final_n:
            raise ValueError("register sizes do not match")
        return Circuit(self.n, self.gates + other.gates)


@dataclass(frozen=True)
class BallState:
    """Sparse vector over S_n. Treat ``amps`` as read-only."""

    n: int
    amps: dict[Perm, complex]

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amps.values()))

    def amplitude(self, sigma: Sequence[int]) -> complex:
        return self.amps.get(tuple(sigma), 0j)

    def probabilities(self) -> dict[Perm, float]:
        return {w: abs(a) ** 2 for w, a in self.amps.items()}

    def to_vector(self) -> np.ndarray:
        index = perm_index(self.n)
        v = np.zeros(len(index), dtype=complex)
        for w, a in self.amps.items():
            v[index[w]] += a
        return v

    @classmethod
    def from_vector(cls, n: int, v: np.ndarray) -> BallState:
        perms = perm_list(n)
        return cls(n, {perms[k]: complex(v[k]) for k in np.flatnonzero(v)})


def init_state(n: int, source: Sequence[int] | Mapping[Sequence[int], complex]) -> BallState:
    """Basis state from a word, or a normalized superposition from a weight mapping."""
    if isinstance(source, Mapping):
        if not source:
            raise ValueError("empty superposition")
        amps: dict[Perm, complex] = defaultdict(complex)
        for w, a in source.items():
            word = validate(w)
            if len(word) != n:
                raise ValueError(f"word {word} does not have {n} labels")
            amps[word] += complex(a)
        nrm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
        if nrm == 0:
            raise ValueError("zero vector cannot be normalized")
        return BallState(n, {w: a / nrm for w, a in amps.items()})
    word = validate(source)
    if len(word) != n:
        raise ValueError(f"word {word} does not have {n} labels")
    return BallState(n, {word: 1 + 0j})


def _apply_unitary(amps: Mapping[Perm, complex], g: Gate) -> dict[Perm, complex]:
    out: dict[Perm, complex] = defaultdict(complex)
    if isinstance(g, Rapidity):
        g = g.as_partial_swap()
    if isinstance(g, PartialSwap):
        c, s = cos_sin(g.theta)
        move = swap_labels if g.side == "left" else swap_positions
        for w, a in amps.items():
            if c != 0.0:
                out[w] += c * a
            if s != 0.0:
                out[move(w, g.i, g.j)] += 1j * s * a
        return dict(out)
    if isinstance(g, LabelSwap):
        table = g._table()
        p, q = g.pos - 1, g.partner - 1
        for w, a in amps.items():
            th = table.get((w[p], w[q]))
            if th is None:
                out[w] += a
                continue
            c, s = cos_sin(th)
            if c != 0.0:
                out[w] += c * a
            if s != 0.0:
                out[swap_positions(w, g.pos, g.partner)] += 1j * s * a
        return dict(out)
    raise TypeError(f"not a unitary gate: {g!r}")


def _remove_position(w: Perm, pos: int) -> Perm:
    label = w[pos - 1]
    return tuple(x - 1 if x > label else x for i, x in enumerate(w) if i != pos - 1)


def _demolition_split(amps: Mapping[Perm, complex], pos: int) -> dict[int, dict[Perm, complex]]:
    """Unnormalized reduced branch for each observed label."""
    out: dict[int, dict[Perm, complex]] = defaultdict(dict)
    for w, a in amps.items():
        label = w[pos - 1]
        out[label][_remove_position(w, pos)] = a
    return dict(out)


def _branch_prob(amps: Mapping[Perm, complex]) -> float:
    return sum(abs(a) ** 2 for a in amps.values())


def apply_gate(
    s: BallState, g: Gate, rng: np.random.Generator | None = None
) -> tuple[BallState, int | None]:
    """Apply one gate. Demolitions return the observed (or postselected) label."""
    if max(_gate_positions(g)) > s.n:
        raise ValueError(f"gate {g!r} out of range for n={s.n}")
    if not isinstance(g, Demolition):
        return BallState(s.n, _apply_unitary(s.amps, g)), None
    if s.n < 2:
        raise ValueError("cannot demolish the last register")
    split = _demolition_split(s.amps, g.pos)
    if g.postselect is not None:
        label = g.postselect
        branch = split.get(label, {})
        prob = _branch_prob(branch)
        if prob <= ZERO_PROB:
            raise ValueError(f"postselected label {label} has zero probability")
    else:
        if rng is None:
            raise ValueError("an rng is required to sample a demolition outcome")
        labels = sorted(split)
        probs = np.array([_branch_prob(split[x]) for x in labels])
        label = labels[int(rng.choice(len(labels), p=probs / probs.sum()))]
        branch = split[label]
        prob = _branch_prob(branch)
    scale = 1 / math.sqrt(prob)
    return BallState(s.n - 1, {w: a * scale for w, a in branch.items()}), label


def apply_circuit(
    C: Circuit, s: BallState, rng: np.random.Generator | None = None
) -> tuple[BallState, tuple[int, ...]]:
    if s.n != C.n:
        raise ValueError(f"state has n={s.n}, circuit expects {C.n}")
    records = []
    for g in C.gates:
        s, rec = apply_gate(s, g, rng)
        if rec is not None:
            records.append(rec)
    return s, tuple(records)


@dataclass(frozen=True)
class Branch:
    records: tuple[int, ...]
    weight: float
    state: BallState


def branches(C: Circuit, s0: BallState) -> list[Branch]:
    """Exact enumeration over demolition outcomes.

    Weights are joint probabilities including postselection losses, so they
    sum to the success probability. Each branch state is normalized.
    """
    if s0.n != C.n:
        raise ValueError(f"state has n={s0.n}, circuit expects {C.n}")
    live: list[tuple[tuple[int, ...], dict[Perm, complex]]] = [((), dict(s0.amps))]
    n = C.n
    for g in C.gates:
        if not isinstance(g, Demolition):
            live = [(rec, _apply_unitary(amps, g)) for rec, amps in live]
            continue
        nxt = []
        for rec, amps in live:
            split = _demolition_split(amps, g.pos)
            labels = [g.postselect] if g.postselect is not None else sorted(split)
            for label in labels:
                branch = split.get(label)
                if branch and _branch_prob(branch) > ZERO_PROB:
                    nxt.append((rec + (label,), branch))
        live = nxt
        n -= 1
    out = []
    for rec, amps in live:
        w = _branch_prob(amps)
        scale = 1 / math.sqrt(w)
        out.append(Branch(rec, w, BallState(n, {k: a * scale for k, a in amps.items()})))
    return out


def success_probability(C: Circuit, s0: BallState) -> float:
    return sum(b.weight for b in branches(C, s0))


def joint_distribution(C: Circuit, s0: BallState) -> dict[tuple[tuple[int, ...], Perm], float]:
    """Probabilities of (records, final word), conditioned on all postselections."""
    bs = branches(C, s0)
    total = sum(b.weight for b in bs)
    if total <= ZERO_PROB:
        raise ValueError("postselected outcomes have zero probability")
    out: dict[tuple[tuple[int, ...], Perm], float] = {}
    for b in bs:
        for w, a in b.state.amps.items():
            p = b.weight * abs(a) ** 2 / total
            if p > 0:
                key = (b.records, w)
                out[key] = out.get(key, 0.0) + p
    return out


def distribution(C: Circuit, s0: BallState) -> dict[Perm, float]:
    """Exact Born distribution of the final word, marginal over free demolitions."""
    check_size(C.n)
    out: dict[Perm, float] = defaultdict(float)
    for (_, w), p in joint_distribution(C, s0).items():
        out[w] += p
    return dict(out)


def run_and_sample(
    C: Circuit, s0: BallState, shots: int, rng: np.random.Generator
) -> list[tuple[tuple[int, ...], Perm]]:
    """i.i.d. draws of (demolition records, measured word)."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    joint = joint_distribution(C, s0)
    keys = sorted(joint, key=lambda k: (k[0], rank(k[1])))
    probs = np.array([joint[k] for k in keys])
    idx = rng.choice(len(keys), size=shots, p=probs / probs.sum())
    return [keys[i] for i in idx]


def _require_unitary(C: Circuit) -> None:
    if C.has_demolition:
        raise ValueError("circuit contains demolition measurements")


def apply_unitary_circuit(C: Circuit, s: BallState) -> BallState:
    _require_unitary(C)
    amps = dict(s.amps)
    for g in C.gates:
        amps = _apply_unitary(amps, g)
    return BallState(s.n, amps)


def amplitude(C: Circuit, sigma: Sequence[int], sigma_in: Sequence[int]) -> complex:
    """<sigma|C|sigma_in>."""
    _require_unitary(C)
    out = apply_unitary_circuit(C, init_state(C.n, sigma_in))
    return out.amplitude(validate(sigma))


def is_one_sided(C: Circuit) -> bool:
    """True when every gate is a left (or every gate a right) partial swap."""
    sides = set()
    for g in C.gates:
        if isinstance(g, (PartialSwap, Rapidity)):
            sides.add(g.side)
        else:
            return False
    return len(sides) <= 1


def trace(C: Circuit) -> complex:
    """Tr(C). One-sided circuits use n!·<id|C|id>; others sum the diagonal."""
    _require_unitary(C)
    if is_one_sided(C):
        e = identity(C.n)
        return math.factorial(C.n) * amplitude(C, e, e)
    return trace_diagonal(C)


def trace_diagonal(C: Circuit) -> complex:
    """Direct diagonal sum over all of S_n (debug path, n <= 7)."""
    _require_unitary(C)
    if C.n > 7:
        raise ValueError("diagonal trace limited to n <= 7")
    return sum((amplitude(C, w, w) for w in all_perms(C.n)), 0j)


@lru_cache(maxsize=16)
def perm_list(n: int) -> tuple[Perm, ...]:
    return tuple(all_perms(n))


@lru_cache(maxsize=16)
def perm_index(n: int) -> dict[Perm, int]:
    return {w: k for k, w in enumerate(perm_list(n))}


@lru_cache(maxsize=4096)
def _move_table(n: int, side: str, i: int, j: int) -> np.ndarray:
    perms, index = perm_list(n), perm_index(n)
    move = swap_labels if side == "left" else swap_positions
    return np.array([index[move(w, i, j)] for w in perms], dtype=np.intp)


def _dense_gate(n: int, g: Gate) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(diag, off, target): column k of the gate is diag[k] e_k + off[k] e_target[k]."""
    if isinstance(g, Rapidity):
        g = g.as_partial_swap()
    size = math.factorial(n)
    if isinstance(g, PartialSwap):
        t = _move_table(n, g.side, g.i, g.j)
        c, s = cos_sin(g.theta)
        return np.full(size, c), np.full(size, 1j * s), t
    if isinstance(g, LabelSwap):
        t = _move_table(n, "right", g.pos, g.partner)
        table = g._table()
        cs = np.array([cos_sin(table.get((w[g.pos - 1], w[g.partner - 1]), 0.0)) for w in perm_list(n)])
        return cs[:, 0], 1j * cs[:, 1], t
    raise TypeError(f"not a unitary gate: {g!r}")


def apply_dense(C: Circuit, m: np.ndarray) -> np.ndarray:
    """Apply C to a dense vector or to each column of a matrix."""
    _require_unitary(C)
    check_size(C.n)
    for g in C.gates:
        diag, off, t = _dense_gate(C.n, g)
        shape = (-1,) + (1,) * (m.ndim - 1)
        new = diag.reshape(shape) * m
        new[t] += off.reshape(shape) * m
        m = new
    return m


def circuit_matrix(C: Circuit) -> np.ndarray:
    """Dense n!×n! matrix in rank order."""
    return apply_dense(C, np.eye(math.factorial(C.n), dtype=complex))


def dqc1_estimate(C: Circuit, samples: int, rng: np.random.Generator) -> complex:
    """Monte-Carlo estimate of Tr(C)/n! from two Bernoulli coins per sample.

    Each sample draws a uniform σ, looks up a = <σ|C|σ>, and flips coins with
    heads probability (1 + Re a)/2 and (1 + Im a)/2.
    """
    _require_unitary(C)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = C.n
    idx = rng.integers(math.factorial(n), size=samples)
    perms = perm_list(n) if n <= 8 else None
    cache: dict[int, complex] = {}
    diag = np.empty(samples, dtype=complex)
    for k, r in enumerate(idx):
        r = int(r)
        if r not in cache:
            w = perms[r] if perms is not None else unrank(r, n)
            cache[r] = amplitude(C, w, w)
        diag[k] = cache[r]
    u = rng.random((2, samples))
    re_bits = u[0] < (1 + diag.real) / 2
    im_bits = u[1] < (1 + diag.imag) / 2
    return complex(2 * re_bits.mean() - 1, 2 * im_bits.mean() - 1)


# -- JSON ---------------------------------------------------------------------


def gate_to_json(g: Gate) -> dict[str, Any]:
    if isinstance(g, PartialSwap):
        return {"kind": "x", "theta": g.theta, "i": g.i, "j": g.j, "side": g.side}
    if isinstance(g, Rapidity):
        return {"kind": "r", "z": g.z, "pos": g.pos, "side": g.side}
    if isinstance(g, LabelSwap):
        out: dict[str, Any] = {
            "kind": "z",
            "pos": g.pos,
            "thetas": [{"a": a, "b": b, "theta": th} for (a, b), th in g.thetas],
        }
        if g.partner != g.pos + 1:
            out["partner"] = g.partner
        return out
    out = {"kind": "demolition", "pos": g.pos}
    if g.postselect is not None:
        out["postselect"] = g.postselect
    return out


def _int(obj: Mapping[str, Any], key: str, default: int | None = None) -> int:
    if key not in obj:
        if default is None:
            raise ValueError(f"gate is missing {key!r}")
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ValueError(f"{key!r} must be an integer")
    return val


def gate_from_json(obj: Mapping[str, Any]) -> Gate:
    kind = obj.get("kind")
    if kind == "x":
        i = _int(obj, "i")
        return PartialSwap(parse_angle(obj["theta"]), i, _int(obj, "j", i + 1), obj.get("side", "left"))
    if kind == "r":
        return Rapidity(float(obj["z"]), _int(obj, "pos"), obj.get("side", "left"))
    if kind == "z":
        pos = _int(obj, "pos")
        table: dict[tuple[int, int], float] = {}
        for e in obj.get("thetas", []):
            table[(int(e["a"]), int(e["b"]))] = parse_angle(e["theta"])
        return LabelSwap.from_pairs(table, pos, _int(obj, "partner", pos + 1))
    if kind == "demolition":
        post = obj.get("postselect")
        return Demolition(_int(obj, "pos"), None if post is None else int(post))
    raise ValueError(f"unknown gate kind {kind!r}")


def circuit_to_json(C: Circuit) -> dict[str, Any]:
    return {"n": C.n, "gates": [gate_to_json(g) for g in C.gates]}


def circuit_from_json(obj: Mapping[str, Any]) -> Circuit:
    if not isinstance(obj, Mapping) or "n" not in obj:
        raise ValueError("circuit JSON needs an 'n' field")
    gates = obj.get("gates", [])
    if not isinstance(gates, list):
        raise ValueError("'gates' must be a list")
    return Circuit(int(obj["n"]), tuple(gate_from_json(g) for g in gates))


def states_close(a: BallState, b: BallState, atol: float = ATOL) -> bool:
    keys: Iterable[Perm] = set(a.amps) | set(b.amps)
    return a.n == b.n and all(abs(a.amplitude(k) - b.amplitude(k)) <= atol for k in keys)
