"""Young-Yamanouchi machinery for irreducible representations of S_n.

Tableaux are ordered lexicographically by their row-index word (the word
whose k-th letter is the row holding k). Transposition matrices follow the
orthogonal form: for s_k acting on tableau t,

    diag = 1/d,  off-diagonal to s_k·t = sqrt(1 - 1/d^2),

with d = content(k+1) - content(k) and content = column - row.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .perm import Perm, all_perms, compose, identity, validate
from .state import BallState, Circuit, LabelSwap, PartialSwap, Rapidity

Partition = tuple[int, ...]


def validate_partition(parts: Sequence[int]) -> Partition:
    lam = tuple(int(x) for x in parts)
    if not lam or any(x <= 0 for x in lam):
        raise ValueError(f"partition parts must be positive: {lam}")
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"partition must be non-ascending: {lam}")
    return lam


def parse_partition(text: str) -> Partition:
    try:
        return validate_partition(int(t) for t in text.replace(" ", "").strip("()[]").split(",") if t)
    except ValueError as exc:
        raise ValueError(f"cannot parse partition {text!r}: {exc}") from None


def partitions(n: int) -> list[Partition]:
    """All partitions of n, in reverse lexicographic order ((n) first)."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def rec(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    return list(rec(n, n))


def conjugate(lam: Sequence[int]) -> Partition:
    lam = validate_partition(lam)
    return tuple(sum(1 for x in lam if x > c) for c in range(lam[0]))


def hook_dim(lam: Sequence[int]) -> int:
    """f^λ = n! / product of hook lengths."""
    lam = validate_partition(lam)
    conj = conjugate(lam)
    hooks = 1
    for r, row in enumerate(lam):
        for c in range(row):
            hooks *= (row - c - 1) + (conj[c] - r - 1) + 1
    return math.factorial(sum(lam)) // hooks


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        validate_partition([len(r) for r in rows])
        flat = sorted(x for r in rows for x in r)
        if flat != list(range(1, len(flat) + 1)):
            raise ValueError("tableau must be filled by 1..n")
        for r in rows:
            if any(a >= b for a, b in zip(r, r[1:])):
                raise ValueError("rows must increase")
        for upper, lower in zip(rows, rows[1:]):
            if any(upper[c] >= lower[c] for c in range(len(lower))):
                raise ValueError("columns must increase")

    @property
    def shape(self) -> Partition:
        return tuple(len(r) for r in self.rows)

    @property
    def n(self) -> int:
        return sum(self.shape)

    def cell(self, label: int) -> tuple[int, int]:
        """(row, column), both 0-based."""
        for r, row in enumerate(self.rows):
            if label in row:
                return r, row.index(label)
        raise ValueError(f"label {label} not in tableau")

    def content(self, label: int) -> int:
        r, c = self.cell(label)
        return c - r

    def row_word(self) -> tuple[int, ...]:
        return tuple(self.cell(k)[0] for k in range(1, self.n + 1))

    @classmethod
    def from_row_word(cls, word: Sequence[int]) -> StandardTableau:
        rows: list[list[int]] = []
        for k, r in enumerate(word, start=1):
            while len(rows) <= r:
                rows.append([])
            rows[r].append(k)
        return cls(tuple(tuple(r) for r in rows))

    def swapped(self, k: int) -> StandardTableau:
        """Exchange k and k+1 (may be non-standard; caller checks)."""
        swap = {k: k + 1, k + 1: k}
        return StandardTableau(tuple(tuple(swap.get(x, x) for x in r) for r in self.rows))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return "(" + ";".join(",".join(str(x) for x in r) for r in self.rows) + ")"


@lru_cache(maxsize=256)
def syt_enumerate(lam: Partition) -> tuple[StandardTableau, ...]:
    """Standard tableaux of shape λ, sorted by row-index word."""
    lam = validate_partition(lam)
    n = sum(lam)
    words: list[tuple[int, ...]] = []

    def rec(word: list[int], filled: list[int]) -> None:
        if len(word) == n:
            words.append(tuple(word))
            return
        for r in range(len(lam)):
            if filled[r] < lam[r] and (r == 0 or filled[r - 1] > filled[r]):
                filled[r] += 1
                word.append(r)
                rec(word, filled)
                word.pop()
                filled[r] -= 1

    rec([], [0] * len(lam))
    return tuple(StandardTableau.from_row_word(w) for w in sorted(words))


@lru_cache(maxsize=256)
def _tableau_index(lam: Partition) -> dict[tuple[int, ...], int]:
    return {t.row_word(): i for i, t in enumerate(syt_enumerate(lam))}


def axial_distance(t: StandardTableau, k: int) -> int:
    """content(k+1) - content(k): +1 for row neighbours, -1 for column neighbours."""
    if not 1 <= k <= t.n - 1:
        raise ValueError(f"k={k} outside [1, {t.n - 1}]")
    return t.content(k + 1) - t.content(k)


@lru_cache(maxsize=1024)
def _yy_transposition(lam: Partition, k: int) -> np.ndarray:
    tabs = syt_enumerate(lam)
    index = _tableau_index(lam)
    f = len(tabs)
    m = np.zeros((f, f))
    for i, t in enumerate(tabs):
        d = axial_distance(t, k)
        m[i, i] = 1 / d
        if abs(d) > 1:
            w = list(t.row_word())
            w[k - 1], w[k] = w[k], w[k - 1]
            m[index[tuple(w)], i] = math.sqrt(1 - 1 / d**2)
    m.setflags(write=False)
    return m


def yy_transposition(lam: Sequence[int], k: int) -> np.ndarray:
    """Image of the adjacent transposition (k, k+1) in the YY basis of λ."""
    lam = validate_partition(lam)
    n = sum(lam)
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} outside [1, {n - 1}]")
    return _yy_transposition(lam, k).copy()


def adjacent_factorization(sigma: Sequence[int]) -> list[int]:
    """ks with σ = s_{k1}∘s_{k2}∘… (bubble sort of the one-line word)."""
    w = list(validate(sigma))
    steps: list[int] = []
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k] > w[k + 1]:
                w[k], w[k + 1] = w[k + 1], w[k]
                steps.append(k + 1)
                changed = True
    # w∘s_{j1}∘…∘s_{jm} = e, hence w = s_{jm}∘…∘s_{j1}
    return steps[::-1]


def yy_matrix(lam: Sequence[int], sigma: Sequence[int]) -> np.ndarray:
    lam = validate_partition(lam)
    f = hook_dim(lam)
    m = np.eye(f)
    for k in adjacent_factorization(sigma):
        m = m @ _yy_transposition(lam, k)
    return m


def transposition_image(lam: Sequence[int], i: int, j: int) -> np.ndarray:
    """Image of the (not necessarily adjacent) transposition (i j)."""
    lam = validate_partition(lam)
    n = sum(lam)
    w = list(identity(n))
    w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
    return yy_matrix(lam, w)


def irrep_unitary(C: Circuit, lam: Sequence[int]) -> np.ndarray:
    """Image of a one-sided partial-swap circuit in V_λ."""
    lam = validate_partition(lam)
    if sum(lam) != C.n:
        raise ValueError(f"partition of {sum(lam)} does not match n={C.n}")
    sides = set()
    f = hook_dim(lam)
    u = np.eye(f, dtype=complex)
    for g in C.gates:
        if isinstance(g, Rapidity):
            g = g.as_partial_swap()
        if not isinstance(g, PartialSwap):
            kind = "label-dependent" if isinstance(g, LabelSwap) else "demolition"
            raise ValueError(f"{kind} gates have no image in a single irrep")
        sides.add(g.side)
        if len(sides) > 1:
            raise ValueError("circuits mixing left and right gates do not act within one irrep")
        t = transposition_image(lam, g.i, g.j)
        u = (math.cos(g.theta) * np.eye(f) + 1j * math.sin(g.theta) * t) @ u
    return u


def _cycle_type(sigma: Perm) -> tuple[int, ...]:
    seen = [False] * len(sigma)
    lengths = []
    for s in range(len(sigma)):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = sigma[x] - 1
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


@lru_cache(maxsize=4096)
def _character_by_type(lam: Partition, ctype: tuple[int, ...]) -> float:
    # representative: consecutive cycles (1..a), (a+1..a+b), ...
    w = []
    start = 1
    for length in ctype:
        block = list(range(start, start + length))
        w.extend(block[1:] + block[:1])
        start += length
    return float(np.trace(yy_matrix(lam, w)))


def character(lam: Sequence[int], sigma: Sequence[int]) -> float:
    lam = validate_partition(lam)
    sigma = validate(sigma)
    if len(sigma) != sum(lam):
        raise ValueError("size mismatch")
    return _character_by_type(lam, _cycle_type(sigma))


def _check_projector_size(n: int) -> None:
    if n > 7:
        raise ValueError("character sums are limited to n <= 7")


def project_vector(s: BallState, lam: Sequence[int]) -> dict[Perm, complex]:
    """P_λ|ψ> with P_λ = (f/n!) Σ_σ χ_λ(σ) L_σ, unnormalized."""
    lam = validate_partition(lam)
    n = s.n
    if sum(lam) != n:
        raise ValueError("size mismatch")
    _check_projector_size(n)
    f = hook_dim(lam)
    scale = f / math.factorial(n)
    out: dict[Perm, complex] = {}
    for sigma in all_perms(n):
        chi = character(lam, sigma)
        if chi == 0:
            continue
        for w, a in s.amps.items():
            key = compose(sigma, w)
            out[key] = out.get(key, 0j) + scale * chi * a
    return out


def project_norm(s: BallState, lam: Sequence[int]) -> float:
    return sum(abs(a) ** 2 for a in project_vector(s, lam).values())


def project_state(s: BallState, lam: Sequence[int]) -> BallState:
    """Normalized projection onto the λ-isotypic block."""
    v = project_vector(s, lam)
    nrm = math.sqrt(sum(abs(a) ** 2 for a in v.values()))
    if nrm < 1e-12:
        raise ValueError(f"state has no component in the {tuple(lam)} block")
    return BallState(s.n, {w: a / nrm for w, a in v.items()})


def project_identity_norm(lam: Sequence[int]) -> float:
    """||P_λ|id>||^2 = (f^λ)^2 / n!."""
    lam = validate_partition(lam)
    return hook_dim(lam) ** 2 / math.factorial(sum(lam))


def projector_matrix(lam: Sequence[int]) -> np.ndarray:
    """Dense P_λ on the regular representation in rank order (small n only)."""
    from .state import perm_index, perm_list

    lam = validate_partition(lam)
    n = sum(lam)
    _check_projector_size(n)
    perms, index = perm_list(n), perm_index(n)
    f = hook_dim(lam)
    p = np.zeros((len(perms), len(perms)))
    for sigma in perms:
        chi = character(lam, sigma)
        if chi == 0:
            continue
        for col, w in enumerate(perms):
            p[index[compose(sigma, w)], col] += chi
    return p * f / math.factorial(n)


def left_regular_transposition(n: int, k: int) -> np.ndarray:
    """L_(k,k+1) on the regular representation in rank order."""
    from .state import perm_index, perm_list

    perms, index = perm_list(n), perm_index(n)
    s = identity(n)
    s = s[: k - 1] + (s[k], s[k - 1]) + s[k + 1 :]
    m = np.zeros((len(perms), len(perms)))
    for col, w in enumerate(perms):
        m[index[compose(s, w)], col] = 1.0
    return m


@dataclass(frozen=True)
class BranchGroup:
    sub_shape: Partition
    indices: tuple[int, ...]


def branch(lam: Sequence[int]) -> list[BranchGroup]:
    """Split the YY basis of λ by the cell holding n, ordered by that cell's row."""
    lam = validate_partition(lam)
    n = sum(lam)
    if n < 2:
        raise ValueError("branching needs n >= 2")
    groups: dict[int, list[int]] = {}
    for i, t in enumerate(syt_enumerate(lam)):
        groups.setdefault(t.cell(n)[0], []).append(i)
    out = []
    for r in sorted(groups):
        sub = list(lam)
        sub[r] -= 1
        out.append(BranchGroup(tuple(x for x in sub if x > 0), tuple(groups[r])))
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def lie_closure_dim(lam: Sequence[int], tol: float = 1e-8, max_candidates: int = 2000) -> int:
    """Real dimension of the Lie algebra generated by i(L_k - tr(L_k)/f) on V_λ."""
    lam = validate_partition(lam)
    n = sum(lam)
    f = hook_dim(lam)
    if f > 12:
        raise ValueError("lie closure is limited to f <= 12")
    gens = []
    for k in range(1, n):
        m = yy_transposition(lam, k)
        gens.append(1j * (m - np.trace(m) / f * np.eye(f)))

    def vec(x: np.ndarray) -> np.ndarray:
        return np.concatenate([x.real.ravel(), x.imag.ravel()])

    basis: list[np.ndarray] = []
    elems: list[np.ndarray] = []

    def add(x: np.ndarray) -> bool:
        v = vec(x)
        for b in basis:
            v = v - (b @ v) * b
        for b in basis:  # second pass for numerical stability
            v = v - (b @ v) * b
        nv = np.linalg.norm(v)
        if nv <= tol:
            return False
        basis.append(v / nv)
        elems.append(x / np.linalg.norm(vec(x)))
        return True

    for g in gens:
        add(g)
    candidates = 0
    head = 0
    while head < len(elems):
        x = elems[head]
        head += 1
        for g in gens:
            candidates += 1
            if candidates > max_candidates:
                raise RuntimeError("lie closure did not converge within the candidate budget")
            add(commutator(g, x))
        if len(basis) == f * f - 1:
            break
    return len(basis)


REFERENCE_BRIDGE = 1j * np.array(
    [
        [0, math.sqrt(2), -math.sqrt(2 / 3)],
        [-math.sqrt(2), 0, math.sqrt(1 / 3)],
        [math.sqrt(2 / 3), -math.sqrt(1 / 3), 0],
    ]
)


def bridge_matrix() -> np.ndarray:
    """i[L_(2,3), L_(3,4)] in the YY basis of (3,1)."""
    return 1j * commutator(yy_transposition((3, 1), 2), yy_transposition((3, 1), 3))


def bridge_matrix_check(atol: float = 1e-12) -> bool:
    return bool(np.allclose(bridge_matrix(), REFERENCE_BRIDGE, atol=atol, rtol=0))


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def su2_commutator_expressions(l12: np.ndarray, l23: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three nested-commutator combinations of L_(1,2), L_(2,3) used as su(2) generators."""
    c1 = commutator(l12, l23)
    c2 = commutator(l12, c1)
    return (
        c2 / (2 * math.sqrt(3)),
        1j * c1 / math.sqrt(3),
        commutator(c2, c1) / 6,
    )


def two_row_encode(t: StandardTableau) -> str:
    """Bit k is 0 when label k sits in the top row."""
    if len(t.shape) != 2 or t.shape[0] != t.shape[1]:
        raise ValueError("two_row_encode needs a shape (m, m)")
    return "".join(str(r) for r in t.row_word())


def two_row_decode(bits: str) -> StandardTableau:
    if not bits or len(bits) % 2 or set(bits) - {"0", "1"}:
        raise ValueError(f"invalid two-row string {bits!r}")
    depth = 0
    for b in bits:
        depth += 1 if b == "0" else -1
        if depth < 0:
            raise ValueError(f"{bits!r} violates the ballot condition")
    if depth != 0:
        raise ValueError(f"{bits!r} does not have equal rows")
    return StandardTableau.from_row_word([int(b) for b in bits])


def path_encode(t: StandardTableau) -> str:
    """Up step for a top-row label, down step for a bottom-row label."""
    return two_row_encode(t).replace("0", "u").replace("1", "d")


def path_decode(path: str) -> StandardTableau:
    if set(path) - {"u", "d"}:
        raise ValueError(f"invalid path {path!r}")
    return two_row_decode(path.replace("u", "0").replace("d", "1"))
