"""Permutation arithmetic and the factorial-number-system codec.

Permutations are one-line words: ``word[p-1]`` is the label sitting at
position ``p``. Both positions and labels are 1-based.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

Perm = tuple[int, ...]

MAX_CODEC_N = 20


def validate(word: Iterable[int]) -> Perm:
    """Return ``word`` as a tuple, raising ValueError unless it is a bijection on 1..n."""
    w = tuple(int(x) for x in word)
    if not w:
        raise ValueError("permutation must have at least one label")
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError(f"not a permutation of 1..{len(w)}: {w}")
    return w


def identity(n: int) -> Perm:
    if n < 1:
        raise ValueError("n must be >= 1")
    return tuple(range(1, n + 1))


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """Functional composition: (p∘q)(i) = p(q(i))."""
    if len(p) != len(q):
        raise ValueError(f"size mismatch: {len(p)} vs {len(q)}")
    return tuple(p[x - 1] for x in q)


def invert(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p, start=1):
        out[x - 1] = i
    return tuple(out)


def swap_positions(p: Sequence[int], i: int, j: int) -> Perm:
    """Exchange the contents of positions i and j (right multiplication by (i j))."""
    w = list(p)
    w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
    return tuple(w)


def swap_labels(p: Sequence[int], a: int, b: int) -> Perm:
    """Exchange labels a and b wherever they sit (left multiplication by (a b))."""
    return tuple(b if x == a else a if x == b else x for x in p)


def transposition(n: int, i: int, j: int) -> Perm:
    return swap_positions(identity(n), i, j)


def all_perms(n: int) -> Iterator[Perm]:
    """All of S_n in lexicographic (= rank) order."""
    return itertools.permutations(range(1, n + 1))


def parse_perm(text: str) -> Perm:
    """Parse ``"2,3,1"`` (or a compact ``"231"`` when n < 10)."""
    text = text.strip().strip("()[]")
    if "," in text:
        parts = [t for t in text.split(",") if t.strip()]
    elif " " in text:
        parts = text.split()
    else:
        parts = list(text)
    try:
        return validate(int(t) for t in parts)
    except ValueError as exc:
        raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None


def format_perm(p: Sequence[int]) -> str:
    return ",".join(str(x) for x in p)


@dataclass(frozen=True)
class FactorialCode:
    """Mixed-radix digits d_1..d_{n-1} with 0 <= d_j <= n-j."""

    n: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_CODEC_N:
            raise ValueError(f"n must be in 1..{MAX_CODEC_N}")
        if len(self.digits) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} digits, got {len(self.digits)}")
        for j, d in enumerate(self.digits, start=1):
            if not 0 <= d <= self.n - j:
                raise ValueError(f"digit d_{j}={d} outside [0, {self.n - j}]")

    @property
    def rank(self) -> int:
        n = self.n
        return sum(d * math.factorial(n - j) for j, d in enumerate(self.digits, start=1))

    @classmethod
    def from_rank(cls, rank: int, n: int) -> FactorialCode:
        if not 1 <= n <= MAX_CODEC_N:
            raise ValueError(f"n must be in 1..{MAX_CODEC_N}")
        if not 0 <= rank < math.factorial(n):
            raise ValueError(f"rank {rank} outside [0, {n}!)")
        digits = []
        for j in range(1, n):
            f = math.factorial(n - j)
            d, rank = divmod(rank, f)
            digits.append(d)
        return cls(n, tuple(digits))


def lehmer_encode(p: Sequence[int]) -> FactorialCode:
    w = validate(p)
    n = len(w)
    remaining = list(range(1, n + 1))
    digits = []
    for x in w[:-1]:
        d = remaining.index(x)
        digits.append(d)
        remaining.pop(d)
    return FactorialCode(n, tuple(digits))


def lehmer_decode(c: FactorialCode) -> Perm:
    remaining = list(range(1, c.n + 1))
    word = [remaining.pop(d) for d in c.digits]
    word.extend(remaining)
    return tuple(word)


def rank(p: Sequence[int]) -> int:
    return lehmer_encode(p).rank


def unrank(r: int, n: int) -> Perm:
    return lehmer_decode(FactorialCode.from_rank(r, n))


def _digit_at(digits: Sequence[int], n: int, j: int) -> int:
    # d_n is the implicit trailing zero
    return 0 if j == n else digits[j - 1]


def _local_swap(a: int, b: int) -> tuple[int, int]:
    """New (d_k, d_{k+1}) after exchanging positions k, k+1 with old digits (a, b).

    The labels at k and k+1 are the a-th and (b-th of the rest) remaining
    labels; after the swap the later label comes first.
    """
    if b < a:
        return b, a - 1
    return b + 1, a


def code_adjacent_swap(c: FactorialCode, k: int) -> FactorialCode:
    """Exchange the contents of positions k, k+1 acting on digits only."""
    n = c.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} outside [1, {n - 1}]")
    a = _digit_at(c.digits, n, k)
    b = _digit_at(c.digits, n, k + 1)
    na, nb = _local_swap(a, b)
    digits = list(c.digits)
    digits[k - 1] = na
    if k + 1 <= n - 1:
        digits[k] = nb
    return FactorialCode(n, tuple(digits))


def long_division(value: int, divisor: int, base: int = 2) -> tuple[int, int]:
    """Schoolbook long division scanning base-``base`` digits, most significant first.

    Keeps only a quotient accumulator and a running remainder, so the extra
    storage is two registers no matter how long ``value`` is.
    """
    if divisor <= 0:
        raise ValueError("divisor must be positive")
    if value < 0:
        raise ValueError("value must be nonnegative")
    width = 1
    while base**width <= value:
        width += 1
    quotient = 0
    remainder = 0
    for pos in range(width - 1, -1, -1):
        digit = (value // base**pos) % base
        remainder = remainder * base + digit
        q = 0
        while remainder >= divisor:
            remainder -= divisor
            q += 1
        quotient = quotient * base + q
    return quotient, remainder


def extract_digit_pair(rank_value: int, n: int, k: int) -> tuple[int, int]:
    """Read (d_k, d_{k+1}) straight from a rank.

    d_j = (rank mod (n-j+1)!) div (n-j)!; d_n is 0.
    """
    if not 1 <= n <= MAX_CODEC_N:
        raise ValueError(f"n must be in 1..{MAX_CODEC_N}")
    if not 0 <= rank_value < math.factorial(n):
        raise ValueError(f"rank {rank_value} outside [0, {n}!)")
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} outside [1, {n - 1}]")

    def digit(j: int) -> int:
        if j >= n:
            return 0
        _, r = long_division(rank_value, math.factorial(n - j + 1))
        q, _ = long_division(r, math.factorial(n - j))
        return q

    return digit(k), digit(k + 1)


def rank_adjacent_swap(rank_value: int, n: int, k: int) -> int:
    """Rank-level swap of positions k, k+1 touching only the two affected digits."""
    a, b = extract_digit_pair(rank_value, n, k)
    na, nb = _local_swap(a, b)
    delta = (na - a) * math.factorial(n - k)
    if k + 1 <= n - 1:
        delta += (nb - b) * math.factorial(n - k - 1)
    return rank_value + delta
