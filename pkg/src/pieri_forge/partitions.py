"""Partitions, compositions, and the enumerations driving every expansion.

Compositions (finite tuples of nonnegative ints) are plain Python tuples
throughout the package; partitions get a real class because validation and
the dominance order carry real invariants.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Optional, Sequence

from .errors import DomainError


class Partition:
    """Immutable weakly decreasing sequence of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        # trailing zeros are tolerated on input, nothing else is
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        prev = None
        for p in parts:
            if p <= 0:
                raise DomainError("partition parts must be positive: %r" % (parts,))
            if prev is not None and p > prev:
                raise DomainError("parts must weakly decrease: %r" % (parts,))
            prev = p
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, *a):
        raise AttributeError("Partition is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_seq(cls, seq: Sequence[int]) -> Optional["Partition"]:
        """Partition from an arbitrary sequence, or None when the sequence
        (zeros dropped) is not weakly decreasing nonnegative."""
        seq = tuple(int(p) for p in seq)
        if any(p < 0 for p in seq):
            return None
        stripped = tuple(p for p in seq if p)
        if any(stripped[i] < stripped[i + 1] for i in range(len(stripped) - 1)):
            return None
        if stripped != tuple(p for p in seq[: len(stripped)]):
            # an interior zero before a positive part also breaks monotonicity
            return None
        return cls(stripped)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse '3,2,1', the multiplicity form '1^2,3^1', or '0' / '' for
        the empty partition."""
        text = text.strip()
        if text in ("", "0", "()"):
            return cls(())
        tokens = [tok.strip() for tok in text.split(",")]
        carets = ["^" in tok for tok in tokens]
        if any(carets) and not all(carets):
            raise DomainError("mixed plain and multiplicity notation: %r" % text)
        try:
            if all(carets):
                mults: dict[int, int] = {}
                for tok in tokens:
                    part_s, mult_s = tok.split("^", 1)
                    part, m = int(part_s), int(mult_s)
                    if part <= 0 or m < 0:
                        raise DomainError("bad multiplicity token %r" % tok)
                    mults[part] = mults.get(part, 0) + m
                parts = []
                for part in sorted(mults, reverse=True):
                    parts.extend([part] * mults[part])
                return cls(parts)
            return cls(int(tok) for tok in tokens)
        except ValueError:
            raise DomainError("unparseable partition %r" % text)

    # -- basic data --------------------------------------------------------

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """λ_i with 1-based index, zero beyond the length."""
        if i < 1:
            raise DomainError("part index must be >= 1")
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def padded(self, n: int) -> tuple[int, ...]:
        if n < len(self.parts):
            raise DomainError("cannot pad %r to length %d" % (self.parts, n))
        return self.parts + (0,) * (n - len(self.parts))

    def multiplicity(self, i: int) -> int:
        return sum(1 for p in self.parts if p == i)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        return Partition(
            sum(1 for p in self.parts if p >= i) for i in range(1, self.parts[0] + 1)
        )

    def z(self) -> int:
        """The centralizer order prod_i i^{m_i} m_i!."""
        out = 1
        for i, m in self.multiplicities().items():
            out *= i**m
            for k in range(1, m + 1):
                out *= k
        return out

    def remove_first_column(self) -> "Partition":
        return Partition(p - 1 for p in self.parts if p > 1)

    # -- dunder plumbing ---------------------------------------------------

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        # plain lexicographic order, used only for deterministic sorting
        return self.parts < other.parts

    def __repr__(self):
        return "Partition(%r)" % (self.parts,)

    def __str__(self):
        return ",".join(str(p) for p in self.parts) if self.parts else "0"

    def multiplicity_str(self) -> str:
        if not self.parts:
            return "0"
        mults = self.multiplicities()
        return ",".join("%d^%d" % (i, mults[i]) for i in sorted(mults))


class _Incomparable:
    """Falsy sentinel returned when neither partition dominates the other."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return "INCOMPARABLE"


INCOMPARABLE = _Incomparable()


def dominance_leq(mu: Partition, lam: Partition):
    """Three-valued dominance test for partitions of equal weight.

    True when mu <= lam, INCOMPARABLE (falsy) when neither dominates,
    False when lam < mu strictly.
    """
    if mu.weight != lam.weight:
        raise DomainError(
            "dominance needs equal weights: |%s|=%d, |%s|=%d"
            % (mu, mu.weight, lam, lam.weight)
        )
    n = max(len(mu), len(lam))
    mu_pad = mu.padded(n)
    lam_pad = lam.padded(n)
    le = ge = True
    s_mu = s_lam = 0
    for i in range(n):
        s_mu += mu_pad[i]
        s_lam += lam_pad[i]
        if s_mu > s_lam:
            le = False
        if s_mu < s_lam:
            ge = False
    if le:
        return True
    if ge:
        return False
    return INCOMPARABLE


def dominated_by(mu: Partition, lam: Partition) -> bool:
    """Plain boolean mu <= lam in dominance (equal weights required)."""
    return dominance_leq(mu, lam) is True


def partitions_of(
    d: int, max_length: Optional[int] = None, max_part: Optional[int] = None
) -> Iterator[Partition]:
    """All partitions of d in descending lexicographic order."""
    if d < 0:
        raise DomainError("negative weight %d" % d)
    max_part = d if max_part is None else min(max_part, d)
    max_length = d if max_length is None else max_length

    def rec(remaining, cap, slots):
        if not remaining:
            yield ()
            return
        if not slots:
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in rec(remaining - first, first, slots - 1):
                yield (first,) + rest

    if d == 0:
        yield Partition(())
        return
    for parts in rec(d, max_part, max_length):
        yield Partition(parts)


def partitions_upto(
    max_weight: int, max_length: Optional[int] = None
) -> Iterator[Partition]:
    """Nonempty partitions of weight 1..max_weight, weight-major order."""
    for d in range(1, max_weight + 1):
        yield from partitions_of(d, max_length=max_length)


def enum_box(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Compositions theta in N^n with |theta| <= r, ascending lex order."""
    if n < 0 or r < 0:
        raise DomainError("enum_box needs n, r >= 0")
    if n == 0:
        yield ()
        return

    def rec(slots, budget):
        if slots == 1:
            for v in range(budget + 1):
                yield (v,)
            return
        for v in range(budget + 1):
            for rest in rec(slots - 1, budget - v):
                yield (v,) + rest

    yield from rec(n, r)


class LTMatrix:
    """Lower-triangular n x n matrix of nonnegative integers.

    rows[k-1] holds (theta(k,1), ..., theta(k,k)) for math row k.
    """

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        for k, row in enumerate(rows, start=1):
            if len(row) != k:
                raise DomainError("row %d must have %d entries" % (k, k))
            if any(x < 0 for x in row):
                raise DomainError("negative entry in row %d" % k)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n", len(rows))

    def __setattr__(self, *a):
        raise AttributeError("LTMatrix is immutable")

    def entry(self, k: int, j: int) -> int:
        """theta(k, j), 1-based, zero above the diagonal."""
        if not (1 <= k <= self.n and 1 <= j <= self.n):
            raise DomainError("index out of range")
        return self.rows[k - 1][j - 1] if j <= k else 0

    def row(self, k: int) -> tuple[int, ...]:
        return self.rows[k - 1]

    def row_sum(self, k: int) -> int:
        return sum(self.rows[k - 1])

    def tail_col_sum(self, k: int, i: int) -> int:
        """sum_{j=k+1}^{n} theta(j, i)."""
        return sum(self.rows[j - 1][i - 1] for j in range(max(k + 1, i), self.n + 1))

    def __eq__(self, other):
        return isinstance(other, LTMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "LTMatrix(%r)" % (self.rows,)


def enum_ltm_bases(n: int, bases: Sequence[int]) -> Iterator[LTMatrix]:
    """Lower-triangular matrices with coupled row bounds.

    Row k (filled from k = n down to 1) must satisfy
    sum_j theta(k,j) <= bases[k-1] + sum_{j=k+1}^{n} theta(j, k+1),
    the budget left over after the rows below consumed or donated cells.
    Deterministic order: rows below vary outermost, each row runs through
    enum_box in ascending lex order.
    """
    bases = tuple(int(b) for b in bases)
    if len(bases) != n:
        raise DomainError("need %d row bases, got %d" % (n, len(bases)))

    def rec(k, lower_rows):
        # lower_rows holds rows k+1..n (index 0 -> row k+1)
        if k == 0:
            yield LTMatrix(tuple(reversed(lower_rows)))
            return
        coupling = sum(row[k] for row in lower_rows)  # theta(j, k+1), j > k
        bound = bases[k - 1] + coupling
        for row in enum_box(k, bound):
            yield from rec(k - 1, lower_rows + [row])

    if n == 0:
        yield LTMatrix(())
        return
    yield from rec(n, [])


def enum_ltm(n: int, lam: Partition) -> Iterator[LTMatrix]:
    """The matrices indexing the fully expanded g-side sum for lam.

    lam may have length up to n+1; missing parts count as zero.
    """
    if lam.length > n + 1:
        raise DomainError("partition %s too long for n=%d" % (lam, n))
    padded = lam.padded(n + 1)
    yield from enum_ltm_bases(n, padded[1:])


def compositions_box(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    """All of {0..cap}^n in ascending lex order (orthogonality sweeps)."""
    yield from itertools.product(range(cap + 1), repeat=n)
