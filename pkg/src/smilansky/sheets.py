"""Combinatorics of the Riemann surface swept out by the branch square roots.

A sheet is labelled by the finite set E of indices whose square-root branch
is flipped.  Crossing the real interval (nu_n, nu_{n+1}) flips the branches
of the first n+1 roots at once, so all sheet moves are prefix flips of the
characteristic 0/1 vector.  Only sheets at finite distance from the physical
sheet (finite support) are representable here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

# Largest representable member index.  All operations are prefix XORs on a
# 64-bit mask, which covers every sheet this package can usefully explore.
SUPPORT_MAX = 63


def _prefix_mask(n: int) -> int:
    """Bitmask of indices 0..n; empty for n = -1."""
    if n < 0:
        return 0
    return (1 << (n + 1)) - 1


@dataclass(frozen=True)
class SheetId:
    """A sheet of the Riemann surface, identified by its flipped-branch set.

    ``mask`` holds the member set as a bitmask: bit n is set exactly when
    the n-th square root lives on its second branch.  Two SheetId values
    are equal iff their member sets are equal.
    """

    mask: int = 0

    def __post_init__(self):
        if not 0 <= self.mask < (1 << (SUPPORT_MAX + 1)):
            raise ValueError(
                "sheet members must lie in 0..%d (got mask %#x)" % (SUPPORT_MAX, self.mask)
            )

    @classmethod
    def from_members(cls, members: Iterable[int]) -> "SheetId":
        mask = 0
        for n in members:
            if n < 0:
                raise ValueError("sheet members must be non-negative")
            mask |= 1 << n
        return cls(mask)

    @classmethod
    def from_text(cls, text: str) -> "SheetId":
        """Parse a comma-separated member list; the empty string is the physical sheet."""
        text = text.strip()
        if not text:
            return cls(0)
        try:
            members = [int(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise ValueError("malformed sheet %r, expected e.g. '1,2,4,5'" % text) from exc
        return cls.from_members(members)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(n for n in range(SUPPORT_MAX + 1) if self.mask >> n & 1)

    @property
    def is_physical(self) -> bool:
        return self.mask == 0

    @property
    def max_index(self) -> int:
        """Largest member, or -1 for the physical sheet."""
        return self.mask.bit_length() - 1

    def to_text(self) -> str:
        return ",".join(str(n) for n in self.members)

    def __str__(self) -> str:
        return self.to_text() or "(physical)"


PHYSICAL = SheetId(0)


def branch(E: SheetId, n: int) -> int:
    """Branch indicator of the n-th square root on sheet E (0 or 1).

    Returns 0 for n = -1 by convention, and 0 beyond the support bound.
    """
    if n < 0 or n > SUPPORT_MAX:
        return 0
    return E.mask >> n & 1


def adjacent_through(E: SheetId, n: int) -> SheetId:
    """Sheet reached from E by crossing the interval (nu_n, nu_{n+1}).

    Flips the branch of every root with index <= n.  For n = -1 this is
    the identity: every sheet is adjacent to itself through (-inf, nu_0).
    """
    if n > SUPPORT_MAX:
        raise ValueError("adjacency index exceeds the support bound %d" % SUPPORT_MAX)
    return SheetId(E.mask ^ _prefix_mask(n))


def rho(E: SheetId, F: SheetId) -> int:
    """Number of sheets in the shortest adjacency path from E to F.

    A path of k moves visits k+1 sheets, so rho(E, E) = 1.  Each prefix
    flip toggles exactly one difference d_m XOR d_{m+1} of the combined
    characteristic vector d = l^E XOR l^F, hence the minimal move count
    is the number of those jumps (the flip at the end of d's support
    included).  Validated against breadth-first search in the tests.
    """
    d = E.mask ^ F.mask
    jumps = bin(d ^ (d >> 1)).count("1")
    return jumps + 1


def threshold_set(E: SheetId, n_max: int | None = None) -> set[int]:
    """Threshold indices that carry a weak-coupling resonance on sheet E.

    Collects n in 1..n_max whose branch triple (l_{n-1}, l_n, l_{n+1})
    is (1,0,0) or (0,1,1).  Beyond max(E)+1 every triple is (0,0,0), so
    the default n_max = max(E)+2 already yields the complete set.
    """
    if n_max is None:
        n_max = max(E.max_index, 0) + 2
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    hits = set()
    for n in range(1, n_max + 1):
        triple = (branch(E, n - 1), branch(E, n), branch(E, n + 1))
        if triple in ((1, 0, 0), (0, 1, 1)):
            hits.add(n)
    return hits


def sector_chain(E: SheetId, n: int) -> tuple[SheetId, SheetId, SheetId, SheetId]:
    """The four sheets glued around the threshold nu_n, starting from E.

    Returns (E, F, G, H) with F adjacent to E through the interval left of
    nu_n, G adjacent to F through the interval right of nu_n, and H again
    through the left interval.  H is then adjacent to E through the right
    interval, which closes the cycle.
    """
    F = adjacent_through(E, n - 1)
    G = adjacent_through(F, n)
    H = adjacent_through(G, n - 1)
    return (E, F, G, H)
