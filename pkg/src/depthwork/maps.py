"""Partial transformations of [1, n] and the three classical families.

A partial transformation is stored as a length-n tuple of images, with 0
marking an undefined point.  Composition is left to right: x(fg) = (xf)g.
The three families are PT (all partial maps), T (total maps) and I
(partial bijections); T carries epsilon = 1 because it has no rank-0
element, the other two carry epsilon = 0.
"""

from __future__ import annotations

import enum
from itertools import combinations, permutations
from typing import Iterable, Iterator

UNDEF = 0


class Family(enum.Enum):
    PT = "PT"
    T = "T"
    I = "I"

    @property
    def epsilon(self) -> int:
        return 1 if self is Family.T else 0

    def __str__(self) -> str:
        return self.value


class PartialMap:
    """An immutable partial transformation of {1, ..., n}.

    ``entries[i]`` is the image of the point i+1, or 0 when i+1 is not in
    the domain.  Maps order lexicographically by entries (undefined first),
    which fixes the canonical generator order used everywhere else.
    """

    __slots__ = ("n", "entries", "_hash", "_rank")

    def __init__(self, n: int, entries: Iterable[int]):
        entries = tuple(entries)
        if n <= 0:
            raise ValueError("ground set size must be positive")
        if len(entries) != n:
            raise ValueError(f"expected {n} entries, got {len(entries)}")
        for v in entries:
            if not (0 <= v <= n):
                raise ValueError(f"entry {v} outside [0, {n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", hash((n, entries)))
        object.__setattr__(self, "_rank", len({v for v in entries if v}))

    def __setattr__(self, name, value):
        raise AttributeError("PartialMap is immutable")

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_dict(cls, n: int, mapping: dict[int, int]) -> "PartialMap":
        entries = [UNDEF] * n
        for x, y in mapping.items():
            entries[x - 1] = y
        return cls(n, entries)

    @classmethod
    def identity(cls, n: int) -> "PartialMap":
        return cls(n, range(1, n + 1))

    @classmethod
    def empty(cls, n: int) -> "PartialMap":
        return cls(n, [UNDEF] * n)

    # -- basic structure -------------------------------------------------

    def __call__(self, x: int) -> int | None:
        v = self.entries[x - 1]
        return v if v else None

    @property
    def rank(self) -> int:
        return self._rank

    def domain(self) -> tuple[int, ...]:
        return tuple(x for x in range(1, self.n + 1) if self.entries[x - 1])

    def image(self) -> tuple[int, ...]:
        return tuple(sorted({v for v in self.entries if v}))

    def kernel_classes(self) -> tuple[tuple[int, ...], ...]:
        """Partition of the domain by equal image, sorted by image value."""
        by_value: dict[int, list[int]] = {}
        for x in range(1, self.n + 1):
            v = self.entries[x - 1]
            if v:
                by_value.setdefault(v, []).append(x)
        return tuple(tuple(by_value[v]) for v in sorted(by_value))

    def kernel(self) -> tuple[tuple[int, ...], ...]:
        """Kernel as a canonical partition (classes sorted by min element)."""
        return tuple(sorted(self.kernel_classes(), key=lambda c: c[0]))

    # -- family membership ----------------------------------------------

    def is_total(self) -> bool:
        return UNDEF not in self.entries

    def is_injective(self) -> bool:
        return self._rank == len(self.domain())

    def member(self, fam: Family) -> bool:
        if fam is Family.T:
            return self.is_total()
        if fam is Family.I:
            return self.is_injective()
        return True

    # -- algebra ----------------------------------------------------------

    def compose(self, other: "PartialMap") -> "PartialMap":
        """Left-to-right composition: x(self * other) = (x self) other."""
        if self.n != other.n:
            raise ValueError("cannot compose maps on different ground sets")
        g = other.entries
        return PartialMap(self.n, tuple(g[v - 1] if v else UNDEF for v in self.entries))

    __mul__ = compose

    def restrict(self, points: Iterable[int]) -> "PartialMap":
        pts = set(points)
        return PartialMap(
            self.n,
            tuple(v if (x + 1) in pts else UNDEF for x, v in enumerate(self.entries)),
        )

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialMap)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "PartialMap") -> bool:
        return self.entries < other.entries

    def __le__(self, other: "PartialMap") -> bool:
        return self.entries <= other.entries

    def __repr__(self) -> str:
        body = ", ".join(
            f"{x}->{v}" for x, v in enumerate(self.entries, start=1) if v
        )
        return f"PartialMap({self.n}; {body or 'empty'})"

    # -- JSON wire format --------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [v if v else None for v in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "PartialMap":
        return cls(obj["n"], [v if v is not None else UNDEF for v in obj["entries"]])


def compose(f: PartialMap, g: PartialMap) -> PartialMap:
    return f.compose(g)


def rank(f: PartialMap) -> int:
    return f.rank


def image(f: PartialMap) -> tuple[int, ...]:
    return f.image()


def domain(f: PartialMap) -> tuple[int, ...]:
    return f.domain()


def kernel_classes(f: PartialMap) -> tuple[tuple[int, ...], ...]:
    return f.kernel_classes()


def member(f: PartialMap, fam: Family) -> bool:
    return f.member(fam)


def _set_partitions(items: tuple[int, ...], k: int) -> Iterator[list[list[int]]]:
    """All partitions of items into exactly k nonempty blocks."""
    n = len(items)
    if k <= 0 or k > n:
        return
    if k == n:
        yield [[x] for x in items]
        return
    if k == 1:
        yield [list(items)]
        return
    first, rest = items[0], items[1:]
    # first joins an existing block of a (k)-partition of rest
    for part in _set_partitions(rest, k):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
    # first is a singleton block added to a (k-1)-partition of rest
    for part in _set_partitions(rest, k - 1):
        yield [[first]] + part


def all_of_rank(fam: Family, n: int, r: int) -> tuple[PartialMap, ...]:
    """The J-class J_r of the family's monoid, in canonical order."""
    if not (fam.epsilon <= r <= n):
        raise ValueError(f"rank {r} out of range [{fam.epsilon}, {n}] for {fam}")
    points = tuple(range(1, n + 1))
    out: list[PartialMap] = []
    if fam is Family.I:
        for dom in combinations(points, r):
            for img in permutations(points, r):
                entries = [UNDEF] * n
                for x, y in zip(dom, img):
                    entries[x - 1] = y
                out.append(PartialMap(n, entries))
    elif fam is Family.T:
        for part in _set_partitions(points, r):
            for img in permutations(points, r):
                entries = [UNDEF] * n
                for block, y in zip(part, img):
                    for x in block:
                        entries[x - 1] = y
                out.append(PartialMap(n, entries))
    else:
        if r == 0:
            return (PartialMap.empty(n),)
        for size in range(r, n + 1):
            for dom in combinations(points, size):
                for part in _set_partitions(dom, r):
                    for img in permutations(points, r):
                        entries = [UNDEF] * n
                        for block, y in zip(part, img):
                            for x in block:
                                entries[x - 1] = y
                        out.append(PartialMap(n, entries))
    out.sort(key=lambda f: f.entries)
    return tuple(out)


def all_maps(fam: Family, n: int) -> tuple[PartialMap, ...]:
    """Every element of the family's monoid on [1, n], canonically ordered."""
    out: list[PartialMap] = []
    for r in range(fam.epsilon, n + 1):
        out.extend(all_of_rank(fam, n, r))
    out.sort(key=lambda f: f.entries)
    return tuple(out)
