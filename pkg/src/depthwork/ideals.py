"""Ideals I_m, their J-class chains, and Green's L/R predicates.

In each family the J-classes are the constant-rank layers and they form a
chain; the ideal I_m is the downward-closed union of the layers of rank at
most m.  The depth of the rank-r layer inside I_m is m - r + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .maps import Family, PartialMap, all_of_rank


@dataclass(frozen=True)
class IdealSpec:
    """The ideal of all rank-<= m elements of fam's monoid on [1, n]."""

    fam: Family
    n: int
    m: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be positive")
        if not (self.fam.epsilon <= self.m <= self.n):
            raise ValueError(
                f"m={self.m} outside [{self.fam.epsilon}, {self.n}] for {self.fam}"
            )

    @property
    def epsilon(self) -> int:
        return self.fam.epsilon

    def __str__(self) -> str:
        return f"I_{self.m}({self.fam}_{self.n})"


@dataclass(frozen=True)
class JChain:
    """The J-classes of an ideal, bottom (rank epsilon) to top (rank m)."""

    spec: IdealSpec
    classes: tuple[tuple[int, tuple[PartialMap, ...]], ...] = field(repr=False)

    def size(self) -> int:
        return sum(len(elems) for _, elems in self.classes)

    def class_of_rank(self, r: int) -> tuple[PartialMap, ...]:
        for rr, elems in self.classes:
            if rr == r:
                return elems
        raise ValueError(f"rank {r} not in {self.spec}")

    def elements(self) -> tuple[PartialMap, ...]:
        out: list[PartialMap] = []
        for _, elems in self.classes:
            out.extend(elems)
        return tuple(sorted(out, key=lambda f: f.entries))


def ideal_elements(spec: IdealSpec) -> JChain:
    classes = tuple(
        (r, all_of_rank(spec.fam, spec.n, r))
        for r in range(spec.epsilon, spec.m + 1)
    )
    return JChain(spec, classes)


def ideal_size(spec: IdealSpec) -> int:
    return ideal_elements(spec).size()


def depth_of_class(spec: IdealSpec, r: int) -> int:
    """Depth of the rank-r J-class inside I_m: m - r + 1."""
    if not (spec.epsilon <= r <= spec.m):
        raise ValueError(f"rank {r} outside [{spec.epsilon}, {spec.m}]")
    return spec.m - r + 1


def l_related(f: PartialMap, g: PartialMap) -> bool:
    """Green's L: equal images."""
    if f.n != g.n:
        raise ValueError("maps on different ground sets")
    return f.image() == g.image()


def r_related(f: PartialMap, g: PartialMap) -> bool:
    """Green's R: equal kernels (equal domains and equal partitions)."""
    if f.n != g.n:
        raise ValueError("maps on different ground sets")
    return f.domain() == g.domain() and f.kernel() == g.kernel()
