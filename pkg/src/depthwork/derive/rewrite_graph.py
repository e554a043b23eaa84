"""Single-step rewriting graph of windowed Cayley relations on map words.

Moves are forward contractions x_s x_t -> x_{st} (product rank in window)
and backward expansions x_s -> x_u x_v with uv = s and all ranks in window.
Used by bounded_invariance and as the independent reachability oracle in the
test suite.
"""

from __future__ import annotations

from collections import deque

from ..maps import UNDEF, Family, PartialMap, all_of_rank
from .core import MapWord


class FactorCatalog:
    """Lazy per-letter catalog of in-window two-letter factorizations."""

    def __init__(self, fam: Family, n: int, lo: int, hi: int):
        self.fam = fam
        self.n = n
        self.lo = lo
        self.hi = hi
        self._by_rank: dict[int, tuple[PartialMap, ...]] = {}
        self._cache: dict[PartialMap, tuple[tuple[PartialMap, PartialMap], ...]] = {}

    def of_rank(self, r: int) -> tuple[PartialMap, ...]:
        if r not in self._by_rank:
            self._by_rank[r] = all_of_rank(self.fam, self.n, r)
        return self._by_rank[r]

    def factorizations(self, s: PartialMap) -> tuple[tuple[PartialMap, PartialMap], ...]:
        """All (u, v) with uv = s and rank(u), rank(v) within the window."""
        cached = self._cache.get(s)
        if cached is not None:
            return cached
        out: list[tuple[PartialMap, PartialMap]] = []
        n, fam = self.n, self.fam
        s_dom = s.domain()
        for ru in range(max(self.lo, s.rank), self.hi + 1):
            for u in self.of_rank(ru):
                forced: dict[int, int] = {}
                ok = True
                for x in s_dom:
                    ux = u.entries[x - 1]
                    if ux == UNDEF:
                        ok = False
                        break
                    want = s.entries[x - 1]
                    got = forced.get(ux)
                    if got is None:
                        forced[ux] = want
                    elif got != want:
                        ok = False
                        break
                if not ok:
                    continue
                blocked = set()
                for x in u.domain():
                    if s.entries[x - 1] == UNDEF:
                        ux = u.entries[x - 1]
                        if ux in forced:
                            ok = False
                            break
                        blocked.add(ux)
                if not ok:
                    continue
                free = [
                    x
                    for x in range(1, n + 1)
                    if x not in forced and x not in blocked
                ]
                for v in self._extensions(forced, free):
                    out.append((u, v))
        result = tuple(out)
        self._cache[s] = result
        return result

    def _extensions(self, forced: dict[int, int], free: list[int]):
        """All family members extending `forced`, undefined on blocked points."""
        n, fam, lo, hi = self.n, self.fam, self.lo, self.hi
        base_image = set(forced.values())

        def rec(i: int, assign: dict[int, int], image: set[int]):
            if len(image) > hi:
                return
            if i == len(free):
                if lo <= len(image) <= hi:
                    entries = [UNDEF] * n
                    for x, y in assign.items():
                        entries[x - 1] = y
                    yield PartialMap(n, entries)
                return
            x = free[i]
            if fam is not Family.T:
                yield from rec(i + 1, assign, image)
            values = range(1, n + 1)
            for y in values:
                if fam is Family.I and y in image:
                    continue
                assign[x] = y
                added = y not in image
                if added:
                    image.add(y)
                yield from rec(i + 1, assign, image)
                if added:
                    image.discard(y)
                del assign[x]

        yield from rec(0, dict(forced), set(base_image))


def successors(word: MapWord, catalog: FactorCatalog) -> list[MapWord]:
    """All words one windowed relation application away."""
    lo, hi = catalog.lo, catalog.hi
    out: list[MapWord] = []
    for i in range(len(word) - 1):
        p = word[i].compose(word[i + 1])
        if lo <= p.rank <= hi and p.member(catalog.fam):
            out.append(word[:i] + (p,) + word[i + 2 :])
    for i, s in enumerate(word):
        for u, v in catalog.factorizations(s):
            out.append(word[:i] + (u, v) + word[i + 1 :])
    return out


def bfs_reachable(
    start: MapWord,
    catalog: FactorCatalog,
    max_depth: int,
    max_states: int = 200_000,
    max_len: int | None = None,
    visit=None,
) -> tuple[dict[MapWord, int], bool]:
    """Breadth-first closure; returns (visited -> depth, truncated?)."""
    visited: dict[MapWord, int] = {start: 0}
    if visit is not None:
        visit(start)
    frontier = deque([start])
    truncated = False
    while frontier:
        word = frontier.popleft()
        depth = visited[word]
        if depth >= max_depth:
            continue
        for nxt in successors(word, catalog):
            if max_len is not None and len(nxt) > max_len:
                continue
            if nxt in visited:
                continue
            if len(visited) >= max_states:
                truncated = True
                return visited, truncated
            visited[nxt] = depth + 1
            if visit is not None:
                visit(nxt)
            frontier.append(nxt)
    return visited, truncated
