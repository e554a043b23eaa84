"""Element enumeration of a finitely presented semigroup A+/R#.

This is the semigroup analogue of coset enumeration: adjoin a virtual
identity node, trace every relation at every node (defining nodes as
needed), and merge forced coincidences.  When the table closes, the live
nodes other than the identity are exactly the congruence classes; budget
exhaustion is reported as a status, never as a wrong count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentations import Presentation, Word


@dataclass(frozen=True)
class CongruenceTable:
    status: str  # "closed" | "budget-exceeded"
    n_classes: int | None
    rep_words: tuple[Word, ...] = field(repr=False, default=())
    gen_class: tuple[int, ...] = field(repr=False, default=())
    table: tuple[tuple[int, ...], ...] = field(repr=False, default=())
    nodes_defined: int = 0
    steps: int = 0

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def class_of(self, word: Word) -> int:
        """Class index of a nonempty word (closed tables only)."""
        if not self.closed:
            raise ValueError("table not closed")
        c = self.gen_class[word[0]]
        for g in word[1:]:
            c = self.table[c][g]
        return c

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "classes": self.n_classes,
            "nodes_defined": self.nodes_defined,
            "steps": self.steps,
        }


class _Enumerator:
    def __init__(self, p: Presentation, size_budget: int, step_budget: int):
        self.relations = p.relations
        self.k = p.n_generators
        self._init(size_budget, step_budget)

    @classmethod
    def raw(cls, n_generators: int, relations, size_budget: int, step_budget: int):
        obj = cls.__new__(cls)
        obj.relations = tuple(relations)
        obj.k = n_generators
        obj._init(size_budget, step_budget)
        return obj

    def _init(self, size_budget: int, step_budget: int):
        self.size_budget = size_budget
        self.step_budget = step_budget
        self.steps = 0
        # node 0 is the adjoined identity; tables grow as nodes are defined
        self.parent = [0]
        self.tab: list[list[int]] = [[-1] * self.k]
        self.defined_words: list[tuple[int, int]] = [(-1, -1)]  # (pred node, gen)
        self.n_defined = 1
        self.n_live = 1
        self.pending: list[tuple[int, int]] = []
        self.over_budget = False

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def follow(self, node: int, gen: int, define: bool) -> int:
        node = self.find(node)
        t = self.tab[node][gen]
        if t != -1:
            return self.find(t)
        if not define:
            return -1
        if self.n_live >= self.size_budget + 1:
            self.over_budget = True
            return -1
        new = len(self.parent)
        self.parent.append(new)
        self.tab.append([-1] * self.k)
        self.defined_words.append((node, gen))
        self.tab[node][gen] = new
        self.n_defined += 1
        self.n_live += 1
        return new

    def coincide(self, a: int, b: int) -> None:
        self.pending.append((a, b))
        while self.pending:
            x, y = self.pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            self.parent[y] = x
            self.n_live -= 1
            row_x, row_y = self.tab[x], self.tab[y]
            for g in range(self.k):
                ty = row_y[g]
                if ty == -1:
                    continue
                tx = row_x[g]
                if tx == -1:
                    row_x[g] = ty
                else:
                    self.pending.append((tx, ty))

    def trace(self, node: int, word: Word) -> int:
        for g in word:
            node = self.follow(node, g, True)
            if node == -1:
                return -1
        return node

    def run(self) -> CongruenceTable:
        rels = self.relations
        changed = True
        while changed and not self.over_budget:
            changed = False
            for node in range(len(self.parent)):
                if self.parent[node] != node:
                    continue
                for u, v in rels:
                    self.steps += len(u) + len(v)
                    if self.steps > self.step_budget:
                        self.over_budget = True
                        break
                    before_nodes = self.n_defined
                    a = self.trace(node, u)
                    if a == -1:
                        break
                    b = self.trace(self.find(node), v)
                    if b == -1:
                        break
                    if self.find(a) != self.find(b):
                        self.coincide(a, b)
                        changed = True
                    if self.n_defined != before_nodes:
                        changed = True
                    if self.parent[node] != node:
                        break  # node merged away mid-scan; revisit survivor later
                if self.over_budget:
                    break
            if self.over_budget:
                break
            if not changed:
                # closure also requires a total table on live nodes
                for node in range(len(self.parent)):
                    if self.parent[node] != node:
                        continue
                    for g in range(self.k):
                        if self.tab[node][g] == -1:
                            if self.follow(node, g, True) == -1:
                                self.over_budget = True
                                break
                            changed = True
                    if self.over_budget:
                        break
                if self.over_budget:
                    break

        if self.over_budget:
            return CongruenceTable(
                "budget-exceeded", None, (), (), (), self.n_defined, self.steps
            )

        live = [x for x in range(len(self.parent)) if self.parent[x] == x]
        renum = {x: i for i, x in enumerate(live)}  # identity -> 0
        reps = self._representatives(live)
        # classes are live nodes minus the identity, renumbered from 0
        table = tuple(
            tuple(renum[self.find(self.tab[x][g])] - 1 for g in range(self.k))
            for x in live[1:]
        )
        gen_class = tuple(
            renum[self.find(self.tab[0][g])] - 1 for g in range(self.k)
        )
        return CongruenceTable(
            "closed",
            len(live) - 1,
            tuple(reps[x] for x in live[1:]),
            gen_class,
            table,
            self.n_defined,
            self.steps,
        )

    def _representatives(self, live: list[int]) -> dict[int, Word]:
        reps: dict[int, Word] = {}

        def word_to(x: int) -> Word:
            if x in reps:
                return reps[x]
            pred, gen = self.defined_words[x]
            w: Word = () if pred == -1 else word_to(pred) + (gen,)
            reps[x] = w
            return w

        return {x: word_to(x) for x in live}


def enumerate_quotient(
    p: Presentation, size_budget: int, step_budget: int = 50_000_000
) -> CongruenceTable:
    """Enumerate A+/R# for a presentation; exact class count on closure."""
    return _Enumerator(p, size_budget, step_budget).run()
