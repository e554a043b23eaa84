"""Cayley-table presentations, their rank restrictions, and Tietze moves.

A presentation stores an ordered generator alphabet (each symbol labeled by
the ideal element it names) plus relations as pairs of index words.  The
generator order is rank-descending then canonical map order, so shortlex
rewriting pushes words toward high-rank letters, and the generator list of
a restriction is a prefix of the full Cayley list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ideals import IdealSpec, ideal_elements
from .maps import PartialMap

Word = tuple[int, ...]
Relation = tuple[Word, Word]


class TietzeError(ValueError):
    """A Tietze move was rejected; the message says why."""


@dataclass(frozen=True)
class Presentation:
    symbols: tuple[str, ...]
    labels: tuple[PartialMap, ...] = field(repr=False)
    relations: tuple[Relation, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.symbols) != len(self.labels):
            raise ValueError("one label per symbol required")
        k = len(self.symbols)
        for u, v in self.relations:
            if not u or not v:
                raise ValueError("relation sides must be nonempty words")
            if any(not 0 <= a < k for a in u + v):
                raise ValueError("relation uses an undeclared generator")

    @property
    def n_generators(self) -> int:
        return len(self.symbols)

    def evaluate(self, word: Word) -> PartialMap:
        out = self.labels[word[0]]
        for a in word[1:]:
            out = out.compose(self.labels[a])
        return out

    def relations_valid(self) -> bool:
        return all(self.evaluate(u) == self.evaluate(v) for u, v in self.relations)

    def cayley_rules(self) -> list[tuple[int, int, int]] | None:
        """Relations as (a, b, c) triples when all have the x_a x_b = x_c shape."""
        triples = []
        for u, v in self.relations:
            if len(u) == 2 and len(v) == 1:
                triples.append((u[0], u[1], v[0]))
            elif len(u) == 1 and len(v) == 2:
                triples.append((v[0], v[1], u[0]))
            else:
                return None
        return triples

    def symbol_word(self, word: Word) -> list[str]:
        return [self.symbols[a] for a in word]

    def to_json(self) -> dict:
        return {
            "generators": [
                {"symbol": s, "map": m.to_json()}
                for s, m in zip(self.symbols, self.labels)
            ],
            "relations": [
                [self.symbol_word(u), self.symbol_word(v)] for u, v in self.relations
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Presentation":
        symbols = tuple(g["symbol"] for g in obj["generators"])
        labels = tuple(PartialMap.from_json(g["map"]) for g in obj["generators"])
        index = {s: i for i, s in enumerate(symbols)}
        rels = tuple(
            (tuple(index[s] for s in u), tuple(index[s] for s in v))
            for u, v in obj["relations"]
        )
        return cls(symbols, labels, rels)


def generator_order(spec: IdealSpec) -> tuple[PartialMap, ...]:
    """All ideal elements, rank descending then canonical: the Cayley alphabet."""
    elems = ideal_elements(spec).elements()
    return tuple(sorted(elems, key=lambda f: (-f.rank, f.entries)))


def cayley(spec: IdealSpec) -> Presentation:
    """The Cayley table presentation: x_s x_t = x_{st} for all s, t."""
    return restriction(spec, spec.epsilon)


def restriction(spec: IdealSpec, i: int) -> Presentation:
    """The restriction C_i: generators of rank >= i, products staying there."""
    if not (spec.epsilon <= i <= spec.m):
        raise ValueError(f"restriction index {i} outside [{spec.epsilon}, {spec.m}]")
    order = generator_order(spec)
    gens = tuple(f for f in order if f.rank >= i)
    index = {f: k for k, f in enumerate(gens)}
    rels: list[Relation] = []
    for a, f in enumerate(gens):
        for b, g in enumerate(gens):
            fg = f.compose(g)
            if fg.rank >= i:
                rels.append(((a, b), (index[fg],)))
    symbols = tuple(f"g{k}" for k in range(len(gens)))
    return Presentation(symbols, gens, tuple(rels))


def _substitute(word: Word, target: int, repl: Word) -> Word:
    out: list[int] = []
    for a in word:
        if a == target:
            out.extend(repl)
        else:
            out.append(a)
    return tuple(out)


def _drop_generator(p: Presentation, idx: int, repl: Word) -> Presentation:
    """Remove generator idx, replacing its occurrences by repl (over old indices)."""
    remap = {}
    j = 0
    for k in range(p.n_generators):
        if k != idx:
            remap[k] = j
            j += 1

    def rebuild(word: Word) -> Word:
        return tuple(remap[a] for a in _substitute(word, idx, repl))

    rels = []
    for u, v in p.relations:
        u2, v2 = rebuild(u), rebuild(v)
        if u2 != v2:
            rels.append((u2, v2))
    symbols = tuple(s for k, s in enumerate(p.symbols) if k != idx)
    labels = tuple(l for k, l in enumerate(p.labels) if k != idx)
    return Presentation(symbols, labels, tuple(rels))


def tietze(p: Presentation, move: str, payload, *, budgets=None) -> Presentation:
    """Apply an elementary Tietze transformation, verifying its side condition.

    T1 adds a relation deducible from the current ones; T2 removes a relation
    deducible from the rest; T3 adjoins a fresh symbol with a defining word;
    T4 eliminates a symbol b via a relation b = w with b absent from w.
    Consequence checks run the rewriting/enumeration engines under budgets and
    reject (with the reason) when the check fails or stays inconclusive.
    """
    from .wordproblem import consequence  # local import to avoid a cycle

    if budgets is None:
        from .budgets import Budgets

        budgets = Budgets()

    if move == "T1":
        u, v = payload
        verdict = consequence(p.relations, (u, v), p.n_generators, budgets)
        if verdict is not True:
            raise TietzeError(
                f"T1 rejected: relation is {'not deducible' if verdict is False else 'not provably deducible (budget)'}"
            )
        if p.evaluate(u) != p.evaluate(v):
            raise TietzeError("T1 rejected: sides evaluate differently")
        return Presentation(p.symbols, p.labels, p.relations + ((tuple(u), tuple(v)),))

    if move == "T2":
        u, v = tuple(payload[0]), tuple(payload[1])
        if (u, v) not in p.relations and (v, u) not in p.relations:
            raise TietzeError("T2 rejected: relation not present")
        rest = tuple(r for r in p.relations if r not in ((u, v), (v, u)))
        verdict = consequence(rest, (u, v), p.n_generators, budgets)
        if verdict is not True:
            raise TietzeError(
                f"T2 rejected: relation is {'not a consequence of the rest' if verdict is False else 'not provably redundant (budget)'}"
            )
        return Presentation(p.symbols, p.labels, rest)

    if move == "T3":
        name, word = payload
        word = tuple(word)
        if name in p.symbols:
            raise TietzeError(f"T3 rejected: symbol {name!r} already declared")
        if not word or any(not 0 <= a < p.n_generators for a in word):
            raise TietzeError("T3 rejected: defining word must be nonempty over the alphabet")
        b = p.n_generators
        return Presentation(
            p.symbols + (name,),
            p.labels + (p.evaluate(word),),
            p.relations + (((b,), word),),
        )

    if move == "T4":
        name = payload
        if name not in p.symbols:
            raise TietzeError(f"T4 rejected: no symbol {name!r}")
        idx = p.symbols.index(name)
        defining = None
        for u, v in p.relations:
            if u == (idx,) and idx not in v:
                defining = v
                break
            if v == (idx,) and idx not in u:
                defining = u
                break
        if defining is None:
            raise TietzeError(
                f"T4 rejected: no relation {name} = w with {name} absent from w"
            )
        return _drop_generator(p, idx, defining)

    raise TietzeError(f"unknown Tietze move {move!r}")
