"""Derivation certificates: words over ideal elements plus checked rewriting.

A derivation records single-relation applications between words whose
letters are maps of one family.  Every cited relation must be of Cayley
shape x_s x_t = x_{st} with all three ranks inside the declared window, so
a passing check certifies "is a consequence of the windowed relation set".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..maps import Family, PartialMap

MapWord = tuple[PartialMap, ...]
Rel = tuple[tuple[PartialMap, PartialMap], tuple[PartialMap]]


class PreconditionError(ValueError):
    """A constructive-lemma side condition failed; the message names it."""


def rel(s: PartialMap, t: PartialMap) -> Rel:
    """The Cayley relation x_s x_t = x_{st}."""
    return ((s, t), (s.compose(t),))


@dataclass(frozen=True)
class Step:
    pos: int
    relation: Rel
    forward: bool  # True: replace (s, t) by (st,); False: the reverse

    def lhs(self) -> MapWord:
        return self.relation[0] if self.forward else self.relation[1]

    def rhs(self) -> MapWord:
        return self.relation[1] if self.forward else self.relation[0]

    def reversed(self) -> "Step":
        return Step(self.pos, self.relation, not self.forward)


@dataclass(frozen=True)
class Derivation:
    fam: Family
    n: int
    window: tuple[int, int]  # inclusive rank window [lo, hi]
    start: MapWord
    steps: tuple[Step, ...]
    end: MapWord
    meta: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    def replay(self) -> MapWord:
        """Apply the steps to the start word, raising on any mismatch."""
        word = self.start
        for k, step in enumerate(self.steps):
            lhs, rhs = step.lhs(), step.rhs()
            if word[step.pos : step.pos + len(lhs)] != lhs:
                raise ValueError(f"step {k}: subword mismatch at position {step.pos}")
            word = word[: step.pos] + rhs + word[step.pos + len(lhs) :]
        return word

    def reversed(self) -> "Derivation":
        return Derivation(
            self.fam,
            self.n,
            self.window,
            self.end,
            tuple(s.reversed() for s in reversed(self.steps)),
            self.start,
            self.meta,
        )

    def then(self, other: "Derivation") -> "Derivation":
        if self.end != other.start:
            raise ValueError("derivations do not chain")
        lo = min(self.window[0], other.window[0])
        hi = max(self.window[1], other.window[1])
        return Derivation(
            self.fam,
            self.n,
            (lo, hi),
            self.start,
            self.steps + other.steps,
            other.end,
            self.meta + other.meta,
        )

    def shifted(self, offset: int, prefix: MapWord, suffix: MapWord) -> "Derivation":
        """Embed into a longer word: prefix + start + suffix, steps offset."""
        return Derivation(
            self.fam,
            self.n,
            self.window,
            prefix + self.start + suffix,
            tuple(Step(s.pos + offset, s.relation, s.forward) for s in self.steps),
            prefix + self.end + suffix,
            self.meta,
        )

    def widened(self, lo: int, hi: int) -> "Derivation":
        return Derivation(
            self.fam,
            self.n,
            (min(lo, self.window[0]), max(hi, self.window[1])),
            self.start,
            self.steps,
            self.end,
            self.meta,
        )


def empty_derivation(fam: Family, n: int, window: tuple[int, int], word: MapWord,
                     meta: tuple[tuple[str, str], ...] = ()) -> Derivation:
    return Derivation(fam, n, window, word, (), word, meta)


def eval_word(word: MapWord) -> PartialMap:
    out = word[0]
    for f in word[1:]:
        out = out.compose(f)
    return out


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str = ""
    failed_step: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def check(d: Derivation) -> CheckResult:
    """Verify every derivation invariant, locating the first failure."""
    lo, hi = d.window
    if not d.start or not d.end:
        return CheckResult(False, "start and end words must be nonempty")
    for w, which in ((d.start, "start"), (d.end, "end")):
        for f in w:
            if f.n != d.n or not f.member(d.fam):
                return CheckResult(False, f"{which} letter outside {d.fam}_{d.n}")
    word = d.start
    for k, step in enumerate(d.steps):
        (s, t), (st,) = step.relation
        if s.compose(t) != st:
            return CheckResult(False, "relation is not of Cayley form", k)
        for letter in (s, t, st):
            if letter.n != d.n or not letter.member(d.fam):
                return CheckResult(False, f"relation letter outside {d.fam}_{d.n}", k)
            if not (lo <= letter.rank <= hi):
                return CheckResult(
                    False,
                    f"rank {letter.rank} outside window [{lo}, {hi}]",
                    k,
                )
        lhs, rhs = step.lhs(), step.rhs()
        if step.pos < 0 or word[step.pos : step.pos + len(lhs)] != lhs:
            return CheckResult(False, "step does not match the current word", k)
        word = word[: step.pos] + rhs + word[step.pos + len(lhs) :]
    if word != d.end:
        return CheckResult(False, "steps do not reach the end word")
    if eval_word(d.start) != eval_word(d.end):
        return CheckResult(False, "start and end evaluate differently")
    return CheckResult(True)
