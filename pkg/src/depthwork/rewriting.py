"""Shortlex Knuth-Bendix completion and normal-form counting.

Words are tuples of generator indices; index order is the letter precedence
(the presentation puts high-rank letters first, so rewriting moves words
toward high-rank letters).  For Cayley-restriction presentations every rule
keeps a two-letter left side, so completion always terminates; general
presentations (e.g. after Tietze moves) run under the rule budget.

The set of irreducible words is a factor-avoiding regular language; its
automaton yields an exact normal-form count or a reachable cycle, which
certifies an infinite presented quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentations import Presentation, Word


def shortlex_key(w: Word) -> tuple[int, Word]:
    return (len(w), w)


class RewritingSystem:
    """Oriented rules under shortlex; decides word equality when confluent."""

    def __init__(self, n_generators: int, rules: dict[Word, Word], status: str,
                 steps: int = 0):
        self.n_generators = n_generators
        self.rules = dict(rules)
        self.status = status  # "confluent" | "stopped-at-budget"
        self.steps = steps
        self._lengths = sorted({len(l) for l in rules}, reverse=True)
        self._nf_count: int | str | None = None

    @property
    def confluent(self) -> bool:
        return self.status == "confluent"

    @property
    def n_rules(self) -> int:
        return len(self.rules)

    def normal_form(self, word: Word) -> Word:
        rules = self.rules
        lengths = self._lengths
        out: list[int] = []
        queue = list(reversed(word))
        while queue:
            out.append(queue.pop())
            for L in lengths:
                if len(out) >= L:
                    rhs = rules.get(tuple(out[-L:]))
                    if rhs is not None:
                        del out[-L:]
                        queue.extend(reversed(rhs))
                        break
        return tuple(out)

    def word_equal(self, u: Word, v: Word) -> bool:
        if not self.confluent:
            raise ValueError("word problem undecided: system not confluent")
        return self.normal_form(u) == self.normal_form(v)

    # -- normal-form automaton ------------------------------------------

    def _automaton(self) -> tuple[list[dict[int, int]], int]:
        """DFA over live states accepting exactly the irreducible words.

        State 0 is the empty-prefix root; every state is accepting.  Built as
        an Aho-Corasick machine over the rule left sides, with dead states
        (those completing a left side) removed.
        """
        patterns = list(self.rules)
        # trie
        children: list[dict[int, int]] = [{}]
        terminal = [False]
        for pat in patterns:
            s = 0
            for a in pat:
                t = children[s].get(a)
                if t is None:
                    t = len(children)
                    children.append({})
                    terminal.append(False)
                    children[s][a] = t
                s = t
            terminal[s] = True
        # BFS failure links; propagate terminal through suffix links
        fail = [0] * len(children)
        order: list[int] = []
        from collections import deque

        dq = deque()
        for a, t in children[0].items():
            fail[t] = 0
            dq.append(t)
        while dq:
            s = dq.popleft()
            order.append(s)
            if terminal[fail[s]]:
                terminal[s] = True
            for a, t in children[s].items():
                f = fail[s]
                while f and a not in children[f]:
                    f = fail[f]
                fail[t] = children[f][a] if a in children[f] and children[f][a] != t else 0
                dq.append(t)
        # goto function with failure resolution, skipping dead (terminal) states
        n_states = len(children)

        def goto(s: int, a: int) -> int:
            while True:
                t = children[s].get(a)
                if t is not None:
                    return t
                if s == 0:
                    return 0
                s = fail[s]

        delta: list[dict[int, int]] = [dict() for _ in range(n_states)]
        live = [not t for t in terminal]
        for s in range(n_states):
            if not live[s]:
                continue
            for a in range(self.n_generators):
                t = goto(s, a)
                if live[t]:
                    delta[s][a] = t
                else:
                    delta[s][a] = -1
        return delta, n_states

    def count_normal_forms(self) -> int | str:
        """Exact number of irreducible nonempty words, or "infinite"."""
        if self._nf_count is not None:
            return self._nf_count
        delta, _ = self._automaton()
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {0: WHITE}
        counts: dict[int, int] = {}
        infinite = False

        def visit(s: int) -> int:
            nonlocal infinite
            stack = [(s, iter(sorted(delta[s].items())))]
            color[s] = GRAY
            order_stack = [s]
            # iterative DFS computing counts, detecting reachable cycles
            while stack:
                node, it = stack[-1]
                advanced = False
                for a, t in it:
                    if t == -1:
                        continue
                    c = color.get(t, WHITE)
                    if c == GRAY:
                        infinite = True
                        continue
                    if c == WHITE:
                        color[t] = GRAY
                        stack.append((t, iter(sorted(delta[t].items()))))
                        order_stack.append(t)
                        advanced = True
                        break
                if advanced:
                    continue
                stack.pop()
                order_stack.pop()
                total = 0
                for a, t in sorted(delta[node].items()):
                    if t != -1:
                        total += 1 + counts.get(t, 0)
                counts[node] = total
                color[node] = BLACK
            return counts[s]

        total = visit(0)
        self._nf_count = "infinite" if infinite else total
        return self._nf_count

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rules": self.n_rules,
            "normal_forms": self.count_normal_forms() if self.confluent else None,
            "steps": self.steps,
        }


def _reduce_with(rules: dict[Word, Word], lengths: list[int], word: Word) -> Word:
    out: list[int] = []
    queue = list(reversed(word))
    while queue:
        out.append(queue.pop())
        for L in lengths:
            if len(out) >= L:
                rhs = rules.get(tuple(out[-L:]))
                if rhs is not None:
                    del out[-L:]
                    queue.extend(reversed(rhs))
                    break
    return tuple(out)


def knuth_bendix(p: Presentation, rule_budget: int = 1_000_000) -> RewritingSystem:
    """Complete the presentation's relations into a confluent system, budgeted."""
    return knuth_bendix_raw(p.n_generators, p.relations, rule_budget)


def knuth_bendix_raw(
    n_generators: int, relations, rule_budget: int = 1_000_000
) -> RewritingSystem:
    rules: dict[Word, Word] = {}
    by_first: dict[int, set[Word]] = {}
    by_last: dict[int, set[Word]] = {}
    lengths: list[int] = []
    max_len = 0
    steps = 0

    def reduce(word: Word) -> Word:
        return _reduce_with(rules, lengths, word)

    def remove_rule(l: Word):
        del rules[l]
        by_first[l[0]].discard(l)
        by_last[l[-1]].discard(l)

    def add_rule(l: Word, r: Word):
        nonlocal lengths, max_len
        rules[l] = r
        by_first.setdefault(l[0], set()).add(l)
        by_last.setdefault(l[-1], set()).add(l)
        if len(l) not in lengths:
            lengths = sorted({len(x) for x in rules}, reverse=True)
            max_len = lengths[0]

    pending: list[tuple[Word, Word]] = [(tuple(u), tuple(v)) for u, v in relations]
    unprocessed: list[Word] = []
    added = 0

    def settle_pending() -> bool:
        nonlocal added, steps
        while pending:
            u, v = pending.pop()
            steps += 1
            u, v = reduce(u), reduce(v)
            if u == v:
                continue
            if shortlex_key(u) < shortlex_key(v):
                u, v = v, u
            if len(u) < max_len:
                # interreduce: drop longer rules whose left side contains u
                stale = [l for l in rules if len(l) > len(u) and _contains(l, u)]
                for l in stale:
                    r = rules[l]
                    remove_rule(l)
                    pending.append((l, r))
            add_rule(u, v)
            unprocessed.append(u)
            added += 1
            if added > rule_budget:
                return False
        return True

    if not settle_pending():
        return RewritingSystem(n_generators, rules, "stopped-at-budget", steps)

    while unprocessed:
        l1 = unprocessed.pop()
        r1 = rules.get(l1)
        if r1 is None:
            continue
        # superpositions with l1 on the left: suffix of l1 = prefix of partner
        for o in range(1, len(l1)):
            suffix = l1[len(l1) - o :]
            for l2 in tuple(by_first.get(suffix[0], ())):
                if len(l2) <= o or l2[:o] != suffix:
                    continue
                r2 = rules.get(l2)
                if r2 is None:
                    continue
                steps += 1
                w1 = reduce(r1 + l2[o:])
                w2 = reduce(l1[: len(l1) - o] + r2)
                if w1 != w2:
                    pending.append((w1, w2))
        # superpositions with l1 on the right: suffix of partner = prefix of l1
        for o in range(1, len(l1)):
            prefix = l1[:o]
            for l2 in tuple(by_last.get(prefix[-1], ())):
                if len(l2) <= o or l2[len(l2) - o :] != prefix:
                    continue
                r2 = rules.get(l2)
                if r2 is None:
                    continue
                steps += 1
                w1 = reduce(r2 + l1[o:])
                w2 = reduce(l2[: len(l2) - o] + r1)
                if w1 != w2:
                    pending.append((w1, w2))
        if pending and not settle_pending():
            return RewritingSystem(n_generators, rules, "stopped-at-budget", steps)
        if steps > 400 * rule_budget:
            return RewritingSystem(n_generators, rules, "stopped-at-budget", steps)

    return RewritingSystem(n_generators, rules, "confluent", steps)


def _contains(hay: Word, needle: Word) -> bool:
    nh, nn = len(hay), len(needle)
    return any(hay[i : i + nn] == needle for i in range(nh - nn + 1))
