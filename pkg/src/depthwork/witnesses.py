"""Lower-bound witnesses: pairs whose Cayley relation resists high-rank proof.

The constructors build, exactly per the proof formulas, rank-m pairs whose
products collapse two J-levels down: alpha * beta = beta^2 = alpha * beta^2
lands in J_{r-1}.  The relation x_alpha x_beta^2 = x_beta^2 then cannot be a
consequence of the rank->=r restriction, which is what the split-form
invariant certifies at bounded depth.
"""

from __future__ import annotations

from .maps import UNDEF, Family, PartialMap


class WitnessRangeError(ValueError):
    pass


def counterexample(fam: Family, n: int, m: int, r: int) -> tuple[PartialMap, PartialMap]:
    """The proof-formula pair (alpha, beta) in J_m with products in J_{r-1}.

    Valid for m < n and max(2m - n, epsilon) < r <= m.  (The stated range in
    the source material stops at r < m; r = m is the same construction and is
    what the top restriction's witness needs.)
    """
    eps = fam.epsilon
    if not m < n:
        raise WitnessRangeError(f"need m < n, got m={m}, n={n}")
    if not (max(2 * m - n, eps) < r <= m):
        raise WitnessRangeError(
            f"need max(2m-n, eps) < r <= m, got r={r} with 2m-n={2 * m - n}, eps={eps}"
        )
    if fam is Family.T:
        alpha_entries = [x if x <= m - 1 else m for x in range(1, n + 1)]
        beta_entries = []
        for x in range(1, n + 1):
            if x <= r - 2:
                beta_entries.append(x)
            elif x <= m:
                beta_entries.append(r - 1)
            elif x <= 2 * m - r:
                beta_entries.append(x - (m + 1) + r)
            else:
                beta_entries.append(m)
        alpha = PartialMap(n, alpha_entries)
        beta = PartialMap(n, beta_entries)
    else:
        alpha = PartialMap(n, [x if x <= m else UNDEF for x in range(1, n + 1)])
        entries = [UNDEF] * n
        for i in range(1, r):
            entries[i - 1] = i
        for j in range(r, m + 1):
            entries[m + 1 + (j - r) - 1] = j
        beta = PartialMap(n, entries)

    ab = alpha.compose(beta)
    bb = beta.compose(beta)
    abb = ab.compose(beta)
    assert alpha.rank == m and beta.rank == m, "witness not in J_m"
    assert alpha.member(fam) and beta.member(fam)
    assert ab == bb == abb and ab.rank == r - 1, "witness identities failed"
    return alpha, beta


def witness_words(
    alpha: PartialMap, beta: PartialMap
) -> tuple[tuple[PartialMap, ...], tuple[PartialMap, ...]]:
    """The unequal-looking pair (x_alpha x_beta x_beta, x_beta x_beta)."""
    return (alpha, beta, beta), (beta, beta)


def split_form(
    w: tuple[PartialMap, ...], alpha: PartialMap, beta: PartialMap, r: int
) -> bool:
    """Does w split as (word for alpha)(word for beta) with a rank-r junction?

    All letters must sit in the J-class of alpha and beta; the prefix must
    multiply to alpha, the suffix to beta, and the junction product must have
    rank exactly r.  This is the shape every word derivable from
    x_alpha x_beta under rank->=r+1 relations keeps.
    """
    m = alpha.rank
    if beta.rank != m or alpha.compose(beta).rank != r:
        raise ValueError("need alpha, beta of equal rank with a rank-r product")
    if any(f.rank != m for f in w):
        return False
    for cut in range(1, len(w)):
        prefix = w[0]
        for f in w[1:cut]:
            prefix = prefix.compose(f)
        if prefix != alpha:
            continue
        suffix = w[cut]
        for f in w[cut + 1 :]:
            suffix = suffix.compose(f)
        if suffix != beta:
            continue
        if w[cut - 1].compose(w[cut]).rank == r:
            return True
    return False
