"""Rewriting rules for partial bijections: J_{r+1} pairs with a rank-r product.

Every constructor rewrites the two-letter word x_f x_g inside the window
[r+1, r+2], following the four-to-six step proof scripts: expand a letter
into a rank-(r+2) pair, exchange the middle relation, contract back.  The
standard position of a pair (f, g) is recovered by `label`: the r matched
domain points (sorted), f's extra point, and g's extra point.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..maps import UNDEF, Family, PartialMap
from .core import Derivation, MapWord, PreconditionError, Step, empty_derivation, rel


def pm(n: int, pairs: dict[int, int]) -> PartialMap:
    entries = [UNDEF] * n
    for x, y in pairs.items():
        entries[x - 1] = y
    return PartialMap(n, entries)


@dataclass(frozen=True)
class ILabel:
    """Standard position of an I-pair: f = (a_i -> ai_img, fx -> fy),
    g = (ai_img -> b_img, gx -> gy), with fy outside dom g."""

    n: int
    r: int
    a: tuple[int, ...]
    a_img: tuple[int, ...]
    b_img: tuple[int, ...]
    fx: int
    fy: int
    gx: int
    gy: int
    A: tuple[int, ...]  # complement of dom f
    B: tuple[int, ...]  # complement of dom g


def label(f: PartialMap, g: PartialMap) -> ILabel:
    n = f.n
    prod = f.compose(g)
    r = prod.rank
    if f.rank != r + 1 or g.rank != r + 1:
        raise PreconditionError("factors must be in J_{r+1}")
    if not (f.is_injective() and g.is_injective()):
        raise PreconditionError("factors must be partial bijections")
    a = prod.domain()
    a_img = tuple(f(x) for x in a)
    (fx,) = set(f.domain()) - set(a)
    fy = f(fx)
    (gx,) = set(g.domain()) - set(a_img)
    gy = g(gx)
    b_img = tuple(g(x) for x in a_img)
    A = tuple(x for x in range(1, n + 1) if f(x) is None)
    B = tuple(x for x in range(1, n + 1) if g(x) is None)
    return ILabel(n, r, a, a_img, b_img, fx, fy, gx, gy, A, B)


def _window(L: ILabel) -> tuple[int, int]:
    return (L.r + 1, L.r + 2)


def _derivation(f, g, steps, end, meta=()) -> Derivation:
    L = label(f, g)
    return Derivation(Family.I, f.n, _window(L), (f, g), tuple(steps), end, tuple(meta))


def _least(candidates, condition_name: str) -> int:
    for x in sorted(candidates):
        return x
    raise PreconditionError(condition_name)


def rule_i_change_im_alpha(f: PartialMap, g: PartialMap, a: int) -> Derivation:
    """Move f's extra image from a'_{r+1} to a, for a in B minus {a'_{r+1}}."""
    L = label(f, g)
    if a == L.fy:
        return empty_derivation(Family.I, L.n, _window(L), (f, g))
    if a not in L.B:
        raise PreconditionError("a must avoid dom(beta) (a in B)")
    n = L.n
    b = _least(set(range(1, n + 1)) - set(g.image()), "no spare image point for beta_1")
    base = {x: y for x, y in zip(L.a_img, L.b_img)}
    beta1 = pm(n, {**base, L.gx: L.gy, L.fy: b})
    beta1p = pm(n, {**base, L.gx: L.gy, a: b})
    beta2 = pm(n, {y: y for y in g.image()})
    f2 = pm(n, {**{x: y for x, y in zip(L.a, L.a_img)}, L.fx: a})
    steps = [
        Step(1, rel(beta1, beta2), False),
        Step(0, rel(f, beta1), True),
        Step(0, rel(f2, beta1p), False),
        Step(1, rel(beta1p, beta2), True),
    ]
    return _derivation(f, g, steps, (f2, g), (("rule", "I-i"),))


def rule_ii_change_ker_alpha(f: PartialMap, g: PartialMap, a: int) -> Derivation:
    """Move f's extra domain point to a, for a outside dom(alpha)."""
    L = label(f, g)
    if a == L.fx:
        return empty_derivation(Family.I, L.n, _window(L), (f, g))
    if a not in L.A:
        raise PreconditionError("a must avoid dom(alpha) (a in A)")
    n = L.n
    a2 = _least(set(L.A) - {a}, "|A| >= 2 required for the auxiliary point")
    b = _least(set(L.B) - {L.fy}, "B minus {a'_{r+1}} must be nonempty")
    dom_f = dict(zip(L.a, L.a_img))
    alpha1 = pm(n, {x: x for x in (*L.a, L.fx, a)})
    alpha2 = pm(n, {**dom_f, L.fx: L.fy, a2: b})
    alpha2p = pm(n, {**dom_f, a: L.fy, a2: b})
    beta1 = pm(n, {x: x for x in (*L.a_img, L.gx, b)})
    f2 = pm(n, {**dom_f, a: L.fy})
    steps = [
        Step(0, rel(alpha1, alpha2), False),
        Step(2, rel(beta1, g), False),
        Step(1, rel(alpha2, beta1), True),
        Step(1, rel(alpha2p, beta1), False),
        Step(0, rel(alpha1, alpha2p), True),
        Step(1, rel(beta1, g), True),
    ]
    return _derivation(f, g, steps, (f2, g), (("rule", "I-ii"),))


def rule_iii_change_im_beta(f: PartialMap, g: PartialMap, b: int) -> Derivation:
    """Move g's extra image from b'_{r+1} to b, for b outside im(beta)."""
    L = label(f, g)
    if b == L.gy:
        return empty_derivation(Family.I, L.n, _window(L), (f, g))
    if b in g.image():
        raise PreconditionError("b must avoid im(beta)")
    n = L.n
    a = _least(set(L.B) - {L.fy}, "B minus {a'_{r+1}} must be nonempty")
    b2 = _least(
        set(range(1, n + 1)) - set(g.image()) - {b},
        "need a second spare image point",
    )
    base = {x: y for x, y in zip(L.a_img, L.b_img)}
    alpha2 = pm(n, {x: x for x in (*L.a_img, L.fy, a)})
    beta1 = pm(n, {**base, L.gx: L.gy, a: b2})
    beta1p = pm(n, {**base, L.gx: b, a: b2})
    beta2 = pm(n, {y: y for y in (*g.image(), b)})
    g2 = pm(n, {**base, L.gx: b})
    steps = [
        Step(0, rel(f, alpha2), False),
        Step(2, rel(beta1, beta2), False),
        Step(1, rel(alpha2, beta1), True),
        Step(1, rel(alpha2, beta1p), False),
        Step(2, rel(beta1p, beta2), True),
        Step(0, rel(f, alpha2), True),
    ]
    return _derivation(f, g, steps, (f, g2), (("rule", "I-iii"),))


def rule_iv_change_ker_beta(
    f: PartialMap, g: PartialMap, b: int, reading: str = "corrected"
) -> Derivation:
    """Move g's extra domain point to b.

    The admissible set is B minus one point; `reading` picks which exclusion
    applies: "corrected" excludes a'_{r+1} (f's extra image), "literal"
    excludes a_{r+1} (f's extra domain point), as printed.  The literal
    reading can produce a non-injective auxiliary, in which case the
    constructor refuses.
    """
    L = label(f, g)
    if b == L.gx:
        return empty_derivation(Family.I, L.n, _window(L), (f, g))
    if b not in L.B:
        raise PreconditionError("b must avoid dom(beta) (b in B)")
    if reading == "corrected":
        if b == L.fy:
            raise PreconditionError("b must differ from a'_{r+1}")
    elif reading == "literal":
        if b == L.fx:
            raise PreconditionError("b must differ from a_{r+1}")
        if b == L.fy:
            raise PreconditionError(
                "literal reading yields a non-injective auxiliary at b = a'_{r+1}"
            )
    else:
        raise ValueError(f"unknown reading {reading!r}")
    n = L.n
    a = _least(L.A, "dom(alpha) complement must be nonempty")
    b2 = _least(set(range(1, n + 1)) - set(g.image()), "no spare image point")
    dom_f = dict(zip(L.a, L.a_img))
    base = {x: y for x, y in zip(L.a_img, L.b_img)}
    alpha1 = pm(n, {x: x for x in f.domain()})
    alpha2 = pm(n, {**dom_f, L.fx: L.fy, a: L.gx})
    alpha2p = pm(n, {**dom_f, L.fx: L.fy, a: b})
    beta1 = pm(n, {**base, L.gx: L.gy, b: b2})
    beta1p = pm(n, {**base, L.gx: b2, b: L.gy})
    beta2 = pm(n, {y: y for y in g.image()})
    g2 = pm(n, {**base, b: L.gy})
    steps = [
        Step(0, rel(alpha1, alpha2), False),
        Step(2, rel(beta1, beta2), False),
        Step(1, rel(alpha2, beta1), True),
        Step(1, rel(alpha2p, beta1p), False),
        Step(0, rel(alpha1, alpha2p), True),
        Step(1, rel(beta1p, beta2), True),
    ]
    return _derivation(f, g, steps, (f, g2), (("rule", "I-iv"),))


def rule_v_change_ker_beta_global(
    f: PartialMap, g: PartialMap, i: int, a2: int
) -> Derivation:
    """Change f's image at a_i to a2 and shift g's matched domain point with it."""
    L = label(f, g)
    if not 0 <= i < L.r:
        raise PreconditionError("index must address a matched position")
    old = L.a_img[i]
    if a2 == old:
        return empty_derivation(Family.I, L.n, _window(L), (f, g))
    if len(L.B) < 2:
        raise PreconditionError("|B| >= 2 required")
    if a2 not in L.B or a2 == L.fy:
        raise PreconditionError("replacement must lie in B minus {a'_{r+1}}")
    n = L.n
    a = _least(L.A, "dom(alpha) complement must be nonempty")
    dom_f = dict(zip(L.a, L.a_img))
    alpha1 = pm(n, {x: x for x in f.domain()})
    alpha2 = pm(n, {**dom_f, L.fx: L.fy, a: L.gx})
    alpha2p = pm(n, {**{**dom_f, L.a[i]: a2}, L.fx: L.fy, a: L.gx})
    ident = {x: x for x in (*L.a_img, a2, L.gx)}
    beta1 = pm(n, ident)
    beta1p = pm(n, {**ident, old: a2, a2: old})
    f2 = pm(n, {**dom_f, L.a[i]: a2, L.fx: L.fy})
    base = {x: y for x, y in zip(L.a_img, L.b_img)}
    del base[old]
    g2 = pm(n, {**base, a2: L.b_img[i], L.gx: L.gy})
    steps = [
        Step(0, rel(alpha1, alpha2), False),
        Step(2, rel(beta1, g), False),
        Step(1, rel(alpha2, beta1), True),
        Step(1, rel(alpha2p, beta1p), False),
        Step(0, rel(alpha1, alpha2p), True),
        Step(1, rel(beta1p, g), True),
    ]
    return _derivation(f, g, steps, (f2, g2), (("rule", "I-v"),))


def equalize(
    f_t: PartialMap, g_t: PartialMap, f_c: PartialMap, g_c: PartialMap
) -> Derivation:
    """Derivation from x_{f_c} x_{g_c} to x_{f_t} x_{g_t} (equal rank-r products)."""
    prod = f_t.compose(g_t)
    if f_c.compose(g_c) != prod:
        raise PreconditionError("pairs must have equal products")
    Lt = label(f_t, g_t)
    n, r = Lt.n, Lt.r
    cur_f, cur_g = f_c, g_c
    total = empty_derivation(Family.I, n, (r + 1, r + 2), (f_c, g_c))

    def apply(rule, *args):
        nonlocal cur_f, cur_g, total
        d = rule(cur_f, cur_g, *args)
        total = total.then(d)
        cur_f, cur_g = d.end

    # fix the matched images one index at a time
    for i in range(r):
        target = Lt.a_img[i]
        guard = 0
        while label(cur_f, cur_g).a_img[i] != target:
            guard += 1
            if guard > 4:
                raise PreconditionError(f"image fixing loops at index {i}")
            L = label(cur_f, cur_g)
            D = set(L.B)
            if target in D:
                if target == L.fy:
                    spare = _least(D - {L.fy}, "no spare value to displace a'_{r+1}")
                    apply(rule_i_change_im_alpha, spare)
                else:
                    apply(rule_v_change_ker_beta_global, i, target)
            elif target == L.gx:
                spare = _least(D - {L.fy, target}, "no spare domain point for beta")
                apply(rule_iv_change_ker_beta, spare)
            else:
                j = L.a_img.index(target)
                spare = _least(D - {L.fy}, "no spare value to displace a_j'")
                apply(rule_v_change_ker_beta_global, j, spare)

    # f's extra domain point, then extra image
    L = label(cur_f, cur_g)
    if L.fx != Lt.fx:
        apply(rule_ii_change_ker_alpha, Lt.fx)
    L = label(cur_f, cur_g)
    if L.fy != Lt.fy:
        if Lt.fy == L.gx:
            spare = _least(set(L.B) - {L.fy, Lt.fy}, "no spare domain point for beta")
            apply(rule_iv_change_ker_beta, spare)
        apply(rule_i_change_im_alpha, Lt.fy)

    # g's extra image, then extra domain point
    L = label(cur_f, cur_g)
    if L.gy != Lt.gy:
        apply(rule_iii_change_im_beta, Lt.gy)
    L = label(cur_f, cur_g)
    if L.gx != Lt.gx:
        apply(rule_iv_change_ker_beta, Lt.gx)

    if (cur_f, cur_g) != (f_t, g_t):
        raise PreconditionError("equalization did not converge")
    return total
