"""Rules for "covered" pairs: im f inside dom g, one g-class doubly hit.

This shape is exactly the T_n situation and Case 1 of PT_n, so one
implementation serves both; the family tag only decides membership checks.
Every auxiliary letter built here is a total map or a partial map supported
on dom g, hence lies in the right family automatically.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..maps import UNDEF, Family, PartialMap
from .core import Derivation, PreconditionError, Step, empty_derivation, rel
from .family_i import pm


@dataclass(frozen=True)
class C1Label:
    n: int
    r: int
    f_blocks: tuple[tuple[tuple[int, ...], int], ...]  # (block, image), block-min order
    g_blocks: tuple[tuple[tuple[int, ...], int], ...]
    dbl: int  # index into g_blocks of the doubly hit class
    b_ex: int  # index into g_blocks of the unhit class
    pair: tuple[int, int]  # indices into f_blocks of the two classes hitting dbl


def _blocks(f: PartialMap) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple(
        sorted(((c, f(c[0])) for c in f.kernel_classes()), key=lambda t: t[0][0])
    )


def label(f: PartialMap, g: PartialMap) -> C1Label:
    n = f.n
    prod = f.compose(g)
    r = prod.rank
    if f.rank != r + 1 or g.rank != r + 1:
        raise PreconditionError("factors must be in J_{r+1}")
    imf = set(f.image())
    if not imf <= set(g.domain()):
        raise PreconditionError("pair is not covered (im f must lie inside dom g)")
    fb = _blocks(f)
    gb = _blocks(g)
    hits = [sum(1 for x in imf if x in set(block)) for block, _ in gb]
    if sorted(hits) != [0] + [1] * (r - 1) + [2]:
        raise PreconditionError("product does not drop exactly one rank level")
    dbl = hits.index(2)
    b_ex = hits.index(0)
    dbl_set = set(gb[dbl][0])
    pair = tuple(i for i, (_, img) in enumerate(fb) if img in dbl_set)
    return C1Label(n, r, fb, gb, dbl, b_ex, pair)


def _mk(fam: Family, f, g, steps, end, tag) -> Derivation:
    r = f.compose(g).rank
    return Derivation(fam, f.n, (r + 1, r + 2), (f, g), tuple(steps), end, (("rule", tag),))


def _least(candidates, condition: str) -> int:
    for x in sorted(candidates):
        return x
    raise PreconditionError(condition)


def _total(n: int, fixed: dict[int, int], catch: int) -> PartialMap:
    return PartialMap(n, [fixed.get(x, catch) for x in range(1, n + 1)])


def _with_class_image(g: PartialMap, block: tuple[int, ...], img: int) -> PartialMap:
    entries = list(g.entries)
    for x in block:
        entries[x - 1] = img
    return PartialMap(g.n, entries)


def im_beta(fam: Family, f: PartialMap, g: PartialMap, new_y: int) -> Derivation:
    """Change the unhit g-class's image to new_y (outside im g)."""
    L = label(f, g)
    n, r = L.n, L.r
    ex_block, y = L.g_blocks[L.b_ex]
    if new_y == y:
        return empty_derivation(fam, n, (r + 1, r + 2), (f, g))
    if new_y in g.image():
        raise PreconditionError("new image must avoid im(beta)")
    img_g = set(g.image())
    fresh = _least(
        set(range(1, n + 1)) - img_g - {new_y}, "no spare image point (need n >= r+3)"
    )
    p_img = L.f_blocks[L.pair[0]][1]
    q_img = L.f_blocks[L.pair[1]][1]
    singles_imgs = [
        img for i, (_, img) in enumerate(L.f_blocks) if i not in L.pair
    ]
    alpha1 = _total(n, {a: a for a in (*singles_imgs, p_img)}, q_img)
    dbl_block = L.g_blocks[L.dbl][0]
    b_dbl = L.g_blocks[L.dbl][1]
    base = {x: g(x) for x in g.domain()}
    beta1_map = {**base, **{x: fresh for x in dbl_block if x != p_img}, p_img: b_dbl}
    beta1 = pm(n, beta1_map)
    beta1p = pm(n, {**beta1_map, **{x: new_y for x in ex_block}})
    b_hit = [img for i, (_, img) in enumerate(L.g_blocks) if i not in (L.b_ex, L.dbl)]
    fixed = {v: v for v in (*b_hit[1:], y, new_y)}
    fixed.update({b_dbl: b_dbl, fresh: b_dbl})
    catch = b_hit[0] if b_hit else b_dbl
    beta2 = _total(n, fixed, catch)
    g2 = _with_class_image(g, ex_block, new_y)
    steps = [
        Step(0, rel(f, alpha1), False),
        Step(2, rel(beta1, beta2), False),
        Step(1, rel(alpha1, beta1), True),
        Step(1, rel(alpha1, beta1p), False),
        Step(2, rel(beta1p, beta2), True),
        Step(0, rel(f, alpha1), True),
    ]
    return _mk(fam, f, g, steps, (f, g2), "c1-im-beta")


def im_alpha(fam: Family, f: PartialMap, g: PartialMap, block: tuple[int, ...], new_a: int) -> Derivation:
    """Change the image of one f-class to new_a within the same g-class."""
    L = label(f, g)
    n, r = L.n, L.r
    old = f(block[0])
    if new_a == old:
        return empty_derivation(fam, n, (r + 1, r + 2), (f, g))
    if new_a in f.image():
        raise PreconditionError("new image must avoid im(alpha)")
    gcls = {x: i for i, (b, _) in enumerate(L.g_blocks) for x in b}
    if gcls.get(new_a) != gcls.get(old):
        raise PreconditionError("new image must share the old image's beta-class")
    a_ex = L.g_blocks[L.b_ex][0][0]
    alpha2 = _total(n, {a: a for a in f.image()}, a_ex)
    alpha2p = _total(n, {**{a: a for a in f.image() if a != old}, old: new_a}, a_ex)
    f2 = _with_class_image(f, block, new_a)
    steps = [
        Step(0, rel(f, alpha2), False),
        Step(1, rel(alpha2, g), True),
        Step(1, rel(alpha2p, g), False),
        Step(0, rel(f, alpha2p), True),
    ]
    return _mk(fam, f, g, steps, (f2, g), "c1-im-alpha")


def _move_from_ex(fam: Family, f: PartialMap, g: PartialMap, pt: int, dest_img: int) -> Derivation:
    """Move pt out of the unhit class into the hit class with image dest_img."""
    L = label(f, g)
    n, r = L.n, L.r
    ex_block, y = L.g_blocks[L.b_ex]
    if pt not in ex_block:
        raise PreconditionError("point is not in the unhit class")
    if len(ex_block) < 2:
        raise PreconditionError("unhit class must keep a point (|B_ex| >= 2)")
    if pt in f.image():
        raise PreconditionError("moved point must avoid im(alpha)")
    spares = sorted(set(range(1, n + 1)) - set(g.image()))
    if len(spares) < 2:
        raise PreconditionError("need two spare image points (n >= r+3)")
    fresh1, fresh2 = spares[0], spares[1]
    b_prime = _least(set(ex_block) - {pt}, "unhit class must keep a point")
    alpha1 = _total(n, {a: a for a in f.image()}, b_prime)
    base = {x: g(x) for x in g.domain()}
    beta1 = pm(n, {**base, pt: fresh1})
    beta1p = pm(n, {**base, pt: fresh2})
    hit_imgs = [img for i, (_, img) in enumerate(L.g_blocks) if i != L.b_ex]
    if dest_img not in hit_imgs:
        raise PreconditionError("destination must be a hit class")
    fixed = {v: v for v in hit_imgs if v != dest_img}
    fixed.update({dest_img: dest_img, fresh2: dest_img})
    beta2 = _total(n, fixed, y)
    entries = list(g.entries)
    entries[pt - 1] = dest_img
    g2 = PartialMap(n, entries)
    steps = [
        Step(0, rel(f, alpha1), False),
        Step(2, rel(beta1, beta2), False),
        Step(1, rel(alpha1, beta1), True),
        Step(1, rel(alpha1, beta1p), False),
        Step(2, rel(beta1p, beta2), True),
        Step(0, rel(f, alpha1), True),
    ]
    return _mk(fam, f, g, steps, (f, g2), "c1-ker-beta")


def ker_beta_move(fam: Family, f: PartialMap, g: PartialMap, pt: int, dest_img: int) -> Derivation:
    """Move a non-im(alpha) point of dom g between g-classes (via the unhit one)."""
    L = label(f, g)
    n, r = L.n, L.r
    if g(pt) is None:
        raise PreconditionError("point must lie in dom(beta)")
    src_img = g(pt)
    if src_img == dest_img:
        return empty_derivation(fam, n, (r + 1, r + 2), (f, g))
    if pt in f.image():
        raise PreconditionError("moved point must avoid im(alpha)")
    y = L.g_blocks[L.b_ex][1]
    if src_img == y:
        return _move_from_ex(fam, f, g, pt, dest_img)
    src_block = next(b for b, img in L.g_blocks if img == src_img)
    if len(src_block) < 2:
        raise PreconditionError("source class must keep a point")
    entries = list(g.entries)
    entries[pt - 1] = y
    g_mid = PartialMap(n, entries)
    into_ex = _move_from_ex(fam, f, g_mid, pt, src_img).reversed()
    if dest_img == y:
        return into_ex
    onward = _move_from_ex(fam, f, g_mid, pt, dest_img)
    return into_ex.then(onward)


def ker_alpha_pair(fam: Family, f: PartialMap, g: PartialMap, pt: int) -> Derivation:
    """Move pt between the two f-classes whose images share a g-class."""
    L = label(f, g)
    n, r = L.n, L.r
    p_idx, q_idx = L.pair
    if f(pt) is None:
        raise PreconditionError("point must lie in dom(alpha)")
    blocks = {i: set(b) for i, (b, _) in enumerate(L.f_blocks)}
    if pt in blocks[p_idx]:
        donor, dest = p_idx, q_idx
    elif pt in blocks[q_idx]:
        donor, dest = q_idx, p_idx
    else:
        raise PreconditionError("point must lie in one of the paired classes")
    if len(blocks[donor]) < 2:
        raise PreconditionError("donor class must keep a point (|A| >= 2)")
    p_img = L.f_blocks[donor][1]
    q_img = L.f_blocks[dest][1]
    dbl_block, b_dbl = L.g_blocks[L.dbl]
    if len(dbl_block) >= 3:
        a_extra = _least(set(dbl_block) - {p_img, q_img}, "doubled class too small")
        a_bex = L.g_blocks[L.b_ex][0][0]
        f_dict = {x: f(x) for x in f.domain()}
        alpha1 = pm(
            n, {**f_dict, pt: q_img, **{x: a_extra for x in L.f_blocks[dest][0]}}
        )
        singles = [
            (b, img) for i, (b, img) in enumerate(L.f_blocks) if i not in (donor, dest)
        ]
        fixed: dict[int, int] = {}
        for gb, gimg in L.g_blocks:
            if gimg == b_dbl or gimg == L.g_blocks[L.b_ex][1]:
                continue
            a_in = next(a for _, a in singles if a in set(gb))
            for x in gb:
                fixed[x] = a_in
        for x in dbl_block:
            fixed[x] = p_img if x in (p_img, q_img) else q_img
        for x in L.g_blocks[L.b_ex][0]:
            fixed[x] = a_bex
        alpha2 = pm(n, fixed)
        fixed2 = dict(fixed)
        for x in dbl_block:
            fixed2[x] = q_img if x in (q_img, a_extra) else p_img
        beta1 = pm(n, fixed2)
        f2_entries = list(f.entries)
        f2_entries[pt - 1] = q_img
        f2 = PartialMap(n, f2_entries)
        steps = [
            Step(0, rel(alpha1, alpha2), False),
            Step(1, rel(alpha2, g), True),
            Step(1, rel(beta1, g), False),
            Step(0, rel(alpha1, beta1), True),
        ]
        return _mk(fam, f, g, steps, (f2, g), "c1-ker-alpha")
    # |dbl| == 2: park a spare point inside the doubled class first
    movable = [
        q
        for q in range(1, n + 1)
        if g(q) is not None and q not in f.image() and q not in dbl_block
        and len(next(b for b, img in L.g_blocks if g(q) == img)) >= 2
    ]
    spare = _least(movable, "no parkable spare point (n >= r+3 needed)")
    d1 = ker_beta_move(fam, f, g, spare, b_dbl)
    mid_f, mid_g = d1.end
    d2 = ker_alpha_pair(fam, mid_f, mid_g, pt)
    f2, _ = d2.end
    d3 = ker_beta_move(fam, f2, mid_g, spare, g(spare))
    return d1.then(d2).then(d3)


def split_alpha(
    fam: Family,
    f: PartialMap,
    g: PartialMap,
    block1: tuple[int, ...],
    block2: tuple[int, ...],
    img1: int,
    img2: int,
    keep_img: int,
) -> Derivation:
    """Split one singly-hitting f-class in two and merge the doubled pair."""
    L = label(f, g)
    n, r = L.n, L.r
    src = tuple(sorted(block1 + block2))
    src_idx = next(
        (i for i, (b, _) in enumerate(L.f_blocks) if b == src), None
    )
    if src_idx is None or src_idx in L.pair:
        raise PreconditionError("must split a singly-hitting class (1 <= i <= r-1)")
    if not block1 or not block2 or set(block1) & set(block2):
        raise PreconditionError("blocks must be a nonempty partition")
    old = L.f_blocks[src_idx][1]
    gcls = {x: i for i, (b, _) in enumerate(L.g_blocks) for x in b}
    if img1 == img2 or gcls.get(img1) != gcls.get(old) or gcls.get(img2) != gcls.get(old):
        raise PreconditionError("split images must be distinct points of the old g-class")
    for v in (img1, img2):
        if v != old and v in f.image():
            raise PreconditionError("split images must avoid im(alpha)")
    p_img = L.f_blocks[L.pair[0]][1]
    q_img = L.f_blocks[L.pair[1]][1]
    if keep_img not in (p_img, q_img):
        raise PreconditionError("kept image must be one of the paired images")
    a_bex = L.g_blocks[L.b_ex][0][0]
    f_dict = {x: f(x) for x in f.domain()}
    alpha1 = pm(n, {**f_dict, **{x: img1 for x in block1}, **{x: img2 for x in block2}})
    others = [a for a in f.image() if a != old]
    alpha2 = _total(n, {**{a: a for a in others}, img1: old, img2: old}, a_bex)
    fixed = {a: a for a in others if a not in (p_img, q_img)}
    fixed.update({img1: img1, img2: img2, p_img: keep_img, q_img: keep_img})
    alpha2p = _total(n, fixed, a_bex)
    f2_entries = list(f.entries)
    for x in block1:
        f2_entries[x - 1] = img1
    for x in block2:
        f2_entries[x - 1] = img2
    for i in L.pair:
        for x in L.f_blocks[i][0]:
            f2_entries[x - 1] = keep_img
    f2 = PartialMap(n, f2_entries)
    steps = [
        Step(0, rel(alpha1, alpha2), False),
        Step(1, rel(alpha2, g), True),
        Step(1, rel(alpha2p, g), False),
        Step(0, rel(alpha1, alpha2p), True),
    ]
    return _mk(fam, f, g, steps, (f2, g), "c1-split-alpha")


def _agreement(pb, qb, tp, tq) -> int:
    return len(pb & tp) + len(qb & tq)


def equalize(
    fam: Family,
    f_t: PartialMap,
    g_t: PartialMap,
    f_c: PartialMap,
    g_c: PartialMap,
) -> Derivation:
    """Derivation from x_{f_c} x_{g_c} to x_{f_t} x_{g_t} for covered pairs."""
    prod = f_t.compose(g_t)
    if f_c.compose(g_c) != prod:
        raise PreconditionError("pairs must have equal products")
    if set(g_c.domain()) != set(g_t.domain()):
        raise PreconditionError("covered equalization needs equal dom(beta)")
    Lt = label(f_t, g_t)
    n, r = Lt.n, Lt.r
    cur_f, cur_g = f_c, g_c
    total = empty_derivation(fam, n, (r + 1, r + 2), (f_c, g_c))

    def apply(rule, *args):
        nonlocal cur_f, cur_g, total
        d = rule(fam, cur_f, cur_g, *args)
        total = total.then(d)
        cur_f, cur_g = d.end

    def gclass_img(pt: int) -> int:
        v = cur_g(pt)
        if v is None:
            raise PreconditionError(f"point {pt} outside dom(beta)")
        return v

    def class_members(img: int) -> tuple[int, ...]:
        return tuple(x for x in cur_g.domain() if cur_g(x) == img)

    def grow_class(img: int):
        """Move some spare (non-im-alpha) point into the class with this image."""
        imf = set(cur_f.image())
        for q in range(1, n + 1):
            if q in imf or cur_g(q) is None or cur_g(q) == img:
                continue
            if len(class_members(cur_g(q))) >= 2:
                apply(ker_beta_move, q, img)
                return
        raise PreconditionError("no spare point available to grow a beta-class")

    def move_point(pt: int, dest_img: int):
        src_img = gclass_img(pt)
        if src_img == dest_img:
            return
        if len(class_members(src_img)) < 2:
            grow_class(src_img)
        apply(ker_beta_move, pt, dest_img)

    # ---- Phase A: kernel of the first letter -------------------------------
    tp_blocks = (set(Lt.f_blocks[Lt.pair[0]][0]), set(Lt.f_blocks[Lt.pair[1]][0]))
    x_t = tp_blocks[0] | tp_blocks[1]

    Lc = label(cur_f, cur_g)
    x_c = set(Lc.f_blocks[Lc.pair[0]][0]) | set(Lc.f_blocks[Lc.pair[1]][0])
    if x_c != x_t:
        block = tuple(sorted(x_t))
        old_img = cur_f(block[0])
        own_class = set(class_members(gclass_img(old_img)))
        cands = sorted(own_class - set(cur_f.image()))
        if not cands:
            grow_class(gclass_img(old_img))
            own_class = set(class_members(gclass_img(old_img)))
            cands = sorted(own_class - set(cur_f.image()))
        img2 = cands[0]
        p1 = tuple(sorted(tp_blocks[0]))
        p2 = tuple(sorted(tp_blocks[1]))
        keep = min(Lc.f_blocks[Lc.pair[0]][1], Lc.f_blocks[Lc.pair[1]][1])
        apply(split_alpha, p1, p2, old_img, img2, keep)

    # sub-partition alignment inside the split class
    guard = 0
    while True:
        Lc = label(cur_f, cur_g)
        cb = (set(Lc.f_blocks[Lc.pair[0]][0]), set(Lc.f_blocks[Lc.pair[1]][0]))
        if {frozenset(cb[0]), frozenset(cb[1])} == {
            frozenset(tp_blocks[0]),
            frozenset(tp_blocks[1]),
        }:
            break
        guard += 1
        if guard > 4 * n:
            raise PreconditionError("sub-partition alignment did not converge")
        straight = _agreement(cb[0], cb[1], tp_blocks[0], tp_blocks[1])
        crossed = _agreement(cb[0], cb[1], tp_blocks[1], tp_blocks[0])
        t0, t1 = (
            (tp_blocks[0], tp_blocks[1])
            if straight >= crossed
            else (tp_blocks[1], tp_blocks[0])
        )
        moved = False
        for donor, want in ((cb[0], t0), (cb[1], t1)):
            misplaced = sorted(donor - want)
            if misplaced and len(donor) >= 2:
                apply(ker_alpha_pair, misplaced[0])
                moved = True
                break
        if not moved:
            # a stranded singleton: shuttle a point over to unblock
            big = cb[0] if len(cb[0]) >= 2 else cb[1]
            apply(ker_alpha_pair, sorted(big)[0])

    # ---- Phase B: images of the first letter -------------------------------
    for block, a_t in Lt.f_blocks:
        c_t = cur_f(block[0])
        if c_t == a_t:
            continue
        imf = set(cur_f.image())
        if a_t in imf:
            other = next(
                b for b, img in _blocks(cur_f) if img == a_t
            )
            own = set(class_members(gclass_img(a_t)))
            cands = sorted(own - imf)
            if not cands:
                grow_class(gclass_img(a_t))
                cands = sorted(set(class_members(gclass_img(a_t))) - set(cur_f.image()))
            apply(im_alpha, other, cands[0])
        if gclass_img(a_t) != gclass_img(c_t):
            move_point(a_t, gclass_img(c_t))
        apply(im_alpha, block, a_t)

    # ---- Phase C: kernel of the second letter ------------------------------
    Lc = label(cur_f, cur_g)
    y_t = Lt.g_blocks[Lt.b_ex][1]
    ex_t_block = set(Lt.g_blocks[Lt.b_ex][0])
    imf = set(cur_f.image())

    def desired_img(p: int) -> int:
        if p in ex_t_block:
            return label(cur_f, cur_g).g_blocks[label(cur_f, cur_g).b_ex][1]
        return g_t.entries[p - 1]

    guard = 0
    while True:
        pend = [
            p
            for p in cur_g.domain()
            if p not in imf and gclass_img(p) != desired_img(p)
        ]
        if not pend:
            break
        guard += 1
        if guard > 4 * n:
            raise PreconditionError("beta-kernel alignment did not converge")
        moved = False
        for p in pend:
            if len(class_members(gclass_img(p))) >= 2:
                apply(ker_beta_move, p, desired_img(p))
                moved = True
                break
        if not moved:
            # every pending donor is a singleton (the unhit class); feed it first
            Lcur = label(cur_f, cur_g)
            y_cur = Lcur.g_blocks[Lcur.b_ex][1]
            feeders = [
                p
                for p in cur_g.domain()
                if p not in imf
                and p in ex_t_block
                and gclass_img(p) != y_cur
                and len(class_members(gclass_img(p))) >= 2
            ]
            if not feeders:
                raise PreconditionError("beta-kernel alignment is stuck")
            apply(ker_beta_move, feeders[0], y_cur)

    # ---- Phase D: the unhit class's image ----------------------------------
    Lc = label(cur_f, cur_g)
    if Lc.g_blocks[Lc.b_ex][1] != y_t:
        apply(im_beta, y_t)

    if (cur_f, cur_g) != (f_t, g_t):
        raise PreconditionError("covered equalization did not converge")
    return total
