"""
Inverse pairs, sandwich-set bijections, and the two constructive
isomorphisms between variants of T_n and local subsemigroups of T_m.

Every map here is materialised as an ``IsoWitness`` over explicit
semigroups and verified before it is handed out.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .semigroup import (
    PLAIN,
    FiniteSemigroup,
    ProductRule,
    full_tn,
    identity_index,
    local_in_full,
    local_subsemigroup,
    sandwich_in_full,
    sandwich_set,
    variant,
)
from .transformation import (
    Transformation,
    all_images,
    conjugate,
    is_idempotent,
    keys_of,
    relabelling,
    to_tabular,
    _check_bound,
)
from .witness import Embedding, IsoWitness, WitnessError, require, verify_embedding


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise WitnessError(message)


# -- inverses ---------------------------------------------------------------

@dataclass(frozen=True)
class InversePair:
    """a, b with a = aba and b = bab."""

    a: Transformation
    b: Transformation

    def __post_init__(self):
        a, b = self.a, self.b
        if a.degree != b.degree:
            raise ValueError("inverse pair of mixed degree")
        if a * b * a != a or b * a * b != b:
            raise ValueError(f"{a} and {b} are not mutual inverses")

    @property
    def e(self) -> Transformation:
        return self.a * self.b

    @property
    def f(self) -> Transformation:
        return self.b * self.a

    def swapped(self) -> "InversePair":
        return InversePair(self.b, self.a)


def inverse_count(f: Transformation) -> int:
    """|A_1|...|A_r| * r^(n-r) for f = (A_i / a_i)."""
    t = to_tabular(f)
    return math.prod(len(b) for b in t.blocks) * t.rank ** (f.degree - t.rank)


def inverses_of(f: Transformation, exhaustive: bool = True, bound: int | None = None) -> list[Transformation]:
    """All g with f = fgf and g = gfg (brute force over T_n), lexicographic.

    With ``exhaustive=False`` only the canonical inverse is returned.
    """
    if not exhaustive:
        return [canonical_inverse(f).b]
    n = f.degree
    _check_bound(n, bound)
    g = all_images(n)
    fa = f.array()
    fg = g[:, fa]                      # x -> (xf)g
    fgf = fa[fg]
    gfg = np.take_along_axis(g, fa[g], axis=1)
    ok = np.all(fgf == fa, axis=1) & np.all(gfg == g, axis=1)
    return [Transformation.from_array(r) for r in g[ok]]


def canonical_inverse(f: Transformation) -> InversePair:
    """g with a_i -> min(A_i) and every point outside im(f) sent with B_1."""
    t = to_tabular(f)
    images = [min(t.blocks[0])] * f.degree
    for block, point in zip(t.blocks, t.points):
        images[point - 1] = min(block)
    return InversePair(f, Transformation(images))


def random_inverse(f: Transformation, rng: random.Random) -> InversePair:
    """A uniformly random inverse: b_i drawn from A_i, spill points to random blocks."""
    t = to_tabular(f)
    choice = [rng.choice(sorted(b)) for b in t.blocks]
    images = [0] * f.degree
    for i, point in enumerate(t.points):
        images[point - 1] = choice[i]
    image = set(t.points)
    for x in range(1, f.degree + 1):
        if x not in image:
            images[x - 1] = choice[rng.randrange(t.rank)]
    return InversePair(f, Transformation(images))


def idempotent_normalizer(a: Transformation) -> Transformation:
    """Permutation p with p·a idempotent: a_i -> min(A_i), the rest ascending."""
    t = to_tabular(a)
    images = [0] * a.degree
    for block, point in zip(t.blocks, t.points):
        images[point - 1] = min(block)
    free_src = [x for x in range(1, a.degree + 1) if images[x - 1] == 0]
    used = set(images)
    free_dst = [y for y in range(1, a.degree + 1) if y not in used]
    for x, y in zip(free_src, free_dst):
        images[x - 1] = y
    p = Transformation(images)
    _need(is_idempotent(p * a), f"{p}{a} is not idempotent")
    return p


# -- sandwich-set bijections and local submonoids -----------------------------

def _rows_map(rows: np.ndarray, left: Transformation | None, right: Transformation | None) -> np.ndarray:
    """x -> left·x·right on 0-based rows."""
    if left is not None:
        rows = rows[:, left.array()]
    if right is not None:
        rows = right.array()[rows]
    return rows


def _set_keys(rows: np.ndarray, n: int) -> np.ndarray:
    return np.sort(keys_of(rows, n))


@dataclass
class BijectionCheck:
    name: str
    size: int
    passed: bool


def _check_bijection(name, src, dst, fwd, back, n) -> BijectionCheck:
    """fwd maps src into dst, back maps dst into src, and both composites fix points."""
    sk, dk = _set_keys(src, n), _set_keys(dst, n)
    img = fwd(src)
    pre = back(dst)
    inside = (np.all(np.isin(keys_of(img, n), dk)) and np.all(np.isin(keys_of(pre, n), sk)))
    round1 = np.array_equal(back(img), src)
    round2 = np.array_equal(fwd(pre), dst)
    ok = bool(inside and round1 and round2 and len(src) == len(dst))
    if not ok:
        raise WitnessError(f"{name}: not a bijection with the stated inverse")
    return BijectionCheck(name, len(src), ok)


def inverse_pair_bijections(pair: InversePair, S: FiniteSemigroup | None = None) -> list[BijectionCheck]:
    """aSa -> aSb (x -> xb), aSa -> bSa (x -> bx), aSa -> bSb (x -> bxb),
    each checked against its stated inverse."""
    a, b = pair.a, pair.b
    S = S or full_tn(a.degree)
    n = a.degree
    aSa = sandwich_set(S, a, a)
    aSb = sandwich_set(S, a, b)
    bSa = sandwich_set(S, b, a)
    bSb = sandwich_set(S, b, b)
    return [
        _check_bijection("aSa->aSb", aSa, aSb, lambda r: _rows_map(r, None, b),
                         lambda r: _rows_map(r, None, a), n),
        _check_bijection("aSa->bSa", aSa, bSa, lambda r: _rows_map(r, b, None),
                         lambda r: _rows_map(r, a, None), n),
        _check_bijection("aSa->bSb", aSa, bSb, lambda r: _rows_map(r, b, b),
                         lambda r: _rows_map(r, a, a), n),
    ]


def local_submonoid_check(pair: InversePair, S: FiniteSemigroup | None = None) -> bool:
    """aSb = eSe and bSa = fSf, monoids with identities e = ab and f = ba."""
    a, b, e, f = pair.a, pair.b, pair.e, pair.f
    S = S or full_tn(a.degree)
    if not (np.array_equal(sandwich_set(S, a, b), sandwich_set(S, e, e))
            and np.array_equal(sandwich_set(S, b, a), sandwich_set(S, f, f))):
        return False
    for idem in (e, f):
        M = FiniteSemigroup(sandwich_set(S, idem, idem), PLAIN)
        one = identity_index(M)
        if one is None or M.element(one) != idem:
            return False
    return True


def _sub(S: FiniteSemigroup, left, right, rule: ProductRule = PLAIN) -> FiniteSemigroup:
    return FiniteSemigroup(sandwich_set(S, left, right), rule, check_closed=True)


def _sub_full(n: int, left, right, rule: ProductRule = PLAIN) -> FiniteSemigroup:
    return FiniteSemigroup(sandwich_in_full(n, left, right), rule, check_closed=True)


@dataclass
class SandwichMonoids:
    """(aSa, *_b), (bSb, *_a), (aSb, .), (bSa, .) and witnesses between them."""

    semigroups: dict[str, FiniteSemigroup]
    identities: dict[str, Transformation]
    witnesses: dict[str, IsoWitness]


def sandwich_monoids(pair: InversePair, S: FiniteSemigroup | None = None) -> SandwichMonoids:
    a, b, e, f = pair.a, pair.b, pair.e, pair.f
    S = S or full_tn(a.degree)
    sg = {
        "aSa*b": _sub(S, a, a, ProductRule.with_sandwich(b)),
        "bSb*a": _sub(S, b, b, ProductRule.with_sandwich(a)),
        "aSb": _sub(S, a, b),
        "bSa": _sub(S, b, a),
    }
    ids = {"aSa*b": a, "bSb*a": b, "aSb": e, "bSa": f}
    for k, M in sg.items():
        one = identity_index(M)
        if one is None or M.element(one) != ids[k]:
            raise WitnessError(f"{k} is not a monoid with identity {ids[k]}")
    w = {
        "aSa*b->aSb": IsoWitness.from_rows(sg["aSa*b"], sg["aSb"], lambda r: _rows_map(r, None, b), "x->xb"),
        "aSa*b->bSb*a": IsoWitness.from_rows(sg["aSa*b"], sg["bSb*a"], lambda r: _rows_map(r, b, b), "x->bxb"),
        "bSb*a->aSb": IsoWitness.from_rows(sg["bSb*a"], sg["aSb"], lambda r: _rows_map(r, a, None), "x->ax"),
        "aSb->bSa": IsoWitness.from_rows(sg["aSb"], sg["bSa"], lambda r: _rows_map(r, b, a), "x->bxa"),
    }
    for v in w.values():
        require(v)
    return SandwichMonoids(sg, ids, w)


@dataclass
class GroupCriterion:
    b_in_aSa: bool
    a_in_bSb: bool
    group_inverses: bool

    @property
    def consistent(self) -> bool:
        return self.b_in_aSa == self.a_in_bSb == self.group_inverses


def group_criterion(pair: InversePair, S: FiniteSemigroup | None = None) -> GroupCriterion:
    """Evaluate b in aSa, a in bSb, and "H_a = H_b is a group with a, b
    mutually inverse in it" independently of each other."""
    from .green import green_structure

    a, b = pair.a, pair.b
    S = S or full_tn(a.degree)
    n = a.degree
    in1 = bool(np.isin(keys_of(b.array()[None], n), keys_of(sandwich_set(S, a, a), n))[0])
    in2 = bool(np.isin(keys_of(a.array()[None], n), keys_of(sandwich_set(S, b, b), n))[0])
    g = green_structure(S)
    ia, ib = S.index_of(a), S.index_of(b)
    ab, ba = a * b, b * a
    grp = False
    if g.h_class[ia] == g.h_class[ib] and g.h_is_group[int(g.h_class[ia])] and ab == ba:
        iab = S.index_of(ab)
        grp = bool(g.h_class[iab] == g.h_class[ia]) and ab * ab == ab
    return GroupCriterion(in1, in2, grp)


def lamb_sandwich_witnesses(pair: InversePair, S: FiniteSemigroup | None = None) -> tuple[IsoWitness, IsoWitness]:
    """(aSa, .) -> (aSb, *_aab) by x -> xb and (aSa, .) -> (bSa, *_baa) by x -> bx."""
    a, b = pair.a, pair.b
    S = S or full_tn(a.degree)
    src = _sub(S, a, a)
    w1 = IsoWitness.from_rows(src, _sub(S, a, b, ProductRule.with_sandwich(a * a * b)),
                              lambda r: _rows_map(r, None, b), "x->xb")
    w2 = IsoWitness.from_rows(src, _sub(S, b, a, ProductRule.with_sandwich(b * a * a)),
                              lambda r: _rows_map(r, b, None), "x->bx")
    return require(w1), require(w2)


def transport_variant(phi: IsoWitness, c: Transformation) -> IsoWitness:
    """An isomorphism S -> T carries S^c onto T^(c phi) with the same bijection."""
    src = variant(phi.source, c)
    tgt = variant(phi.target, phi(c))
    return require(IsoWitness(src, tgt, phi.forward, f"transport({phi.label}) at {c}"))


# -- restriction to the image of an idempotent --------------------------------

@dataclass
class Restriction:
    e: Transformation
    points: tuple[int, ...]          # im(e) ascending, relabelled as 1..r
    relabel: Transformation          # permutation sending points to 1..r
    witness: IsoWitness

    def back(self, g: Transformation, fill: list[int] | None = None) -> Transformation:
        """e·g^ for an extension g^ of g (``fill`` picks the values off im(e))."""
        n = self.e.degree
        pts = self.points
        full = [0] * n
        for i, p in enumerate(pts):
            full[p - 1] = pts[g.images[i] - 1]
        outside = [x for x in range(1, n + 1) if x not in set(pts)]
        fill = list(fill) if fill is not None else [pts[0]] * len(outside)
        for x, v in zip(outside, fill):
            full[x - 1] = v
        return self.e * Transformation(full)


def restriction_witness(e: Transformation, source: FiniteSemigroup | None = None) -> Restriction:
    """(eT_Xe, .) -> T_Y, f -> f|_Y with Y = im(e) relabelled ascending."""
    if not is_idempotent(e):
        raise ValueError(f"{e} is not idempotent")
    n = e.degree
    pts = tuple(sorted(e.image))
    r = len(pts)
    src = source if source is not None else local_in_full(n, e)
    pos = np.full(n, -1, dtype=np.int64)
    pos[np.array(pts) - 1] = np.arange(r)
    cols = np.array(pts) - 1

    def fwd(rows):
        out = pos[rows[:, cols]]
        if (out < 0).any():
            raise WitnessError("element does not preserve im(e)")
        return out

    w = require(IsoWitness.from_rows(src, full_tn(r), fwd, "restrict"))
    ranks_ok = np.array_equal(src.ranks(), w.target.ranks()[w.forward])
    if not ranks_ok:
        raise WitnessError("restriction changed a rank")
    return Restriction(e, pts, relabelling(n, pts), w)


# -- local subsemigroup as a variant ------------------------------------------

def _conj_map(q: Transformation):
    q0, qi0 = q.array(), q.inverse().array()
    return lambda rows: q0[rows[:, qi0]]


@dataclass
class LocalAsVariant:
    a: Transformation
    b: Transformation                 # inverse of a chosen before relabelling
    relabel: Transformation           # q; a' = q^-1 a q has im(a'b') = 1..r
    c: Transformation                 # sandwich element of degree r
    witness: IsoWitness               # (aT_na, .) -> (T_r, *_c)
    steps: list[IsoWitness] = field(repr=False, default_factory=list)


def local_as_variant(a: Transformation, b: Transformation | None = None,
                     verify_steps: bool = True) -> LocalAsVariant:
    """aT_na is isomorphic to T_r^c with rank(c) = rank(a^2).

    The chain is: relabel so that im(b) = {1..r}; x -> xb onto (aTb, *_aab);
    restrict aTb = eTe (e = ab) to im(e) = {1..r}, carrying the sandwich
    element aab to c.
    """
    n = a.degree
    pair = canonical_inverse(a) if b is None else InversePair(a, b)
    b = pair.b
    T = full_tn(n)
    q = relabelling(n, sorted(b.image))
    a1, b1 = conjugate(a, q), conjugate(b, q)
    aab = a1 * a1 * b1

    src = local_subsemigroup(T, a)
    s1 = local_subsemigroup(T, a1)
    w0 = IsoWitness.from_rows(src, s1, _conj_map(q), "relabel")
    w1 = IsoWitness.from_rows(s1, _sub(T, a1, b1, ProductRule.with_sandwich(aab)),
                              lambda r: _rows_map(r, None, b1), "x->xb")
    e1 = a1 * b1
    res = restriction_witness(e1)
    w2 = transport_variant(res.witness, aab)
    c = w2.target.rule.sandwich
    steps = [w0, w1, w2]
    if verify_steps:
        for w in steps:
            require(w)
    total = require(w0.then(w1).then(w2))
    if c.rank != (a * a).rank:
        raise WitnessError(f"rank(c) = {c.rank} but rank(a^2) = {(a * a).rank}")
    return LocalAsVariant(a, b, q, c, total, steps)


def sandwich_targets(a: Transformation) -> dict[Transformation, int]:
    """How often each c arises over all inverses b of a (choice dependence)."""
    out: dict[Transformation, int] = {}
    for b in inverses_of(a):
        c = local_as_variant(a, b, verify_steps=False).c
        out[c] = out.get(c, 0) + 1
    return out


# -- variant as a local subsemigroup ------------------------------------------

@dataclass(frozen=True)
class Scaffold:
    """Data of the variant -> local construction for an idempotent a0 on
    {1..n} with image {1..r}, living on Z = {1..2n-r}."""

    n: int
    r: int
    a0: Transformation
    blocks: tuple[tuple[int, ...], ...]      # X_i, ascending, i first
    extras: tuple[tuple[int, ...], ...]      # x_i1..x_i lam_i
    sizes: tuple[int, ...]                   # lam_i
    ysets: tuple[tuple[int, ...], ...]       # Y_i = (i, y_i1, ..)
    b: Transformation
    c: Transformation
    e: Transformation

    @property
    def degree(self) -> int:
        return 2 * self.n - self.r

    def check(self) -> None:
        n, r, Z = self.n, self.r, 2 * self.n - self.r
        b, c, e = self.b, self.c, self.e
        seen: set[int] = set()
        for i, (X, Y, lam) in enumerate(zip(self.blocks, self.ysets, self.sizes), start=1):
            _need(i in X and i in Y and len(Y) == 1 + lam == len(X), f"block {i} malformed")
            _need(seen.isdisjoint(Y), f"Y_{i} overlaps an earlier Y")
            seen |= set(Y)
            _need(set(Y) <= set(range(1, r + 1)) | set(range(n + 1, Z + 1)), f"Y_{i} out of range")
        _need(sum(self.sizes) == n - r, "sizes do not sum to n-r")
        _need(set(range(1, n + 1)) | seen == set(range(1, Z + 1)), "X and the Y_i miss points of Z")
        _need(b * c * b == b and c * b * c == c, "b and c are not mutual inverses")
        _need(b.rank == n, "rank(b) != n")
        _need(e == b * c and e.image == frozenset(range(1, n + 1)), "im(bc) != X")
        _need(b * b * c == b * b, "b^2 c != b^2")
        _need((b * b * c).restrict(range(1, n + 1)) == self.a0, "bbc|_X != a0")

    def to_json(self) -> dict:
        return {
            "n": self.n, "r": self.r, "Z": self.degree, "a0": str(self.a0),
            "X": [list(x) for x in self.blocks],
            "x": [list(x) for x in self.extras],
            "lambda": list(self.sizes),
            "Y": [list(y) for y in self.ysets],
            "y": [list(y[1:]) for y in self.ysets],
            "b": str(self.b), "c": str(self.c), "e": str(self.e),
        }


def build_scaffold(a0: Transformation, spare_order: list[int] | None = None) -> Scaffold:
    """Construct b, c on Z for an idempotent a0 with image {1..r}.

    The spare points n+1..2n-r are handed out to Y_1, Y_2, ... in
    ``spare_order`` (ascending by default), paired with x_ij in ascending order.
    """
    n, r = a0.degree, a0.rank
    if not is_idempotent(a0) or a0.image != frozenset(range(1, r + 1)):
        raise ValueError(f"{a0} must be idempotent with image 1..{r}")
    Z = 2 * n - r
    spare = list(range(n + 1, Z + 1)) if spare_order is None else list(spare_order)
    if sorted(spare) != list(range(n + 1, Z + 1)):
        raise ValueError("spare_order must permute n+1..2n-r")
    blocks, extras, ysets = [], [], []
    it = iter(spare)
    for i in range(1, r + 1):
        X = sorted(x for x in range(1, n + 1) if a0(x) == i)
        xs = [x for x in X if x != i]
        ys = [next(it) for _ in xs]
        blocks.append(tuple([i] + xs))
        extras.append(tuple(xs))
        ysets.append(tuple([i] + ys))
    b = [0] * Z
    c = [0] * Z
    for i, (xs, Y) in enumerate(zip(extras, ysets), start=1):
        for y in Y:
            b[y - 1] = i
        for x, y in zip(xs, Y[1:]):
            b[x - 1] = y
            c[y - 1] = x
        for x in (i, *xs):
            c[x - 1] = i
    bt, ct = Transformation(b), Transformation(c)
    s = Scaffold(n, r, a0, tuple(blocks), tuple(extras), tuple(len(x) for x in extras),
                 tuple(ysets), bt, ct, bt * ct)
    s.check()
    return s


@dataclass
class VariantAsLocal:
    a: Transformation
    normalizer: Transformation        # p with p·a idempotent
    relabel: Transformation           # q with q^-1 (pa) q = a0
    scaffold: Scaffold
    witness: IsoWitness               # T_n^a -> (bT_Zb, .)
    steps: list[IsoWitness] = field(repr=False, default_factory=list)

    def forward(self, f: Transformation, fill: list[int] | None = None) -> Transformation:
        """Image of f in bT_Zb computed directly as (e·F^)·b, F = q^-1 (f p^-1) q."""
        s = self.scaffold
        p, q = self.normalizer, self.relabel
        F = conjugate(f * p.inverse(), q)
        return s.e * F.extend(s.degree, fill) * s.b


def variant_as_local(a: Transformation, spare_order: list[int] | None = None,
                     rng: random.Random | None = None, verify_steps: bool = True) -> VariantAsLocal:
    """T_n^a is isomorphic to bT_{2n-r}b with rank(b) = n.

    Chain: x -> x p^-1 onto T_n^(pa); relabel onto T_n^(a0); invert the
    restriction (eT_Ze, *_bbc) -> T_n^(a0); then x -> xb onto (bT_Zb, .).
    """
    n, r = a.degree, a.rank
    p = idempotent_normalizer(a)
    pa = p * a
    q = relabelling(n, sorted(pa.image))
    a0 = conjugate(pa, q)
    if rng is not None and spare_order is None:
        spare_order = list(range(n + 1, 2 * n - r + 1))
        rng.shuffle(spare_order)
    s = build_scaffold(a0, spare_order)
    Z = s.degree
    T = full_tn(n)
    pinv = p.inverse().array()

    v0 = IsoWitness.from_rows(variant(T, a), variant(T, pa), lambda rows: pinv[rows], "x->xp^-1")
    v1 = IsoWitness.from_rows(variant(T, pa), variant(T, a0), _conj_map(q), "relabel")
    bbc = s.b * s.b * s.c
    res = restriction_witness(s.e, local_in_full(Z, s.e))
    v2 = transport_variant(res.witness, bbc).inverse()
    if v2.source.rule.sandwich != a0:
        raise WitnessError("bbc restricted to X differs from a0")
    v3 = IsoWitness.from_rows(_sub_full(Z, s.b, s.c, ProductRule.with_sandwich(bbc)),
                              local_in_full(Z, s.b), lambda r_: _rows_map(r_, None, s.b), "x->xb")
    steps = [v0, v1, v2, v3]
    if verify_steps:
        for w in steps:
            require(w)
    total = require(v0.then(v1).then(v2).then(v3))
    if len(total.target) != n ** n:
        raise WitnessError(f"|bT_Zb| = {len(total.target)}, expected {n ** n}")
    return VariantAsLocal(a, p, q, s, total, steps)


def variant_embedding(a: Transformation) -> Embedding:
    """Injective homomorphism T_n^a -> T_{2n-r} (the witness followed by inclusion)."""
    w = variant_as_local(a, verify_steps=False).witness
    emb = Embedding(w.source, w.target.rows[w.forward])
    v = verify_embedding(emb)
    if not v:
        raise WitnessError(f"embedding failed: {v.reason} {v.counterexample}")
    return emb
