"""
Brute-force oracles: isomorphism testing, embedding search into T_m, and
minimal-degree bounds.

Both searches assign images to a generating set and propagate them along
right multiplication; a consistent total assignment is a homomorphism.
"Budget exhausted" is always reported as such and never read as a verdict.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .semigroup import FiniteSemigroup, identity_index
from .transformation import all_images, compose_rows, keys_of
from .witness import Embedding, IsoWitness, verify_embedding, verify_witness

ORACLE_CAP = 512


@dataclass
class SearchBudget:
    max_nodes: int = 1_000_000
    max_seconds: float = 60.0
    max_degree: int = 6

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0 or self.max_degree <= 0:
            raise ValueError("budget values must be positive")


class _OutOfBudget(Exception):
    pass


class _Clock:
    def __init__(self, budget: SearchBudget, deadline: float | None = None):
        self.budget = budget
        self.nodes = 0
        self.deadline = deadline if deadline is not None else time.monotonic() + budget.max_seconds

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes or (self.nodes % 64 == 0 and time.monotonic() > self.deadline):
            raise _OutOfBudget


# -- invariants ------------------------------------------------------------------

def power_profile(table: np.ndarray) -> np.ndarray:
    """(index, period) of every element's monogenic subsemigroup, from a table."""
    m = len(table)
    ar = np.arange(m)
    hist = [ar.copy()]
    out = np.zeros((m, 2), dtype=np.int64)
    todo = np.ones(m, dtype=bool)
    cur = ar.copy()
    k = 1
    while todo.any():
        cur = table[cur, ar]
        k += 1
        H = np.stack(hist, axis=1)
        hit = (H == cur[:, None]) & todo[:, None]
        rows = np.flatnonzero(hit.any(axis=1))
        first = hit[rows].argmax(axis=1)
        out[rows, 0] = first + 1
        out[rows, 1] = k - 1 - first
        todo[rows] = False
        hist.append(cur.copy())
    return out


def _row_power_profile(rows: np.ndarray) -> np.ndarray:
    """(index, period) for a stack of transformations under composition."""
    K, n = rows.shape
    keys = [keys_of(rows, n)]
    cur = rows
    out = np.zeros((K, 2), dtype=np.int64)
    todo = np.ones(K, dtype=bool)
    k = 1
    while todo.any():
        cur = compose_rows(cur, rows)
        k += 1
        ck = keys_of(cur, n)
        H = np.stack(keys, axis=1)
        hit = (H == ck[:, None]) & todo[:, None]
        idx = np.flatnonzero(hit.any(axis=1))
        first = hit[idx].argmax(axis=1)
        out[idx, 0] = first + 1
        out[idx, 1] = k - 1 - first
        todo[idx] = False
        keys.append(ck)
    return out


def element_invariants(S: FiniteSemigroup) -> list[tuple]:
    """Per-element isomorphism invariants: power profile, |xS|, |Sx|, and the
    sizes of the element's R-, L-, H- and D-classes."""
    from .green import green_structure

    cached = S._cache.get("invariants")
    if cached is not None:
        return cached
    t = S.table
    prof = power_profile(t)
    right = [len(np.unique(t[i])) for i in range(len(S))]
    left = [len(np.unique(t[:, i])) for i in range(len(S))]
    g = green_structure(S)
    sizes = {k: np.bincount(getattr(g, f"{k}_class")) for k in "rlhd"}
    inv = [(int(prof[i, 0]), int(prof[i, 1]), right[i], left[i],
            *(int(sizes[k][getattr(g, f"{k}_class")[i]]) for k in "rlhd"))
           for i in range(len(S))]
    S._cache["invariants"] = inv
    return inv


def _closure_size(t: np.ndarray, gens: list[int]) -> np.ndarray:
    m = len(t)
    mask = np.zeros(m, dtype=bool)
    mask[gens] = True
    frontier = np.array(sorted(set(gens)), dtype=np.int64)
    g = np.array(gens, dtype=np.int64)
    while len(frontier):
        new = np.unique(t[np.ix_(frontier, g)])
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def generating_set(S: FiniteSemigroup) -> list[int]:
    """Greedy generating set: every non-product first, then repeatedly the
    element whose addition grows the generated subsemigroup the most."""
    cached = S._cache.get("generators")
    if cached is not None:
        return cached
    t = S.table
    m = len(S)
    is_product = np.zeros(m, dtype=bool)
    is_product[np.unique(t)] = True
    gens = np.flatnonzero(~is_product).tolist()
    mask = _closure_size(t, gens) if gens else np.zeros(m, dtype=bool)
    while not mask.all():
        best, best_gain = -1, -1
        for x in np.flatnonzero(~mask).tolist():
            gain = int(_closure_size(t, gens + [x]).sum())
            if gain > best_gain:
                best, best_gain = x, gain
        gens.append(best)
        mask = _closure_size(t, gens)
    S._cache["generators"] = gens
    return gens


# -- isomorphism -----------------------------------------------------------------

@dataclass
class IsoResult:
    status: str                        # isomorphic / non-isomorphic / indeterminate
    witness: IsoWitness | None = None
    reason: str = ""
    nodes: int = 0

    @property
    def definitive(self) -> bool:
        return self.status != "indeterminate"

    def __bool__(self) -> bool:
        return self.status == "isomorphic"

    def to_json(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes}
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["forward"] = [[i, int(j)] for i, j in enumerate(self.witness.forward)]
        return out


def are_isomorphic(S: FiniteSemigroup, T: FiniteSemigroup, cap: int = ORACLE_CAP,
                   budget: SearchBudget | None = None) -> IsoResult:
    if len(S) != len(T):
        return IsoResult("non-isomorphic", reason=f"sizes {len(S)} and {len(T)}")
    if len(S) > cap:
        return IsoResult("indeterminate", reason=f"size {len(S)} above oracle cap {cap}")
    inv_s, inv_t = element_invariants(S), element_invariants(T)
    if Counter(inv_s) != Counter(inv_t):
        return IsoResult("non-isomorphic", reason="element invariant profiles differ")
    clock = _Clock(budget or SearchBudget())
    ts, tt = S.table, T.table
    m = len(S)
    gens = generating_set(S)
    by_inv: dict[tuple, list[int]] = {}
    for j, v in enumerate(inv_t):
        by_inv.setdefault(v, []).append(j)

    def propagate(assign: list[tuple[int, int]]):
        phi = np.full(m, -1, dtype=np.int64)
        back = np.full(m, -1, dtype=np.int64)
        known = []
        for g, v in assign:
            if phi[g] < 0:
                if back[v] >= 0:
                    return None
                phi[g], back[v] = v, g
                known.append(g)
            elif phi[g] != v:
                return None
        hs = [g for g, _ in assign]
        k = 0
        while k < len(known):
            x = known[k]
            k += 1
            for h in hs:
                y = ts[x, h]
                v = tt[phi[x], phi[h]]
                if phi[y] < 0:
                    if back[v] >= 0 or inv_s[y] != inv_t[v]:
                        return None
                    phi[y], back[v] = v, y
                    known.append(y)
                elif phi[y] != v:
                    return None
        return phi

    def search(assign):
        clock.tick()
        phi = propagate(assign)
        if phi is None:
            return None
        rest = [g for g in gens if phi[g] < 0]
        if not rest:
            return phi
        g = rest[0]
        for v in by_inv[inv_s[g]]:
            found = search(assign + [(g, v)])
            if found is not None:
                return found
        return None

    try:
        phi = search([])
    except _OutOfBudget:
        return IsoResult("indeterminate", reason="search budget exhausted", nodes=clock.nodes)
    if phi is None:
        return IsoResult("non-isomorphic", reason="search exhausted", nodes=clock.nodes)
    w = IsoWitness(S, T, phi, "oracle")
    if not verify_witness(w):
        raise AssertionError("oracle produced an invalid isomorphism")
    return IsoResult("isomorphic", w, nodes=clock.nodes)


# -- embeddings ------------------------------------------------------------------

@dataclass
class EmbeddingResult:
    status: str                        # found / absent / exhausted-budget
    degree: int
    embedding: Embedding | None = None
    reason: str = ""
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.status == "found"


def find_embedding(S: FiniteSemigroup, m: int, budget: SearchBudget | None = None,
                   use_obstructions: bool = True, deadline: float | None = None) -> EmbeddingResult:
    """Search for an injective homomorphism S -> T_m.

    Generators are chosen by smallest remaining domain; each domain is
    filtered against every product already forced by earlier choices.
    """
    if m < 1:
        raise ValueError("degree must be positive")
    budget = budget or SearchBudget()
    size = len(S)
    if size > m ** m:
        return EmbeddingResult("absent", m, reason=f"|S| = {size} > {m}^{m}")
    monoid = identity_index(S) is not None
    if use_obstructions and size == m ** m and not monoid:
        return EmbeddingResult("absent", m, reason=f"|S| = {m}^{m}: an embedding would be onto the "
                                                   f"monoid T_{m}, but S has no identity")
    clock = _Clock(budget, deadline)
    ts = S.table
    gens = generating_set(S)
    cand = all_images(m)
    ckeys = keys_of(cand, m)
    cprof = _row_power_profile(cand)
    sprof = power_profile(ts)
    base = {g: np.flatnonzero((cprof[:, 0] == sprof[g, 0]) & (cprof[:, 1] == sprof[g, 1]))
            for g in gens}

    def propagate(phi, known, used, assigned, g, row):
        phi = phi.copy()
        known = known.copy()
        used = dict(used)
        k = int(keys_of(row[None], m)[0])
        if k in used:
            return None
        phi[g], known[g], used[k] = row, True, g
        hs = assigned + [g]
        # unchecked pairs: (old x, g), then (z, h) for every newly known z
        queue = [(x, g) for x in np.flatnonzero(known).tolist() if x != g]
        fresh = [g]
        while queue or fresh:
            if fresh:
                z = fresh.pop()
                queue.extend((z, h) for h in hs)
                continue
            x, h = queue.pop()
            y = ts[x, h]
            val = phi[h][phi[x]]
            if known[y]:
                if not np.array_equal(phi[y], val):
                    return None
                continue
            vk = int(keys_of(val[None], m)[0])
            if vk in used:
                return None
            phi[y], known[y], used[vk] = val, True, y
            fresh.append(y)
        return phi, known, used

    def filter_domain(dom, g, phi, known, newmask, used_new):
        if len(dom) and used_new:
            dom = dom[~np.isin(ckeys[dom], np.fromiter(used_new, dtype=np.int64))]
        rel = known & (newmask | newmask[ts[:, g]] | newmask[ts[g, :]])
        for x in np.flatnonzero(rel).tolist():
            if not len(dom):
                break
            rows = cand[dom]
            y = ts[x, g]
            if known[y]:
                dom = dom[np.all(rows[:, phi[x]] == phi[y], axis=1)]
                rows = cand[dom]
            y = ts[g, x]
            if known[y] and len(dom):
                dom = dom[np.all(phi[x][rows] == phi[y], axis=1)]
        gg = ts[g, g]
        if known[gg] and newmask[gg] and len(dom):
            rows = cand[dom]
            dom = dom[np.all(compose_rows(rows, rows) == phi[gg], axis=1)]
        return dom

    def search(phi, known, used, assigned, domains):
        clock.tick()
        open_gens = [g for g in gens if not known[g]]
        if not open_gens:
            return phi
        g = min(open_gens, key=lambda h: (len(domains[h]), gens.index(h)))
        for ci in domains[g].tolist():
            res = propagate(phi, known, used, assigned, g, cand[ci])
            if res is None:
                clock.tick()
                continue
            phi2, known2, used2 = res
            newmask = known2 & ~known
            used_new = set(used2) - set(used)
            doms2 = {}
            dead = False
            for h in open_gens:
                if h == g or known2[h]:
                    continue
                d = filter_domain(domains[h], h, phi2, known2, newmask, used_new)
                if not len(d):
                    dead = True
                    break
                doms2[h] = d
            if dead:
                clock.tick()
                continue
            out = search(phi2, known2, used2, assigned + [g], doms2)
            if out is not None:
                return out
        return None

    phi0 = np.zeros((size, m), dtype=np.int64)
    known0 = np.zeros(size, dtype=bool)
    try:
        phi = search(phi0, known0, {}, [], base)
    except _OutOfBudget:
        return EmbeddingResult("exhausted-budget", m, reason="search budget exhausted", nodes=clock.nodes)
    if phi is None:
        return EmbeddingResult("absent", m, reason="search exhausted", nodes=clock.nodes)
    emb = Embedding(S, phi)
    if not verify_embedding(emb):
        raise AssertionError("search produced an invalid embedding")
    return EmbeddingResult("found", m, emb, nodes=clock.nodes)


def regular_embedding(S: FiniteSemigroup) -> Embedding:
    """Right regular representation of S (or of S with an identity adjoined)."""
    t = S.table.astype(np.int64)
    m = len(S)
    if identity_index(S) is not None:
        return Embedding(S, t.T.copy())
    images = np.empty((m, m + 1), dtype=np.int64)
    images[:, :m] = t.T
    images[:, m] = np.arange(m)
    return Embedding(S, images)


# -- minimal degree ---------------------------------------------------------------

@dataclass
class DegreeBounds:
    lower: int
    upper: int
    status: str                        # exact / bounded / exhausted-budget
    embedding: Embedding | None = field(default=None, repr=False)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"bounds cross: {self.lower} > {self.upper}")
        if self.status == "exact" and self.lower != self.upper:
            raise ValueError("exact status needs lower == upper")

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "status": self.status, "notes": self.notes}


def cardinality_bound(size: int) -> int:
    m = 1
    while m ** m < size:
        m += 1
    return m


def _is_full(S: FiniteSemigroup) -> bool:
    n = S.degree
    return n ** n == len(S)


def minimal_degree(S: FiniteSemigroup, budget: SearchBudget | None = None) -> DegreeBounds:
    """Bounds on the least m with S embedding in T_m."""
    from .constructions import variant_embedding

    budget = budget or SearchBudget()
    notes: list[str] = []
    lower = cardinality_bound(len(S))
    notes.append(f"cardinality: {lower}^{lower} >= {len(S)}")
    if lower ** lower == len(S) and identity_index(S) is None:
        lower += 1
        notes.append(f"not a monoid, so not isomorphic to T_{lower - 1}")

    emb = regular_embedding(S)
    notes.append(f"regular representation: degree {emb.degree}")
    if S.rule.is_plain:
        if S.degree < emb.degree:
            emb = Embedding(S, S.rows)
            notes.append(f"inclusion into T_{S.degree}")
    elif _is_full(S):
        a = S.rule.sandwich
        cand = variant_embedding(a)
        if cand.degree < emb.degree:
            emb = cand
            notes.append(f"variant embedding: degree 2n - rank(a) = {cand.degree}")
    upper = emb.degree
    if not verify_embedding(emb):
        raise AssertionError("upper-bound embedding failed verification")

    status = "exact" if lower == upper else "bounded"
    deadline = time.monotonic() + budget.max_seconds
    m = lower
    while lower < upper:
        if m > budget.max_degree:
            notes.append(f"search stopped at max degree {budget.max_degree}")
            status = "bounded"
            break
        res = find_embedding(S, m, budget, deadline=deadline)
        if res.status == "found":
            upper, emb = m, res.embedding
            notes.append(f"search found an embedding into T_{m}")
        elif res.status == "absent":
            lower = m + 1
            notes.append(f"no embedding into T_{m} ({res.reason})")
        else:
            notes.append(f"search at degree {m} ran out of budget")
            status = "exhausted-budget"
            break
        m += 1
    if lower == upper:
        status = "exact"
    return DegreeBounds(lower, upper, status, emb, notes)
