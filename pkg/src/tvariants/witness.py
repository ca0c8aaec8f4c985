"""
Isomorphism witnesses and their exhaustive (or sampled) verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .semigroup import FiniteSemigroup
from .transformation import Transformation

EXHAUSTIVE_LIMIT = 10 ** 4
SAMPLED_PAIRS = 10 ** 5


class WitnessError(AssertionError):
    """A constructed map failed verification (an implementation defect)."""


@dataclass
class Verdict:
    passed: bool
    mode: str                     # "exhaustive" or "sampled"
    pairs_checked: int
    reason: str = ""
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {"passed": self.passed, "mode": self.mode, "pairs_checked": self.pairs_checked}
        if self.reason:
            out["reason"] = self.reason
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class IsoWitness:
    """A claimed isomorphism ``source -> target`` given by index images."""

    source: FiniteSemigroup
    target: FiniteSemigroup
    forward: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.forward = np.asarray(self.forward, dtype=np.int64)
        if self.forward.shape != (len(self.source),):
            raise ValueError("forward map must have one entry per source element")

    @classmethod
    def from_rows(cls, source: FiniteSemigroup, target: FiniteSemigroup,
                  fn: Callable[[np.ndarray], np.ndarray], label: str = "") -> "IsoWitness":
        """Build from a vectorized map on 0-based element rows.  Images outside
        the target are recorded as -1 (and fail verification)."""
        return cls(source, target, target.lookup_rows(fn(source.rows)), label)

    @classmethod
    def identity(cls, S: FiniteSemigroup) -> "IsoWitness":
        return cls(S, S, np.arange(len(S)), "identity")

    def __call__(self, x: Transformation) -> Transformation:
        return self.target.element(int(self.forward[self.source.index_of(x)]))

    def then(self, other: "IsoWitness") -> "IsoWitness":
        """self followed by other; other's source must be self's target
        (same elements and rule, listed in any order)."""
        if not (self.target.same_elements(other.source) and self.target.rule == other.source.rule):
            raise ValueError("witnesses do not chain: target and source differ")
        mid = other.source.lookup(self.target.keys[self.forward])
        label = " ; ".join(x for x in (self.label, other.label) if x)
        return IsoWitness(self.source, other.target, other.forward[mid], label)

    def inverse(self) -> "IsoWitness":
        if not is_bijection(self.forward, len(self.target)):
            raise ValueError("not a bijection")
        inv = np.empty_like(self.forward)
        inv[self.forward] = np.arange(len(self.forward))
        return IsoWitness(self.target, self.source, inv, f"inverse({self.label})")

    def corrupted(self, i: int = 0, j: int = 1) -> "IsoWitness":
        """Copy with the images of elements i and j swapped (negative control)."""
        fwd = self.forward.copy()
        fwd[[i, j]] = fwd[[j, i]]
        return IsoWitness(self.source, self.target, fwd, f"corrupted({self.label})")


def is_bijection(forward: np.ndarray, target_size: int) -> bool:
    return (len(forward) == target_size and forward.min(initial=0) >= 0
            and len(np.unique(forward)) == target_size)


def _pair_detail(w: IsoWitness, i: int, j: int) -> dict:
    S, T = w.source, w.target
    x, y = S.element(i), S.element(j)
    xy = S.multiply(x, y)
    fi, fj = int(w.forward[i]), int(w.forward[j])
    fx, fy = T.element(fi), T.element(fj)
    k = S.index_of(xy, missing=-1)
    lhs = T.element(int(w.forward[k])) if k >= 0 else None
    return {"x": str(x), "y": str(y), "xy": str(xy),
            "phi(xy)": None if lhs is None else str(lhs),
            "phi(x)phi(y)": str(T.multiply(fx, fy))}


def verify_witness(w: IsoWitness, sample_pairs: int = SAMPLED_PAIRS, seed: int = 0,
                   exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> Verdict:
    """Bijectivity, then phi(xy) = phi(x)phi(y) over all pairs (or a seeded sample)."""
    m = len(w.source)
    mode = "exhaustive" if m <= exhaustive_limit else "sampled"
    if len(w.target) != m:
        return Verdict(False, mode, 0, f"sizes differ: {m} vs {len(w.target)}")
    fwd = w.forward
    if fwd.min() < 0:
        i = int(np.flatnonzero(fwd < 0)[0])
        return Verdict(False, mode, 0, "image outside target",
                       {"x": str(w.source.element(i))})
    if not is_bijection(fwd, m):
        vals, counts = np.unique(fwd, return_counts=True)
        dup = int(vals[counts > 1][0])
        both = np.flatnonzero(fwd == dup)[:2]
        return Verdict(False, mode, 0, "not injective",
                       {"x": str(w.source.element(int(both[0]))),
                        "y": str(w.source.element(int(both[1]))),
                        "image": str(w.target.element(dup))})
    S, T = w.source, w.target
    checked = 0
    if mode == "exhaustive":
        for i in range(m):
            lhs = S.table_row(i)
            rhs = T.table_row(int(fwd[i]))[fwd]
            bad = np.flatnonzero((lhs < 0) | (rhs < 0) | (fwd[lhs] != rhs))
            if len(bad):
                j = int(bad[0])
                return Verdict(False, mode, checked + j + 1, "not a homomorphism", _pair_detail(w, i, j))
            checked += m
        return Verdict(True, mode, checked)
    rng = np.random.default_rng(seed)
    i = rng.integers(0, m, sample_pairs)
    j = rng.integers(0, m, sample_pairs)
    lhs_idx = S.products(i, j)
    rhs = T.products(fwd[i], fwd[j])
    bad = np.flatnonzero((lhs_idx < 0) | (rhs < 0) | (fwd[np.maximum(lhs_idx, 0)] != rhs))
    if len(bad):
        k = int(bad[0])
        return Verdict(False, mode, k + 1, "not a homomorphism", _pair_detail(w, int(i[k]), int(j[k])))
    return Verdict(True, mode, sample_pairs)


def require(w: IsoWitness, **kw) -> IsoWitness:
    """Verify and return the witness, raising WitnessError on failure."""
    v = verify_witness(w, **kw)
    if not v:
        raise WitnessError(f"witness {w.label or ''} failed: {v.reason} {v.counterexample}")
    return w


@dataclass
class Embedding:
    """An injective homomorphism from ``source`` into the full T_degree,
    given by the image row of every source element."""

    source: FiniteSemigroup
    images: np.ndarray                # (m, degree), 0-based

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.int64)
        if self.images.shape[0] != len(self.source):
            raise ValueError("one image per source element required")

    @property
    def degree(self) -> int:
        return self.images.shape[1]

    def __call__(self, x: Transformation) -> Transformation:
        return Transformation.from_array(self.images[self.source.index_of(x)])

    def image_semigroup(self) -> FiniteSemigroup:
        return FiniteSemigroup(self.images)


def verify_embedding(emb: Embedding, sample_pairs: int = SAMPLED_PAIRS, seed: int = 0,
                     exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> Verdict:
    """Injectivity, then phi(x*y) = phi(x)phi(y) with plain composition on the right."""
    from .transformation import compose_rows, keys_of

    S, img = emb.source, emb.images
    m, d = img.shape
    mode = "exhaustive" if m <= exhaustive_limit else "sampled"
    keys = keys_of(img, d)
    if len(np.unique(keys)) != m:
        vals, inv, counts = np.unique(keys, return_inverse=True, return_counts=True)
        both = np.flatnonzero(counts[inv.ravel()] > 1)[:2]
        return Verdict(False, mode, 0, "not injective",
                       {"x": str(S.element(int(both[0]))), "y": str(S.element(int(both[1])))})

    def check(i, j, done):
        prod = S.products(i, j)
        rhs = compose_rows(img[i], img[j])
        bad = np.flatnonzero((prod < 0) | np.any(img[np.maximum(prod, 0)] != rhs, axis=1))
        if len(bad):
            k = bad[0]
            x, y = S.element(int(i[k])), S.element(int(j[k]))
            return Verdict(False, mode, done + int(k) + 1, "not a homomorphism",
                           {"x": str(x), "y": str(y), "xy": str(S.multiply(x, y)),
                            "phi(x)phi(y)": str(Transformation.from_array(rhs[k]))})
        return None

    if mode == "exhaustive":
        ar = np.arange(m)
        for i in range(m):
            v = check(np.full(m, i), ar, i * m)
            if v is not None:
                return v
        return Verdict(True, mode, m * m)
    rng = np.random.default_rng(seed)
    i = rng.integers(0, m, sample_pairs)
    j = rng.integers(0, m, sample_pairs)
    v = check(i, j, 0)
    return v if v is not None else Verdict(True, mode, sample_pairs)
