"""
Explicit finite semigroups of transformations.

A ``FiniteSemigroup`` is an ordered set of transformations of one degree
together with a ``ProductRule``: either plain composition or a sandwich
product x*y = x a y.  Elements live in a 0-based ``numpy`` array; lookups go
through sorted integer keys, and the Cayley table is built on demand.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .transformation import (
    DegreeMismatch,
    Transformation,
    all_images,
    compose_rows,
    keys_of,
    _check_bound,
)

CLOSURE_CAP = 10 ** 6
GREEN_CAP = 10 ** 4
# Above this size closedness is spot-checked on random pairs.
CLOSED_CHECK_EXHAUSTIVE = 4096
DENSE_LOOKUP_MAX = 2 ** 20


class CapExceeded(RuntimeError):
    def __init__(self, message: str, partial: int | None = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class ProductRule:
    """Plain composition, or the sandwich product x*y = x·a·y."""

    kind: str = "plain"
    sandwich: Transformation | None = None

    def __post_init__(self):
        if self.kind not in ("plain", "sandwich"):
            raise ValueError(f"unknown product rule {self.kind!r}")
        if (self.kind == "sandwich") != (self.sandwich is not None):
            raise ValueError("a sandwich element is required exactly for sandwich rules")

    @classmethod
    def plain(cls) -> "ProductRule":
        return cls()

    @classmethod
    def with_sandwich(cls, a: Transformation) -> "ProductRule":
        return cls("sandwich", a)

    @property
    def is_plain(self) -> bool:
        return self.kind == "plain"

    def check_degree(self, n: int) -> None:
        if self.sandwich is not None and self.sandwich.degree != n:
            raise DegreeMismatch(f"sandwich element has degree {self.sandwich.degree}, carrier {n}")

    def apply(self, x: Transformation, y: Transformation) -> Transformation:
        if self.sandwich is None:
            return x * y
        return x * self.sandwich * y

    def left_factor(self, rows: np.ndarray) -> np.ndarray:
        """x -> x·a for a stack of 0-based rows (identity for plain)."""
        if self.sandwich is None:
            return rows
        return self.sandwich.array()[rows]

    def __str__(self) -> str:
        return "plain" if self.sandwich is None else f"sandwich {self.sandwich}"


PLAIN = ProductRule()


class FiniteSemigroup:
    """An explicit semigroup: element array, product rule, key index."""

    def __init__(self, rows: np.ndarray, rule: ProductRule = PLAIN, *, degree: int | None = None,
                 check_closed: bool = False, name: str | None = None):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2 or len(rows) == 0:
            raise ValueError("a semigroup needs a nonempty (m, n) element array")
        n = rows.shape[1] if degree is None else degree
        if rows.shape[1] != n:
            raise DegreeMismatch("element array width differs from degree")
        if rows.min() < 0 or rows.max() >= n:
            raise ValueError("element images out of range")
        rule.check_degree(n)
        self._rows = rows
        self._rows.setflags(write=False)
        self.degree = n
        self.rule = rule
        self.name = name
        keys = keys_of(rows, n)
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        if len(sk) > 1 and np.any(sk[1:] == sk[:-1]):
            raise ValueError("duplicate elements")
        self._keys = keys
        self._sorted_keys = sk
        self._order = order
        # direct key -> index table when the key space is small
        self._dense: np.ndarray | None = None
        if n ** n <= DENSE_LOOKUP_MAX:
            dense = np.full(n ** n, -1, dtype=np.int64)
            dense[keys] = np.arange(len(keys))
            self._dense = dense
        self._elements: tuple[Transformation, ...] | None = None
        self._table: np.ndarray | None = None
        self._cache: dict = {}
        if check_closed:
            bad = self.closure_violation()
            if bad is not None:
                i, j = bad
                raise ValueError(f"not closed: {self.element(i)} * {self.element(j)} "
                                 f"= {self.rule.apply(self.element(i), self.element(j))} is missing")

    @classmethod
    def from_elements(cls, elements: Iterable[Transformation], rule: ProductRule = PLAIN,
                      **kw) -> "FiniteSemigroup":
        elements = list(elements)
        degrees = {e.degree for e in elements}
        if len(degrees) != 1:
            raise DegreeMismatch(f"elements of several degrees: {sorted(degrees)}")
        rows = np.array([e.images for e in elements], dtype=np.int64) - 1
        return cls(rows, rule, **kw)

    # -- element access ------------------------------------------------------

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def keys(self) -> np.ndarray:
        return self._keys

    @property
    def elements(self) -> tuple[Transformation, ...]:
        if self._elements is None:
            self._elements = tuple(Transformation.from_array(r) for r in self._rows)
        return self._elements

    def element(self, i: int) -> Transformation:
        if self._elements is not None:
            return self._elements[i]
        return Transformation.from_array(self._rows[i])

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self) -> Iterator[Transformation]:
        return iter(self.elements)

    def __contains__(self, t: Transformation) -> bool:
        return t.degree == self.degree and self.index_of(t, missing=-1) >= 0

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteSemigroup{label} size={len(self)} degree={self.degree} {self.rule}>"

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        """Element indices for the given keys; -1 where absent."""
        keys = np.asarray(keys, dtype=np.int64)
        if self._dense is not None:
            return self._dense[keys]
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        hit = self._sorted_keys[pos] == keys
        return np.where(hit, self._order[pos], -1)

    def lookup_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows)
        if rows.shape[-1] != self.degree:
            return np.full(rows.shape[:-1], -1, dtype=np.int64)
        return self.lookup(keys_of(rows, self.degree))

    def index_of(self, t: Transformation, missing: int | None = None) -> int:
        if t.degree != self.degree:
            raise DegreeMismatch(f"{t} has degree {t.degree}, semigroup has {self.degree}")
        i = int(self.lookup_rows(t.array()[None, :])[0])
        if i < 0:
            if missing is not None:
                return missing
            raise KeyError(f"{t} is not an element")
        return i

    # -- products --------------------------------------------------------------

    def multiply(self, x: Transformation, y: Transformation) -> Transformation:
        return self.rule.apply(x, y)

    def product_rows(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Rows of x_i * x_j for paired index arrays."""
        left = self.rule.left_factor(self._rows[i])
        return compose_rows(left, self._rows[j])

    def products(self, i, j) -> np.ndarray:
        """Indices of x_i * x_j (-1 if the product falls outside the set)."""
        i = np.asarray(i)
        j = np.asarray(j)
        return self.lookup(keys_of(self.product_rows(i, j), self.degree))

    def product(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return int(self.products(np.array([i]), np.array([j]))[0])

    def table_row(self, i: int) -> np.ndarray:
        """Indices of x_i * x_j for all j."""
        if self._table is not None:
            return self._table[i]
        left = self.rule.left_factor(self._rows[i])
        return self.lookup(keys_of(self._rows[:, left], self.degree))

    @property
    def table(self) -> np.ndarray:
        """Cayley table of indices (-1 marks products outside the set)."""
        if self._table is None:
            m, n = self._rows.shape
            left = self.rule.left_factor(self._rows)
            table = np.empty((m, m), dtype=np.int32 if m < 2 ** 31 else np.int64)
            chunk = max(1, 4_000_000 // max(1, m * n))
            for start in range(0, m, chunk):
                block = left[start:start + chunk]                 # (c, n)
                prods = self._rows[:, block]                      # (m, c, n)
                table[start:start + chunk] = self.lookup(keys_of(prods, n)).T
            table.setflags(write=False)
            self._table = table
        return self._table

    def closure_violation(self, samples: int = 100_000, seed: int = 0) -> tuple[int, int] | None:
        """A pair whose product leaves the set, or None."""
        m = len(self)
        if m <= CLOSED_CHECK_EXHAUSTIVE:
            bad = np.argwhere(self.table < 0)
            return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))
        rng = np.random.default_rng(seed)
        i = rng.integers(0, m, samples)
        j = rng.integers(0, m, samples)
        miss = np.flatnonzero(self.products(i, j) < 0)
        return None if len(miss) == 0 else (int(i[miss[0]]), int(j[miss[0]]))

    def is_closed(self) -> bool:
        return self.closure_violation() is None

    def idempotents(self) -> np.ndarray:
        m = np.arange(len(self))
        return np.flatnonzero(self.products(m, m) == m)

    def ranks(self) -> np.ndarray:
        s = np.sort(self._rows, axis=1)
        return 1 + np.count_nonzero(np.diff(s, axis=1), axis=1)

    def same_elements(self, other: "FiniteSemigroup") -> bool:
        return (self.degree == other.degree and len(self) == len(other)
                and np.array_equal(self._sorted_keys, other._sorted_keys))

    def with_rule(self, rule: ProductRule, check_closed: bool = True) -> "FiniteSemigroup":
        """Same carrier under another product (no membership requirement on the
        sandwich element)."""
        return FiniteSemigroup(self._rows, rule, check_closed=check_closed)


# -- constructors -------------------------------------------------------------

def _text_sort(rows: np.ndarray) -> np.ndarray:
    texts = ["[" + ",".join(str(int(v) + 1) for v in r) + "]" for r in rows]
    return rows[sorted(range(len(rows)), key=texts.__getitem__)]


def closure(generators: Sequence[Transformation], rule: ProductRule = PLAIN,
            cap: int = CLOSURE_CAP) -> FiniteSemigroup:
    """Smallest set containing the generators and closed under ``rule``.

    Elements are listed in BFS layers (each layer = new right multiples of
    the previous one by generators), ties inside a layer broken by text form.
    """
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].degree
    if any(g.degree != n for g in generators):
        raise DegreeMismatch("generators of several degrees")
    rule.check_degree(n)
    gens = np.unique(np.array([g.images for g in generators], dtype=np.int64) - 1, axis=0)
    layer = _text_sort(gens)
    seen = set(keys_of(layer, n).tolist())
    layers = [layer]
    total = len(layer)
    while len(layer):
        left = rule.left_factor(layer)
        prods = left[:, None, :].repeat(len(gens), axis=1)       # (k, g, n)
        prods = compose_rows(prods, gens[None, :, :]).reshape(-1, n)
        pk = keys_of(prods, n)
        _, first = np.unique(pk, return_index=True)
        fresh = [i for i in first if int(pk[i]) not in seen]
        layer = prods[fresh]
        if len(layer):
            layer = _text_sort(layer)
            seen.update(keys_of(layer, n).tolist())
            layers.append(layer)
            total += len(layer)
            if total > cap:
                raise CapExceeded(f"closure exceeded cap {cap} (reached {total} elements)", total)
    return FiniteSemigroup(np.concatenate(layers), rule)


def full_tn(n: int, bound: int | None = None) -> FiniteSemigroup:
    """T_n with elements in lexicographic order of image lists (shared instance)."""
    _check_bound(n, bound)
    return _full_tn(n)


@functools.lru_cache(maxsize=8)
def _full_tn(n: int) -> FiniteSemigroup:
    return FiniteSemigroup(all_images(n), PLAIN, name=f"T_{n}")


def variant(S: FiniteSemigroup, a: Transformation) -> FiniteSemigroup:
    """S^a: same elements, product x*y = x a y.

    For S already under a sandwich d, the variant at a is sandwich d a d.
    """
    if a.degree != S.degree:
        raise DegreeMismatch(f"sandwich element degree {a.degree} vs carrier {S.degree}")
    if a not in S:
        raise ValueError(f"{a} is not an element of the semigroup")
    if S.rule.sandwich is None:
        rule = ProductRule.with_sandwich(a)
    else:
        d = S.rule.sandwich
        rule = ProductRule.with_sandwich(d * a * d)
    name = f"{S.name}^{a}" if S.name else None
    return FiniteSemigroup(S.rows, rule, name=name)


def sandwich_set(S: FiniteSemigroup, left: Transformation, right: Transformation) -> np.ndarray:
    """Sorted distinct rows of {left·x·right : x in S} (plain products)."""
    if left.degree != S.degree or right.degree != S.degree:
        raise DegreeMismatch("degree mismatch")
    if S.rule.is_plain and len(S) == S.degree ** S.degree:
        return sandwich_in_full(S.degree, left, right)
    rows = right.array()[S.rows[:, left.array()]]
    _, first = np.unique(keys_of(rows, S.degree), return_index=True)
    return rows[first]


def sandwich_in_full(n: int, left: Transformation, right: Transformation,
                     cap: int = CLOSURE_CAP) -> np.ndarray:
    """Sorted rows of left·T_n·right without listing T_n.

    left·x·right only sees x on im(left), and right·(x|im left) ranges over
    every map im(left) -> im(right), so the set has rank(right)^rank(left)
    elements.
    """
    if left.degree != n or right.degree != n:
        raise DegreeMismatch("degree mismatch")
    L = np.array(sorted(left.image)) - 1
    R = np.array(sorted(right.image)) - 1
    size = len(R) ** len(L)
    if size > cap:
        raise CapExceeded(f"sandwich set has {size} elements, cap is {cap}", size)
    maps = R[np.indices((len(R),) * len(L)).reshape(len(L), -1).T]     # (size, |L|)
    pos = np.full(n, -1, dtype=np.int64)
    pos[L] = np.arange(len(L))
    rows = maps[:, pos[left.array()]]
    return rows[np.argsort(keys_of(rows, n), kind="stable")]


def local_in_full(n: int, a: Transformation) -> FiniteSemigroup:
    """a·T_n·a, built without T_n."""
    return FiniteSemigroup(sandwich_in_full(n, a, a), PLAIN, name=f"{a}T_{n}{a}")


def local_subsemigroup(S: FiniteSemigroup, a: Transformation) -> FiniteSemigroup:
    """aSa under the plain product, elements in lexicographic order."""
    if not S.rule.is_plain:
        raise ValueError("local subsemigroups are taken in plain semigroups")
    # a x a . a y a = a (x a a y) a, so closure needs no check
    return FiniteSemigroup(sandwich_set(S, a, a), PLAIN, check_closed=False,
                           name=f"{a}{S.name}{a}" if S.name else None)


def identity_index(S: FiniteSemigroup) -> int | None:
    """Index of a two-sided identity, if S is a monoid."""
    if "identity" not in S._cache:
        found = None
        m = len(S)
        ar = np.arange(m)
        if m <= CLOSED_CHECK_EXHAUSTIVE:
            t = S.table
            left_ok = np.all(t == ar[None, :], axis=1)
            right_ok = np.all(t == ar[:, None], axis=0)
            hits = np.flatnonzero(left_ok & right_ok)
            found = int(hits[0]) if len(hits) else None
        else:
            # an identity is an idempotent; test those only
            for e in S.idempotents():
                if np.array_equal(S.table_row(int(e)), ar) and \
                        np.array_equal(S.products(ar, np.full(m, e)), ar):
                    found = int(e)
                    break
        S._cache["identity"] = found
    return S._cache["identity"]


def is_monoid(S: FiniteSemigroup) -> tuple[bool, Transformation | None]:
    e = identity_index(S)
    return (e is not None, None if e is None else S.element(e))
