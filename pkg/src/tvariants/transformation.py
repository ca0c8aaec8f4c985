"""
Transformations of {1..n}: composition, rank, image, kernel, tabular form.

Points are 1-based and maps act on the right, so ``f * g`` is "first f,
then g": x(fg) = (xf)g.  A transformation is immutable and hashable.

Array helpers at the bottom work on 0-based ``numpy`` image arrays (one
transformation per row) and are what the semigroup code uses in bulk.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

# Largest degree for which all of T_n may be enumerated (7^7 = 823543).
ENUMERATION_BOUND = 7


class DegreeMismatch(ValueError):
    pass


class Transformation:
    """A total map on {1..degree}, stored as its image list."""

    __slots__ = ("_images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        n = len(images)
        if n == 0:
            raise ValueError("a transformation needs degree >= 1")
        for x in images:
            if not 1 <= x <= n:
                raise ValueError(f"image {x} outside 1..{n} in {list(images)}")
        self._images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, n: int) -> "Transformation":
        return cls(range(1, n + 1))

    @classmethod
    def constant(cls, n: int, value: int) -> "Transformation":
        return cls([value] * n)

    @classmethod
    def parse(cls, text: str) -> "Transformation":
        """Read the bracketed text form, e.g. ``"[2,3,1]"``."""
        m = re.fullmatch(r"\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*", text)
        if m is None:
            raise ValueError(f"not a transformation literal: {text!r}")
        return cls(int(tok) for tok in m.group(1).split(","))

    @classmethod
    def from_array(cls, row: Sequence[int]) -> "Transformation":
        """Build from a 0-based image array."""
        return cls(int(x) + 1 for x in row)

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    @property
    def degree(self) -> int:
        return len(self._images)

    def array(self) -> np.ndarray:
        """0-based image array."""
        return np.fromiter((x - 1 for x in self._images), dtype=np.int64, count=self.degree)

    def __call__(self, x: int) -> int:
        return self._images[x - 1]

    def __mul__(self, other: "Transformation") -> "Transformation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Transformation":
        if k < 1:
            raise ValueError("only positive powers exist in a semigroup")
        out = self
        for _ in range(k - 1):
            out = compose(out, self)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Transformation) and self._images == other._images

    def __lt__(self, other: "Transformation") -> bool:
        return (self.degree, self._images) < (other.degree, other._images)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self._images)) + "]"

    def __repr__(self) -> str:
        return f"Transformation({str(self)})"

    @property
    def rank(self) -> int:
        return len(set(self._images))

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self._images)

    @property
    def kernel(self) -> tuple[frozenset[int], ...]:
        """Partition of the domain by equal image, blocks ordered by minimum."""
        return to_tabular(self).blocks

    def is_permutation(self) -> bool:
        return self.rank == self.degree

    def is_idempotent(self) -> bool:
        return is_idempotent(self)

    def inverse(self) -> "Transformation":
        """Group inverse of a permutation."""
        if not self.is_permutation():
            raise ValueError(f"{self} is not a permutation")
        inv = [0] * self.degree
        for x, y in enumerate(self._images, start=1):
            inv[y - 1] = x
        return Transformation(inv)

    def restrict(self, points: Sequence[int]) -> "Transformation":
        """Restriction to ``points`` (which must be mapped into themselves),
        relabelled along the given order as 1..len(points)."""
        pos = {p: i for i, p in enumerate(points, start=1)}
        try:
            return Transformation(pos[self(p)] for p in points)
        except KeyError:
            raise ValueError(f"{self} does not map {list(points)} into itself") from None

    def extend(self, degree: int, fill: Sequence[int] | None = None) -> "Transformation":
        """Extension to {1..degree}; new points go to ``fill`` (default: fixed)."""
        extra = degree - self.degree
        if extra < 0:
            raise ValueError("cannot extend to a smaller degree")
        if fill is None:
            fill = range(self.degree + 1, degree + 1)
        fill = list(fill)
        if len(fill) != extra:
            raise ValueError(f"need {extra} fill values, got {len(fill)}")
        return Transformation(list(self._images) + fill)


def _check_degrees(f: Transformation, g: Transformation) -> None:
    if f.degree != g.degree:
        raise DegreeMismatch(f"degrees differ: {f.degree} vs {g.degree}")


def compose(f: Transformation, g: Transformation) -> Transformation:
    """Left-to-right product: x(fg) = (xf)g."""
    _check_degrees(f, g)
    gi = g.images
    return Transformation(gi[x - 1] for x in f.images)


def rank(f: Transformation) -> int:
    return f.rank


def image(f: Transformation) -> frozenset[int]:
    return f.image


def kernel(f: Transformation) -> tuple[frozenset[int], ...]:
    return f.kernel


@dataclass(frozen=True)
class TabularForm:
    """Blocks A_1..A_r of the kernel with their common images a_1..a_r."""

    blocks: tuple[frozenset[int], ...]
    points: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        object.__setattr__(self, "points", tuple(int(p) for p in self.points))
        if len(self.blocks) != len(self.points):
            raise ValueError("need one point per block")
        if any(not b for b in self.blocks):
            raise ValueError("blocks must be nonempty")
        n = sum(len(b) for b in self.blocks)
        union = frozenset().union(*self.blocks)
        if len(union) != n or union != frozenset(range(1, n + 1)):
            raise ValueError(f"blocks do not partition 1..{n}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")
        if any(not 1 <= p <= n for p in self.points):
            raise ValueError(f"points must lie in 1..{n}")

    @property
    def degree(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def rank(self) -> int:
        return len(self.blocks)

    def normalized(self) -> "TabularForm":
        pairs = sorted(zip(self.blocks, self.points), key=lambda bp: min(bp[0]))
        return TabularForm(tuple(b for b, _ in pairs), tuple(p for _, p in pairs))

    def __str__(self) -> str:
        top = " ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks)
        bottom = " ".join(map(str, self.points))
        return f"({top} / {bottom})"


def to_tabular(f: Transformation) -> TabularForm:
    groups: dict[int, list[int]] = {}
    for x, y in enumerate(f.images, start=1):
        groups.setdefault(y, []).append(x)
    # dict order is first occurrence, i.e. ascending block minimum
    return TabularForm(tuple(frozenset(v) for v in groups.values()), tuple(groups))


def from_tabular(t: TabularForm) -> Transformation:
    images = [0] * t.degree
    for block, point in zip(t.blocks, t.points):
        for x in block:
            images[x - 1] = point
    return Transformation(images)


def is_idempotent(f: Transformation) -> bool:
    """f^2 = f, tested as "every image point lies in its own kernel block"."""
    ims = f.images
    return all(ims[p - 1] == p for p in set(ims))


def conjugate(f: Transformation, q: Transformation) -> Transformation:
    """q^-1 f q, i.e. f with points renamed along the permutation q."""
    _check_degrees(f, q)
    if not q.is_permutation():
        raise ValueError(f"{q} is not a permutation")
    return q.inverse() * f * q


def relabelling(n: int, first: Iterable[int]) -> Transformation:
    """Permutation sending the points of ``first`` (in the given order) to
    1, 2, ... and the remaining points, ascending, to the rest."""
    first = list(first)
    rest = [x for x in range(1, n + 1) if x not in set(first)]
    images = [0] * n
    for new, old in enumerate(first + rest, start=1):
        images[old - 1] = new
    return Transformation(images)


def _check_bound(n: int, bound: int | None) -> None:
    bound = ENUMERATION_BOUND if bound is None else bound
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n > bound:
        raise ValueError(f"T_{n} has {n}^{n} elements; enumeration bound is {bound}")


def enumerate_all(n: int, bound: int | None = None) -> Iterator[Transformation]:
    """All n^n transformations, lexicographic by image list."""
    _check_bound(n, bound)
    for row in all_images(n):
        yield Transformation.from_array(row)


def sample(n: int, seed: int | random.Random | None = None) -> Transformation:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return Transformation(rng.randint(1, n) for _ in range(n))


def sample_permutation(n: int, seed: int | random.Random | None = None) -> Transformation:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    pts = list(range(1, n + 1))
    rng.shuffle(pts)
    return Transformation(pts)


# -- bulk array helpers (0-based) --------------------------------------------

def all_images(n: int) -> np.ndarray:
    """(n^n, n) array of every image list, lexicographic."""
    return np.indices((n,) * n, dtype=np.int8 if n < 128 else np.int64).reshape(n, -1).T.astype(np.int64)


def key_weights(n: int) -> np.ndarray:
    """Place values so that keys sort like lexicographic image lists."""
    if n ** n >= 2 ** 62:
        raise ValueError(f"degree {n} too large for integer keys")
    return n ** np.arange(n - 1, -1, -1, dtype=np.int64)


def keys_of(rows: np.ndarray, n: int) -> np.ndarray:
    return rows.astype(np.int64, copy=False) @ key_weights(n)


def compose_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise x*y for broadcastable stacks of 0-based image arrays."""
    x, y = np.broadcast_arrays(x, y)
    return np.take_along_axis(y, x, axis=-1)
