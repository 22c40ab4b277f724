"""Finite measurable spaces, measurable sets and the partition lattice.

A finite algebra of sets is always generated by a partition of the points
into *blocks*; a measurable set is a union of blocks and is stored as a
bitmask over block indices.  Blocks are kept sorted by their first point so
that masks, and everything derived from them, have a canonical order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

DEFAULT_BLOCK_LIMIT = 12


class MeasureError(Exception):
    """Base class for errors raised by finmeasure."""


class UniverseMismatchError(MeasureError):
    pass


class NotMeasurableError(MeasureError):
    pass


class TargetMismatchError(MeasureError):
    pass


class SizeLimitError(MeasureError):
    pass


def bell_number(k: int) -> int:
    """Number of set partitions of a k-element set (Bell triangle)."""
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing order, starting with 0."""
    s = 0
    while True:
        yield s
        s = (s - mask) & mask
        if s == 0:
            return


@dataclass(frozen=True)
class Universe:
    points: tuple[str, ...]
    blocks: tuple[tuple[str, ...], ...] = ()

    def __init__(self, points: Iterable[str], blocks: Iterable[Iterable[str]] | None = None):
        pts = tuple(points)
        if not pts:
            raise MeasureError("a universe needs at least one point")
        if len(set(pts)) != len(pts):
            raise MeasureError(f"duplicate point labels in {pts}")
        index = {p: i for i, p in enumerate(pts)}
        if blocks is None:
            blks = [(p,) for p in pts]
        else:
            blks = []
            seen: set[str] = set()
            for raw in blocks:
                raw = list(raw)
                if not raw:
                    raise MeasureError("blocks must be nonempty")
                for p in raw:
                    if p not in index:
                        raise MeasureError(f"block point {p!r} is not in the universe")
                blk = tuple(sorted(set(raw), key=index.__getitem__))
                for p in blk:
                    if p in seen:
                        raise MeasureError(f"point {p!r} lies in two blocks")
                    seen.add(p)
                blks.append(blk)
            missing = [p for p in pts if p not in seen]
            if missing:
                raise MeasureError(f"points not covered by any block: {missing}")
            blks.sort(key=lambda b: index[b[0]])
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "blocks", tuple(blks))

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        """Block index of every point, in point order."""
        out = [0] * len(self.points)
        for b, blk in enumerate(self.blocks):
            for p in blk:
                out[self.index[p]] = b
        return tuple(out)

    @cached_property
    def block_point_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << self.index[p] for p in blk) for blk in self.blocks)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.blocks)) - 1

    @property
    def singleton_blocks(self) -> bool:
        return len(self.blocks) == len(self.points)

    @property
    def empty(self) -> "MSet":
        return MSet(self, 0)

    @property
    def full(self) -> "MSet":
        return MSet(self, self.full_mask)

    def block(self, i: int) -> "MSet":
        return MSet(self, 1 << i)

    def point_mask(self, labels: Iterable[str]) -> int:
        mask = 0
        for p in labels:
            if p not in self.index:
                raise MeasureError(f"unknown point {p!r}")
            mask |= 1 << self.index[p]
        return mask

    def mset(self, labels: Iterable[str]) -> "MSet":
        """The measurable set with exactly these points; rejects non-unions of blocks."""
        pmask = self.point_mask(labels)
        out = self.outer_mask(pmask)
        if self.points_of_mask(out) != pmask:
            names = [self.points[i] for i in iter_bits(pmask)]
            raise NotMeasurableError(f"{{{','.join(names)}}} is not a union of blocks")
        return MSet(self, out)

    def outer_mask(self, pmask: int) -> int:
        """Blocks meeting the point set."""
        out = 0
        for i in iter_bits(pmask):
            out |= 1 << self.block_of[i]
        return out

    def inner_mask(self, pmask: int) -> int:
        """Blocks contained in the point set."""
        out = 0
        for b, bm in enumerate(self.block_point_masks):
            if bm & pmask == bm:
                out |= 1 << b
        return out

    def points_of_mask(self, mask: int) -> int:
        out = 0
        for b in iter_bits(mask):
            out |= self.block_point_masks[b]
        return out

    def msets(self) -> Iterator["MSet"]:
        """Every measurable set, in increasing mask order."""
        for mask in range(1 << self.n_blocks):
            yield MSet(self, mask)


@dataclass(frozen=True)
class MSet:
    universe: Universe = field(repr=False)
    mask: int

    def _check(self, other: "MSet") -> None:
        if self.universe is not other.universe and self.universe != other.universe:
            raise UniverseMismatchError("measurable sets belong to different universes")

    def __or__(self, other: "MSet") -> "MSet":
        self._check(other)
        return MSet(self.universe, self.mask | other.mask)

    def __and__(self, other: "MSet") -> "MSet":
        self._check(other)
        return MSet(self.universe, self.mask & other.mask)

    def __sub__(self, other: "MSet") -> "MSet":
        self._check(other)
        return MSet(self.universe, self.mask & ~other.mask)

    def __invert__(self) -> "MSet":
        return MSet(self.universe, self.universe.full_mask ^ self.mask)

    def complement(self) -> "MSet":
        return ~self

    def __le__(self, other: "MSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "MSet") -> bool:
        return self <= other and self.mask != other.mask

    def issubset(self, other: "MSet") -> bool:
        return self <= other

    def isdisjoint(self, other: "MSet") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    def __bool__(self) -> bool:
        return self.mask != 0

    @property
    def n_blocks(self) -> int:
        return self.mask.bit_count()

    def block_indices(self) -> list[int]:
        return list(iter_bits(self.mask))

    @property
    def point_mask(self) -> int:
        return self.universe.points_of_mask(self.mask)

    def points(self) -> tuple[str, ...]:
        pts = self.universe.points
        return tuple(pts[i] for i in iter_bits(self.point_mask))

    def __str__(self) -> str:
        return "{" + ",".join(self.points()) + "}"

    def __repr__(self) -> str:
        return f"MSet({self})"


@dataclass(frozen=True)
class Partition:
    """A finite family of disjoint nonempty measurable sets covering ``target``.

    Parts are stored sorted by their lowest block, so equality does not
    depend on the order they were given in.
    """

    target: MSet
    parts: tuple[MSet, ...]

    def __init__(self, target: MSet, parts: Iterable[MSet]):
        parts = tuple(parts)
        acc = 0
        for p in parts:
            target._check(p)
            if not p.mask:
                raise MeasureError("partition parts must be nonempty")
            if acc & p.mask:
                raise MeasureError("partition parts must be pairwise disjoint")
            acc |= p.mask
        if acc != target.mask:
            raise MeasureError(f"parts do not cover {target}")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "parts", tuple(sorted(parts, key=lambda s: s.mask & -s.mask)))

    @classmethod
    def from_masks(cls, target: MSet, masks: Iterable[int]) -> "Partition":
        u = target.universe
        return cls(target, (MSet(u, m) for m in masks))

    @property
    def universe(self) -> Universe:
        return self.target.universe

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(p.mask for p in self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[MSet]:
        return iter(self.parts)

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self.parts) + "}"


def _same_target(p: Partition, q: Partition) -> None:
    p.target._check(q.target)
    if p.target.mask != q.target.mask:
        raise TargetMismatchError(f"partitions of {p.target} and {q.target}")


def is_finer(p: Partition, q: Partition) -> bool:
    """True iff every part of ``p`` lies inside some part of ``q``."""
    _same_target(p, q)
    return all(any(a & ~b == 0 for b in q.masks) for a in p.masks)


def common_refinement(p: Partition, q: Partition) -> Partition:
    _same_target(p, q)
    masks = [a & b for a in p.masks for b in q.masks if a & b]
    return Partition.from_masks(p.target, masks)


def rgs_partitions(blocks: Sequence[int]) -> Iterator[list[int]]:
    """Set partitions of ``blocks`` (bit indices) in restricted-growth-string order.

    Each partition is yielded as a list of part masks, ordered by first block.
    The first one is the single-part partition and the last the finest.
    """
    k = len(blocks)
    if k == 0:
        yield []
        return
    bits = [1 << b for b in blocks]
    rgs = [0] * k
    # prefix maxima: mx[i] = max(rgs[:i])
    mx = [0] * (k + 1)
    while True:
        parts = [0] * (mx[k] + 1)
        for i in range(k):
            parts[rgs[i]] |= bits[i]
        yield parts
        i = k - 1
        while i > 0 and rgs[i] > mx[i]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        for j in range(i + 1, k):
            rgs[j] = 0
        for j in range(i, k):
            mx[j + 1] = max(mx[j], rgs[j])


def check_block_limit(k: int, limit: int | None) -> None:
    limit = DEFAULT_BLOCK_LIMIT if limit is None else limit
    if k > limit:
        raise SizeLimitError(
            f"{k} blocks exceeds the enumeration limit {limit} "
            f"(Bell({k}) = {bell_number(k)} partitions); raise the limit explicitly"
        )


def enumerate_partitions(u: Universe, e: MSet, limit: int | None = None) -> Iterator[Partition]:
    """Every partition of ``e`` into measurable parts, each exactly once."""
    if e.universe is not u and e.universe != u:
        raise UniverseMismatchError("set does not belong to this universe")
    blocks = e.block_indices()
    check_block_limit(len(blocks), limit)
    if not blocks:
        return
    for masks in rgs_partitions(blocks):
        yield Partition.from_masks(e, masks)


def finest_partition(u: Universe, e: MSet) -> Partition:
    if not e.mask:
        raise MeasureError("the empty set has no partition into nonvoid parts")
    return Partition.from_masks(e, (1 << b for b in e.block_indices()))
