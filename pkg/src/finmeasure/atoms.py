"""Atoms of set functions and finitely purely atomic decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .setfunc import Property, SetFunction, check_property
from .space import (
    MSet,
    MeasureError,
    Partition,
    check_block_limit,
    iter_bits,
    rgs_partitions,
    submasks,
)


class HypothesisError(MeasureError):
    """A theorem's hypothesis does not hold for the given input."""


class StructureError(MeasureError):
    """Inputs passed the hypothesis checks but the expected structure is absent."""


@dataclass(frozen=True)
class AtomCheck:
    holds: bool
    witness: MSet | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class AtomDecomposition:
    atoms: tuple[MSet, ...]

    def as_partition(self) -> Partition:
        u = self.atoms[0].universe
        return Partition(u.full, self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return "{" + ",".join(str(a) for a in self.atoms) + "}"


@dataclass(frozen=True)
class AtomPoint:
    atom: MSet
    point: str | None
    block: MSet
    residual_value: Fraction


def is_atom(m: SetFunction, a: MSet) -> AtomCheck:
    """m(A) > 0 and every measurable B inside A has m(B) = 0 or m(A \\ B) = 0.

    The witness, when A fails the split test, is the first such B in mask order.
    """
    vals = m.values
    if vals[a.mask] <= 0:
        return AtomCheck(False)
    for b in submasks(a.mask):
        if vals[b] > 0 and vals[a.mask ^ b] > 0:
            return AtomCheck(False, MSet(a.universe, b))
    return AtomCheck(True)


def all_atoms(m: SetFunction) -> list[MSet]:
    u = m.universe
    flags = m.atom_mask_flags
    return [MSet(u, s) for s in range(1 << u.n_blocks) if flags[s]]


def _has_decomposition(flags, full: int) -> bool:
    # can[S]: S splits into atoms; the part holding S's lowest block is chosen first
    can = bytearray(full + 1)
    can[0] = 1
    for s in range(1, full + 1):
        low = s & -s
        rest = s ^ low
        for sub in submasks(rest):
            if flags[sub | low] and can[rest ^ sub]:
                can[s] = 1
                break
    return bool(can[full])


def decompose(m: SetFunction, limit: int | None = None) -> AtomDecomposition | None:
    """First partition of T, in restricted-growth order, made only of atoms.

    None means m is not finitely purely atomic.  The search walks the
    restricted growth strings depth first and abandons a prefix as soon as
    one of its parts can no longer be completed to an atom using the blocks
    still unassigned.
    """
    u = m.universe
    k = u.n_blocks
    check_block_limit(k, limit)
    flags = m.atom_mask_flags
    full = u.full_mask
    if not _has_decomposition(flags, full):
        return None

    # completable[i]: all A & prefix_i for atoms A, prefix_i = blocks 0..i
    completable = [set() for _ in range(k)]
    for a in range(1, full + 1):
        if flags[a]:
            for i in range(k):
                completable[i].add(a & ((2 << i) - 1))

    parts: list[int] = []

    def dfs(i: int) -> bool:
        if i == k:
            return all(flags[p] for p in parts)
        bit = 1 << i
        for j in range(len(parts) + 1):
            if j == len(parts):
                parts.append(bit)
            else:
                parts[j] |= bit
            if all(p in completable[i] for p in parts) and dfs(i + 1):
                return True
            if j == len(parts) - 1 and parts[j] == bit:
                parts.pop()
            else:
                parts[j] ^= bit
        return False

    if not dfs(0):
        raise StructureError("decomposition exists but the ordered search missed it")
    return AtomDecomposition(tuple(MSet(u, p) for p in parts))


def all_decompositions(m: SetFunction, limit: int | None = None) -> Iterator[AtomDecomposition]:
    """Every atom decomposition, by plain enumeration of all partitions of T."""
    u = m.universe
    check_block_limit(u.n_blocks, limit)
    flags = m.atom_mask_flags
    for masks in rgs_partitions(list(range(u.n_blocks))):
        if all(flags[p] for p in masks):
            yield AtomDecomposition(tuple(MSet(u, p) for p in masks))


def require(m: SetFunction, *props: Property) -> None:
    for p in props:
        rep = check_property(m, p)
        if not rep.holds:
            w = " ".join(str(s) for s in rep.witness) if rep.witness else ""
            raise HypothesisError(f"m is not {p.value} (witness {w})")


def require_atom(m: SetFunction, a: MSet) -> None:
    chk = is_atom(m, a)
    if not chk:
        why = f"split by {chk.witness}" if chk.witness is not None else "m(A) = 0"
        raise HypothesisError(f"{a} is not an atom ({why})")


def locate_atom_point(m: SetFunction, a: MSet, mode: str = "point") -> AtomPoint:
    """The unique carrier of an atom of a null-additive monotone m.

    On a finite discrete space every set function is regular, so only
    null-additivity and monotonicity are checked.  ``mode="point"`` needs
    singleton blocks; ``mode="block"`` returns the carrier block instead.
    """
    if mode not in ("point", "block"):
        raise ValueError(f"mode must be 'point' or 'block', not {mode!r}")
    require(m, Property.NULL_ADDITIVE, Property.MONOTONE)
    require_atom(m, a)
    u = m.universe
    if mode == "point" and not u.singleton_blocks:
        raise HypothesisError("point mode needs singleton blocks; use mode='block'")
    vals = m.values
    found = [b for b in iter_bits(a.mask)
             if vals[a.mask ^ (1 << b)] == 0 and vals[1 << b] == vals[a.mask]]
    if not found:
        raise StructureError(f"no carrier block in atom {a}")
    if len(found) > 1:
        raise StructureError(f"atom {a} has several carrier blocks")
    b = found[0]
    blk = MSet(u, 1 << b)
    point = u.blocks[b][0] if mode == "point" else None
    return AtomPoint(a, point, blk, vals[a.mask ^ (1 << b)])


def atom_partition_structure(m: SetFunction, a: MSet, p: Partition) -> int:
    """Index of the only part of ``p`` carrying m(a); all others must be null."""
    require(m, Property.NULL_ADDITIVE, Property.MONOTONE)
    require_atom(m, a)
    if p.target.mask != a.mask:
        raise MeasureError(f"partition target {p.target} is not {a}")
    full = m(a)
    idx = [i for i, part in enumerate(p.parts) if m(part) == full]
    others = [i for i, part in enumerate(p.parts) if i not in idx and m(part) != 0]
    if len(idx) != 1 or others:
        raise StructureError(f"partition {p} of atom {a} has {len(idx)} full and "
                             f"{len(others)} other positive parts")
    return idx[0]


def core_atom(m: SetFunction, a: MSet) -> MSet:
    """Intersection of all atoms contained in ``a``."""
    require(m, Property.NULL_ADDITIVE, Property.MONOTONE)
    require_atom(m, a)
    flags = m.atom_mask_flags
    core = a.mask
    for s in submasks(a.mask):
        if flags[s]:
            core &= s
    out = MSet(a.universe, core)
    if not is_atom(m, out) or m(out) != m(a):
        raise StructureError(f"core {out} of {a} is not an atom of the same mass")
    return out


@dataclass(frozen=True)
class SupportCheck:
    points: tuple[str, ...]
    residual: Fraction
    total: Fraction
    on_points: Fraction

    @property
    def ok(self) -> bool:
        return self.residual == 0 and self.total == self.on_points


def atom_points_support(m: SetFunction, decomposition: AtomDecomposition | None = None) -> SupportCheck:
    """For purely atomic null-additive monotone m on singletons: T minus the
    atom points is null and the points alone carry m(T)."""
    dec = decomposition or decompose(m)
    if dec is None:
        raise HypothesisError("m is not finitely purely atomic")
    u = m.universe
    pts = [locate_atom_point(m, a) for a in dec]
    pmask = 0
    for ap in pts:
        pmask |= ap.block.mask
    return SupportCheck(tuple(ap.point for ap in pts), m.values[u.full_mask ^ pmask],
                        m.values[u.full_mask], m.values[pmask])
