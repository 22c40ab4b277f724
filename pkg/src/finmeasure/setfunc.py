"""Nonnegative set functions on a finite algebra and their derived functions.

Values are exact :class:`fractions.Fraction` objects stored densely, one per
block mask.  Heavy scans (property checks, the variation table, atom flags)
run on an integer-scaled copy of the table through :mod:`finmeasure.kernels`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping

from . import kernels
from .space import (
    DEFAULT_BLOCK_LIMIT,
    MSet,
    MeasureError,
    Partition,
    Universe,
    check_block_limit,
    iter_bits,
    rgs_partitions,
    submasks,
)

MAX_TABLE_BLOCKS = 20


class Property(str, enum.Enum):
    MONOTONE = "monotone"
    NULL_ADDITIVE = "null_additive"
    SIGMA_NULL_ADDITIVE = "sigma_null_additive"
    SUBADDITIVE = "subadditive"
    FINITELY_ADDITIVE = "finitely_additive"
    SIGMA_SUBADDITIVE = "sigma_subadditive"
    NULL_CONTINUOUS = "null_continuous"


# On a finite algebra every sequence of sets takes finitely many values,
# so the countable clauses reduce to finite ones.
_COLLAPSE_NOTES = {
    Property.SIGMA_NULL_ADDITIVE: (
        "finite algebra: unions of sequences of null sets are finite unions, "
        "checked as closure of the null sets under pairwise union"
    ),
    Property.SIGMA_SUBADDITIVE: (
        "finite algebra: a sequence has finitely many distinct terms, "
        "so the clause is equivalent to (pairwise) subadditivity"
    ),
    Property.NULL_CONTINUOUS: (
        "finite algebra: an increasing sequence is eventually constant, "
        "so its union is one of its null terms; holds for every set function"
    ),
}

_KERNEL_KIND = {
    Property.MONOTONE: kernels.MONOTONE,
    Property.NULL_ADDITIVE: kernels.NULL_ADDITIVE,
    Property.SIGMA_NULL_ADDITIVE: kernels.NULL_UNION,
    Property.SUBADDITIVE: kernels.SUBADDITIVE,
    Property.SIGMA_SUBADDITIVE: kernels.SUBADDITIVE,
    Property.FINITELY_ADDITIVE: kernels.FINITELY_ADDITIVE,
}


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


def _check_table_size(u: Universe) -> None:
    if u.n_blocks > MAX_TABLE_BLOCKS:
        raise MeasureError(f"dense tables are limited to {MAX_TABLE_BLOCKS} blocks, got {u.n_blocks}")


@dataclass(frozen=True)
class SetFunction:
    """m: A -> [0, inf) with m(empty) = 0, stored as a dense table on block masks."""

    universe: Universe
    values: tuple[Fraction, ...]

    def __post_init__(self):
        u = self.universe
        _check_table_size(u)
        vals = tuple(as_fraction(v) for v in self.values)
        if len(vals) != 1 << u.n_blocks:
            raise MeasureError(f"expected {1 << u.n_blocks} values, got {len(vals)}")
        if vals[0] != 0:
            raise MeasureError("m(empty set) must be 0")
        for mask, v in enumerate(vals):
            if v < 0:
                raise MeasureError(f"negative value {v} at {MSet(u, mask)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, u: Universe, fn: Callable[[MSet], object]) -> "SetFunction":
        _check_table_size(u)
        return cls(u, tuple(Fraction(0) if m == 0 else as_fraction(fn(MSet(u, m)))
                            for m in range(1 << u.n_blocks)))

    @classmethod
    def from_sparse(cls, u: Universe, entries: Mapping[MSet, object], default=0) -> "SetFunction":
        _check_table_size(u)
        d = as_fraction(default)
        vals = [d] * (1 << u.n_blocks)
        vals[0] = Fraction(0)
        for s, v in entries.items():
            vals[s.mask] = as_fraction(v)
        return cls(u, tuple(vals))

    @classmethod
    def additive(cls, u: Universe, weights: Mapping[str, object]) -> "SetFunction":
        """Sum of point weights (points missing from ``weights`` weigh 0)."""
        w = [as_fraction(weights.get(p, 0)) for p in u.points]
        return cls.from_function(u, lambda s: sum((w[u.index[p]] for p in s.points()), Fraction(0)))

    @classmethod
    def zero(cls, u: Universe) -> "SetFunction":
        return cls(u, (Fraction(0),) * (1 << u.n_blocks))

    def __call__(self, s: MSet) -> Fraction:
        if s.universe is not self.universe and s.universe != self.universe:
            raise MeasureError("set belongs to a different universe")
        return self.values[s.mask]

    def value(self, mask: int) -> Fraction:
        return self.values[mask]

    @cached_property
    def scaled(self) -> tuple[list[int], int]:
        """(integer table, common denominator) with values[i] == ints[i] / denom."""
        denom = 1
        for v in self.values:
            denom = math.lcm(denom, v.denominator)
        return [v.numerator * (denom // v.denominator) for v in self.values], denom

    @cached_property
    def atom_mask_flags(self) -> bytearray:
        ints, _ = self.scaled
        return kernels.atom_flags(ints, self.universe.n_blocks)

    @cached_property
    def _variation_ints(self) -> list[int]:
        ints, _ = self.scaled
        return kernels.variation_table(ints, self.universe.n_blocks)


@dataclass
class PropertyReport:
    property: Property
    holds: bool
    witness: tuple[MSet, ...] | None = None
    witness_values: tuple[Fraction, ...] | None = None
    note: str | None = None

    def describe(self) -> str:
        lines = [f"property: {self.property.value}", f"holds: {str(self.holds).lower()}"]
        if self.witness is not None:
            lines.append("witness: " + " ".join(str(s) for s in self.witness))
            lines.append("witness_values: " + " ".join(fmt_rational(v) for v in self.witness_values))
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines)


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _witness_values(m: SetFunction, prop: Property, a: MSet, b: MSet) -> tuple[Fraction, ...]:
    if prop is Property.MONOTONE:
        return m(a), m(b)
    return m(a), m(b), m(a | b)


def violates(m: SetFunction, prop: Property, a: MSet, b: MSet) -> bool:
    """Re-evaluate a witness pair straight from the definitions."""
    ma, mb, mab = m(a), m(b), m(a | b)
    if prop is Property.MONOTONE:
        return a <= b and ma > mb
    if prop is Property.NULL_ADDITIVE:
        return mb == 0 and mab != ma
    if prop is Property.SIGMA_NULL_ADDITIVE:
        return ma == 0 and mb == 0 and mab != 0
    if prop in (Property.SUBADDITIVE, Property.SIGMA_SUBADDITIVE):
        return mab > ma + mb
    if prop is Property.FINITELY_ADDITIVE:
        return a.isdisjoint(b) and mab != ma + mb
    return False


def check_property(m: SetFunction, which: Property | str) -> PropertyReport:
    """Exhaustive check of one property; on failure the witness is the
    lexicographically first violating pair (A, B) in mask order.

    For monotone the pair reads A <= B with m(A) > m(B); for the others the
    values reported are m(A), m(B), m(A u B).
    """
    prop = Property(which)
    note = _COLLAPSE_NOTES.get(prop)
    if prop is Property.NULL_CONTINUOUS:
        return PropertyReport(prop, True, note=note)
    ints, _ = m.scaled
    hit = kernels.first_violation(ints, m.universe.n_blocks, _KERNEL_KIND[prop])
    if hit is None:
        return PropertyReport(prop, True, note=note)
    u = m.universe
    a, b = MSet(u, hit[0]), MSet(u, hit[1])
    return PropertyReport(prop, False, (a, b), _witness_values(m, prop, a, b), note)


def check_all(m: SetFunction) -> dict[Property, PropertyReport]:
    return {p: check_property(m, p) for p in Property}


@dataclass
class Implication:
    name: str
    antecedent: bool
    consequent: bool

    @property
    def ok(self) -> bool:
        return not self.antecedent or self.consequent


@dataclass
class ImplicationReport:
    checks: list[Implication] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, antecedent: bool, consequent: bool) -> None:
        self.checks.append(Implication(name, antecedent, consequent))

    def describe(self) -> str:
        rows = []
        for c in self.checks:
            status = "ok" if c.ok else "VIOLATED"
            rows.append(f"{c.name}: antecedent={str(c.antecedent).lower()} "
                        f"consequent={str(c.consequent).lower()} {status}")
        return "\n".join(rows)


def implication_suite(m: SetFunction) -> ImplicationReport:
    """Evaluate the standard implications between the properties on ``m``.

    A violated implication means a checker bug, never a property of ``m``.
    """
    r = check_all(m)
    h = {p: rep.holds for p, rep in r.items()}
    P = Property
    rep = ImplicationReport()
    rep.add("monotone & subadditive => null_additive",
            h[P.MONOTONE] and h[P.SUBADDITIVE], h[P.NULL_ADDITIVE])
    rep.add("finitely_additive => monotone", h[P.FINITELY_ADDITIVE], h[P.MONOTONE])
    rep.add("finitely_additive => subadditive", h[P.FINITELY_ADDITIVE], h[P.SUBADDITIVE])
    rep.add("null_additive => sigma_null_additive", h[P.NULL_ADDITIVE], h[P.SIGMA_NULL_ADDITIVE])
    rep.add("subadditive <=> sigma_subadditive", True, h[P.SUBADDITIVE] == h[P.SIGMA_SUBADDITIVE])
    rep.add("null_continuous (finite collapse)", True, h[P.NULL_CONTINUOUS])
    return rep


# ---------------------------------------------------------------- variation

def variation(m: SetFunction, e: MSet, limit: int | None = None) -> Fraction:
    """Largest sum of m over a partition of the measurable set ``e``.

    Computed by a subset dynamic program (the part holding the lowest block
    of ``e`` is chosen first), which visits each partition's value exactly
    once; the result is the maximum over all partitions of ``e``.
    """
    check_block_limit(e.n_blocks, limit)
    if not e.mask:
        return Fraction(0)
    u = m.universe
    ints, denom = m.scaled
    if u.n_blocks <= DEFAULT_BLOCK_LIMIT or e.mask == u.full_mask:
        return Fraction(m._variation_ints[e.mask], denom)
    table = kernels.variation_table(ints, u.n_blocks, e.mask)
    return Fraction(table[e.mask], denom)


def variation_witness(m: SetFunction, e: MSet, limit: int | None = None) -> Partition | None:
    """First partition of ``e`` (restricted-growth order) attaining the variation."""
    target = variation(m, e, limit)
    if not e.mask:
        return None
    for masks in rgs_partitions(e.block_indices()):
        if sum((m.values[p] for p in masks), Fraction(0)) == target:
            return Partition.from_masks(e, masks)
    raise AssertionError("variation not attained by any partition")


def variation_function(m: SetFunction, limit: int | None = None) -> SetFunction:
    """The variation of ``m`` restricted to the algebra, as a SetFunction."""
    check_block_limit(m.universe.n_blocks, limit)
    _, denom = m.scaled
    return SetFunction(m.universe, tuple(Fraction(v, denom) for v in m._variation_ints))


def _point_mask(u: Universe, e) -> int:
    if isinstance(e, MSet):
        return e.point_mask
    if isinstance(e, int):
        return e
    return u.point_mask(e)


def m_star(m: SetFunction, e) -> Fraction:
    """max m(A) over measurable A inside the point set ``e``."""
    u = m.universe
    inner = u.inner_mask(_point_mask(u, e))
    return max(m.values[s] for s in submasks(inner))


def m_tilde(m: SetFunction, e, limit: int | None = None) -> Fraction:
    """min of the variation over measurable supersets of the point set ``e``."""
    u = m.universe
    outer = u.outer_mask(_point_mask(u, e))
    free = u.full_mask ^ outer
    check_block_limit(u.n_blocks, limit)
    return min(variation(m, MSet(u, outer | s), limit) for s in submasks(free))


def m_tilde_function(m: SetFunction, limit: int | None = None) -> SetFunction:
    """m-tilde on every subset of points, as a SetFunction on the point power set."""
    u = m.universe
    pu = u if u.singleton_blocks else Universe(u.points)
    check_block_limit(u.n_blocks, limit)
    var = m._variation_ints
    _, denom = m.scaled
    # variation is monotone, so the minimum over supersets sits at the outer set;
    # m_tilde() computes the full minimum and the tests compare the two
    vals = tuple(Fraction(var[u.outer_mask(pm)], denom) for pm in range(1 << u.n_points))
    return SetFunction(pu, vals)


@dataclass
class PropagationReport:
    checks: list[Implication]
    variation_reports: dict[Property, PropertyReport]
    tilde_reports: dict[Property, PropertyReport]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def describe(self) -> str:
        return ImplicationReport(self.checks).describe()


def variation_propagation_check(m: SetFunction, limit: int | None = None) -> PropagationReport:
    P = Property
    mbar = variation_function(m, limit)
    mtil = m_tilde_function(m, limit)
    base = {p: check_property(m, p) for p in (P.NULL_ADDITIVE, P.SUBADDITIVE)}
    vr = {p: check_property(mbar, p) for p in (P.NULL_ADDITIVE, P.MONOTONE, P.FINITELY_ADDITIVE)}
    tr = {p: check_property(mtil, p) for p in (P.NULL_ADDITIVE, P.MONOTONE)}
    checks = [
        Implication("m null_additive => variation null_additive",
                    base[P.NULL_ADDITIVE].holds, vr[P.NULL_ADDITIVE].holds),
        Implication("variation null_additive => m_tilde null_additive",
                    vr[P.NULL_ADDITIVE].holds, tr[P.NULL_ADDITIVE].holds),
        Implication("variation monotone", True, vr[P.MONOTONE].holds),
        Implication("m_tilde monotone", True, tr[P.MONOTONE].holds),
        Implication("m subadditive => variation finitely_additive",
                    base[P.SUBADDITIVE].holds, vr[P.FINITELY_ADDITIVE].holds),
    ]
    return PropagationReport(checks, vr, tr)


def block_sum(m: SetFunction, mask: int) -> Fraction:
    return sum((m.values[1 << b] for b in iter_bits(mask)), Fraction(0))
