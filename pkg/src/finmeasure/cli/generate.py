"""Seeded generator of documents whose measures are atomic by construction.

A carrier measure picks distinct carrier points c_1..c_k with weights
w_i >= 1 and sets m(B) = h({i : c_i in B}) with h one of sum, squared sum
or max.  m(B) = 0 exactly when B holds no carrier, which makes m monotone
and null-additive; the atoms are the sets holding exactly one carrier, and
T splits into such sets.  Nothing is sampled and filtered.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..atoms import decompose
from ..integrate import VecFunction
from ..rn import integral_measure
from ..setfunc import MAX_TABLE_BLOCKS, Property, SetFunction, check_property
from ..space import MeasureError, Universe, iter_bits
from .textio import Document

KINDS = ("additive", "square", "max")


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    points: int
    carriers: int
    kind: str = "additive"
    dim: int = 1

    def validate(self) -> None:
        if not 1 <= self.points <= MAX_TABLE_BLOCKS:
            raise MeasureError(f"points must be between 1 and {MAX_TABLE_BLOCKS}")
        if self.carriers < 1:
            raise MeasureError("carriers must be at least 1 (m(T) > 0 is required)")
        if self.carriers > self.points:
            raise MeasureError("carriers cannot exceed points")
        if self.kind not in KINDS:
            raise MeasureError(f"kind must be one of {', '.join(KINDS)}")
        if self.dim < 1:
            raise MeasureError("dim must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise MeasureError("seed must be a 64-bit unsigned integer")


def point_labels(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"p{i}" for i in range(n)]


def carrier_measure(u: Universe, carriers: Sequence[str], weights: Sequence, kind: str = "additive") -> SetFunction:
    if kind not in KINDS:
        raise MeasureError(f"unknown kind {kind!r}")
    if len(set(carriers)) != len(carriers) or len(weights) != len(carriers):
        raise MeasureError("carriers must be distinct, one weight each")
    ws = [Fraction(w) for w in weights]
    if any(w <= 0 for w in ws):
        raise MeasureError("carrier weights must be positive")
    cbits = [1 << u.index[c] for c in carriers]

    def value(s):
        pm = s.point_mask
        held = [w for w, c in zip(ws, cbits) if pm & c]
        if not held:
            return 0
        if kind == "additive":
            return sum(held)
        if kind == "square":
            return sum(held) ** 2
        return max(held)

    return SetFunction.from_function(u, value)


def random_rational(rng: random.Random, lo: int = -6, hi: int = 6, den: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_function(rng: random.Random, u: Universe, dim: int, block_constant: bool = True) -> VecFunction:
    vals = [None] * u.n_points
    for b, blk in enumerate(u.blocks):
        v = tuple(random_rational(rng) for _ in range(dim))
        for p in blk:
            vals[u.index[p]] = v if block_constant else tuple(random_rational(rng) for _ in range(dim))
    return VecFunction(u, dim, tuple(vals))


def generate_measure(rng: random.Random, u: Universe, carriers: int, kind: str) -> SetFunction:
    chosen = sorted(rng.sample(range(u.n_points), carriers))
    weights = [1 + Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in chosen]
    return carrier_measure(u, [u.points[i] for i in chosen], weights, kind)


def self_test(m: SetFunction) -> None:
    for p in (Property.MONOTONE, Property.NULL_ADDITIVE):
        if not check_property(m, p).holds:
            raise AssertionError(f"generated measure is not {p.value}")
    if decompose(m) is None:
        raise AssertionError("generated measure is not finitely purely atomic")


def generate(spec: GeneratorSpec) -> Document:
    """Document with a carrier measure ``m``, a random function ``f`` and the
    integral measure ``mu`` of another random function (so ``mu`` is admissible)."""
    spec.validate()
    rng = random.Random(spec.seed)
    u = Universe(point_labels(spec.points))
    m = generate_measure(rng, u, spec.carriers, spec.kind)
    self_test(m)
    f = random_function(rng, u, spec.dim)
    g = random_function(rng, u, spec.dim)
    mu = integral_measure(g, m)
    return Document(u, {"m": m}, {"f": f}, {"mu": mu})


def generate_unsafe(spec: GeneratorSpec, tries: int = 20000) -> Document:
    """Rejection-sample random integer tables until one passes the self-test.

    Only meant for fuzzing small spaces; ``carriers`` is ignored.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    u = Universe(point_labels(spec.points))
    for _ in range(tries):
        vals = [0] + [rng.randint(0, 3) for _ in range((1 << u.n_blocks) - 1)]
        m = SetFunction(u, tuple(Fraction(v) for v in vals))
        try:
            self_test(m)
        except AssertionError:
            continue
        f = random_function(rng, u, spec.dim)
        g = random_function(rng, u, spec.dim)
        return Document(u, {"m": m}, {"f": f}, {"mu": integral_measure(g, m)})
    raise MeasureError(f"no admissible table found in {tries} tries")


def carriers_of(m: SetFunction) -> list[int]:
    """Point indices whose singletons carry mass (singleton-block carrier measures)."""
    return [i for i in iter_bits(m.universe.full_mask) if m.values[1 << i] > 0]
