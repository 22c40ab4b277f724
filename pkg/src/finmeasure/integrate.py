"""Gould and Choquet integrals on finite measurable spaces.

Finite-space Gould criterion
----------------------------
On a finite algebra the refinement order on partitions of B has a largest
element, the finest partition (the blocks inside B).  Taking it as the
P_eps of the net condition, the only partition finer than it is itself, so
the net converges iff its tagged sum does not depend on the tags.  Tags are
chosen independently in each block, so the sum is tag independent iff f is
constant on every block c inside B with m(c) > 0.  The integral is then
sum over blocks c of f(c) m(c).  :func:`all_tag_sums` and
:func:`simulate_net` check this rule against the definition directly.

Vectors are tuples of Fractions; norms are sup-norms so they stay rational.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .atoms import HypothesisError, all_atoms, decompose, locate_atom_point
from .setfunc import Property, SetFunction, as_fraction, check_property, fmt_rational, variation
from .space import (
    MSet,
    MeasureError,
    Partition,
    Universe,
    finest_partition,
    iter_bits,
)

Vector = tuple[Fraction, ...]


def zero_vector(dim: int) -> Vector:
    return (Fraction(0),) * dim


def vec_add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: Fraction, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def sup_norm(x: Vector) -> Fraction:
    return max((abs(a) for a in x), default=Fraction(0))


def fmt_vector(x: Vector) -> str:
    return "(" + ",".join(fmt_rational(a) for a in x) + ")"


def as_vector(v, dim: int | None = None) -> Vector:
    if isinstance(v, (int, str, Fraction)):
        v = (v,)
    out = tuple(as_fraction(a) for a in v)
    if dim is not None and len(out) != dim:
        raise MeasureError(f"expected a vector of length {dim}, got {len(out)}")
    return out


@dataclass(frozen=True)
class VecFunction:
    """f: T -> Q^dim, one vector per point in point order."""

    universe: Universe
    dim: int
    values: tuple[Vector, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise MeasureError("dim must be positive")
        vals = tuple(as_vector(v, self.dim) for v in self.values)
        if len(vals) != self.universe.n_points:
            raise MeasureError(f"expected {self.universe.n_points} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_mapping(cls, u: Universe, values: Mapping[str, object], dim: int | None = None) -> "VecFunction":
        missing = [p for p in u.points if p not in values]
        if missing:
            raise MeasureError(f"no value for points {missing}")
        vecs = [as_vector(values[p]) for p in u.points]
        return cls(u, dim if dim is not None else len(vecs[0]), tuple(vecs))

    @classmethod
    def scalar(cls, u: Universe, values: Sequence[object]) -> "VecFunction":
        return cls(u, 1, tuple((as_fraction(v),) for v in values))

    @classmethod
    def constant(cls, u: Universe, value) -> "VecFunction":
        v = as_vector(value)
        return cls(u, len(v), (v,) * u.n_points)

    def __call__(self, label: str) -> Vector:
        return self.values[self.universe.index[label]]

    def at(self, i: int) -> Vector:
        return self.values[i]

    def block_value(self, b: int) -> Vector | None:
        """Common value on block b, or None if f is not constant there."""
        u = self.universe
        pts = u.blocks[b]
        first = self.values[u.index[pts[0]]]
        for p in pts[1:]:
            if self.values[u.index[p]] != first:
                return None
        return first

    def is_measurable(self, on: MSet | None = None) -> bool:
        """Constant on every block (inside ``on``)."""
        mask = self.universe.full_mask if on is None else on.mask
        return all(self.block_value(b) is not None for b in iter_bits(mask))


def _same_universe(f: VecFunction, m: SetFunction) -> None:
    if f.universe != m.universe:
        raise MeasureError("function and set function live on different universes")


# ---------------------------------------------------------------- Gould

def gould_sum(f: VecFunction, m: SetFunction, p: Partition, tags: Sequence[str]) -> Vector:
    """sum_i f(t_i) m(A_i) for a tagged partition."""
    _same_universe(f, m)
    if len(tags) != len(p.parts):
        raise MeasureError(f"{len(p.parts)} parts but {len(tags)} tags")
    u = f.universe
    total = zero_vector(f.dim)
    for part, t in zip(p.parts, tags):
        if t not in u.index or not (part.point_mask >> u.index[t]) & 1:
            raise MeasureError(f"tag {t!r} lies outside its part {part}")
        total = vec_add(total, vec_scale(m(part), f(t)))
    return total


def all_tag_sums(f: VecFunction, m: SetFunction, p: Partition, limit: int = 1 << 16) -> set[Vector]:
    """Every value of the tagged sum at ``p``, by enumerating all tag choices."""
    choices = [part.points() for part in p.parts]
    count = 1
    for c in choices:
        count *= len(c)
    if count > limit:
        raise MeasureError(f"{count} tag assignments exceeds the limit {limit}")
    return {gould_sum(f, m, p, tags) for tags in itertools.product(*choices)}


@dataclass(frozen=True)
class FailureWitness:
    block: MSet
    t: str
    s: str
    mass: Fraction


@dataclass(frozen=True)
class GouldResult:
    integrable: bool
    value: Vector | None
    witness_partition: Partition | None
    failure_witness: FailureWitness | None = None


def gould_integral(f: VecFunction, m: SetFunction, b: MSet) -> GouldResult:
    """Gould integral of f on b (trace algebra, restricted m).

    The empty set has only the empty partition, whose sum is the zero vector.
    """
    _same_universe(f, m)
    u = f.universe
    if not b.mask:
        return GouldResult(True, zero_vector(f.dim), None)
    fine = finest_partition(u, b)
    total = zero_vector(f.dim)
    for blk in iter_bits(b.mask):
        mass = m.values[1 << blk]
        pts = u.blocks[blk]
        v0 = f(pts[0])
        if mass > 0:
            for p in pts[1:]:
                if f(p) != v0:
                    return GouldResult(False, None, fine,
                                       FailureWitness(MSet(u, 1 << blk), pts[0], p, mass))
            total = vec_add(total, vec_scale(mass, v0))
    return GouldResult(True, total, fine)


def integral(f: VecFunction, m: SetFunction, b: MSet) -> Vector:
    """Gould integral value; raises if f is not integrable on b."""
    r = gould_integral(f, m, b)
    if not r.integrable:
        w = r.failure_witness
        raise NotIntegrableError(f"f is not integrable on {b}: f({w.t}) != f({w.s}) "
                                 f"on block {w.block} of mass {fmt_rational(w.mass)}", b)
    return r.value


class NotIntegrableError(MeasureError):
    def __init__(self, msg: str, where: MSet):
        super().__init__(msg)
        self.where = where


@dataclass
class AdditivityReport:
    left: Vector
    right_b: Vector
    right_c: Vector
    integrable_union: bool

    @property
    def ok(self) -> bool:
        return self.integrable_union and self.left == vec_add(self.right_b, self.right_c)


def integral_additivity_check(f: VecFunction, m: SetFunction, b: MSet, c: MSet) -> AdditivityReport:
    if not b.mask or not c.mask:
        raise MeasureError("both sets must be nonempty")
    if not b.isdisjoint(c):
        raise MeasureError(f"{b} and {c} are not disjoint")
    rb, rc = gould_integral(f, m, b), gould_integral(f, m, c)
    if not (rb.integrable and rc.integrable):
        raise MeasureError("f must be integrable on both sets")
    ru = gould_integral(f, m, b | c)
    return AdditivityReport(ru.value if ru.integrable else zero_vector(f.dim),
                            rb.value, rc.value, ru.integrable)


# ---------------------------------------------------------------- net simulation

@dataclass(frozen=True)
class NetStep:
    chain: int
    step: int
    partition: Partition
    tags: tuple[str, ...]
    sigma: Vector
    distance: Fraction | None

    def line(self) -> str:
        d = "-" if self.distance is None else fmt_rational(self.distance)
        return (f"chain={self.chain} step={self.step} partition={self.partition} "
                f"tags={','.join(self.tags)} sigma={fmt_vector(self.sigma)} distance={d}")


@dataclass
class NetReport:
    integrable: bool
    integral: Vector | None
    steps: list[NetStep]
    chains: int
    depth: int
    seed: int
    split_sums: tuple[tuple[tuple[str, ...], Vector], tuple[tuple[str, ...], Vector]] | None = None

    def final_steps(self) -> list[NetStep]:
        return [s for s in self.steps if s.step == self.depth]

    @property
    def converged(self) -> bool:
        return self.integrable and all(s.distance == 0 for s in self.final_steps())

    def text(self) -> str:
        lines = [f"seed: {self.seed}", f"chains: {self.chains}", f"depth: {self.depth}",
                 f"integrable: {str(self.integrable).lower()}"]
        if self.integral is not None:
            lines.append(f"integral: {fmt_vector(self.integral)}")
        if self.split_sums is not None:
            for k, (tags, v) in enumerate(self.split_sums, 1):
                lines.append(f"finest_sum_{k}: tags={','.join(tags)} sigma={fmt_vector(v)}")
        lines.extend(s.line() for s in self.steps)
        return "\n".join(lines) + "\n"


def chain_rng(seed: int, chain: int) -> random.Random:
    """Independent stream for one chain; depends only on (seed, chain)."""
    h = hashlib.blake2b(f"finmeasure-net:{seed}:{chain}".encode(), digest_size=8)
    return random.Random(int.from_bytes(h.digest(), "big"))


def _random_partition(rng: random.Random, blocks: list[int]) -> list[int]:
    r = rng.randint(1, len(blocks))
    groups = [0] * r
    for b in blocks:
        groups[rng.randrange(r)] |= 1 << b
    return [g for g in groups if g]


def _split_random_part(rng: random.Random, parts: list[int]) -> list[int]:
    splittable = [i for i, p in enumerate(parts) if p.bit_count() > 1]
    if not splittable:
        return parts
    i = rng.choice(splittable)
    bits = list(iter_bits(parts[i]))
    rng.shuffle(bits)
    cut = rng.randint(1, len(bits) - 1)
    left = sum(1 << b for b in bits[:cut])
    return parts[:i] + [left, parts[i] ^ left] + parts[i + 1:]


def simulate_net(f: VecFunction, m: SetFunction, b: MSet, chains: int = 4,
                 depth: int = 4, seed: int = 0) -> NetReport:
    """Walk seeded random refinement chains ending at the finest partition of b.

    Every step draws fresh random tags and records the tagged sum and, when
    f is integrable, its exact sup-norm distance to the integral.
    """
    if not b.mask:
        raise MeasureError("cannot simulate on the empty set")
    if chains < 1 or depth < 1:
        raise MeasureError("chains and depth must be positive")
    res = gould_integral(f, m, b)
    u = f.universe
    blocks = b.block_indices()
    steps: list[NetStep] = []
    for c in range(chains):
        rng = chain_rng(seed, c)
        parts = _random_partition(rng, blocks)
        for k in range(1, depth + 1):
            if k == depth:
                parts = [1 << x for x in blocks]
            elif k > 1:
                parts = _split_random_part(rng, parts)
            p = Partition.from_masks(b, parts)
            tags = tuple(rng.choice(part.points()) for part in p.parts)
            sigma = gould_sum(f, m, p, tags)
            dist = sup_norm(vec_sub(sigma, res.value)) if res.integrable else None
            steps.append(NetStep(c, k, p, tags, sigma, dist))
    split = None
    if not res.integrable:
        w = res.failure_witness
        fine = res.witness_partition
        base = [part.points()[0] for part in fine.parts]
        alt = [w.s if part.mask == w.block.mask else t for part, t in zip(fine.parts, base)]
        base = [w.t if part.mask == w.block.mask else t for part, t in zip(fine.parts, base)]
        split = ((tuple(base), gould_sum(f, m, fine, base)),
                 (tuple(alt), gould_sum(f, m, fine, alt)))
    return NetReport(res.integrable, res.value, steps, chains, depth, seed, split)


# ---------------------------------------------------------------- oscillation, total measurability

def _points_of(f: VecFunction, a) -> list[int]:
    u = f.universe
    if isinstance(a, MSet):
        pmask = a.point_mask
    else:
        pmask = u.point_mask(a)
    return list(iter_bits(pmask))


def osc(f: VecFunction, a) -> Fraction:
    """Sup-norm diameter of f over the points of ``a`` (an MSet or labels)."""
    idx = _points_of(f, a)
    if not idx:
        raise MeasureError("oscillation of the empty set is undefined")
    vals = [f.values[i] for i in idx]
    return max(max(v[k] for v in vals) - min(v[k] for v in vals) for k in range(f.dim))


@dataclass
class TMReport:
    epsilon: Fraction | None
    measurable_totally: bool
    witness_family: tuple[MSet, ...] | None
    bad_set_variation: Fraction

    def describe(self) -> str:
        eps = "all" if self.epsilon is None else fmt_rational(self.epsilon)
        lines = [f"epsilon: {eps}", f"totally_measurable: {str(self.measurable_totally).lower()}",
                 f"bad_set_variation: {fmt_rational(self.bad_set_variation)}"]
        if self.witness_family is not None:
            lines.append("family: " + " ".join(str(s) for s in self.witness_family))
        return "\n".join(lines)


def is_totally_measurable(f: VecFunction, m: SetFunction, b: MSet,
                          epsilon=None, limit: int | None = None) -> TMReport:
    """Decide condition (*) on b for one epsilon, or for every epsilon > 0.

    A part holding a block of oscillation >= eps has oscillation >= eps, so
    such blocks must all go into A_0; the remaining blocks, as singleton
    parts, always qualify.  Since the variation is monotone the smallest
    admissible A_0 decides.  For "every eps" the bad set grows to the union
    of blocks with positive oscillation as eps -> 0, and that set must have
    variation 0.
    """
    _same_universe(f, m)
    u = f.universe
    if epsilon is not None:
        epsilon = as_fraction(epsilon)
        if epsilon <= 0:
            raise MeasureError("epsilon must be positive")
    bad = 0
    for blk in iter_bits(b.mask):
        o = osc(f, MSet(u, 1 << blk))
        if (o >= epsilon) if epsilon is not None else (o > 0):
            bad |= 1 << blk
    var = variation(m, MSet(u, bad), limit)
    ok = var < epsilon if epsilon is not None else var == 0
    family = None
    if ok:
        family = (MSet(u, bad),) + tuple(MSet(u, 1 << x) for x in iter_bits(b.mask & ~bad))
    return TMReport(epsilon, ok, family, var)


# ---------------------------------------------------------------- Choquet

def _scalar_levels(f: VecFunction, a: MSet):
    if f.dim != 1:
        raise MeasureError("Choquet integral needs a scalar function")
    u = f.universe
    block_vals = {}
    for blk in iter_bits(a.mask):
        v = f.block_value(blk)
        if v is None:
            raise MeasureError(f"f is not measurable: two values on block {MSet(u, 1 << blk)}")
        if v[0] < 0:
            raise MeasureError("Choquet integral needs nonnegative values")
        block_vals[blk] = v[0]
    levels = sorted(set(block_vals.values()) | {Fraction(0)})
    return block_vals, levels


def _upper_set(block_vals, v) -> int:
    return sum(1 << b for b, x in block_vals.items() if x >= v)


def choquet_integral(f: VecFunction, m: SetFunction, a: MSet) -> Fraction:
    """Layer-cake sum over the distinct values 0 = v_0 < v_1 < ... of f on a:
    sum_k (v_k - v_{k-1}) m({f >= v_k} and a)."""
    block_vals, levels = _scalar_levels(f, a)
    total = Fraction(0)
    for lo, hi in zip(levels, levels[1:]):
        total += (hi - lo) * m.values[_upper_set(block_vals, hi)]
    return total


def t_zero(f: VecFunction, m: SetFunction, a: MSet) -> Fraction:
    """Largest level v with m({f > t} and a) = m(a) for every t < v.

    On [v_{k-1}, v_k) the set {f > t} is {f >= v_k}, so only the levels
    themselves need checking.
    """
    block_vals, levels = _scalar_levels(f, a)
    full = m.values[a.mask]
    t0 = levels[0]
    for hi in levels[1:]:
        if m.values[_upper_set(block_vals, hi)] != full:
            break
        t0 = hi
    return t0


# ---------------------------------------------------------------- atom theorems

def image(f: VecFunction, s: MSet) -> set[Vector]:
    return {f.values[i] for i in iter_bits(s.point_mask)}


def atom_image_intersection(f: VecFunction, m: SetFunction, a: MSet) -> set[Vector]:
    """Intersection of f(U) over all atoms U inside a."""
    flags = m.atom_mask_flags
    out: set[Vector] | None = None
    for s in range(1, a.mask + 1):
        if s & ~a.mask == 0 and flags[s]:
            img = image(f, MSet(a.universe, s))
            out = img if out is None else out & img
    return out if out is not None else set()


@dataclass
class AtomIntegralReport:
    atom: MSet
    carrier: MSet
    integrable: bool
    totally_measurable: bool
    value: Vector | None
    expected: Vector | None
    intersection: set[Vector]
    mass: Fraction
    choquet: Fraction | None = None
    t0: Fraction | None = None

    @property
    def ok(self) -> bool:
        if self.integrable != self.totally_measurable:
            return False
        if not self.integrable:
            return len(self.intersection) != 1
        mass_ok = self.value == self.expected
        x_ok = len(self.intersection) == 1 and self.expected is not None
        if x_ok:
            (x,) = self.intersection
            x_ok = vec_scale(self.mass, x) == self.value
        ch_ok = self.choquet is None or (self.choquet == self.value[0] == self.t0 * self.mass)
        return mass_ok and x_ok and ch_ok

    def describe(self) -> str:
        lines = [f"atom: {self.atom}", f"carrier: {self.carrier}",
                 f"integrable: {str(self.integrable).lower()}",
                 f"totally_measurable: {str(self.totally_measurable).lower()}"]
        if self.value is not None:
            lines.append(f"integral: {fmt_vector(self.value)}")
            lines.append(f"carrier_value_times_mass: {fmt_vector(self.expected)}")
        lines.append("atom_image_intersection: "
                     + " ".join(fmt_vector(v) for v in sorted(self.intersection)))
        if self.choquet is not None:
            lines.append(f"choquet: {fmt_rational(self.choquet)}")
            lines.append(f"t_zero: {fmt_rational(self.t0)}")
        lines.append(f"ok: {str(self.ok).lower()}")
        return "\n".join(lines)


def atom_integral_check(f: VecFunction, m: SetFunction, a: MSet) -> AtomIntegralReport:
    """On an atom of a null-additive monotone m: integral = f(carrier) m(a),
    the atom-image intersection is {integral / m(a)}, and integrability is
    equivalent to total measurability.  Scalar nonnegative measurable f also
    gets the Choquet integral and t0 compared."""
    _same_universe(f, m)
    mode = "point" if m.universe.singleton_blocks else "block"
    ap = locate_atom_point(m, a, mode=mode)
    mass = m(a)
    g = gould_integral(f, m, a)
    tm = is_totally_measurable(f, m, a)
    cv = f.block_value(ap.block.block_indices()[0])
    expected = vec_scale(mass, cv) if cv is not None else None
    rep = AtomIntegralReport(a, ap.block, g.integrable, tm.measurable_totally, g.value,
                             expected, atom_image_intersection(f, m, a), mass)
    if f.dim == 1 and f.is_measurable(a) and all(f.values[i][0] >= 0 for i in iter_bits(a.point_mask)):
        rep.choquet = choquet_integral(f, m, a)
        rep.t0 = t_zero(f, m, a)
    return rep


def whole_space_atomic_integral(f: VecFunction, m: SetFunction):
    """(integral over T, sum over a decomposition of f(a_i) m(A_i))."""
    dec = decompose(m)
    if dec is None:
        raise HypothesisError("m is not finitely purely atomic")
    total = zero_vector(f.dim)
    for a in dec:
        ap = locate_atom_point(m, a)
        total = vec_add(total, vec_scale(m(a), f(ap.point)))
    return integral(f, m, m.universe.full), total


@dataclass
class BoundedMeasurableReport:
    clause: str
    integrable: bool
    totally_measurable: bool
    per_atom: list[tuple[MSet, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        if self.clause == "finitely_additive":
            return not self.totally_measurable or self.integrable
        return self.integrable and self.totally_measurable and all(ok for _, ok in self.per_atom)


def bounded_measurable_integrability_check(f: VecFunction, m: SetFunction) -> BoundedMeasurableReport:
    """Measurable f is integrable and totally measurable when m is purely atomic,
    null-additive and monotone; for finitely additive m, total measurability
    implies integrability."""
    _same_universe(f, m)
    T = m.universe.full
    atomic = (check_property(m, Property.NULL_ADDITIVE).holds
              and check_property(m, Property.MONOTONE).holds
              and decompose(m) is not None)
    if atomic:
        if not f.is_measurable():
            raise HypothesisError("f is not measurable (not constant on some block)")
        per = [(a, gould_integral(f, m, a).integrable) for a in all_atoms(m)]
        return BoundedMeasurableReport("purely_atomic", gould_integral(f, m, T).integrable,
                                       is_totally_measurable(f, m, T).measurable_totally, per)
    if check_property(m, Property.FINITELY_ADDITIVE).holds:
        return BoundedMeasurableReport("finitely_additive", gould_integral(f, m, T).integrable,
                                       is_totally_measurable(f, m, T).measurable_totally)
    raise HypothesisError("m is neither purely atomic null-additive monotone nor finitely additive")

