"""Vector measures, integral measures and Radon-Nikodym derivatives
with respect to a finitely purely atomic monotone set function."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .atoms import (
    AtomDecomposition,
    HypothesisError,
    StructureError,
    decompose,
    is_atom,
    require,
)
from .integrate import (
    NotIntegrableError,
    Vector,
    VecFunction,
    as_vector,
    gould_integral,
    integral,
    vec_add,
    vec_scale,
    zero_vector,
)
from .setfunc import Property, SetFunction
from .space import MSet, MeasureError, Universe, iter_bits, submasks


@dataclass(frozen=True)
class VecMeasure:
    """mu: A -> Q^dim on block masks; mu(empty) = 0, additivity not assumed."""

    universe: Universe
    dim: int
    values: tuple[Vector, ...]

    def __post_init__(self):
        vals = tuple(as_vector(v, self.dim) for v in self.values)
        if len(vals) != 1 << self.universe.n_blocks:
            raise MeasureError(f"expected {1 << self.universe.n_blocks} values")
        if any(vals[0]):
            raise MeasureError("mu(empty set) must be the zero vector")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, u: Universe, dim: int) -> "VecMeasure":
        return cls(u, dim, (zero_vector(dim),) * (1 << u.n_blocks))

    @classmethod
    def from_function(cls, u: Universe, dim: int, fn) -> "VecMeasure":
        return cls(u, dim, tuple(zero_vector(dim) if s == 0 else as_vector(fn(MSet(u, s)), dim)
                                 for s in range(1 << u.n_blocks)))

    def __call__(self, s: MSet) -> Vector:
        return self.values[s.mask]

    def null_table(self) -> bytearray:
        """null[S] = 1 iff mu vanishes on every measurable subset of S."""
        size = 1 << self.universe.n_blocks
        out = bytearray(size)
        for s in range(size):
            if any(self.values[s]):
                continue
            out[s] = all(out[s ^ (1 << b)] for b in iter_bits(s))
        return out


def is_null(mu: VecMeasure, s: MSet) -> bool:
    return all(not any(mu.values[b]) for b in submasks(s.mask))


def vec_atom_check(mu: VecMeasure, a: MSet) -> bool:
    """a is non-null and each measurable B inside a has B or a \\ B null."""
    null = mu.null_table()
    if null[a.mask]:
        return False
    return all(null[b] or null[a.mask ^ b] for b in submasks(a.mask))


def additivity_violation(mu: VecMeasure) -> tuple[MSet, MSet] | None:
    u = mu.universe
    full = u.full_mask
    for a in range(1 << u.n_blocks):
        comp = full ^ a
        for b in submasks(comp):
            if b and mu.values[a | b] != vec_add(mu.values[a], mu.values[b]):
                return MSet(u, a), MSet(u, b)
    return None


def continuity_violation(mu: VecMeasure, m: SetFunction) -> MSet | None:
    """First E with m(E) = 0 but mu(E) != 0."""
    for s, v in enumerate(m.values):
        if v == 0 and any(mu.values[s]):
            return MSet(m.universe, s)
    return None


def atomicity_violation(mu: VecMeasure, dec: AtomDecomposition) -> MSet | None:
    """First m-atom of ``dec`` that is neither a mu-atom nor mu-null."""
    null = mu.null_table()
    for a in dec:
        if null[a.mask]:
            continue
        if not all(null[b] or null[a.mask ^ b] for b in submasks(a.mask)):
            return a
    return None


def integral_measure(f: VecFunction, m: SetFunction) -> VecMeasure:
    """B -> Gould integral of f over B, for every measurable B."""
    u = m.universe
    vals = []
    for s in range(1 << u.n_blocks):
        r = gould_integral(f, m, MSet(u, s))
        if not r.integrable:
            raise NotIntegrableError(f"f is not integrable on {MSet(u, s)}", MSet(u, s))
        vals.append(r.value)
    return VecMeasure(u, f.dim, tuple(vals))


def _require_base(m: SetFunction) -> AtomDecomposition:
    require(m, Property.NULL_ADDITIVE, Property.MONOTONE)
    dec = decompose(m)
    if dec is None:
        raise HypothesisError("m is not finitely purely atomic")
    return dec


@dataclass
class MeasureProperties:
    additivity_witness: tuple[MSet, MSet] | None
    continuity_witness: MSet | None
    atomicity_witness: MSet | None

    @property
    def finitely_additive(self) -> bool:
        return self.additivity_witness is None

    @property
    def absolutely_continuous(self) -> bool:
        return self.continuity_witness is None

    @property
    def purely_atomic(self) -> bool:
        return self.atomicity_witness is None

    @property
    def ok(self) -> bool:
        return self.finitely_additive and self.absolutely_continuous and self.purely_atomic


def measure_properties(mu: VecMeasure, m: SetFunction, dec: AtomDecomposition) -> MeasureProperties:
    return MeasureProperties(additivity_violation(mu), continuity_violation(mu, m),
                             atomicity_violation(mu, dec))


def integral_measure_properties(f: VecFunction, m: SetFunction) -> MeasureProperties:
    dec = _require_base(m)
    return measure_properties(integral_measure(f, m), m, dec)


@dataclass
class FormulaReport:
    atoms: AtomDecomposition
    atom_integrals: list[Vector]
    mismatches: list[MSet] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def formula_value(m: SetFunction, dec: AtomDecomposition, coeffs: list[Vector], b: MSet, dim: int) -> Vector:
    """sum_i coeffs[i] / m(A_i) * m(B & A_i)."""
    total = zero_vector(dim)
    for a, c in zip(dec, coeffs):
        total = vec_add(total, vec_scale(m(b & a) / m(a), c))
    return total


def prop_formula_check(f: VecFunction, m: SetFunction) -> FormulaReport:
    """mu(B) = sum_i (a_i / m(A_i)) m(B & A_i), a_i the integral of f over A_i."""
    dec = _require_base(m)
    mu = integral_measure(f, m)
    coeffs = [integral(f, m, a) for a in dec]
    rep = FormulaReport(dec, coeffs)
    for b in m.universe.msets():
        if mu(b) != formula_value(m, dec, coeffs, b, f.dim):
            rep.mismatches.append(b)
    return rep


@dataclass
class RNResult:
    derivative: VecFunction
    atom_basis: AtomDecomposition
    verified: bool


class RNHypothesisError(HypothesisError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


def rn_derivative(m: SetFunction, mu: VecMeasure, decomposition: AtomDecomposition | None = None) -> RNResult:
    """f = sum_i mu(A_i) / m(A_i) 1_{A_i} over an atom decomposition of m,
    verified against mu on every measurable set."""
    if mu.universe != m.universe:
        raise MeasureError("m and mu live on different universes")
    dec = _require_base(m)
    if decomposition is not None:
        decomposition.as_partition()  # disjoint cover of T, or raises
        if not all(is_atom(m, a) for a in decomposition):
            raise MeasureError("the supplied decomposition contains a non-atom")
        dec = decomposition
    props = measure_properties(mu, m, dec)
    if not props.finitely_additive:
        a, b = props.additivity_witness
        raise RNHypothesisError(f"mu is not finitely additive: mu({a} u {b}) != mu({a}) + mu({b})",
                                props.additivity_witness)
    if not props.absolutely_continuous:
        e = props.continuity_witness
        raise RNHypothesisError(f"mu is not absolutely continuous: m({e}) = 0, mu({e}) != 0", e)
    if not props.purely_atomic:
        raise RNHypothesisError(f"atom {props.atomicity_witness} of m is neither a mu-atom nor mu-null",
                                props.atomicity_witness)
    u = m.universe
    vals: list[Vector] = [zero_vector(mu.dim)] * u.n_points
    for a in dec:
        mass = m(a)
        if mass <= 0:
            raise StructureError(f"atom {a} has no mass")
        c = vec_scale(Fraction(1) / mass, mu(a))
        for i in iter_bits(a.point_mask):
            vals[i] = c
    f = VecFunction(u, mu.dim, tuple(vals))
    for b in u.msets():
        if integral(f, m, b) != mu(b):
            raise StructureError(f"derivative fails to reproduce mu on {b}")
    return RNResult(f, dec, True)
