"""Finite-prefix harnesses for the sequence theorems on atoms.

An infinite sequence is modelled by its first N terms plus a declared
limit.  Each theorem's tail statement is replaced by exact per-index
identities or bounds that hold for every n and can be asserted directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atoms import (
    HypothesisError,
    StructureError,
    all_atoms,
    decompose,
    locate_atom_point,
    require,
    require_atom,
)
from .integrate import (
    Vector,
    VecFunction,
    as_vector,
    gould_integral,
    integral,
    osc,
    sup_norm,
    vec_scale,
    vec_sub,
)
from .setfunc import Property, SetFunction, as_fraction
from .space import MSet, MeasureError, iter_bits

# sigma-null-additivity is replaced by null-additivity: on a finite algebra
# the intersection of the U_n is a finite intersection.
_HYPOTHESES = (Property.NULL_ADDITIVE, Property.MONOTONE)


@dataclass(frozen=True)
class FnSequence:
    terms: tuple[VecFunction, ...]
    declared_limit: VecFunction | None = None

    def __post_init__(self):
        if not self.terms:
            raise MeasureError("a sequence needs at least one term")
        u, d = self.terms[0].universe, self.terms[0].dim
        for f in self.terms[1:] + ((self.declared_limit,) if self.declared_limit else ()):
            if f.universe != u or f.dim != d:
                raise MeasureError("all terms must share universe and dimension")

    def __len__(self) -> int:
        return len(self.terms)


@dataclass
class LebesgueRow:
    n: int
    integral_gap: Vector
    point_gap_times_mass: Vector

    @property
    def ok(self) -> bool:
        return self.integral_gap == self.point_gap_times_mass


@dataclass
class LebesgueReport:
    atom: MSet
    point: str
    rows: list[LebesgueRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)


def lebesgue_identity_check(fs: FnSequence, m: SetFunction, a: MSet) -> LebesgueReport:
    """Per n: int_a f_n - int_a f == (f_n(p) - f(p)) m(a), p the atom point.

    Since m(a) > 0 the two sides are proportional, so the integrals
    converge iff the values at p do.
    """
    if fs.declared_limit is None:
        raise HypothesisError("the sequence needs a declared limit")
    ap = locate_atom_point(m, a)
    mass = m(a)
    f = fs.declared_limit
    base = integral(f, m, a)
    rows = []
    for n, fn in enumerate(fs.terms, 1):
        rows.append(LebesgueRow(n, vec_sub(integral(fn, m, a), base),
                                vec_scale(mass, vec_sub(fn(ap.point), f(ap.point)))))
    return LebesgueReport(a, ap.point, rows)


def _atoms_within(m: SetFunction, outer: int) -> list[int]:
    flags = m.atom_mask_flags
    return [s for s in range(1, outer + 1) if s & ~outer == 0 and flags[s]]


def _pick_atom(f: VecFunction, m: SetFunction, within: int, diam: Fraction, x: Vector) -> int | None:
    """Largest atom inside ``within`` whose image has diameter <= diam and contains x."""
    u = f.universe
    best = None
    for s in _atoms_within(m, within):
        pts = MSet(u, s).point_mask
        if osc(f, MSet(u, s)) > diam:
            continue
        if not any(f.values[i] == x for i in iter_bits(pts)):
            continue
        if best is None or s.bit_count() > best.bit_count():
            best = s
    return best


@dataclass
class UniformBound:
    u: MSet
    complement_mass: Fraction
    sup_norm: Fraction
    bound: Fraction
    general_bound: Fraction

    @property
    def within_k_plus_one(self) -> bool:
        return self.sup_norm <= self.bound

    @property
    def ok(self) -> bool:
        return self.complement_mass == 0 and self.sup_norm <= self.general_bound


def uniform_bounded_atom(fs: FnSequence, m: SetFunction, bound) -> UniformBound:
    """A co-null set U on which every term stays bounded.

    For each atom A of a decomposition and each n, U_n(A) is the largest
    atom inside A with diam f_n(U_n) <= 1 containing x_n = int_A f_n / m(A);
    U is the union over A of the intersection over n.  On U,
    |f_n| <= |x_n| + 1 <= K / m(A) + 1, which is K + 1 when m(A) >= 1.
    """
    K = as_fraction(bound)
    if K <= 0:
        raise HypothesisError("K must be positive")
    require(m, *_HYPOTHESES)
    dec = decompose(m)
    if dec is None:
        raise HypothesisError("m is not finitely purely atomic")
    u = m.universe
    for n, fn in enumerate(fs.terms, 1):
        g = gould_integral(fn, m, u.full)
        if not g.integrable:
            raise HypothesisError(f"term {n} is not integrable on T")
        for a in all_atoms(m):
            val = integral(fn, m, a)
            if sup_norm(val) > K:
                raise HypothesisError(f"|int over {a} of term {n}| = {sup_norm(val)} exceeds K = {K}")
    keep = 0
    general = K + 1
    for a in dec:
        mass = m(a)
        general = max(general, K / mass + 1)
        cur = a.mask
        for n, fn in enumerate(fs.terms, 1):
            xn = vec_scale(1 / mass, integral(fn, m, a))
            un = _pick_atom(fn, m, a.mask, Fraction(1), xn)
            if un is None:
                raise StructureError(f"no atom in {a} with diameter <= 1 for term {n}")
            cur &= un
        if m.values[cur] != mass:
            raise StructureError(f"intersection inside {a} lost mass")
        keep |= cur
    U = MSet(u, keep)
    sup = max(sup_norm(fn.values[i]) for fn in fs.terms for i in iter_bits(U.point_mask))
    out = UniformBound(U, m.values[u.full_mask ^ keep], sup, K + 1, general)
    if not out.ok:
        raise StructureError(f"bound violated: sup {sup} on {U}")
    return out


@dataclass
class UniformConvergence:
    u: MSet
    distances: list[Fraction]
    allowed: list[Fraction]

    @property
    def ok(self) -> bool:
        return all(d <= b for d, b in zip(self.distances, self.allowed))


def uniform_convergence_atom(fs: FnSequence, m: SetFunction, a: MSet, x_target) -> UniformConvergence:
    """Nested atoms U_n inside a with diam f_n(U_n) <= 1/n containing x_n;
    on U = U_N, sup |f_n - x| <= |x_n - x| + 1/n for every n."""
    x = as_vector(x_target, fs.terms[0].dim)
    require(m, *_HYPOTHESES)
    if decompose(m) is None:
        raise HypothesisError("m is not finitely purely atomic")
    require_atom(m, a)
    mass = m(a)
    xs = []
    cur = a.mask
    for n, fn in enumerate(fs.terms, 1):
        xn = vec_scale(1 / mass, integral(fn, m, a))
        xs.append(xn)
        un = _pick_atom(fn, m, cur, Fraction(1, n), xn)
        if un is None:
            raise StructureError(f"no atom inside {MSet(m.universe, cur)} with diameter <= 1/{n}")
        cur = un
    U = MSet(m.universe, cur)
    require_atom(m, U)
    dists, allowed = [], []
    for n, (fn, xn) in enumerate(zip(fs.terms, xs), 1):
        dists.append(max(sup_norm(vec_sub(fn.values[i], x)) for i in iter_bits(U.point_mask)))
        allowed.append(sup_norm(vec_sub(xn, x)) + Fraction(1, n))
    out = UniformConvergence(U, dists, allowed)
    if not out.ok:
        raise StructureError("uniform convergence bound violated")
    return out


def sequence_from(terms: Sequence[VecFunction], limit: VecFunction | None = None) -> FnSequence:
    return FnSequence(tuple(terms), limit)
