"""Line bundle cohomology on complete simplicial toric varieties.

For a torus weight ``u`` the graded piece ``H^i(X, O(D))_u`` has dimension
``b~_{i-1}`` of the nerve of the maximal cones meeting the negative locus
``{x : <u, x> < psi_D(x)}``.  A ray ``rho`` is negative at ``u`` when
``<u, v_rho> + a_rho < 0``; the sign pattern of ``u`` in the arrangement of
hyperplanes ``<u, v_rho> = -a_rho`` therefore determines the contribution, so
the sum over weights becomes a sum over sign cells.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .arrangement import SignCell, chamber_decompose, sign_vector
from .errors import ModelError, PreconditionError, SoundnessError
from .homology import SimplicialComplex, reduced_betti_numbers
from .linalg import Vector, det, dot, format_rational, solve, to_fraction, vec
from .polyhedra import GE, GT, Constraint, feasible, lattice_points, volume


@dataclass(frozen=True)
class Fan:
    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    maximal_cones: tuple[tuple[int, ...], ...]
    _betti_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "maximal_cones", tuple(tuple(sorted(c)) for c in self.maximal_cones))
        self._validate()

    def _validate(self) -> None:
        d = self.lattice_rank
        if d < 1:
            raise ModelError("lattice rank must be >= 1")
        for r in self.rays:
            if len(r) != d:
                raise ModelError(f"ray {r} does not have length {d}")
            if math.gcd(*r) != 1:
                raise ModelError(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise ModelError("duplicate rays")
        if not self.maximal_cones:
            raise ModelError("fan has no maximal cones")
        for c in self.maximal_cones:
            if len(c) != d or len(set(c)) != d:
                raise ModelError(f"maximal cone {c} is not simplicial of dimension {d}")
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise ModelError(f"maximal cone {c} references an unknown ray")
            if det([self.rays[i] for i in c]) == 0:
                raise ModelError(f"non-simplicial or degenerate cone {c}")
        used = set(itertools.chain.from_iterable(self.maximal_cones))
        if used != set(range(len(self.rays))):
            raise ModelError("every ray must lie in some maximal cone")
        # pseudomanifold condition: codimension-one faces are shared by exactly two cones
        walls: dict[tuple[int, ...], int] = {}
        for c in self.maximal_cones:
            for w in itertools.combinations(c, d - 1):
                walls[w] = walls.get(w, 0) + 1
        bad = [w for w, n in walls.items() if n != 2]
        if bad:
            raise ModelError(f"fan is not complete: wall {bad[0]} lies in {walls[bad[0]]} maximal cone(s)")
        for c1, c2 in itertools.combinations(self.maximal_cones, 2):
            if not self._separated(c1, c2):
                raise ModelError(f"cones {c1} and {c2} do not meet along a common face")

    def _separated(self, c1: Sequence[int], c2: Sequence[int]) -> bool:
        # Simplicial cones meet in the face spanned by their common rays iff a
        # linear form vanishes on the common rays, is positive on the rest of
        # c1 and negative on the rest of c2.
        common = set(c1) & set(c2)
        cons = []
        for i in set(c1) | set(c2):
            v = vec(self.rays[i])
            if i in common:
                cons.append(Constraint(v, Fraction(0), "="))
            elif i in c1:
                cons.append(Constraint(v, Fraction(0), GT))
            else:
                cons.append(Constraint(tuple(-x for x in v), Fraction(0), GT))
        return feasible(cons, self.lattice_rank)

    @property
    def dim(self) -> int:
        return self.lattice_rank

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @cached_property
    def cones_containing_ray(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(k for k, c in enumerate(self.maximal_cones) if r in c) for r in range(self.n_rays)
        )

    def nerve(self, negative_rays: frozenset[int]) -> SimplicialComplex:
        """Nerve of the cover of the negative locus by maximal cones.

        A set of maximal cones is a face iff their common face has a negative
        ray, i.e. iff it lies inside the star of some negative ray.
        """
        return SimplicialComplex.generated_by(
            len(self.maximal_cones), [self.cones_containing_ray[r] for r in sorted(negative_rays)]
        )

    def ray_complex(self, negative_rays: frozenset[int]) -> SimplicialComplex:
        """Full subcomplex of the fan on the negative rays (homotopy-equivalent model)."""
        order = sorted(negative_rays)
        idx = {r: k for k, r in enumerate(order)}
        return SimplicialComplex.generated_by(
            len(order), [[idx[r] for r in c if r in negative_rays] for c in self.maximal_cones]
        )

    def nerve_betti(self, negative_rays: frozenset[int]) -> tuple[int, ...]:
        """Reduced Betti numbers ``b~_{-1} .. b~_{d-1}`` of the nerve, padded to ``d + 1``."""
        key = frozenset(negative_rays)
        hit = self._betti_cache.get(key)
        if hit is None:
            b = reduced_betti_numbers(self.nerve(key))
            b = (b + [0] * (self.dim + 1))[: self.dim + 1]
            hit = self._betti_cache[key] = tuple(b)
        return hit

    def to_json(self) -> dict:
        return {
            "latticeRank": self.lattice_rank,
            "rays": [list(r) for r in self.rays],
            "maximalCones": [list(c) for c in self.maximal_cones],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Fan":
        try:
            return cls(int(doc["latticeRank"]), tuple(map(tuple, doc["rays"])), tuple(map(tuple, doc["maximalCones"])))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ModelError):
                raise
            raise ModelError(f"fan JSON does not match schema: {exc}") from exc


@dataclass(frozen=True)
class ToricDivisor:
    coefficients: Vector

    def __post_init__(self):
        object.__setattr__(self, "coefficients", vec(self.coefficients))

    @classmethod
    def of(cls, *coeffs) -> "ToricDivisor":
        return cls(vec(coeffs))

    def __add__(self, other: "ToricDivisor") -> "ToricDivisor":
        return ToricDivisor(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "ToricDivisor") -> "ToricDivisor":
        return self + (-other)

    def __neg__(self) -> "ToricDivisor":
        return ToricDivisor(tuple(-a for a in self.coefficients))

    def __mul__(self, k) -> "ToricDivisor":
        k = to_fraction(k)
        return ToricDivisor(tuple(k * a for a in self.coefficients))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coefficients)

    def to_json(self) -> dict:
        return {"coefficients": [format_rational(a) for a in self.coefficients]}

    @classmethod
    def from_json(cls, doc: dict) -> "ToricDivisor":
        try:
            return cls(vec(doc["coefficients"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"divisor JSON does not match schema: {exc}") from exc


@dataclass(frozen=True)
class CohomologySummary:
    divisor: ToricDivisor
    dims: tuple[int, ...]


def _check(fan: Fan, D: ToricDivisor) -> None:
    if len(D.coefficients) != fan.n_rays:
        raise PreconditionError(f"divisor has {len(D.coefficients)} coefficients, fan has {fan.n_rays} rays")


def canonical_divisor(fan: Fan) -> ToricDivisor:
    return ToricDivisor(tuple(Fraction(-1) for _ in fan.rays))


def support_function(fan: Fan, D: ToricDivisor) -> dict[int, Vector]:
    """Per maximal cone, the covector ``u_sigma`` with ``<u_sigma, v_rho> = -a_rho`` on its rays."""
    _check(fan, D)
    out = {}
    for k, cone in enumerate(fan.maximal_cones):
        u = solve([fan.rays[r] for r in cone], [-D.coefficients[r] for r in cone])
        if u is None:
            raise ModelError(f"non-simplicial or degenerate cone {cone}")
        out[k] = u
    return out


def _convexity_slacks(fan: Fan, D: ToricDivisor):
    for k, u in support_function(fan, D).items():
        cone = fan.maximal_cones[k]
        for r in range(fan.n_rays):
            if r not in cone:
                yield dot(u, fan.rays[r]) + D.coefficients[r]


def is_nef(fan: Fan, D: ToricDivisor) -> bool:
    return all(s >= 0 for s in _convexity_slacks(fan, D))


def is_ample(fan: Fan, D: ToricDivisor) -> bool:
    return all(s > 0 for s in _convexity_slacks(fan, D))


def is_pseff(fan: Fan, D: ToricDivisor) -> bool:
    """``D`` is R-linearly equivalent to an effective divisor iff ``P_D`` is nonempty."""
    _check(fan, D)
    cons = [Constraint(vec(v), a, GE) for v, a in zip(fan.rays, D.coefficients)]
    return feasible(cons, fan.dim)


def is_big(fan: Fan, D: ToricDivisor) -> bool:
    """``P_D`` has interior."""
    _check(fan, D)
    cons = [Constraint(vec(v), a, GT) for v, a in zip(fan.rays, D.coefficients)]
    return feasible(cons, fan.dim)


def hyperplanes(fan: Fan, D: ToricDivisor) -> list[tuple[Vector, Fraction]]:
    """The arrangement ``<u, v_rho> = -a_rho`` whose cells index the weights."""
    _check(fan, D)
    return [(vec(v), -a) for v, a in zip(fan.rays, D.coefficients)]


def sign_cells(fan: Fan, D: ToricDivisor) -> list[SignCell]:
    return chamber_decompose(hyperplanes(fan, D), fan.dim)


def weight_cohomology(fan: Fan, D: ToricDivisor, u: Sequence[int]) -> tuple[int, ...]:
    """``(dim H^0_u, ..., dim H^d_u)`` for a single weight ``u``."""
    pattern = sign_vector(hyperplanes(fan, D), u)
    neg = frozenset(j for j, s in enumerate(pattern) if s < 0)
    return fan.nerve_betti(neg)


def _guard_unbounded(cell: SignCell, betti: Sequence[int], degrees: Sequence[int]) -> None:
    for i in degrees:
        if betti[i]:
            raise SoundnessError(
                f"divergent cohomology: fan not complete or internal bug "
                f"(unbounded cell {cell.sign_pattern} has b~_{i - 1} = {betti[i]})"
            )


def _cell_lattice_points(cell: SignCell, hps) -> int:
    return sum(1 for u in lattice_points(cell.geometry) if sign_vector(hps, u) == cell.sign_pattern)


def cohomology(fan: Fan, D: ToricDivisor, degrees: Sequence[int] | None = None) -> CohomologySummary:
    """h^i(X, O(D)) for all requested degrees (default: all of 0..d)."""
    _check(fan, D)
    if not D.is_integral():
        raise PreconditionError("finite cohomology requires an integral divisor")
    degrees = list(range(fan.dim + 1)) if degrees is None else list(degrees)
    for i in degrees:
        if not 0 <= i <= fan.dim:
            raise PreconditionError(f"cohomological degree {i} outside 0..{fan.dim}")
    hps = hyperplanes(fan, D)
    dims = [0] * (fan.dim + 1)
    for cell in chamber_decompose(hps, fan.dim):
        betti = fan.nerve_betti(cell.negative_indices())
        if not cell.bounded:
            _guard_unbounded(cell, betti, degrees)
            continue
        if any(betti[i] for i in degrees):
            n = _cell_lattice_points(cell, hps)
            for i in degrees:
                dims[i] += betti[i] * n
    return CohomologySummary(D, tuple(dims))


def hi(fan: Fan, D: ToricDivisor, i: int) -> int:
    return cohomology(fan, D, [i]).dims[i]


def hhat_profile(fan: Fan, D: ToricDivisor) -> tuple[Fraction, ...]:
    """``(hhat^0, ..., hhat^d)`` as exact rationals via the cell-volume formula."""
    _check(fan, D)
    d = fan.dim
    totals = [Fraction(0)] * (d + 1)
    for cell in sign_cells(fan, D):
        if not cell.full_dimensional:
            continue
        betti = fan.nerve_betti(cell.negative_indices())
        if not cell.bounded:
            _guard_unbounded(cell, betti, range(d + 1))
            continue
        if any(betti):
            vol = volume(cell.geometry)
            for i in range(d + 1):
                totals[i] += betti[i] * vol
    f = math.factorial(d)
    return tuple(f * t for t in totals)


def hhat(fan: Fan, D: ToricDivisor, i: int) -> Fraction:
    if not 0 <= i <= fan.dim:
        raise PreconditionError(f"cohomological degree {i} outside 0..{fan.dim}")
    return hhat_profile(fan, D)[i]


def section_polytope_volume(fan: Fan, D: ToricDivisor) -> Fraction:
    """Volume of ``P_D = {u : <u, v_rho> >= -a_rho}``; independent route to hhat^0."""
    from .polyhedra import Polyhedron

    p = Polyhedron.from_halfspaces(fan.dim, [(v, -a) for v, a in zip(fan.rays, D.coefficients)])
    return volume(p)


def load_fan(path: str) -> Fan:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON ({exc})") from exc
    return Fan.from_json(doc)
