"""Sign-cell decomposition of an affine hyperplane arrangement.

Hyperplane ``j`` is ``(normal_j, offset_j)`` with value ``f_j(x) = <normal_j, x> - offset_j``.
Every point of space has a sign vector in ``{NEG, ZERO, POS}^n``; the cells are
the nonempty fibres of that map, lower-dimensional ones included.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError
from .linalg import Vector, dot, rank, vec
from .polyhedra import EQ, GE, GT, Constraint, Polyhedron, feasible, recession_is_trivial

NEG, ZERO, POS = -1, 0, 1

Hyperplane = tuple[Vector, Fraction]


@dataclass(frozen=True)
class SignCell:
    sign_pattern: tuple[int, ...]
    geometry: Polyhedron  # closure of the cell
    bounded: bool
    dimension: int

    @property
    def full_dimensional(self) -> bool:
        return self.dimension == self.geometry.dim

    def negative_indices(self) -> frozenset[int]:
        return frozenset(j for j, s in enumerate(self.sign_pattern) if s == NEG)


def _constraint(h: Hyperplane, sign: int) -> Constraint:
    normal, offset = h
    if sign == POS:
        return Constraint(normal, -offset, GT)
    if sign == NEG:
        return Constraint(tuple(-x for x in normal), offset, GT)
    return Constraint(normal, -offset, EQ)


def sign_vector(hyperplanes: Sequence[Hyperplane], x: Sequence) -> tuple[int, ...]:
    out = []
    for normal, offset in hyperplanes:
        v = dot(normal, x) - offset
        out.append(POS if v > 0 else NEG if v < 0 else ZERO)
    return tuple(out)


def _closure(hyperplanes: Sequence[Hyperplane], pattern: Sequence[int], dim: int) -> Polyhedron:
    hs = []
    for (normal, offset), s in zip(hyperplanes, pattern):
        if s in (POS, ZERO):
            hs.append((normal, offset))
        if s in (NEG, ZERO):
            hs.append((tuple(-x for x in normal), -offset))
    return Polyhedron(dim, tuple(hs))


def _is_bounded(hyperplanes: Sequence[Hyperplane], pattern: Sequence[int], dim: int) -> bool:
    cone = []
    for (normal, _), s in zip(hyperplanes, pattern):
        if s == ZERO:
            cone.append(Constraint(normal, Fraction(0), EQ))
        else:
            cone.append(Constraint(tuple(s * x for x in normal), Fraction(0), GE))
    return recession_is_trivial(cone, dim)


def chamber_decompose(hyperplanes: Sequence[tuple[Sequence, object]], ambient_dim: int) -> list[SignCell]:
    """Partition ``Q^ambient_dim`` into the sign cells of the arrangement.

    Cells are built incrementally, refining by one hyperplane at a time and
    keeping only feasible sign extensions.  Output is sorted by sign pattern.
    """
    if ambient_dim < 1:
        raise PreconditionError("ambient dimension must be >= 1")
    hps: list[Hyperplane] = []
    for normal, offset in hyperplanes:
        n = vec(normal)
        if len(n) != ambient_dim:
            raise PreconditionError(f"hyperplane normal {n} does not have length {ambient_dim}")
        if all(x == 0 for x in n):
            raise PreconditionError("hyperplane normal must be nonzero")
        hps.append((n, Fraction(offset)))

    partial: list[tuple[tuple[int, ...], list[Constraint]]] = [((), [])]
    for h in hps:
        refined = []
        for pattern, cons in partial:
            for s in (NEG, ZERO, POS):
                c = _constraint(h, s)
                if feasible([*cons, c], ambient_dim):
                    refined.append((pattern + (s,), [*cons, c]))
        partial = refined

    cells = []
    for pattern, _ in sorted(partial):
        zero_normals = [h[0] for h, s in zip(hps, pattern) if s == ZERO]
        cells.append(
            SignCell(
                sign_pattern=pattern,
                geometry=_closure(hps, pattern, ambient_dim),
                bounded=_is_bounded(hps, pattern, ambient_dim),
                dimension=ambient_dim - rank(zero_normals),
            )
        )
    return cells
