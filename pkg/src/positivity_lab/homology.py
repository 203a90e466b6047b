"""Reduced simplicial (co)homology ranks over Q."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import PreconditionError
from .linalg import rank


@dataclass(frozen=True)
class SimplicialComplex:
    """Faces are nonempty frozensets of vertex indices, closed under subsets.

    The complex with no faces is the empty complex; its only nonzero reduced
    Betti number sits in degree -1.
    """

    vertex_count: int
    faces: frozenset[frozenset[int]]

    def __post_init__(self):
        for f in self.faces:
            if not f:
                raise PreconditionError("faces must be nonempty")
            if any(v < 0 or v >= self.vertex_count for v in f):
                raise PreconditionError(f"face {sorted(f)} uses an out-of-range vertex")
            for k in range(1, len(f)):
                for sub in itertools.combinations(f, k):
                    if frozenset(sub) not in self.faces:
                        raise PreconditionError(f"not downward closed: {sorted(f)} lacks {sorted(sub)}")

    @classmethod
    def generated_by(cls, vertex_count: int, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Downward closure of the given simplices."""
        faces = set()
        for s in simplices:
            s = tuple(sorted(set(s)))
            for k in range(1, len(s) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(s, k))
        return cls(vertex_count, frozenset(faces))

    @property
    def dimension(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    def face_counts(self) -> list[int]:
        """f-vector starting at the empty face: ``[1, f_0, f_1, ...]``."""
        counts = [1] + [0] * (self.dimension + 1)
        for f in self.faces:
            counts[len(f)] += 1
        return counts

    def reduced_euler_characteristic(self) -> int:
        return sum((-1) ** (k - 1) * n for k, n in enumerate(self.face_counts()))


def _boundary_rank(lower: list[tuple[int, ...]], upper: list[tuple[int, ...]]) -> int:
    if not lower or not upper:
        return 0
    index = {f: i for i, f in enumerate(lower)}
    rows = []
    for f in upper:
        row = [Fraction(0)] * len(lower)
        for j in range(len(f)):
            row[index[f[:j] + f[j + 1:]]] = Fraction((-1) ** j)
        rows.append(row)
    return rank(rows)


def reduced_betti_numbers(complex_: SimplicialComplex) -> list[int]:
    """``[b~_{-1}, b~_0, ..., b~_dim]``: entry ``k`` is the rank in degree ``k - 1``.

    Computed from the augmented chain complex, so the empty complex gives
    ``[1]`` and anything nonempty has a zero in the first slot.
    """
    by_size: list[list[tuple[int, ...]]] = [[()]] + [[] for _ in range(complex_.dimension + 1)]
    for f in complex_.faces:
        by_size[len(f)].append(tuple(sorted(f)))
    for layer in by_size:
        layer.sort()
    ranks = [_boundary_rank(by_size[k - 1], by_size[k]) for k in range(1, len(by_size))] + [0]
    # ranks[k] is the rank of the boundary from size-(k+1) faces to size-k faces.
    betti = []
    for k, layer in enumerate(by_size):
        incoming = ranks[k]
        outgoing = ranks[k - 1] if k >= 1 else 0
        betti.append(len(layer) - outgoing - incoming)
    return betti


def reduced_betti(complex_: SimplicialComplex, degree: int) -> int:
    """Reduced Betti number in a single degree (zero outside the range)."""
    b = reduced_betti_numbers(complex_)
    k = degree + 1
    return b[k] if 0 <= k < len(b) else 0
