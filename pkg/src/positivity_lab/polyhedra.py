"""Exact polyhedral primitives.

A :class:`Polyhedron` is an H-description ``{x : <n_j, x> >= c_j}``.  Feasibility
of mixed strict / non-strict / equality systems is decided by Fourier-Motzkin
elimination, which is exact and cheap in the small dimensions used here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError
from .linalg import Vector, affine_rank, det, dot, nullspace, rank, solve, vec

GT, GE, EQ = ">", ">=", "="


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x + const  (kind)  0`` with kind one of ``>``, ``>=``, ``=``."""

    coeffs: Vector
    const: Fraction
    kind: str

    def holds(self, x: Sequence) -> bool:
        v = dot(self.coeffs, x) + self.const
        if self.kind == GT:
            return v > 0
        if self.kind == GE:
            return v >= 0
        return v == 0


def _normalize(coeffs: Vector, const: Fraction) -> tuple[Vector, Fraction]:
    lead = next((abs(c) for c in coeffs if c != 0), None)
    if lead is None:
        return coeffs, const
    return tuple(c / lead for c in coeffs), const / lead


def _trivially_ok(const: Fraction, kind: str) -> bool:
    if kind == GT:
        return const > 0
    if kind == GE:
        return const >= 0
    return const == 0


def feasible(constraints: Iterable[Constraint], nvars: int) -> bool:
    """Whether some real point satisfies every constraint."""
    eqs, ineqs = [], []
    for c in constraints:
        (eqs if c.kind == EQ else ineqs).append((list(c.coeffs), c.const, c.kind))
    # Gaussian substitution of the equalities.
    while eqs:
        coeffs, const, _ = eqs.pop()
        j = next((k for k, a in enumerate(coeffs) if a != 0), None)
        if j is None:
            if const != 0:
                return False
            continue
        aj = coeffs[j]

        def subst(row):
            cs, k0, kind = row
            f = cs[j] / aj
            if f == 0:
                return row
            return [a - f * b for a, b in zip(cs, coeffs)], k0 - f * const, kind

        eqs = [subst(r) for r in eqs]
        ineqs = [subst(r) for r in ineqs]
    rows: dict[tuple[Vector, Fraction], str] = {}
    for cs, k0, kind in ineqs:
        key = _normalize(tuple(cs), k0)
        if rows.get(key) != GT:
            rows[key] = kind
    for var in range(nvars):
        pos, neg, keep = [], [], {}
        for (cs, k0), kind in rows.items():
            if cs[var] > 0:
                pos.append((cs, k0, kind))
            elif cs[var] < 0:
                neg.append((cs, k0, kind))
            else:
                keep[(cs, k0)] = kind
        for (pc, pk, pkind), (nc, nk, nkind) in itertools.product(pos, neg):
            a, b = pc[var], -nc[var]
            cs = tuple(b * x + a * y for x, y in zip(pc, nc))
            k0 = b * pk + a * nk
            kind = GT if GT in (pkind, nkind) else GE
            key = _normalize(cs, k0)
            if keep.get(key) != GT:
                keep[key] = kind
        rows = {}
        for (cs, k0), kind in keep.items():
            if all(c == 0 for c in cs):
                if not _trivially_ok(k0, kind):
                    return False
            else:
                rows[(cs, k0)] = kind
    return all(_trivially_ok(k0, kind) for (_, k0), kind in rows.items())


@dataclass(frozen=True)
class Polyhedron:
    """``{x in Q^dim : <normal_j, x> >= offset_j for all j}``."""

    dim: int
    halfspaces: tuple[tuple[Vector, Fraction], ...]

    @classmethod
    def from_halfspaces(cls, dim: int, halfspaces: Iterable[tuple[Sequence, object]]) -> "Polyhedron":
        hs = []
        for normal, offset in halfspaces:
            n = vec(normal)
            if len(n) != dim:
                raise PreconditionError(f"halfspace normal {n} has wrong length for dim {dim}")
            hs.append((n, Fraction(offset)))
        return cls(dim, tuple(hs))

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "Polyhedron":
        d = len(lower)
        hs = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            hs.append((e, lower[i]))
            e = [0] * d
            e[i] = -1
            hs.append((e, -Fraction(upper[i])))
        return cls.from_halfspaces(d, hs)

    def scaled(self, k) -> "Polyhedron":
        """The dilation ``k * P`` for ``k > 0``."""
        k = Fraction(k)
        return Polyhedron(self.dim, tuple((n, c * k) for n, c in self.halfspaces))

    def constraints(self) -> list[Constraint]:
        return [Constraint(n, -c, GE) for n, c in self.halfspaces]

    def contains(self, x: Sequence) -> bool:
        return all(dot(n, x) >= c for n, c in self.halfspaces)

    def is_empty(self) -> bool:
        return not feasible(self.constraints(), self.dim)

    def is_bounded(self) -> bool:
        if self.is_empty():
            return True
        return recession_is_trivial([Constraint(n, Fraction(0), GE) for n, _ in self.halfspaces], self.dim)

    def vertices(self) -> list[Vector]:
        """Vertices in lexicographic order (requires a pointed polyhedron)."""
        d = self.dim
        found = set()
        for combo in itertools.combinations(self.halfspaces, d):
            x = solve([n for n, _ in combo], [c for _, c in combo])
            if x is not None and self.contains(x):
                found.add(x)
        return sorted(found)

    def _require_bounded(self) -> None:
        if not self.is_bounded():
            raise PreconditionError("polyhedron is unbounded (caller bug: bounded input required)")


def recession_is_trivial(cone: Sequence[Constraint], dim: int) -> bool:
    """Whether the homogeneous system ``cone`` has only the zero solution."""
    for j in range(dim):
        for s in (1, -1):
            e = [Fraction(0)] * dim
            e[j] = Fraction(1)
            fix = Constraint(tuple(e), Fraction(-s), EQ)
            if feasible([*cone, fix], dim):
                return False
    return True


def _tight_sets(p: Polyhedron, verts: Sequence[Vector]) -> list[frozenset[int]]:
    return [frozenset(j for j, (n, c) in enumerate(p.halfspaces) if dot(n, v) == c) for v in verts]


def triangulate(p: Polyhedron) -> list[tuple[Vector, ...]]:
    """Pulling triangulation of a bounded full-dimensional polyhedron.

    The apex of each recursion level is the lexicographically least vertex of
    the current face, which makes the output deterministic.
    """
    p._require_bounded()
    verts = p.vertices()
    if affine_rank(verts) < p.dim:
        return []
    tight = _tight_sets(p, verts)
    nh = len(p.halfspaces)

    def faces_below(face: frozenset[int], k: int) -> list[frozenset[int]]:
        out = set()
        for h in range(nh):
            sub = frozenset(v for v in face if h in tight[v])
            if sub and sub != face and affine_rank([verts[v] for v in sub]) == k - 1:
                out.add(sub)
        return sorted(out, key=sorted)

    def rec(face: frozenset[int], k: int) -> list[tuple[int, ...]]:
        if len(face) == k + 1:
            return [tuple(sorted(face))]
        apex = min(face)  # verts are lexicographically sorted
        simplices = []
        for facet in faces_below(face, k):
            if apex in facet:
                continue
            simplices.extend(s + (apex,) for s in rec(facet, k - 1))
        return simplices

    return [tuple(verts[i] for i in s) for s in rec(frozenset(range(len(verts))), p.dim)]


def simplex_volume(points: Sequence[Sequence]) -> Fraction:
    base = points[0]
    d = len(base)
    return abs(det([[a - b for a, b in zip(q, base)] for q in points[1:]])) / math.factorial(d)


def volume(p: Polyhedron) -> Fraction:
    """Exact Euclidean volume; zero for lower-dimensional polyhedra."""
    return sum((simplex_volume(s) for s in triangulate(p)), Fraction(0))


def lattice_points(p: Polyhedron) -> list[tuple[int, ...]]:
    """All integer points of a bounded polyhedron, lexicographically sorted."""
    p._require_bounded()
    verts = p.vertices()
    if not verts:
        return []
    lo = [math.ceil(min(v[i] for v in verts)) for i in range(p.dim)]
    hi = [math.floor(max(v[i] for v in verts)) for i in range(p.dim)]
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return [x for x in itertools.product(*ranges) if p.contains(x)]


def count_lattice_points_box(constraints: Sequence[Constraint], lo: Sequence[int], hi: Sequence[int]) -> int:
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return sum(1 for x in itertools.product(*ranges) if all(c.holds(x) for c in constraints))


def dual_cone_generators(generators: Sequence[Sequence], pairing: Sequence[Sequence] | None = None) -> list[Vector]:
    """Extreme rays of ``{x : <g, x> >= 0 for all generators g}``.

    ``pairing`` is an optional bilinear form (e.g. an intersection form), in
    which case the constraint is ``g^T Q x >= 0``.  The input cone must be
    full-dimensional so that the dual is pointed; otherwise ``ValueError`` is
    raised.  Rays are returned primitive-integral when possible and sorted.
    """
    gens = [vec(g) for g in generators]
    if not gens:
        raise ValueError("no generators")
    n = len(gens[0])
    if pairing is not None:
        q = [vec(r) for r in pairing]
        rows = [tuple(sum((g[i] * q[i][j] for i in range(n)), Fraction(0)) for j in range(n)) for g in gens]
    else:
        rows = gens
    if rank(rows) < n:
        raise ValueError("cone is not full-dimensional; dual is not pointed")
    rays = set()
    for combo in itertools.combinations(rows, n - 1):
        ns = nullspace(list(combo), n)
        if len(ns) != 1:
            continue
        w = ns[0]
        for cand in (w, tuple(-x for x in w)):
            if all(dot(r, cand) >= 0 for r in rows):
                rays.add(_primitive(cand))
    return sorted(rays)


def _primitive(v: Vector) -> Vector:
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(x // g) for x in ints)


def in_cone(x: Sequence, generators: Sequence[Sequence]) -> bool:
    """Whether ``x`` is a nonnegative combination of ``generators``."""
    gens = [vec(g) for g in generators]
    x = vec(x)
    if not gens:
        return all(c == 0 for c in x)
    k = len(gens)
    cons = [Constraint(tuple(Fraction(int(i == j)) for j in range(k)), Fraction(0), GE) for i in range(k)]
    for coord in range(len(x)):
        cons.append(Constraint(tuple(g[coord] for g in gens), -x[coord], EQ))
    return feasible(cons, k)
