"""Positivity on surfaces with a finitely generated cone of curves.

All closed forms go through the Zariski decomposition ``L = P + N``:
``vol(L) = P^2`` for pseudoeffective ``L``, ``hhat^2(L) = vol(-L)`` by Serre
duality, and ``hhat^1`` is whatever asymptotic Riemann-Roch leaves over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ModelError, PreconditionError, SoundnessError
from .linalg import Vector, bilinear, format_rational, inertia, is_negative_definite, show, solve, vec
from .polyhedra import dual_cone_generators


@dataclass(frozen=True)
class SurfaceModel:
    """Néron-Severi data of a smooth projective surface.

    ``mori_generators`` are trusted to generate the closed cone of curves and
    ``very_ample`` lists classes declared very ample (also trusted, but each
    must at least pass the ampleness test).
    """

    name: str
    basis_labels: tuple[str, ...]
    intersection_form: tuple[tuple[int, ...], ...]
    canonical_class: Vector
    mori_generators: tuple[Vector, ...]
    very_ample: tuple[Vector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "intersection_form", tuple(tuple(int(x) for x in r) for r in self.intersection_form))
        object.__setattr__(self, "canonical_class", vec(self.canonical_class))
        object.__setattr__(self, "mori_generators", tuple(vec(g) for g in self.mori_generators))
        object.__setattr__(self, "very_ample", tuple(vec(g) for g in self.very_ample))
        self._validate()

    def _validate(self) -> None:
        rho = self.rank
        if len(self.basis_labels) != rho:
            raise ModelError("basisLabels length does not match rank")
        q = self.intersection_form
        if any(len(r) != rho for r in q) or any(q[i][j] != q[j][i] for i in range(rho) for j in range(rho)):
            raise ModelError("intersection form must be a symmetric rank x rank matrix")
        if inertia(q) != (1, rho - 1, 0):
            raise ModelError(f"intersection form has signature {inertia(q)}, expected (1, {rho - 1}, 0)")
        for v in (self.canonical_class, *self.mori_generators, *self.very_ample):
            if len(v) != rho:
                raise ModelError(f"class {show(v)} does not have length {rho}")
        if not self.mori_generators or any(all(x == 0 for x in g) for g in self.mori_generators):
            raise ModelError("mori generators must be nonempty and nonzero")
        try:
            self.nef_cone_generators
        except ValueError as exc:
            raise ModelError("model does not determine cones: mori cone is not full-dimensional") from exc
        for a in self.very_ample:
            if not is_ample(self, a):
                raise ModelError(f"declared very ample class {show(a)} is not ample")

    @property
    def rank(self) -> int:
        return len(self.intersection_form)

    def dot(self, x: Sequence, y: Sequence) -> Fraction:
        return bilinear(self.intersection_form, vec(x), vec(y))

    def square(self, x: Sequence) -> Fraction:
        return self.dot(x, x)

    @cached_property
    def negative_curves(self) -> tuple[Vector, ...]:
        return tuple(c for c in self.mori_generators if self.square(c) < 0)

    @cached_property
    def nef_cone_generators(self) -> tuple[Vector, ...]:
        return tuple(dual_cone_generators(self.mori_generators, self.intersection_form))

    def cls(self, *coords) -> Vector:
        x = vec(coords)
        if len(x) != self.rank:
            raise PreconditionError(f"class {show(x)} does not have length {self.rank}")
        return x

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "basisLabels": list(self.basis_labels),
            "intersectionForm": [list(r) for r in self.intersection_form],
            "canonicalClass": [format_rational(x) for x in self.canonical_class],
            "moriGenerators": [[format_rational(x) for x in g] for g in self.mori_generators],
            "veryAmpleWitnesses": [[format_rational(x) for x in g] for g in self.very_ample],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SurfaceModel":
        try:
            model = cls(
                name=doc.get("name", "custom"),
                basis_labels=tuple(doc["basisLabels"]),
                intersection_form=tuple(map(tuple, doc["intersectionForm"])),
                canonical_class=vec(doc["canonicalClass"]),
                mori_generators=tuple(vec(g) for g in doc["moriGenerators"]),
                very_ample=tuple(vec(g) for g in doc.get("veryAmpleWitnesses", [])),
            )
        except ModelError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"surface model JSON does not match schema: {exc}") from exc
        if "rank" in doc and int(doc["rank"]) != model.rank:
            raise ModelError("declared rank does not match intersection form")
        return model


def load_model(path: str) -> SurfaceModel:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: not valid JSON ({exc})") from exc
    return SurfaceModel.from_json(doc)


def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _neg(x):
    return tuple(-a for a in x)


def is_nef(model: SurfaceModel, L: Sequence) -> bool:
    L = model.cls(*L)
    return all(model.dot(L, c) >= 0 for c in model.mori_generators)


def is_ample(model: SurfaceModel, L: Sequence) -> bool:
    L = model.cls(*L)
    return all(model.dot(L, c) > 0 for c in model.mori_generators) and model.square(L) > 0


def is_pseff(model: SurfaceModel, L: Sequence) -> bool:
    L = model.cls(*L)
    return all(model.dot(L, n) >= 0 for n in model.nef_cone_generators)


def is_big(model: SurfaceModel, L: Sequence) -> bool:
    return vol(model, L) > 0


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: Vector
    negative: tuple[tuple[Vector, Fraction], ...]

    @property
    def negative_class(self) -> Vector:
        rho = len(self.positive)
        total = [Fraction(0)] * rho
        for curve, a in self.negative:
            for k in range(rho):
                total[k] += a * curve[k]
        return tuple(total)

    @property
    def support(self) -> tuple[Vector, ...]:
        return tuple(c for c, _ in self.negative)


def _solve_support(model: SurfaceModel, L: Vector, support: Sequence[Vector]) -> dict[Vector, Fraction]:
    if not support:
        return {}
    gram = [[model.dot(a, b) for b in support] for a in support]
    if not is_negative_definite(gram):
        raise ModelError("curve list incomplete or model invalid: support Gram matrix is not negative definite")
    coeffs = solve(gram, [model.dot(L, c) for c in support])
    return dict(zip(support, coeffs))


def zariski(model: SurfaceModel, L: Sequence, start: Iterable[Sequence] | None = None) -> ZariskiDecomposition:
    """Zariski decomposition of a pseudoeffective class.

    Starting from the curves meeting ``L`` negatively (or from ``start``),
    solve ``(L - N) . C = 0`` on the current support, add generators that
    the candidate positive part meets negatively, drop curves that received
    a negative coefficient, and repeat until nothing changes.
    """
    L = model.cls(*L)
    if not is_pseff(model, L):
        raise PreconditionError(f"zariski requires a pseudoeffective class; {show(L)} is not")
    gens = model.mori_generators
    if start is None:
        support = {c for c in gens if model.dot(L, c) < 0}
    else:
        support = {vec(c) for c in start}
        if not support <= set(gens):
            raise PreconditionError("starting set must consist of mori generators")
    seen = set()
    while True:
        key = frozenset(support)
        if key in seen:
            raise SoundnessError("Zariski iteration cycled")
        seen.add(key)
        ordered = sorted(support)
        coeffs = _solve_support(model, L, ordered)
        N = [Fraction(0)] * model.rank
        for c, a in coeffs.items():
            for k in range(model.rank):
                N[k] += a * c[k]
        P = _sub(L, N)
        drop = {c for c, a in coeffs.items() if a < 0}
        add = {c for c in gens if c not in support and model.dot(P, c) < 0}
        if not drop and not add:
            break
        support = (support - drop) | add
    negative = tuple((c, coeffs[c]) for c in ordered if coeffs[c] != 0)
    dec = ZariskiDecomposition(P, negative)
    _verify(model, L, dec)
    return dec


def _verify(model: SurfaceModel, L: Vector, dec: ZariskiDecomposition) -> None:
    P = dec.positive
    if not is_nef(model, P):
        raise SoundnessError("Zariski positive part is not nef")
    if any(model.dot(P, c) != 0 or a < 0 for c, a in dec.negative):
        raise SoundnessError("Zariski negative part is not orthogonal to P or has negative coefficients")
    if tuple(a + b for a, b in zip(P, dec.negative_class)) != L:
        raise SoundnessError("P + N does not reproduce the input class")


def vol(model: SurfaceModel, L: Sequence) -> Fraction:
    L = model.cls(*L)
    if not is_pseff(model, L):
        return Fraction(0)
    return model.square(zariski(model, L).positive)


def hhat(model: SurfaceModel, L: Sequence, i: int) -> Fraction:
    L = model.cls(*L)
    if i == 0:
        return vol(model, L)
    if i == 2:
        return vol(model, _neg(L))
    if i == 1:
        return vol(model, L) + vol(model, _neg(L)) - model.square(L)
    raise PreconditionError(f"surface cohomological degree must be 0, 1 or 2, got {i}")


def hhat_profile(model: SurfaceModel, L: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    L = model.cls(*L)
    v, w = vol(model, L), vol(model, _neg(L))
    return v, v + w - model.square(L), w


def b_invariant(model: SurfaceModel, L: Sequence) -> int:
    """Dimension of the augmented base locus; 0 stands in for the empty set."""
    L = model.cls(*L)
    if not is_big(model, L):
        return 2
    P = zariski(model, L).positive
    null_curves = [c for c in model.mori_generators if model.dot(P, c) == 0 and model.square(c) < 0]
    return 1 if null_curves else 0


def a_invariant(model: SurfaceModel, L: Sequence, A: Sequence) -> int:
    """Fewest very general members of ``|A|`` to cut before ``L`` restricts amply.

    Relies on Bertini (a very general member is an irreducible curve) and on
    degree positivity characterising ample line bundles on such a curve.
    """
    L, A = model.cls(*L), model.cls(*A)
    if not is_ample(model, A):
        raise PreconditionError(f"a-invariant requires an ample (very ample) A; {show(A)} is not ample")
    if is_ample(model, L):
        return 0
    if model.dot(L, A) > 0:
        return 1
    return 2


def c_invariant(model: SurfaceModel, L: Sequence) -> int:
    """Top degree whose hhat does not vanish identically near ``[L]``."""
    L = model.cls(*L)
    if is_pseff(model, _neg(L)):
        return 2
    if is_ample(model, L):
        return 0
    return 1
