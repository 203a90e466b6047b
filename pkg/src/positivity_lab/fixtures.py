"""Shipped varieties: fans, Néron-Severi bases and (for surfaces) surface models.

Every fixture records how a class in its Néron-Severi basis maps to a torus
invariant divisor, so the toric and surface engines can be evaluated on the
same class.

Hirzebruch surface ``F_a``: rays ``(1,0), (0,1), (-1,a), (0,-1)``.  The ray
``(0,1)`` is the negative section ``E`` (``E^2 = -a``) and ``(1,0)`` is a fibre
``F``; the classes ``E, F`` generate the cone of curves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ModelError, PreconditionError
from .linalg import Vector, vec
from .surface import SurfaceModel
from .toric import Fan, ToricDivisor


@dataclass(frozen=True)
class Fixture:
    name: str
    fan: Fan
    labels: tuple[str, ...]
    # basis[k] = ray coefficients of the k-th Néron-Severi basis class
    basis: tuple[Vector, ...]
    model: SurfaceModel | None = None

    @property
    def dim(self) -> int:
        return self.fan.dim

    @property
    def rank(self) -> int:
        return len(self.labels)

    def divisor(self, coords: Sequence) -> ToricDivisor:
        coords = vec(coords)
        if len(coords) != self.rank:
            raise PreconditionError(f"{self.name} classes have {self.rank} coordinates, got {len(coords)}")
        out = [Fraction(0)] * self.fan.n_rays
        for c, b in zip(coords, self.basis):
            for r in range(self.fan.n_rays):
                out[r] += c * b[r]
        return ToricDivisor(tuple(out))

    def parse(self, text: str) -> Vector:
        return parse_class(text, self.labels)


def _unit(n: int, k: int) -> Vector:
    return tuple(Fraction(int(i == k)) for i in range(n))


def projective_line() -> Fixture:
    fan = Fan(1, ((1,), (-1,)), ((0,), (1,)))
    return Fixture("P1", fan, ("H",), (_unit(2, 0),))


def projective_plane() -> Fixture:
    fan = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    model = SurfaceModel("P2", ("H",), ((1,),), (-3,), ((1,),), ((1,), (2,)))
    return Fixture("P2", fan, ("H",), (_unit(3, 0),), model)


def p1_x_p1() -> Fixture:
    fan = Fan(2, ((1, 0), (-1, 0), (0, 1), (0, -1)), ((0, 2), (1, 2), (1, 3), (0, 3)))
    model = SurfaceModel(
        "P1xP1",
        ("H1", "H2"),
        ((0, 1), (1, 0)),
        (-2, -2),
        ((1, 0), (0, 1)),
        ((1, 1), (1, 2), (2, 1)),
    )
    return Fixture("P1xP1", fan, ("H1", "H2"), (_unit(4, 0), _unit(4, 2)), model)


def hirzebruch(a: int) -> Fixture:
    if a < 0:
        raise PreconditionError("Hirzebruch index must be >= 0")
    fan = Fan(2, ((1, 0), (0, 1), (-1, a), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))
    model = SurfaceModel(
        f"F{a}",
        ("E", "F"),
        ((-a, 1), (1, 0)),
        (-2, -(2 + a)),
        ((1, 0), (0, 1)),
        ((1, a + 1), (1, a + 2), (2, 2 * a + 1)),
    )
    return Fixture(f"F{a}", fan, ("E", "F"), (_unit(4, 1), _unit(4, 0)), model)


def f1_x_p1() -> Fixture:
    base = hirzebruch(1).fan
    rays = tuple(r + (0,) for r in base.rays) + ((0, 0, 1), (0, 0, -1))
    cones = tuple(c + (t,) for c in base.maximal_cones for t in (4, 5))
    fan = Fan(3, rays, cones)
    return Fixture("F1xP1", fan, ("E", "F", "H"), (_unit(6, 1), _unit(6, 0), _unit(6, 4)))


_BUILDERS = {
    "P1": projective_line,
    "P2": projective_plane,
    "P1xP1": p1_x_p1,
    "F0": lambda: hirzebruch(0),
    "F1": lambda: hirzebruch(1),
    "F2": lambda: hirzebruch(2),
    "F3": lambda: hirzebruch(3),
    "F1xP1": f1_x_p1,
}

_CACHE: dict[str, Fixture] = {}

FIXTURE_NAMES = tuple(_BUILDERS)


def get(name: str) -> Fixture:
    if name not in _BUILDERS:
        raise ModelError(f"unknown fixture {name!r}; choose from {', '.join(_BUILDERS)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z]\w*)\s*")


def parse_class(text: str, labels: Sequence[str]) -> Vector:
    """Parse a class written as ``"2E+F"``, ``"-3/2H1 + H2"`` or ``"2,1"``."""
    text = text.strip()
    if not text:
        raise PreconditionError("empty class expression")
    if not re.search(r"[A-Za-z]", text):
        parts = [p for p in re.split(r"[,\s]+", text) if p]
        try:
            coords = vec(parts)
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"cannot parse class {text!r}: {exc}") from exc
        if len(coords) != len(labels):
            raise PreconditionError(f"class {text!r} needs {len(labels)} coordinates")
        return coords
    coords = [Fraction(0)] * len(labels)
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise PreconditionError(f"cannot parse class {text!r} near {text[pos:]!r}")
        sign, coef, label = m.groups()
        if label not in labels:
            raise PreconditionError(f"unknown basis label {label!r}; expected one of {list(labels)}")
        if pos > 0 and not sign:
            raise PreconditionError(f"missing operator before {label!r} in {text!r}")
        value = Fraction(coef) if coef else Fraction(1)
        coords[labels.index(label)] += -value if sign == "-" else value
        pos = m.end()
    return tuple(coords)
