"""Engine-independent layer over the asymptotic cohomology functions.

A backend is anything with ``dim``, ``rank``, ``profile(cls)``,
``is_ample(cls)`` and ``is_nef(cls)``; classes are coordinate tuples in the
backend's Néron-Severi basis.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Protocol, Sequence

from . import fixtures, surface, toric
from .errors import PreconditionError
from .linalg import Vector, format_rational, show, vec


@dataclass(frozen=True)
class AsymptoticProfile:
    dim: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", vec(self.values))
        if len(self.values) != self.dim + 1:
            raise ValueError(f"profile of a {self.dim}-fold needs {self.dim + 1} entries")
        if any(v < 0 for v in self.values):
            raise ValueError(f"asymptotic cohomology is nonnegative, got {self.values}")

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def scaled(self, k) -> "AsymptoticProfile":
        return AsymptoticProfile(self.dim, tuple(Fraction(k) * v for v in self.values))

    def first_nonvanishing_higher(self) -> int | None:
        return next((i for i in range(1, self.dim + 1) if self.values[i] > 0), None)

    def to_json(self) -> list[str]:
        return [format_rational(v) for v in self.values]


class Backend(Protocol):
    dim: int
    rank: int

    def profile(self, cls: Sequence) -> AsymptoticProfile: ...

    def is_ample(self, cls: Sequence) -> bool: ...

    def is_nef(self, cls: Sequence) -> bool: ...


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("POSITIVITY_LAB_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Iterable) -> list:
    """Ordered map, threaded up to ``POSITIVITY_LAB_THREADS`` workers."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


class ToricBackend:
    def __init__(self, fixture: fixtures.Fixture):
        self.fixture = fixture
        self.name = f"toric:{fixture.name}"
        self.dim = fixture.dim
        self.rank = fixture.rank
        self._cache: dict[Vector, AsymptoticProfile] = {}

    def _check(self, cls) -> Vector:
        cls = vec(cls)
        if len(cls) != self.rank:
            raise PreconditionError(f"{self.name} expects classes of rank {self.rank}, got {len(cls)}")
        return cls

    def profile(self, cls):
        cls = self._check(cls)
        hit = self._cache.get(cls)
        if hit is None:
            values = toric.hhat_profile(self.fixture.fan, self.fixture.divisor(cls))
            hit = self._cache[cls] = AsymptoticProfile(self.dim, values)
        return hit

    def is_ample(self, cls):
        return toric.is_ample(self.fixture.fan, self.fixture.divisor(self._check(cls)))

    def is_nef(self, cls):
        return toric.is_nef(self.fixture.fan, self.fixture.divisor(self._check(cls)))


class SurfaceBackend:
    dim = 2

    def __init__(self, model: surface.SurfaceModel):
        self.model = model
        self.name = f"surface:{model.name}"
        self.rank = model.rank

    def profile(self, cls):
        return AsymptoticProfile(2, surface.hhat_profile(self.model, cls))

    def is_ample(self, cls):
        return surface.is_ample(self.model, cls)

    def is_nef(self, cls):
        return surface.is_nef(self.model, cls)


class ProductBackend:
    """``X1 x X2`` with ``N^1 = N^1(X1) + N^1(X2)`` and profiles by Künneth."""

    def __init__(self, first: Backend, second: Backend):
        self.first, self.second = first, second
        self.name = f"{getattr(first, 'name', 'X1')} x {getattr(second, 'name', 'X2')}"
        self.dim = first.dim + second.dim
        self.rank = first.rank + second.rank

    def split(self, cls) -> tuple[Vector, Vector]:
        cls = vec(cls)
        if len(cls) != self.rank:
            raise PreconditionError(f"{self.name} expects classes of rank {self.rank}, got {len(cls)}")
        return cls[: self.first.rank], cls[self.first.rank:]

    def profile(self, cls):
        c1, c2 = self.split(cls)
        return kunneth(self.first.profile(c1), self.second.profile(c2))

    def is_ample(self, cls):
        c1, c2 = self.split(cls)
        return self.first.is_ample(c1) and self.second.is_ample(c2)

    def is_nef(self, cls):
        c1, c2 = self.split(cls)
        return self.first.is_nef(c1) and self.second.is_nef(c2)


def backend_for(name: str, engine: str = "toric") -> Backend:
    fx = fixtures.get(name)
    if engine == "surface":
        if fx.model is not None:
            return SurfaceBackend(fx.model)
        if name == "F1xP1":
            return ProductBackend(SurfaceBackend(fixtures.get("F1").model), ToricBackend(fixtures.get("P1")))
        raise PreconditionError(f"fixture {name} has no surface model")
    if engine != "toric":
        raise PreconditionError(f"unknown engine {engine!r}")
    return ToricBackend(fx)


def profile(backend: Backend, cls: Sequence) -> AsymptoticProfile:
    return backend.profile(cls)


def kunneth(p1: AsymptoticProfile, p2: AsymptoticProfile) -> AsymptoticProfile:
    """Profile of the exterior product: ``C(d1+d2, d1) * sum_{i+j=k} p1[i] p2[j]``."""
    d1, d2 = p1.dim, p2.dim
    w = math.comb(d1 + d2, d1)
    values = [Fraction(0)] * (d1 + d2 + 1)
    for i, a in enumerate(p1.values):
        for j, b in enumerate(p2.values):
            values[i + j] += w * a * b
    return AsymptoticProfile(d1 + d2, tuple(values))


def _axpy(x: Sequence, t: Fraction, y: Sequence) -> Vector:
    return tuple(a + t * b for a, b in zip(x, y))


@dataclass
class ScanReport:
    t_grid: tuple[Fraction, ...]
    profiles: tuple[AsymptoticProfile, ...]
    first_nonvanishing: tuple[int | None, ...]
    ample_consistent: bool
    cls: Vector = ()
    direction: Vector = ()

    def to_json(self) -> dict:
        return {
            "class": [format_rational(x) for x in self.cls],
            "ample": [format_rational(x) for x in self.direction],
            "ampleConsistent": self.ample_consistent,
            "rows": [
                {"t": format_rational(t), "hhat": p.to_json(), "firstNonvanishingIndex": k}
                for t, p, k in zip(self.t_grid, self.profiles, self.first_nonvanishing)
            ],
        }

    def to_csv(self) -> str:
        d = self.profiles[0].dim if self.profiles else 0
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", *[f"hhat{i}" for i in range(d + 1)], "firstNonvanishingIndex"])
        for t, p, k in zip(self.t_grid, self.profiles, self.first_nonvanishing):
            w.writerow([format_rational(t), *p.to_json(), "" if k is None else k])
        return buf.getvalue()


def ample_scan(backend: Backend, L: Sequence, A: Sequence, t_max, steps: int) -> ScanReport:
    """Profiles of ``L - tA`` on ``t = k * t_max / steps`` for ``k = 0..steps``."""
    L, A = vec(L), vec(A)
    t_max = Fraction(t_max)
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    if t_max <= 0:
        raise PreconditionError("tMax must be positive")
    if not backend.is_ample(A):
        raise PreconditionError(f"ampleScan requires an ample A; {show(A)} is not ample")
    grid = tuple(t_max * k / steps for k in range(steps + 1))
    profiles = tuple(parallel_map(lambda t: backend.profile(_axpy(L, -t, A)), grid))
    firsts = tuple(p.first_nonvanishing_higher() for p in profiles)
    return ScanReport(grid, profiles, firsts, all(k is None for k in firsts), L, A)


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def _radical_inverse(n: int, base: int) -> Fraction:
    out, scale = Fraction(0), Fraction(1, base)
    while n:
        n, digit = divmod(n, base)
        out += digit * scale
        scale /= base
    return out


def ball_samples(center: Sequence, radius, count: int) -> list[Vector]:
    """Deterministic rational points of the closed coordinate ball.

    The center comes first, followed by Halton points of the enclosing cube
    that land inside the ball.
    """
    center = vec(center)
    radius = Fraction(radius)
    n = len(center)
    if n > len(_PRIMES):
        raise PreconditionError("ball sampling supports rank <= 10")
    pts = [center]
    k = 1
    while len(pts) < count:
        offset = tuple(radius * (2 * _radical_inverse(k, _PRIMES[j]) - 1) for j in range(n))
        k += 1
        if sum(x * x for x in offset) <= radius * radius:
            pts.append(tuple(c + o for c, o in zip(center, offset)))
    return pts


@dataclass(frozen=True)
class Witness:
    cls: Vector
    index: int
    value: Fraction


@dataclass(frozen=True)
class SerreCheck:
    vanishing: bool
    witness: Witness | None
    samples: int

    def to_json(self) -> dict:
        w = self.witness
        return {
            "higherCohomologyVanishesNearby": self.vanishing,
            "samples": self.samples,
            "witness": None
            if w is None
            else {"class": [format_rational(x) for x in w.cls], "index": w.index, "value": format_rational(w.value)},
        }


def serre_criterion_check(backend: Backend, L: Sequence, radius, samples: int) -> SerreCheck:
    """Whether every ``hhat^i``, ``i > 0``, vanishes on a sample of the ball around ``L``.

    Comparing the verdict with ``backend.is_ample(L)`` is the ampleness
    characterisation check; the first nonvanishing sample is returned as a
    witness.
    """
    radius = Fraction(radius)
    if radius <= 0:
        raise PreconditionError("radius must be positive")
    if samples < 1:
        raise PreconditionError("samples must be >= 1")
    pts = ball_samples(L, radius, samples)
    for x, p in zip(pts, parallel_map(backend.profile, pts)):
        k = p.first_nonvanishing_higher()
        if k is not None:
            return SerreCheck(False, Witness(x, k, p[k]), len(pts))
    return SerreCheck(True, None, len(pts))


def continuity_probe(backend: Backend, start: Sequence, end: Sequence, steps: int, i: int) -> Fraction:
    """Largest difference quotient ``|hhat^i(x_{k+1}) - hhat^i(x_k)| / h`` along a segment."""
    start, end = vec(start), vec(end)
    diff = tuple(b - a for a, b in zip(start, end))
    h = Fraction(1, steps)
    values = [backend.profile(_axpy(start, h * k, diff))[i] for k in range(steps + 1)]
    return max(abs(b - a) / h for a, b in zip(values, values[1:]))


@dataclass
class ExampleReport:
    lam: int
    mu: int
    a: int
    b: int
    c: int
    values: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "a": self.a, "b": self.b, "c": self.c, "intermediate": self.values}


def example_invariants(lam: int, mu: int, direct_toric: bool = False, neighborhood_samples: int = 60) -> ExampleReport:
    """Invariants of ``L = p*(lam E + F) + q*H`` with ``A = p*(E + mu F) + q*H`` on ``F1 x P1``.

    * ``b``: since ``q*H`` is ample, ``B+(L)`` is the preimage of ``B+`` of the
      surface factor, which has dimension ``b(lam E + F) + 1``.
    * ``c``: Künneth profiles of factor backends, sampled on a neighbourhood.
    * ``a``: ``L`` restricted to a general ``Y in |A|`` is ample off the curve
      ``D = Y ∩ p^{-1}(E)``, whose degree is computed on ``p^{-1}(E) = P1 x P1``.
    """
    for name, v in (("lambda", lam), ("mu", mu)):
        if not isinstance(v, int) or v < 2:
            raise PreconditionError(f"{name} must be an integer >= 2, got {v!r}")
    f1 = fixtures.get("F1").model
    quadric = fixtures.get("P1xP1").model
    E, F = (1, 0), (0, 1)
    L1, A1 = (lam, 1), (1, mu)
    L, A = (lam, 1, 1), (1, mu, 1)
    prod = ProductBackend(SurfaceBackend(f1), ToricBackend(fixtures.get("P1")))
    values: dict = {}

    if not prod.is_ample(A):
        raise PreconditionError("A is not ample")
    dec = surface.zariski(f1, L1)
    values["zariskiPositive"] = [format_rational(x) for x in dec.positive]
    values["zariskiNegative"] = [
        {"curve": [format_rational(x) for x in c], "coefficient": format_rational(a)} for c, a in dec.negative
    ]
    values["volSurfaceFactor"] = format_rational(surface.vol(f1, L1))
    values["surfaceProfile"] = AsymptoticProfile(2, surface.hhat_profile(f1, L1)).to_json()
    values["bSurfaceFactor"] = surface.b_invariant(f1, L1)
    b = values["bSurfaceFactor"] + 1

    lp = prod.profile(L)
    values["kunnethProfile"] = lp.to_json()
    values["volume"] = format_rational(lp[0])
    values["isAmple"] = prod.is_ample(L)
    nbhd = ball_samples(L, Fraction(1, 10), neighborhood_samples)
    top_seen = [0] * 4
    for x in nbhd:
        p = prod.profile(x)
        for i in range(4):
            top_seen[i] += p[i] > 0
    values["neighborhoodSamples"] = len(nbhd)
    values["neighborhoodNonvanishingCounts"] = top_seen
    # The center is the first sample, so a count > 0 in degree i means hhat^i
    # is nonzero at [L] itself or arbitrarily close; zero counts mean vanishing
    # on the whole sampled ball.
    c = max((i for i in range(1, 4) if top_seen[i]), default=0)
    values["cSurfaceFactor"] = surface.c_invariant(f1, L1)

    # B = p^{-1}(E) = E x P1 ~ P1 x P1 with coordinates (degree on E, degree on P1).
    L_on_B = (f1.dot(L1, E), 1)
    A_on_B = (f1.dot(A1, E), 1)
    degree = quadric.dot(L_on_B, A_on_B)
    values["restrictionToB"] = {"L": [format_rational(x) for x in L_on_B], "A": [format_rational(x) for x in A_on_B]}
    values["degreeOnD"] = format_rational(degree)
    a = 1 if degree > 0 else 2
    if values["isAmple"]:
        a = 0

    if direct_toric:
        direct = ToricBackend(fixtures.get("F1xP1")).profile(L)
        values["directToricProfile"] = direct.to_json()
        values["kunnethMatchesToric"] = direct == lp
    return ExampleReport(lam, mu, a, b, c, values)
