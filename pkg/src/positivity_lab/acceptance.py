"""Exit criteria of the toolkit, runnable from pytest and from ``selftest``.

Each ``criterion_*`` function returns a :class:`CriterionResult`; runtime
limits are part of the verdict.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import asymptotic, fixtures, surface, toric
from .errors import SoundnessError


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        budget = f" / limit {self.limit:.0f}s" if self.limit else ""
        return f"[{verdict}] criterion {self.number}: {self.title} ({self.seconds:.1f}s{budget}) {self.detail}"


def _timed(number: int, title: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok = False
        detail += f"; runtime {dt:.1f}s exceeds {limit}s"
    return CriterionResult(number, title, ok, detail, dt, limit)


def half_integer_grid(bound: int = 4) -> list[tuple[Fraction, Fraction]]:
    """Classes with coordinates in ``{-bound, -bound + 1/2, ..., bound}``."""
    axis = [Fraction(k, 2) for k in range(-2 * bound, 2 * bound + 1)]
    return list(itertools.product(axis, axis))


def criterion_1() -> CriterionResult:
    def body():
        P2 = fixtures.get("P2")
        bad = []
        for k in range(16):
            got = toric.cohomology(P2.fan, P2.divisor([k])).dims
            if got != ((k + 1) * (k + 2) // 2, 0, 0):
                bad.append((k, got))
            if k == 0:
                continue  # O(-0) = O: the dual formula gives 1 but h^2(O) = 0
            got = toric.cohomology(P2.fan, P2.divisor([-k])).dims
            if got != (0, 0, (k - 1) * (k - 2) // 2):
                bad.append((-k, got))
        return not bad, f"mismatches: {bad}" if bad else "31 line bundles exact (O(k), 0<=k<=15; O(-k), 1<=k<=15)"

    return _timed(1, "P2 golden cohomology", 10, body)


def homogeneity_divisors() -> list[tuple[str, toric.ToricDivisor]]:
    out = []
    for k in (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(1, 3), Fraction(1), Fraction(5, 2)):
        out.append(("P2", fixtures.get("P2").divisor([k])))
    axis = (Fraction(-1), Fraction(0), Fraction(1), Fraction(3, 2))
    for name in ("P1xP1", "F1", "F2"):
        fx = fixtures.get(name)
        for x, y in itertools.product(axis, axis):
            out.append((name, fx.divisor([x, y])))
    # divisors given directly by ray coefficients, not via the class basis
    out.append(("F1", toric.ToricDivisor.of(1, -1, 2, 0)))
    out.append(("F2", toric.ToricDivisor.of(0, 1, 1, -1)))
    return out


def criterion_2() -> CriterionResult:
    def body():
        divisors = homogeneity_divisors()
        bad = []
        for name, D in divisors:
            fan = fixtures.get(name).fan
            base = toric.hhat_profile(fan, D)
            for p in range(1, 6):
                scaled = toric.hhat_profile(fan, D * p)
                if scaled != tuple(p ** fan.dim * v for v in base):
                    bad.append((name, D.coefficients, p))
        return not bad, f"{len(divisors)} divisors x p=1..5; failures {bad[:3]}"

    return _timed(2, "homogeneity of hhat (exact)", 60, body)


def convergence_cases():
    F1, P2 = fixtures.get("F1"), fixtures.get("P2")
    return [
        ("F1", "2E+F", F1, (2, 1)),
        ("F1", "3E+F", F1, (3, 1)),
        ("P2", "-H", P2, (-1,)),
        ("F1", "E+F", F1, (1, 1)),
    ]


def convergence_errors(fx: fixtures.Fixture, cls, m_max: int = 50):
    """Per degree, the list of errors ``h^i(mD) d!/m^d - hhat^i(D)`` for ``m = 1..m_max``."""
    d = fx.dim
    D = fx.divisor(cls)
    target = toric.hhat_profile(fx.fan, D)
    errs = [[] for _ in range(d + 1)]
    for m in range(1, m_max + 1):
        dims = toric.cohomology(fx.fan, D * m).dims
        for i in range(d + 1):
            errs[i].append(Fraction(dims[i] * math.factorial(d), m ** d) - target[i])
    return errs


def two_term_constant(err1: Fraction, err2: Fraction) -> Fraction:
    """``|c1| + |c2|`` for the expansion ``err_m = c1/m + c2/m^2`` fitted at ``m = 1, 2``."""
    # err1 = c1 + c2, err2 = c1/2 + c2/4
    c1 = 4 * err2 - err1
    c2 = err1 - c1
    return abs(c1) + abs(c2)


def criterion_3() -> CriterionResult:
    def body():
        bad, notes = [], []
        for name, label, fx, cls in convergence_cases():
            errs = convergence_errors(fx, cls)
            for i, e in enumerate(errs):
                C = two_term_constant(e[0], e[1])
                worst = max(m * abs(x) for m, x in enumerate(e, start=1))
                if worst > C:
                    bad.append((name, label, i, worst, C))
                notes.append(f"{label}/{name} i={i}: C={C}")
        return not bad, ("; ".join(notes) if not bad else f"violations {bad}")

    return _timed(3, "convergence of h^i(mD) d!/m^d to hhat", 120, body)


def agreement_classes():
    axis = [Fraction(k, 2) for k in range(-6, 7)]
    grid = list(itertools.product(axis, [Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(2, 3), Fraction(1), Fraction(2)]))
    cases = [("F1", c) for c in grid] + [("P1xP1", c) for c in grid]
    cases += [("F1", (Fraction(lam), Fraction(1))) for lam in (2, 3, 4)]
    return cases


def criterion_4() -> CriterionResult:
    def body():
        bad = []
        chambers = {"ample": 0, "nef-not-ample": 0, "big-not-nef": 0, "pseff-not-big": 0, "not-pseff": 0}
        cases = agreement_classes()
        for name, cls in cases:
            fx = fixtures.get(name)
            t = toric.hhat_profile(fx.fan, fx.divisor(cls))
            s = surface.hhat_profile(fx.model, cls)
            if t != s:
                bad.append((name, cls, t, s))
            m = fx.model
            if surface.is_ample(m, cls):
                chambers["ample"] += 1
            elif surface.is_nef(m, cls):
                chambers["nef-not-ample"] += 1
            elif surface.is_big(m, cls):
                chambers["big-not-nef"] += 1
            elif surface.is_pseff(m, cls):
                chambers["pseff-not-big"] += 1
            else:
                chambers["not-pseff"] += 1
        F1 = fixtures.get("F1")
        for lam in (2, 3, 4):
            if toric.hhat(F1.fan, F1.divisor([lam, 1]), 1) != (lam - 1) ** 2:
                bad.append(("F1", lam, "hhat^1 != (lam-1)^2"))
        ok = not bad and len(cases) >= 100 and all(chambers.values())
        return ok, f"{len(cases)} classes, chambers {chambers}; mismatches {bad[:3]}"

    return _timed(4, "surface and toric engines agree exactly", 120, body)


def corollary_grid() -> list[tuple[str, tuple[Fraction, Fraction]]]:
    return [(name, c) for name in ("F1", "P1xP1") for c in half_integer_grid(4)]


def criterion_5() -> CriterionResult:
    def body():
        bad = []
        grid = corollary_grid()
        for name, cls in grid:
            backend = asymptotic.SurfaceBackend(fixtures.get(name).model)
            res = asymptotic.serre_criterion_check(backend, cls, Fraction(1, 10), 50)
            if res.vanishing != backend.is_ample(cls):
                bad.append((name, cls, res.vanishing))
        return not bad and len(grid) >= 200, f"{len(grid)} classes, radius 1/10, 50 samples; disagreements {bad[:3]}"

    return _timed(5, "vanishing nearby <=> ample", 120, body)


SCAN_AMPLE = {"F1": (1, 2), "P1xP1": (1, 1)}
SCAN_T_MAX = Fraction(1, 4)
SCAN_STEPS = 20


def criterion_6() -> CriterionResult:
    def body():
        failures, scanned = [], 0
        for name, cls in corollary_grid():
            model = fixtures.get(name).model
            if not surface.is_pseff(model, cls) or surface.is_ample(model, cls):
                continue
            backend = asymptotic.SurfaceBackend(model)
            rep = asymptotic.ample_scan(backend, cls, SCAN_AMPLE[name], SCAN_T_MAX, SCAN_STEPS)
            scanned += 1
            for t, k in zip(rep.t_grid[1:], rep.first_nonvanishing[1:]):
                if k is None:
                    failures.append((name, cls, t))
        return not failures and scanned > 0, f"{scanned} non-ample pseff classes x 20 values of t; failures {failures[:3]}"

    return _timed(6, "perturbations L - tA of non-ample L carry higher cohomology", None, body)


def criterion_7() -> CriterionResult:
    def body():
        bad = []
        for lam, mu in itertools.product((2, 3, 4), repeat=2):
            rep = asymptotic.example_invariants(lam, mu, direct_toric=(lam in (2, 3) and mu == 2))
            expected_a = 2 if lam >= mu else 1
            if (rep.a, rep.b, rep.c) != (expected_a, 2, 1):
                bad.append((lam, mu, rep.a, rep.b, rep.c))
            if "kunnethMatchesToric" in rep.values and not rep.values["kunnethMatchesToric"]:
                bad.append((lam, mu, "kunneth != toric"))
        return not bad, f"(lambda, mu) in {{2,3,4}}^2; Kunneth vs F1xP1 toric for lambda=2,3; failures {bad}"

    return _timed(7, "F1 x P1 example: a, b, c", 300, body)


def chain_triples():
    out = []
    for name in ("P2", "P1xP1", "F1", "F2", "F3"):
        model = fixtures.get(name).model
        if model.rank == 1:
            classes = [(Fraction(k, 2),) for k in range(-8, 9)]
        else:
            axis = [Fraction(k, 2) for k in range(-5, 6)]
            classes = list(itertools.product(axis, axis))
        for L in classes:
            for A in model.very_ample:
                out.append((model, L, A))
    return out


def criterion_8() -> CriterionResult:
    def body():
        bad = []
        triples = chain_triples()
        for model, L, A in triples:
            a, b, c = surface.a_invariant(model, L, A), surface.b_invariant(model, L), surface.c_invariant(model, L)
            if not c <= a <= b:
                bad.append((model.name, L, A, (a, b, c)))
        q = fixtures.get("P1xP1").model
        L, negL, A = (1, -1), (-1, 1), (1, 1)
        remark = (
            surface.c_invariant(q, L) == 1
            and surface.c_invariant(q, negL) == 1
            and max(surface.a_invariant(q, L, A), surface.a_invariant(q, negL, A)) == 2
        )
        ok = not bad and len(triples) >= 400 and remark
        return ok, f"{len(triples)} triples, violations {bad[:3]}; (1,-1) on P1xP1 instance {'holds' if remark else 'FAILS'}"

    return _timed(8, "c <= a <= b chain", None, body)


def soundness_sweep() -> tuple[int, list]:
    """Run finite cohomology over many fixture divisors; collect guard violations."""
    computed, errors = 0, []
    for name in ("P1", "P2", "P1xP1", "F0", "F1", "F2", "F3"):
        fan = fixtures.get(name).fan
        values = (-2, 0, 1, 3) if fan.n_rays > 3 else range(-4, 5)
        for coeffs in itertools.product(values, repeat=fan.n_rays):
            try:
                toric.cohomology(fan, toric.ToricDivisor.of(*coeffs))
                computed += 1
            except SoundnessError as exc:
                errors.append((name, coeffs, str(exc)))
    fan = fixtures.get("F1xP1").fan
    for coeffs in [(0, 0, 0, 0, 0, 0), (1, 2, 0, 0, 1, 0), (0, 2, 0, 0, 1, 0), (-1, -1, -1, -1, -1, -1), (1, -1, 0, 0, 0, -1)]:
        try:
            toric.cohomology(fan, toric.ToricDivisor.of(*coeffs))
            computed += 1
        except SoundnessError as exc:
            errors.append(("F1xP1", coeffs, str(exc)))
    return computed, errors


def criterion_9() -> CriterionResult:
    def body():
        computed, errors = soundness_sweep()
        return not errors, f"{computed} cohomology computations, guard violations {errors[:2]}"

    return _timed(9, "no unbounded cell carries cohomology", None, body)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9)


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        r = crit()
        results.append(r)
        if echo:
            echo(r.line())
    return results
