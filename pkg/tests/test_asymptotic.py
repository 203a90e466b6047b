import csv
import io
import itertools
import json
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from positivity_lab import asymptotic, fixtures, surface
from positivity_lab.asymptotic import AsymptoticProfile, backend_for, kunneth
from positivity_lab.errors import PreconditionError

F1_T = backend_for("F1", "toric")
F1_S = backend_for("F1", "surface")
QUAD_T = backend_for("P1xP1", "toric")
P1_T = backend_for("P1", "toric")
X3_T = backend_for("F1xP1", "toric")
X3_K = backend_for("F1xP1", "surface")


def test_profile_examples():
    assert QUAD_T.profile((1, -1)).values == (0, 2, 0)
    assert F1_T.profile((2, 1)).values == (1, 1, 0)
    assert P1_T.profile((-3,)).values == (0, 3)
    assert X3_T.profile((2, 1, 1)).values == (3, 3, 0, 0)


def test_profile_validation():
    with pytest.raises(ValueError):
        AsymptoticProfile(2, (1, 2))
    with pytest.raises(ValueError):
        AsymptoticProfile(1, (1, -1))
    with pytest.raises(PreconditionError):
        F1_T.profile((1, 2, 3))
    with pytest.raises(PreconditionError):
        backend_for("F1", "quantum")
    with pytest.raises(PreconditionError):
        backend_for("P1", "surface")


def test_kunneth_examples():
    p = P1_T.profile((1,))
    assert kunneth(p, p).values == (2, 0, 0)
    assert kunneth(p, p) == QUAD_T.profile((1, 1))
    zero = P1_T.profile((0,))
    assert kunneth(F1_S.profile((2, 1)), zero).values == (0, 0, 0, 0)
    # mixed signs: P1(1) x P1(-1) is (1,0) x (0,1)
    assert kunneth(P1_T.profile((1,)), P1_T.profile((-1,))).values == (0, 2, 0)


halves = st.integers(-6, 6).map(lambda k: Q(k, 2))


@given(st.tuples(halves, halves, halves))
@settings(max_examples=40, deadline=None)
def test_kunneth_matches_direct_toric(cls):
    assert X3_K.profile(cls) == X3_T.profile(cls)


@given(st.tuples(halves, halves), st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_profile_homogeneity(cls, p):
    for b in (F1_T, F1_S, QUAD_T):
        assert b.profile(tuple(p * x for x in cls)) == b.profile(cls).scaled(p * p)


@pytest.mark.parametrize("name", ["P2", "P1xP1", "F1", "F2", "F3"])
def test_engines_agree(name):
    t, s = backend_for(name, "toric"), backend_for(name, "surface")
    rank = t.rank
    for cls in itertools.product([Q(k, 2) for k in range(-3, 4)], repeat=rank):
        assert t.profile(cls) == s.profile(cls)
        assert t.is_ample(cls) == s.is_ample(cls)


# --- scans ---------------------------------------------------------------------


def test_scan_example():
    rep = asymptotic.ample_scan(F1_S, (1, 2), (1, 2), Q(1), 4)
    assert rep.t_grid == (0, Q(1, 4), Q(1, 2), Q(3, 4), 1)
    assert rep.first_nonvanishing[:4] == (None,) * 4
    # L - A = 0 is not ample but still has vanishing hhat
    assert rep.profiles[-1].values == (0, 0, 0)
    rep = asymptotic.ample_scan(F1_S, (2, 1), (1, 2), Q(1, 10), 5)
    assert rep.first_nonvanishing == (1,) * 6
    assert not rep.ample_consistent


def test_scan_preconditions():
    with pytest.raises(PreconditionError):
        asymptotic.ample_scan(F1_S, (1, 2), (1, 1), 1, 4)
    with pytest.raises(PreconditionError):
        asymptotic.ample_scan(F1_S, (1, 2), (1, 2), 0, 4)
    with pytest.raises(PreconditionError):
        asymptotic.ample_scan(F1_S, (1, 2), (1, 2), 1, 0)


@given(st.tuples(halves, halves))
@settings(max_examples=40, deadline=None)
def test_scan_soundness(cls):
    # along L - tA with ample L and small t, nothing higher can appear
    A = (1, 2)
    rep = asymptotic.ample_scan(F1_S, cls, A, Q(1, 4), 5)
    if F1_S.is_ample(cls):
        for t, k in zip(rep.t_grid, rep.first_nonvanishing):
            moved = tuple(x - t * a for x, a in zip(cls, A))
            if F1_S.is_ample(moved):
                assert k is None
    for t, p in zip(rep.t_grid, rep.profiles):
        assert p == F1_T.profile(tuple(x - t * a for x, a in zip(cls, A)))


def test_scan_serialization():
    rep = asymptotic.ample_scan(F1_S, (2, 1), (1, 2), Q(1, 4), 2)
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["class"] == ["2", "1"]
    assert doc["rows"][1] == {"t": "1/8", "hhat": rep.profiles[1].to_json(), "firstNonvanishingIndex": 1}
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["t", "hhat0", "hhat1", "hhat2", "firstNonvanishingIndex"]
    assert len(rows) == 4
    assert [Q(x) for x in rows[3][1:4]] == list(rep.profiles[2].values)


# --- ampleness criterion ----------------------------------------------------------


def test_ball_samples_stay_in_ball():
    pts = asymptotic.ball_samples((1, 2), Q(1, 10), 40)
    assert pts[0] == (1, 2) and len(pts) == 40 and len(set(pts)) == 40
    assert all((x - 1) ** 2 + (y - 2) ** 2 <= Q(1, 100) for x, y in pts)
    assert pts == asymptotic.ball_samples((1, 2), Q(1, 10), 40)


def test_serre_examples():
    res = asymptotic.serre_criterion_check(F1_S, (1, 2), Q(1, 10), 30)
    assert res.vanishing and res.witness is None
    res = asymptotic.serre_criterion_check(QUAD_T, (1, -1), Q(1, 10), 30)
    assert not res.vanishing
    assert res.witness.cls == (1, -1) and res.witness.index == 1 and res.witness.value == 2
    assert res.to_json()["witness"]["value"] == "2"
    # boundary class: ample neighbours exist but a witness is always found nearby
    assert not asymptotic.serre_criterion_check(F1_S, (1, 1), Q(1, 10), 30).vanishing
    with pytest.raises(PreconditionError):
        asymptotic.serre_criterion_check(F1_S, (1, 2), 0, 30)


@given(st.tuples(halves, halves))
@settings(max_examples=40, deadline=None)
def test_serre_characterises_ampleness(cls):
    res = asymptotic.serre_criterion_check(F1_S, cls, Q(1, 10), 25)
    assert res.vanishing == F1_S.is_ample(cls)


def test_continuity_probe_bounded():
    # hhat is locally Lipschitz; difference quotients stay bounded as the grid refines
    for i in range(3):
        coarse = asymptotic.continuity_probe(F1_S, (2, 1), (1, 2), 10, i)
        fine = asymptotic.continuity_probe(F1_S, (2, 1), (1, 2), 80, i)
        assert fine <= 2 * coarse + 1
        assert fine < 20


# --- threefold example ----------------------------------------------------------------


@pytest.mark.parametrize(
    "lam, mu, expected",
    [(3, 2, (2, 2, 1)), (2, 3, (1, 2, 1)), (2, 2, (2, 2, 1)), (4, 3, (2, 2, 1)), (3, 4, (1, 2, 1))],
)
def test_example_invariants(lam, mu, expected):
    rep = asymptotic.example_invariants(lam, mu)
    assert (rep.a, rep.b, rep.c) == expected
    assert rep.c <= rep.a <= rep.b
    assert rep.values["degreeOnD"] == str(mu - lam)


def test_example_direct_toric_matches():
    rep = asymptotic.example_invariants(2, 2, direct_toric=True)
    assert rep.values["kunnethMatchesToric"] is True
    assert rep.values["kunnethProfile"] == ["3", "3", "0", "0"]


@pytest.mark.parametrize("lam, mu", [(1, 2), (2, 1), (Q(5, 2), 3), (0, 0)])
def test_example_preconditions(lam, mu):
    with pytest.raises(PreconditionError):
        asymptotic.example_invariants(lam, mu)


def test_parallel_map_is_order_preserving(monkeypatch):
    monkeypatch.setenv("POSITIVITY_LAB_THREADS", "4")
    assert asymptotic.parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
    serial = asymptotic.serre_criterion_check(F1_S, (1, 1), Q(1, 10), 20)
    monkeypatch.setenv("POSITIVITY_LAB_THREADS", "1")
    assert asymptotic.serre_criterion_check(F1_S, (1, 1), Q(1, 10), 20) == serial
