import itertools
import json
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from positivity_lab import fixtures, surface
from positivity_lab.errors import ModelError, PreconditionError
from positivity_lab.surface import SurfaceModel

F1 = fixtures.get("F1").model
F2 = fixtures.get("F2").model
QUADRIC = fixtures.get("P1xP1").model
P2 = fixtures.get("P2").model
MODELS = [fixtures.get(n).model for n in ("P2", "P1xP1", "F1", "F2", "F3")]

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def classes_for(model):
    return st.tuples(*[fractions] * model.rank)


def model_and_class():
    return st.sampled_from(MODELS).flatmap(lambda m: st.tuples(st.just(m), classes_for(m)))


# --- model validation ---------------------------------------------------------


def base_doc():
    return F1.to_json()


def test_json_round_trip():
    for m in MODELS:
        assert SurfaceModel.from_json(json.loads(json.dumps(m.to_json()))) == m


@pytest.mark.parametrize(
    "patch, message",
    [
        ({"intersectionForm": [[1, 0], [0, 1]]}, "signature"),
        ({"intersectionForm": [[-1, 1], [2, 0]]}, "symmetric"),
        ({"moriGenerators": [["1", "0"]]}, "does not determine cones"),
        ({"canonicalClass": ["1"]}, "length"),
        ({"veryAmpleWitnesses": [["1", "1"]]}, "not ample"),
        ({"rank": 3}, "rank"),
        ({"basisLabels": ["E"]}, "basisLabels"),
    ],
)
def test_invalid_models(patch, message):
    doc = {**base_doc(), **patch}
    with pytest.raises(ModelError, match=message):
        SurfaceModel.from_json(doc)


def test_missing_key_is_model_error():
    doc = base_doc()
    del doc["moriGenerators"]
    with pytest.raises(ModelError):
        SurfaceModel.from_json(doc)


def test_class_length_checked():
    with pytest.raises(PreconditionError):
        surface.is_nef(F1, (1, 2, 3))


# --- cones ----------------------------------------------------------------------


def test_cone_examples_f1():
    assert surface.is_nef(F1, (1, 1)) and not surface.is_ample(F1, (1, 1))
    assert surface.is_ample(F1, (1, 2))
    assert not surface.is_nef(F1, (2, 1))
    assert surface.is_big(F1, (2, 1))
    assert surface.is_pseff(F1, (1, 0)) and not surface.is_big(F1, (1, 0))
    assert not surface.is_pseff(F1, (-1, 1))
    assert set(F1.nef_cone_generators) == {(Q(0), Q(1)), (Q(1), Q(1))}


@given(model_and_class())
@settings(max_examples=150, deadline=None)
def test_cone_inclusions(mc):
    model, L = mc
    if surface.is_ample(model, L):
        assert surface.is_nef(model, L) and surface.is_big(model, L)
    if surface.is_nef(model, L):
        assert surface.is_pseff(model, L)
        assert model.square(L) >= 0
    if surface.is_big(model, L):
        assert surface.is_pseff(model, L)


# --- Zariski -------------------------------------------------------------------


def test_zariski_examples():
    dec = surface.zariski(F1, (2, 1))
    assert dec.positive == (Q(1), Q(1))
    assert dec.negative == (((Q(1), Q(0)), Q(1)),)
    assert surface.zariski(F1, (1, 2)).negative == ()
    dec = surface.zariski(F2, (3, 1))
    # P = (3 - a) E + F with P.E = 0: -2(3 - a) + 1 = 0
    assert dec.positive == (Q(1, 2), Q(1))
    with pytest.raises(PreconditionError):
        surface.zariski(F1, (-1, 0))


@given(model_and_class())
@settings(max_examples=150, deadline=None)
def test_zariski_properties(mc):
    model, L = mc
    if not surface.is_pseff(model, L):
        return
    dec = surface.zariski(model, L)
    P = dec.positive
    assert surface.is_nef(model, P)
    assert tuple(a + b for a, b in zip(P, dec.negative_class)) == tuple(Q(x) for x in L)
    for c, a in dec.negative:
        assert a > 0 and model.dot(P, c) == 0
    # unique: start from every subset of negative curves
    curves = model.negative_curves
    for k in range(len(curves) + 1):
        for start in itertools.combinations(curves, k):
            again = surface.zariski(model, L, start=start)
            assert again.positive == P and again.negative == dec.negative


def test_zariski_bad_start():
    with pytest.raises(PreconditionError):
        surface.zariski(F1, (2, 1), start=[(1, 1)])


# --- volumes and hhat ------------------------------------------------------------


def test_vol_examples():
    assert surface.vol(F1, (2, 1)) == 1
    assert surface.vol(F1, (1, 2)) == 3
    assert surface.vol(F1, (-1, -1)) == 0
    assert surface.vol(P2, (2,)) == 4
    assert surface.hhat_profile(F1, (2, 1)) == (1, 1, 0)
    assert surface.hhat_profile(QUADRIC, (1, -1)) == (0, 2, 0)
    assert surface.hhat_profile(P2, (-1,)) == (0, 0, 1)
    with pytest.raises(PreconditionError):
        surface.hhat(F1, (1, 1), 3)


@given(model_and_class(), st.integers(1, 6))
@settings(max_examples=100, deadline=None)
def test_homogeneity(mc, p):
    model, L = mc
    pL = tuple(p * Q(x) for x in L)
    assert surface.vol(model, pL) == p * p * surface.vol(model, L)
    assert surface.hhat_profile(model, pL) == tuple(p * p * v for v in surface.hhat_profile(model, L))


@given(model_and_class())
@settings(max_examples=150, deadline=None)
def test_duality_and_sum_rule(mc):
    model, L = mc
    h = surface.hhat_profile(model, L)
    assert h == surface.hhat_profile(model, tuple(-Q(x) for x in L))[::-1]
    assert h[0] - h[1] + h[2] == model.square(L)
    assert all(v >= 0 for v in h)
    if surface.is_nef(model, L):
        assert h[1] == h[2] == 0
    if not surface.is_big(model, L):
        assert h[0] == 0


@given(model_and_class())
@settings(max_examples=60, deadline=None)
def test_vol_is_monotone_on_effective_additions(mc):
    model, L = mc
    for c in model.mori_generators:
        bigger = tuple(Q(x) + y for x, y in zip(L, c))
        assert surface.vol(model, bigger) >= surface.vol(model, L)


# --- invariants ----------------------------------------------------------------


def test_abc_examples():
    A = (1, 2)
    assert (surface.a_invariant(F1, (1, 2), A), surface.b_invariant(F1, (1, 2)), surface.c_invariant(F1, (1, 2))) == (0, 0, 0)
    assert (surface.a_invariant(F1, (2, 1), A), surface.b_invariant(F1, (2, 1)), surface.c_invariant(F1, (2, 1))) == (1, 1, 1)
    assert (surface.a_invariant(F1, (1, 0), A), surface.b_invariant(F1, (1, 0)), surface.c_invariant(F1, (1, 0))) == (1, 2, 1)
    assert surface.c_invariant(F1, (-1, -1)) == 2
    assert surface.a_invariant(F1, (-1, -1), A) == 2
    with pytest.raises(PreconditionError):
        surface.a_invariant(F1, (1, 0), (1, 1))


@given(model_and_class())
@settings(max_examples=200, deadline=None)
def test_invariant_chain(mc):
    model, L = mc
    A = model.very_ample[0]
    a = surface.a_invariant(model, L, A)
    b = surface.b_invariant(model, L)
    c = surface.c_invariant(model, L)
    assert c <= a <= b
    assert ((a, b, c) == (0, 0, 0)) == surface.is_ample(model, L)


@given(model_and_class(), st.sampled_from([Q(1, 10), Q(1, 3), Q(1)]))
@settings(max_examples=100, deadline=None)
def test_hhat_vanishes_above_a_along_ample_line(mc, t):
    # hhat^i(L + tA) = 0 for i > a(L) and small t > 0
    model, L = mc
    A = model.very_ample[0]
    a = surface.a_invariant(model, L, A)
    small = t / 100
    for s in (small, small / 2):
        moved = tuple(Q(x) + s * y for x, y in zip(L, A))
        h = surface.hhat_profile(model, moved)
        assert all(h[i] == 0 for i in range(a + 1, 3))


def test_ample_iff_open_vanishing():
    # hhat^i vanishes for i >= 1 in a neighbourhood exactly when L is ample
    for L in [(1, 2), (1, 1), (2, 1), (1, 0)]:
        L = tuple(Q(x) for x in L)
        ball = [tuple(x + Q(dx, 50) for x, dx in zip(L, d)) for d in itertools.product((-1, 0, 1), repeat=2)]
        vanish = all(surface.hhat_profile(F1, p)[1:] == (0, 0) for p in ball)
        assert vanish == surface.is_ample(F1, L)
