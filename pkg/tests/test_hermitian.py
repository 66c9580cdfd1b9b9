import random
from fractions import Fraction

import pytest

from bianchitess.errors import NotUnimodular, ZeroVector
from bianchitess.hermitian import (
    ColumnVector,
    FormSpaceVector,
    HermitianForm,
    UnimodularMatrix,
    evaluate,
    form_from_generators,
    gram_z4,
    is_positive_definite,
    pull_back,
    rank_one,
    trace_pairing,
)
from bianchitess.qfield import make_context
from oracles import complex_value, gram_by_polarization, quad, random_element, random_unimodular

FIELDS = [-1, -2, -3, -5, -7, -14, -15, -19, -23]


def random_form(ctx, rng):
    return HermitianForm(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                         ctx(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                             Fraction(rng.randint(-9, 9), rng.randint(1, 4))),
                         Fraction(rng.randint(-9, 9), rng.randint(1, 4)), ctx)


def random_vector(ctx, rng, size=4):
    while True:
        v = ColumnVector(random_element(ctx, rng, size), random_element(ctx, rng, size))
        if not v.is_zero():
            return v


def test_evaluate_examples():
    ctx = make_context(-14)
    phi = HermitianForm.identity(ctx)
    assert evaluate(phi, ColumnVector.of(ctx, 1, 0)) == 1
    assert evaluate(phi, ColumnVector.of(ctx, 1, 1)) == 2
    for b2 in (Fraction(0), Fraction(1, 3), Fraction(-7, 5)):
        form = HermitianForm(1, ctx.from_sqrtd(Fraction(-1, 2), b2), 1, ctx)
        assert evaluate(form, ColumnVector.of(ctx, 1, 1)) == 1


@pytest.mark.parametrize("d", FIELDS)
def test_evaluate_matches_complex_embedding(d):
    ctx = make_context(d)
    rng = random.Random(d)
    for _ in range(30):
        phi, v = random_form(ctx, rng), random_vector(ctx, rng)
        assert float(evaluate(phi, v)) == pytest.approx(complex_value(phi, v.p, v.r), rel=1e-9, abs=1e-9)


def test_rank_one_examples():
    ctx = make_context(-14)
    assert rank_one(ColumnVector.of(ctx, 1, 0)) == (1, 0, 0, 0)
    assert rank_one(ColumnVector.of(ctx, 1, 1)) == (1, 1, 0, 1)
    with pytest.raises(ZeroVector):
        rank_one(ColumnVector.of(ctx, 0, 0))


@pytest.mark.parametrize("d", [-1, -3, -14])
def test_rank_one_unit_invariant(d):
    ctx = make_context(d)
    rng = random.Random(5)
    for _ in range(20):
        v = random_vector(ctx, rng)
        for u in ctx.units:
            assert rank_one(v.scale(u)) == rank_one(v)


def test_trace_pairing_examples():
    ctx = make_context(-14)
    phi = HermitianForm.identity(ctx)
    assert trace_pairing(phi, FormSpaceVector(1, 0, 0, 1)) == 2
    assert trace_pairing(phi, FormSpaceVector(0, 0, 0, 0)) == 0
    with pytest.raises(ValueError):
        trace_pairing(FormSpaceVector(1, 0, 0, 0), FormSpaceVector(1, 0, 0, 0))


@pytest.mark.parametrize("d", FIELDS)
def test_pairing_with_rank_one_is_evaluation(d):
    # oracle: the complex embedding expands both sides independently
    ctx = make_context(d)
    rng = random.Random(100 + d)
    for _ in range(100 // len(FIELDS) + 1):
        phi, v = random_form(ctx, rng), random_vector(ctx, rng)
        got = trace_pairing(phi, rank_one(v))
        assert got == evaluate(phi, v)
        assert float(got) == pytest.approx(complex_value(phi, v.p, v.r), rel=1e-9, abs=1e-9)


def test_pairing_bilinear():
    ctx = make_context(-7)
    rng = random.Random(3)
    for _ in range(20):
        f, g, h = (random_form(ctx, rng) for _ in range(3))
        s = Fraction(rng.randint(-5, 5), 3)
        assert trace_pairing(f + g * s, h) == trace_pairing(f, h) + s * trace_pairing(g, h)
        assert trace_pairing(f, g) == trace_pairing(g, f)


def test_gram_identity_d14():
    ctx = make_context(-14)
    assert gram_z4(HermitianForm.identity(ctx)) == [[1, 0, 0, 0], [0, 14, 0, 0], [0, 0, 1, 0], [0, 0, 0, 14]]


def test_gram_identity_d3():
    ctx = make_context(-3)
    h = Fraction(1, 2)
    assert gram_z4(HermitianForm.identity(ctx)) == [[1, h, 0, 0], [h, 1, 0, 0], [0, 0, 1, h], [0, 0, h, 1]]


@pytest.mark.parametrize("d", FIELDS)
def test_gram_matches_polarization(d):
    ctx = make_context(d)
    rng = random.Random(200 + d)
    for _ in range(12):
        phi = random_form(ctx, rng)
        G = gram_z4(phi)
        assert G == gram_by_polarization(lambda x: evaluate(phi, ColumnVector.from_ints(ctx, x)))
        assert all(G[i][j] == G[j][i] for i in range(4) for j in range(4))
        v = random_vector(ctx, rng)
        assert quad(G, v.int_coords()) == evaluate(phi, v)


def test_pull_back_examples():
    ctx = make_context(-14)
    phi = HermitianForm(2, ctx(Fraction(1, 3), 1), 5, ctx)
    assert pull_back(UnimodularMatrix.identity(ctx), phi) == phi
    swap = UnimodularMatrix([[0, 1], [1, 0]], ctx)
    assert pull_back(swap, phi) == HermitianForm(5, phi.b.conj(), 2, ctx)
    with pytest.raises(NotUnimodular):
        pull_back(UnimodularMatrix([[2, 0], [0, 1]], ctx), phi)


@pytest.mark.parametrize("d", FIELDS)
def test_pull_back_action(d):
    ctx = make_context(d)
    rng = random.Random(300 + d)
    for _ in range(8):
        phi = random_form(ctx, rng)
        g1, g2 = random_unimodular(ctx, rng), random_unimodular(ctx, rng)
        composed = pull_back(g1 @ g2, phi)
        assert composed == pull_back(g2, pull_back(g1, phi))
        for _ in range(20):
            v = random_vector(ctx, rng)
            assert evaluate(pull_back(g1, phi), v) == evaluate(phi, g1 @ v)
            assert evaluate(composed, v) == evaluate(phi, g1 @ (g2 @ v))


def test_positive_definite_examples():
    ctx = make_context(-14)
    assert is_positive_definite(HermitianForm.identity(ctx))
    assert not is_positive_definite(HermitianForm(1, ctx.one, 1, ctx))
    # search forms with real part -1/2: definite iff |beta|^2 < 1
    for b2 in (Fraction(0), Fraction(1, 10), Fraction(1, 5), Fraction(1, 4), Fraction(1, 3)):
        beta = ctx.from_sqrtd(Fraction(-1, 2), b2)
        assert is_positive_definite(HermitianForm(1, beta, 1, ctx)) == (beta.norm() < 1)


@pytest.mark.parametrize("d", [-2, -7, -14])
def test_positive_definite_implies_positive_values(d):
    ctx = make_context(d)
    rng = random.Random(400 + d)
    checked = 0
    while checked < 10:
        phi = random_form(ctx, rng)
        if not is_positive_definite(phi):
            continue
        checked += 1
        assert all(evaluate(phi, random_vector(ctx, rng)) > 0 for _ in range(30))


def test_form_from_generators_reconstructs():
    ctx = make_context(-5)
    phi = HermitianForm(Fraction(3, 2), ctx(Fraction(1, 3), Fraction(-1, 4)), 2, ctx)
    rng = random.Random(0)
    gens = []
    while len(gens) < 6:
        v = random_vector(ctx, rng)
        val = evaluate(phi, v)
        if val:
            gens.append(rank_one(v).scaled(1 / val))
    assert form_from_generators(ctx, gens) == phi
    assert form_from_generators(ctx, gens[:2]) is None
