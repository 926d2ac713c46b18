import cmath

import numpy as np
import pytest

from classop import errors
from classop.grids import HalfStepSet
from classop.maps import (MapModel, Regime, alternating_model, classify_samples, eval_closed_form,
                          magnus_conic, qexp_model, quadratic_model, symmetric_data)

RNG = np.random.default_rng(7)


def test_classify_examples():
    m = classify_samples([1, 0, 1, 4])
    assert m.regime is Regime.QUADRATIC
    assert m.A == 2 and m.B == pytest.approx(2)
    p = m.progression()
    assert (p.a, p.b, p.c) == pytest.approx((1, 0, 0))

    m = classify_samples([-1, 1, -1, 1])
    assert m.regime is Regime.ALTERNATING
    assert m.A == -2 and m.B == pytest.approx(0)
    assert m.progression().a == pytest.approx(1)

    m = classify_samples([0.5, 1, 2, 4])
    assert m.regime is Regime.QEXP
    assert m.A == pytest.approx(2.5) and m.B == pytest.approx(0)
    assert m.q == pytest.approx(2)
    p = m.progression()
    assert (p.a, p.b, p.c) == pytest.approx((1, 0, 0))


def test_classify_errors():
    with pytest.raises(errors.DegenerateSamples):
        classify_samples([3, 1, 1, 2])
    with pytest.raises(errors.AlternatingViolation) as exc:
        classify_samples([0, 1, 2, -1])
    assert exc.value.index == 0
    with pytest.raises(errors.InconsistentSamples):
        classify_samples([1, 0, 1, 4, 10])


def test_eval_closed_form_examples():
    assert eval_closed_form(quadratic_model(1, 0, 0), 0, 3) == pytest.approx(9)
    assert eval_closed_form(alternating_model(2, 1), 0, 5) == pytest.approx(-1)
    assert eval_closed_form(qexp_model(2, 1, 1, 0), 0, 2) == pytest.approx(17 / 4)
    with pytest.raises(errors.UnknownProgression):
        eval_closed_form(quadratic_model(1, 0, 0), 0.25, 1)


def test_symmetric_data_examples():
    q = 3.0
    qh = cmath.sqrt(q)
    e1, e2 = symmetric_data(qexp_model(q, 0.5, 0.5, 0))
    assert e1.allclose(type(e1)([0, qh + 1 / qh]))
    assert e2.allclose(type(e2)([(qh - 1 / qh) ** 2 / 4, 0, 1]))
    e1, e2 = symmetric_data(alternating_model(1.0))
    assert e1.is_zero() and e2.allclose(type(e2)([0, 0, 1]))
    h = 0.7
    # X(s) = s^2 + s/4 with s = t*h
    _, e2 = symmetric_data(quadratic_model(h * h, h / 4, 0, h=h))
    assert e2.allclose(type(e2)([h * h * (4 * h * h - 1) / 64, -h * h / 2, 1]))
    with pytest.raises(errors.RegimeUnsupported):
        symmetric_data(alternating_model(1.0, 0.5))


def test_magnus_conic():
    assert magnus_conic(qexp_model(4, 0.5, 0.5, 0)).Bt == pytest.approx(-1.25)
    c = magnus_conic(alternating_model(1.0))
    assert (c.Bt, c.Dt, c.Et, c.Ct, c.Ft) == pytest.approx((0, 0, 0, 1, 0))
    assert magnus_conic(quadratic_model(1.3, 0.2, 0.5)).Bt == pytest.approx(-1)


def _random_model(regime):
    z = lambda: complex(*RNG.uniform(-4, 4, 2))
    if regime is Regime.QUADRATIC:
        return quadratic_model(z(), z(), z())
    if regime is Regime.ALTERNATING:
        return alternating_model(z(), z())
    while True:
        q = z()
        if 0.3 <= abs(q) <= 3 and abs(abs(q) - 1) >= 0.1:
            return qexp_model(q, z(), z(), z())


@pytest.mark.parametrize("regime", [Regime.QUADRATIC, Regime.ALTERNATING, Regime.QEXP])
def test_viete_neighbours(regime):
    for _ in range(10):
        m = _random_model(regime)
        if regime is Regime.ALTERNATING:
            m = alternating_model(m.progression().a)
        e1, e2 = symmetric_data(m)
        for s in HalfStepSet(m.h, (0.0,), window=4).points(-2, 2):
            nb = m.neighbours(s)
            X, Y, Z = nb["X"], nb["Y"], nb["Z"]
            scale = max(1.0, abs(X) ** 2)
            assert abs(Y + Z - e1(X)) <= 1e-8 * scale
            assert abs(Y * Z - e2(X)) <= 1e-8 * scale


def test_json_round_trip():
    m = qexp_model(1.5 + 0.2j, 1, 2, 3)
    assert MapModel.from_json(m.to_json()) == m
