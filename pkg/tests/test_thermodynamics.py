import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import GOLDEN, LOG_GOLDEN, LOG_SILVER
from thermoshift import (InvalidArgumentError, NotTransitiveError, PotentialLC,
                         Sft, UnderflowError, equilibrium_markov, get_potential,
                         get_shift, parry_measure, pressure)
from thermoshift.thermodynamics import parry_from_matrix

SQ5 = math.sqrt(5.0)
SQ2 = math.sqrt(2.0)


def test_pressure_of_constant_potentials():
    c = PotentialLC.constant(Sft.full(3), Fraction(1, 2))
    for t in (0.0, 0.7, 2.0):
        assert pressure(c, t) == pytest.approx(math.log(3) + 0.5 * t, abs=1e-12)
    zero = PotentialLC.constant(get_shift("golden"), 0)
    assert pressure(zero, 1.0) == pytest.approx(LOG_GOLDEN, abs=1e-12)


def test_pressure_full_shift_closed_form():
    a, b = Fraction(1, 3), Fraction(-1, 2)
    phi = PotentialLC.from_block_values(Sft.full(2), 1, {(0,): a, (1,): b})
    for t in (0.5, 1.0, 3.0):
        want = math.log(math.exp(t * float(a)) + math.exp(t * float(b)))
        assert pressure(phi, t) == pytest.approx(want, abs=1e-12)


def test_pressure_constant_shift_covariance():
    phi = get_potential("gold0")
    shifted = PotentialLC.from_block_values(
        phi.sft, phi.k, {b: v[0] + Fraction(7, 3) for b, v in phi.values.items()})
    for t in (0.5, 2.0):
        assert pressure(shifted, t) == pytest.approx(
            pressure(phi, t) + t * 7.0 / 3.0, abs=1e-10)


def test_equilibrium_is_bernoulli_on_full_shift():
    a, b = 1.0, -1.0
    phi = PotentialLC.from_block_values(
        Sft.full(2), 1, {(0,): a, (1,): b}, mode="float")
    t = 0.8
    mu = equilibrium_markov(phi, t)
    z = math.exp(t * a) + math.exp(t * b)
    p0 = math.exp(t * a) / z
    assert mu.precision == "double"
    assert mu.stationary[0] == pytest.approx(p0, abs=1e-12)
    # Bernoulli: every row of the kernel equals the stationary vector
    assert np.allclose(mu.transition, np.tile(mu.stationary, (2, 1)), atol=1e-12)
    h = -p0 * math.log(p0) - (1 - p0) * math.log(1 - p0)
    assert mu.entropy == pytest.approx(h, abs=1e-12)
    integral = p0 * a + (1 - p0) * b
    assert mu.entropy + t * integral == pytest.approx(mu.pressure, abs=1e-12)
    assert mu.pressure == pytest.approx(math.log(z), abs=1e-12)


def test_parry_measure_golden():
    mu = parry_measure(get_shift("golden"))
    assert mu.entropy == pytest.approx(LOG_GOLDEN, abs=1e-12)
    assert mu.stationary[0] == pytest.approx(GOLDEN / SQ5, abs=1e-12)
    assert mu.transition[0][0] == pytest.approx(1 / GOLDEN, abs=1e-12)
    assert mu.transition[1][0] == pytest.approx(1.0, abs=1e-12)


def test_parry_measure_hub():
    mu = parry_measure(get_shift("hub3"))
    assert mu.entropy == pytest.approx(LOG_SILVER, abs=1e-12)
    assert np.allclose(mu.stationary, [0.25, 0.25, 0.5], atol=1e-12)
    P = mu.transition
    assert P[0][0] == pytest.approx(SQ2 - 1, abs=1e-12)
    assert P[0][1] == pytest.approx(0.0, abs=1e-12)
    assert P[0][2] == pytest.approx(2 - SQ2, abs=1e-12)
    assert P[2][0] == pytest.approx(1 - SQ2 / 2, abs=1e-12)
    assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)


def test_equilibrium_closed_form_three_symbols():
    # transfer matrix with tied diagonal and two feeding entries has an
    # explicit symbol marginal: ((s-1)/2s, (s+1)/4s, (s+1)/4s), s = sqrt(1+8e^t)
    phi = get_potential("threefix_a")
    t = 1.0
    mu = equilibrium_markov(phi, t)
    s = math.sqrt(1.0 + 8.0 * math.exp(t))
    want = ((s - 1) / (2 * s), (s + 1) / (4 * s), (s + 1) / (4 * s))
    marg = [0.0, 0.0, 0.0]
    for w, blk in zip(mu.stationary, mu.blocks):
        marg[blk[0]] += float(w)
    assert marg == pytest.approx(want, abs=1e-10)


def test_low_temperature_escalates_precision():
    mu = equilibrium_markov(get_potential("twofix"), t=40.0)
    assert mu.precision.startswith("mp")
    assert mu.mass((0, 0)) == pytest.approx(0.5, abs=1e-8)
    assert mu.mass((1, 1)) == pytest.approx(0.5, abs=1e-8)
    assert mu.mass((0, 1)) == pytest.approx(0.0, abs=1e-8)
    assert mu.entropy < 1e-6


def test_rotation_vector_of_a_measure():
    mu = parry_measure(Sft.full(2))
    Phi = PotentialLC.from_block_values(
        Sft.full(2), 1, {(0,): (1, 0), (1,): (0, 1)}, m=2)
    assert mu.rotation_vector(Phi) == pytest.approx((0.5, 0.5), abs=1e-12)
    with pytest.raises(InvalidArgumentError):
        mu.mass((0, 0))


def test_parry_from_raw_matrix():
    mu = parry_from_matrix([[1, 1], [1, 0]])
    assert mu.entropy == pytest.approx(LOG_GOLDEN, abs=1e-12)
    assert mu.stationary[0] == pytest.approx(GOLDEN / SQ5, abs=1e-12)


def test_reducible_and_vector_inputs_are_rejected():
    split = Sft.from_matrix([[1, 0], [0, 1]])
    zero = PotentialLC.constant(split, 0)
    with pytest.raises(NotTransitiveError):
        pressure(zero, 1.0)
    with pytest.raises(NotTransitiveError):
        equilibrium_markov(zero, 1.0)
    with pytest.raises(InvalidArgumentError):
        pressure(get_potential("trivec"), 1.0)


def test_extreme_t_underflows_cleanly():
    with pytest.raises(UnderflowError):
        equilibrium_markov(get_potential("twofix"), t=2.0e4)
    with pytest.raises(UnderflowError):
        pressure(get_potential("twofix"), t=2.0e4)
