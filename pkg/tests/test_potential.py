import math
from fractions import Fraction

import pytest

from thermoshift import (CohomologyReport, InvalidArgumentError, PotentialLC,
                         Sft, cohomology_test, scalarize, universal_potential)
from thermoshift.potential import embed_coordinates, embed_direction


def test_block_coverage_is_validated():
    golden = Sft.from_matrix([[1, 1], [1, 0]])
    with pytest.raises(InvalidArgumentError):
        # block 11 is inadmissible on the golden-mean shift
        PotentialLC.from_block_values(golden, 2, {(0, 0): 1, (0, 1): 2,
                                                  (1, 0): 3, (1, 1): 4})
    with pytest.raises(InvalidArgumentError):
        PotentialLC.from_block_values(golden, 2, {(0, 0): 1, (0, 1): 2})
    phi = PotentialLC.from_matrix(golden, [[5, 7], [11, 99]])
    assert set(phi.values) == {(0, 0), (0, 1), (1, 0)}
    with pytest.raises(InvalidArgumentError):
        phi.value((1, 1))


def test_value_uses_leading_window():
    phi = PotentialLC.from_matrix(Sft.full(2), [[1, 2], [3, 4]])
    assert phi.value((0, 1)) == (Fraction(2),)
    assert phi.value((0, 1, 1, 0)) == (Fraction(2),)
    with pytest.raises(InvalidArgumentError):
        phi.value((0, 2))


def test_mode_enforcement():
    full2 = Sft.full(2)
    with pytest.raises(InvalidArgumentError):
        PotentialLC(full2, 1, 1, {(0,): (0.5,), (1,): (0.5,)}, "exact")
    with pytest.raises(InvalidArgumentError):
        PotentialLC(full2, 1, 1, {(0,): (Fraction(1),), (1,): (Fraction(1),)},
                    "float")
    with pytest.raises(InvalidArgumentError):
        PotentialLC(full2, 1, 1, {(0,): (0.0,), (1,): (0.0,)}, "fuzzy")


def test_scalarize_exact_and_float():
    full2 = Sft.full(2)
    Phi = PotentialLC.from_block_values(
        full2, 1, {(0,): (1, 0), (1,): (0, 1)}, m=2)
    s = scalarize(Phi, (Fraction(1, 2), Fraction(-1, 2)))
    assert s.mode == "exact" and s.m == 1
    assert s.value((0,)) == (Fraction(1, 2),)
    assert s.value((1,)) == (Fraction(-1, 2),)
    sf = scalarize(Phi, (0.5, -0.5))
    assert sf.mode == "float"
    assert sf.value((0,)) == (0.5,)
    with pytest.raises(InvalidArgumentError):
        scalarize(Phi, (1, 2, 3))


def test_json_round_trip_preserves_rationals():
    full2 = Sft.full(2)
    phi = PotentialLC.from_block_values(
        full2, 2, {(0, 0): Fraction(1, 3), (0, 1): Fraction(-2, 7),
                   (1, 0): 0, (1, 1): 5})
    again = PotentialLC.from_json(phi.to_json(), full2)
    assert again == phi
    assert again.value((0, 0)) == (Fraction(1, 3),)
    with pytest.raises(InvalidArgumentError):
        PotentialLC.from_json("{oops", full2)
    with pytest.raises(InvalidArgumentError):
        PotentialLC.from_json('{"values": {}}', full2)


def test_universal_potential_and_embedding():
    golden = Sft.from_matrix([[1, 1], [1, 0]])
    uni = universal_potential(golden, 2)
    assert uni.m == 3
    vecs = sorted(uni.values.values())
    assert vecs == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    phi = PotentialLC.from_matrix(golden, [[3, 4], [0, 0]])
    coords = embed_coordinates(phi)
    assert coords == (Fraction(3), Fraction(4), Fraction(0))
    direction = embed_direction(phi)
    assert abs(sum(x * x for x in direction) - 1.0) < 1e-12
    with pytest.raises(InvalidArgumentError):
        embed_direction(PotentialLC.constant(golden, 0))


def test_cohomology_constant_detection():
    full2 = Sft.full(2)
    # all cycle means equal 1
    phi = PotentialLC.from_matrix(full2, [[1, 3], [-1, 1]])
    zero = PotentialLC.constant(full2, 0)
    rep = cohomology_test(phi, zero)
    assert isinstance(rep, CohomologyReport)
    assert rep.cohomologous and rep.constant == Fraction(1)
    assert rep.witness is None and rep.spread == 0.0


def test_cohomology_witness_on_failure():
    full2 = Sft.full(2)
    phi = PotentialLC.from_matrix(full2, [[1, 0], [0, 0]])
    zero = PotentialLC.constant(full2, 0)
    rep = cohomology_test(phi, zero)
    assert not rep.cohomologous and rep.constant is None
    assert rep.witness is not None and rep.spread == 1.0


def test_cohomology_float_tolerance_flag():
    full2 = Sft.full(2)
    eps = 1e-12
    vals = {(0, 0): 1.0 + eps, (0, 1): 3.0, (1, 0): -1.0, (1, 1): 1.0}
    phi = PotentialLC.from_block_values(full2, 2, vals, mode="float")
    zero = PotentialLC.constant(full2, 0.0, mode="float")
    rep = cohomology_test(phi, zero)
    assert rep.cohomologous and rep.tolerance_limited
    assert abs(rep.constant - 1.0) < 1e-9
    assert 0 < rep.spread <= 1e-9


def test_cohomology_requires_matching_shifts():
    phi = PotentialLC.constant(Sft.full(2), 1)
    psi = PotentialLC.constant(Sft.full(3), 1)
    with pytest.raises(InvalidArgumentError):
        cohomology_test(phi, psi)
    Phi2 = PotentialLC.from_block_values(
        Sft.full(2), 1, {(0,): (1, 0), (1,): (0, 1)}, m=2)
    with pytest.raises(InvalidArgumentError):
        cohomology_test(Phi2, PotentialLC.constant(Sft.full(2), 0))


def test_constant_mode_float():
    c = PotentialLC.constant(Sft.full(2), 0.25, k=2, mode="float")
    assert c.mode == "float" and all(v == (0.25,) for v in c.values.values())
    assert math.isclose(float(c.value((1, 0))[0]), 0.25)
