"""Acceptance checks, one per shipped guarantee, each printing a
summary line (bypassing capture) so the run log shows PASS/FAIL at a
glance."""

import math
import sys
from fractions import Fraction

import numpy as np

from property_suites import ALL_SUITES
from table1_data import EXPECTED_HISTOGRAM, census_canonical
from thermoshift import (Sft, classify, elementary_orbits, equilibrium_markov,
                         face_entropy_curve, differentiability_scan,
                         get_potential, rotation_set, symmetry_coefficients,
                         zt_coefficients)

GOLDEN_LOG = math.log((1.0 + math.sqrt(5.0)) / 2.0)
SILVER_LOG = math.log(1.0 + math.sqrt(2.0))
LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
SQ2 = math.sqrt(2.0)


def _report(cap, num, ok, detail):
    line = f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'} - {detail}"
    with cap.disabled():
        print(line, file=sys.stdout, flush=True)


def _run(num, fn, cap):
    try:
        detail = fn()
    except BaseException as e:
        _report(cap, num, False, f"{type(e).__name__}: {e}")
        raise
    _report(cap, num, True, detail)


def test_criterion_1_orbit_census(capfd):
    def check():
        orbits = elementary_orbits(Sft.full(3), 2)
        assert len(orbits) == 148, f"expected 148 orbits, got {len(orbits)}"
        hist = [0] * 9
        for o in orbits:
            hist[o.period - 1] += 1
        assert tuple(hist) == EXPECTED_HISTOGRAM, f"histogram {hist}"
        want = census_canonical()
        for p in range(1, 10):
            got = {"".join(map(str, o.segment)) for o in orbits
                   if o.period == p}
            assert got == want[p], f"period {p} segment sets differ"
        return "148 orbits, histogram (3,3,8,12,18,20,24,36,24), " \
               "segment sets equal up to rotation"
    _run(1, check, capfd)


def test_criterion_2_seven_scalar_cases(capfd):
    def check():
        for name, states in (("fix0", {"00"}), ("fix1", {"11"}),
                             ("alt01", {"01", "10"})):
            res = classify(get_potential(name))
            assert res.case == "VertexPeriodic", (name, res.case)
            _, mu = res.limit[0]
            assert set(mu.state_labels) == states, name
            assert mu.entropy == 0.0, name

        res = classify(get_potential("cob1"))
        assert res.case == "CohomologousToConstant", res.case
        assert res.constant == Fraction(1)
        _, mu = res.limit[0]
        assert abs(mu.entropy - LOG2) <= 1e-10, mu.entropy
        assert all(abs(float(x) - 0.25) <= 1e-10 for x in mu.stationary)

        for name in ("gold0", "gold1"):
            res = classify(get_potential(name))
            assert res.case == "UniqueTransitive", (name, res.case)
            _, mu = res.limit[0]
            assert abs(mu.entropy - GOLDEN_LOG) <= 1e-10, (name, mu.entropy)

        phi = get_potential("twofix")
        res = classify(phi)
        assert res.case == "MultiComponent", res.case
        swept = zt_coefficients(phi, t_max=2.0 ** 14, method="sweep")
        assert max(abs(float(c) - 0.5) for c in swept.coefficients) <= 1e-4, \
            swept.coefficients
        assert symmetry_coefficients(phi, res) == \
            (Fraction(1, 2), Fraction(1, 2))
        return "7/7: three periodic, coboundary at log 2, two golden, " \
               "split pair (1/2, 1/2) numeric and exact"
    _run(2, check, capfd)


def test_criterion_3_hub_shift_parry_data(capfd):
    def check():
        res = classify(get_potential("hubmax"))
        assert res.case == "UniqueTransitive", res.case
        _, mu = res.limit[0]
        assert abs(mu.entropy - SILVER_LOG) <= 1e-10, mu.entropy
        psym = [0.0, 0.0, 0.0]
        for w, blk in zip(mu.stationary, mu.blocks):
            psym[blk[0]] += float(w)
        want_p = (0.25, 0.25, 0.5)
        assert max(abs(a - b) for a, b in zip(psym, want_p)) <= 1e-10, psym
        Psym = np.zeros((3, 3))
        for w, blk in zip(mu.stationary, mu.blocks):
            Psym[blk[0], blk[1]] += float(w)
        Psym /= np.array(psym)[:, None]
        want_P = np.array([[SQ2 - 1, 0.0, 2 - SQ2],
                           [0.0, SQ2 - 1, 2 - SQ2],
                           [1 - SQ2 / 2, 1 - SQ2 / 2, SQ2 - 1]])
        assert np.max(np.abs(Psym - want_P)) <= 1e-10, Psym
        return "UniqueTransitive at log(1+sqrt 2); p = (1/4, 1/4, 1/2); " \
               "kernel matches entrywise"
    _run(3, check, capfd)


def test_criterion_4_three_symbol_sweeps(capfd):
    def check():
        wants = (("threefix_a", (0.5, 0.25, 0.25)),
                 ("threefix_b", (1 / 3, 1 / 3, 1 / 3)),
                 ("threefix_c", (0.5, 0.5, 0.0)))
        for name, want in wants:
            out = zt_coefficients(get_potential(name), t_max=2.0 ** 14,
                                  method="sweep")
            gap = max(abs(float(c) - w) for c, w in zip(out.coefficients, want))
            assert gap <= 1e-4, (name, out.coefficients)
        phi = get_potential("threefix_a")
        for t in (1.0, 5.0):
            mu = equilibrium_markov(phi, t)
            s = math.sqrt(1.0 + 8.0 * math.exp(t))
            want = ((s - 1) / (2 * s), (s + 1) / (4 * s), (s + 1) / (4 * s))
            marg = [0.0, 0.0, 0.0]
            for w, blk in zip(mu.stationary, mu.blocks):
                marg[blk[0]] += float(w)
            gap = max(abs(a - b) for a, b in zip(marg, want))
            assert gap <= 1e-10, (t, marg, want)
        return "sweeps hit (1/2,1/4,1/4), (1/3,1/3,1/3), (1/2,1/2,0); " \
               "closed-form marginals match at t = 1, 5"
    _run(4, check, capfd)


def test_criterion_5_triangle_rotation_set_and_flat_face(capfd):
    def check():
        Phi = get_potential("trivec")
        poly = rotation_set(Phi)
        verts = set(poly.vertices)
        want = {(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                (Fraction(1, 2), Fraction(1))}
        assert verts == want, verts
        curve = face_entropy_curve(Phi, (0, -1))
        for p in curve.points:
            if 0.26 <= p.s <= 0.74:
                assert abs(curve.envelope(p.s) - LOG2) <= 1e-3, p.s
        assert curve.envelope(0.05) < LOG2 - 1e-3
        assert curve.envelope(0.95) < LOG2 - 1e-3
        assert abs(curve.envelope(0.0) - GOLDEN_LOG) <= 1e-6, \
            curve.envelope(0.0)
        rep = differentiability_scan(curve)
        inner = [kk for kk in rep.kinks if 0.0 < kk[0] < 1.0]
        assert inner == [], inner
        return "triangle vertices exact; flat stretch at log 2; " \
               "golden endpoint; zero kinks"
    _run(5, check, capfd)


def test_criterion_6_three_component_kink(capfd):
    def check():
        curve = face_entropy_curve(get_potential("kinkvec"), (0, -1))
        rep = differentiability_scan(curve)
        assert len(rep.kinks) == 1, rep.kinks
        s_kink = rep.kinks[0][0]
        ds = 1.0 / (curve.n_samples - 1)
        assert abs(s_kink - 0.5) <= ds, s_kink
        for s in np.linspace(0.0, 1.0, 101):
            want = LOG2 + 2 * s * (LOG3 - LOG2) if s <= 0.5 \
                else 2 * (1 - s) * LOG3
            assert abs(curve.envelope(float(s)) - want) <= 1e-6, s
        return "exactly one kink, at the middle rotation vector; " \
               "envelope equals both bridging segments"
    _run(6, check, capfd)


def test_criterion_7_property_suites(capfd):
    def check():
        done = []
        for name, fn in ALL_SUITES:
            fn(1000)
            done.append(name)
        return "5 suites x 1000 trials: " + ", ".join(done)
    _run(7, check, capfd)
