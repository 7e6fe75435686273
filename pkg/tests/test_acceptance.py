"""Acceptance suite: one test per criterion, named in order.

Criteria 7 and 8 are long-running scans and are gated behind the `long`
marker (`pytest -m long`); everything else runs in the default tier.
"""

import csv
import io
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from nsmac import (ScanConfig, bac_relaxed_closed_form_frontier,
                   brute_force_success, classical_region, concat_scan,
                   make_bac, make_noisy_bac, mutual_informations,
                   relaxed_region, solve_ns, solve_relaxed,
                   zero_error_frontier)
from nsmac.channels import random_channel, tensor_power
from nsmac.concat import corner_rates, induced_channel_explicit, induced_stats
from nsmac.lp import check_value_is_one, solve
from nsmac.orbits import OrbitSystem
from nsmac.programs import (box_ns_residuals, box_success,
                            build_ns_lp_element, build_ns_lp_orbit,
                            build_relaxed_lp, check_nssr_inequality,
                            reconstruct_box)
from nsmac.regions import (JointDist, beta_hypothesis, classical_corner,
                           one_shot_converse)

BAC = make_bac()
NOISY = make_noisy_bac(Fraction(1, 1000), Fraction(1, 1000))


def test_criterion_01_lp_shape_regression():
    t0 = time.time()
    lp = build_ns_lp_orbit(BAC, 2, 4, 4)
    assert (lp.num_vars, len(lp.rows)) == (244, 480)
    assert time.time() - t0 < 1.0
    t0 = time.time()
    lp = build_ns_lp_orbit(BAC, 3, 4, 4)
    assert (lp.num_vars, len(lp.rows)) == (1112, 2054)
    assert time.time() - t0 < 1.0
    t0 = time.time()
    lp = build_ns_lp_orbit(BAC, 7, 42, 42)
    assert (lp.num_vars, len(lp.rows)) == (95592, 162324)
    assert time.time() - t0 < 30.0


def test_criterion_02_bac3_4x5_exact_one():
    t0 = time.time()
    lp = build_ns_lp_orbit(BAC, 3, 4, 5, rational=True)
    chk = check_value_is_one(lp, mode="exact")
    assert chk.status == "certified_exact_one"
    assert chk.value == 1
    assert time.time() - t0 < 60.0
    # implied rate point
    assert math.isclose(math.log2(4) / 3 + math.log2(5) / 3, 1.4406, abs_tol=5e-5)


def test_criterion_03_bac_2x2_three_quarters():
    t0 = time.time()
    sol = solve(build_ns_lp_element(BAC, 2, 2))
    assert abs(sol.value - 0.75) <= 1e-9
    ex = solve(build_ns_lp_element(BAC, 2, 2, rational=True), mode="exact")
    assert ex.value_exact == Fraction(3, 4)
    assert time.time() - t0 < 1.0


def test_criterion_04_bac_regions():
    t0 = time.time()
    cl = classical_region(BAC, grid=256)
    assert abs(cl.max_sum_rate() - 1.5) <= 1e-3
    rx = relaxed_region(BAC, grid=128)
    assert abs(rx.max_sum_rate() - math.log2(3)) <= 1e-4
    cf = bac_relaxed_closed_form_frontier()
    assert abs(cf.max_sum_rate() - rx.max_sum_rate()) <= 1e-3
    # the two paths agree across sampled R1 values
    for x, _ in cf.hull[:: max(len(cf.hull) // 16, 1)]:
        assert abs(cf.r2_at(x) - rx.r2_at(x)) <= 1e-3
    assert time.time() - t0 < 60.0


def test_criterion_05_noisy_bac_corner_and_sum():
    t0 = time.time()
    r1, r2 = classical_corner(NOISY, grid=256)
    assert abs(r1 - 0.4943) <= 2e-3
    assert abs(r2 - 0.9839) <= 2e-3
    fr = classical_region(NOISY, grid=256)
    assert abs(fr.max_sum_rate() - 1.478) <= 2e-3
    assert time.time() - t0 < 300.0


def test_criterion_06_noisy_zero_error_trivial():
    t0 = time.time()
    for n in (1, 2):
        scan = zero_error_frontier(ScanConfig(channel=NOISY, n=n))
        assert not scan.failures
        assert [(p.rate1, p.rate2) for p in scan.points] == [(0.0, 0.0)]
    assert time.time() - t0 < 120.0


@pytest.mark.long
def test_criterion_07_bac7_anchors():
    sy = OrbitSystem(BAC, 7)
    lp = build_ns_lp_orbit(BAC, 7, 42, 42, system=sy)
    chk = check_value_is_one(lp, tol=1e-7, mode="float", solver="highs")
    assert chk.is_one
    val, _ = solve_ns(BAC, 7, 44, 44, system=sy, solver="highs")
    assert abs(val - 0.9581) <= 1e-3
    lp = build_relaxed_lp(BAC, 7, 44, 44, level="orbit", system=sy)
    chk = check_value_is_one(lp, tol=1e-7, mode="float", solver="highs")
    assert chk.is_one


@pytest.mark.long
def test_criterion_08_concat_scan_noisy_n5():
    ks = range(10, 17)  # diagonal neighborhood around the best cells
    fr = concat_scan(NOISY, 5, ks, ks, solver="highs")
    assert fr.max_sum_rate() >= 1.49


def test_criterion_09_orbit_equals_element():
    rng = np.random.default_rng(20240901)
    for _ in range(20):
        W = random_channel(rng, 2, 2, int(rng.integers(2, 4)))
        n = int(rng.integers(1, 3))
        k1, k2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        Wn = tensor_power(W, n) if n > 1 else W
        ve = solve(build_ns_lp_element(Wn, k1, k2)).value
        vo = solve(build_ns_lp_orbit(W, n, k1, k2)).value
        assert abs(ve - vo) <= 1e-7
        vre = solve(build_relaxed_lp(Wn, 1, k1, k2, level="element")).value
        vro = solve(build_relaxed_lp(W, n, k1, k2, level="orbit")).value
        assert abs(vre - vro) <= 1e-7


def test_criterion_10_program_invariants():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(25):
        W = random_channel(rng, 2, 2, int(rng.integers(2, 4)))
        k1, k2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        ns = solve(build_ns_lp_element(W, k1, k2)).value
        # NS at least classical
        assert ns >= brute_force_success(W, k1, k2) - 1e-9
        checked += 1
        # relaxed dominates NS
        rx = solve(build_relaxed_lp(W, 1, k1, k2, level="element")).value
        assert rx >= ns - 1e-9
        checked += 1
        # monotone nonincreasing in each message count
        ns_more = solve(build_ns_lp_element(W, k1 + 1, k2)).value
        assert ns_more <= ns + 1e-9
        checked += 1
        # supermultiplicative under tensoring
        v2 = solve(build_ns_lp_orbit(W, 2, k1 * k1, k2 * k2)).value
        assert v2 >= ns * ns - 1e-7
        checked += 1
    assert checked >= 100


def test_criterion_11_error_sandwich():
    rng = np.random.default_rng(11)
    for _ in range(20):
        W = random_channel(rng, 2, 2, int(rng.integers(2, 4)))
        k1, k2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        e = 1 - brute_force_success(W, k1, k2)
        e_sum = 1 - brute_force_success(W, k1, k2, objective="sum")
        assert e_sum <= e + 1e-12
        assert e <= 2 * e_sum + 1e-12


def test_criterion_12_box_reconstruction():
    rng = np.random.default_rng(12)
    channels = [BAC, NOISY] + [random_channel(rng, 2, 2, 3) for _ in range(4)]
    for W in channels:
        for k1, k2 in [(2, 2), (2, 3), (1, 2)]:
            val, code = solve_ns(W, 1, k1, k2)
            box = reconstruct_box(code)
            assert box_ns_residuals(box) <= 1e-9
            assert abs(box_success(box, W, 1) - val) <= 1e-9
    # structured and explicit induced channels agree at n <= 2
    for n in (1, 2):
        val, code = solve_ns(BAC, n, 2, 2)
        box = reconstruct_box(code)
        st = induced_stats(code)
        T = induced_channel_explicit(box, BAC, n)
        assert np.abs(T - st.transition_matrix()).max() <= 1e-9


def test_criterion_13_beta_and_converse():
    rng = np.random.default_rng(13)
    for _ in range(20):
        m = int(rng.integers(2, 6))
        P = rng.dirichlet(np.ones(m))
        eps = float(rng.uniform(0.01, 0.6))
        assert abs(beta_hypothesis(P, P, eps) - (1 - eps)) <= 1e-9
    P = JointDist.product([0.5, 0.5], [0.5, 0.5])
    caps = one_shot_converse(BAC, P, 0.0)
    infos = mutual_informations(BAC, P)
    for c, i in zip(caps, infos):
        assert abs(c - i) <= 1e-10


def test_criterion_14_nssr_inequality():
    rng = np.random.default_rng(14)
    channels = [BAC] + [random_channel(rng, 2, 2, int(rng.integers(2, 4)))
                        for _ in range(10)]
    for W in channels:
        for k1, k2, l1, l2 in [(2, 2, 2, 2), (3, 2, 2, 3), (2, 3, 3, 2)]:
            rep = check_nssr_inequality(W, k1, k2, l1, l2)
            assert rep.holds
