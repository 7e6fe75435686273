import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsmac.channels import make_bac, make_noisy_bac
from nsmac.regions import (Frontier, JointDist, RatePoint,
                           bac_relaxed_closed_form,
                           bac_relaxed_closed_form_frontier, beta_hypothesis,
                           binary_entropy, classical_corner, classical_region,
                           entropy, mutual_informations, one_shot_converse,
                           relaxed_region)

BAC = make_bac()


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert abs(binary_entropy(0.11) - binary_entropy(0.89)) <= 1e-12


def test_mutual_informations_uniform_bac():
    P = JointDist.product([0.5, 0.5], [0.5, 0.5])
    i1, i2, isum = mutual_informations(BAC, P)
    assert abs(i1 - 1.0) <= 1e-12
    assert abs(i2 - 1.0) <= 1e-12
    assert abs(isum - 1.5) <= 1e-12


def test_mutual_informations_nonnegative_and_bounded():
    rng = np.random.default_rng(2)
    for _ in range(20):
        p = rng.dirichlet(np.ones(4)).reshape(2, 2)
        i1, i2, isum = mutual_informations(BAC, JointDist(p))
        assert i1 >= 0 and i2 >= 0 and isum >= 0
        assert isum <= math.log2(3) + 1e-9


def test_classical_region_bac():
    fr = classical_region(BAC, grid=128)
    assert abs(fr.max_sum_rate() - 1.5) <= 1e-3
    # individual rates reach 1
    assert fr.r2_at(0.0) >= 1.0 - 1e-6


def test_relaxed_region_bac():
    fr = relaxed_region(BAC, grid=96)
    assert abs(fr.max_sum_rate() - math.log2(3)) <= 1e-3


def test_relaxed_dominates_classical():
    cl = classical_region(BAC, grid=64)
    rx = relaxed_region(BAC, grid=64)
    assert rx.dominates(cl, tol=1e-6)


def test_bac_closed_form():
    r1, r2, s = bac_relaxed_closed_form(2 / 3)
    assert abs(s - math.log2(3)) <= 1e-12
    assert abs(r1 - binary_entropy(2 / 3)) <= 1e-12
    with pytest.raises(ValueError):
        bac_relaxed_closed_form(0.3)


def test_closed_form_matches_grid():
    cf = bac_relaxed_closed_form_frontier()
    rx = relaxed_region(BAC, grid=96)
    for x, _ in cf.hull[:: max(len(cf.hull) // 12, 1)]:
        assert abs(cf.r2_at(x) - rx.r2_at(x)) <= 2e-3


def test_classical_corner_bac():
    r1, r2 = classical_corner(BAC, grid=64)
    assert abs(r1 + r2 - 1.5) <= 1e-6
    assert r2 >= 1.0 - 1e-6


def test_frontier_csv_format():
    fr = Frontier.from_points([RatePoint(0.0, 1.0), RatePoint(1.0, 0.5),
                               RatePoint(0.5, 0.9)])
    text = fr.to_csv()
    lines = text.strip().split("\n")
    assert lines[0] == "R1,R2"
    assert all(len(l.split(",")) == 2 for l in lines[1:])
    # fixed-R1 sampling
    text2 = fr.to_csv(samples=11)
    assert len(text2.strip().split("\n")) == 12


def test_beta_known_cases():
    # identical hypotheses: beta = 1 - eps
    assert abs(beta_hypothesis([0.3, 0.7], [0.3, 0.7], 0.25) - 0.75) <= 1e-9
    # disjoint supports: the test rejects for free
    assert beta_hypothesis([1.0, 0.0], [0.0, 1.0], 0.0) <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.01, 0.8))
def test_beta_monotone_in_eps(seed, eps):
    rng = np.random.default_rng(seed)
    P0 = rng.dirichlet(np.ones(3))
    P1 = rng.dirichlet(np.ones(3))
    b1 = beta_hypothesis(P0, P1, eps)
    b2 = beta_hypothesis(P0, P1, min(eps + 0.1, 0.95))
    assert b2 <= b1 + 1e-9


def test_one_shot_converse_caps():
    P = JointDist.product([0.5, 0.5], [0.5, 0.5])
    caps0 = one_shot_converse(BAC, P, 0.0)
    infos = mutual_informations(BAC, P)
    assert all(abs(c - i) <= 1e-10 for c, i in zip(caps0, infos))
    # positive eps loosens every bound
    caps = one_shot_converse(BAC, P, 0.05)
    assert all(c >= c0 - 1e-9 for c, c0 in zip(caps, caps0))


def test_noisy_corner_close_to_clean():
    W = make_noisy_bac(1e-4, 1e-4)
    r1, r2 = classical_corner(W, grid=64)
    assert abs((r1 + r2) - 1.5) <= 5e-3
