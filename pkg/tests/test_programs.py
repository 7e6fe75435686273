import numpy as np
import pytest
from fractions import Fraction

from nsmac.channels import (brute_force_success, make_bac, make_noisy_bac,
                            random_channel, tensor_power)
from nsmac.lp import solve
from nsmac.orbits import OrbitSystem
from nsmac.programs import (NsCode, box_ns_residuals, box_success,
                            build_ns_lp_element, build_ns_lp_orbit,
                            build_ns_sum_lp, build_relaxed_lp,
                            check_nssr_inequality, indep_ns_sum, nssr_factor,
                            reconstruct_box, solve_ns, solve_relaxed)

BAC = make_bac()


def test_ns_value_three_quarters():
    val, code = solve_ns(BAC, 1, 2, 2)
    assert abs(val - 0.75) <= 1e-9
    code.validate()


def test_ns_trivial_message_counts():
    assert abs(solve_ns(BAC, 1, 1, 1)[0] - 1.0) <= 1e-9
    assert abs(solve_ns(BAC, 1, 2, 1)[0] - 1.0) <= 1e-9
    assert abs(solve_ns(BAC, 1, 1, 2)[0] - 1.0) <= 1e-9


def test_ns_at_least_classical():
    rng = np.random.default_rng(5)
    for _ in range(10):
        W = random_channel(rng, 2, 2, 3)
        k1, k2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        ns = solve(build_ns_lp_element(W, k1, k2)).value
        cl = brute_force_success(W, k1, k2)
        assert ns >= cl - 1e-9


def test_relaxed_dominates_ns():
    rng = np.random.default_rng(6)
    for _ in range(10):
        W = random_channel(rng, 2, 2, 3)
        k1, k2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        assert solve_relaxed(W, 1, k1, k2) >= solve_ns(W, 1, k1, k2)[0] - 1e-9


def test_orbit_lp_shapes_n1():
    lp = build_ns_lp_orbit(BAC, 1, 2, 2)
    # n=1 orbits are singletons: same size as the element LP
    el = build_ns_lp_element(BAC, 2, 2)
    assert lp.num_vars == el.num_vars
    # the element LP carries its normalization rows; counts line up per family
    assert len(lp.rows) == len(el.rows)


def test_nscode_serialization_roundtrip():
    val, code = solve_ns(BAC, 2, 3, 3)
    text = code.serialize()
    back = NsCode.deserialize(text)
    assert back.value == code.value
    assert np.array_equal(back.r, code.r)
    assert np.array_equal(back.p, code.p)
    assert back.channel_hash == code.channel_hash


def test_reconstruct_box_properties():
    for k1, k2 in [(2, 2), (3, 2), (1, 3)]:
        val, code = solve_ns(BAC, 1, k1, k2)
        box = reconstruct_box(code)
        # conditional distributions normalize
        sums = box.sum(axis=(0, 1, 4, 5))
        assert np.allclose(sums, 1.0, atol=1e-9)
        assert box_ns_residuals(box) <= 1e-9
        assert abs(box_success(box, BAC, 1) - val) <= 1e-9


def test_reconstruct_box_n2():
    val, code = solve_ns(BAC, 2, 4, 4)
    box = reconstruct_box(code)
    assert box_ns_residuals(box) <= 1e-8
    assert abs(box_success(box, BAC, 2) - val) <= 1e-9


def test_indep_seeded_at_least_classical_sum():
    rng = np.random.default_rng(8)
    for _ in range(6):
        W = random_channel(rng, 2, 2, 3)
        k1, k2 = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        v, strat = indep_ns_sum(W, k1, k2)
        strat.validate(k1, k2)
        cl = brute_force_success(W, k1, k2, objective="sum")
        assert v >= cl - 1e-7


def test_ns_sum_lp_upper_bounds_indep():
    rng = np.random.default_rng(9)
    for _ in range(6):
        W = random_channel(rng, 2, 2, 3)
        v, _ = indep_ns_sum(W, 2, 2)
        ub = solve(build_ns_sum_lp(W, 2, 2)).value
        assert ub >= v - 1e-7


def test_nssr_factor_values():
    assert nssr_factor(2, 2) == 0.75
    assert abs(nssr_factor(1, 1) - 1.0) <= 1e-15
    # k = l large: factor tends to 1 - (1 - 1/k)^k / ... stays in (0, 1]
    assert 0 < nssr_factor(5, 3) <= 1


def test_check_nssr_on_bac():
    rep = check_nssr_inequality(BAC, 2, 2, 2, 2)
    assert rep.holds
    assert rep.rhs >= rep.lhs


def test_exact_orbit_lp_on_noisy_channel():
    W = make_noisy_bac(Fraction(1, 10), Fraction(1, 10))
    lp = build_ns_lp_orbit(W, 1, 2, 2, rational=True)
    sol = solve(lp, mode="exact")
    f = solve(build_ns_lp_orbit(W, 1, 2, 2)).value
    assert abs(float(sol.value_exact) - f) <= 1e-9
